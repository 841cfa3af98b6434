"""Quaternion arithmetic and the hypercomplex structure of R^{4n}.

The ambient space is R^{4n} identified with H^n as a *right* H-module:
real slot 4*q + c (c in 0..3) holds the (1, i, j, k)-component of
quaternionic coordinate q. The three complex structures are the right
multiplications

    I = R_{-i},   J = R_{-j},   K = R_{-k},

which anticommute, satisfy I J = K as operator composition, and are
isometries of the Euclidean metric. Sp(n) acts by quaternionic matrices
on the *left*, so it commutes with I, J, K.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError
from .tolerances import EPS_ORTH, EPS_UNIT

__all__ = [
    "Quaternion",
    "qmul",
    "CompatibleStructure",
    "AdmissibleBasis",
    "I",
    "J",
    "K",
    "ambient_dim",
    "quaternionic_dim",
    "apply_structure",
    "structure_matrix",
    "hermitian_product",
    "hermitian_angle",
    "characteristic_angle",
    "rotate_basis",
    "qarr_mul",
    "qarr_conj",
    "real_from_quaternion_vectors",
    "left_mult_matrix",
]


@dataclass(frozen=True)
class Quaternion:
    """A quaternion re + im_i*i + im_j*j + im_k*k."""

    re: float = 0.0
    im_i: float = 0.0
    im_j: float = 0.0
    im_k: float = 0.0

    def as_array(self) -> np.ndarray:
        return np.array([self.re, self.im_i, self.im_j, self.im_k], dtype=float)

    @staticmethod
    def from_array(a) -> "Quaternion":
        a = np.asarray(a, dtype=float)
        return Quaternion(a[0], a[1], a[2], a[3])

    def conj(self) -> "Quaternion":
        return Quaternion(self.re, -self.im_i, -self.im_j, -self.im_k)

    def norm(self) -> float:
        return float(np.sqrt(self.re**2 + self.im_i**2 + self.im_j**2 + self.im_k**2))

    def imag(self) -> "Quaternion":
        return Quaternion(0.0, self.im_i, self.im_j, self.im_k)

    def __add__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(self.re + other.re, self.im_i + other.im_i,
                          self.im_j + other.im_j, self.im_k + other.im_k)

    def __sub__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(self.re - other.re, self.im_i - other.im_i,
                          self.im_j - other.im_j, self.im_k - other.im_k)

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.re, -self.im_i, -self.im_j, -self.im_k)

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return qmul(self, other)
        return Quaternion(self.re * other, self.im_i * other,
                          self.im_j * other, self.im_k * other)

    def __rmul__(self, other):
        # scalar * quaternion; quaternion * quaternion goes through __mul__
        return Quaternion(self.re * other, self.im_i * other,
                          self.im_j * other, self.im_k * other)

    def isclose(self, other: "Quaternion", tol: float = 1e-12) -> bool:
        return bool(np.all(np.abs(self.as_array() - other.as_array()) <= tol))


def qmul(p: Quaternion, q: Quaternion) -> Quaternion:
    """Hamilton product, i^2 = j^2 = k^2 = -1 and i j = -j i = k."""
    return Quaternion(
        p.re * q.re - p.im_i * q.im_i - p.im_j * q.im_j - p.im_k * q.im_k,
        p.re * q.im_i + p.im_i * q.re + p.im_j * q.im_k - p.im_k * q.im_j,
        p.re * q.im_j - p.im_i * q.im_k + p.im_j * q.re + p.im_k * q.im_i,
        p.re * q.im_k + p.im_i * q.im_j - p.im_j * q.im_i + p.im_k * q.re,
    )


# --- array quaternion helpers (last axis of length 4 holds 1,i,j,k parts) ---

def qarr_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Hamilton product of (...,4) quaternion arrays, broadcasting."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    a0, a1, a2, a3 = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
    b0, b1, b2, b3 = b[..., 0], b[..., 1], b[..., 2], b[..., 3]
    return np.stack(
        [
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        ],
        axis=-1,
    )


def qarr_conj(a: np.ndarray) -> np.ndarray:
    """Conjugate of a (...,4) quaternion array."""
    out = np.array(a, dtype=float, copy=True)
    out[..., 1:] *= -1.0
    return out


def ambient_dim(x: np.ndarray) -> int:
    d = np.asarray(x).shape[-1]
    if d % 4 != 0 or d == 0:
        raise DimensionError(f"ambient dimension {d} is not a positive multiple of 4")
    return d


def quaternionic_dim(x: np.ndarray) -> int:
    return ambient_dim(x) // 4


def real_from_quaternion_vectors(cols: np.ndarray) -> np.ndarray:
    """Real row vectors from quaternionic column vectors.

    `cols` has shape (n, m, 4): m vectors in H^n. Returns (m, 4n) with the
    4q+c coordinate layout.
    """
    cols = np.asarray(cols, dtype=float)
    n, m, _ = cols.shape
    return cols.transpose(1, 0, 2).reshape(m, 4 * n)


# structure action on quaternionic blocks: X -> X * (-i) etc., per block
# (x0,x1,x2,x3) = x0 + x1 i + x2 j + x3 k

def _blocks(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return x.reshape(x.shape[:-1] + (x.shape[-1] // 4, 4))


def _unblocks(b: np.ndarray) -> np.ndarray:
    return b.reshape(b.shape[:-2] + (b.shape[-2] * 4,))


def _apply_i(b):
    return np.stack([b[..., 1], -b[..., 0], -b[..., 3], b[..., 2]], axis=-1)


def _apply_j(b):
    return np.stack([b[..., 2], b[..., 3], -b[..., 0], -b[..., 1]], axis=-1)


def _apply_k(b):
    return np.stack([b[..., 3], -b[..., 2], b[..., 1], -b[..., 0]], axis=-1)


@dataclass(frozen=True)
class CompatibleStructure:
    """A = a I + b J + c K with a^2 + b^2 + c^2 = 1; satisfies A^2 = -Id."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        coeffs = np.array([self.a, self.b, self.c], dtype=float)
        if abs(coeffs @ coeffs - 1.0) > EPS_UNIT:
            raise ValueError(
                f"coefficient vector {coeffs} is not unit (|a|^2+|b|^2+|c|^2 != 1)"
            )

    def coefficients(self) -> np.ndarray:
        return np.array([self.a, self.b, self.c], dtype=float)


I = CompatibleStructure(1.0, 0.0, 0.0)
J = CompatibleStructure(0.0, 1.0, 0.0)
K = CompatibleStructure(0.0, 0.0, 1.0)


def apply_structure(A: CompatibleStructure, x: np.ndarray) -> np.ndarray:
    """Apply A = a I + b J + c K to vectors (last axis 4n); norm preserving."""
    b4 = _blocks(x)
    out = np.zeros_like(b4)
    if A.a != 0.0:
        out += A.a * _apply_i(b4)
    if A.b != 0.0:
        out += A.b * _apply_j(b4)
    if A.c != 0.0:
        out += A.c * _apply_k(b4)
    return _unblocks(out)


def structure_matrix(A: CompatibleStructure, n: int) -> np.ndarray:
    """Dense 4n x 4n matrix of A (block sparse by construction)."""
    return apply_structure(A, np.eye(4 * n)).T


def hermitian_product(x: np.ndarray, y: np.ndarray) -> Quaternion:
    """H-valued Hermitian product X.Y = <X,Y> + <X,IY>i + <X,JY>j + <X,KY>k.

    Positive definite; Y.X is the conjugate of X.Y, and right scalar
    multiplication moves through as (Xp).(Yq) = conj(p) (X.Y) q.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise DimensionError(f"shape mismatch {x.shape} vs {y.shape}")
    ambient_dim(x)
    return Quaternion(
        float(x @ y),
        float(x @ apply_structure(I, y)),
        float(x @ apply_structure(J, y)),
        float(x @ apply_structure(K, y)),
    )


def hermitian_angle(x: np.ndarray, y: np.ndarray) -> float:
    """Angle psi in [0, pi/2] with cos psi = |X.Y| / (|X| |Y|)."""
    nx = float(np.linalg.norm(x))
    ny = float(np.linalg.norm(y))
    if nx == 0.0 or ny == 0.0:
        raise ValueError("hermitian_angle of a zero vector")
    c = hermitian_product(x, y).norm() / (nx * ny)
    return float(np.arccos(np.clip(c, -1.0, 1.0)))


def characteristic_angle(x: np.ndarray, y: np.ndarray) -> float:
    """Angle phi with cos phi = cos^4 psi; the Euclidean angle between the
    characteristic lines spanned by X and Y over H."""
    c = np.cos(hermitian_angle(x, y))
    return float(np.arccos(np.clip(c**4, -1.0, 1.0)))


@dataclass(frozen=True, eq=False)
class AdmissibleBasis:
    """SO(3) rotation relating (I,J,K) to another admissible triple."""

    rotation: np.ndarray

    def __post_init__(self):
        C = np.asarray(self.rotation, dtype=float)
        if C.shape != (3, 3):
            raise ValueError(f"rotation must be 3x3, got {C.shape}")
        if np.max(np.abs(C.T @ C - np.eye(3))) > EPS_ORTH:
            raise ValueError("rotation is not orthogonal within tolerance")
        if np.linalg.det(C) < 0.0:
            raise ValueError("rotation has determinant -1; not in SO(3)")
        object.__setattr__(self, "rotation", C)


def rotate_basis(basis) -> tuple[CompatibleStructure, CompatibleStructure, CompatibleStructure]:
    """New admissible triple (I', J', K') = (I, J, K) C.

    Column alpha of C holds the coefficients of the alpha-th new structure;
    the returned triple again satisfies the Hamilton relations.
    """
    if not isinstance(basis, AdmissibleBasis):
        basis = AdmissibleBasis(np.asarray(basis, dtype=float))
    C = basis.rotation
    return tuple(CompatibleStructure(*C[:, alpha]) for alpha in range(3))


def left_mult_matrix(m: np.ndarray) -> np.ndarray:
    """Real 4x4 matrix of q -> m*q (left multiplication) on one block."""
    m0, m1, m2, m3 = (float(v) for v in np.asarray(m, dtype=float))
    return np.array(
        [
            [m0, -m1, -m2, -m3],
            [m1, m0, -m3, m2],
            [m2, m3, m0, -m1],
            [m3, -m2, m1, m0],
        ]
    )


def right_multiply(x: np.ndarray, q) -> np.ndarray:
    """Right scalar multiplication X q, blockwise on quaternionic coordinates."""
    if isinstance(q, Quaternion):
        q = q.as_array()
    q = np.asarray(q, dtype=float)
    b = _blocks(x)
    return _unblocks(qarr_mul(b, q))


def quaternion_from_rotation(C: np.ndarray) -> np.ndarray:
    """Unit quaternion v with v a conj(v) realizing the SO(3) rotation C on
    imaginary quaternions (defined up to overall sign).

    Shepperd's method: pick the largest of the four squared components.
    """
    C = np.asarray(C, dtype=float)
    t = np.trace(C)
    cand = np.array([1.0 + t, 1.0 + 2 * C[0, 0] - t, 1.0 + 2 * C[1, 1] - t,
                     1.0 + 2 * C[2, 2] - t])
    k = int(np.argmax(cand))
    q = np.empty(4)
    s = np.sqrt(cand[k]) / 2.0
    q[k] = s
    if k == 0:
        q[1] = (C[2, 1] - C[1, 2]) / (4 * s)
        q[2] = (C[0, 2] - C[2, 0]) / (4 * s)
        q[3] = (C[1, 0] - C[0, 1]) / (4 * s)
    elif k == 1:
        q[0] = (C[2, 1] - C[1, 2]) / (4 * s)
        q[2] = (C[0, 1] + C[1, 0]) / (4 * s)
        q[3] = (C[0, 2] + C[2, 0]) / (4 * s)
    elif k == 2:
        q[0] = (C[0, 2] - C[2, 0]) / (4 * s)
        q[1] = (C[0, 1] + C[1, 0]) / (4 * s)
        q[3] = (C[1, 2] + C[2, 1]) / (4 * s)
    else:
        q[0] = (C[1, 0] - C[0, 1]) / (4 * s)
        q[1] = (C[0, 2] + C[2, 0]) / (4 * s)
        q[2] = (C[1, 2] + C[2, 1]) / (4 * s)
    return q / np.linalg.norm(q)


def basis_change_homothety(basis) -> np.ndarray:
    """Unit quaternion v such that measuring a subspace U against the rotated
    admissible triple (I,J,K) C equals measuring U v (right multiplication)
    against the coordinate triple."""
    if not isinstance(basis, AdmissibleBasis):
        basis = AdmissibleBasis(np.asarray(basis, dtype=float))
    return quaternion_from_rotation(basis.rotation)
