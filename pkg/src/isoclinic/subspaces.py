"""Frames, projectors, principal angles and 2-plane angle invariants.

A subspace is always handled through a Frame: an ordered orthonormal list
of vectors, stored as the rows of a (k, 4n) array. Principal angles come
from the SVD of the mutual Gram matrix, with singular values clamped into
[0, 1] before any arccos.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, RankDeficiencyError
from .quaternions import CompatibleStructure, apply_structure, hermitian_product, Quaternion
from .tolerances import EPS_FRAME, EPS_RANK

__all__ = [
    "Frame",
    "orthonormalize",
    "project",
    "gram",
    "PrincipalAngleResult",
    "principal_angles",
    "euclidean_angle",
    "OrientedTwoPlane",
    "kahler_angle",
    "imaginary_measure",
    "structure_image",
    "complement",
    "restrict_complement",
    "random_frame",
]


@dataclass(frozen=True, eq=False)
class Frame:
    """Ordered orthonormal spanning set; rows of `vectors` are the vectors."""

    vectors: np.ndarray
    tol: float = field(default=EPS_FRAME, compare=False)

    def __post_init__(self):
        V = np.atleast_2d(np.asarray(self.vectors, dtype=float))
        if V.shape[0] == 0:
            raise DimensionError("dim-0 subspace is rejected")
        if V.shape[1] % 4 != 0:
            raise DimensionError(f"ambient dimension {V.shape[1]} not a multiple of 4")
        if V.shape[0] > V.shape[1]:
            raise DimensionError("more vectors than ambient dimensions")
        defect = np.max(np.abs(V @ V.T - np.eye(V.shape[0])))
        if defect > self.tol:
            raise ValueError(
                f"frame is not orthonormal: Gram defect {defect:.3e} > {self.tol:.1e}"
            )
        object.__setattr__(self, "vectors", V)

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    @property
    def ambient(self) -> int:
        return self.vectors.shape[1]

    @property
    def n(self) -> int:
        return self.vectors.shape[1] // 4

    def __len__(self) -> int:
        return self.dim


def _mgs(rows: np.ndarray, tol: float) -> tuple[np.ndarray, list[int]]:
    """Modified Gram-Schmidt; returns kept orthonormal rows and their indices.

    A row is dropped when its residual is below tol relative to the largest
    input norm.
    """
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    scale = max(float(np.max(np.linalg.norm(rows, axis=1))), 1.0) if rows.size else 1.0
    out: list[np.ndarray] = []
    kept: list[int] = []
    for idx, r in enumerate(rows):
        v = r.astype(float).copy()
        for q in out:
            v -= (q @ v) * q
        # second pass for numerical hygiene
        for q in out:
            v -= (q @ v) * q
        nv = float(np.linalg.norm(v))
        if nv > tol * scale:
            out.append(v / nv)
            kept.append(idx)
    Q = np.array(out) if out else np.zeros((0, rows.shape[1]))
    return Q, kept


def orthonormalize(spanning, tol: float = EPS_RANK) -> Frame:
    """Frame spanning the same subspace as `spanning` (Gram-Schmidt order).

    Rank-deficient input raises RankDeficiencyError carrying the detected
    rank.
    """
    rows = np.atleast_2d(np.asarray(spanning, dtype=float))
    if rows.shape[0] == 0:
        raise DimensionError("empty spanning set")
    Q, kept = _mgs(rows, tol)
    if len(kept) != rows.shape[0]:
        raise RankDeficiencyError(detected_rank=len(kept), expected=rows.shape[0])
    return Frame(Q)


def project(U: Frame, x: np.ndarray) -> np.ndarray:
    """Orthogonal projection of x onto span(U)."""
    return U.vectors.T @ (U.vectors @ np.asarray(x, dtype=float))


def gram(U: Frame, W: Frame) -> np.ndarray:
    """Matrix of mutual inner products <u_i, w_j>."""
    if U.ambient != W.ambient:
        raise DimensionError("frames live in different ambient spaces")
    return U.vectors @ W.vectors.T


def structure_image(A: CompatibleStructure, U: Frame) -> Frame:
    """Frame of A(span U); A is an isometry so no re-orthonormalization."""
    return Frame(apply_structure(A, U.vectors))


@dataclass(frozen=True, eq=False)
class PrincipalAngleResult:
    """Principal angles (nondecreasing) and related principal vector pairs.

    Rows of left_vectors lie in the first subspace, rows of right_vectors
    in the second; <a_i, b_j> = delta_ij cos(theta_i). `swapped` records
    that the inputs were exchanged to make dim U <= dim W.
    """

    angles: np.ndarray
    left_vectors: np.ndarray
    right_vectors: np.ndarray
    swapped: bool = False

    @property
    def cosines(self) -> np.ndarray:
        return np.cos(self.angles)


def principal_angles(U: Frame, W: Frame) -> PrincipalAngleResult:
    """Principal angles via SVD of Gram(U, W), clamped into [0, 1].

    Signs follow the Afriat normalization: every diagonal entry of the
    Gram matrix of related principal vectors is >= 0.
    """
    swapped = U.dim > W.dim
    if swapped:
        U, W = W, U
    G = gram(U, W)
    A, s, Bh = np.linalg.svd(G, full_matrices=False)
    s = np.clip(s, 0.0, 1.0)
    left = A.T @ U.vectors
    right = Bh @ W.vectors
    # SVD orders singular values descending, so angles come out ascending
    return PrincipalAngleResult(
        angles=np.arccos(s), left_vectors=left, right_vectors=right, swapped=swapped
    )


def euclidean_angle(U: Frame, W: Frame) -> float:
    """Angle phi with cos phi = product of the principal cosines."""
    if U.dim != W.dim:
        raise DimensionError(f"euclidean_angle needs equal dims, got {U.dim} != {W.dim}")
    c = float(np.prod(principal_angles(U, W).cosines))
    return float(np.arccos(np.clip(c, -1.0, 1.0)))


@dataclass(frozen=True, eq=False)
class OrientedTwoPlane:
    """Ordered orthonormal pair (X, Y); the order is the orientation."""

    X: np.ndarray
    Y: np.ndarray

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float)
        Y = np.asarray(self.Y, dtype=float)
        Frame(np.vstack([X, Y]))  # validates orthonormality and ambient dim
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Y", Y)

    def reversed(self) -> "OrientedTwoPlane":
        return OrientedTwoPlane(self.Y, self.X)

    def frame(self) -> Frame:
        return Frame(np.vstack([self.X, self.Y]))


def _mis(x: np.ndarray, y: np.ndarray) -> float:
    """Area |X ^ Y| of the parallelogram spanned by x, y."""
    g = (x @ x) * (y @ y) - (x @ y) ** 2
    m = float(np.sqrt(max(g, 0.0)))
    if m < 1e-14:
        raise ValueError("degenerate pair: vectors are numerically parallel")
    return m


def kahler_angle(P: OrientedTwoPlane, A: CompatibleStructure) -> float:
    """A-Kaehler angle of the oriented plane, in [0, pi].

    Independent of the oriented orthonormal basis; reversing orientation
    negates the cosine.
    """
    c = float(P.X @ apply_structure(A, P.Y)) / _mis(P.X, P.Y)
    return float(np.arccos(np.clip(c, -1.0, 1.0)))


def imaginary_measure(P: OrientedTwoPlane) -> Quaternion:
    """Purely imaginary quaternion Im(X . Y) / |X ^ Y| of an oriented plane.

    For a standard oriented basis this is +/-(cos theta^I i +
    xi cos theta^J j + chi cos theta^K k); it is a complete Sp(n)-orbit
    invariant of the oriented 2-plane.
    """
    q = hermitian_product(P.X, P.Y)
    m = _mis(P.X, P.Y)
    return Quaternion(0.0, q.im_i / m, q.im_j / m, q.im_k / m)


def complement(U: Frame) -> Frame:
    """Orthonormal basis of the orthogonal complement in the ambient space."""
    _, _, vh = np.linalg.svd(U.vectors, full_matrices=True)
    return Frame(vh[U.dim:])


def restrict_complement(U: Frame, W: Frame, expect: int | None = None) -> Frame:
    """Orthonormal basis of {u in span(U) : u ⟂ span(W)}.

    `expect` asserts the resulting dimension when the caller knows it.
    """
    rows = U.vectors - (U.vectors @ W.vectors.T) @ W.vectors
    Q, kept = _mgs(rows, EPS_RANK * 10)
    if expect is not None and len(kept) != expect:
        raise RankDeficiencyError(detected_rank=len(kept), expected=expect)
    return Frame(Q)


def random_frame(n: int, k: int, rng: np.random.Generator) -> Frame:
    """Random k-frame in R^{4n} (orthonormalized Gaussian rows)."""
    return orthonormalize(rng.standard_normal((k, 4 * n)))
