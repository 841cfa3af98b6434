"""Isoclinic subspaces of a quaternionic Hermitian vector space.

Decides isoclinicity, measures the invariant set
(theta_I, theta_J, theta_K, xi, chi, eta, Gamma, Delta), builds chains
and canonical matrices, decomposes into isoclinic addends, and decides
Sp(n)-orbit equivalence. See the README for the coordinate conventions.
"""

__version__ = "0.1.0"

from .analysis import (
    ChainSet,
    Companions,
    IsoclinicProfile,
    TwoPlaneOrbit,
    build_chains,
    canonical_matrices_4,
    certify_isoclinic,
    companions,
    full_profile,
    gamma_delta,
    isoclinic_pair,
    isoclinic_profile_angles,
    omega_K_on_UIJ,
    omega_matrix,
    theta_of_A,
    two_plane_orbit,
)
from .errors import (
    DegenerateChainError,
    DimensionError,
    DocumentError,
    FalsificationError,
    InfeasibleParametersError,
    IsoclinicError,
    NotIsoclinicError,
    RankDeficiencyError,
)
from .generators import (
    OracleReport,
    SearchReport,
    SpElement,
    direct_sum,
    graph_subspace,
    invariance_oracle,
    make_i_complex_4,
    make_profile_4,
    make_quaternionic_line,
    make_rhp,
    make_totally_complex_4,
    make_two_plane,
    random_sp,
    search_irreducible_8,
)
from .io import SubspaceDocument, document_from_frame, parse_document, serialize_document
from .orbits import (
    Decomposition,
    OrbitLabel,
    TypedSubspace,
    associated_subspaces,
    canonical_matrices,
    decompose,
    eight_dim_addend,
    orbit_label,
    same_orbit,
    split_addend_4,
)
from .quaternions import (
    AdmissibleBasis,
    CompatibleStructure,
    I,
    J,
    K,
    Quaternion,
    apply_structure,
    characteristic_angle,
    hermitian_angle,
    hermitian_product,
    qmul,
    rotate_basis,
)
from .subspaces import (
    Frame,
    OrientedTwoPlane,
    PrincipalAngleResult,
    euclidean_angle,
    gram,
    imaginary_measure,
    kahler_angle,
    orthonormalize,
    principal_angles,
    project,
)
