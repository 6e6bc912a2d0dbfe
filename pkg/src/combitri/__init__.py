"""Exact combinatorial topology: bistellar moves, shellings, f-vector algebra and
f-vector equalization of triangulated manifolds."""
from .complex_core import (
    FacetComplex,
    ManifoldCertificate,
    boundary_complex,
    build_complex,
    double,
    euler_characteristic,
    f_vector,
    implant,
    join,
    link,
    pseudomanifold_report,
    star,
    verify_manifold,
)
from .constructions import (
    MoldCell,
    PlumpCell,
    boundary_of_simplex,
    build_mold_cell,
    build_plump_cell,
    fixture,
    verify_mold,
    verify_plump,
)
from .equalizer import EqualizeResult, equalize_boundary, equalize_closed, equalize_full, replay
from .fvector import (
    FVector,
    VirtualMovePlan,
    apply_virtual,
    complete_f,
    d_vector,
    ds_residual_boundary,
    ds_residual_closed,
    hat_f,
    q_matrix,
    solve_virtual_plan,
)
from .moves import (
    BistellarMove,
    MoveLog,
    ShellingMove,
    apply_bistellar,
    apply_shelling,
    enumerate_bistellar,
    enumerate_shellings,
    induced_boundary_move,
    one_face_exposed,
    star_subdivide_along_face,
)

__version__ = "0.1.0"
