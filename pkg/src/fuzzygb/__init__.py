"""Matrix regularizations of surfaces, discrete curvature and the discrete Gauss-Bonnet theorem."""

from .curvature import (
    ClassicalAxisymGeometry,
    CurvatureReport,
    axisym_K,
    classical_axisym,
    curvature_report,
    discrete_K,
    discrete_K_r3,
    euler_characteristic,
    gamma_sq_from_embedding,
    tr_S_sq_flat,
)
from .regularization import (
    SPHERE_RULE,
    TORUS_RULE,
    AxiomDefectReport,
    FourierMode,
    HbarRule,
    clock_shift,
    torus_bracket_defect,
    torus_quantize,
)
from .surfaces import (
    CLIFFORD_TORUS,
    ROUND_SPHERE,
    AxisymRepresentation,
    EmbeddingSet,
    SurfaceKind,
    SurfaceSpec,
    axisym_embedding,
    axisym_representation,
    casimir_defect,
    fhat_squared,
    sphere_embedding,
    su2_generators,
    torus_embedding,
)

__version__ = "0.1.0"
