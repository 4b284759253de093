"""Generalized trigonometric and hyperbolic functions and their behaviour in p.

``sin_p`` is the inverse of ``int_0^x (1 - t^p)^(-1/p) dt``; ``tan_p``,
``sinh_p`` and ``tanh_p`` invert the integrals of ``1/(1 + t^p)``,
``(1 + t^p)^(-1/p)`` and ``1/(1 - t^p)``.  The package evaluates these
functions to near machine precision, differentiates them in p through the
inverse-function formulas, and certifies log-concavity/convexity and
Turan-type inequalities on parameter grids.
"""
__version__ = "0.1.0"

from .errors import (  # noqa: E402
    BoundaryProximity,
    BracketOverflow,
    DivergentEndpoint,
    DomainError,
    GentrigError,
    InvalidInterval,
    NoSignChange,
    NonConvergence,
    NonIntegrable,
    PoleError,
    UnsupportedFamily,
)
from .quadrature import (  # noqa: E402
    DEFAULT_CONFIG,
    QuadratureConfig,
    QuadResult,
    integrate,
    integrate_singular_upper,
)
from .core import (  # noqa: E402
    Evaluation,
    FunctionKind,
    Parameter,
    arccos_p,
    arcsin_p,
    arcsinh_p,
    arctan_p,
    arctanh_p,
    cos_p,
    cosh_p,
    evaluate,
    log_deviation,
    pi_p,
    pi_p_quadrature,
    sin_p,
    sinh_p,
    tan_p,
    tanh_p,
    tanh_p_complement,
)
from .calculus import (  # noqa: E402
    DerivativeReport,
    KernelBundle,
    derivative_report,
    inverse_d2p,
    inverse_d2p_log,
    inverse_dp,
    make_bundle,
)
from .convexity import (  # noqa: E402
    Margin,
    Property,
    ScanReport,
    Verdict,
    corollary_condition,
    find_p0,
    lemma3_check,
    lemma3_constant,
    scan,
    theorem1_G,
    theorem4_discriminant,
    theorem5_ratio_check,
    turan_margin,
    zeta3,
)
