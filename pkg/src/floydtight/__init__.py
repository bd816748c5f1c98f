"""Growth, Floyd-metric, contraction and quotient-growth computations for
finitely generated groups, with desk-scale growth-tightness experiments."""

from .cayley import (
    BudgetExceeded,
    SphereTable,
    distance,
    enumerate_ball,
    geodesic_path,
    geodesic_word,
    word_length,
)
from .config import ConfigError, ExperimentConfig, load_config, resolve_group
from .contracting import (
    AdmissiblePath,
    FiniteSubset,
    Segment,
    axis_of,
    bounded_intersection_profile,
    bounded_projection_check,
    contraction_profile,
    diameter,
    project,
    rnear_check,
    subset,
    thin_triangle_check,
    validate_admissible,
)
from .floyd import FloydFunction, floyd_distance_bracket, make_floyd_function, rescale_floyd, separation_probe
from .groups import (
    Alphabet,
    ConfluenceError,
    FreeAbelianGroup,
    FreeGroup,
    GroupBackend,
    Presentation,
    RewritingGroup,
    load_presentation,
    preset,
    read_presentation,
)
from .growth import critical_bracket, growth_rate_estimate, poincare_truncated
from .quotient import Epimorphism, coset_distance, minimal_reps, push_forward, quotient_metric_check, section
from .tightness import (
    ExperimentRefused,
    TightnessConfig,
    build_net,
    gap_certificate,
    injectivity_test,
    normal_path,
    orthogonality_check,
    tightness_experiment,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "load_config",
    "resolve_group",
    "AdmissiblePath",
    "Alphabet",
    "BudgetExceeded",
    "ConfluenceError",
    "Epimorphism",
    "ExperimentRefused",
    "FiniteSubset",
    "FloydFunction",
    "FreeAbelianGroup",
    "FreeGroup",
    "GroupBackend",
    "Presentation",
    "RewritingGroup",
    "Segment",
    "SphereTable",
    "TightnessConfig",
    "axis_of",
    "bounded_intersection_profile",
    "bounded_projection_check",
    "build_net",
    "contraction_profile",
    "coset_distance",
    "critical_bracket",
    "diameter",
    "distance",
    "enumerate_ball",
    "floyd_distance_bracket",
    "gap_certificate",
    "geodesic_path",
    "geodesic_word",
    "growth_rate_estimate",
    "injectivity_test",
    "load_presentation",
    "make_floyd_function",
    "minimal_reps",
    "normal_path",
    "orthogonality_check",
    "poincare_truncated",
    "preset",
    "project",
    "push_forward",
    "quotient_metric_check",
    "read_presentation",
    "rescale_floyd",
    "rnear_check",
    "section",
    "separation_probe",
    "subset",
    "thin_triangle_check",
    "tightness_experiment",
    "validate_admissible",
    "word_length",
    "__version__",
]
