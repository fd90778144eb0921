"""Four-level atom with vacuum-induced coherence: master-equation dynamics,
weak-probe response and magneto-optical rotation."""

from .errors import (
    DivergenceError,
    MultiplicityError,
    NumericalError,
    ParameterError,
    ResonanceDegeneracyError,
    SingularityError,
    VicmorError,
)
from .observables import MediumParams, MorResult, mor_angle, sensitivity, shot_noise_limit
from .params import Manifold, SystemParams, load_params, validate_params
from .perturbative import CoherencePair, manifold_coherence, total_coherence

__version__ = "0.1.0"
