"""Information versus disturbance for the diagonal qudit measurement family."""
from .combinatorics import LogRational, binomial, coeff_a, coeff_c, harmonic
from .derivatives import Alpha, DerivativeBundle, alpha, derivative_bundle
from .quantities import MeasurementSpec, QuantityBundle, eval_F, eval_G, eval_I, eval_J, eval_R, evaluate, projective_point
from .tradeoff import Plane, boundary_set, classify_shape, curvature, find_inflection, sample_curve, slope

__version__ = "0.1.0"
