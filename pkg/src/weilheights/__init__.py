"""Heights, Weil restriction and Manin-Peyre constants over Q and imaginary quadratic fields."""
from .errors import (ConfigError, MathPreconditionError, MismatchFound, WeilHeightsError)
from .nfcore import NumberField, builtin_field, eisenstein, gaussian, rationals
from .heights import ArchNorm, MetrizedBundle, ProjectivePoint, height
from .piclattice import GaloisLattice, PicardLattice, a_invariant, alpha_invariant, b_invariant, h1_cyclic
from .enumeration import CountSeries, EnumerationTask, count_series, enum_projective, moebius_inverted_count
from .tamagawa import PeyreConstant, ProjectiveVariety, TamagawaInput, peyre_constant, tamagawa_number
from .fitting import FitReport, fit_asymptotic

__version__ = "0.1.0"
