"""speccalc: operator calculus for diagonalizable and lazy-diagonal spectral
models, with verifiers for the integral identities they satisfy."""

from .calculus import (apply, apply_bounded, ess_sup, key_lemma_check,
                       scale_operator, symbol_image_operator)
from .errors import (ConfigError, DomainError, HalfPlaneViolation,
                     HUnbounded, HypothesisViolated, IdentityViolated,
                     IllConditioned, NoRepresentingOperator, NotAppropriate,
                     NotBounded, NotCovering, NotDiagonalizable,
                     OrderTooLow, QuadratureNotConverged, SpecCalcError,
                     SpectrumNotReal, Unbounded)
from .families import (FunctionalFamily, check_E_appropriate, npd_sequence,
                       nst_sequence, restrict_family, xi_embedding)
from .harness import (IdentityCheckSpec, VerificationReport,
                      check_commutation, check_restriction, derivative_check,
                      newton_leibnitz, newton_leibnitz_extension_spec,
                      resolvent_laplace, verify_global, verify_local)
from .integrals import (MinkowskiReport, WeakIntegralResult, integrate_norm,
                        integrate_strong, integrate_weak, minkowski_check,
                        upper_integral)
from .measures import RadonMeasure, measure_from_config
from .quadrature import (DecayCertificate, QuadratureOptions,
                         integrate_interval)
from .spectral import (BorelSetSpec, DiagonalOperator, ESequence,
                       ResolutionOfIdentity, ScalarSpectralOperator,
                       check_esequence, lazy_diagonal, make_E_sequence,
                       project, resolution_from_diagonalizable, restrict,
                       strong_limit_check)
from .symbols import (BorelSymbol, TruncatedSymbol, derivative_symbol,
                      registry_names, symbol_from_name, zero_extension)
from .vectors import ComplexVector, TailCertificate

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
