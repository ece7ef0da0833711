"""Complex Radon measures of the two supported classes: finitely many
weighted atoms, and Lebesgue measure on an interval (with optional density
and possibly improper endpoints guarded by a decay certificate)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from .quadrature import (DecayCertificate, QuadratureOptions,
                         integrate_improper_left, integrate_interval)


@dataclass(frozen=True)
class RadonMeasure:
    variant: str                    # "atoms" | "lebesgue"
    points: Tuple[float, ...] = ()
    weights: Tuple[complex, ...] = ()
    a: float = 0.0
    b: float = 0.0
    density: Optional[Callable[[float], complex]] = None
    decay: Optional[DecayCertificate] = None

    # -- constructors ------------------------------------------------
    @staticmethod
    def discrete(points: Sequence[float], weights) -> "RadonMeasure":
        w = tuple(complex(x) for x in weights)
        if len(points) != len(w):
            raise ValueError("one weight per atom required")
        return RadonMeasure("atoms", points=tuple(float(x) for x in points),
                            weights=w)

    @staticmethod
    def lebesgue(a, b, density=None,
                 decay: Optional[DecayCertificate] = None) -> "RadonMeasure":
        return RadonMeasure("lebesgue", a=float(a), b=float(b),
                            density=density, decay=decay)

    @staticmethod
    def zero() -> "RadonMeasure":
        return RadonMeasure("atoms", points=(), weights=())

    # -- queries -----------------------------------------------------
    @property
    def is_improper(self) -> bool:
        return self.variant == "lebesgue" and (
            np.isinf(self.a) or np.isinf(self.b))

    def total_variation(self, opts: QuadratureOptions = QuadratureOptions()
                        ) -> float:
        if self.variant == "atoms":
            return float(sum(abs(w) for w in self.weights))
        dens = self.density
        f = (lambda t: 1.0) if dens is None else (lambda t: abs(dens(t)))
        if self.is_improper:
            if self.decay is None:
                raise ValueError("improper endpoint without decay certificate")
            val, _ = self._improper(lambda t: np.asarray(f(t)), opts)
            return float(abs(val))
        return float(np.real(integrate_interval(
            lambda t: np.asarray(f(t), dtype=complex), self.a, self.b, opts)))

    # -- integration -------------------------------------------------
    def integrate(self, F: Callable[[float], np.ndarray],
                  opts: QuadratureOptions = QuadratureOptions(),
                  want_ladder: bool = False):
        """Integral of F against the measure.  F returns a complex scalar or
        a fixed-shape ndarray.  Returns the value, or (value, ladder) for an
        improper interval when ``want_ladder`` is set."""
        if self.variant == "atoms":
            total = None
            for x, w in zip(self.points, self.weights):
                val = w * np.asarray(F(x), dtype=complex)
                total = val if total is None else total + val
            result = 0.0 if total is None else total
            return (result, []) if want_ladder else result
        dens = self.density
        g = F if dens is None else (
            lambda t: np.asarray(F(t), dtype=complex) * complex(dens(t)))
        if self.is_improper:
            if self.decay is None:
                raise ValueError("improper endpoint without decay certificate")
            val, ladder = self._improper(g, opts)
            return (val, ladder) if want_ladder else val
        val = integrate_interval(g, self.a, self.b, opts)
        return (val, []) if want_ladder else val

    def _improper(self, g, opts):
        if np.isinf(self.a) and np.isinf(self.b):
            raise ValueError("doubly infinite intervals are not supported")
        if np.isinf(self.a):
            return integrate_improper_left(g, self.b, self.decay, opts)
        # Mirror (+inf endpoint) through t -> -t.
        val, ladder = integrate_improper_left(
            lambda t: np.asarray(g(-t), dtype=complex), -self.a,
            self.decay, opts)
        return val, ladder


def measure_from_config(data) -> RadonMeasure:
    """Parse the measure schema: {"type": "lebesgue", "a": 0, "b": 1} |
    {"type": "lebesgue", "a": "-inf", "b": 0, "decay": {"rate": c}} |
    {"type": "atoms", "points": [...], "weights": [[re, im], ...]}."""
    from .errors import ConfigError
    kind = data.get("type")
    if kind == "atoms":
        try:
            weights = [complex(w[0], w[1]) for w in data["weights"]]
            return RadonMeasure.discrete(data["points"], weights)
        except (KeyError, TypeError, IndexError) as exc:
            raise ConfigError(f"malformed atoms measure: {exc}") from exc
    if kind == "lebesgue":
        def endpoint(v):
            if v == "-inf":
                return -np.inf
            if v == "+inf":
                return np.inf
            return float(v)
        try:
            a, b = endpoint(data["a"]), endpoint(data["b"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"malformed lebesgue measure: {exc}") from exc
        decay = None
        if "decay" in data:
            spec = data["decay"]
            decay = DecayCertificate(float(spec["rate"]),
                                     float(spec.get("coeff", 1.0)))
        if (np.isinf(a) or np.isinf(b)) and decay is None:
            raise ConfigError("improper lebesgue measure requires a decay "
                              "certificate")
        return RadonMeasure.lebesgue(a, b, decay=decay)
    raise ConfigError(f"unknown measure type {kind!r}")
