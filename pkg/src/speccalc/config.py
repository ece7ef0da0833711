"""Suite configuration: a single JSON document with a mandatory seed and a
list of named check descriptors.  Complex scalars are [re, im] pairs and
infinite endpoints are the strings "-inf"/"+inf", so documents round-trip
bit-exactly."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np

from .errors import ConfigError
from .families import FunctionalFamily, npd_sequence, nst_sequence
from .harness import (IdentityCheckSpec, check_commutation, check_restriction,
                      derivative_check, newton_leibnitz,
                      newton_leibnitz_extension_spec, resolvent_laplace,
                      verify_global)
from .measures import RadonMeasure, measure_from_config
from .quadrature import QuadratureOptions
from .spectral import (BorelSetSpec, ScalarSpectralOperator, lazy_diagonal,
                       make_E_sequence)
from .symbols import symbol_from_name
from .vectors import ComplexVector

CHECK_KINDS = ("newton-leibnitz", "resolvent", "derivative", "extension",
               "commutation", "restriction")

_LAZY_GENERATORS = {
    "arithmetic": lambda ks: ks.astype(complex),
    "imaginary-arithmetic": lambda ks: 1j * ks.astype(complex),
    "harmonic": lambda ks: 1.0 / (ks.astype(complex) + 1.0),
}


def _complex(value):
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    raise ConfigError(f"expected [re, im] pair, got {value!r}")


def _norm_kind(value):
    if value in (1, 2):
        return value
    if value in ("inf", "Inf", "INF"):
        return np.inf
    raise ConfigError(f"norm kind must be 1, 2 or \"inf\", got {value!r}")


def operator_from_config(data) -> ScalarSpectralOperator:
    kind = data.get("type")
    p = _norm_kind(data.get("p", 2))
    if kind == "matrix":
        try:
            rows = [[_complex(x) for x in row] for row in data["data"]]
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"malformed matrix operator: {exc}") from exc
        return ScalarSpectralOperator.finite_from_matrix(
            np.array(rows, dtype=complex), p=p)
    if kind == "diag":
        try:
            vals = [_complex(x) for x in data["values"]]
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"malformed diag operator: {exc}") from exc
        return ScalarSpectralOperator.finite_from_matrix(
            np.diag(np.array(vals, dtype=complex)), p=p)
    if kind == "lazy":
        name = data.get("generator")
        if name not in _LAZY_GENERATORS:
            raise ConfigError(
                f"unknown lazy generator {name!r}; available: "
                f"{sorted(_LAZY_GENERATORS)}")
        return lazy_diagonal(_LAZY_GENERATORS[name], p=p)
    raise ConfigError(f"unknown operator type {kind!r}")


def _resolve_symbol(name):
    try:
        return symbol_from_name(name)
    except KeyError as exc:
        raise ConfigError(str(exc)) from exc


def default_probes(R: ScalarSpectralOperator, rng, count: int = 3):
    p = R.norm_kind
    if R.is_finite:
        n = R.dim
        probes = [ComplexVector.basis(k, n, p) for k in range(min(n, 2))]
        for _ in range(count):
            probes.append(ComplexVector.finite(
                rng.standard_normal(n) + 1j * rng.standard_normal(n), p))
        return probes
    probes = [ComplexVector.basis(k, "sequence", p) for k in (0, 1, 3)]
    support = {k: 1.0 / (k + 1.0) for k in range(8)}
    probes.append(ComplexVector.sequence(support, p))
    return probes


def default_family(R: ScalarSpectralOperator, kind: str, rng,
                   count: int = 4) -> FunctionalFamily:
    p = R.norm_kind
    if R.is_finite:
        if kind == "nst":
            return FunctionalFamily.nst_random(R.dim, count, rng, p=p)
        if kind == "npd":
            if p != 2:
                raise ConfigError("npd families need the p = 2 model")
            return FunctionalFamily.npd_random(R.dim, count, rng)
        raise ConfigError(f"unknown family kind {kind!r}")
    idx = list(range(6))
    if kind == "nst":
        pairs = []
        for i in range(count):
            phi = ComplexVector.sequence(
                {k: complex(rng.standard_normal(), rng.standard_normal())
                 for k in idx}, p)
            v = ComplexVector.sequence(
                {k: complex(rng.standard_normal(), rng.standard_normal())
                 for k in idx}, p)
            pairs.append((phi, v))
        return nst_sequence(pairs, p)
    if kind == "npd":
        if p != 2:
            raise ConfigError("npd families need the p = 2 model")
        pls = []
        for i in range(count):
            us = [ComplexVector.sequence(
                {k: 2.0 ** (-t) * complex(rng.standard_normal(),
                                          rng.standard_normal())
                 for k in idx}, 2) for t in range(2)]
            ws = [ComplexVector.sequence(
                {k: 2.0 ** (-t) * complex(rng.standard_normal(),
                                          rng.standard_normal())
                 for k in idx}, 2) for t in range(2)]
            pls.append((us, ws))
        return npd_sequence(pls)
    raise ConfigError(f"unknown family kind {kind!r}")


@dataclass(frozen=True)
class CheckDescriptor:
    name: str
    kind: str
    runner: Callable[[np.random.Generator, QuadratureOptions], object]


def build_check(desc: dict, quad: QuadratureOptions) -> CheckDescriptor:
    if "name" not in desc or "kind" not in desc:
        raise ConfigError("every check needs a name and a kind")
    kind = desc["kind"]
    if kind not in CHECK_KINDS:
        raise ConfigError(f"unknown check kind {kind!r}; available: "
                          f"{CHECK_KINDS}")
    name = str(desc["name"])
    builder = _BUILDERS[kind]
    return CheckDescriptor(name, kind, builder(desc))


def _build_newton_leibnitz(desc):
    R = operator_from_config(desc["operator"])
    S = _resolve_symbol(desc["symbol"])
    u1, u2 = float(desc.get("u1", 0.0)), float(desc.get("u2", 1.0))
    mode = desc.get("mode", "strong")
    tol = float(desc.get("tolerance", 1e-6))
    fam_kind = desc.get("family", "nst")

    def run(rng, quad):
        probes = default_probes(R, rng)
        N = default_family(R, fam_kind, rng) if mode == "weak" else None
        return newton_leibnitz(R, S, u1, u2, mode=mode, N=N, opts=quad,
                               probes=probes, tol=tol)

    return run


def _build_resolvent(desc):
    R = operator_from_config(desc["operator"])
    lam = _complex(desc["lambda"])
    tol = float(desc.get("tolerance", 1e-6))

    def run(rng, quad):
        return resolvent_laplace(R, lam, opts=quad, tol=tol)

    return run


def _build_derivative(desc):
    R = operator_from_config(desc["operator"])
    S = _resolve_symbol(desc["symbol"])
    t0 = float(desc.get("t0", 1.0))
    schedule = tuple(float(h) for h in
                     desc.get("h_schedule", (1e-2, 1e-3, 1e-4, 1e-5)))
    order_min = float(desc.get("order_min", 1.9))

    def run(rng, quad):
        v = default_probes(R, rng)[0]
        rep = derivative_check(R, S, t0, v, h_schedule=schedule,
                               order_min=order_min)
        from .harness import VerificationReport
        return VerificationReport(
            identity=f"derivative[{S.label}]",
            local_residuals=tuple(rep.errors),
            global_residual=float(rep.errors[-1][1]),
            passed=rep.passed,
            extra={"observed_order": float(rep.observed_order),
                   "exact_floor": rep.exact_floor})

    return run


def _build_extension(desc):
    R = operator_from_config(desc["operator"])
    S = _resolve_symbol(desc["symbol"])
    u1, u2 = float(desc.get("u1", 0.0)), float(desc.get("u2", 1.0))
    wrong_h = bool(desc.get("wrong_h", False))
    n_max = int(desc.get("n_max", 8))
    local_tol = float(desc.get("local_tolerance", 1e-8))
    global_tol = float(desc.get("tolerance", 1e-7))
    fam_kind = desc.get("family", "nst")

    def run(rng, quad):
        probes = default_probes(R, rng)
        N = default_family(R, fam_kind, rng)
        spec = newton_leibnitz_extension_spec(
            desc["name"], R, S, u1, u2, N, probes, wrong_h=wrong_h,
            quad=quad, local_tol=local_tol, global_tol=global_tol,
            n_max=n_max)
        return verify_global(spec)

    return run


def _family_of_scaled(desc):
    S = _resolve_symbol(desc["symbol"])
    return lambda t: S.scaled(float(t))


def _build_commutation(desc):
    R = operator_from_config(desc["operator"])
    fam = _family_of_scaled(desc)
    mu = measure_from_config(desc.get("measure",
                                      {"type": "lebesgue", "a": 0, "b": 1}))
    radii = desc.get("sigma_radii", [1.0, 2.0, 4.0])
    tol = float(desc.get("tolerance", 1e-9))
    fam_kind = desc.get("family", "nst")

    def run(rng, quad):
        sigmas = [BorelSetSpec.ball(float(r)) for r in radii]
        N = default_family(R, fam_kind, rng)
        probes = default_probes(R, rng)
        return check_commutation(fam, mu, R, sigmas, N, opts=quad, tol=tol,
                                 probes=probes)

    return run


def _build_restriction(desc):
    R = operator_from_config(desc["operator"])
    fam = _family_of_scaled(desc)
    mu = measure_from_config(desc.get("measure",
                                      {"type": "lebesgue", "a": 0, "b": 1}))
    radius = float(desc.get("sigma_radius", 2.5))
    tol = float(desc.get("tolerance", 1e-9))
    fam_kind = desc.get("family", "nst")

    def run(rng, quad):
        sigma = BorelSetSpec.ball(radius)
        N = default_family(R, fam_kind, rng)
        probes = default_probes(R, rng)
        return check_restriction(fam, mu, R, sigma, N, probes=probes,
                                 opts=quad, tol=tol)

    return run


_BUILDERS = {
    "newton-leibnitz": _build_newton_leibnitz,
    "resolvent": _build_resolvent,
    "derivative": _build_derivative,
    "extension": _build_extension,
    "commutation": _build_commutation,
    "restriction": _build_restriction,
}


@dataclass(frozen=True)
class SuiteConfig:
    seed: int
    quad: QuadratureOptions
    checks: Tuple[CheckDescriptor, ...]
    raw: dict = field(repr=False, default_factory=dict)


def load_config(source, quad_tol_override: Optional[float] = None
                ) -> SuiteConfig:
    """Parse and validate a configuration document (path or dict)."""
    if isinstance(source, dict):
        data = source
    else:
        try:
            with open(source, "r", encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if "seed" not in data:
        raise ConfigError("config must carry a seed")
    seed = int(data["seed"])
    qspec = data.get("quad", {})
    abs_tol = float(qspec.get("abs_tol", 1e-9))
    if quad_tol_override is not None:
        abs_tol = float(quad_tol_override)
    quad = QuadratureOptions(
        abs_tol=abs_tol,
        depth_cap=int(qspec.get("depth_cap", 40)),
        scheme=qspec.get("scheme", "adaptive-simpson"))
    checks = []
    seen = set()
    for desc in data.get("checks", []):
        check = build_check(desc, quad)
        if check.name in seen:
            raise ConfigError(f"duplicate check name {check.name!r}")
        seen.add(check.name)
        checks.append(check)
    if not checks:
        raise ConfigError("config carries no checks")
    return SuiteConfig(seed, quad, tuple(checks), raw=data)
