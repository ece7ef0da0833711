"""Borel symbols: evaluable maps C -> C with optional analytic metadata,
plus the registry the command surface resolves names against."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .spectral import BorelSetSpec


@dataclass(frozen=True)
class BorelSymbol:
    """An evaluable symbol.  ``eval`` must broadcast over complex ndarrays.
    When a ``derivative`` is supplied it is trusted as the analytic
    derivative; otherwise verifiers fall back to Richardson-extrapolated
    central differences."""
    eval: Callable[[np.ndarray], np.ndarray]
    derivative: Optional[Callable[[np.ndarray], np.ndarray]] = None
    analytic_domain: Optional[BorelSetSpec] = None
    label: str = "f"

    def __call__(self, lam):
        arr = np.asarray(lam, dtype=complex)
        out = np.asarray(self.eval(arr), dtype=complex)
        return complex(out) if np.ndim(lam) == 0 else out

    @property
    def is_analytic(self) -> bool:
        return self.derivative is not None

    def scaled(self, t: float) -> "BorelSymbol":
        """The symbol lam -> f(t lam)."""
        t = complex(t)
        f = self.eval
        d = self.derivative
        return BorelSymbol(
            lambda z, f=f, t=t: np.asarray(f(t * np.asarray(z, dtype=complex)),
                                           dtype=complex),
            None if d is None else
            (lambda z, d=d, t=t: t * np.asarray(d(t * np.asarray(z, dtype=complex)),
                                                dtype=complex)),
            self.analytic_domain,
            f"({self.label})_{t.real:g}" if t.imag == 0 else
            f"({self.label})_{t}")


def derivative_symbol(sym: BorelSymbol, h: float = 1e-3) -> BorelSymbol:
    """Analytic derivative when available, else a Richardson-extrapolated
    central-difference surrogate (O(h^4) for analytic symbols)."""
    if sym.derivative is not None:
        return BorelSymbol(sym.derivative, None, sym.analytic_domain,
                           f"d({sym.label})")
    f = sym.eval

    def fd(z, f=f, h=h):
        z = np.asarray(z, dtype=complex)
        d1 = (np.asarray(f(z + h), dtype=complex)
              - np.asarray(f(z - h), dtype=complex)) / (2.0 * h)
        d2 = (np.asarray(f(z + h / 2.0), dtype=complex)
              - np.asarray(f(z - h / 2.0), dtype=complex)) / h
        return (4.0 * d2 - d1) / 3.0

    return BorelSymbol(fd, None, sym.analytic_domain, f"d({sym.label})~fd")


def check_derivative_consistency(sym: BorelSymbol, points,
                                 h: float = 1e-4, rtol: float = 1e-4) -> bool:
    """Central differences of ``eval`` must reproduce ``derivative`` to
    O(h^2) at the given interior points."""
    if sym.derivative is None:
        return True
    pts = np.asarray(points, dtype=complex)
    fd = (sym(pts + h) - sym(pts - h)) / (2.0 * h)
    ref = np.asarray(sym.derivative(pts), dtype=complex)
    scale = np.maximum(1.0, np.abs(ref))
    return bool(np.all(np.abs(fd - ref) <= rtol * scale))


def zero_extension(f: BorelSymbol, s: BorelSetSpec) -> BorelSymbol:
    """The symbol agreeing with ``f`` on ``s`` and vanishing off it."""
    base = f.eval
    d = f.derivative

    def ext(z, base=base, s=s):
        z = np.asarray(z, dtype=complex)
        keep = s.contains(z)
        return np.asarray(base(z), dtype=complex) * keep

    return BorelSymbol(
        ext,
        None if d is None else
        (lambda z, d=d, s=s: np.asarray(d(np.asarray(z, dtype=complex)),
                                        dtype=complex) * s.contains(np.asarray(z, dtype=complex))),
        f.analytic_domain, f"{f.label}~0off({s.label})")


@dataclass(frozen=True)
class TruncatedSymbol:
    """Level-n truncation: f_n = f * [|f| <= n], so |f_n| <= n everywhere."""
    base: BorelSymbol
    level: float

    def as_symbol(self) -> BorelSymbol:
        f = self.base.eval
        n = float(self.level)

        def ev(z, f=f, n=n):
            z = np.asarray(z, dtype=complex)
            vals = np.asarray(f(z), dtype=complex)
            return vals * (np.abs(vals) <= n)

        return BorelSymbol(ev, None, self.base.analytic_domain,
                           f"({self.base.label})_{{{n:g}}}")

    def __call__(self, lam):
        return self.as_symbol()(lam)


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

def _sym_identity():
    return BorelSymbol(lambda z: z, lambda z: np.ones_like(z),
                       None, "identity")


def _sym_square():
    return BorelSymbol(lambda z: z * z, lambda z: 2.0 * z, None, "square")


def _sym_exp():
    return BorelSymbol(np.exp, np.exp, None, "exp")


def _sym_expi():
    return BorelSymbol(lambda z: np.exp(1j * z),
                       lambda z: 1j * np.exp(1j * z), None, "expi")


def _sym_one():
    return BorelSymbol(lambda z: np.ones_like(np.asarray(z, dtype=complex)),
                       lambda z: np.zeros_like(np.asarray(z, dtype=complex)),
                       None, "one")


def _sym_inv_shift(lam0: complex):
    lam0 = complex(lam0)
    dom = BorelSetSpec(lambda z, c=lam0: np.abs(z - c) > 0.0, None,
                       f"C-{{{lam0}}}")
    return BorelSymbol(lambda z, c=lam0: 1.0 / (z - c),
                       lambda z, c=lam0: -1.0 / (z - c) ** 2,
                       dom, f"inv_shift({lam0})")


def _sym_indicator(radius: float):
    r = float(radius)
    return BorelSymbol(
        lambda z, r=r: (np.abs(z) <= r).astype(complex),
        None, None, f"indicator({r:g})")


def _sym_poly(*coeffs):
    cs = np.array([complex(c) for c in coeffs])
    dcs = cs[1:] * np.arange(1, cs.size)

    def ev(z, cs=cs):
        z = np.asarray(z, dtype=complex)
        out = np.zeros_like(z)
        for c in cs[::-1]:
            out = out * z + c
        return out

    def dev(z, dcs=dcs):
        z = np.asarray(z, dtype=complex)
        out = np.zeros_like(z)
        for c in dcs[::-1]:
            out = out * z + c
        return out

    label = "poly(" + ",".join(f"{c:g}" if c.imag == 0 else str(c)
                               for c in cs) + ")"
    return BorelSymbol(ev, dev, None, label)


_PLAIN = {
    "identity": _sym_identity,
    "square": _sym_square,
    "exp": _sym_exp,
    "expi": _sym_expi,
    "one": _sym_one,
}

_PARAMETRIC = {
    "inv_shift": (_sym_inv_shift, 1),
    "indicator": (_sym_indicator, 1),
    "poly": (_sym_poly, None),
}

_CALL_RE = re.compile(r"^([a-z_]+)\((.*)\)$")


def symbol_from_name(name: str) -> BorelSymbol:
    """Resolve a registry name: plain names, or parameterized forms such as
    ``inv_shift(1+2j)`` and ``poly(1,0,2)`` with arguments accepted by
    Python's complex()."""
    key = name.strip()
    if key in _PLAIN:
        return _PLAIN[key]()
    m = _CALL_RE.match(key)
    if m and m.group(1) in _PARAMETRIC:
        factory, arity = _PARAMETRIC[m.group(1)]
        raw = [s.strip() for s in m.group(2).split(",") if s.strip()]
        try:
            args = [complex(s.replace(" ", "")) for s in raw]
        except ValueError as exc:
            raise KeyError(f"unparsable arguments in symbol {name!r}") from exc
        if arity is not None and len(args) != arity:
            raise KeyError(f"symbol {m.group(1)!r} takes {arity} argument(s)")
        if m.group(1) in ("indicator",):
            return factory(args[0].real)
        return factory(*args)
    raise KeyError(f"symbol {name!r} is not in the registry")


def registry_names():
    return sorted(_PLAIN) + [f"{k}(...)" for k in sorted(_PARAMETRIC)]
