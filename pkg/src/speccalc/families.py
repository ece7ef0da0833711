"""Functional families on B(G): finite generator sets for the weak operator
topology (pairs dual-vector/vector), the sigma-weak topology (square-summable
vector pairs, Hilbert case only), and user-supplied custom families.

Evaluation is bilinear in the first slot for the weak-operator pairs
(phi(Tv) with a dual vector phi) and sesquilinear for the sigma-weak pairs
(<u, Bw> conjugates u), matching the two spaces' dualities.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

import numpy as np

from .errors import NotAppropriate
from .spectral import BorelSetSpec, DiagonalOperator, ResolutionOfIdentity, project
from .vectors import SEQUENCE, ComplexVector, check_norm_kind


def _pair_bilinear(phi: ComplexVector, u: ComplexVector) -> complex:
    if phi.is_finite:
        return complex(np.dot(phi.as_array(), u.as_array()))
    total = 0.0 + 0.0j
    ks, vals = phi.support_values()
    table = dict(zip((int(k) for k in u.support()),
                     u.support_values()[1])) if not u.is_finite else None
    for k, v in zip(ks, vals):
        total += v * table.get(int(k), 0.0)
    return complex(total)


def _pair_hermitian(u: ComplexVector, w: ComplexVector) -> complex:
    if u.is_finite:
        return complex(np.vdot(u.as_array(), w.as_array()))
    total = 0.0 + 0.0j
    ks, vals = u.support_values()
    table = dict(zip((int(k) for k in w.support()), w.support_values()[1]))
    for k, v in zip(ks, vals):
        total += np.conj(v) * table.get(int(k), 0.0)
    return complex(total)


@dataclass(frozen=True)
class WotGenerator:
    """T -> phi(T v) with a dual vector phi and a vector v."""
    phi: ComplexVector
    v: ComplexVector

    def __call__(self, B) -> complex:
        if isinstance(B, DiagonalOperator):
            return _pair_bilinear(self.phi, B.apply(self.v))
        return complex(np.dot(self.phi.as_array(),
                              np.asarray(B) @ self.v.as_array()))


@dataclass(frozen=True)
class SigmaWeakGenerator:
    """B -> sum_n <u_n, B w_n> over square-summable vector lists."""
    us: tuple
    ws: tuple

    def __call__(self, B) -> complex:
        total = 0.0 + 0.0j
        for u, w in zip(self.us, self.ws):
            if isinstance(B, DiagonalOperator):
                total += _pair_hermitian(u, B.apply(w))
            else:
                total += complex(np.vdot(u.as_array(),
                                         np.asarray(B) @ w.as_array()))
        return complex(total)


@dataclass(frozen=True)
class CustomGenerator:
    func: Callable[[object], complex]
    label: str = "omega"

    def __call__(self, B) -> complex:
        return complex(self.func(B))


NST = "nst"
NPD = "npd"
CUSTOM = "custom"


@dataclass(frozen=True)
class FunctionalFamily:
    """A family of continuous functionals on B(G), given by generators."""
    kind: str
    generators: tuple
    duality_property: bool = False
    space_dim: object = None      # int or "sequence"
    norm_kind: object = 2

    def evaluate(self, gen, B) -> complex:
        return gen(B)

    def evaluate_all(self, B) -> np.ndarray:
        return np.array([g(B) for g in self.generators], dtype=complex)

    # -- constructors ------------------------------------------------
    @staticmethod
    def nst(pairs, space_dim, p=2) -> "FunctionalFamily":
        gens = tuple(WotGenerator(phi, v) for phi, v in pairs)
        return FunctionalFamily(NST, gens, duality_property=False,
                                space_dim=space_dim,
                                norm_kind=check_norm_kind(p))

    @staticmethod
    def nst_basis(dim: int, p=2) -> "FunctionalFamily":
        """The full matrix-entry family T -> T[i, j]."""
        pairs = []
        for i in range(dim):
            for j in range(dim):
                pairs.append((ComplexVector.basis(i, dim, p),
                              ComplexVector.basis(j, dim, p)))
        return FunctionalFamily.nst(pairs, dim, p)

    @staticmethod
    def nst_random(dim: int, count: int, rng, p=2) -> "FunctionalFamily":
        pairs = []
        for _ in range(count):
            phi = ComplexVector.finite(
                rng.standard_normal(dim) + 1j * rng.standard_normal(dim), p)
            v = ComplexVector.finite(
                rng.standard_normal(dim) + 1j * rng.standard_normal(dim), p)
            pairs.append((phi, v))
        return FunctionalFamily.nst(pairs, dim, p)

    @staticmethod
    def npd(pair_lists, space_dim) -> "FunctionalFamily":
        """Sigma-weak generators; only meaningful on the Hilbert model
        (p = 2)."""
        gens = tuple(SigmaWeakGenerator(tuple(us), tuple(ws))
                     for us, ws in pair_lists)
        return FunctionalFamily(NPD, gens, duality_property=True,
                                space_dim=space_dim, norm_kind=2)

    @staticmethod
    def npd_random(dim: int, count: int, rng, terms: int = 3
                   ) -> "FunctionalFamily":
        pair_lists = []
        for _ in range(count):
            us, ws = [], []
            for t in range(terms):
                w8 = 2.0 ** (-t)          # geometric square-summable weights
                us.append(ComplexVector.finite(
                    w8 * (rng.standard_normal(dim)
                          + 1j * rng.standard_normal(dim)), 2))
                ws.append(ComplexVector.finite(
                    w8 * (rng.standard_normal(dim)
                          + 1j * rng.standard_normal(dim)), 2))
            pair_lists.append((us, ws))
        return FunctionalFamily.npd(pair_lists, dim)

    @staticmethod
    def custom(funcs, space_dim, p=2, duality=False) -> "FunctionalFamily":
        gens = tuple(f if isinstance(f, CustomGenerator)
                     else CustomGenerator(f) for f in funcs)
        return FunctionalFamily(CUSTOM, gens, duality_property=duality,
                                space_dim=space_dim,
                                norm_kind=check_norm_kind(p))


def nst_sequence(pairs, p=2) -> FunctionalFamily:
    gens = tuple(WotGenerator(phi, v) for phi, v in pairs)
    return FunctionalFamily(NST, gens, duality_property=False,
                            space_dim=SEQUENCE, norm_kind=check_norm_kind(p))


def npd_sequence(pair_lists) -> FunctionalFamily:
    gens = tuple(SigmaWeakGenerator(tuple(us), tuple(ws))
                 for us, ws in pair_lists)
    return FunctionalFamily(NPD, gens, duality_property=True,
                            space_dim=SEQUENCE, norm_kind=2)


# ---------------------------------------------------------------------------
# Functional vectors (finite model): omega as a length-n^2 coefficient array
# ---------------------------------------------------------------------------

def functional_vector(gen, dim: int) -> np.ndarray:
    """Coefficients c with omega(T) = sum_ij c[i, j] T[i, j], obtained by
    evaluating on the matrix units."""
    out = np.zeros((dim, dim), dtype=complex)
    for i in range(dim):
        for j in range(dim):
            unit = np.zeros((dim, dim), dtype=complex)
            unit[i, j] = 1.0
            out[i, j] = gen(unit)
    return out.ravel()


def compose_right(gen, A: np.ndarray, kind: str):
    """The functional T -> omega(T A), returned in the family's generator
    form when the family is structural."""
    if kind == NST:
        phi, v = gen.phi, gen.v
        return WotGenerator(phi, ComplexVector(A @ v.as_array(),
                                               v.space_tag, v.norm_kind))
    if kind == NPD:
        ws = tuple(ComplexVector(A @ w.as_array(), w.space_tag, 2)
                   for w in gen.ws)
        return SigmaWeakGenerator(gen.us, ws)
    return CustomGenerator(lambda T, g=gen, A=A: g(np.asarray(T) @ A),
                           "omega∘R")


def compose_left(gen, A: np.ndarray, kind: str):
    """The functional T -> omega(A T)."""
    if kind == NST:
        phi, v = gen.phi, gen.v
        newphi = ComplexVector(A.T @ phi.as_array(), phi.space_tag,
                               phi.norm_kind)
        return WotGenerator(newphi, v)
    if kind == NPD:
        us = tuple(ComplexVector(A.conj().T @ u.as_array(), u.space_tag, 2)
                   for u in gen.us)
        return SigmaWeakGenerator(us, gen.ws)
    return CustomGenerator(lambda T, g=gen, A=A: g(A @ np.asarray(T)),
                           "omega∘L")


@dataclass(frozen=True)
class AppropriatenessReport:
    separation_ok: bool
    closure_ok: bool
    duality_ok: bool
    worst_closure_residual: float
    passed: bool


def check_E_appropriate(N: FunctionalFamily, E: ResolutionOfIdentity,
                        sigma_samples: Sequence[BorelSetSpec],
                        rng=None, tol: float = 1e-9
                        ) -> AppropriatenessReport:
    """Adjudicate the three adequacy clauses of a functional family against
    a spectral measure: point separation on random operators (clause 2),
    closure under composition with multiplication by E(sigma) on either side
    (clause 3), and consistency of the declared duality flag.

    Raises NotAppropriate naming the failed clause.
    """
    if not E.is_finite:
        raise ValueError("appropriateness checks run on the finite model")
    if rng is None:
        rng = np.random.default_rng(0)
    dim = E.dim

    # clause (2): separation on random test operators
    for _ in range(16):
        T = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        scale = float(np.max(np.abs(T)))
        vals = np.abs(N.evaluate_all(T))
        if vals.size == 0 or np.max(vals) <= 1e-13 * scale:
            raise NotAppropriate(
                "(2)", "generators fail to separate a random operator")

    # clause (3): closure under one-sided multiplication by projections.
    # The structural kinds stay closed by re-forming generators (new vector
    # pairs / reweighted sequences); verify the re-formed functional agrees
    # with the composition on random operators.  A custom family is exactly
    # the span of its generators, so closure there is a span-membership
    # test on functional coefficient vectors.
    if N.kind == CUSTOM:
        gen_vecs = np.array([functional_vector(g, dim) for g in N.generators])
    tests = [rng.standard_normal((dim, dim))
             + 1j * rng.standard_normal((dim, dim)) for _ in range(4)]
    worst = 0.0
    for sigma in sigma_samples:
        P = project(E, sigma)
        for g in N.generators:
            for side, composed in (("right", compose_right(g, P, N.kind)),
                                   ("left", compose_left(g, P, N.kind))):
                if N.kind in (NST, NPD):
                    for T in tests:
                        direct = g(T @ P) if side == "right" else g(P @ T)
                        scale = max(1.0, abs(direct))
                        resid = abs(composed(T) - direct) / scale
                        worst = max(worst, resid)
                else:
                    target = functional_vector(composed, dim)
                    resid = _span_residual(gen_vecs, target)
                    worst = max(worst, resid)
                if worst > tol:
                    raise NotAppropriate(
                        "(3)", f"composition with E({sigma.label}) leaves "
                        f"the family (residual {worst:.3e})")

    duality_expected = N.kind == NPD
    duality_ok = (N.duality_property == duality_expected) \
        if N.kind in (NST, NPD) else True
    if not duality_ok:
        raise NotAppropriate("duality", "declared duality flag is "
                                        "inconsistent with the family kind")
    return AppropriatenessReport(True, True, duality_ok, worst, True)


def _span_residual(gen_vecs: np.ndarray, target: np.ndarray) -> float:
    if gen_vecs.size == 0:
        return float(np.linalg.norm(target))
    sol, *_ = np.linalg.lstsq(gen_vecs.T, target, rcond=None)
    resid = np.linalg.norm(gen_vecs.T @ sol - target)
    return float(resid / max(1.0, np.linalg.norm(target)))


def restrict_family(N: FunctionalFamily, sigma: BorelSetSpec,
                    E: ResolutionOfIdentity) -> FunctionalFamily:
    """The family pulled back to operators on the spectral subspace through
    the embedding T_sub -> T_sub E(sigma).

    Weak-operator generators restrict to (phi restricted, E(sigma) v);
    sigma-weak generators to the reweighted vector lists; custom generators
    compose with the embedding directly.  Operators on the subspace are
    represented in the ambient coordinates (T = E T E), so restricted
    generators evaluate on them verbatim.
    """
    if E.is_finite:
        P = project(E, sigma)
        if N.kind == NST:
            gens = tuple(compose_right(g, P, NST) for g in N.generators)
        elif N.kind == NPD:
            Pc = P.conj().T
            gens = tuple(
                SigmaWeakGenerator(
                    tuple(ComplexVector(Pc @ u.as_array(), u.space_tag, 2)
                          for u in g.us),
                    tuple(ComplexVector(P @ w.as_array(), w.space_tag, 2)
                          for w in g.ws))
                for g in N.generators)
        else:
            gens = tuple(
                CustomGenerator(lambda T, g=g, P=P: g(np.asarray(T) @ P),
                                "omega∘xi") for g in N.generators)
        return FunctionalFamily(N.kind, gens, N.duality_property,
                                N.space_dim, N.norm_kind)
    # Lazy model: the embedding multiplies by the coordinate mask.
    mask_op = project(E, sigma)
    if N.kind == NST:
        gens = tuple(WotGenerator(g.phi, mask_op.apply(g.v))
                     for g in N.generators)
    elif N.kind == NPD:
        gens = tuple(SigmaWeakGenerator(
            tuple(mask_op.apply(u) for u in g.us),
            tuple(mask_op.apply(w) for w in g.ws)) for g in N.generators)
    else:
        gens = tuple(CustomGenerator(
            lambda T, g=g, m=mask_op: g(T.matmul(m)), "omega∘xi")
            for g in N.generators)
    return FunctionalFamily(N.kind, gens, N.duality_property,
                            N.space_dim, N.norm_kind)


def xi_embedding(T_sub: np.ndarray, E: ResolutionOfIdentity,
                 sigma: BorelSetSpec) -> np.ndarray:
    """The embedding of B(G_sigma) into B(G): T_sub -> T_sub E(sigma)."""
    return np.asarray(T_sub) @ project(E, sigma)
