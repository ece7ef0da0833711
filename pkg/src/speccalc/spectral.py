"""Spectral data model.

A resolution of identity is represented either by its atoms (eigenvalue,
projection) on C^n — the diagonalizable-matrix model — or by a coordinate
spectrum generator on a sequence space, where the k-th projection is
implicitly the k-th coordinate projection.  Operators built on top of a
resolution act eigenvalue-wise; Borel sets are membership predicates so any
set-level statement stays expressible while atoms keep projections
computable.

All types are immutable after construction and all operations are pure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import (IllConditioned, NotCovering, NotDiagonalizable)
from .vectors import (SEQUENCE, ComplexVector, TailCertificate,
                      block_series_scan, check_norm_kind, op_norm, vec_norm)

ESS_SUP_INDEX_CAP = 10 ** 6
EIGENVALUE_MERGE_RTOL = 1e-8
CONDITION_CAP = 1e6


# ---------------------------------------------------------------------------
# Borel sets as predicates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BorelSetSpec:
    """A Borel subset of C given by a vectorized membership predicate."""
    membership: Callable[[np.ndarray], np.ndarray]
    bounded_hint: Optional[float] = None
    label: str = "set"

    def contains(self, lam):
        arr = np.asarray(lam, dtype=complex)
        res = np.asarray(self.membership(arr), dtype=bool)
        return bool(res) if np.ndim(lam) == 0 else res

    def intersect(self, other: "BorelSetSpec") -> "BorelSetSpec":
        hints = [h for h in (self.bounded_hint, other.bounded_hint)
                 if h is not None]
        return BorelSetSpec(
            lambda z, a=self.membership, b=other.membership: a(z) & b(z),
            min(hints) if hints else None,
            f"({self.label})&({other.label})")

    def union(self, other: "BorelSetSpec") -> "BorelSetSpec":
        hint = None
        if self.bounded_hint is not None and other.bounded_hint is not None:
            hint = max(self.bounded_hint, other.bounded_hint)
        return BorelSetSpec(
            lambda z, a=self.membership, b=other.membership: a(z) | b(z),
            hint, f"({self.label})|({other.label})")

    def complement(self) -> "BorelSetSpec":
        return BorelSetSpec(lambda z, a=self.membership: ~a(z),
                            None, f"~({self.label})")

    # -- constructors ----------------------------------------------
    @staticmethod
    def full() -> "BorelSetSpec":
        return BorelSetSpec(lambda z: np.ones(np.shape(z), dtype=bool),
                            None, "C")

    @staticmethod
    def empty() -> "BorelSetSpec":
        return BorelSetSpec(lambda z: np.zeros(np.shape(z), dtype=bool),
                            0.0, "empty")

    @staticmethod
    def ball(radius: float, center: complex = 0.0) -> "BorelSetSpec":
        c = complex(center)
        return BorelSetSpec(lambda z: np.abs(z - c) < radius,
                            abs(c) + radius, f"ball({radius})")

    @staticmethod
    def square(half: float) -> "BorelSetSpec":
        return BorelSetSpec(
            lambda z: (np.abs(z.real) < half) & (np.abs(z.imag) < half),
            half * np.sqrt(2.0), f"square({half})")

    @staticmethod
    def level_set(fn: Callable[[np.ndarray], np.ndarray],
                  bound: float, label: str = "g") -> "BorelSetSpec":
        """The sublevel set {lam : |fn(lam)| <= bound}."""
        return BorelSetSpec(
            lambda z, f=fn: np.abs(np.asarray(f(z), dtype=complex)) <= bound,
            None, f"|{label}|<={bound}")

    @staticmethod
    def from_predicate(pred: Callable[[complex], bool],
                       bounded_hint=None, label="set") -> "BorelSetSpec":
        vec = np.vectorize(pred, otypes=[bool])
        return BorelSetSpec(lambda z: vec(z), bounded_hint, label)


# ---------------------------------------------------------------------------
# Lazy diagonal operators
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DiagonalOperator:
    """A bounded operator on the sequence model acting entrywise."""
    entry: Callable[[np.ndarray], np.ndarray]
    label: str = ""

    def entries(self, ks) -> np.ndarray:
        ks = np.asarray(ks, dtype=np.int64)
        return np.asarray(self.entry(ks), dtype=complex)

    def apply(self, x: ComplexVector) -> ComplexVector:
        if x.is_finite:
            raise ValueError("diagonal operator expects a sequence vector")
        ks, vals = x.support_values()
        new = {int(k): complex(v) for k, v in
               zip(ks, self.entries(ks) * vals) if v != 0}
        tail = x.tail
        if tail is not None:
            base, ent = tail.term, self.entry
            tail = TailCertificate(
                lambda kk, b=base, e=ent: np.asarray(e(np.asarray(kk)),
                                                     dtype=complex)
                * np.asarray(b(kk), dtype=complex),
                tail.start, tail.label)
        return ComplexVector(new, SEQUENCE, x.norm_kind, tail)

    def scale(self, c) -> "DiagonalOperator":
        c = complex(c)
        return DiagonalOperator(lambda ks, e=self.entry: c * np.asarray(e(ks)),
                                self.label)

    def add(self, other: "DiagonalOperator") -> "DiagonalOperator":
        return DiagonalOperator(
            lambda ks, a=self.entry, b=other.entry:
            np.asarray(a(ks), dtype=complex) + np.asarray(b(ks), dtype=complex),
            f"{self.label}+{other.label}")

    def matmul(self, other: "DiagonalOperator") -> "DiagonalOperator":
        return DiagonalOperator(
            lambda ks, a=self.entry, b=other.entry:
            np.asarray(a(ks), dtype=complex) * np.asarray(b(ks), dtype=complex),
            f"{self.label}*{other.label}")

    def norm_estimate(self, cap: int = 2 ** 14):
        """Sup of |entries| over a doubling sweep; inf when a monotone
        growth certificate triggers."""
        return lazy_sup(lambda ks: np.abs(self.entries(ks)), cap=cap)


def lazy_sup(values_fn: Callable[[np.ndarray], np.ndarray],
             cap: int = ESS_SUP_INDEX_CAP) -> float:
    """Sup of a nonnegative index function, swept in doubling blocks up to
    ``cap``.  Returns inf early when four consecutive block maxima increase
    monotonically past 1e12, or when any value overflows."""
    lo, hi = 0, 1
    maxima = []
    sup = 0.0
    while lo < cap:
        hi = min(max(2 * hi, lo + 1), cap)
        ks = np.arange(lo, hi, dtype=np.int64)
        with np.errstate(over="ignore", invalid="ignore"):
            vals = np.asarray(values_fn(ks), dtype=float)
        if not np.all(np.isfinite(vals)):
            return np.inf
        m = float(vals.max(initial=0.0))
        maxima.append(m)
        sup = max(sup, m)
        if len(maxima) >= 4:
            last = maxima[-4:]
            if all(last[i + 1] > last[i] for i in range(3)) and last[-1] > 1e12:
                return np.inf
        lo = hi
    # Growth certificate at the cap: block maxima still increasing by a
    # clear factor certify an unbounded symbol (power-like growth), while a
    # sup approached from below plateaus and stays finite.
    if len(maxima) >= 4:
        last = maxima[-4:]
        if all(last[i + 1] > last[i] for i in range(3)) \
                and last[0] > 0.0 and last[-1] >= 2.0 * last[0]:
            return np.inf
    return sup


# ---------------------------------------------------------------------------
# Resolutions of identity
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ResolutionOfIdentity:
    """A countably additive spectral measure.

    Finite model: ``eigenvalues`` (m,) with ``projections`` (m, n, n) whose
    sum is ``unit`` (the ambient identity; a genuine projection when the
    resolution lives on a spectral subspace).  Lazy model: ``spectrum_gen``
    maps coordinate indices to eigenvalues and ``mask`` optionally cuts the
    measure down to a subspace.  ``projection_bound`` is the finite constant
    M dominating every tested projection norm.
    """
    kind: str                       # "finite" | "lazy"
    norm_kind: object
    eigenvalues: Optional[np.ndarray] = None
    projections: Optional[np.ndarray] = None
    unit: Optional[np.ndarray] = None
    spectrum_gen: Optional[Callable[[np.ndarray], np.ndarray]] = None
    mask: Optional[BorelSetSpec] = None
    projection_bound: float = 1.0

    # -- constructors ----------------------------------------------
    @staticmethod
    def finite(eigenvalues, projections, p=2, projection_bound=None,
               unit=None) -> "ResolutionOfIdentity":
        lams = np.asarray(eigenvalues, dtype=complex)
        projs = np.asarray(projections, dtype=complex)
        if projs.ndim != 3 or projs.shape[1] != projs.shape[2]:
            raise ValueError("projections must be a stack of square matrices")
        if lams.shape[0] != projs.shape[0]:
            raise ValueError("one projection per eigenvalue required")
        if lams.shape[0] > 1:
            scale = max(1.0, float(np.max(np.abs(lams))))
            d = np.abs(lams[:, None] - lams[None, :])
            np.fill_diagonal(d, np.inf)
            if d.min() <= EIGENVALUE_MERGE_RTOL * scale:
                raise ValueError("eigenvalues within one resolution must be "
                                 "pairwise distinct (merge atoms first)")
        if unit is None:
            unit = np.eye(projs.shape[1], dtype=complex)
        if projection_bound is None:
            norms = [op_norm(P, p) for P in projs]
            projection_bound = max(1.0, float(np.sum(norms)))
        return ResolutionOfIdentity("finite", check_norm_kind(p),
                                    eigenvalues=lams, projections=projs,
                                    unit=np.asarray(unit, dtype=complex),
                                    projection_bound=float(projection_bound))

    @staticmethod
    def lazy(spectrum_gen, p=2, mask=None) -> "ResolutionOfIdentity":
        gen = _vectorize_gen(spectrum_gen)
        return ResolutionOfIdentity("lazy", check_norm_kind(p),
                                    spectrum_gen=gen, mask=mask,
                                    projection_bound=1.0)

    # -- queries -----------------------------------------------------
    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    @property
    def dim(self) -> int:
        return self.projections.shape[1]

    def eigenvalues_at(self, ks) -> np.ndarray:
        ks = np.asarray(ks, dtype=np.int64)
        return np.asarray(self.spectrum_gen(ks), dtype=complex)

    def atom_mask(self, sigma: BorelSetSpec) -> np.ndarray:
        inside = sigma.contains(self.eigenvalues)
        return np.asarray(inside, dtype=bool)

    def to_json_dict(self):
        if not self.is_finite:
            raise ValueError("only finite resolutions serialize")
        return {
            "atoms": [
                {"lambda": [float(l.real), float(l.imag)],
                 "projection": [[[float(x.real), float(x.imag)] for x in row]
                                for row in P]}
                for l, P in zip(self.eigenvalues, self.projections)],
            "M": float(self.projection_bound),
        }

    @staticmethod
    def from_json_dict(data, p=2) -> "ResolutionOfIdentity":
        lams = [complex(a["lambda"][0], a["lambda"][1]) for a in data["atoms"]]
        projs = [np.array([[complex(re, im) for re, im in row]
                           for row in a["projection"]])
                 for a in data["atoms"]]
        return ResolutionOfIdentity.finite(np.array(lams), np.array(projs),
                                           p=p, projection_bound=data["M"])


def _vectorize_gen(gen):
    try:
        out = gen(np.arange(2, dtype=np.int64))
        if np.shape(out) == (2,):
            return lambda ks: np.asarray(gen(np.asarray(ks, dtype=np.int64)),
                                         dtype=complex)
    except Exception:
        pass
    vec = np.vectorize(gen, otypes=[complex])
    return lambda ks: vec(np.asarray(ks, dtype=np.int64))


def project(E: ResolutionOfIdentity, sigma: BorelSetSpec):
    """The spectral projection E(sigma): a matrix for the finite model, a
    coordinate mask (diagonal operator) for the lazy model."""
    if E.is_finite:
        mask = E.atom_mask(sigma)
        if not mask.any():
            return np.zeros_like(E.unit)
        return E.projections[mask].sum(axis=0)
    inner = sigma if E.mask is None else sigma.intersect(E.mask)
    gen = E.spectrum_gen
    return DiagonalOperator(
        lambda ks, g=gen, s=inner: s.contains(np.asarray(g(ks),
                                                         dtype=complex))
        .astype(complex),
        f"E({sigma.label})")


def resolution_from_diagonalizable(a, tol: float = 1e-9, p=2,
                                   condition_cap: float = CONDITION_CAP
                                   ) -> ResolutionOfIdentity:
    """Eigenprojection family of a diagonalizable matrix.

    Eigenvalues within a relative distance of 1e-8 merge into single atoms;
    a merged group whose eigenvector block is rank-deficient means the
    matrix is defective.  The inverse eigenvector matrix is Newton-refined
    once so that P_j P_k residuals sit near the rounding floor rather than
    the raw LU floor.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    if tol <= 0:
        raise ValueError("tol must be positive")
    n = a.shape[0]
    lams, vecs = np.linalg.eig(a)
    cond = np.linalg.cond(vecs)
    if not np.isfinite(cond) or cond > condition_cap:
        # Distinguish a defective matrix from a merely nasty one: nearly
        # equal eigenvalues with a degenerate eigenvector block mean Jordan
        # structure.
        if _has_defective_group(lams, vecs):
            raise NotDiagonalizable(
                f"defective within tolerance (eigenvector cond {cond:.3e})")
        raise IllConditioned(
            f"eigenvector condition number {cond:.3e} exceeds cap "
            f"{condition_cap:.1e}")
    inv = np.linalg.inv(vecs)
    inv = inv @ (2.0 * np.eye(n) - vecs @ inv)   # one Newton step
    order = np.lexsort((lams.imag, lams.real))
    lams, vecs_ord = lams[order], vecs[:, order]
    inv_ord = inv[order, :]
    groups = _merge_groups(lams)
    atoms_l, atoms_p = [], []
    for idx in groups:
        cols = vecs_ord[:, idx]
        if len(idx) > 1:
            s = np.linalg.svd(cols, compute_uv=False)
            if s[-1] <= 1e-8 * s[0]:
                raise NotDiagonalizable(
                    "repeated eigenvalue with deficient eigenspace")
        P = cols @ inv_ord[idx, :]
        atoms_l.append(lams[idx].mean())
        atoms_p.append(P)
    lams_arr = np.array(atoms_l)
    projs = np.array(atoms_p)
    recon = np.einsum("k,kij->ij", lams_arr, projs)
    err = op_norm(recon - a, p) / max(1.0, op_norm(a, p))
    if err > tol:
        raise NotDiagonalizable(
            f"reconstruction error {err:.3e} exceeds tol {tol:.1e}")
    m = max(1.0, float(op_norm(vecs, p) * op_norm(inv, p)))
    return ResolutionOfIdentity.finite(lams_arr, projs, p=p,
                                       projection_bound=m)


def _merge_groups(sorted_lams):
    scale = max(1.0, float(np.max(np.abs(sorted_lams))))
    groups, current = [], [0]
    for i in range(1, len(sorted_lams)):
        if abs(sorted_lams[i] - sorted_lams[current[0]]) \
                <= EIGENVALUE_MERGE_RTOL * scale:
            current.append(i)
        else:
            groups.append(current)
            current = [i]
    groups.append(current)
    return groups


def _has_defective_group(lams, vecs):
    order = np.lexsort((lams.imag, lams.real))
    lams_s, vecs_s = lams[order], vecs[:, order]
    for idx in _merge_groups(lams_s):
        if len(idx) > 1:
            s = np.linalg.svd(vecs_s[:, idx], compute_uv=False)
            if s[-1] <= 1e-8 * s[0]:
                return True
    return False


# ---------------------------------------------------------------------------
# Scalar type spectral operators
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ScalarSpectralOperator:
    """Either a diagonalizable matrix with its eigenprojections, or an
    unbounded diagonal operator on a sequence space.  ``coords`` maps matrix
    coordinates back to original sequence indices when the operator arose by
    truncating a lazy model to a bounded set."""
    resolution: ResolutionOfIdentity
    kind: str                      # "finite" | "lazy"
    coords: Optional[np.ndarray] = None

    @staticmethod
    def finite_from_matrix(a, tol: float = 1e-9, p=2) \
            -> "ScalarSpectralOperator":
        return ScalarSpectralOperator(
            resolution_from_diagonalizable(a, tol=tol, p=p), "finite")

    @staticmethod
    def from_resolution(E: ResolutionOfIdentity) -> "ScalarSpectralOperator":
        return ScalarSpectralOperator(E, E.kind)

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    @property
    def norm_kind(self):
        return self.resolution.norm_kind

    @property
    def dim(self):
        return self.resolution.dim if self.is_finite else SEQUENCE

    def matrix(self) -> np.ndarray:
        E = self.resolution
        return np.einsum("k,kij->ij", E.eigenvalues, E.projections)

    def spectrum_points(self, count: int = 64) -> np.ndarray:
        """Eigenvalues in the finite model; an index sample of the generator
        in the lazy model (the spectrum is the closure of its range)."""
        if self.is_finite:
            return self.resolution.eigenvalues.copy()
        ks = np.arange(count, dtype=np.int64)
        lams = self.resolution.eigenvalues_at(ks)
        if self.resolution.mask is not None:
            lams = lams[self.resolution.mask.contains(lams)]
        return lams

    # -- domain ------------------------------------------------------
    def domain_contains(self, x: ComplexVector) -> bool:
        """x in Dom(R) iff the entrywise product (lam_k x_k) has finite l^p
        norm.  Exact on explicit support; tails are decided by the
        doubling-block series test."""
        if self.is_finite:
            return True
        if x.tail is None:
            return True
        E = self.resolution
        term, p = x.tail.term, x.norm_kind
        converged, _ = block_series_scan(
            lambda ks: np.abs(E.eigenvalues_at(ks)
                              * np.asarray(term(ks), dtype=complex)),
            x.tail.start, p)
        return converged

    def apply_vec(self, x: ComplexVector) -> ComplexVector:
        from .errors import DomainError
        if self.is_finite:
            return ComplexVector(self.matrix() @ x.as_array(),
                                 x.space_tag, x.norm_kind)
        if not self.domain_contains(x):
            raise DomainError("probe lies outside Dom(R): the image series "
                              "fails the partial-sum growth test")
        E = self.resolution
        mask = E.mask
        def ent(ks):
            lam = E.eigenvalues_at(ks)
            if mask is not None:
                lam = lam * mask.contains(lam)
            return lam
        return DiagonalOperator(ent, "R").apply(x)


def lazy_diagonal(spectrum_gen, p=2) -> ScalarSpectralOperator:
    """Unbounded diagonal operator with the given coordinate spectrum."""
    return ScalarSpectralOperator(ResolutionOfIdentity.lazy(spectrum_gen, p=p),
                                  "lazy")


def restrict(R: ScalarSpectralOperator, sigma: BorelSetSpec
             ) -> ScalarSpectralOperator:
    """The part of R in the spectral subspace of ``sigma``.

    Finite model: atoms are filtered by membership and the subspace identity
    becomes E(sigma).  Lazy model: when ``sigma`` carries a bounded hint and
    the spectrum escapes it monotonically, the restriction materializes as a
    finite diagonal matrix over the surviving coordinates; otherwise the
    restriction stays lazy behind a membership mask.
    """
    E = R.resolution
    if R.is_finite:
        mask = E.atom_mask(sigma)
        sub_unit = project(E, sigma)
        lams = E.eigenvalues[mask]
        projs = E.projections[mask]
        if lams.size == 0:
            lams = np.zeros(0, dtype=complex)
            projs = np.zeros((0,) + E.unit.shape, dtype=complex)
        sub = ResolutionOfIdentity.finite(
            lams, projs, p=E.norm_kind,
            projection_bound=E.projection_bound, unit=sub_unit) \
            if lams.size else ResolutionOfIdentity(
                "finite", E.norm_kind, eigenvalues=lams, projections=projs,
                unit=sub_unit, projection_bound=E.projection_bound)
        return ScalarSpectralOperator(sub, "finite", coords=R.coords)
    if sigma.bounded_hint is not None:
        coords = _enumerate_inside(E, sigma)
        if coords is not None:
            lams = E.eigenvalues_at(coords)
            d = coords.size
            projs = np.zeros((d, d, d), dtype=complex)
            for i in range(d):
                projs[i, i, i] = 1.0
            sub = ResolutionOfIdentity.finite(
                lams, projs, p=E.norm_kind, projection_bound=1.0) \
                if d else ResolutionOfIdentity(
                    "finite", E.norm_kind,
                    eigenvalues=np.zeros(0, dtype=complex),
                    projections=np.zeros((0, 0, 0), dtype=complex),
                    unit=np.zeros((0, 0), dtype=complex),
                    projection_bound=1.0)
            return ScalarSpectralOperator(sub, "finite", coords=coords)
    inner = sigma if E.mask is None else sigma.intersect(E.mask)
    return ScalarSpectralOperator(
        ResolutionOfIdentity("lazy", E.norm_kind,
                             spectrum_gen=E.spectrum_gen, mask=inner,
                             projection_bound=1.0),
        "lazy")


def _enumerate_inside(E: ResolutionOfIdentity, sigma: BorelSetSpec,
                      escape_run: int = 256, cap: int = 2 ** 16):
    """Indices whose eigenvalue lies in ``sigma``, provided the spectrum
    escapes the bounded hint for ``escape_run`` consecutive indices (the
    eventual-monotone-escape assumption).  Returns None when undecidable
    within ``cap``."""
    hint = sigma.bounded_hint * (1.0 + 1e-12)
    found = []
    run = 0
    lo, block = 0, 256
    while lo < cap:
        ks = np.arange(lo, min(lo + block, cap), dtype=np.int64)
        lams = E.eigenvalues_at(ks)
        if E.mask is not None:
            ok = sigma.contains(lams) & E.mask.contains(lams)
        else:
            ok = sigma.contains(lams)
        found.extend(int(k) for k, o in zip(ks, ok) if o)
        for mag in np.abs(lams):
            run = run + 1 if mag > hint else 0
        if run >= escape_run:
            return np.array(found, dtype=np.int64)
        lo += block
    return None


def compress_to_coords(x: ComplexVector, coords: np.ndarray,
                       p) -> ComplexVector:
    """Sequence vector -> finite vector over the materialized coordinates."""
    lookup = {int(k): i for i, k in enumerate(coords)}
    out = np.zeros(coords.size, dtype=complex)
    ks, vals = x.support_values()
    for k, v in zip(ks, vals):
        if int(k) in lookup:
            out[lookup[int(k)]] = v
    return ComplexVector.finite(out, p)


# ---------------------------------------------------------------------------
# Covering sequences
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ESequence:
    """Monotone sequence of Borel sets covering the spectral support, so
    projections along it converge strongly to the identity."""
    sets: Callable[[int], BorelSetSpec]
    scheme: str

    def at(self, n: int) -> BorelSetSpec:
        if n < 1:
            raise ValueError("covering sequences are indexed from 1")
        return self.sets(n)


def make_E_sequence(E: ResolutionOfIdentity, scheme: str = "balls",
                    symbol=None) -> ESequence:
    """Standard covering sequences: growing balls, growing squares, or the
    sublevel sets {|g| <= n} of a symbol g evaluable on the spectrum."""
    scheme = scheme.lower()
    if scheme == "balls":
        return ESequence(lambda n: BorelSetSpec.ball(float(n)), "balls")
    if scheme == "squares":
        return ESequence(lambda n: BorelSetSpec.square(float(n)), "squares")
    if scheme == "levelsets":
        if symbol is None:
            raise ValueError("levelsets scheme needs a symbol")
        fn = symbol.eval if hasattr(symbol, "eval") else symbol
        label = getattr(symbol, "label", "g")
        return ESequence(
            lambda n: BorelSetSpec.level_set(fn, float(n), label),
            "levelsets")
    raise ValueError(f"unknown covering scheme {scheme!r}")


def check_esequence(E: ResolutionOfIdentity, seq: ESequence,
                    n_max: int = 8, sample_points=None) -> bool:
    """Extensional check of monotonicity and coverage on atoms (finite
    model) or on the sampled points supplied."""
    if sample_points is None:
        if E.is_finite:
            sample_points = E.eigenvalues
        else:
            sample_points = E.eigenvalues_at(np.arange(32))
    pts = np.asarray(sample_points, dtype=complex)
    prev = None
    covered = np.zeros(pts.shape, dtype=bool)
    for n in range(1, n_max + 1):
        cur = seq.at(n).contains(pts)
        if prev is not None and np.any(prev & ~cur):
            return False
        covered |= cur
        prev = cur
    n = n_max
    while not covered.all() and n < 10 ** 6:
        n *= 2
        covered |= seq.at(n).contains(pts)
    return bool(covered.all())


@dataclass(frozen=True)
class ConvergenceReport:
    probe_residuals: tuple
    n_values: tuple
    passed: bool
    message: str = ""


def strong_limit_check(E: ResolutionOfIdentity, esequence: ESequence,
                       probes: Sequence[ComplexVector], n_max: int = 12,
                       tol: float = 1e-10) -> ConvergenceReport:
    """Residuals ||E(sigma_n)x - x|| per probe, verified nonincreasing and
    reaching ``tol`` by ``n_max``.  Raises NotCovering when a residual floor
    survives."""
    all_res = []
    for x in probes:
        if x.norm() == 0:
            raise ValueError("probes must be nonzero")
        res = []
        for n in range(1, n_max + 1):
            sigma = esequence.at(n)
            if E.is_finite:
                P = project(E, sigma)
                arr = x.as_array()
                res.append(vec_norm(P @ arr - arr, E.norm_kind))
            else:
                res.append(_lazy_mask_residual(E, sigma, x))
        res = np.array(res)
        if np.any(res[1:] > res[:-1] + 1e-12):
            raise NotCovering("projection residuals are not nonincreasing")
        if res[-1] > tol:
            raise NotCovering(
                f"residual floor {res[-1]:.3e} above tolerance {tol:.1e}")
        all_res.append(tuple(float(r) for r in res))
    return ConvergenceReport(tuple(all_res),
                             tuple(range(1, n_max + 1)), True)


def _lazy_mask_residual(E, sigma, x: ComplexVector) -> float:
    ks, vals = x.support_values()
    lam = E.eigenvalues_at(ks) if ks.size else np.zeros(0, dtype=complex)
    outside = ~sigma.contains(lam) if ks.size else np.zeros(0, dtype=bool)
    head = vec_norm(vals[outside], x.norm_kind)
    if x.tail is None:
        return head
    term, gen = x.tail.term, E.spectrum_gen
    def tail_term(kk):
        lamk = np.asarray(gen(kk), dtype=complex)
        keep = ~sigma.contains(lamk)
        return np.asarray(term(kk), dtype=complex) * keep
    converged, est = block_series_scan(
        lambda kk: np.abs(tail_term(kk)), x.tail.start, x.norm_kind)
    if not converged:
        return np.inf
    p = x.norm_kind
    if p == np.inf:
        return max(head, est)
    return float((head ** p + est) ** (1.0 / p))
