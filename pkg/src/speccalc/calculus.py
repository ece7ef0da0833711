"""Symbol calculus over a spectral resolution: essential sup norms,
truncated application, bounded application with the 4M norm bound, and the
restriction identities relating f(R) to spectral subspaces."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError, IdentityViolated, Unbounded
from .spectral import (ESS_SUP_INDEX_CAP, BorelSetSpec, DiagonalOperator,
                       ResolutionOfIdentity, ScalarSpectralOperator, lazy_sup,
                       project, restrict)
from .symbols import BorelSymbol, zero_extension
from .vectors import ComplexVector, block_series_scan, op_norm, vec_norm


def ess_sup(E: ResolutionOfIdentity, f: BorelSymbol,
            U: Optional[BorelSetSpec] = None,
            index_cap: int = ESS_SUP_INDEX_CAP) -> float:
    """Essential sup of |f| with respect to E over U.

    Exact for the atomic finite model: the max of |f| over atoms inside U
    (sets missing every atom are null for E).  For the lazy model the
    spectrum is swept in doubling blocks up to ``index_cap``; a monotone
    growth certificate on |f(lam_k)| returns the +inf sentinel.
    """
    if E.is_finite:
        if E.eigenvalues.size == 0:
            return 0.0
        lams = E.eigenvalues
        keep = np.array([op_norm(P, E.norm_kind) > 0.0
                         for P in E.projections])
        if U is not None:
            keep &= U.contains(lams)
        if not keep.any():
            return 0.0
        with np.errstate(over="ignore", invalid="ignore"):
            vals = np.abs(f(lams[keep]))
        return float(np.max(vals)) if np.all(np.isfinite(vals)) else np.inf

    def block(ks):
        lam = E.eigenvalues_at(ks)
        keep = np.ones(lam.shape, dtype=bool)
        if E.mask is not None:
            keep &= E.mask.contains(lam)
        if U is not None:
            keep &= U.contains(lam)
        with np.errstate(over="ignore", invalid="ignore"):
            vals = np.abs(f(lam))
        vals = np.where(keep, vals, 0.0)
        # A masked-out overflow must not poison the sweep.
        vals = np.where(keep, vals, 0.0)
        return np.where(np.isfinite(vals) | ~keep, vals, np.inf)

    return lazy_sup(block, cap=index_cap)


def apply(R: ScalarSpectralOperator, f: BorelSymbol, x: ComplexVector,
          level: Optional[float] = None) -> ComplexVector:
    """f(R)x via level truncations.

    With ``level`` = n only atoms where |f| <= n act (the level-n truncated
    symbol); with ``level`` = None the untruncated limit is taken, which for
    finite models stabilizes exactly once n >= max |f(lam_k)|.  On the lazy
    model the action is exact on the probe's support, and a tail-certified
    probe is admitted only when the image series passes the doubling-block
    summability test.
    """
    E = R.resolution
    if R.is_finite:
        arr = x.as_array()
        vals = f(E.eigenvalues) if E.eigenvalues.size else \
            np.zeros(0, dtype=complex)
        if level is not None:
            vals = vals * (np.abs(vals) <= level)
        out = np.zeros_like(arr)
        for v, P in zip(vals, E.projections):
            out = out + v * (P @ arr)
        return ComplexVector(out, x.space_tag, x.norm_kind)

    if x.is_finite:
        raise ValueError("lazy operator expects sequence probes")
    mask = E.mask

    def diag(ks):
        lam = E.eigenvalues_at(ks)
        vals = np.asarray(f(lam), dtype=complex)
        if mask is not None:
            vals = vals * mask.contains(lam)
        if level is not None:
            vals = vals * (np.abs(vals) <= level)
        return vals

    if x.tail is not None and level is None:
        term = x.tail.term
        converged, _ = block_series_scan(
            lambda ks: np.abs(diag(ks) * np.asarray(term(ks), dtype=complex)),
            x.tail.start, x.norm_kind)
        if not converged:
            raise DomainError(
                f"probe lies outside Dom({f.label}(R)): image series fails "
                "the partial-sum growth test")
    return DiagonalOperator(diag, f"{f.label}(R)").apply(x)


def apply_bounded(R: ScalarSpectralOperator, f: BorelSymbol,
                  U: Optional[BorelSetSpec] = None):
    """The bounded operator f(R) when f is E-essentially bounded, with the
    norm bound ||f(R)|| <= 4 M ||f||_inf^E verified on the result.

    Returns a matrix for the finite model, a diagonal operator for the lazy
    model.  Raises Unbounded when the essential sup is infinite.
    """
    E = R.resolution
    bound = ess_sup(E, f, U)
    if not np.isfinite(bound):
        raise Unbounded(f"{f.label} is not E-essentially bounded")
    cap = 4.0 * E.projection_bound * bound
    if R.is_finite:
        vals = f(E.eigenvalues) if E.eigenvalues.size else \
            np.zeros(0, dtype=complex)
        if U is not None and E.eigenvalues.size:
            vals = vals * U.contains(E.eigenvalues)
        op = np.einsum("k,kij->ij", vals, E.projections) \
            if vals.size else np.zeros_like(E.unit)
        nrm = op_norm(op, E.norm_kind)
        if nrm > cap * (1.0 + 1e-9) + 1e-12:
            raise IdentityViolated(
                f"||{f.label}(R)|| = {nrm:.6e} exceeds 4M bound {cap:.6e}")
        return op

    mask = E.mask

    def diag(ks):
        lam = E.eigenvalues_at(ks)
        vals = np.asarray(f(lam), dtype=complex)
        keep = np.ones(lam.shape, dtype=bool)
        if mask is not None:
            keep &= mask.contains(lam)
        if U is not None:
            keep &= U.contains(lam)
        return vals * keep

    op = DiagonalOperator(diag, f"{f.label}(R)")
    nrm = op.norm_estimate()
    if np.isfinite(nrm) and nrm > cap * (1.0 + 1e-9) + 1e-12:
        raise IdentityViolated(
            f"||{f.label}(R)|| estimate {nrm:.6e} exceeds 4M bound {cap:.6e}")
    return op


def symbol_image_operator(R: ScalarSpectralOperator, f: BorelSymbol
                          ) -> ScalarSpectralOperator:
    """The scalar type spectral operator f(R) viewed as an operator with its
    own resolution: atoms (f(lam_k), P_k) with equal values merged, or the
    composed generator in the lazy model.  Used for operator scaling t*R and
    for composition checks."""
    E = R.resolution
    if R.is_finite:
        if E.eigenvalues.size == 0:
            return R
        vals = f(E.eigenvalues)
        scale = max(1.0, float(np.max(np.abs(vals))))
        merged_vals, merged_projs = [], []
        used = np.zeros(vals.size, dtype=bool)
        for i in range(vals.size):
            if used[i]:
                continue
            group = np.abs(vals - vals[i]) <= 1e-8 * scale
            group &= ~used
            used |= group
            merged_vals.append(vals[group][0])
            merged_projs.append(E.projections[group].sum(axis=0))
        sub = ResolutionOfIdentity.finite(
            np.array(merged_vals), np.array(merged_projs), p=E.norm_kind,
            projection_bound=E.projection_bound, unit=E.unit)
        return ScalarSpectralOperator(sub, "finite", coords=R.coords)
    gen, mask = E.spectrum_gen, E.mask

    def new_gen(ks):
        lam = np.asarray(gen(ks), dtype=complex)
        vals = np.asarray(f.eval(lam), dtype=complex)
        if mask is not None:
            vals = vals * mask.contains(lam)
        return vals

    return ScalarSpectralOperator(
        ResolutionOfIdentity("lazy", E.norm_kind, spectrum_gen=new_gen,
                             mask=None, projection_bound=1.0),
        "lazy")


def scale_operator(R: ScalarSpectralOperator, t) -> ScalarSpectralOperator:
    t = complex(t)
    return symbol_image_operator(
        R, BorelSymbol(lambda z, t=t: t * np.asarray(z, dtype=complex),
                       lambda z, t=t: t * np.ones_like(np.asarray(z, dtype=complex)),
                       None, f"{t:g}*id" if t.imag == 0 else f"{t}*id"))


@dataclass(frozen=True)
class KeyLemmaReport:
    restriction_residual: float
    projection_residual: float
    bounded_product_residual: float
    norm_bound_ok: bool
    bounded_norm: float
    bound_cap: float
    passed: bool


def key_lemma_check(R: ScalarSpectralOperator, f: BorelSymbol,
                    sigma: BorelSetSpec, probes: Sequence[ComplexVector],
                    tol: float = 1e-10,
                    deltas: Sequence[BorelSetSpec] = ()) -> KeyLemmaReport:
    """Verify the three restriction identities extensionally.

    (1) the restriction of R to the spectral subspace of sigma carries the
        restricted resolution: E_sub(delta) = E(sigma & delta) on sampled
        deltas;
    (2) f(R) restricted to the subspace equals f applied to the restricted
        operator, probe by probe, and f(R) E(sigma) x = f(R_sub) E(sigma) x;
    (3) when f(sigma & spectrum) is bounded, f(R) E(sigma) is a bounded
        operator with norm <= 4 M sup |f| over sigma & spectrum.

    Residuals above tolerance raise IdentityViolated: the identities hold
    exactly in the models, so a miss is an implementation bug.
    """
    E = R.resolution
    R_sub = restrict(R, sigma)
    restriction_res = 0.0
    if R.is_finite:
        for delta in deltas:
            lhs = project(R_sub.resolution, delta)
            rhs = project(E, sigma.intersect(delta))
            restriction_res = max(restriction_res,
                                  op_norm(lhs - rhs, E.norm_kind)
                                  / max(1.0, op_norm(rhs, E.norm_kind)))

    proj_res = 0.0
    for x in probes:
        px = _project_probe(R, sigma, x)
        lhs = apply(R, f, px)
        rhs = _apply_on_restricted(R_sub, f, px, R)
        num = lhs.sub(rhs).norm()
        den = max(1.0, px.norm())
        proj_res = max(proj_res, num / den)

    sup_on = ess_sup(E, f, sigma)
    bounded_res = 0.0
    norm_ok = True
    nrm = np.nan
    cap = 4.0 * E.projection_bound * (sup_on if np.isfinite(sup_on) else np.inf)
    if np.isfinite(sup_on):
        fz = zero_extension(f, sigma)
        bounded = apply_bounded(R, fz)
        if R.is_finite:
            nrm = op_norm(bounded, E.norm_kind)
            for x in probes:
                px = _project_probe(R, sigma, x)
                lhs = apply(R, f, px)
                rhs = ComplexVector(bounded @ x.as_array(), x.space_tag,
                                    x.norm_kind)
                bounded_res = max(bounded_res,
                                  lhs.sub(rhs).norm() / max(1.0, x.norm()))
        else:
            nrm = bounded.norm_estimate()
            for x in probes:
                px = _project_probe(R, sigma, x)
                lhs = apply(R, f, px)
                rhs = bounded.apply(x)
                bounded_res = max(bounded_res,
                                  lhs.sub(rhs).norm() / max(1.0, x.norm()))
        norm_ok = nrm <= cap * (1.0 + 1e-9) + 1e-12

    worst = max(restriction_res, proj_res, bounded_res)
    if worst > tol or not norm_ok:
        raise IdentityViolated(
            f"restriction identities missed tolerance: residual {worst:.3e}, "
            f"norm bound ok={norm_ok}")
    return KeyLemmaReport(restriction_res, proj_res, bounded_res,
                          norm_ok, float(nrm), float(cap), True)


def _project_probe(R, sigma, x: ComplexVector) -> ComplexVector:
    E = R.resolution
    if R.is_finite:
        P = project(E, sigma)
        return ComplexVector(P @ x.as_array(), x.space_tag, x.norm_kind)
    return project(E, sigma).apply(x)


def _apply_on_restricted(R_sub: ScalarSpectralOperator, f, px: ComplexVector,
                         R_orig):
    from .spectral import compress_to_coords
    if R_sub.is_finite and R_orig.is_finite:
        return apply(R_sub, f, px)
    if R_sub.is_finite:
        # Materialized lazy restriction: act on the compressed coordinates
        # and re-expand.
        comp = compress_to_coords(px, R_sub.coords, px.norm_kind)
        out = apply(R_sub, f, comp)
        arr = out.as_array()
        support = {int(k): complex(v) for k, v in zip(R_sub.coords, arr)
                   if v != 0}
        return ComplexVector(support, px.space_tag, px.norm_kind, None)
    return apply(R_sub, f, px)
