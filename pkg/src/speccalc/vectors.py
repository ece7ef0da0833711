"""Vectors of the two space models.

Finite vectors live in C^n with an l^p norm, p in {1, 2, inf}.  Sequence
vectors are finitely supported maps index -> complex, optionally extended
beyond their explicit support by a closed-form tail certificate.  A vector
with neither finite support nor a certificate is malformed by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, Optional, Union

import numpy as np

SEQUENCE = "sequence"
_NORM_KINDS = (1, 2, np.inf)


def check_norm_kind(p):
    if p not in _NORM_KINDS:
        raise ValueError(f"norm kind must be one of 1, 2, inf; got {p!r}")
    return p


def vec_norm(x: np.ndarray, p) -> float:
    x = np.asarray(x)
    if x.size == 0:
        return 0.0
    if p == np.inf:
        return float(np.max(np.abs(x)))
    return float(np.sum(np.abs(x) ** p) ** (1.0 / p))


def op_norm(a: np.ndarray, p) -> float:
    """Operator norm on l^p: max column sum (p=1), spectral (p=2),
    max row sum (p=inf)."""
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2 if p == 2 else p))


@dataclass(frozen=True)
class TailCertificate:
    """Closed form for the entries of a sequence vector beyond ``start``.

    ``term`` must accept an integer ndarray of indices and return the
    corresponding entries.  Summability of image series is decided by the
    doubling-block test in :func:`block_series_scan`, never by a fixed
    truncation.
    """
    term: Callable[[np.ndarray], np.ndarray]
    start: int
    label: str = "tail"


def block_series_scan(term_abs: Callable[[np.ndarray], np.ndarray],
                      start: int, p, cap: int = 2 ** 20):
    """Decide whether sum_k |a_k|^p (or sup_k |a_k| for p=inf) converges over
    k >= start, scanning doubling blocks of indices.

    Returns ``(converged, estimate)`` where ``estimate`` is the p-th power
    sum (resp. the sup) over the scanned range plus a geometric
    extrapolation of the remainder.  Divergence is declared when block
    aggregates stop decaying (growth threshold), matching partial-sum
    behaviour of the series.
    """
    lo = max(int(start), 0)
    hi = max(lo + 1, 1)
    blocks = []
    total = 0.0
    sup = 0.0
    while lo < cap:
        hi = min(max(2 * hi, lo + 1), cap)
        ks = np.arange(lo, hi, dtype=np.int64)
        vals = np.abs(np.asarray(term_abs(ks), dtype=float))
        if p == np.inf:
            blocks.append(float(vals.max(initial=0.0)))
            sup = max(sup, blocks[-1])
            if len(blocks) >= 4:
                last = blocks[-4:]
                if all(b > 1e-300 for b in last) and \
                        all(last[i + 1] >= last[i] for i in range(3)) and \
                        last[-1] > 1e12:
                    return False, np.inf
                if blocks[-1] <= 1e-18 * max(sup, 1.0):
                    return True, sup
        else:
            s = float(np.sum(vals ** p))
            blocks.append(s)
            total += s
            if s <= 1e-18 * max(total, 1.0):
                return True, total
            if len(blocks) >= 5:
                ratios = [blocks[i + 1] / blocks[i]
                          for i in range(len(blocks) - 4, len(blocks) - 1)
                          if blocks[i] > 0.0]
                if ratios and max(ratios) >= 0.98:
                    return False, np.inf
                if ratios and max(ratios) < 0.98 and len(blocks) >= 8:
                    r = max(ratios)
                    return True, total + blocks[-1] * r / (1.0 - r)
        lo = hi
    if p == np.inf:
        return True, sup
    # Cap reached without a growth certificate: extrapolate from the last
    # ratio if it is clearly below 1, otherwise refuse to decide.
    if len(blocks) >= 2 and blocks[-2] > 0.0:
        r = blocks[-1] / blocks[-2]
        if r < 0.98:
            return True, total + blocks[-1] * r / (1.0 - r)
    return False, np.inf


@dataclass(frozen=True, eq=False)
class ComplexVector:
    """A vector of either model.

    ``entries`` is an ndarray for the finite model or a dict
    index -> complex for the sequence model.  ``space_tag`` is the dimension
    or ``"sequence"``; ``norm_kind`` is p in {1, 2, inf}.
    """
    entries: Union[np.ndarray, Dict[int, complex]]
    space_tag: Union[int, str]
    norm_kind: object
    tail: Optional[TailCertificate] = None

    # -- constructors ------------------------------------------------
    @staticmethod
    def finite(values, p=2) -> "ComplexVector":
        arr = np.asarray(values, dtype=complex)
        if arr.ndim != 1:
            raise ValueError("finite vector must be one-dimensional")
        return ComplexVector(arr, arr.size, check_norm_kind(p))

    @staticmethod
    def sequence(support: Dict[int, complex], p=2,
                 tail: Optional[TailCertificate] = None) -> "ComplexVector":
        clean = {int(k): complex(v) for k, v in support.items()
                 if v != 0}
        if tail is not None and clean and max(clean) >= tail.start:
            raise ValueError("explicit support overlaps the tail certificate")
        return ComplexVector(clean, SEQUENCE, check_norm_kind(p), tail)

    @staticmethod
    def basis(k: int, dim, p=2) -> "ComplexVector":
        if dim == SEQUENCE:
            return ComplexVector.sequence({k: 1.0}, p)
        v = np.zeros(int(dim), dtype=complex)
        v[k] = 1.0
        return ComplexVector.finite(v, p)

    # -- views -------------------------------------------------------
    @property
    def is_finite(self) -> bool:
        return self.space_tag != SEQUENCE

    def as_array(self) -> np.ndarray:
        if not self.is_finite:
            raise ValueError("sequence vector has no dense representation")
        return self.entries

    def support(self) -> np.ndarray:
        if self.is_finite:
            return np.nonzero(self.entries)[0]
        return np.array(sorted(self.entries), dtype=np.int64)

    def support_values(self):
        ks = self.support()
        if self.is_finite:
            return ks, self.entries[ks]
        return ks, np.array([self.entries[int(k)] for k in ks], dtype=complex)

    # -- algebra -----------------------------------------------------
    def scale(self, c) -> "ComplexVector":
        c = complex(c)
        if self.is_finite:
            return ComplexVector(self.entries * c, self.space_tag,
                                 self.norm_kind)
        tail = self.tail
        if tail is not None:
            base = tail.term
            tail = TailCertificate(lambda ks, b=base, cc=c: cc * np.asarray(b(ks)),
                                   tail.start, tail.label)
        new = {k: v * c for k, v in self.entries.items()}
        return ComplexVector(new, SEQUENCE, self.norm_kind, tail)

    def add(self, other: "ComplexVector") -> "ComplexVector":
        if self.space_tag != other.space_tag or self.norm_kind != other.norm_kind:
            raise ValueError("vectors live in different spaces")
        if self.is_finite:
            return ComplexVector(self.entries + other.entries,
                                 self.space_tag, self.norm_kind)
        if self.tail is not None and other.tail is not None:
            raise ValueError("cannot add two tail-certified vectors")
        tail = self.tail or other.tail
        new = dict(self.entries)
        for k, v in other.entries.items():
            new[k] = new.get(k, 0.0) + v
        new = {k: v for k, v in new.items() if v != 0}
        return ComplexVector(new, SEQUENCE, self.norm_kind, tail)

    def sub(self, other: "ComplexVector") -> "ComplexVector":
        return self.add(other.scale(-1.0))

    # -- norms -------------------------------------------------------
    def norm(self) -> float:
        p = self.norm_kind
        if self.is_finite:
            return vec_norm(self.entries, p)
        _, vals = self.support_values()
        head = vec_norm(vals, p)
        if self.tail is None:
            return head
        converged, est = block_series_scan(
            lambda ks: np.abs(np.asarray(self.tail.term(ks), dtype=complex)),
            self.tail.start, p)
        if not converged:
            return np.inf
        if p == np.inf:
            return max(head, est)
        return float((head ** p + est) ** (1.0 / p))

    def is_zero(self, tol=0.0) -> bool:
        return self.norm() <= tol
