import numpy as np
import pytest

from speccalc import BorelSetSpec


def random_diagonalizable(rng, n, cond_max=30.0, spectrum="complex",
                          box=3.0, min_sep=0.2):
    """A random diagonalizable matrix with eigenvector condition number
    log-uniform in [1, cond_max] and well-separated eigenvalues."""
    u = rng.uniform(0.0, 1.0)
    cond = cond_max ** u
    s = np.logspace(0.0, -np.log10(cond), n) if cond > 1.0 else np.ones(n)
    q1, _ = np.linalg.qr(rng.standard_normal((n, n))
                         + 1j * rng.standard_normal((n, n)))
    q2, _ = np.linalg.qr(rng.standard_normal((n, n))
                         + 1j * rng.standard_normal((n, n)))
    v = q1 @ np.diag(s) @ q2
    while True:
        re = rng.uniform(-box, box, n)
        im = np.zeros(n) if spectrum == "real" else rng.uniform(-box, box, n)
        lams = re + 1j * im
        d = np.abs(lams[:, None] - lams[None, :])
        np.fill_diagonal(d, np.inf)
        if d.min() > min_sep:
            break
    a = v @ np.diag(lams) @ np.linalg.inv(v)
    return a, lams


def random_halfplane(rng):
    th = rng.uniform(0.0, 2.0 * np.pi)
    c = rng.uniform(-1.0, 1.0) + 1j * rng.uniform(-1.0, 1.0)
    w = np.exp(1j * th)
    return BorelSetSpec(lambda z, w=w, c=c: ((z - c) * np.conj(w)).real > 0.0,
                        None, "halfplane")


def random_vec(rng, n):
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)
