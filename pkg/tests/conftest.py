"""Shared random-input builders for the test suite.

Random structures are produced by applying random frame changes (or, on the
real side, random basis changes) to known-valid structures, which preserves
validity while exercising generic dense structure constants.
"""

import numpy as np
import pytest

import hermlab.lie_hermitian as lh


def random_hermitian(rng, n):
    x = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (x + x.conj().T) / 2


def random_hpd(rng, n):
    """A well-conditioned random Hermitian positive definite matrix."""
    x = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return x @ x.conj().T + 0.5 * n * np.eye(n)


def random_unitary(rng, n):
    x = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(x)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_gl(rng, n, spread=0.4):
    """Random invertible matrix close enough to the identity to stay tame."""
    while True:
        p = np.eye(n) + spread * (
            rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        )
        if np.linalg.cond(p) < 50:
            return p


def direct_sum(sc1, sc2):
    """Structure constants of the product algebra, block by block."""
    n = sc1.n + sc2.n
    C = np.zeros((n, n, n), dtype=complex)
    D = np.zeros((n, n, n), dtype=complex)
    C[: sc1.n, : sc1.n, : sc1.n] = sc1.C
    D[: sc1.n, : sc1.n, : sc1.n] = sc1.D
    C[sc1.n :, sc1.n :, sc1.n :] = sc2.C
    D[sc1.n :, sc1.n :, sc1.n :] = sc2.D
    return lh.StructureConstants(n, C, D)


def n2_family(c):
    """dphi_2 proportional to phi_1 ^ phibar_1 with coefficient set by c."""
    C = np.zeros((2, 2, 2), dtype=complex)
    D = np.zeros((2, 2, 2), dtype=complex)
    D[0, 1, 0] = c
    return lh.StructureConstants(2, C, D)


def random_base_structure(rng, n):
    """A valid structure of complex dimension n, not yet frame-mixed."""
    if n == 2:
        return n2_family(complex(rng.uniform(0.5, 1.5), rng.uniform(-1, 1)))
    if n == 3:
        name = rng.choice(["so3c", "iwasawa", "kodaira-thurston"])
        if name == "kodaira-thurston":
            return direct_sum(lh.catalog("kodaira-thurston").sc, lh.catalog("abelian-1").sc)
        return lh.catalog(str(name)).sc
    if n == 4:
        pick = rng.integers(3)
        if pick == 0:
            return direct_sum(lh.catalog("so3c").sc, lh.catalog("abelian-1").sc)
        if pick == 1:
            return direct_sum(lh.catalog("iwasawa").sc, lh.catalog("abelian-1").sc)
        return direct_sum(
            lh.catalog("kodaira-thurston").sc, lh.catalog("kodaira-thurston").sc
        )
    raise ValueError(f"no base structure for n = {n}")


def random_structure(rng, n):
    """Random valid structure constants: frame-mixed known algebra."""
    return lh.frame_change(random_base_structure(rng, n), random_gl(rng, n))


def random_real_basis_change(rng, rl, spread=0.3):
    """The same real algebra expressed in a random basis."""
    dim = rl.dim
    while True:
        B = np.eye(dim) + spread * rng.standard_normal((dim, dim))
        if np.linalg.cond(B) < 50:
            break
    Binv = np.linalg.inv(B)
    f = np.einsum("gc,cde,da,eb->gab", Binv, rl.f, B, B)
    J = Binv @ rl.J @ B
    return lh.RealLieData(dim, f, J)


CATALOG_SAMPLE = ["abelian-2", "abelian-3", "so3c", "sokc-4", "iwasawa", "kodaira-thurston"]


@pytest.fixture
def rng():
    return np.random.default_rng(20260823)
