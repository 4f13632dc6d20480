import itertools
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from poissonkit import QQ, BilinearOp, FieldSpec, LinearMap, TwoProductAlgebra

ROOT = Path(__file__).resolve().parents[1]
CORPUS = ROOT / "algebras"
GOLDEN = Path(__file__).resolve().parent / "golden"


def matrix_units(n):
    """Structure constants of M_n under composition, basis E_ij row-major."""
    basis = list(itertools.product(range(n), repeat=2))
    c = np.zeros((n * n,) * 3, dtype=np.int64)
    for a, (i, j) in enumerate(basis):
        for b, (k, l) in enumerate(basis):
            if j == k:
                c[a, b, basis.index((i, l))] = 1
    return c


def m2_commutator(derivation=None):
    comp = matrix_units(2)
    return TwoProductAlgebra(BilinearOp(QQ, comp - comp.transpose(1, 0, 2)),
                             BilinearOp(QQ, comp), derivation)


def ad_matrix(bracket: np.ndarray, i: int) -> np.ndarray:
    """Column j is [e_i, e_j] (0-based i)."""
    return bracket[i].T.copy()


def random_rational(rng, size, span=3, denom=2):
    nums = rng.integers(-span, span + 1, size=size)
    dens = rng.integers(1, denom + 1, size=size)
    out = np.empty(size, dtype=object)
    for idx in np.ndindex(size):
        out[idx] = Fraction(int(nums[idx]), int(dens[idx]))
    return out


def random_tensor(rng, field: FieldSpec, shape, density=1.0):
    if field.is_finite:
        arr = rng.integers(0, field.p, size=shape)
    else:
        arr = random_rational(rng, shape)
    if density < 1.0:
        arr = arr * (rng.random(shape) < density)
    return arr


def random_algebra(rng, field: FieldSpec, n: int, with_derivation=True):
    d = LinearMap(field, random_tensor(rng, field, (n, n))) if with_derivation else None
    return TwoProductAlgebra(BilinearOp(field, random_tensor(rng, field, (n, n, n))),
                             BilinearOp(field, random_tensor(rng, field, (n, n, n))), d)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def monogenic_algebra(coeffs):
    """Structure constants of Q[t]/(t^n - sum coeffs[i] t^i) in the basis 1, t, ..., t^(n-1)."""
    n = len(coeffs)
    powers = []  # t^k for k < 2n-1 as coordinate vectors
    for k in range(2 * n - 1):
        if k < n:
            v = [0] * n
            v[k] = 1
        else:
            prev = powers[k - 1]
            v = [0] + prev[:-1]
            top = prev[-1]
            v = [v[i] + top * coeffs[i] for i in range(n)]
        powers.append(v)
    c = np.empty((n, n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            c[i, j] = powers[i + j]
    return c


def random_commutative_associative(rng, n):
    """A random commutative associative product on Q^n, in a random basis."""
    from poissonkit.algebra import change_basis
    from poissonkit import DomainError
    if n == 3 and rng.random() < 0.3:
        # Q[s, t] / (s, t)^2
        c = np.zeros((3, 3, 3), dtype=object)
        c[0, 0, 0] = c[0, 1, 1] = c[1, 0, 1] = c[0, 2, 2] = c[2, 0, 2] = 1
    else:
        c = monogenic_algebra([int(v) for v in rng.integers(-2, 3, n)])
    a = TwoProductAlgebra(BilinearOp.zero(n), BilinearOp(QQ, c))
    while True:
        try:
            return change_basis(a, random_tensor(rng, QQ, (n, n))).circle
        except DomainError:
            continue
