import pytest

from jordanlie import jordan, kkt
from jordanlie.composition import build_composition


@pytest.fixture(scope="session")
def rationals_algebra():
    return build_composition(1, [])


@pytest.fixture(scope="session")
def split_complex():
    return build_composition(2, [1])


@pytest.fixture(scope="session")
def split_quaternions():
    return build_composition(4, [1, 1])


@pytest.fixture(scope="session")
def split_octonions():
    return build_composition(8, [1, 1, 1])


def split_gram(dim):
    """Hyperbolic planes (Q = xy) padded with a unit square."""
    from fractions import Fraction as Q

    g = [[Q(0)] * dim for _ in range(dim)]
    k = 0
    while k + 1 < dim:
        g[k][k + 1] = g[k + 1][k] = Q(1, 2)
        k += 2
    if k < dim:
        g[k][k] = Q(1)
    return g


@pytest.fixture(scope="session")
def family_instances(rationals_algebra, split_complex, split_octonions):
    """The table's family instances, keyed by their split-group name."""
    return {
        "C2": jordan.hermitian(2, rationals_algebra),
        "C3": jordan.hermitian(3, rationals_algebra),
        "A3": jordan.hermitian(2, split_complex),
        "A5": jordan.hermitian(3, split_complex),
        "B3": jordan.quadratic(split_gram(3)),
        "D4": jordan.quadratic(split_gram(4)),
        "E7": jordan.hermitian(3, split_octonions),
    }


_kkt_cache = {}


@pytest.fixture(scope="session")
def kkt_builds(family_instances):
    def get(name):
        if name not in _kkt_cache:
            _kkt_cache[name] = kkt.build_kkt(family_instances[name])
        return _kkt_cache[name]

    return get
