import itertools
from math import gcd

from hypothesis import assume, given, strategies as st

from dphelix import intlin


def square(max_n=4, bound=6):
    return st.integers(1, max_n).flatmap(lambda n: st.lists(
        st.lists(st.integers(-bound, bound), min_size=n, max_size=n), min_size=n, max_size=n))


def rect(max_r=4, max_c=6, bound=5):
    return st.tuples(st.integers(1, max_r), st.integers(1, max_c)).flatmap(lambda rc: st.lists(
        st.lists(st.integers(-bound, bound), min_size=rc[1], max_size=rc[1]), min_size=rc[0], max_size=rc[0]))


def leibniz(m):
    n = len(m)
    out = 0
    for perm in itertools.permutations(range(n)):
        sign = (-1) ** sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        prod = 1
        for i in range(n):
            prod *= m[i][perm[i]]
        out += sign * prod
    return out


@given(square())
def test_det_matches_leibniz(m):
    assert intlin.det(m) == leibniz(m)


@given(square())
def test_inverse(m):
    assume(intlin.det(m) != 0)
    inv = intlin.inverse(m)
    assert intlin.matmul(m, inv) == intlin.identity(len(m))


@given(rect())
def test_integer_kernel_is_saturated_kernel(a):
    ker = intlin.integer_kernel(a)
    n = len(a[0])
    assert len(ker) == n - intlin.rank(a)
    for v in ker:
        assert all(x == 0 for x in intlin.matvec(a, v))
    if ker:
        # saturated: the maximal minors of the kernel basis have gcd 1
        k = len(ker)
        minors = [leibniz([[ker[i][c] for c in cols] for i in range(k)])
                  for cols in itertools.combinations(range(n), k)]
        g = 0
        for x in minors:
            g = gcd(g, x)
        assert g == 1


@given(st.lists(st.integers(-20, 20), min_size=1, max_size=6))
def test_complete_to_basis(v):
    assume(any(v))
    p = intlin.primitive(v)
    u = intlin.complete_to_basis(p)
    assert intlin.columns(u)[0] == p
    assert abs(intlin.det(u)) == 1
    assert intlin.matmul(u, intlin.unimodular_inverse(u)) == intlin.identity(len(v))


@given(rect(), st.data())
def test_solve_any_finds_solution_of_consistent_system(a, data):
    x = data.draw(st.lists(st.integers(-4, 4), min_size=len(a[0]), max_size=len(a[0])))
    b = intlin.matvec(a, x)
    y = intlin.solve_any(a, b)
    assert y is not None and intlin.matvec(a, y) == b
