import pytest
from hypothesis import given
from hypothesis import strategies as st

from coxext.groups import GroupDescriptor, IrreducibleFactor, Kind, parse_descriptor
from coxext.oracle import OracleCapError, enumerate_group, oracle_pmf
from coxext.polynomials import IntPolynomial
from coxext.statistics import eulerian_polynomial, mahonian_pmf

P = parse_descriptor


def test_examples():
    t = enumerate_group(P("A3"))
    assert len(t) == 24 and t.length.max() == 6
    t = enumerate_group(P("I2(7)"))
    assert len(t) == 14 and t.length.max() == 7
    assert enumerate_group(P("B2")).histogram("inv") == [1, 2, 2, 2, 1]


def test_pmf_examples():
    assert oracle_pmf(P("A2"), "inv").exact_counts == [1, 2, 2, 1]
    assert oracle_pmf(P("A2"), "des").exact_counts == [1, 4, 1]
    assert oracle_pmf(P("D3"), "des").exact_counts == [1, 11, 11, 1]


def test_identity_and_longest_element():
    for text in ("A4", "B3", "D4", "I2(6)", "A2 x I2(5)"):
        g = P(text)
        t = enumerate_group(g)
        assert t.length[0] == 0 and t.descents[0] == 0
        assert (t.length == 0).sum() == 1
        top = t.length == t.length.max()
        assert top.sum() == 1
        assert t.descents[top][0] == g.rank


def test_signed_models():
    for key in enumerate_group(P("D4")).keys:
        w = key[0]
        assert sorted(abs(v) for v in w) == [1, 2, 3, 4]
        assert sum(v < 0 for v in w) % 2 == 0
    negs = {sum(v < 0 for v in key[0]) for key in enumerate_group(P("B3")).keys}
    assert negs == {0, 1, 2, 3}


def test_cap():
    with pytest.raises(OracleCapError):
        enumerate_group(P("A9"))
    with pytest.raises(OracleCapError):
        enumerate_group(P("A3"), cap=23)
    assert len(enumerate_group(P("A3"), cap=24)) == 24


def test_product_is_convolution():
    a1 = IntPolynomial(enumerate_group(P("A1")).histogram("inv"))
    assert enumerate_group(P("A1 x A1")).histogram("inv") == list((a1 * a1).coeffs)


def test_csv_export():
    lines = enumerate_group(P("A1")).to_csv().splitlines()
    assert lines == ["element,length,descents", "1 2,0,0", "2 1,1,1"]


small = st.one_of(
    st.builds(IrreducibleFactor, st.just(Kind.A), st.integers(1, 4)),
    st.builds(IrreducibleFactor, st.sampled_from([Kind.B, Kind.D]), st.integers(2, 4)),
    st.builds(IrreducibleFactor, st.just(Kind.I2), st.integers(3, 12)),
)


@given(st.lists(small, min_size=1, max_size=3))
def test_analytic_equals_brute_force(fs):
    g = GroupDescriptor(tuple(fs))
    if g.order > 20_000:
        return
    t = enumerate_group(g)
    assert len(t) == g.order
    assert t.histogram("inv") == mahonian_pmf(g, exact=True).exact_counts
    assert t.histogram("des") == list(eulerian_polynomial(g).coeffs)
    assert t.histogram("inv") == t.histogram("inv")[::-1]
