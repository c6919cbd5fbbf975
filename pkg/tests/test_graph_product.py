import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cotlar.errors import ConfigError
from cotlar.graph_product import (
    GraphProduct,
    graph_product_descriptor,
    gp_ball,
    gp_invert,
    gp_multiply,
    gp_normalize,
    shuffle_class,
)


def make(vertices, edges=()):
    return GraphProduct(graph_product_descriptor(vertices, edges))


Z2_Z3 = make([("a", 2), ("b", 3)])
PATH = make([("a", 2), ("b", 2), ("c", 3)], [("a", "b"), ("b", "c")])
Z2xZ2 = make([("a", 2), ("b", 2)], [("a", "b")])
MIXED = make([("a", 2), ("b", "Z"), ("c", 3), ("d", 2)], [("a", "b"), ("c", "d"), ("b", "c")])

# PSL2(Z) = Z2 * Z3, a faithful oracle for the free product
A = np.array([[0, -1], [1, 0]])
B = np.array([[0, -1], [1, 1]])


def psl(mat):
    """Matrix up to sign: make the first nonzero entry positive."""
    flat = [int(x) for x in mat.flatten()]
    lead = next(x for x in flat if x)
    return tuple(x if lead > 0 else -x for x in flat)


def matrix_of(syllables, images):
    m = np.eye(2, dtype=np.int64)
    for v, e in syllables:
        if v in images:
            m = m @ np.linalg.matrix_power(images[v], e)
    return m


def z2z3_oracle(syllables):
    return psl(matrix_of(syllables, {0: A, 1: B}))


def path_oracle(syllables):
    # b is central; a, c generate a free product Z2 * Z3
    parity = sum(e for v, e in syllables if v == 1) % 2
    return psl(matrix_of(syllables, {0: A, 2: B})), parity


def raw(gp, max_size=10):
    return st.lists(
        st.tuples(st.integers(0, gp.n - 1), st.integers(-4, 4)), max_size=max_size
    )


class TestExamples:
    def test_involution_cancels(self):
        assert gp_normalize(Z2_Z3, [(0, 1), (0, 1)]) == ()

    def test_merge(self):
        z3 = make([("a", 3)])
        assert gp_normalize(z3, [(0, 1), (0, 1)]) == ((0, 2),)

    def test_commuting_swap(self):
        assert gp_normalize(Z2xZ2, [(1, 1), (0, 1)]) == ((0, 1), (1, 1))

    def test_inverse(self):
        g = Z2_Z3.element([["a", 1], ["b", 2], ["a", 1]])
        assert gp_multiply(Z2_Z3, g, gp_invert(Z2_Z3, g)) == ()

    def test_free_z2_z2_is_dinf(self):
        d = make([("a", 2), ("b", 2)])
        assert [len(gp_ball(d, k)) for k in range(6)] == [2 * k + 1 for k in range(6)]

    def test_direct_product(self):
        assert len(Z2xZ2.ball(5)) == 4

    def test_json(self):
        g = PATH.element([["c", 2], ["b", 1], ["a", 1]])
        assert PATH.from_json(PATH.to_json(g)) == g
        assert PATH.format(()) == "e"


class TestValidation:
    def test_unknown_edge(self):
        with pytest.raises(ConfigError):
            graph_product_descriptor([("a", 2)], [("a", "z")])

    def test_loop(self):
        with pytest.raises(ConfigError):
            graph_product_descriptor([("a", 2)], [("a", "a")])

    @pytest.mark.parametrize("order", [1, 0, "x", 2.0, None])
    def test_bad_order(self, order):
        with pytest.raises(ConfigError):
            graph_product_descriptor([("a", order)])

    def test_duplicate(self):
        with pytest.raises(ConfigError):
            graph_product_descriptor([("a", 2), ("a", 3)])

    def test_dict_form(self):
        d = graph_product_descriptor([{"name": "a", "order": 2}, {"name": "b", "order": "Z"}], [["a", "b"]])
        assert d.orders == (2, None)
        assert d.to_json()["edges"] == [["a", "b"]]


@settings(max_examples=150, deadline=None)
@given(x=raw(Z2_Z3), y=raw(Z2_Z3))
def test_z2z3_equality_matches_matrices(x, y):
    assert (Z2_Z3.normalize(x) == Z2_Z3.normalize(y)) == (z2z3_oracle(x) == z2z3_oracle(y))
    assert z2z3_oracle(Z2_Z3.normalize(x)) == z2z3_oracle(x)


@settings(max_examples=150, deadline=None)
@given(x=raw(PATH), y=raw(PATH))
def test_path_equality_matches_oracle(x, y):
    assert (PATH.normalize(x) == PATH.normalize(y)) == (path_oracle(x) == path_oracle(y))


def is_normal(gp, g):
    for x in shuffle_class(gp, g):
        if any(x[i][0] == x[i + 1][0] for i in range(len(x) - 1)):
            return False
    if any(e == 0 for _, e in g):
        return False
    return min(shuffle_class(gp, g), key=lambda x: [v for v, _ in x]) == g


@pytest.mark.parametrize("gp", [Z2_Z3, PATH, Z2xZ2, MIXED], ids=["free", "path", "product", "mixed"])
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_normal_form_properties(gp, data):
    x = data.draw(raw(gp, 8))
    g = gp.normalize(x)
    assert is_normal(gp, g)
    assert gp.normalize(g) == g
    assert len(g) <= len([s for s in x if gp._reduce_exp(s[0], s[1])])
    # constant on shuffles of the input and of the normal form
    for y in list(shuffle_class(gp, [tuple(s) for s in x]))[:20]:
        assert gp.normalize(y) == g


@pytest.mark.parametrize("gp", [Z2_Z3, PATH, MIXED], ids=["free", "path", "mixed"])
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_group_laws(gp, data):
    a, b, c = (gp.normalize(data.draw(raw(gp, 5))) for _ in range(3))
    assert gp.multiply(gp.multiply(a, b), c) == gp.multiply(a, gp.multiply(b, c))
    assert gp.multiply(a, gp.invert(a)) == () == gp.multiply(gp.invert(a), a)
    assert gp.multiply(a, ()) == a


def test_ball_is_syllable_ball():
    for gp in (Z2_Z3, PATH):
        ball = gp.ball(3)
        assert all(len(g) <= 3 for g in ball)
        assert ball == sorted(ball, key=gp.sort_key)
        assert len(set(ball)) == len(ball)
    # free product: 1, 3, then alternate 1 and 2 choices
    assert [len(Z2_Z3.ball(k)) for k in range(5)] == [1, 4, 8, 14, 22]


def test_type_system():
    t = PATH.type_system()
    assert t.m(0, 1) == 2 and t.m(1, 2) == 2 and t.m(0, 2) == float("inf")
    assert t.right_angled
