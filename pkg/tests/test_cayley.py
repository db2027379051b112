import itertools
import json
import math
import random

import numpy as np
import pytest

from cayleycliques.cayley import (
    CayleyGraph,
    custom_connection_set,
    gp_connection_set,
    gp_graph,
    make_graph,
    parse_dimacs,
    peisert_connection_set,
    peisert_graph,
    self_complement_witness,
)
from cayleycliques.errors import ParameterError, ResourceLimitError
from cayleycliques.gf import build_field


def _powers_by_multiplication(field, residues, m):
    """``{g^j : j mod m in residues}`` using scalar polynomial arithmetic only."""
    out, x = set(), field.one
    for j in range(field.q - 1):
        if j % m in residues:
            out.add(x.index)
        x = x * field.g
    return out


def test_gp_examples_prime_field():
    f = build_field(13)
    assert gp_connection_set(f, 2).elements().tolist() == sorted({x * x % 13 for x in range(1, 13)})
    assert gp_connection_set(f, 3).elements().tolist() == sorted({x**3 % 13 for x in range(1, 13)})
    assert gp_connection_set(f, 2).elements().tolist() == [1, 3, 4, 9, 10, 12]
    assert gp_connection_set(f, 3).elements().tolist() == [1, 5, 8, 12]
    with pytest.raises(ParameterError):
        gp_connection_set(build_field(11), 2)
    with pytest.raises(ParameterError):
        gp_connection_set(f, 1)


@pytest.mark.parametrize("p,s,d", [(3, 4, 2), (3, 4, 4), (7, 3, 3), (5, 4, 4), (7, 4, 4), (5, 2, 3)])
def test_gp_set_is_dth_powers(p, s, d):
    f = build_field(p, s)
    S = gp_connection_set(f, d)
    powers = {(f.element(x) ** d).index for x in range(1, f.q)}
    assert set(S.elements().tolist()) == powers
    assert S.size == (f.q - 1) // d
    assert S.multiplicatively_closed and S.contains_minus_one


def test_peisert_sizes_and_errors():
    assert peisert_connection_set(build_field(7, 2)).size == 24
    assert peisert_connection_set(build_field(3, 4)).size == 40
    with pytest.raises(ParameterError):
        peisert_connection_set(build_field(17))
    with pytest.raises(ParameterError):
        peisert_connection_set(build_field(7))
    with pytest.raises(ParameterError):
        peisert_connection_set(build_field(5, 2))


@pytest.mark.parametrize("p,s", [(3, 2), (7, 2), (3, 4), (11, 2), (7, 4)])
def test_peisert_set_matches_definition(p, s):
    f = build_field(p, s)
    M = peisert_connection_set(f)
    assert set(M.elements().tolist()) == _powers_by_multiplication(f, {0, 1}, 4)
    assert not M.multiplicatively_closed
    assert M.contains_minus_one


def test_custom_sets():
    f = build_field(13)
    assert custom_connection_set(f, 4, {0, 2}).elements().tolist() == [1, 3, 4, 9, 10, 12]
    # fourth powers {1, 3, 9} are not closed under negation when q = 5 mod 8
    with pytest.raises(ParameterError):
        custom_connection_set(f, 4, {0})
    with pytest.raises(ParameterError):
        custom_connection_set(f, 12, {1})
    with pytest.raises(ParameterError):
        custom_connection_set(f, 4, set())
    full = custom_connection_set(f, 1, {0})
    assert full.size == 12 and full.multiplicatively_closed


SYMMETRY_CASES = [(3, 8, "gp", 4), (3, 8, "peisert", None), (7, 4, "gp", 8), (7, 4, "peisert", None),
                  (11, 4, "peisert", None), (13, 3, "gp", 3), (127, 2, "peisert", None), (43, 2, "gp", 7)]


@pytest.mark.parametrize("p,s,family,d", SYMMETRY_CASES)
def test_symmetry_and_degree(p, s, family, d):
    graph = make_graph(family, p, s, d)
    f = graph.field
    S = graph.S.elements()
    assert f.q <= 1 << 14
    # -S computed by coordinates, no log tables involved
    neg = f.from_digits(-f.digits(S) % p)
    assert set(neg.tolist()) == set(S.tolist())
    everything = np.arange(f.q, dtype=np.int64)
    for v in range(f.q):
        assert np.count_nonzero(graph.adjacent_to(everything, v)) == graph.degree
    assert graph.degree == len(S)


@pytest.mark.parametrize("p,s,d", [(3, 4, 2), (3, 4, 4), (7, 3, 3), (5, 4, 4), (7, 2, 2), (13, 2, 7),
                                   (43, 2, 3), (3, 6, 7), (11, 3, 5)])
def test_gp_set_closed_under_products(p, s, d):
    f = build_field(p, s)
    S = gp_connection_set(f, d)
    elems = S.elements()
    for c in elems:
        assert S.member[f.scale(int(c), elems)].all()


@pytest.mark.parametrize("p,s", [(3, 2), (7, 2), (3, 4), (11, 2), (3, 6), (7, 4), (19, 2), (11, 4)])
def test_peisert_partition(p, s):
    f = build_field(p, s)
    M = peisert_connection_set(f).elements()
    g2 = (f.g * f.g).index
    g2M = f.scale(g2, M)
    both = np.concatenate((M, g2M, [0]))
    assert len(both) == f.q
    assert np.array_equal(np.sort(both), np.arange(f.q))


@pytest.mark.parametrize("p,s", [(7, 2), (3, 4)])
def test_quadruple_paley_inside_peisert(p, s):
    f = build_field(p, s)
    gp = gp_graph(f, 4)
    pe = peisert_graph(f)
    assert set(gp.edges()) <= set(pe.edges())
    assert pe.S.member[gp.S.elements()].all()


@pytest.mark.parametrize("p,s", [(7, 2), (3, 4), (11, 2)])
def test_peisert_choice_of_primitive_root(p, s):
    """Another primitive root g^k gives the same set when k = 1 mod 4 and its
    Frobenius image (an isomorphic graph) when k = 3 mod 4."""
    f = build_field(p, s)
    M = set(peisert_connection_set(f).elements().tolist())
    frob_M = set(f.frobenius(np.array(sorted(M))).tolist())
    for k in range(1, f.q - 1):
        if math.gcd(k, f.q - 1) != 1:
            continue
        h = f.g ** k
        Mk, x = set(), f.one
        for j in range(f.q - 1):
            if j % 4 in (0, 1):
                Mk.add(x.index)
            x = x * h
        assert Mk == (M if k % 4 == 1 else frob_M)
        # Frobenius is an additive bijection, hence a graph isomorphism
        if k % 4 == 3:
            assert len(Mk) == len(M)


def test_adjacency_examples():
    g = gp_graph(build_field(13), 2)
    assert g.adjacent(0, 1) and not g.adjacent(0, 2)
    with pytest.raises(ParameterError):
        g.adjacent(3, 3)
    with pytest.raises(ParameterError):
        g.adjacent(0, 13)
    squares = {x * x % 13 for x in range(1, 13)}
    for u, v in itertools.permutations(range(13), 2):
        assert g.adjacent(u, v) == ((u - v) % 13 in squares)


def test_translation_invariance():
    g = peisert_graph(build_field(7, 4))
    f = g.field
    rng = random.Random(7)
    for _ in range(10_000):
        u, v, w = (rng.randrange(f.q) for _ in range(3))
        if u == v:
            continue
        assert g.adjacent(u, v) == g.adjacent(int(f.add(u, w)), int(f.add(v, w)))


def test_neighbors_and_bitsets():
    g = peisert_graph(build_field(3, 4))
    nbrs = g.neighbors(5)
    assert len(nbrs) == 40
    assert all(g.adjacent(5, int(u)) for u in nbrs)
    verts = np.arange(0, 81, 2)
    rows = g.bitset_rows(verts)
    for i, u in enumerate(verts):
        bits = int.from_bytes(rows[i].tobytes(), "little")
        for j, v in enumerate(verts):
            assert bool(bits >> j & 1) == (u != v and g.adjacent(int(u), int(v)))
    with pytest.raises(ResourceLimitError):
        g.bitset_rows(verts, cap=10)


def _brute_self_complement(graph, mult):
    f = graph.field
    for u, v in itertools.combinations(range(graph.q), 2):
        if graph.adjacent(u, v) == graph.adjacent(int(f.mul(u, mult)), int(f.mul(v, mult))):
            return False
    return True


def test_self_complement_examples():
    p13 = gp_graph(build_field(13), 2)
    assert self_complement_witness(p13, 2)
    assert _brute_self_complement(p13, 2)
    pe = peisert_graph(build_field(3, 4))
    g2 = int(pe.field.mul(pe.field.generator_index, pe.field.generator_index))
    assert self_complement_witness(pe, g2)
    cubic = gp_graph(build_field(13), 3)
    assert not any(self_complement_witness(cubic, c) for c in range(1, 13))
    assert not any(_brute_self_complement(cubic, c) for c in range(1, 13))
    with pytest.raises(ParameterError):
        self_complement_witness(p13, 0)


def test_self_complement_agrees_with_brute_force():
    g = peisert_graph(build_field(7, 2))
    for c in range(1, 49):
        assert self_complement_witness(g, c) == _brute_self_complement(g, c)


def test_dimacs_examples():
    text = gp_graph(build_field(13), 2).export("dimacs").decode()
    assert text.splitlines()[0] == "p edge 13 39"
    text = peisert_graph(build_field(3, 4)).export("dimacs").decode()
    assert text.splitlines()[0] == "p edge 81 1620"


@pytest.mark.parametrize("family,p,s,d", [("gp", 13, 1, 2), ("peisert", 3, 4, None), ("gp", 7, 3, 3)])
def test_dimacs_roundtrip(family, p, s, d):
    g = make_graph(family, p, s, d)
    n, edges = parse_dimacs(g.export("dimacs"))
    assert n == g.q
    brute = [(u, v) for u, v in itertools.combinations(range(g.q), 2) if g.adjacent(u, v)]
    assert edges == brute
    assert len(edges) == g.num_edges
    listed = [tuple(map(int, line.split())) for line in g.export("edge-list").decode().splitlines()]
    assert listed == brute


def test_export_formats_and_caps():
    g = peisert_graph(build_field(7, 2))
    desc = json.loads(g.export("json"))
    assert desc == json.loads(json.dumps(g.descriptor()))
    assert desc["vertices"] == 49 and desc["degree"] == 24
    with pytest.raises(ResourceLimitError):
        g.export("dimacs", cap=10)
    with pytest.raises(ParameterError):
        g.export("graphml")
    with pytest.raises(ParameterError):
        parse_dimacs("e 1 2\n")


def test_make_graph_errors():
    with pytest.raises(ParameterError):
        make_graph("gp", 13, 1)
    with pytest.raises(ParameterError):
        make_graph("custom", 13, 1, m=4)
    with pytest.raises(ParameterError):
        make_graph("cycle", 13, 1)
    assert isinstance(make_graph("custom", 13, 1, m=4, classes=[0, 2]), CayleyGraph)
