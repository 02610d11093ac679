import random
from datetime import date
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from statement_net.graph import (
    EdgeEvent,
    StatementNetwork,
    build_network,
    core_numbers,
    k_core_decompose,
    pairs_from_statement,
    read_edge_list,
    top_core,
    write_edge_list,
    write_events,
)

from helpers import all_pairs, statement
from oracles import brute_force_core_numbers, induced_degree_ok, random_edges

D1, D2 = date(2015, 1, 1), date(2015, 1, 2)


def decompose(edges):
    return k_core_decompose(StatementNetwork.from_edges(edges))


def test_pairs_from_statement():
    assert pairs_from_statement(["A", "B", "C"]) == {("A", "B"), ("B", "C"), ("A", "C")}
    assert pairs_from_statement(["B", "A"]) == {("A", "B")}
    assert len(pairs_from_statement(list("ABCD"))) == 6


@pytest.mark.parametrize("bad", [[], ["A"], ["A", "A"]])
def test_pairs_contract(bad):
    with pytest.raises(ValueError):
        pairs_from_statement(bad)


@given(st.lists(st.text("abcdefgh", min_size=1, max_size=3), min_size=2, max_size=10, unique=True))
def test_pairs_size(entities):
    pairs = pairs_from_statement(entities)
    assert len(pairs) == comb(len(entities), 2)
    assert all(a < b for a, b in pairs)


def test_edge_event_ordering():
    with pytest.raises(ValueError):
        EdgeEvent("B", "A", D1, "a", 0)
    with pytest.raises(ValueError):
        EdgeEvent("A", "A", D1, "a", 0)


def test_build_network_single_statement():
    net = build_network([statement(["A", "B", "C"], D1)])
    assert net.nodes == ("A", "B", "C")
    assert len(net.simple_edges) == 3
    assert len(net.events) == 3


def test_build_network_dedups_simple_edges():
    net = build_network([statement(["A", "B"], D1, "x"), statement(["B", "A"], D2, "y")])
    assert net.simple_edges == (("A", "B"),)
    assert len(net.events) == 2
    assert net.edge_counts() == {("A", "B"): 2}


def test_build_network_empty_and_window():
    assert build_network([]) == StatementNetwork()
    sts = [statement(["A", "B"], D1, "x"), statement(["C", "D"], D2, "y")]
    assert build_network(sts, window=(D2, D2)).nodes == ("C", "D")


def test_build_network_is_order_independent():
    sts = [statement(["A", "B", "C"], D2, "x"), statement(["C", "D"], D1, "y")]
    assert build_network(sts) == build_network(sts[::-1])


def test_triangle_and_path():
    tri = decompose([("A", "B"), ("B", "C"), ("A", "C")])
    assert tri.core_number == {"A": 2, "B": 2, "C": 2}
    path = decompose([("A", "B"), ("B", "C")])
    assert path.core_number == {"A": 1, "B": 1, "C": 1}


def test_empty_network():
    dec = k_core_decompose(StatementNetwork())
    assert dec.core_number == {} and dec.max_core == 0 and dec.n_shells == 0
    with pytest.raises(ValueError):
        top_core(dec)


def test_top_core_triangle_with_pendant():
    edges = [("A", "B"), ("B", "C"), ("A", "C"), ("D", "A")]
    assert brute_force_core_numbers(edges)["D"] == 1
    dec = decompose(edges)
    assert dec.max_core == 2
    assert top_core(dec) == {"A", "B", "C"}
    assert top_core(decompose([("A", "B")])) == {"A", "B"}


def test_planted_clique_over_sparse_background():
    rng = random.Random(7)
    clique = [f"elite{i}" for i in range(6)]
    background = [f"bg{i}" for i in range(60)]
    edges = all_pairs(clique)
    # random tree plus a few chords keeps the background core number <= 2
    for i in range(1, len(background)):
        edges.append((background[i], background[rng.randrange(i)]))
    for _ in range(5):
        edges.append(tuple(rng.sample(background, 2)))
    edges += [(clique[0], background[0]), (clique[3], background[10])]
    oracle = brute_force_core_numbers(edges)
    assert max(oracle[v] for v in background) < 5
    dec = decompose(edges)
    assert dec.core_number == oracle
    assert top_core(dec) == set(clique)


def test_shells_and_k_core():
    dec = decompose([("A", "B"), ("B", "C"), ("A", "C"), ("D", "A")])
    assert dec.shells == {1: {"D"}, 2: {"A", "B", "C"}}
    assert dec.n_shells == 2
    assert dec.k_core(1) == {"A", "B", "C", "D"}
    assert dec.get("nobody") == 0


@pytest.mark.parametrize("seed", range(20))
def test_matches_oracle_on_random_graphs(seed):
    rng = random.Random(seed)
    edges = random_edges(rng.randint(1, 80), rng.choice([0.02, 0.05, 0.1, 0.3]), rng)
    expected = brute_force_core_numbers(edges)
    assert decompose(edges).core_number == expected


_edge_lists = st.lists(st.tuples(st.integers(0, 15), st.integers(0, 15)).filter(lambda e: e[0] != e[1]), max_size=60)


@settings(max_examples=150)
@given(_edge_lists)
def test_core_numbers_sound_and_maximal(edges):
    edges = [(f"v{a}", f"v{b}") for a, b in edges]
    core = decompose(edges).core_number
    assert induced_degree_ok(edges, core)
    # maximality: raising any node's value breaks the defining property
    for v in core:
        bumped = dict(core)
        bumped[v] += 1
        assert not induced_degree_ok(edges, bumped)
    assert core == brute_force_core_numbers(edges)


@given(_edge_lists, st.tuples(st.integers(0, 15), st.integers(0, 15)).filter(lambda e: e[0] != e[1]))
def test_edge_addition_is_monotone(edges, extra):
    edges = [(f"v{a}", f"v{b}") for a, b in edges]
    before = decompose(edges).core_number
    after = decompose(edges + [(f"v{extra[0]}", f"v{extra[1]}")]).core_number
    assert all(after[v] >= k for v, k in before.items())


@given(_edge_lists, _edge_lists)
def test_disjoint_union(left, right):
    left = [(f"l{a}", f"l{b}") for a, b in left]
    right = [(f"r{a}", f"r{b}") for a, b in right]
    union = decompose(left + right).core_number
    assert union == {**decompose(left).core_number, **decompose(right).core_number}


def test_core_numbers_on_adjacency_mapping():
    assert core_numbers({"a": ["b"], "b": ["a"], "c": []}) == {"a": 1, "b": 1, "c": 0}


def test_edge_list_roundtrip(tmp_path):
    net = build_network([statement(["A", "B", "C"], D1, "x"), statement(["A", "B"], D2, "y")])
    write_edge_list(net, tmp_path / "edges.tsv")
    write_events(net, tmp_path / "events.tsv")
    assert (tmp_path / "edges.tsv").read_text() == "A\tB\t2\nA\tC\t1\nB\tC\t1\n"
    assert (tmp_path / "events.tsv").read_text().splitlines()[0] == "A\tB\t2015-01-01\tx"
    assert len((tmp_path / "events.tsv").read_text().splitlines()) == 4
    assert read_edge_list(tmp_path / "edges.tsv").simple_edges == net.simple_edges
