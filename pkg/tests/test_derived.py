from __future__ import annotations

import itertools
import json
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gapforge.budget import get_budget
from gapforge.derived import (
    DiGraph,
    Graph,
    alternative_forms,
    arc_graph,
    build_T,
    certify_3colouring,
    chromatic_leq,
    cloud_expand,
    cloud_sizes,
    dir_graph,
    find_colouring,
    graph_from_json,
    is_bipartite,
    is_independent,
    is_proper,
    is_value_bruteforce,
    labelling_colouring,
    labelling_measure,
    labelling_set,
    sym,
    to_3colouring,
    to_colouring_step1,
    to_independent_set,
    to_unique_games,
    vc_value,
    weighted_is_value,
)
from gapforge.derived.colour import arc_colour_table, lift_through_arc, verify_T
from gapforge.derived.graphs import complete_graph, cycle_graph
from gapforge.errors import CapacityError, ConsistencyError, PreconditionError
from gapforge.games import (
    Game,
    OneToOne,
    TwoToTwo,
    WeightedGame,
    constraint_from_relation,
    random_game,
    relation_of,
    relation_of_block_form,
    value,
)


@pytest.fixture(scope="module")
def T():
    return build_T()


def random_graph(rng: random.Random, n: int, p: float = 0.4) -> Graph:
    return Graph(n, tuple(e for e in itertools.combinations(range(n), 2) if rng.random() < p))


def brute_is(G: Graph) -> int:
    best = 0
    for mask in range(1 << G.n):
        if all(not (mask >> u & 1 and mask >> v & 1) for u, v in G.edges):
            best = max(best, mask.bit_count())
    return best


def brute_colourable(G: Graph, t: int) -> bool:
    return any(is_proper(G, c) for c in itertools.product(range(t), repeat=G.n))


def satisfiable_2bi2_game(rng: np.random.Generator, n: int, m: int, q: int = 2) -> tuple[Game, list[int]]:
    """Random 2<->2 game with a planted satisfying labelling."""
    lab = [int(x) for x in rng.integers(0, q, n)]
    edges = []
    while len(edges) < m:
        u, v = (int(x) for x in rng.choice(n, 2, replace=False))
        s1 = tuple(int(x) for x in rng.permutation(q))
        s2 = tuple(int(x) for x in rng.permutation(q))
        rel = relation_of_block_form(s1, s2)
        if (lab[u], lab[v]) in rel:
            edges.append((u, v, constraint_from_relation(rel, q)))
    return Game(n, q, tuple(edges)), lab


# ---------------------------------------------------------------- unique games


@pytest.mark.parametrize("seed", range(15))
def test_unique_games_halves_value(seed):
    rng = np.random.default_rng(seed)
    q = int(rng.integers(2, 5))
    g = random_game(rng, int(rng.integers(2, 5)), q, int(rng.integers(1, 5)), "2to2")
    ug = to_unique_games(g)
    assert len(ug.edges) == 2 * len(g.edges)
    assert all(isinstance(c, OneToOne) for _, _, c in ug.edges)
    assert value(ug) == value(g) / 2


def test_unique_games_per_colouring_halving():
    g = random_game(np.random.default_rng(3), 3, 3, 4, "2to2")
    ug = to_unique_games(g)
    for col in itertools.product(range(3), repeat=3):
        sat = g.satisfied(col)
        halves = ug.satisfied(col)
        for i, s in enumerate(sat):
            assert halves[2 * i] + halves[2 * i + 1] == int(s)


def test_unique_games_satisfiable_gives_half():
    g, _ = satisfiable_2bi2_game(np.random.default_rng(4), 4, 5)
    assert value(g) == 1 and value(to_unique_games(g)) == Fraction(1, 2)


def test_unique_games_weighted_and_errors():
    g = random_game(np.random.default_rng(5), 3, 2, 2, "2to2")
    wg = WeightedGame(g, (Fraction(1), Fraction(3)))
    out = to_unique_games(wg)
    assert out.weights == (1, 1, 3, 3)
    with pytest.raises(PreconditionError):
        to_unique_games(random_game(np.random.default_rng(5), 3, 2, 2, "1to1"))


# ---------------------------------------------------------------- independent set


def test_is_value_small_cases():
    for n in range(1, 7):
        assert is_value_bruteforce(complete_graph(n)) == Fraction(1, n)
    assert is_value_bruteforce(Graph(5, ())) == 1
    assert is_value_bruteforce(Graph(0, ())) == 1
    assert vc_value(cycle_graph(5)) == Fraction(3, 5)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_is_value_matches_exhaustive_subsets(seed):
    rng = random.Random(seed)
    G = random_graph(rng, rng.randint(1, 12), rng.random())
    assert is_value_bruteforce(G) == Fraction(brute_is(G), G.n)


def test_is_value_cap():
    with pytest.raises(CapacityError):
        is_value_bruteforce(Graph(40, ()), get_budget())


@pytest.mark.parametrize("seed", range(8))
def test_labelling_set_is_independent_with_measure_p(seed):
    rng = np.random.default_rng(seed)
    g, lab = satisfiable_2bi2_game(rng, 3, 3)
    wg = to_independent_set(g)
    S = labelling_set(wg, lab)
    assert is_independent(wg.graph, S)
    assert labelling_measure(wg, lab) == [wg.p] * g.num_vertices


def test_independent_set_edge_rule():
    g = random_game(np.random.default_rng(6), 2, 3, 1, "2to2")
    u0, v0, c = g.edges[0]
    wg = to_independent_set(g, Fraction(1, 3))
    rel = relation_of(c)
    for i, (u, A1) in enumerate(wg.labels):
        for j, (v, A2) in enumerate(wg.labels):
            if (u, v) == (u0, v0):
                meets = any(A1 >> a & 1 and A2 >> b & 1 for a, b in rel)
                assert ((min(i, j), max(i, j)) in wg.graph.edges) == (not meets)


def test_empty_game_is_value_one():
    wg = to_independent_set(Game(2, 2, ()), Fraction(1, 3))
    assert weighted_is_value(wg) == 1
    assert is_value_bruteforce(cloud_expand(wg)) == 1


@pytest.mark.parametrize("seed", range(10))
def test_cloud_expansion_preserves_is_value(seed):
    rng = np.random.default_rng(seed)
    g = random_game(rng, 2, 2, int(rng.integers(1, 3)), "mixed")
    wg = to_independent_set(g, Fraction(1, 3))
    cloud = cloud_expand(wg)
    assert cloud.n == sum(cloud_sizes(wg)) == 2 * 3**2
    assert is_value_bruteforce(cloud) == weighted_is_value(wg)


def test_to_independent_set_rejects_bad_p():
    with pytest.raises(PreconditionError):
        to_independent_set(Game(2, 2, ()), Fraction(3, 2))


# ---------------------------------------------------------------- T matrix


def test_T_certificate(T):
    c = T.certificate()
    assert c["max_row_col_error"] <= 1e-9
    assert c["asymmetry"] <= 1e-12
    assert c["zero_pattern"]
    assert c["lambda2"] < 1 - 1e-6
    assert T.entries[1, 2] == 0            # T((0,1),(0,2))
    assert abs(T.entries.sum(axis=1) - 1).max() <= 1e-9


def test_T_lambda2_matches_dense_eigensolver(T):
    ev = sorted(abs(np.linalg.eigvalsh(T.entries)))
    # the constant vector carries eigenvalue 1; the next modulus is lambda_2
    assert ev[-1] == pytest.approx(1.0)
    assert T.lambda2 == pytest.approx(ev[-2], abs=1e-8)


def test_T_cache_round_trip(tmp_path, T):
    path = tmp_path / "t.json"
    first = build_T(cache=path)
    again = build_T(cache=path)
    assert np.array_equal(first.entries, again.entries)
    data = json.loads(path.read_text())
    data["entries"][0][5] += 0.1
    path.write_text(json.dumps(data))
    with pytest.raises(ConsistencyError):
        build_T(cache=path)


def test_verify_T_flags_bad_zero_pattern(T):
    bad = T.entries.copy()
    bad[1, 2] = bad[2, 1] = 1e-3
    assert not verify_T(bad).zero_pattern_ok


# ---------------------------------------------------------------- step 1


@pytest.mark.parametrize("seed", range(6))
def test_step1_labelling_colouring_is_proper(T, seed):
    g, lab = satisfiable_2bi2_game(np.random.default_rng(seed), 3, 3)
    G = to_colouring_step1(g, T)
    assert G.n == 3 * 4**2
    assert not G.has_loop()
    assert is_proper(G, labelling_colouring(g, lab))


def test_step1_representative_independence(T):
    rng = np.random.default_rng(9)
    for _ in range(5):
        g = random_game(rng, 2, 2, 1, "2bi2")
        rel = relation_of(g.edges[0][2])
        base = to_colouring_step1(g, T)
        for form in alternative_forms(rel, 2):
            assert relation_of_block_form(*form) == rel
            assert to_colouring_step1(g, T, forms={0: form}).edges == base.edges


def test_step1_representative_independence_q4(T):
    g = random_game(np.random.default_rng(2), 2, 4, 1, "2bi2")
    rel = relation_of(g.edges[0][2])
    base = to_colouring_step1(g, T, get_budget().replace(cloud_vertices=600))
    forms = alternative_forms(rel, 4)
    assert len(forms) == 2 * 16
    for form in forms[::5]:
        G = to_colouring_step1(g, T, get_budget().replace(cloud_vertices=600), forms={0: form})
        assert G.edges == base.edges


def test_step1_empty_game_and_preconditions(T):
    assert to_colouring_step1(Game(2, 2, ()), T).edges == ()
    with pytest.raises(PreconditionError):
        to_colouring_step1(Game(2, 3, ()), T)
    # 2-to-2 but not a union of K_{2,2} blocks: 0~{0,1}, 1~{1,2}, 2~{2,3}, 3~{3,0}
    cyclic = TwoToTwo((0, 1, 2, 3), (1, 2, 3, 0))
    with pytest.raises(PreconditionError):
        to_colouring_step1(Game(2, 4, ((0, 1, cyclic),)), T, get_budget().replace(cloud_vertices=10**4))


# ---------------------------------------------------------------- dir / sym / arc


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_sym_dir_round_trip(seed):
    G = random_graph(random.Random(seed), 6)
    D = dir_graph(G)
    assert len(D.arcs) == 2 * len(G.edges)
    assert sym(D) == G


def test_arc_of_directed_triangle_is_triangle():
    D = DiGraph(3, ((0, 1), (1, 2), (2, 0)))
    A = arc_graph(D)
    assert A.n == 3 and sorted(A.arcs) == [(0, 1), (1, 2), (2, 0)]


def test_arc_of_dir_k2():
    D = dir_graph(complete_graph(2))
    A = arc_graph(D)
    uv, vu = D.arcs.index((0, 1)), D.arcs.index((1, 0))
    assert sorted(A.arcs) == sorted([(uv, vu), (vu, uv)])


def test_graph_json_round_trip():
    G = random_graph(random.Random(1), 5)
    assert graph_from_json(json.loads(json.dumps(G.to_json()))) == G
    D = dir_graph(G)
    assert graph_from_json(D.to_json()) == D


# ---------------------------------------------------------------- colouring oracles


def test_chromatic_small_cases():
    assert not chromatic_leq(cycle_graph(5), 2)
    assert chromatic_leq(cycle_graph(6), 2)
    assert chromatic_leq(complete_graph(4), 4)
    assert not chromatic_leq(complete_graph(4), 3)
    assert chromatic_leq(Graph(0, ()), 1)
    assert not chromatic_leq(Graph(1, ((0, 0),)), 3)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 4))
def test_find_colouring_matches_brute_force(seed, t):
    rng = random.Random(seed)
    G = random_graph(rng, rng.randint(1, 7), rng.random())
    col = find_colouring(G, t)
    assert (col is not None) == brute_colourable(G, t)
    if col is not None:
        assert is_proper(G, col) and max(col, default=0) < t


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_is_bipartite_matches_two_colouring(seed):
    rng = random.Random(seed)
    G = random_graph(rng, rng.randint(1, 8), rng.random() * 0.6)
    assert is_bipartite(G) == brute_colourable(G, 2)


def test_colouring_search_budget():
    with pytest.raises(CapacityError):
        chromatic_leq(complete_graph(30), 29)


# ---------------------------------------------------------------- arc-graph lemmas


def test_arc_colour_table_composes():
    first, second = arc_colour_table(4)
    # arc(K_4) has 12 vertices and 36 arcs; the second map 3-colours those arcs' graph
    assert len(first) == 12 and len(second) == 36
    assert set(second.values()) <= {0, 1, 2}


def krokhin_certificate(D: DiGraph, col4: list[int]) -> list[int]:
    first, second = arc_colour_table(4)
    c1 = lift_through_arc(D, col4, first)
    return lift_through_arc(arc_graph(D), c1, second)


@pytest.mark.parametrize("seed", range(25))
def test_arc_arc_of_four_colourable_digraph_is_three_colourable(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 7)
    arcs = tuple((u, v) for u in range(n) for v in range(n) if u != v and rng.random() < 0.35)
    D = DiGraph(n, arcs)
    col4 = find_colouring(sym(D), 4)
    if col4 is None:
        pytest.skip("not 4-colourable")
    AA = sym(arc_graph(arc_graph(D)))
    cert = krokhin_certificate(D, col4)
    assert is_proper(AA, cert) and max(cert, default=0) < 3


@pytest.mark.parametrize("seed", range(4))
def test_to_3colouring_of_satisfiable_game(T, seed):
    g, lab = satisfiable_2bi2_game(np.random.default_rng(seed), 2, 1)
    G1 = to_colouring_step1(g, T)
    H = to_3colouring(g, T)
    D = dir_graph(G1)
    assert H.n == len(arc_graph(D).arcs)
    cert = certify_3colouring(G1, labelling_colouring(g, lab))
    assert is_proper(H, cert) and max(cert) < 3


def test_to_3colouring_brute_force_small(T):
    g, _ = satisfiable_2bi2_game(np.random.default_rng(1), 2, 1)
    H = to_3colouring(g, T)
    col = find_colouring(H, 3, get_budget().replace(chroma_nodes=50_000_000))
    assert col is not None and is_proper(H, col)


def test_harner_on_graphs_with_five_nodes():
    """arc(dir(G)) 2-colourable implies G 4-colourable, all labelled graphs on 5 nodes."""
    pairs = list(itertools.combinations(range(5), 2))
    for mask in range(1 << len(pairs)):
        G = Graph(5, tuple(p for i, p in enumerate(pairs) if mask >> i & 1))
        if is_bipartite(sym(arc_graph(dir_graph(G)))):
            assert chromatic_leq(G, 4)
