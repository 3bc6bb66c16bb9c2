from __future__ import annotations

import itertools
import math
from collections import defaultdict

import numpy as np
import pytest

from gapforge.errors import PreconditionError
from gapforge.games import (
    Game,
    OneToOne,
    TwoToTwo,
    WeightedGame,
    check_transitive,
    colouring_value,
    is_2bi2,
    is_edge_consistent,
    is_simple,
    random_two_to_two,
    relation_of,
    simplify,
    weighted_value,
)
from gapforge.gf2 import enumerate_subspaces
from gapforge.kms import (
    APPROX,
    EXACT,
    KmsParams,
    KmsVertex,
    approx_weights,
    build_transitive_game,
    canonical_embed,
    canonical_H,
    canonical_L_collection,
    chi_of,
    clique_decomposition,
    constraint_between,
    enumerate_U,
    exact_weights,
    labels_of,
    pair_key,
    planted_labelling,
    propagate_label,
    reduce_instance,
    sample_weights,
    side_condition_space,
)
from gapforge.xor3 import Xor3Instance, random_regular_instance, regularize, satisfying_assignments

TWO_DISJOINT = Xor3Instance(6, ((0, 1, 2, 1), (3, 4, 5, 0)))
TRIANGLE = regularize(Xor3Instance(3, ((0, 1, 2, 1),)))


def permute_instance(inst: Xor3Instance, rho) -> Xor3Instance:
    return Xor3Instance(inst.num_vars, tuple((rho[x], rho[y], rho[z], b) for x, y, z, b in inst.equations))


def naive_U(inst: Xor3Instance, k: int):
    out = []
    for U in itertools.product(range(inst.m), repeat=k):
        eqs = [inst.equations[i] for i in U]
        ok = True
        for a, b in itertools.combinations(range(k), 2):
            va, vb = set(eqs[a][:3]), set(eqs[b][:3])
            if va & vb:
                ok = False
            for e in inst.equations:
                ev = set(e[:3])
                if ev & va and ev & vb:
                    ok = False
        if ok:
            out.append(U)
    return out


def test_enumerate_U_small_cases():
    assert enumerate_U(TRIANGLE, 1) == [(0,), (1,), (2,)]
    assert enumerate_U(TRIANGLE, 2) == []
    assert enumerate_U(TWO_DISJOINT, 2) == [(0, 1), (1, 0)]


@pytest.mark.parametrize("seed", range(4))
def test_enumerate_U_matches_naive_filter(seed):
    inst = regularize(Xor3Instance(6, ((0, 1, 2, 0), (3, 4, 5, 1))))
    assert inst.m == 6
    assert enumerate_U(inst, 2) == naive_U(inst, 2)
    inst, _ = random_regular_instance(12, 6, seed)
    for k in (1, 2, 3):
        assert enumerate_U(inst, k) == naive_U(inst, k)


def test_side_condition_space():
    H, pins = side_condition_space(TWO_DISJOINT, (1, 0))
    assert H.dim == 2
    assert pins == [(0b111000, 0), (0b000111, 1)]
    H1, _ = side_condition_space(TRIANGLE, (0,))
    assert H1.dim == 1 and bin(H1.basis[0]).count("1") == 3


def test_canonical_embedding_and_rho_invariance():
    rng = np.random.default_rng(3)
    inst, _ = random_regular_instance(12, 5, rng)
    H = canonical_H(2)
    assert H.basis == (0b111000, 0b000111)
    for U in enumerate_U(inst, 2):
        eqs = [inst.equations[i] for i in U]
        mu = canonical_embed(eqs)
        assert sorted(mu.values()) == list(range(6))
        rho = [int(v) for v in rng.permutation(inst.num_vars)]
        mu_rho = canonical_embed([(rho[x], rho[y], rho[z], b) for x, y, z, b in eqs])
        assert all(mu_rho[rho[x]] == mu[x] for x in mu)


def test_L_collection_size():
    # derived: l-dim subspaces avoiding H counted by brute force over all subspaces
    for k, l in [(1, 0), (1, 1), (1, 2), (2, 1)]:
        params = KmsParams(k, l)
        H = canonical_H(k)
        brute = 0
        for L in enumerate_subspaces(3 * k, l):
            inter = [v for v in L.vectors() if v and v in H]
            brute += not inter
        assert len(canonical_L_collection(params)) == brute
    assert len(canonical_L_collection(KmsParams(2, 1))) == 2**6 - 2**2


def test_labels_count_and_order():
    inst, _ = random_regular_instance(9, 3, 0)
    for k, l in [(1, 0), (1, 1), (1, 2)]:
        params = KmsParams(k, l)
        for L in canonical_L_collection(params):
            v = KmsVertex((0,), L, (inst.equations[0],))
            labels = labels_of(v, k)
            assert len(labels) == params.q
            values = [tuple(f(b) for b in L.basis) for f in labels]
            assert values == sorted(values) and len(set(values)) == params.q
            assert all(f(0b111) == inst.equations[0][3] for f in labels)


def test_one_equation_one_vertex():
    tg = build_transitive_game(Xor3Instance(3, ((0, 1, 2, 1),)), KmsParams(1, 0))
    assert tg.game.num_vertices == 1 and tg.game.edges == ()


def test_rejects_irregular_instance():
    inst = Xor3Instance(4, ((0, 1, 2, 0), (0, 1, 3, 1)))
    with pytest.raises(PreconditionError):
        build_transitive_game(inst, KmsParams(1, 1))


CASES = [
    (TRIANGLE, KmsParams(1, 1)),
    (TRIANGLE, KmsParams(1, 2)),
    (TWO_DISJOINT, KmsParams(2, 1)),
    (random_regular_instance(8, 4, 5)[0], KmsParams(1, 1)),
    (random_regular_instance(9, 3, 6, planted=False)[0], KmsParams(1, 2)),
]


@pytest.mark.parametrize("inst,params", CASES)
def test_transitive_game_structure(inst, params):
    tg = build_transitive_game(inst, params)
    g = tg.game
    assert g.num_vertices == len(tg.tuples) * len(tg.Lcal)
    assert is_edge_consistent(g) and is_simple(g)
    assert check_transitive(g)
    for _, _, c in g.edges:
        if isinstance(c, TwoToTwo):
            assert is_2bi2(c, params.q)
    dec = clique_decomposition(g)
    # naive closure over 1-to-1 edges
    adj = defaultdict(set)
    for u, v, c in g.edges:
        if isinstance(c, OneToOne):
            adj[u].add(v)
            adj[v].add(u)
    for x in range(g.num_vertices):
        seen, stack = {x}, [x]
        while stack:
            for y in adj[stack.pop()] - seen:
                seen.add(y)
                stack.append(y)
        assert seen == set(dec.cliques[dec.clique_id[x]])


@pytest.mark.parametrize("inst,params", CASES[:4])
def test_constraint_depends_only_on_five_tuple(inst, params):
    tg = build_transitive_game(inst, params, use_cache=False)
    constraint = {(u, v): relation_of(c, params.q) for u, v, c in tg.game.edges}
    buckets = defaultdict(set)
    for i, j in itertools.combinations(range(len(tg.vertices)), 2):
        buckets[pair_key(tg.vertices[i], tg.vertices[j])].add(constraint.get((i, j)))
    assert all(len(b) == 1 for b in buckets.values())


def test_shuffle_invariance():
    rng = np.random.default_rng(11)
    for inst, params in CASES[:4]:
        tg = build_transitive_game(inst, params)
        for _ in range(2):
            rho = [int(v) for v in rng.permutation(inst.num_vars)]
            moved = build_transitive_game(permute_instance(inst, rho), params)
            assert moved.game == tg.game
        # same instance, one pair at a time
        for i, j in list(itertools.combinations(range(len(tg.vertices)), 2))[:40]:
            a, b = tg.vertices[i], tg.vertices[j]
            rho = [int(v) for v in rng.permutation(inst.num_vars)]

            def move(v):
                return KmsVertex(v.U, v.Lstar, tuple((rho[x], rho[y], rho[z], r) for x, y, z, r in v.equations))

            assert constraint_between(move(a), move(b), inst.num_vars, params.k) == constraint_between(
                a, b, inst.num_vars, params.k
            )


def test_clique_labels_propagate_consistently():
    tg = build_transitive_game(*CASES[2])
    dec = clique_decomposition(tg.game)
    pis = {(u, v): c for u, v, c in tg.game.edges if isinstance(c, OneToOne)}
    for members in dec.cliques:
        for label in range(tg.params.q):
            lab = propagate_label(tg.game, dec, members[0], label)
            for (u, v), c in pis.items():
                if u in lab and v in lab:
                    assert c.pi[lab[u]] == lab[v]


def test_exact_weights_depend_on_clique_pair_only():
    tg = build_transitive_game(*CASES[2])
    dec = clique_decomposition(tg.game)
    w = exact_weights(tg, dec)
    assert w and all(x > 0 for x in w.values())
    per_pair = defaultdict(set)
    for (u, v), x in w.items():
        per_pair[frozenset((dec.clique_id[u], dec.clique_id[v]))].add(x)
    assert all(len(s) == 1 for s in per_pair.values())


def test_single_U_symmetric_weights_equal():
    inst = Xor3Instance(3, ((0, 1, 2, 0),))
    tg = build_transitive_game(inst, KmsParams(1, 1))
    dec = clique_decomposition(tg.game)
    assert len(set(exact_weights(tg, dec).values())) == 1


def test_exact_weights_match_sampling():
    tg = build_transitive_game(*CASES[0])
    dec = clique_decomposition(tg.game)
    w = exact_weights(tg, dec)
    n = 100_000
    hits, scale = sample_weights(tg, dec, n, seed=2024)
    for (u, v), x in w.items():
        for pair in ((u, v), (v, u)):
            p = float(x * scale)
            sigma = math.sqrt(n * p * (1 - p))
            assert abs(hits.get(pair, 0) - n * p) <= 3 * sigma
    assert set(hits) <= set(w) | {(v, u) for u, v in w}


@pytest.mark.parametrize("inst,params", [CASES[0], CASES[2], CASES[3]])
def test_approx_weight_ledger(inst, params):
    tg = build_transitive_game(inst, params)
    dec = clique_decomposition(tg.game)
    ledger = approx_weights(tg, dec)
    assert all(max(v) <= ledger.psi for v in ledger.nu)
    assert ledger.psi <= ledger.psi_bound
    assert all(c == chi_of(v, inst.m, params.k) for c, v in zip(ledger.chi, ledger.nu))
    assert set(ledger.int_w) == set(ledger.exact_w)
    assert all(isinstance(x, int) and x > 0 for x in ledger.int_w.values())
    assert ledger.denominator_factors <= (ledger.psi + 1) ** (params.k + 1)
    assert ledger.gamma_sq >= 1 and ledger.gamma_upper**2 >= ledger.gamma_sq
    data = ledger.to_json()
    assert {"nu", "psi", "chi", "gamma"} <= set(data)


def test_nu_invariant_under_shuffles():
    rng = np.random.default_rng(7)
    inst, params = CASES[3]
    red = reduce_instance(inst, params)
    for _ in range(3):
        rho = [int(v) for v in rng.permutation(inst.num_vars)]
        moved = reduce_instance(permute_instance(inst, rho), params)
        assert moved.ledger.nu == red.ledger.nu


def test_approx_value_within_gamma_sq():
    for inst, params in [CASES[0], (random_regular_instance(8, 3, 9, planted=False)[0], KmsParams(1, 1))]:
        red = reduce_instance(inst, params)
        ve = weighted_value(red.exact_game)
        va = weighted_value(red.approx_game)
        assert va <= red.ledger.gamma_sq * ve
        assert ve <= red.ledger.gamma_sq * va


def test_weight_lemma_per_colouring_with_random_constraints():
    # same weights, random 4-label 2-to-2 constraints: the bound holds for every colouring
    red = reduce_instance(*CASES[3])
    rng = np.random.default_rng(0)
    g = red.exact_game.game
    edges = tuple((u, v, random_two_to_two(rng, 4)) for u, v, _ in g.edges)
    g4 = Game(g.num_vertices, 4, edges)
    exact = WeightedGame(g4, red.exact_game.weights)
    approx = WeightedGame(g4, red.approx_game.weights)
    gsq = red.ledger.gamma_sq
    for _ in range(200):
        col = [int(c) for c in rng.integers(0, 4, g.num_vertices)]
        assert colouring_value(approx, col) <= gsq * colouring_value(exact, col)


@pytest.mark.parametrize("seed", range(3))
def test_planted_labelling_satisfies_everything(seed):
    inst, s = random_regular_instance(9, 4, seed)
    for params in (KmsParams(1, 0), KmsParams(1, 1), KmsParams(1, 2)):
        red = reduce_instance(inst, params)
        for sol in satisfying_assignments(inst, limit=3):
            lab = planted_labelling(inst, sol, red.transitive.vertices, params.k)
            assert all(red.transitive.game.satisfied(lab))
            for scheme in (EXACT, APPROX):
                assert colouring_value(red.weighted(scheme), lab) == 1
        assert planted_labelling(inst, s, red.transitive.vertices, params.k) is not None


def test_planted_labelling_rejects_bad_assignment():
    inst, s = random_regular_instance(9, 3, 1)
    tg = build_transitive_game(inst, KmsParams(1, 1))
    bad = s ^ (1 << inst.equations[0][0])
    with pytest.raises(PreconditionError):
        planted_labelling(inst, bad, tg.vertices, 1)


def test_weighted_game_simplifies_cleanly():
    red = reduce_instance(*CASES[2])
    g = red.exact_game.game
    assert all(isinstance(c, TwoToTwo) for _, _, c in g.edges)
    assert is_edge_consistent(simplify(g))
    assert red.exact_game.game == red.approx_game.game
    assert all(x.denominator == 1 for x in red.approx_game.weights)
