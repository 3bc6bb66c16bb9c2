from __future__ import annotations

import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gapforge.budget import get_budget
from gapforge.errors import CapacityError, InterpretationError, PreconditionError, VocabularyError
from gapforge.fo.adapters import (
    game_structure,
    graph_structure,
    structure_to_game,
    structure_to_xor3,
    transitive_game_structure,
    xor3_structure,
)
from gapforge.fo.catalog import (
    KmsFormulas,
    KmsTupleOracle,
    NodeVars,
    builtin_interpretations,
    cloud_weight,
    constraint_table,
    independent_set_interpretation,
    kms_transitive_interpretation,
    kms_unweighted_pieces,
)
from gapforge.fo.corpus import two_to_two_corpus, xor3_corpus
from gapforge.fo.counting import (
    CardEq,
    CountingContext,
    Indicator,
    NuCount,
    One,
    PairCount,
    Product,
    Sum,
    compile_counting,
    constant,
    count_compiled,
    depth,
    evaluate_counting,
    width,
)
from gapforge.fo.evaluate import Evaluator, UnboundVariable, count_satisfying, evaluate, satisfying_tuples
from gapforge.fo.formulas import (
    FALSE,
    TRUE,
    And,
    Atom,
    Bottom,
    Eq,
    Exists,
    Forall,
    Not,
    Or,
    Top,
    atom,
    conj,
    disj,
    eq,
    exists,
    forall,
    free_vars,
    neg,
    rename,
)
from gapforge.fo.interpret import Interpretation, apply_interpretation, identity_interpretation
from gapforge.fo.iso import find_isomorphism, isomorphic
from gapforge.fo.sexpr import (
    ParseError,
    formula_to_sexp,
    interpretation_to_sexp,
    parse_formula,
    parse_interpretation,
)
from gapforge.fo.structures import Structure
from gapforge.games import Game, TwoToTwo, random_game
from gapforge.kms import KmsParams, build_vertices, reduce_instance
from gapforge.xor3 import Xor3Instance, regularize

ARITIES = {"E": 2, "P": 1, "T": 3}


def random_structure(rng: random.Random, n: int, density: float = 0.3) -> Structure:
    rels = {}
    for name, a in ARITIES.items():
        rels[name] = {t for t in itertools.product(range(n), repeat=a) if rng.random() < density}
    return Structure.build(range(n), rels, ARITIES)


def random_formula(rng: random.Random, vars_: list[str], depth: int) -> object:
    if depth == 0 or rng.random() < 0.25:
        kind = rng.choice(["atom", "atom", "eq", "const"])
        if kind == "const":
            return rng.choice([TRUE, FALSE])
        if kind == "eq":
            return Eq(rng.choice(vars_), rng.choice(vars_))
        name = rng.choice(sorted(ARITIES))
        return Atom(name, tuple(rng.choice(vars_) for _ in range(ARITIES[name])))
    kind = rng.choice(["not", "and", "or", "exists", "forall"])
    if kind == "not":
        return Not(random_formula(rng, vars_, depth - 1))
    if kind in ("and", "or"):
        parts = tuple(random_formula(rng, vars_, depth - 1) for _ in range(rng.randint(2, 3)))
        return And(parts) if kind == "and" else Or(parts)
    v = rng.choice(["u", "w"] + vars_[:1])
    body = random_formula(rng, vars_ + [v], depth - 1)
    return Exists((v,), body) if kind == "exists" else Forall((v,), body)


def naive(A: Structure, f, env: dict) -> bool:
    """Textbook recursive semantics, independent of the search-based evaluator."""
    if isinstance(f, Top):
        return True
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Atom):
        return tuple(env[t] for t in f.terms) in A.relations[f.rel]
    if isinstance(f, Eq):
        return env[f.left] == env[f.right]
    if isinstance(f, Not):
        return not naive(A, f.body, env)
    if isinstance(f, And):
        return all(naive(A, p, env) for p in f.parts)
    if isinstance(f, Or):
        return any(naive(A, p, env) for p in f.parts)
    if isinstance(f, (Exists, Forall)):
        results = (
            naive(A, f.body, {**env, **dict(zip(f.vars, vals))})
            for vals in itertools.product(A.universe, repeat=len(f.vars))
        )
        return any(results) if isinstance(f, Exists) else all(results)
    raise TypeError(f)


def brute_isomorphic(A: Structure, B: Structure) -> bool:
    if len(A.universe) != len(B.universe) or A.arities != B.arities:
        return False
    for perm in itertools.permutations(B.universe):
        m = dict(zip(A.universe, perm))
        if all({tuple(m[x] for x in t) for t in A.relations[r]} == set(B.relations[r]) for r in A.relations):
            if all(m[A.constants[c]] == B.constants[c] for c in A.constants):
                return True
    return False


# ---------------------------------------------------------------- structures and evaluation


def test_structure_validation():
    with pytest.raises(VocabularyError):
        Structure.build(range(2), {"E": {(0, 5)}}, {"E": 2})
    with pytest.raises(VocabularyError):
        Structure.build(range(2), {"E": {(0, 1, 1)}}, {"E": 2})


def test_trivial_equality_and_stored_triples():
    A = xor3_structure(Xor3Instance(4, ((0, 1, 2, 0), (1, 2, 3, 1))))
    assert evaluate(A, eq("x", "x"), {"x": 3})
    assert evaluate(A, atom("Eq0", "a", "b", "c"), {"a": 0, "b": 1, "c": 2})
    assert not evaluate(A, atom("Eq0", "a", "b", "c"), {"a": 1, "b": 2, "c": 3})
    assert evaluate(A, atom("Eq1", "a", "b", "c"), {"a": 1, "b": 2, "c": 3})


def test_unbound_variable_raises():
    A = random_structure(random.Random(0), 3)
    with pytest.raises(UnboundVariable):
        evaluate(A, atom("E", "x", "y"), {"x": 0})


def test_unknown_relation_raises():
    A = random_structure(random.Random(0), 3)
    with pytest.raises(VocabularyError):
        evaluate(A, atom("Nope", "x"), {"x": 0})


@pytest.mark.parametrize("seed", range(40))
def test_evaluator_matches_naive_semantics(seed):
    rng = random.Random(seed)
    A = random_structure(rng, rng.randint(1, 5))
    for _ in range(5):
        f = random_formula(rng, ["x", "y"], 3)
        env = {"x": rng.choice(A.universe), "y": rng.choice(A.universe)}
        assert evaluate(A, f, env) == naive(A, f, env), formula_to_sexp(f)


@pytest.mark.parametrize("seed", range(15))
def test_count_matches_naive_enumeration(seed):
    rng = random.Random(100 + seed)
    A = random_structure(rng, rng.randint(1, 5))
    f = random_formula(rng, ["x", "y"], 3)
    expected = sum(naive(A, f, {"x": a, "y": b}) for a in A.universe for b in A.universe)
    assert count_satisfying(A, f, ["x", "y"]) == expected
    assert len(satisfying_tuples(A, f, ["x", "y"])) == expected


def test_count_true_is_universe_size():
    A = random_structure(random.Random(1), 6)
    assert count_satisfying(A, TRUE, ["x"]) == 6
    assert count_satisfying(A, FALSE, ["x"]) == 0


def test_eval_on_eight_elements():
    rng = random.Random(8)
    A = random_structure(rng, 8, 0.15)
    f = forall(["x"], exists(["y"], disj(atom("E", "x", "y"), atom("P", "x"))))
    assert evaluate(A, f) == naive(A, f, {})


def test_search_budget_is_enforced():
    A = random_structure(random.Random(2), 6)
    ev = Evaluator(A, get_budget().replace(fo_assignments=10))
    with pytest.raises(CapacityError):
        ev.count(TRUE, ["a", "b", "c"])


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_evaluation_invariant_under_relabelling(seed):
    rng = random.Random(seed)
    A = random_structure(rng, rng.randint(1, 5))
    perm = list(range(len(A.universe)))
    rng.shuffle(perm)
    m = {e: 10 + perm[i] for i, e in enumerate(A.universe)}
    B = A.relabel(m)
    f = random_formula(rng, ["x"], 3)
    for a in A.universe:
        assert evaluate(A, f, {"x": a}) == evaluate(B, f, {"x": m[a]})


def test_constants_in_formulas():
    A = Structure.build(range(3), {"P": {(1,)}}, {"P": 1}, constants={"c": 1})
    assert evaluate(A, atom("P", "@c"))
    assert count_satisfying(A, eq("x", "@c"), ["x"]) == 1


def test_builders_and_rename():
    f = conj(TRUE, atom("P", "x"), conj(atom("P", "y"), TRUE))
    assert isinstance(f, And) and len(f.parts) == 2
    assert disj(FALSE, FALSE) is FALSE
    assert neg(neg(atom("P", "x"))) == atom("P", "x")
    assert eq("x", "x") is TRUE
    g = exists(["y"], atom("E", "x", "y"))
    assert free_vars(g) == {"x"}
    assert free_vars(rename(g, {"x": "z"})) == {"z"}
    with pytest.raises(ValueError):
        rename(g, {"x": "y"})


# ---------------------------------------------------------------- s-expressions


@pytest.mark.parametrize("seed", range(20))
def test_sexpr_round_trip(seed):
    rng = random.Random(seed)
    f = random_formula(rng, ["x", "y"], 4)
    assert parse_formula(formula_to_sexp(f)) == f


def test_sexpr_comments_and_errors():
    f = parse_formula("(and (E x y) ; trailing comment\n (not (= x y)))")
    assert f == And((Atom("E", ("x", "y")), Not(Eq("x", "y"))))
    for bad in ("(and (E x y)", "(= x)", "(exists x (P x))", ")", "(P x) (P y)"):
        with pytest.raises(ParseError):
            parse_formula(bad)


def test_interpretation_text_round_trip():
    theta = builtin_interpretations()["regularize"].build()
    again = parse_interpretation(interpretation_to_sexp(theta))
    assert again.dim == theta.dim and again.domain == theta.domain
    assert again.relations == dict(theta.relations)


# ---------------------------------------------------------------- interpretations


@pytest.mark.parametrize("seed", range(5))
def test_identity_interpretation_gives_isomorphic_copy(seed):
    A = random_structure(random.Random(seed), 4)
    out = apply_interpretation(identity_interpretation(A), A)
    assert out.congruence == "full"
    assert isomorphic(out.structure, A)


def test_interpretation_scope_is_checked():
    with pytest.raises(VocabularyError):
        Interpretation(1, ("x",), atom("E", "x", "y"))
    with pytest.raises(VocabularyError):
        Interpretation(2, ("x",), TRUE)


def test_non_transitive_equiv_is_rejected():
    # a path 0-1-2: "adjacent or equal" is not transitive
    A = Structure.build(range(3), {"E": {(0, 1), (1, 0), (1, 2), (2, 1)}}, {"E": 2})
    theta = Interpretation(1, ("x",), TRUE, (("x",), ("y",), disj(eq("x", "y"), atom("E", "x", "y"))))
    with pytest.raises(InterpretationError):
        apply_interpretation(theta, A)


def test_non_congruent_equiv_is_rejected():
    # identify elements with the same P-value, then copy E, which does not respect it
    A = Structure.build(range(3), {"P": {(0,), (1,)}, "E": {(0, 2)}}, {"P": 1, "E": 2})
    equiv = disj(conj(atom("P", "x"), atom("P", "y")), conj(neg(atom("P", "x")), neg(atom("P", "y"))))
    theta = Interpretation(
        1, ("x",), TRUE, (("x",), ("y",), equiv), {"E": ((("a",), ("b",)), atom("E", "a", "b"))}
    )
    with pytest.raises(InterpretationError):
        apply_interpretation(theta, A)


def test_quotient_by_congruence():
    A = Structure.build(range(4), {"P": {(0,), (1,)}, "E": {(0, 2), (1, 3), (0, 3), (1, 2)}}, {"P": 1, "E": 2})
    equiv = disj(conj(atom("P", "x"), atom("P", "y")), conj(neg(atom("P", "x")), neg(atom("P", "y"))))
    theta = Interpretation(
        1, ("x",), TRUE, (("x",), ("y",), equiv), {"E": ((("a",), ("b",)), atom("E", "a", "b"))}
    )
    out = apply_interpretation(theta, A)
    assert len(out.structure.universe) == 2
    assert len(out.structure.relations["E"]) == 1


def test_constant_definitions():
    A = Structure.build(range(3), {"P": {(2,)}}, {"P": 1})
    theta = Interpretation(1, ("x",), TRUE, None, {}, {"c": (("x",), atom("P", "x"))})
    out = apply_interpretation(theta, A)
    assert out.structure.constants["c"] == 2
    bad = Interpretation(1, ("x",), TRUE, None, {}, {"c": (("x",), TRUE)})
    with pytest.raises(InterpretationError):
        apply_interpretation(bad, A)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000))
def test_interpretation_commutes_with_isomorphism(seed):
    rng = random.Random(seed)
    inst = rng.choice(list(xor3_corpus(2, 5)))
    A = xor3_structure(inst)
    perm = list(range(inst.num_vars))
    rng.shuffle(perm)
    B = A.relabel({i: perm[i] for i in range(inst.num_vars)})
    theta = builtin_interpretations()["regularize"].build()
    assert isomorphic(apply_interpretation(theta, A).structure, apply_interpretation(theta, B).structure)


# ---------------------------------------------------------------- isomorphism


def test_isomorphic_trivial_cases():
    A = random_structure(random.Random(3), 5)
    assert isomorphic(A, A)
    B = Structure.build(range(5), {**{k: set(v) for k, v in A.relations.items()}, "P": set()}, ARITIES)
    if len(A.relations["P"]):
        assert not isomorphic(A, B)
    assert not isomorphic(A, random_structure(random.Random(3), 4))


@pytest.mark.parametrize("seed", range(30))
def test_isomorphism_matches_permutation_oracle(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 6)
    A = random_structure(rng, n, 0.2)
    if rng.random() < 0.5:
        perm = list(range(n))
        rng.shuffle(perm)
        B = A.relabel(dict(zip(range(n), perm)))
        if rng.random() < 0.5 and n > 1:
            # move one E tuple: keeps the relation size, usually breaks isomorphism
            E = set(B.relations["E"])
            if E:
                E.discard(next(iter(sorted(E))))
                E.add((rng.randrange(n), rng.randrange(n)))
            B = Structure.build(B.universe, {**{k: set(v) for k, v in B.relations.items()}, "E": E}, ARITIES)
    else:
        B = random_structure(rng, n, 0.2)
    got = find_isomorphism(A, B)
    assert (got is not None) == brute_isomorphic(A, B)
    if got is not None:
        assert A.relabel(got).relations == B.relations


def test_isomorphism_on_regular_graphs():
    hexagon = graph_structure(6, [(i, (i + 1) % 6) for i in range(6)])
    triangles = graph_structure(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])
    assert not isomorphic(hexagon, triangles)
    shifted = graph_structure(6, [((i + 2) % 6, (i + 3) % 6) for i in range(6)])
    assert isomorphic(hexagon, shifted)


def test_isomorphism_size_cap():
    A = random_structure(random.Random(0), 5)
    with pytest.raises(CapacityError):
        isomorphic(A, A, get_budget().replace(iso_elements=4))


# ---------------------------------------------------------------- adapters


def test_xor3_adapter_round_trip():
    inst = Xor3Instance(5, ((0, 1, 2, 0), (2, 3, 4, 1)))
    back = structure_to_xor3(xor3_structure(inst))
    assert sorted(back.equations) == sorted(inst.equations) and back.num_vars == 5


def test_game_adapter_round_trip():
    g = random_game(np.random.default_rng(5), 4, 3, 5)
    back = structure_to_game(game_structure(g), 3)
    assert back == g


def test_transitive_adapter_has_both_orientations():
    g = Game(2, 2, ((0, 1, TwoToTwo((0, 1), (1, 0))),))
    S = transitive_game_structure(g)
    assert sum(len(v) for v in S.relations.values()) == 2


# ---------------------------------------------------------------- corpora


def test_xor3_corpus_is_one_per_isomorphism_class():
    corpus = [xor3_structure(i) for i in xor3_corpus(2)]
    for a, b in itertools.combinations(corpus, 2):
        assert not isomorphic(a, b)


def test_xor3_corpus_is_complete():
    corpus = [xor3_structure(i) for i in xor3_corpus(3)]
    rng = random.Random(0)
    for _ in range(30):
        n = rng.randint(4, 9)
        triples = [tuple(rng.sample(range(n), 3)) for _ in range(rng.randint(1, 3))]
        if len({frozenset(t) for t in triples}) < len(triples):
            continue
        used = sorted({v for t in triples for v in t})
        ren = {v: i for i, v in enumerate(used)}
        inst = Xor3Instance(len(used), tuple((*(ren[v] for v in t), rng.randint(0, 1)) for t in triples))
        A = xor3_structure(inst)
        assert sum(isomorphic(A, B) for B in corpus) == 1


def test_game_corpus_is_one_per_isomorphism_class():
    corpus = [game_structure(g) for g in two_to_two_corpus(2, 2)]
    assert len(corpus) == 21
    for a, b in itertools.combinations(corpus, 2):
        assert not isomorphic(a, b)


# ---------------------------------------------------------------- counting formulas


def counting_setup(inst: Xor3Instance):
    A = xor3_structure(inst)
    ctx = CountingContext("zero", "one", ("x",), ("y",))
    return A, ctx


def test_counting_base_cases():
    inst = Xor3Instance(5, ((0, 1, 2, 0), (2, 3, 4, 1), (0, 3, 4, 1)))
    A, ctx = counting_setup(inst)
    env = {"zero": 0, "one": 1, "x": 2, "y": 3}
    for e, expected in [
        (One(), 1),
        (Indicator(atom("Eq0", "zero", "one", "x")), 1),
        (Indicator(atom("Eq1", "zero", "one", "x")), 0),
        (CardEq(), 3),
        (Sum(One(), CardEq()), 4),
        (Product(CardEq(), CardEq()), 9),
        (constant(11), 11),
        (constant(0), 0),
    ]:
        c = compile_counting(e, ctx)
        assert c.width == width(e)
        assert count_compiled(A, c, env) == expected == evaluate_counting(e, A, env, ctx)


def test_counting_widths_follow_composition():
    a, b = CardEq(), Sum(One(), One())
    assert width(Product(a, b)) == 4 + 2
    assert width(Sum(a, b)) == 1 + 4
    assert width(Sum(b, a)) == 1 + 4


def test_counting_rejects_bound_witness():
    A, ctx = counting_setup(Xor3Instance(3, ((0, 1, 2, 0),)))
    c = compile_counting(One(), ctx)
    with pytest.raises(PreconditionError):
        count_compiled(A, c, {"zero": 0, "one": 1, c.zvars[0]: 0})


def random_counting_expr(rng: random.Random, d: int):
    if d == 1 or rng.random() < 0.3:
        kind = rng.choice(["one", "ind", "card"])
        if kind == "one":
            return One()
        if kind == "card":
            return CardEq()
        phi = rng.choice([
            atom("Eq0", "x", "y", "zero"),
            neg(eq("x", "y")),
            exists(["t"], disj(atom("Eq0", "x", "t", "y"), atom("Eq1", "t", "x", "y"))),
            eq("x", "one"),
        ])
        return Indicator(phi)
    cls = rng.choice([Sum, Product])
    return cls(random_counting_expr(rng, d - 1), random_counting_expr(rng, d - 1))


@pytest.mark.parametrize("seed", range(10))
def test_counting_compiler_sound_on_random_expressions(seed):
    rng = random.Random(seed)
    inst = list(xor3_corpus(2, 4))[seed % 5]
    A, ctx = counting_setup(inst)
    e = random_counting_expr(rng, 4)
    assert depth(e) <= 4
    c = compile_counting(e, ctx)
    for _ in range(3):
        zero, one = rng.sample(list(A.universe), 2)
        env = {"zero": zero, "one": one, "x": rng.choice(A.universe), "y": rng.choice(A.universe)}
        assert count_compiled(A, c, env) == evaluate_counting(e, A, env, ctx)


# ---------------------------------------------------------------- catalog


SMALL = Xor3Instance(5, ((0, 1, 2, 0), (2, 3, 4, 1)))


def test_regularization_entry_matches_direct():
    entry = builtin_interpretations()["regularize"]
    for inst in itertools.islice(xor3_corpus(2, 5), 8):
        out = apply_interpretation(entry.build(), entry.to_structure(inst))
        assert isomorphic(out.structure, xor3_structure(regularize(inst)))


def test_kms_vertex_set_k1_l0():
    """The universe formula picks out exactly the KMS vertices, as decoded tuples."""
    theta = kms_transitive_interpretation(1, 0)
    out = apply_interpretation(theta, xor3_structure(SMALL))
    decoded = set()
    for cls in out.classes:
        (t,) = cls
        decoded.add((t[:3], t[3] == t[1]))
    _, _, vertices = build_vertices(SMALL, KmsParams(1, 0))
    assert decoded == {(v.variables, v.rhs[0] == 1) for v in vertices}


@pytest.mark.parametrize("l", [0, 1])
def test_kms_transitive_entry_matches_direct(l):
    entry = builtin_interpretations()["kms-transitive"]
    out = apply_interpretation(entry.build(k=1, l=l), xor3_structure(SMALL))
    assert isomorphic(out.structure, entry.direct(SMALL, k=1, l=l))


def test_constraint_table_covers_both_kinds():
    table = constraint_table(1, 1)
    assert any(s.startswith("P.") for s in table) and any(s.startswith("D.") for s in table)
    with pytest.raises(CapacityError):
        constraint_table(2, 1, max_entries=1000)


def test_ug_split_entry_matches_direct():
    entry = builtin_interpretations()["ug-split"]
    for g in itertools.islice(two_to_two_corpus(2, 2, 3), 6):
        out = apply_interpretation(entry.build(q=2), entry.to_structure(g, q=2))
        assert isomorphic(out.structure, entry.direct(g, q=2))


def test_ug_split_entry_q3():
    entry = builtin_interpretations()["ug-split"]
    g = random_game(np.random.default_rng(11), 3, 3, 2, "2to2")
    out = apply_interpretation(entry.build(q=3), entry.to_structure(g, q=3))
    assert isomorphic(out.structure, entry.direct(g, q=3))


def test_independent_set_universe_is_cloud_total():
    g = Game(2, 2, ((0, 1, TwoToTwo((0, 1), (1, 0))),))
    theta = independent_set_interpretation(2, 1, 3)
    entry = builtin_interpretations()["independent-set"]
    A = entry.to_structure(g, q=2)
    out = apply_interpretation(theta, A, budget=get_budget().replace(congruence_checks=10_000))
    total = 2 * sum(cloud_weight(2, 1, 3, s) * len(list(itertools.combinations(range(2), s))) for s in range(3))
    assert len(out.structure.universe) == total == 2 * 3**2
    assert isomorphic(out.structure, entry.direct(g, q=2, P=1, Q=3))


def test_game_entries_reject_one_to_one_input():
    entry = builtin_interpretations()["ug-split"]
    g = random_game(np.random.default_rng(1), 3, 2, 2, "1to1")
    with pytest.raises(PreconditionError):
        entry.to_structure(g, q=2)


TWO_DISJOINT = Xor3Instance(6, ((0, 1, 2, 1), (3, 4, 5, 0)))


@pytest.fixture(scope="module")
def weight_setting():
    red = reduce_instance(TWO_DISJOINT, KmsParams(1, 1))
    kf = KmsFormulas(1, 1, red.ledger.psi)
    X, Y = NodeVars.named("x", 1), NodeVars.named("y", 1)
    ctx = CountingContext(X.zero, X.one, X.flat, Y.flat, kf)
    return red, kf, X, Y, ctx


def _anchor(oracle: KmsTupleOracle, X, Y, u, v):
    vx = oracle.tg.vertices[u]
    oracle.zero, oracle.one = vx.variables[0], vx.variables[1]
    env = dict(zip(X.flat, oracle.node(u)))
    env.update(zip(Y.flat, oracle.node(v)))
    return env


def test_weight_expression_reproduces_ledger(weight_setting):
    red, kf, X, Y, ctx = weight_setting
    A = xor3_structure(TWO_DISJOINT)
    oracle = KmsTupleOracle(TWO_DISJOINT, 1, 1, None, None)
    e = kf.weight_expr(TWO_DISJOINT.m)
    for (u, v), w in list(red.ledger.int_w.items())[:6]:
        env = _anchor(oracle, X, Y, u, v)
        assert evaluate_counting(e, A, env, ctx, oracle) == w


@pytest.mark.slow
def test_weight_pieces_compiled_counts(weight_setting):
    red, kf, X, Y, ctx = weight_setting
    A = xor3_structure(TWO_DISJOINT)
    oracle = KmsTupleOracle(TWO_DISJOINT, 1, 1, None, None)
    (u, v) = next(iter(red.ledger.int_w))
    env = _anchor(oracle, X, Y, u, v)
    pieces = [PairCount(), NuCount(0, 0, "x"), NuCount(1, 2, "x"), NuCount(1, 1, "y"), NuCount(1, 2, "y")]
    pieces.append(kf.chi_expr((1, 2)))
    for e in pieces:
        c = compile_counting(e, ctx)
        assert count_compiled(A, c, env) == evaluate_counting(e, A, env, ctx, oracle)


def test_node_formula_counts_vertices():
    inst = SMALL
    vars_, node, _, _ = kms_unweighted_pieces(1, 0, 1, inst.m)
    A = xor3_structure(inst)
    _, _, vertices = build_vertices(inst, KmsParams(1, 0))
    assert count_satisfying(A, node, vars_) == len(vertices)
