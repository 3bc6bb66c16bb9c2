"""Command line: generate instances, run the reductions, evaluate and verify the results.

Exit codes: 0 success, 1 a verification check failed, 2 an exact oracle
would exceed its budget, 3 bad usage or input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

from gapforge import __version__
from gapforge.budget import Budget, get_budget
from gapforge.derived import (
    DiGraph,
    Graph,
    WeightedGraph,
    build_T,
    cloud_expand,
    find_colouring,
    graph_from_json,
    is_independent,
    is_value_bruteforce,
    labelling_measure,
    labelling_set,
    to_3colouring,
    to_colouring_step1,
    to_independent_set,
    to_unique_games,
    weighted_is_value,
)
from gapforge.errors import (
    CapacityError,
    ConsistencyError,
    GapforgeError,
    PreconditionError,
    VocabularyError,
)
from gapforge.fo.adapters import digraph_structure, game_structure, graph_structure, xor3_structure
from gapforge.fo.catalog import builtin_interpretations
from gapforge.fo.fidelity import check_entry, default_corpus
from gapforge.fo.interpret import apply_interpretation
from gapforge.fo.sexpr import parse_interpretation
from gapforge.fo.structures import Structure
from gapforge.games import (
    Game,
    WeightedGame,
    check_transitive,
    colouring_value,
    game_from_json,
    is_2bi2,
    is_d_to_d,
    value,
    weighted_value,
)
from gapforge.jsonio import atomic_write_text, dumps
from gapforge.kms import APPROX, EXACT, KmsParams, clique_decomposition, planted_labelling, reduce_instance
from gapforge.seeding import substream
from gapforge.wl import largest_equivalent_k, wl_report
from gapforge.xor3 import (
    Planted,
    RandomRhs,
    Xor3Instance,
    check_regular,
    check_unique_neighbour_expansion,
    g_transform,
    g_witness,
    generate_expander_instance,
    random_regular_instance,
    regularize,
    value_bruteforce,
    verify_matching_decomposition,
)

EXIT_OK, EXIT_VERIFY, EXIT_CAPACITY, EXIT_USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


# ---------------------------------------------------------------- reports


@dataclass
class Check:
    name: str
    ok: bool | None            # None: skipped (oracle over budget)
    detail: str = ""
    required: bool = True      # informational checks never change the exit code


@dataclass
class Report:
    command: str
    seed: int
    checks: list[Check] = field(default_factory=list)
    values: dict[str, Any] = field(default_factory=dict)
    wrote: list[str] = field(default_factory=list)

    def check(self, name: str, ok: bool | None, detail: str = "", required: bool = True) -> bool | None:
        self.checks.append(Check(name, ok, detail, required))
        return ok

    @property
    def failed(self) -> bool:
        return any(c.required and c.ok is False for c in self.checks)

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "seed": self.seed,
            "ok": not self.failed,
            "checks": [
                {"check": c.name, "ok": c.ok, "required": c.required, "detail": c.detail} for c in self.checks
            ],
            "values": self.values,
            "wrote": self.wrote,
        }

    def render(self) -> str:
        lines = [f"{self.command} (seed {self.seed})"]
        for c in self.checks:
            mark = "SKIP" if c.ok is None else "PASS" if c.ok else "FAIL" if c.required else "no"
            lines.append(f"  {mark:4}  {c.name}" + (f": {c.detail}" if c.detail else ""))
        for k, v in self.values.items():
            text = v if isinstance(v, str) else json.dumps(v)
            lines.append(f"  {k} = {text}")
        lines += [f"  wrote {p}" for p in self.wrote]
        return "\n".join(lines)


@dataclass(frozen=True)
class PipelineConfig:
    """Parameters of an end-to-end run: instance, KMS reduction, then the derived problems."""

    seed: int = 0
    n: int = 9                 # variables
    m: int = 3                 # equations
    k: int = 1
    l: int = 1
    scheme: str = EXACT
    p: Fraction = Fraction(29, 100)
    planted: bool = True

    def __post_init__(self) -> None:
        if not 0 <= self.seed < 2**64:
            raise PreconditionError("seed must fit in 64 bits")
        if self.n < 3 or self.m < 1 or self.k < 1 or self.l < 0:
            raise PreconditionError("need n >= 3, m >= 1, k >= 1, l >= 0")
        if self.scheme not in (EXACT, APPROX):
            raise PreconditionError(f"unknown scheme {self.scheme!r}")
        if not 0 < self.p < 1:
            raise PreconditionError("p must lie strictly between 0 and 1")

    @property
    def q(self) -> int:
        return 1 << self.l


# ---------------------------------------------------------------- file helpers


def _read(path: str) -> str:
    return sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")


def load_artifact(path: str) -> Any:
    """Read any file this tool writes, recognised by content."""
    text = _read(path)
    first = next((ln.split("#", 1)[0].split() for ln in text.splitlines() if ln.split("#", 1)[0].strip()), [])
    if first[:1] == ["vars"]:
        return Xor3Instance.from_text(text)
    data = json.loads(text)
    if not isinstance(data, dict):
        raise ValueError(f"{path}: unrecognised artifact")
    if data.get("kind") == "weighted-graph":
        return WeightedGraph.from_json(data)
    if "directed" in data:
        return graph_from_json(data)
    if "arities" in data:
        return Structure.from_json(data)
    if "edges" in data and "q" in data:
        return game_from_json(data)
    raise ValueError(f"{path}: unrecognised artifact")


def _load(path: str, *kinds: type) -> Any:
    obj = load_artifact(path)
    if kinds and not isinstance(obj, kinds):
        names = " or ".join(k.__name__ for k in kinds)
        raise PreconditionError(f"{path}: expected {names}, got {type(obj).__name__}")
    return obj


def as_structure(obj: Any) -> Structure:
    if isinstance(obj, Structure):
        return obj
    if isinstance(obj, Xor3Instance):
        return xor3_structure(obj)
    if isinstance(obj, WeightedGame):
        return game_structure(obj.game)
    if isinstance(obj, Game):
        return game_structure(obj)
    if isinstance(obj, WeightedGraph):
        obj = obj.graph
    if isinstance(obj, Graph):
        return graph_structure(obj.n, obj.edges)
    if isinstance(obj, DiGraph):
        return digraph_structure(obj.n, obj.arcs)
    raise PreconditionError(f"no structure encoding for {type(obj).__name__}")


def _write(rep: Report, path: str, text: str) -> None:
    atomic_write_text(path, text)
    rep.wrote.append(path)


def _frac(x: Fraction) -> str:
    return str(Fraction(x))


def _oracle(rep: Report, name: str, fn: Callable[[], Any]) -> Any:
    """Run an exponential oracle; over budget it is recorded as skipped."""
    try:
        return fn()
    except CapacityError as e:
        rep.check(name, None, str(e))
        return None


# ---------------------------------------------------------------- shared checks


def _game_checks(rep: Report, game: Game, transitive: Game | None) -> None:
    bad = [
        i for i, rel in enumerate(game.relations())
        if is_d_to_d(rel, game.q, 2) and not is_2bi2(rel, game.q)
    ]
    kinds = sum(is_d_to_d(rel, game.q, 2) for rel in game.relations())
    rep.check("two-to-two-blocks", not bad, f"{kinds} 2-to-2 edges" + (f", edge {bad[0]} is not a union of K22 blocks" if bad else ""))
    t = transitive if transitive is not None else game
    try:
        ok = check_transitive(t)
        detail = f"{len(t.edges)} edges on {t.num_vertices} vertices"
    except PreconditionError as e:
        ok, detail = False, str(e)
    rep.check("transitivity", ok, detail)
    try:
        dec = clique_decomposition(t)
        rep.check("clique-uniformity", True, f"{len(dec.cliques)} cliques")
    except (ConsistencyError, PreconditionError) as e:
        rep.check("clique-uniformity", False, str(e))


def _run_pipeline(cfg: PipelineConfig, budget: Budget, rep: Report, out_dir: Path | None) -> None:
    inst, assignment = random_regular_instance(cfg.n, cfg.m, substream(cfg.seed, "instance"), cfg.planted)
    red = reduce_instance(inst, KmsParams(cfg.k, cfg.l), budget)
    wg = red.weighted(cfg.scheme)
    rep.values.update(
        instance={"variables": inst.num_vars, "equations": inst.m},
        kms={"vertices": wg.game.num_vertices, "edges": len(wg.game.edges), "scheme": cfg.scheme},
        gamma_sq=_frac(red.ledger.gamma_sq),
    )
    _game_checks(rep, wg.game, red.transitive.game)

    val = _oracle(rep, "weighted-value-bruteforce", lambda: weighted_value(wg, budget))
    if val is not None:
        rep.values["weighted_value"] = _frac(val)
    if cfg.planted:
        lab = planted_labelling(inst, assignment, red.transitive.vertices, cfg.k)
        planted_val = colouring_value(wg, lab)
        rep.check("perfect-completeness-planted", planted_val == 1, f"planted labelling scores {planted_val}")
        if val is not None:
            rep.check("perfect-completeness-bruteforce", val == 1, f"weighted value {val}")
    if val is not None and cfg.scheme == EXACT:
        approx = _oracle(rep, "weight-approximation", lambda: weighted_value(red.approx_game, budget))
        if approx is not None:
            bound = red.ledger.gamma_sq * val
            rep.check("weight-approximation", approx <= bound, f"{approx} <= gamma^2 * {val}")

    ug = to_unique_games(wg)
    if val is not None:
        ug_val = _oracle(rep, "unique-games-halving", lambda: weighted_value(ug, budget))
        if ug_val is not None:
            rep.check("unique-games-halving", ug_val == val / 2, f"{ug_val} = {val}/2")

    isg = to_independent_set(wg, cfg.p, budget)
    rep.values["independent_set"] = {"vertices": isg.graph.n, "edges": len(isg.graph.edges)}
    if cfg.planted:
        chosen = labelling_set(isg, lab)
        rep.check("labelling-set-independent", is_independent(isg.graph, chosen), f"{len(chosen)} vertices")
        measure = labelling_measure(isg, lab)
        rep.check("labelling-measure", all(m == cfg.p for m in measure), f"p = {cfg.p} per game vertex")

    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
        _write(rep, str(out_dir / "instance.xor"), inst.to_text())
        _write(rep, str(out_dir / "game.json"), dumps(_kms_game_json(red, cfg.scheme)))
        _write(rep, str(out_dir / "ledger.json"), dumps(red.ledger.to_json()))
        _write(rep, str(out_dir / "unique-games.json"), dumps(ug.to_json()))
        _write(rep, str(out_dir / "independent-set.json"), dumps(isg.to_json()))


def _kms_game_json(red, scheme: str) -> dict:
    out = red.weighted(scheme).to_json()
    out["scheme"] = scheme
    out["transitive"] = red.transitive.game.to_json()
    return out


# ---------------------------------------------------------------- commands


def cmd_gen_xor(args, budget: Budget) -> Report:
    rep = Report("gen-xor", args.seed)
    rhs = Planted() if args.planted else RandomRhs()
    inst, g = generate_expander_instance(args.n, args.r, substream(args.seed, "gen-xor"), rhs)
    left, right = g.left_degrees(), g.right_degrees()
    rep.check(
        "degree-profile",
        set(left) == {3} and set(right) == {3 * args.r},
        f"left degrees {sorted(set(left))}, right degrees {sorted(set(right))}",
    )
    rep.check("matching-decomposition", verify_matching_decomposition(g), f"{len(g.matchings)} rounds")
    beta = Fraction(args.beta)
    expands = check_unique_neighbour_expansion(g, args.s_max, beta, budget)
    rep.check("unique-neighbour-expansion", expands, f"s_max={args.s_max}, beta={beta}", required=False)
    rep.values.update(variables=inst.num_vars, equations=inst.m, planted=bool(args.planted))
    if args.out:
        _write(rep, args.out, inst.to_text())
    else:
        rep.values["instance"] = inst.to_text()
    return rep


def cmd_xfm(args, budget: Budget) -> Report:
    rep = Report(f"xfm {args.transform}", args.seed)
    inst = _load(args.input, Xor3Instance)
    if args.transform == "g":
        out = g_transform(inst)
        rng = substream(args.seed, "xfm-g")
        trials = [int(rng.integers(0, 1 << 62)) & ((1 << inst.num_vars) - 1) for _ in range(8)]
        ok = all(out.satisfied_count(g_witness(s, inst.num_vars)) == 8 * inst.satisfied_count(s) for s in trials)
        rep.check("eightfold-witness", ok, f"{len(trials)} random assignments")
    else:
        out = regularize(inst)
        d = max(inst.occurrences().values(), default=0)
        rep.check("regular-output", check_regular(out, max(d, 2)), f"occurrences <= {max(d, 2)}")
    rep.values.update(variables=out.num_vars, equations=out.m)
    _write(rep, args.output, out.to_text())
    return rep


def cmd_reduce(args, budget: Budget) -> Report:
    rep = Report(f"reduce {args.target}", args.seed)
    if args.target == "kms":
        inst = _load(args.input, Xor3Instance)
        red = reduce_instance(inst, KmsParams(args.k, args.l), budget)
        wg = red.weighted(args.scheme)
        _game_checks(rep, wg.game, red.transitive.game)
        rep.values.update(
            vertices=wg.game.num_vertices,
            edges=len(wg.game.edges),
            transitive_edges=len(red.transitive.game.edges),
            gamma_sq=_frac(red.ledger.gamma_sq),
        )
        _write(rep, args.output, dumps(_kms_game_json(red, args.scheme)))
        if args.ledger:
            _write(rep, args.ledger, dumps(red.ledger.to_json()))
        return rep

    g = _load(args.input, Game, WeightedGame)
    game = g.game if isinstance(g, WeightedGame) else g
    if args.target == "ug":
        out = to_unique_games(g)
        og = out.game if isinstance(out, WeightedGame) else out
        ok = all(is_d_to_d(rel, og.q, 1) for rel in og.relations())
        rep.check("permutation-constraints", ok, f"{len(og.edges)} edges from {len(game.edges)}")
        _write(rep, args.output, dumps(out.to_json()))
    elif args.target == "is":
        wg = to_independent_set(g, args.p, budget)
        measure = labelling_measure(wg, [0] * game.num_vertices)
        rep.check("set-weights", all(m == wg.p for m in measure), f"each game vertex carries weight {wg.p}")
        rep.values.update(vertices=wg.graph.n, edges=len(wg.graph.edges))
        if args.cloud:
            graph = cloud_expand(wg, budget)
            rep.values["cloud_vertices"] = graph.n
            _write(rep, args.output, dumps(graph.to_json()))
        else:
            _write(rep, args.output, dumps(wg.to_json()))
    else:
        T = build_T(args.t_cache)
        cert = T.certificate()
        rep.check(
            "t-matrix",
            T.max_sum_error <= 1e-9 and T.zero_pattern_ok and T.lambda2 < 1,
            f"lambda2 = {T.lambda2:.6f}",
        )
        graph = to_colouring_step1(game, T, budget) if args.step1 else to_3colouring(game, T, budget)
        rep.values.update(vertices=graph.n, edges=len(graph.edges), t_certificate=cert)
        _write(rep, args.output, dumps(graph.to_json()))
    return rep


def cmd_value(args, budget: Budget) -> Report:
    rep = Report(f"value {args.problem}", args.seed)
    if args.problem == "xor":
        rep.values["value"] = _frac(value_bruteforce(_load(args.input, Xor3Instance), budget))
    elif args.problem == "game":
        g = _load(args.input, Game, WeightedGame)
        v = weighted_value(g, budget) if isinstance(g, WeightedGame) else value(g, budget)
        rep.values["value"] = _frac(v)
    elif args.problem == "is":
        g = _load(args.input, WeightedGraph, Graph)
        v = weighted_is_value(g, budget) if isinstance(g, WeightedGraph) else is_value_bruteforce(g, budget)
        rep.values["value"] = _frac(v)
    else:
        g = _load(args.input, Graph, WeightedGraph)
        graph = g.graph if isinstance(g, WeightedGraph) else g
        col = find_colouring(graph, args.t, budget)
        rep.values.update(t=args.t, colourable=col is not None)
        if col is not None:
            rep.values["colouring"] = list(col)
    return rep


def cmd_wl_compare(args, budget: Budget) -> Report:
    rep = Report("wl-compare", args.seed)
    A, B = as_structure(load_artifact(args.a)), as_structure(load_artifact(args.b))
    res = wl_report(A, B, args.k, budget)
    rep.values.update(k=args.k, wl_dim=res["wl_dim"], equivalent=res["equivalent"], rounds=res["rounds"])
    if args.k_max:
        best, per_k = largest_equivalent_k(A, B, args.k_max, budget)
        rep.values["largest_equivalent_k"] = best
        rep.values["per_k"] = {str(k): v for k, v in per_k.items()}
    return rep


def _params(pairs: list[str]) -> dict[str, int]:
    out = {}
    for p in pairs:
        name, sep, val = p.partition("=")
        if not sep:
            raise UsageError(f"--param expects name=value, got {p!r}")
        try:
            out[name.strip()] = int(val)
        except ValueError:
            raise UsageError(f"--param {name}: {val!r} is not an integer") from None
    return out


def cmd_fo_apply(args, budget: Budget) -> Report:
    rep = Report("fo-apply", args.seed)
    params = _params(args.param)
    catalog = builtin_interpretations()
    obj = load_artifact(args.input)
    if args.theta in catalog:
        entry = catalog[args.theta]
        theta = entry.build(**params)
        A = obj if isinstance(obj, Structure) else entry.to_structure(obj, **params)
    else:
        theta = parse_interpretation(_read(args.theta))
        A = as_structure(obj)
    out = apply_interpretation(theta, A, budget, seed=args.seed)
    rep.values.update(input=A.summary(), output=out.structure.summary(), congruence=out.congruence)
    _write(rep, args.output, dumps(out.structure.to_json()))
    return rep


def cmd_fo_check(args, budget: Budget) -> Report:
    rep = Report("fo-check", args.seed)
    params = _params(args.param)
    catalog = builtin_interpretations()
    if args.entry not in catalog:
        raise UsageError(f"unknown catalog entry {args.entry!r}; known: {', '.join(catalog)}")
    entry = catalog[args.entry]
    corpus = default_corpus(entry, args.max_items, q=params.get("q", 2))
    res = check_entry(entry, corpus, params, budget, stop_after=args.stop_after)
    rep.check(
        "isomorphic-to-direct",
        res.ok,
        f"{res.checked} inputs, {len(res.mismatches)} mismatches, {res.sampled} with sampled congruence",
    )
    rep.values["fidelity"] = {k: v for k, v in res.to_json().items() if k != "seconds"}
    return rep


def _pipeline_config(args) -> PipelineConfig:
    return PipelineConfig(args.seed, args.n, args.m, args.k, args.l, args.scheme, args.p, args.planted)


def cmd_report(args, budget: Budget) -> Report:
    rep = Report("report", args.seed)
    _run_pipeline(_pipeline_config(args), budget, rep, Path(args.out_dir) if args.out_dir else None)
    return rep


def cmd_verify(args, budget: Budget) -> Report:
    rep = Report(f"verify {args.what}", args.seed)
    if args.what == "game":
        text = _read(args.input)
        data = json.loads(text)
        g = game_from_json(data)
        game = g.game if isinstance(g, WeightedGame) else g
        transitive = game_from_json(data["transitive"]) if "transitive" in data else None
        _game_checks(rep, game, transitive)
        if isinstance(g, WeightedGame):
            rep.values["total_weight"] = _frac(g.tot)
    else:
        _run_pipeline(_pipeline_config(args), budget, rep, None)
    return rep


# ---------------------------------------------------------------- parser


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _seed(text: str) -> int:
    s = int(text)
    if not 0 <= s < 2**64:
        raise argparse.ArgumentTypeError("seed must be in [0, 2^64)")
    return s


def _pipeline_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, default=9, help="variables of the generated instance")
    p.add_argument("--m", type=int, default=3, help="equations of the generated instance")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--l", type=int, default=1)
    p.add_argument("--scheme", choices=[EXACT, APPROX], default=EXACT)
    p.add_argument("--p", type=_fraction, default=Fraction(29, 100))
    p.add_argument("--planted", action="store_true", help="plant a satisfying assignment")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable report")
    common.add_argument("--seed", type=_seed, default=argparse.SUPPRESS, help="run seed (default 0)")

    parser = _Parser(prog="gapforge", description="Gap reductions with exact desk-scale oracles.")
    parser.add_argument("--version", action="version", version=f"gapforge {__version__}")
    parser.add_argument("--json", action="store_true", help="machine-readable report")
    parser.add_argument("--seed", type=_seed, default=0, help="run seed (default 0)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen-xor", parents=[common], help="random expander 3XOR instance")
    p.add_argument("--n", type=int, required=True, help="variables (right nodes)")
    p.add_argument("--r", type=int, required=True, help="equations per variable / 3")
    p.add_argument("--planted", action="store_true")
    p.add_argument("--out", help="instance file (default: include it in the report)")
    p.add_argument("--s-max", type=int, default=3)
    p.add_argument("--beta", type=_fraction, default=Fraction(1))
    p.set_defaults(run=cmd_gen_xor)

    p = sub.add_parser("xfm", parents=[common], help="3XOR to 3XOR transforms")
    p.add_argument("transform", choices=["g", "regularize"])
    p.add_argument("input")
    p.add_argument("output")
    p.set_defaults(run=cmd_xfm)

    p = sub.add_parser("reduce", parents=[common], help="run a reduction")
    rs = p.add_subparsers(dest="target", required=True, parser_class=_Parser)
    q = rs.add_parser("kms", parents=[common], help="regular 3XOR to weighted 2-to-2 game")
    q.add_argument("input")
    q.add_argument("output")
    q.add_argument("--k", type=int, default=1)
    q.add_argument("--l", type=int, default=1)
    q.add_argument("--scheme", choices=[EXACT, APPROX], default=EXACT)
    q.add_argument("--ledger", help="write the weight ledger here")
    q = rs.add_parser("ug", parents=[common], help="2-to-2 game to unique game")
    q.add_argument("input")
    q.add_argument("output")
    q = rs.add_parser("is", parents=[common], help="2-to-2 game to weighted independent set")
    q.add_argument("input")
    q.add_argument("output")
    q.add_argument("--p", type=_fraction, default=Fraction(29, 100))
    q.add_argument("--cloud", action="store_true", help="write the cloud-expanded unweighted graph")
    q = rs.add_parser("colour", parents=[common], help="2<->2 game to graph colouring")
    q.add_argument("input")
    q.add_argument("output")
    q.add_argument("--step1", action="store_true", help="stop at the 4-colouring graph")
    q.add_argument("--t-cache", help="JSON cache for the T matrix")
    p.set_defaults(run=cmd_reduce)

    p = sub.add_parser("value", parents=[common], help="exact value by brute force")
    p.add_argument("problem", choices=["xor", "game", "is", "chroma"])
    p.add_argument("input")
    p.add_argument("--t", type=int, default=3, help="colours for chroma")
    p.set_defaults(run=cmd_value)

    p = sub.add_parser("wl-compare", parents=[common], help="C^k equivalence by WL refinement")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--k-max", type=int, default=0, help="also find the largest equivalent k up to this")
    p.set_defaults(run=cmd_wl_compare)

    p = sub.add_parser("fo-apply", parents=[common], help="apply an FO interpretation")
    p.add_argument("theta", help="catalog entry name or s-expression file")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--param", action="append", default=[], help="catalog parameter name=value")
    p.set_defaults(run=cmd_fo_apply)

    p = sub.add_parser("fo-check", parents=[common], help="catalog interpretation vs direct reduction")
    p.add_argument("entry")
    p.add_argument("--param", action="append", default=[])
    p.add_argument("--max-items", type=int, default=3, help="equations or edges per corpus input")
    p.add_argument("--stop-after", type=int, default=None, help="stop after this many mismatches")
    p.set_defaults(run=cmd_fo_check)

    p = sub.add_parser("report", parents=[common], help="end-to-end pipeline run with artifacts")
    _pipeline_options(p)
    p.add_argument("--out-dir", help="write every artifact here")
    p.set_defaults(run=cmd_report)

    p = sub.add_parser("verify", parents=[common], help="check module invariants")
    vs = p.add_subparsers(dest="what", required=True, parser_class=_Parser)
    q = vs.add_parser("game", parents=[common], help="2<->2 blocks, transitivity and cliques of a game file")
    q.add_argument("input")
    q = vs.add_parser("pipeline", parents=[common], help="generate, reduce and check completeness")
    _pipeline_options(q)
    p.set_defaults(run=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(f"gapforge: {e}", file=sys.stderr)
        return EXIT_USAGE
    try:
        rep = args.run(args, get_budget())
    except CapacityError as e:
        print(f"gapforge: over budget: {e}", file=sys.stderr)
        return EXIT_CAPACITY
    except (UsageError, PreconditionError, VocabularyError, ValueError, OSError, KeyError) as e:
        print(f"gapforge: {e}", file=sys.stderr)
        return EXIT_USAGE
    except GapforgeError as e:
        print(f"gapforge: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_VERIFY
    print(dumps(rep.to_json()) if args.json else rep.render(), end="" if args.json else "\n")
    return EXIT_VERIFY if rep.failed else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
