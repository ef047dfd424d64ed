"""Command-line front end.

Exit codes: 0 success (for ``analyze``: the input is an NCF), 2 the input is
not an NCF, 1 any input or consistency error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import formulas, oracle, selftest
from .canalyze import (
    ConstantFunction,
    InessentialVariable,
    NoCanalyzingVariableAtDepth,
    TooFewVariables,
    canalyzing_triples,
    ncf_decompose,
    reconstruct,
)
from .core import MAX_VARS, TruthTable, anf_from_truth_table, essential_variables, hamming_weight, parse_anf, truth_table_from_anf
from .dyadic import Dyadic
from .enumeration import RNG_ALGORITHM, enumerate_ncf, sample_ncfs

EXIT_OK, EXIT_ERROR, EXIT_NOT_NCF = 0, 1, 2


class CLIError(Exception):
    pass


@dataclass(frozen=True)
class Config:
    input_format: str = "anf"
    output_format: str = "text"
    n: int | None = None
    seed: int = 0
    cap: int | None = None
    oracle: bool | None = None

    def __post_init__(self):
        if self.input_format not in ("anf", "bin", "hex"):
            raise CLIError(f"unknown input format {self.input_format!r}")
        if self.output_format not in ("json", "text", "csv"):
            raise CLIError(f"unknown output format {self.output_format!r}")
        if self.n is not None and not 0 <= self.n <= MAX_VARS:
            raise CLIError(f"--n must be in 0..{MAX_VARS}")
        if self.cap is not None and self.cap < 2:
            raise CLIError("--cap must be at least 2")


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("NCFKIT_THREADS", "1")))
    except ValueError:
        raise CLIError("NCFKIT_THREADS must be an integer")


def _progress(msg: str) -> None:
    print(msg, file=sys.stderr, flush=True)


# --- analyze --------------------------------------------------------------

def read_function(text: str, cfg: Config) -> TruthTable:
    if cfg.input_format == "anf":
        return truth_table_from_anf(parse_anf(text, cfg.n))
    if cfg.input_format == "bin":
        f = TruthTable.from_bin(text)
    else:
        f = TruthTable.from_hex(text, cfg.n)
    if cfg.n is not None and f.n != cfg.n:
        raise CLIError(f"table has {f.n} variables but --n is {cfg.n}")
    return f


def _reason_json(reason) -> dict:
    if isinstance(reason, NoCanalyzingVariableAtDepth):
        return {
            "kind": "no_canalyzing_variable",
            "depth": reason.depth,
            "residual_variables": list(reason.variables),
            "residual_table": reason.residual.to_bin(),
            "residual_anf": reason.summary(),
        }
    if isinstance(reason, InessentialVariable):
        return {"kind": "inessential_variable", "variable": reason.i}
    if isinstance(reason, ConstantFunction):
        return {"kind": "constant_function", "value": reason.value}
    if isinstance(reason, TooFewVariables):
        return {"kind": "too_few_variables", "n": reason.n}
    raise TypeError(reason)


def analyze(f: TruthTable, source: str, cfg: Config) -> dict:
    """Build the analysis report; raises CLIError when formula and oracle disagree."""
    use_oracle = cfg.oracle if cfg.oracle is not None else f.n <= oracle.ORACLE_MAX_VARS
    if use_oracle and f.n > oracle.ORACLE_MAX_VARS:
        raise CLIError(f"--oracle needs n <= {oracle.ORACLE_MAX_VARS}")
    verdict = ncf_decompose(f)
    report = {
        "input": source,
        "n": f.n,
        "table_hex": f.to_hex(),
        "anf": str(anf_from_truth_table(f)),
        "essential_variables": list(essential_variables(f)),
        "canalyzing_triples": [[t.i, t.a, t.b] for t in canalyzing_triples(f)],
        "ncf": verdict.is_ncf,
        "weight": {"table": hamming_weight(f)},
    }
    if verdict.is_ncf:
        s = verdict.structure
        report["structure"] = s.to_json()
        report["structure_text"] = s.to_text()
        report["composition"] = list(s.composition)
        report["layer_number"] = len(s.layers)
        report["most_dominant_variables"] = sorted(s.layers[0].variables)
        report["degenerate"] = s.degenerate
    else:
        report["reason"] = _reason_json(verdict.reason)

    formula_acts = None
    if verdict.is_ncf and not verdict.structure.degenerate:
        s = verdict.structure
        comp = formulas.Composition(f.n, s.composition)
        layer_acts = formulas.layer_activities(comp)
        formula_acts = [layer_acts[s.layer_of(i) - 1] for i in range(1, f.n + 1)]
        report["weight"]["formula"] = formulas.weight_from_composition(comp, complemented=bool(s.b))
        report["activities"] = {"formula": [a.to_json() for a in formula_acts]}
        s_f = formulas.average_sensitivity(comp)
        report["average_sensitivity"] = {"formula": s_f.to_json()}
        if f.n >= 3:
            lower, upper = formulas.sensitivity_bounds(f.n)
            report["bounds"] = {
                "lower": lower.to_json(),
                "upper": upper.to_json(),
                "holds": lower <= s_f < upper,
            }
    if use_oracle:
        acts = oracle.activities(f).activities
        prof = oracle.sensitivity_profile(f)
        report.setdefault("activities", {})["oracle"] = [a.to_json() for a in acts]
        report.setdefault("average_sensitivity", {})["oracle"] = prof.average.to_json()
        report["weight"]["oracle"] = oracle.weight_bruteforce(f)
        if formula_acts is not None:
            problems = []
            if report["weight"]["formula"] != report["weight"]["oracle"]:
                problems.append("weight")
            if list(acts) != formula_acts:
                problems.append("activities")
            if prof.average != formulas.average_sensitivity(formulas.Composition(f.n, verdict.structure.composition)):
                problems.append("average sensitivity")
            if problems:
                raise CLIError("formula/oracle mismatch: " + ", ".join(problems))
    return report


def _dy(obj: dict) -> str:
    return str(Dyadic.from_json(obj))


def _analyze_text(rep: dict) -> str:
    lines = [
        f"input: {rep['input']}",
        f"n: {rep['n']}",
        f"anf: {rep['anf']}",
        f"table (hex): {rep['table_hex']}",
        "essential variables: " + (", ".join(f"x{i}" for i in rep["essential_variables"]) or "none"),
        "canalyzing triples: " + (" ".join(f"<{i}:{a}:{b}>" for i, a, b in rep["canalyzing_triples"]) or "none"),
    ]
    if rep["ncf"]:
        lines.append("verdict: NCF" + (" (degenerate, n = 1)" if rep["degenerate"] else ""))
        lines.append(f"structure: {rep['structure_text']}")
        lines.append("composition: (" + ",".join(map(str, rep["composition"])) + ")")
        lines.append(f"layer number: {rep['layer_number']}")
    else:
        reason = rep["reason"]
        if reason["kind"] == "no_canalyzing_variable":
            desc = f"no canalyzing variable at depth {reason['depth']}, residual {reason['residual_anf']}"
        elif reason["kind"] == "inessential_variable":
            desc = f"x{reason['variable']} is inessential"
        elif reason["kind"] == "constant_function":
            desc = f"constant {reason['value']}"
        else:
            desc = reason["kind"]
        lines.append(f"verdict: not NCF ({desc})")
    lines.append("weight: " + ", ".join(f"{k}={v}" for k, v in rep["weight"].items()))
    for kind, vals in rep.get("activities", {}).items():
        lines.append(f"activities ({kind}): " + " ".join(_dy(v) for v in vals))
    for kind, val in rep.get("average_sensitivity", {}).items():
        lines.append(f"average sensitivity ({kind}): {_dy(val)} = {val['decimal']}")
    if "bounds" in rep:
        b = rep["bounds"]
        lines.append(f"bounds: {_dy(b['lower'])} <= s < {_dy(b['upper'])}: {'ok' if b['holds'] else 'VIOLATED'}")
    return "\n".join(lines)


def _analyze_csv(rep: dict) -> str:
    rows = [("field", "value"), ("n", rep["n"]), ("ncf", int(rep["ncf"])), ("table_hex", rep["table_hex"])]
    if rep["ncf"]:
        rows += [("structure", rep["structure_text"]), ("layer_number", rep["layer_number"]),
                 ("composition", " ".join(map(str, rep["composition"])))]
    for k, v in rep["weight"].items():
        rows.append((f"weight_{k}", v))
    for kind, val in rep.get("average_sensitivity", {}).items():
        rows.append((f"average_sensitivity_{kind}", _dy(val)))
    return "\n".join(",".join(f'"{c}"' if "," in str(c) else str(c) for c in row) for row in rows)


def cmd_analyze(args, cfg: Config) -> int:
    f = read_function(args.function, cfg)
    rep = analyze(f, args.function, cfg)
    _emit(rep, cfg, _analyze_text, _analyze_csv)
    return EXIT_OK if rep["ncf"] else EXIT_NOT_NCF


# --- count ----------------------------------------------------------------

def cmd_count(args, cfg: Config) -> int:
    n = args.n_pos
    if n < 2:
        raise CLIError("count needs n >= 2")
    total = formulas.count_ncf_total(n)
    check = formulas.count_recursive(n) == total
    rep = {"n": n, "total": str(total), "recursion_check": check}
    if args.r is not None:
        rep["r"] = args.r
        rep["count"] = str(formulas.count_ncf(n, args.r))
    if args.per_layer:
        rep["per_layer"] = {str(r): str(formulas.count_ncf(n, r)) for r in range(1, n)}

    def text(rep):
        lines = [rep["count"] if "count" in rep else rep["total"]]
        if "per_layer" in rep:
            lines.append(",".join(rep["per_layer"].values()))
        lines.append(f"recursion-check: {'pass' if rep['recursion_check'] else 'FAIL'}")
        return "\n".join(lines)

    def csv(rep):
        rows = ["layer_number,count"]
        if "per_layer" in rep:
            rows += [f"{r},{c}" for r, c in rep["per_layer"].items()]
        elif "count" in rep:
            rows.append(f"{rep['r']},{rep['count']}")
        rows.append(f"total,{rep['total']}")
        return "\n".join(rows)

    _emit(rep, cfg, text, csv)
    return EXIT_OK if check else EXIT_ERROR


# --- enumerate / sample ---------------------------------------------------

def _stream(structures, cfg: Config, tables: bool) -> None:
    out = sys.stdout
    for s in structures:
        if cfg.output_format == "json":
            obj = s.to_json()
            if tables:
                obj["table_hex"] = reconstruct(s).to_hex()
            out.write(json.dumps(obj) + "\n")
        else:
            line = s.to_text()
            if tables:
                line += "\t" + reconstruct(s).to_hex()
            out.write(line + "\n")


def cmd_enumerate(args, cfg: Config) -> int:
    _stream(enumerate_ncf(args.n_pos, args.r), cfg, args.tables)
    return EXIT_OK


def cmd_sample(args, cfg: Config) -> int:
    if args.count < 1:
        raise CLIError("--count must be positive")
    _progress(f"sampling with {RNG_ALGORITHM}, seed {cfg.seed}")
    _stream(sample_ncfs(args.n_pos, args.count, cfg.seed), cfg, args.tables)
    return EXIT_OK


# --- scan -----------------------------------------------------------------

def run_scan(n: int, pruned: bool, cap: int | None, workers: int) -> formulas.ScanResult:
    limit = cap if cap is not None else (formulas.PRUNED_CAP if pruned else formulas.SCAN_CAP)
    if not 2 <= n <= limit:
        raise CLIError(f"scan range is 2..{limit}, got n={n}")
    units = formulas.scan_units(n)
    acc = formulas.ScanPartial(n)
    if workers > 1 and len(units) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(formulas.scan_unit, n, k, pruned) for k in units]
            for k, fut in zip(units, futures):
                acc = acc.merge(fut.result())
                _progress(f"scan n={n}: first layer {k} done")
    else:
        for k in units:
            acc = acc.merge(formulas.scan_unit(n, k, pruned))
            if n >= 24:
                _progress(f"scan n={n}: first layer {k} done")
    return formulas.finish_scan(acc, "pruned" if pruned else "exhaustive")


def scan_report(res: formulas.ScanResult) -> dict:
    n = res.n
    lemma = {}
    for variant in (1, 2, 3):
        try:
            lemma[str(variant)] = formulas.lemma42_value(n, variant).to_json()
        except ValueError:
            pass
    return {
        "n": n,
        "mode": res.mode,
        "compositions_scanned": res.compositions_scanned,
        "max": res.max.to_json(),
        "argmax_count": len(res.argmax),
        "argmax": [list(c.parts) for c in res.argmax],
        "lemma42": lemma,
        "matches_lemma42": res.matches_lemma,
        "chain_in_argmax": res.chain_in_argmax,
        "consistent": res.consistent,
    }


def cmd_scan(args, cfg: Config) -> int:
    res = run_scan(args.n_pos, args.pruned, cfg.cap, _threads())
    rep = scan_report(res)

    def text(rep):
        shown = rep["argmax"][: args.show]
        lines = [
            f"n: {rep['n']} ({rep['mode']}, {rep['compositions_scanned']} compositions visited)",
            f"max average sensitivity: {_dy(rep['max'])} = {rep['max']['decimal']}",
            f"argmax ({rep['argmax_count']}): " + " ".join("(" + ",".join(map(str, c)) + ")" for c in shown)
            + (" ..." if rep["argmax_count"] > len(shown) else ""),
        ]
        for variant, val in rep["lemma42"].items():
            lines.append(f"closed form {variant}: {_dy(val)}")
        lines.append("conjecture: " + ("consistent" if rep["consistent"] else "COUNTEREXAMPLE"))
        return "\n".join(lines)

    def csv(rep):
        return "\n".join(["composition"] + [" ".join(map(str, c)) for c in rep["argmax"]])

    _emit(rep, cfg, text, csv)
    return EXIT_OK


# --- classify / selftest --------------------------------------------------

def cmd_classify(args, cfg: Config) -> int:
    census = oracle.classify_all(args.n_pos, workers=_threads())
    if cfg.output_format == "json":
        print(json.dumps({str(k): v for k, v in census.items()}))
    elif cfg.output_format == "csv":
        sys.stdout.write(oracle.census_csv(census))
    else:
        for k, v in census.items():
            print(f"{'r=' + str(k) if isinstance(k, int) else k}: {v}")
        print(f"total NCF: {sum(v for k, v in census.items() if isinstance(k, int))}")
    return EXIT_OK


def cmd_selftest(args, cfg: Config) -> int:
    def show(o: selftest.Outcome):
        print(f"{'PASS' if o.ok else 'FAIL'}  {o.name:<34} {o.seconds:7.2f}s  {o.detail}", flush=True)

    outcomes = selftest.run(args.level, show)
    failed = [o for o in outcomes if not o.ok]
    print(f"{len(outcomes) - len(failed)}/{len(outcomes)} checks passed")
    return EXIT_ERROR if failed else EXIT_OK


# --- plumbing -------------------------------------------------------------

def _emit(rep: dict, cfg: Config, text, csv) -> None:
    if cfg.output_format == "json":
        print(json.dumps(rep, indent=2))
    elif cfg.output_format == "csv":
        print(csv(rep))
    else:
        print(text(rep))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ncfkit", description="Nested canalyzing function toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def output_flags(p):
        g = p.add_mutually_exclusive_group()
        g.add_argument("--json", dest="output", action="store_const", const="json")
        g.add_argument("--csv", dest="output", action="store_const", const="csv")
        p.set_defaults(output="text")

    p = sub.add_parser("analyze", help="decompose one function and report its parameters")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--anf", dest="anf", metavar="POLY")
    src.add_argument("--bin", dest="bin", metavar="BITS")
    src.add_argument("--hex", dest="hex", metavar="HEX")
    p.add_argument("--n", type=int)
    o = p.add_mutually_exclusive_group()
    o.add_argument("--oracle", dest="oracle", action="store_true", default=None)
    o.add_argument("--no-oracle", dest="oracle", action="store_false")
    output_flags(p)
    p.set_defaults(handler=cmd_analyze)

    p = sub.add_parser("count", help="number of NCFs on n variables")
    p.add_argument("n_pos", metavar="N", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--per-layer", action="store_true")
    output_flags(p)
    p.set_defaults(handler=cmd_count)

    p = sub.add_parser("enumerate", help="stream every NCF layer structure")
    p.add_argument("n_pos", metavar="N", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--tables", action="store_true")
    output_flags(p)
    p.set_defaults(handler=cmd_enumerate)

    p = sub.add_parser("sample", help="uniformly random NCFs")
    p.add_argument("n_pos", metavar="N", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--tables", action="store_true")
    output_flags(p)
    p.set_defaults(handler=cmd_sample)

    p = sub.add_parser("scan-conjecture", help="maximize the average sensitivity over compositions")
    p.add_argument("n_pos", metavar="N", type=int)
    p.add_argument("--cap", type=int)
    p.add_argument("--pruned", action="store_true")
    p.add_argument("--show", type=int, default=20, help="argmax entries printed in text mode")
    output_flags(p)
    p.set_defaults(handler=cmd_scan)

    p = sub.add_parser("classify", help="census of all functions on n <= 4 variables")
    p.add_argument("n_pos", metavar="N", type=int)
    output_flags(p)
    p.set_defaults(handler=cmd_classify)

    p = sub.add_parser("selftest", help="run built-in consistency checks")
    p.add_argument("--level", choices=("quick", "full"), default="quick")
    p.set_defaults(handler=cmd_selftest)
    return parser


def make_config(args) -> Config:
    fmt = "anf"
    for name in ("anf", "bin", "hex"):
        if getattr(args, name, None) is not None:
            fmt = name
            args.function = getattr(args, name)
    return Config(
        input_format=fmt,
        output_format=getattr(args, "output", "text"),
        n=getattr(args, "n", None),
        seed=getattr(args, "seed", 0),
        cap=getattr(args, "cap", None),
        oracle=getattr(args, "oracle", None),
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = make_config(args)
        return args.handler(args, cfg)
    except (CLIError, ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
