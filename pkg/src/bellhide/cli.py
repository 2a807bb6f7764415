"""Command-line entry point: ``bellhide <command> [flags]``.

Every output starts with a header echoing the tool version, the fixed
numerical conventions and the full run configuration, and contains nothing
that depends on the clock or the environment, so identical flags give
byte-identical output.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__, densematrix, locc, multibit, povmopt, prep, rational
from .bellcode import ENUMERATION_CAP, BellString, CapExceeded
from .states import BellDiagonalState, hiding_state

OUTPUT_DIR_ENV = "BELLHIDE_OUTPUT_DIR"

EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_RESOURCE = 4
EXIT_INTERNAL = 5

ASSUMPTIONS = {
    "log_base": multibit.LOG_BASE,
    "block_size_rounding": "ceil",
    "ppt_tol": densematrix.PPT_TOL,
    "lp_feasibility_tol": povmopt.FEAS_TOL,
    "info_tol": locc.INFO_TOL,
    "enumeration_cap": ENUMERATION_CAP,
    "dense_cap": densematrix.DENSE_CAP,
    "qubit_layout": "interleaved A1,B1,A2,B2,...",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fmt_float(x: float) -> str:
    return format(float(x), ".17g")


def _fmt_num(x) -> str:
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float):
        return _fmt_float(x)
    return str(x)


def _header(command: str, config: dict) -> dict:
    return {"tool": "bellhide", "version": __version__, "command": command, "assumptions": ASSUMPTIONS, "config": config}


def _dump_json(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _dump_csv(header: dict, columns: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    buf.write("# " + json.dumps(header, separators=(",", ":")) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt_num(v) for v in row])
    return buf.getvalue()


def _config(args) -> dict:
    cfg = {}
    for k, v in sorted(vars(args).items()):
        if k in ("func",):
            continue
        cfg[k] = str(v) if isinstance(v, Fraction) else v
    return cfg


def _prior(text: str) -> Fraction:
    p = rational.parse(text)
    if not 0 < p < 1:
        raise argparse.ArgumentTypeError(f"prior must lie strictly between 0 and 1, got {text}")
    return p


def _bit(text: str) -> int:
    if text not in ("0", "1"):
        raise argparse.ArgumentTypeError(f"bit must be 0 or 1, got {text}")
    return int(text)


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _seed(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text}") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


# --- commands --------------------------------------------------------------


def cmd_states(args) -> str:
    state = hiding_state(args.n, args.bit)
    header = _header("states", _config(args))
    if args.format == "csv":
        rows = [[str(s), w.numerator, w.denominator] for s, w in state.weights.items()]
        return _dump_csv(header, ["string", "num", "den"], rows)
    return _dump_json({"header": header, "state": state.to_json(bit=args.bit)})


def parse_state_document(text: str) -> BellDiagonalState:
    doc = json.loads(text)
    return BellDiagonalState.from_json(doc.get("state", doc))


def cmd_certify(args) -> str:
    rows = []
    docs = []
    for n in range(1, args.n_max + 1):
        if args.mode == "full":
            cert = povmopt.optimize(n)
            cross = None
        else:
            cert = povmopt.optimize_reduced(n)
            cross = povmopt.optimize(n) if args.mode == "both" and n <= povmopt.FULL_LP_CAP else None
        if not cert.certified:
            raise ArithmeticError(f"LP optimum at n={n} violates the security bound")
        doc = cert.to_json()
        row = [n, cert.delta, cert.lp_optimum, cert.lp_minimum, cert.gap, cert.tight]
        if args.mode == "both":
            full_hi = cross.lp_optimum if cross else None
            full_lo = cross.lp_minimum if cross else None
            doc["full_cross_check"] = None if cross is None else {
                "lp_optimum_minus_1": full_hi,
                "lp_minimum_minus_1": full_lo,
                "agrees": abs(full_hi - float(cert.lp_optimum)) <= povmopt.FEAS_TOL
                and abs(full_lo - float(cert.lp_minimum)) <= povmopt.FEAS_TOL,
            }
            row += ["" if cross is None else full_hi, "" if cross is None else full_lo]
        docs.append(doc)
        rows.append(row)
    header = _header("certify", _config(args))
    if args.format == "csv":
        cols = ["n", "delta", "lp_optimum_minus_1", "lp_minimum_minus_1", "gap", "tight"]
        if args.mode == "both":
            cols += ["full_optimum_minus_1", "full_minimum_minus_1"]
        return _dump_csv(header, cols, rows)
    return _dump_json({"header": header, "certificates": docs})


def cmd_attack(args) -> str:
    names = [s.name for s in locc.built_in_strategies()] if args.strategy == "all" else [args.strategy]
    reports = [locc.mutual_information(locc.get_strategy(name), args.n, args.prior) for name in names]
    header = _header("attack", _config(args))
    if args.format == "csv":
        cols = ["strategy", "n", "prior", "mutual_info_bits", "bound_bits", "satisfied", "guess_mutual_info_bits", "guess_advantage"]
        rows = [[r.strategy, r.n, r.prior, r.mutual_info_bits, r.bound_bits, r.satisfied, r.guess_info_bits, r.advantage] for r in reports]
        return _dump_csv(header, cols, rows)
    return _dump_json({"header": header, "reports": [r.to_json() for r in reports]})


def _prep_path(args) -> str:
    if args.path is None:
        return prep.RECURSIVE if args.bit == 1 else prep.CLASSICAL
    if args.path == prep.RECURSIVE and args.bit == 0:
        raise UsageError("--path recursive prepares the odd state; use --bit 1")
    if args.path == prep.CLIFFORD and args.bit == 1:
        raise UsageError("--path clifford prepares the even state; use --bit 0")
    return args.path


def cmd_prep(args) -> str:
    path = _prep_path(args)
    if path == prep.CLIFFORD and args.n > 3:
        raise CapExceeded(f"clifford path verification limited to n <= 3, got n={args.n}")
    samples = []
    for i in range(args.samples):
        rng = prep.sample_rng(args.seed, i)
        if path == prep.RECURSIVE:
            s = prep.sample_recursive(args.n, 1, rng)
        elif path == prep.CLIFFORD:
            s = prep.sample_clifford(args.n, rng)
        else:
            s = prep.PrepSample(args.bit, prep.draw_parity_string(args.n, args.bit, rng), 0, path=prep.CLASSICAL)
        samples.append(s)
    records = [s.to_json(args.seed, i) for i, s in enumerate(samples)]
    summary = {"samples": len(samples), "path": path, "total_ebits": sum(s.ebits_consumed for s in samples)}
    summary["ebits_per_sample"] = sorted({s.ebits_consumed for s in samples})
    if path == prep.CLIFFORD:
        avg = sum(prep.pair_operator(s.stabilizer_pair[0]) for s in samples) / len(samples)
        summary["trace_distance_to_target"] = densematrix.trace_distance(avg, densematrix.realize(hiding_state(args.n, 0)))
    elif args.n <= ENUMERATION_CAP:
        target = hiding_state(args.n, args.bit)
        counts: dict[BellString, int] = {}
        for s in samples:
            counts[s.string] = counts.get(s.string, 0) + 1
        keys = set(counts) | set(target.weights)
        tv = sum(abs(Fraction(counts.get(k, 0), len(samples)) - target.weight(k)) for k in keys) / 2
        summary["total_variation_to_target"] = float(tv)
        summary["outside_support"] = sum(c for k, c in counts.items() if target.weight(k) == 0)
    header = _header("prep", _config(args))
    if args.format == "csv":
        cols = ["index", "bit", "path", "string", "ebits", "seed"]
        rows = [[r["index"], r["bit"], r["path"], r.get("string", " ".join(r.get("stabilizers", {}).get("alice", []))), r["ebits"], r["seed"]] for r in records]
        return _dump_csv(header | {"summary": summary}, cols, rows)
    lines = [json.dumps({"header": header})]
    lines += [json.dumps(r) for r in records]
    lines.append(json.dumps({"summary": summary}))
    return "\n".join(lines) + "\n"


def cmd_verify_clifford(args) -> str:
    if args.mode == "sampled" and args.seed is None:
        raise UsageError("--seed is required in sampled mode")
    if args.mode == "exact" and args.n > 2:
        raise CapExceeded(f"exact mode limited to n <= 2, got n={args.n}")
    if args.mode == "sampled" and args.n > 3:
        raise CapExceeded(f"sampled mode limited to n <= 3, got n={args.n}")
    rep = prep.verify_clifford_average(args.n, args.mode, args.samples, args.seed)
    header = _header("verify-clifford", _config(args))
    if args.format == "csv":
        d = rep.to_json()
        return _dump_csv(header, list(d), [[("" if v is None else v) for v in d.values()]])
    return _dump_json({"header": header, "report": rep.to_json()})


def cmd_unlock(args) -> str:
    text = sys.stdin.read() if args.input == "-" else Path(args.input).read_text()
    results = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError:
            raise ValueError(f"line {lineno}: not a JSON record") from None
        if "blocks" in rec:
            enc = multibit.MultibitEncoding.from_json(rec)
            got = multibit.unlock_all(enc)
            results.append({"line": lineno, "bits": list(got), "expected": list(enc.bits), "ok": got == enc.bits})
        elif "string" in rec:
            s = BellString.parse(rec["string"])
            bit = locc.bell_unlock(s)
            out = {"line": lineno, "index": rec.get("index"), "string": str(s), "bit": bit}
            if "bit" in rec:
                out["expected"] = rec["bit"]
                out["ok"] = bit == rec["bit"]
            results.append(out)
    header = _header("unlock", _config(args))
    summary = {"records": len(results), "all_ok": all(r.get("ok", True) for r in results)}
    if args.format == "csv":
        cols = ["line", "index", "string", "bit", "expected", "ok"]
        rows = [[r["line"], r.get("index", ""), r.get("string", ""), r.get("bit", " ".join(map(str, r.get("bits", [])))),
                 r.get("expected", "") if not isinstance(r.get("expected"), list) else " ".join(map(str, r["expected"])),
                 r.get("ok", "")] for r in results]
        return _dump_csv(header | {"summary": summary}, cols, rows)
    return _dump_json({"header": header, "results": results, "summary": summary})


def cmd_multibit(args) -> str:
    n = multibit.required_block_size(args.k, args.epsilon)
    doc = {"k": args.k, "epsilon": args.epsilon, "n": n, "qubits_per_share": args.k * n,
           "terms": multibit.block_size_terms(args.k, args.epsilon), "formula": "asymptotic guidance, not a finite-k guarantee"}
    if args.bits is not None:
        bits = tuple(int(c) for c in args.bits)
        if len(bits) != args.k or any(b not in (0, 1) for b in bits):
            raise UsageError(f"--bits must be {args.k} characters of 0/1")
    elif args.seed is not None:
        bits = multibit.random_bits(args.k, args.seed)
    else:
        bits = None
    if bits is not None:
        enc = multibit.encode(bits, n)
        if args.seed is not None:
            enc = multibit.sample(enc, args.seed)
            doc["unlocked_bits"] = list(multibit.unlock_all(enc))
        doc["encoding"] = enc.to_json()
    header = _header("multibit", _config(args))
    if args.format == "csv":
        t = doc["terms"]
        return _dump_csv(header, ["k", "epsilon", "n", "2k", "log k", "log log e", "log 1/epsilon"],
                         [[args.k, args.epsilon, n, t["2k"], t["log k"], t["log log e"], t["log 1/epsilon"]]])
    return _dump_json({"header": header, "result": doc})


def cmd_oracle(args) -> str:
    checks = densematrix.spot_checks(args.n_max, args.seed)
    header = _header("oracle", _config(args))
    if args.format == "csv":
        cols = ["check", "n", "value", "expected", "tol", "ok"]
        return _dump_csv(header, cols, [[c[k] for k in cols] for c in checks])
    return _dump_json({"header": header, "checks": checks, "all_ok": all(c["ok"] for c in checks)})


# --- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bellhide", description="Bit hiding in Bell-state mixtures.")
    parser.add_argument("--version", action="version", version=f"bellhide {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help):
        p = sub.add_parser(name, help=help)
        p.set_defaults(func=func)
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--output", default=None, help=f"output file (relative paths resolve under ${OUTPUT_DIR_ENV} if set)")
        return p

    p = add("states", cmd_states, "emit a hiding state with exact weights")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--bit", type=_bit, required=True)

    p = add("certify", cmd_certify, "LP security certificates for n = 1..n-max")
    p.add_argument("--n-max", type=_positive, required=True)
    p.add_argument("--mode", choices=("reduced", "full", "both"), default="reduced")

    p = add("attack", cmd_attack, "exact information gained by a local-measurement strategy")
    p.add_argument("--strategy", default="all-z", help="strategy name or 'all'")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--prior", type=_prior, default=Fraction(1, 2), help="P(b = 0), e.g. 1/2")
    p.add_argument("--seed", type=_seed, default=None, help="echoed only; the computation is exact")

    p = add("prep", cmd_prep, "seeded sample stream from a preparation procedure")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--bit", type=_bit, required=True)
    p.add_argument("--samples", type=_positive, required=True)
    p.add_argument("--seed", type=_seed, required=True)
    p.add_argument("--path", choices=(prep.RECURSIVE, prep.CLASSICAL, prep.CLIFFORD), default=None)

    p = add("verify-clifford", cmd_verify_clifford, "compare the U(x)U average with the even hiding state")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--mode", choices=("exact", "sampled"), default="exact")
    p.add_argument("--samples", type=_positive, default=10_000)
    p.add_argument("--seed", type=_seed, default=None)

    p = add("unlock", cmd_unlock, "Bell-measurement parity for sample or encoding records")
    p.add_argument("--input", required=True, help="JSON-lines file, or - for stdin")

    p = add("multibit", cmd_multibit, "block size for k bits at leakage epsilon, optional encoding")
    p.add_argument("--k", type=_positive, required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--bits", default=None, help="bit string to encode, e.g. 0110")
    p.add_argument("--seed", type=_seed, default=None, help="samples the block strings (and the bits if --bits is absent)")

    p = add("oracle", cmd_oracle, "dense-matrix spot checks")
    p.add_argument("--n-max", type=_positive, default=2)
    p.add_argument("--seed", type=_seed, default=0, help="seed for the random positive operators")
    return parser


def _write(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
        return
    path = Path(output)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not path.is_absolute():
        path = Path(base) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _fail(kind: str, message: str, code: int) -> int:
    sys.stderr.write(f"error: {kind}: {' '.join(str(message).split())}\n")
    return code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "epsilon", None) is not None and not 0 < args.epsilon < 1:
            raise UsageError("--epsilon must lie strictly between 0 and 1")
        text = args.func(args)
        _write(text, args.output)
    except UsageError as exc:
        return _fail("usage", exc, EXIT_USAGE)
    except CapExceeded as exc:
        return _fail("resource", exc, EXIT_RESOURCE)
    except (ValueError, KeyError, OSError) as exc:
        return _fail("input", exc, EXIT_INPUT)
    except (ArithmeticError, povmopt.LPFailure) as exc:
        return _fail("internal", exc, EXIT_INTERNAL)
    return 0
