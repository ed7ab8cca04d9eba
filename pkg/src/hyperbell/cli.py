"""Command-line front end.

    hyperbell tables        outcome tables of the three DOF analyzers
    hyperbell classify-all  run the complete analyzer on all 64 hyper-Bell states
    hyperbell hyperdense    6-bit hyperdense coding round trip
    hyperbell montecarlo    Born-rule and noisy-readout statistics

Every command exits 0 only when all of its checks pass.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .analyzer import ANALYZERS, analyze_dof, hbsa_complete, oracle_classify
from .hyperdense import CodeWord, decode, encode, expected_label
from .kerr import (
    QND_FIRST_MOMENTUM,
    KerrConfig,
    ProbeRegister,
    QndOutcome,
    accumulate,
    class_weights,
    qnd_parity_check,
)
from .state import (
    DOF,
    SOURCE_LABEL,
    BellIndex,
    HyperBellLabel,
    build_hyper_bell,
    random_state,
)

COMMANDS = ("tables", "classify-all", "hyperdense", "montecarlo")
FORMATS = ("text", "json", "csv")
SCHEMA_VERSION = 1

# (table number, DOF, QND numbers) in presentation order
TABLE_LAYOUT = (
    (1, DOF.FIRST_MOMENTUM, (1, 2)),
    (2, DOF.SECOND_MOMENTUM, (3, 4)),
    (3, DOF.POLARIZATION, (5, 6)),
)

# expected (first, second) magnitude classes per Bell state, per DOF
PAPER_TABLES = {
    DOF.FIRST_MOMENTUM: {BellIndex.PHI_PLUS: (2, 2), BellIndex.PHI_MINUS: (2, 0), BellIndex.PSI_PLUS: (0, 2), BellIndex.PSI_MINUS: (0, 0)},
    DOF.SECOND_MOMENTUM: {BellIndex.PHI_PLUS: (2, 2), BellIndex.PHI_MINUS: (2, 0), BellIndex.PSI_PLUS: (0, 2), BellIndex.PSI_MINUS: (0, 0)},
    DOF.POLARIZATION: {BellIndex.PHI_PLUS: (1, 1), BellIndex.PHI_MINUS: (1, 0), BellIndex.PSI_PLUS: (0, 1), BellIndex.PSI_MINUS: (0, 0)},
}

CSV_COLUMNS = ["label", "qnd1", "qnd2", "qnd3", "qnd4", "qnd5", "qnd6", "decoded_label", "fidelity", "correct"]


@dataclass(frozen=True)
class RunConfig:
    command: str
    kerr: KerrConfig = field(default_factory=KerrConfig)
    trials: int = 64
    output_format: str = "text"
    output_path: str | None = None
    homodyne_error_given: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.output_format not in FORMATS:
            raise ValueError(f"unknown format {self.output_format!r}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.command == "montecarlo" and not self.homodyne_error_given:
            raise ValueError("montecarlo requires --homodyne-error")


@dataclass
class Report:
    text: str
    ok: bool


def task_rng(root_seed: int, task: int) -> np.random.Generator:
    """Independent generator for one task, fixed by (root seed, task index)."""
    return np.random.default_rng([int(root_seed), int(task)])


def three_sigma_ok(successes: int, n: int, p: float) -> tuple[bool, float]:
    sigma = math.sqrt(p * (1 - p) / n)
    return abs(successes / n - p) <= 3 * sigma + 1e-15, sigma


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


# --- tables ---------------------------------------------------------------

def compute_tables(kerr: KerrConfig) -> dict[DOF, dict[BellIndex, tuple[int, int]]]:
    """Outcome pair of each DOF analyzer on each of its four Bell states."""
    out = {}
    for _, dof, _ in TABLE_LAYOUT:
        rows = {}
        for b in BellIndex:
            by_dof = {d: BellIndex.PHI_PLUS for d in DOF}
            by_dof[dof] = b
            state = build_hyper_bell(HyperBellLabel.from_dofs(by_dof))
            _, (o1, o2), _ = analyze_dof(state, ANALYZERS[dof], kerr, kerr.make_rng())
            rows[b] = (o1.magnitude_class, o2.magnitude_class)
        out[dof] = rows
    return out


def tables_to_json(tables) -> dict:
    return {
        "schema": "hyperbell-tables",
        "version": SCHEMA_VERSION,
        "tables": [
            {
                "table": num,
                "dof": dof.short,
                "qnd": list(qnds),
                "rows": [{"bell": b.ascii, "first": tables[dof][b][0], "second": tables[dof][b][1]} for b in BellIndex],
            }
            for num, dof, qnds in TABLE_LAYOUT
        ],
    }


def tables_from_json(obj: dict) -> dict[DOF, dict[BellIndex, tuple[int, int]]]:
    if obj.get("schema") != "hyperbell-tables":
        raise ValueError("not a hyperbell-tables document")
    by_short = {d.short: d for d in DOF}
    return {
        by_short[t["dof"]]: {BellIndex.parse(r["bell"]): (int(r["first"]), int(r["second"])) for r in t["rows"]}
        for t in obj["tables"]
    }


def cmd_tables(cfg: RunConfig) -> Report:
    tables = compute_tables(cfg.kerr)
    ok = tables == PAPER_TABLES
    fmt = cfg.output_format
    if fmt == "json":
        doc = tables_to_json(tables)
        doc["matches_reference"] = ok
        return Report(_json_text(doc), ok)
    if fmt == "csv":
        rows = [
            (num, dof.short, b.ascii, *tables[dof][b])
            for num, dof, _ in TABLE_LAYOUT
            for b in BellIndex
        ]
        return Report(_csv_text(["table", "dof", "bell", "first", "second"], rows), ok)
    lines = []
    for num, dof, (q1, q2) in TABLE_LAYOUT:
        lines.append(f"Table {num}: {dof.name.lower().replace('_', ' ')} DOF")
        lines.append(f"{'Bell state':<12}{'QND' + str(q1):<8}{'QND' + str(q2)}")
        for b in BellIndex:
            c1, c2 = tables[dof][b]
            lines.append(f"{b.symbol + '_' + dof.short:<12}{QndOutcome(c1).render():<8}{QndOutcome(c2).render()}")
        lines.append("")
    lines.append("tables match reference: " + ("PASS" if ok else "FAIL"))
    return Report("\n".join(lines) + "\n", ok)


# --- classify-all ---------------------------------------------------------

def run_classify_all(cfg: RunConfig) -> list[dict]:
    rows = []
    for t in range(cfg.trials):
        label = HyperBellLabel.from_int(t % 64)
        state = build_hyper_bell(label)
        rec = hbsa_complete(state, cfg.kerr, task_rng(cfg.kerr.rng_seed, t))
        oracle = oracle_classify(rec.output_state)
        rows.append(
            {
                "label": label.ascii,
                "qnd": [o.magnitude_class for o in rec.outcomes],
                "decoded_label": rec.label.ascii,
                "fidelity": rec.fidelity,
                "correct": rec.label == label,
                "oracle_label": oracle.ascii if oracle else None,
            }
        )
    return rows


def cmd_classify_all(cfg: RunConfig) -> Report:
    rows = run_classify_all(cfg)
    n = len(rows)
    n_ok = sum(r["correct"] for r in rows)
    min_fid = min(r["fidelity"] for r in rows)
    p = cfg.kerr.homodyne_error
    expected = (1 - p) ** 6
    oracle_ok = all(r["oracle_label"] == r["label"] for r in rows)
    if p == 0:
        ok = n_ok == n and min_fid >= 1 - 1e-12 and oracle_ok
        summary = f"{n_ok}/{n} correct, min fidelity {'≥' if min_fid >= 1 - 1e-12 else '<'} 1−1e-12"
    else:
        ok, sigma = three_sigma_ok(n_ok, n, expected)
        ok = ok and oracle_ok
        summary = (
            f"{n_ok}/{n} correct, accuracy {n_ok / n:.6f} vs (1-p)^6 = {expected:.6f} "
            f"(3 sigma = {3 * sigma:.6f})"
        )
    fmt = cfg.output_format
    if fmt == "json":
        doc = {
            "schema": "hyperbell-classify-all",
            "version": SCHEMA_VERSION,
            "homodyne_error": p,
            "theta": cfg.kerr.theta,
            "trials": n,
            "rows": rows,
            "summary": {"correct": n_ok, "total": n, "min_fidelity": min_fid, "expected_accuracy": expected, "pass": ok},
        }
        if p > 0:
            doc["seed"] = cfg.kerr.rng_seed
        return Report(_json_text(doc), ok)
    if fmt == "csv":
        body = [
            (r["label"], *r["qnd"], r["decoded_label"], repr(r["fidelity"]), str(r["correct"]).lower())
            for r in rows
        ]
        return Report(_csv_text(CSV_COLUMNS, body), ok)
    lines = []
    if n <= 64:
        lines.append(f"{'label':<16}{'QND1..QND6':<20}{'decoded':<16}{'fidelity':<20}ok")
        for r in rows:
            qnd = " ".join(QndOutcome(c).render() for c in r["qnd"])
            lines.append(f"{r['label']:<16}{qnd:<20}{r['decoded_label']:<16}{r['fidelity']:<20.17g}{'yes' if r['correct'] else 'NO'}")
    lines.append(summary)
    lines.append("classify-all: " + ("PASS" if ok else "FAIL"))
    return Report("\n".join(lines) + "\n", ok)


# --- hyperdense -----------------------------------------------------------

def run_hyperdense(cfg: RunConfig, messages) -> list[dict]:
    out = []
    for i, bits in enumerate(messages):
        word = CodeWord.from_bits(bits)
        state = encode(bits)
        got = decode(state, SOURCE_LABEL, cfg.kerr, task_rng(cfg.kerr.rng_seed, i))
        encoded = oracle_classify(state)
        out.append(
            {
                "bits": bits,
                "codeword": [op.name for op in word.ops],
                "encoded_label": encoded.ascii if encoded else None,
                "expected_label": expected_label(bits).ascii,
                "decoded": got,
                "pass": got == bits,
            }
        )
    return out


def cmd_hyperdense(cfg: RunConfig, bits: int | None = None, exhaustive: bool = False) -> Report:
    if exhaustive:
        messages = list(range(64))
    else:
        if bits is None:
            raise ValueError("give --bits or --exhaustive")
        CodeWord.from_bits(bits)
        messages = [bits]
    rows = run_hyperdense(cfg, messages)
    n_ok = sum(r["pass"] for r in rows)
    ok = n_ok == len(rows)
    fmt = cfg.output_format
    if fmt == "json":
        doc = {"schema": "hyperbell-hyperdense", "version": SCHEMA_VERSION, "reference": SOURCE_LABEL.ascii, "rows": rows, "pass": ok}
        return Report(_json_text(doc), ok)
    if fmt == "csv":
        body = [
            (r["bits"], "".join(r["codeword"]), r["encoded_label"], r["decoded"], str(r["pass"]).lower())
            for r in rows
        ]
        return Report(_csv_text(["bits", "codeword", "encoded_label", "decoded", "pass"], body), ok)
    lines = [f"reference state: {SOURCE_LABEL}"]
    for r in rows:
        lines.append(
            f"bits {r['bits']:06b} ({r['bits']:2d})  ops (P,F,S)=({','.join(r['codeword'])}) on photon A  "
            f"encoded {r['encoded_label']}  decoded {r['decoded']:06b} ({r['decoded']:2d})  "
            + ("pass" if r["pass"] else "FAIL")
        )
    if exhaustive:
        lines.append(f"{n_ok}/64 pass")
    return Report("\n".join(lines) + "\n", ok)


# --- montecarlo -----------------------------------------------------------

def born_rule_run(kerr: KerrConfig, trials: int) -> dict:
    """QND1 readouts on one seeded random state vs its computed class weights."""
    rng = np.random.default_rng([int(kerr.rng_seed), 2**32])
    state = random_state(rng)
    probe = accumulate(ProbeRegister.fresh(), QND_FIRST_MOMENTUM)
    weights = class_weights(probe, state)
    ideal = KerrConfig(theta=kerr.theta, rng_seed=kerr.rng_seed)
    counts = np.zeros(3, dtype=np.int64)
    for _ in range(trials):
        o, _ = qnd_parity_check(state, QND_FIRST_MOMENTUM, ideal, rng)
        counts[o.magnitude_class] += 1
    checks = [three_sigma_ok(int(counts[c]), trials, float(weights[c])) for c in range(3)]
    return {
        "weights": weights.tolist(),
        "frequencies": (counts / trials).tolist(),
        "pass": all(c[0] for c in checks),
    }


def noisy_accuracy_run(kerr: KerrConfig, trials: int) -> dict:
    n_ok = 0
    for t in range(trials):
        rng = task_rng(kerr.rng_seed, t)
        label = HyperBellLabel.from_int(int(rng.integers(64)))
        n_ok += hbsa_complete(build_hyper_bell(label), kerr, rng).label == label
    expected = (1 - kerr.homodyne_error) ** 6
    ok, sigma = three_sigma_ok(n_ok, trials, expected)
    return {"correct": n_ok, "trials": trials, "accuracy": n_ok / trials, "expected": expected, "sigma": sigma, "pass": ok}


def cmd_montecarlo(cfg: RunConfig) -> Report:
    born = born_rule_run(cfg.kerr, cfg.trials)
    acc = noisy_accuracy_run(cfg.kerr, cfg.trials)
    ok = born["pass"] and acc["pass"]
    fmt = cfg.output_format
    if fmt == "json":
        doc = {
            "schema": "hyperbell-montecarlo",
            "version": SCHEMA_VERSION,
            "seed": cfg.kerr.rng_seed,
            "homodyne_error": cfg.kerr.homodyne_error,
            "theta": cfg.kerr.theta,
            "born_rule": born,
            "accuracy": acc,
            "pass": ok,
        }
        return Report(_json_text(doc), ok)
    if fmt == "csv":
        rows = [("born_rule", f"class{c}", born["weights"][c], born["frequencies"][c]) for c in range(3)]
        rows.append(("accuracy", f"p={cfg.kerr.homodyne_error}", acc["expected"], acc["accuracy"]))
        return Report(_csv_text(["check", "item", "expected", "observed"], rows), ok)
    w, f = born["weights"], born["frequencies"]
    lines = [
        f"Born rule (QND1 on a random state, {cfg.trials} readouts):",
        *(f"  class {QndOutcome(c).render():<4} weight {w[c]:.6f}  frequency {f[c]:.6f}" for c in range(3)),
        "  " + ("PASS" if born["pass"] else "FAIL"),
        f"End-to-end accuracy, homodyne_error={cfg.kerr.homodyne_error}, {acc['trials']} trials:",
        f"  observed {acc['accuracy']:.6f}  expected (1-p)^6 = {acc['expected']:.6f}  3 sigma = {3 * acc['sigma']:.6f}",
        "  " + ("PASS" if acc["pass"] else "FAIL"),
    ]
    return Report("\n".join(lines) + "\n", ok)


# --- entry point ----------------------------------------------------------

def _bits_arg(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if not 0 <= value <= 63:
        raise argparse.ArgumentTypeError(f"bits must be in [0, 63], got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="root RNG seed (u64)")
    common.add_argument("--theta", type=float, default=0.1, help="unit Kerr phase in radians (reporting only)")
    common.add_argument("--homodyne-error", type=float, default=None, help="per-readout misclassification probability")
    common.add_argument("--trials", type=int, default=None)
    common.add_argument("--format", choices=FORMATS, default="text")
    common.add_argument("--out", default=None, help="write output here instead of stdout")

    ap = argparse.ArgumentParser(prog="hyperbell", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("tables", parents=[common], help="reproduce the three outcome tables")
    sub.add_parser("classify-all", parents=[common], help="classify all 64 hyper-Bell states")
    hd = sub.add_parser("hyperdense", parents=[common], help="hyperdense coding round trip")
    grp = hd.add_mutually_exclusive_group(required=True)
    grp.add_argument("--bits", type=_bits_arg)
    grp.add_argument("--exhaustive", action="store_true")
    sub.add_parser("montecarlo", parents=[common], help="Born rule and noisy accuracy statistics")
    return ap


_DEFAULT_TRIALS = {"tables": 1, "classify-all": 64, "hyperdense": 1, "montecarlo": 10_000}


def config_from_args(args) -> RunConfig:
    p = args.homodyne_error
    kerr = KerrConfig(theta=args.theta, homodyne_error=0.0 if p is None else p, rng_seed=args.seed)
    return RunConfig(
        command=args.command,
        kerr=kerr,
        trials=_DEFAULT_TRIALS[args.command] if args.trials is None else args.trials,
        output_format=args.format,
        output_path=args.out,
        homodyne_error_given=p is not None,
    )


def run(argv=None) -> tuple[Report, RunConfig]:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = config_from_args(args)
    except ValueError as exc:
        ap.error(str(exc))
    if cfg.command == "tables":
        report = cmd_tables(cfg)
    elif cfg.command == "classify-all":
        report = cmd_classify_all(cfg)
    elif cfg.command == "hyperdense":
        report = cmd_hyperdense(cfg, args.bits, args.exhaustive)
    else:
        report = cmd_montecarlo(cfg)
    return report, cfg


def main(argv=None) -> int:
    report, cfg = run(argv)
    out = cfg.output_path
    if out:
        try:
            with open(out, "w", encoding="utf-8", newline="") as fh:
                fh.write(report.text)
        except OSError as exc:
            print(f"hyperbell: cannot write {out}: {exc.strerror or exc}", file=sys.stderr)
            return 2
    else:
        sys.stdout.write(report.text)
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
