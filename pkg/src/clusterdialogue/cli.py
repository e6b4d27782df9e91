"""Command-line entry point: ``clusterdialogue {tables,dialogue,attack,qec,efficiency}``.

Outputs embed their config and seed and contain nothing time- or
host-dependent, so a repeated command reproduces its file byte for byte.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Sequence

import numpy as np

from . import analysis, qec
from .adversary import Adversary, CustomProbe, InterceptResend
from .cluster import MAX_FAMILY_QUBITS, build_family, check_bits
from .ndd import BELL_LABELS, BELL_STATES, bell_ndd
from .pauli import apply_pauli
from .published_tables import BELL_TABLE, SYNDROME_TABLE, Z_DECODER_TABLE, diff_encoding_table
from .protocol import STATUS_EAVESDROP, STATUS_OK, NoiseSpec, run_dialogue
from .statevector import as_generator, fidelity

EXIT_OK = 0
EXIT_ABORT = 2
EXIT_UNCORRECTABLE = 3
EXIT_USAGE = 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _dump_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc}") from exc


def _csv(config: dict, header: Sequence[str], rows: Sequence[Sequence], summary: Sequence | None) -> str:
    buf = io.StringIO()
    buf.write(f"# config: {json.dumps(config, sort_keys=True)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    if summary is not None:
        w.writerow(summary)
    return buf.getvalue()


def _mean_stderr(values: Sequence[float]) -> tuple[float, float]:
    vals = np.asarray(values, dtype=float)
    if vals.size == 0:
        return float("nan"), float("nan")
    se = float(vals.std(ddof=1) / math.sqrt(vals.size)) if vals.size > 1 else 0.0
    return float(vals.mean()), se


# -- tables --------------------------------------------------------------------

def cmd_tables(args) -> int:
    config = {"command": "tables", "kind": args.kind, "n": args.n, "seed": args.seed}
    if args.kind == "ndd":
        if not 2 <= args.n <= MAX_FAMILY_QUBITS:
            raise UsageError(f"--n must lie in [2, {MAX_FAMILY_QUBITS}]")
        family = build_family(args.n)
        rows = family.export_rows()
        diff = diff_encoding_table(family) if args.n == 5 else None
    elif args.kind == "qec":
        rows = qec.syndrome_rows()
        diff = [{"error": r["error"], "field": "syndrome", "published": SYNDROME_TABLE[r["error"]],
                 "simulated": r["syndrome"]} for r in rows if SYNDROME_TABLE[r["error"]] != r["syndrome"]]
        for err, action in Z_DECODER_TABLE.items():
            got = next(r["correction"] for r in rows if r["error"] == err)
            if got != action:
                diff.append({"error": err, "field": "correction", "published": action, "simulated": got})
    else:
        gen = as_generator(args.seed)
        rows = []
        for label in BELL_LABELS:
            res = bell_ndd(BELL_STATES[label], gen)
            rows.append({"state": label, "syndrome": res.syndrome,
                         "post_fidelity": round(fidelity(res.post_state, BELL_STATES[label]), 12)})
        diff = [{"state": r["state"], "published": BELL_TABLE[r["state"]], "simulated": r["syndrome"]}
                for r in rows if BELL_TABLE[r["state"]] != r["syndrome"]]
    doc = {"config": config, "rows": rows, "published_diff": diff}
    _emit(_dump_json(doc), args.out)
    if diff is not None:
        target = sys.stderr if args.out is None else sys.stdout
        if diff:
            print(f"{len(diff)} discrepancies against the published table:", file=target)
            for d in diff:
                print("  " + json.dumps(d, sort_keys=True), file=target)
        else:
            print("published table reproduced: no discrepancies", file=target)
    return EXIT_OK


# -- dialogue -------------------------------------------------------------------

_PROBES = ("identity", "trivial", "cx", "random")


def _probe_matrix(name: str, probe_dim: int, gen: np.random.Generator, targets: int = 2) -> np.ndarray:
    if name == "identity":
        return np.eye(2 ** targets * probe_dim, dtype=complex)
    if name == "trivial":
        return analysis.trivial_probe(analysis.random_probe(probe_dim, 0, gen), targets)
    if name == "cx":
        if probe_dim != 2 or targets != 2:
            raise UsageError("the cx probe needs --probe-dim 2")
        return analysis.cx_probe()
    return analysis.random_probe(probe_dim, targets, gen)


def _adversary(args, gen) -> Adversary:
    if args.adversary == "none":
        return Adversary()
    if args.adversary == "intercept-resend":
        return InterceptResend()
    return CustomProbe(_probe_matrix(args.probe, args.probe_dim, gen, targets=1), args.probe_dim)


def _noise(args) -> NoiseSpec | None:
    if args.noise_p is None:
        return None
    try:
        channel = qec.NoiseChannel(args.noise_p, qec.ErrorKind(args.noise_kind))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return NoiseSpec(channel, correct=not args.no_correct)


def _exit_for(status: str) -> int:
    if status == STATUS_OK:
        return EXIT_OK
    return EXIT_ABORT if status == STATUS_EAVESDROP else EXIT_UNCORRECTABLE


def cmd_dialogue(args) -> int:
    for bits in (args.alice, args.bob):
        try:
            check_bits(bits)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        if not bits:
            raise UsageError("messages must be non-empty")
    noise = _noise(args)
    kwargs = dict(noise=noise, decoys_per_sequence=args.decoys, threshold=args.threshold,
                  min_comparisons=args.min_comparisons)
    if args.sweep is None:
        adversary = _adversary(args, as_generator(args.seed))
        try:
            tr = run_dialogue(args.alice, args.bob, adversary, master_seed=args.seed, **kwargs)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        doc = tr.to_dict()
        doc["config"]["command"] = "dialogue"
        _emit(_dump_json(doc), args.out)
        return _exit_for(tr.status)

    counts = {}
    runs = []
    for seed in range(args.seed, args.seed + args.sweep):
        tr = run_dialogue(args.alice, args.bob, _adversary(args, as_generator(seed)), master_seed=seed, **kwargs)
        counts[tr.status] = counts.get(tr.status, 0) + 1
        runs.append({"seed": seed, "status": tr.status,
                     "aborted_at": next((f"{s['sender']}:S{s['label']}" for s in tr.sequences if not s["pass"]), None)})
    config = {"command": "dialogue", "alice": args.alice, "bob": args.bob, "adversary": args.adversary,
              "probe": args.probe if args.adversary == "custom-probe" else None, "decoys": args.decoys,
              "threshold": args.threshold, "min_comparisons": args.min_comparisons,
              "noise_p": args.noise_p, "noise_kind": args.noise_kind, "seed": args.seed, "sweep": args.sweep}
    aborted = args.sweep - counts.get(STATUS_OK, 0)
    doc = {"config": config, "status_counts": counts, "abort_rate": aborted / args.sweep, "runs": runs}
    _emit(_dump_json(doc), args.out)
    return EXIT_OK


# -- attack ---------------------------------------------------------------------

def cmd_attack(args) -> int:
    config = {"command": "attack", "kind": args.kind, "trials": args.trials, "seed": args.seed}
    if args.kind == "passive":
        family = build_family(args.n)
        config["n"] = args.n
        rows = [(held, f"{h:.12f}") for held, h in analysis.disclosure_entropies(family).items()]
        full = analysis.passive_attack_entropy(family)
        text = _csv(config, ("eve_holds", "entropy_bits"), rows, ("summary_full_register", f"{full:.12f}"))
        _emit(text, args.out)
        if args.out is not None:
            print(f"passive attack entropy: {full:.1f} bits")
        return EXIT_OK

    if args.kind == "intercept-resend":
        config.update({"decoys": args.decoys, "threshold": args.threshold})
        gen = as_generator(args.seed)
        rows, rates, detected = [], [], 0
        total_err = total_matched = 0
        for t in range(args.trials):
            alice = "".join(str(b) for b in gen.integers(2, size=5))
            bob = "".join(str(b) for b in gen.integers(2, size=5))
            seed = int(gen.integers(2 ** 63 - 1))
            tr = run_dialogue(alice, bob, InterceptResend(), master_seed=seed,
                              decoys_per_sequence=args.decoys, threshold=args.threshold)
            matched = sum(s["matched"] for s in tr.sequences)
            errors = sum(s["errors"] for s in tr.sequences)
            at = next((f"{s['sender']}:S{s['label']}" for s in tr.sequences if not s["pass"]), "")
            rate = errors / matched if matched else float("nan")
            total_err += errors
            total_matched += matched
            detected += bool(at)
            rates.append(rate)
            rows.append((t, at, matched, f"{rate:.6f}"))
        pooled = total_err / total_matched if total_matched else float("nan")
        _, se = _mean_stderr([r for r in rates if not math.isnan(r)])
        summary = ("summary", f"detected={detected / args.trials:.6f}", total_matched,
                   f"pooled={pooled:.6f}", f"stderr={se:.6f}")
        _emit(_csv(config, ("trial", "detected_at_sequence", "matched_decoys", "error_rate"), rows, summary), args.out)
        if args.out is not None:
            print(f"pooled matched-basis error rate: {pooled:.4f} over {total_matched} comparisons")
        return EXIT_OK

    config.update({"probe": args.probe, "probe_dim": args.probe_dim})
    gen = as_generator(args.seed)
    rows, det, info = [], [], []
    for t in range(args.trials):
        rep = analysis.probe_attack_analysis(_probe_matrix(args.probe, args.probe_dim, gen), args.probe_dim)
        det.append(rep.detection_probability)
        info.append(rep.eve_information)
        rows.append((t, args.probe, f"{rep.detection_probability:.12f}", f"{rep.eve_information:.12f}"))
    (md, sd), (mi, si) = _mean_stderr(det), _mean_stderr(info)
    summary = ("summary", "mean/stderr", f"{md:.12f}/{sd:.12f}", f"{mi:.12f}/{si:.12f}")
    _emit(_csv(config, ("trial", "probe", "detection_probability", "eve_information_bits"), rows, summary), args.out)
    if args.out is not None:
        print(f"probe {args.probe}: detection {md:.6f}, information {mi:.6f} bits")
    return EXIT_OK


# -- qec ------------------------------------------------------------------------

_KINDS = [k.value for k in qec.ErrorKind]


def cmd_qec(args) -> int:
    if not 0.0 <= args.p <= 1.0:
        raise UsageError("--p must lie in [0, 1]")
    family = build_family(qec.N_QUBITS)
    forced = None
    if args.error is not None:
        try:
            forced = qec.ErrorOp.parse(args.error)
            forced.pauli()
        except ValueError as exc:
            raise UsageError(f"bad --error {args.error!r}: {exc}") from exc
    if args.member is not None and not 0 <= args.member < len(family.members):
        raise UsageError("--member out of range")
    config = {"command": "qec", "p": args.p, "kind": args.kind, "trials": args.trials, "seed": args.seed,
              "error": args.error, "member": args.member}
    gen = as_generator(args.seed)
    rows, ok_count, injected = [], 0, 0
    for t in range(args.trials):
        member = args.member if args.member is not None else int(gen.integers(len(family.members)))
        kind = args.kind if args.kind != "any" else _KINDS[int(gen.integers(3))]
        state = family.members[member]
        if forced is not None:
            noisy, err = apply_pauli(state, forced.pauli()), forced
        else:
            noisy, err = qec.apply_noise(state, qec.NoiseChannel(args.p, kind), gen)
        injected += err is not None
        fixed, syndrome, corr = qec.correct(noisy, member, gen, family)
        good = fidelity(fixed, state) >= 1 - 1e-10
        ok_count += good
        rows.append((t, family.message(member), err.label() if err else "", syndrome, corr.label(), int(good)))
    rate = ok_count / args.trials if args.trials else float("nan")
    summary = ("summary", f"injected={injected}", "", "", f"success_rate={rate:.6f}", ok_count)
    _emit(_csv(config, ("trial", "member", "error", "syndrome", "correction", "corrected"), rows, summary), args.out)
    if args.out is not None:
        print(f"qec success rate: {rate:.6f} ({injected} errors injected)")
    return EXIT_OK


# -- efficiency -----------------------------------------------------------------

def cmd_efficiency(args) -> int:
    if args.c is not None:
        if args.q is None:
            raise UsageError("--c needs --q")
        c, q, b = args.c, args.q, args.b
    else:
        res = analysis.dialogue_resources(args.rounds, not args.insecure)
        c, q, b = res.c, res.q, res.b
    try:
        eta = analysis.efficiency(c, q, b)
    except (ZeroDivisionError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    doc = {"config": {"command": "efficiency", "c": c, "q": q, "b": b},
           "eta": f"{eta.numerator}/{eta.denominator}", "percent": round(float(eta) * 100, 2)}
    _emit(_dump_json(doc), args.out)
    return EXIT_OK


# -- parser -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="clusterdialogue", description="Cluster-state quantum dialogue simulator.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    t = sub.add_parser("tables", help="regenerate and diff the encoding, QEC and Bell tables")
    t.add_argument("kind", choices=("ndd", "qec", "bell"))
    t.add_argument("--n", type=int, default=5)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--out")
    t.set_defaults(func=cmd_tables)

    d = sub.add_parser("dialogue", help="run one dialogue, or a seed sweep with --sweep")
    d.add_argument("--alice", required=True)
    d.add_argument("--bob", required=True)
    d.add_argument("--adversary", choices=("none", "intercept-resend", "custom-probe"), default="none")
    d.add_argument("--probe", choices=_PROBES, default="identity")
    d.add_argument("--probe-dim", type=int, default=2)
    d.add_argument("--decoys", type=int, help="decoys per sequence (default: one per message qubit)")
    d.add_argument("--threshold", type=float, default=0.25)
    d.add_argument("--min-comparisons", type=int, default=1)
    d.add_argument("--noise-p", type=float)
    d.add_argument("--noise-kind", choices=_KINDS, default="bit-flip")
    d.add_argument("--no-correct", action="store_true", help="inject noise without correcting it")
    d.add_argument("--sweep", type=int, help="run seeds seed..seed+N-1 and report the abort rate")
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--out")
    d.set_defaults(func=cmd_dialogue)

    a = sub.add_parser("attack", help="attack statistics as CSV")
    a.add_argument("kind", choices=("passive", "intercept-resend", "probe"))
    a.add_argument("--trials", type=int, default=1000)
    a.add_argument("--n", type=int, default=5)
    a.add_argument("--decoys", type=int, default=4)
    a.add_argument("--threshold", type=float, default=0.25)
    a.add_argument("--probe", choices=_PROBES, default="random")
    a.add_argument("--probe-dim", type=int, default=2)
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--out")
    a.set_defaults(func=cmd_attack)

    q = sub.add_parser("qec", help="noise plus correction sweep as CSV")
    q.add_argument("--p", type=float, default=1.0)
    q.add_argument("--kind", choices=(*_KINDS, "any"), default="any")
    q.add_argument("--trials", type=int, default=1000)
    q.add_argument("--error", help="force this error every trial, e.g. X2")
    q.add_argument("--member", type=int, help="fixed family member index (message value)")
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--out")
    q.set_defaults(func=cmd_qec)

    e = sub.add_parser("efficiency", help="eta = c/(q+b)")
    e.add_argument("--c", type=int)
    e.add_argument("--q", type=int)
    e.add_argument("--b", type=int, default=0)
    e.add_argument("--rounds", type=int, default=1)
    e.add_argument("--insecure", action="store_true", help="count decoy qubits")
    e.add_argument("--out")
    e.set_defaults(func=cmd_efficiency)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"clusterdialogue: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
