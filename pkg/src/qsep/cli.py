"""Command-line front end: ``qsep <subcommand> ...``.

Every subcommand is deterministic given its flags; default seeds are fixed
and echoed.  Tabular output is CSV, summaries JSON, plots SVG, all written
atomically.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys

import numpy as np

from ._io import atomic_write_text, csv_text, write_csv, write_json
from .errors import InconsistentOracle, QsepError
from .instance import (
    SignConvention,
    TargetState,
    build_hard_instance,
    build_watermarked_instance,
    check_spectral_condition,
    find_gamma,
    instance_to_dict,
    load_instance,
    save_instance,
)

DEFAULT_SEED = 0
_GRID_TOKEN = re.compile(r"[-+*/. 0-9e()pi]+")


def _parse_grid(text: str) -> list[float]:
    """``a:b:num`` (inclusive linspace, ``pi`` allowed) or a comma list."""
    def num(s):
        if not _GRID_TOKEN.fullmatch(s.strip()):
            raise argparse.ArgumentTypeError(f"bad grid value {s!r}")
        try:
            return float(eval(s, {"__builtins__": {}}, {"pi": math.pi}))  # noqa: S307 - checked above
        except (SyntaxError, NameError, TypeError, ZeroDivisionError) as exc:
            raise argparse.ArgumentTypeError(f"bad grid value {s!r}") from exc

    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3 or not parts[2].strip().isdigit() or int(parts[2]) < 1:
            raise argparse.ArgumentTypeError(f"bad grid {text!r}; expected a:b:num")
        return list(np.linspace(num(parts[0]), num(parts[1]), int(parts[2])))
    return [num(s) for s in text.split(",")]


def _instance_options(p: argparse.ArgumentParser, required=True):
    g = p.add_argument_group("instance")
    g.add_argument("-i", "--instance", help="instance JSON file")
    g.add_argument("--hard", type=int, nargs="?", const=-1, metavar="N",
                   help="build the 4-local hard instance inline (size from N or -n)")
    g.add_argument("-n", type=int, help="qubit count for --hard")
    g.add_argument("--target", help="target bitstring for --hard (default all zeros)")
    g.add_argument("--sign", choices=["ground", "paper"], default="ground", help="watermark sign convention")


def _get_instance(args):
    if args.instance:
        return load_instance(args.instance)
    n = _hard_size(args)
    if n is not None:
        return build_hard_instance(n, args.target, SignConvention(args.sign))
    raise QsepError("give --instance PATH or --hard N")


def _hard_size(args):
    if args.hard is None:
        return None
    if args.hard == -1:
        if args.n is None:
            raise QsepError("--hard needs a size (--hard N or -n N)")
        return args.n
    if args.n is not None and args.n != args.hard:
        raise QsepError("conflicting --hard and -n")
    return args.hard


def _emit(text: str, path):
    if path:
        atomic_write_text(path, text)
    else:
        sys.stdout.write(text)


def cmd_gen(args):
    sign = SignConvention(args.sign)
    n = _hard_size(args)
    if n is not None:
        inst = build_hard_instance(n, args.target, sign)
    else:
        if not args.target:
            raise QsepError("gen needs --hard N or --watermark with --target")
        extra = []
        if args.extra_terms:
            extra = [(t["sites"], t["m"]) for t in json.loads(args.extra_terms)]
        inst = build_watermarked_instance(TargetState(args.target), extra, sign)
    if args.output:
        save_instance(inst, args.output)
    else:
        print(json.dumps(instance_to_dict(inst)))
    found = find_gamma(inst.spectrum, [sign.trained_gamma, -sign.trained_gamma])
    cert = found[1] if found else check_spectral_condition(inst.spectrum, sign.trained_gamma)
    print(f"certificate: gamma={cert.gamma:g} satisfied={cert.satisfied} c={cert.c:.12g} "
          f"max_deviation={cert.max_deviation:.3g}", file=sys.stderr)
    return 0


def cmd_qaoa(args):
    from .qaoa import GRID_CSV_HEADER, grid_scan, verify_deterministic

    inst = _get_instance(args)
    if args.mode == "verify":
        v = verify_deterministic(inst, args.tol)
        out = {
            "deterministic": v.deterministic,
            "beta": v.params.beta if v.params else None,
            "gamma": v.params.gamma if v.params else None,
            "prob": v.prob,
            "c": v.certificate.c if v.certificate else None,
        }
        _emit(json.dumps(out, indent=2, sort_keys=True) + "\n", args.output)
        return 0
    scan = grid_scan(inst.spectrum, args.betas, args.gammas)
    _emit(csv_text(GRID_CSV_HEADER, scan.table), args.output)
    print(f"best: beta={scan.best.beta!r} gamma={scan.best.gamma!r} prob={scan.best_prob!r}", file=sys.stderr)
    return 0


def _sa_schedule(args, inst):
    from .sa import SaSchedule, default_schedule

    d = default_schedule(inst)
    return SaSchedule(
        args.t_start if args.t_start is not None else d.t_start,
        args.t_end if args.t_end is not None else d.t_end,
        args.sweeps if args.sweeps is not None else d.sweeps,
        args.cooling,
    )


def cmd_sa(args):
    from .sa import SA_CSV_HEADER, sa_csv_rows, sa_success_probability

    inst = _get_instance(args)
    sched = _sa_schedule(args, inst)
    print(f"seed0={args.seed} schedule={sched}", file=sys.stderr)
    est = sa_success_probability(inst, sched, args.runs, args.seed, best_seen=args.best_seen)
    if args.csv:
        write_csv(args.csv, SA_CSV_HEADER, sa_csv_rows(est, args.seed))
    summary = est.summary()
    if args.output:
        write_json(args.output, summary)
    else:
        print(json.dumps(summary, sort_keys=True))
    return 0


def cmd_qa(args):
    from .dynamics import QA_CSV_HEADER, AnnealSchedule, qa_statevector, qa_symmetric

    sched = AnnealSchedule(args.T, args.steps)
    instances = []
    if args.instance or args.hard is not None:
        instances.append(_get_instance(args))
    for n in args.sweep_n or ():
        instances.append(build_hard_instance(n, None, SignConvention(args.sign)))
    if not instances:
        raise QsepError("give --instance, --hard N or --sweep-n N [N ...]")
    rows = []
    for inst in instances:
        if args.engine == "statevector" or inst.extra_terms:
            p = qa_statevector(inst, sched, args.mixer_sign)
        else:
            p = qa_symmetric(inst, sched, args.mixer_sign)
        rows.append((inst.n, float(args.T), args.steps, p))
    _emit(csv_text(QA_CSV_HEADER, rows), args.output)
    return 0


def cmd_pq(args):
    from .figures import overlap_figure, overlap_svg
    from .overlap_dist import PQ_CSV_HEADER, hardness_indicator

    inst = _get_instance(args)
    dist = overlap_figure(inst, args.inverse_temperature)
    _emit(csv_text(PQ_CSV_HEADER, zip(map(float, dist.q_values), map(float, dist.probabilities))), args.output)
    if args.svg:
        atomic_write_text(args.svg, overlap_svg(dist, args.log_y))
    v = hardness_indicator(dist)
    print(f"inverse_temperature={dist.inverse_temperature!r} verdict={v.verdict} "
          f"mass(|q|<0.75)={v.mass_below:.6g} P(q=1)={v.p_one:.6g}", file=sys.stderr)
    return 0


def cmd_oracle(args):
    from .oracle_solver import instance_oracle, solve

    inst = _get_instance(args)
    exact = inst.exact and not args.float
    query = instance_oracle(inst, exact=exact)
    bits, log = solve(query, inst.n, args.seed, inst.sign_convention,
                      units="quarter_pi" if exact else "radians", auto_sign=args.auto_sign)
    print(bits)
    print(f"queries: {log.count}")
    print(f"correct: {bits == inst.target.bits}")
    if args.log:
        atomic_write_text(args.log, json.dumps(log.to_json()) + "\n")
    return 0


def cmd_export_circuit(args):
    from .couplings import expand_hamming_polynomial, export_circuit, render_circuit
    from .qaoa import QaoaParams

    inst = _get_instance(args)
    gamma = args.gamma if args.gamma is not None else inst.sign_convention.trained_gamma
    circ = export_circuit(expand_hamming_polynomial(inst), QaoaParams(args.beta, gamma))
    _emit(render_circuit(circ, ladder=args.ladder), args.output)
    return 0


def cmd_fig1(args):
    from .figures import write_fig1

    inst = _get_instance(args)
    summary = write_fig1(inst, args.out_dir, args.inverse_temperature, args.log_y)
    print(json.dumps(summary, sort_keys=True))
    return 0


def cmd_compare(args):
    from .dynamics import AnnealSchedule, FULL_SPACE_MAX_N, qa_statevector, qa_symmetric
    from .oracle_solver import instance_oracle, solve
    from .qaoa import verify_deterministic
    from .sa import sa_success_probability

    inst = _get_instance(args)
    v = verify_deterministic(inst)
    sched = _sa_schedule(args, inst)
    est = sa_success_probability(inst, sched, args.runs, args.seed)
    qsched = AnnealSchedule(args.qa_T, args.qa_steps)
    if not inst.extra_terms:
        qa = qa_symmetric(inst, qsched)
    elif inst.n <= FULL_SPACE_MAX_N:
        qa = qa_statevector(inst, qsched)
    else:
        qa = None
    exact = inst.exact
    try:
        bits, log = solve(instance_oracle(inst, exact=exact), inst.n, args.seed, inst.sign_convention,
                          units="quarter_pi" if exact else "radians")
        queries, correct, oracle_error = log.count, bits == inst.target.bits, None
    except InconsistentOracle as exc:
        # the residue decoder only applies to watermarked spectra
        queries, correct, oracle_error = None, False, str(exc)
    summary = {
        "n": inst.n,
        "seed": args.seed,
        "qaoa_prob": v.prob,
        "qaoa_deterministic": v.deterministic,
        "sa_estimate": est.estimate,
        "sa_ci": [est.wilson_low, est.wilson_high],
        "sa_runs": est.runs,
        "qa_prob": qa,
        "oracle_queries": queries,
        "oracle_correct": correct,
    }
    if oracle_error:
        summary["oracle_error"] = oracle_error
    if args.output:
        write_json(args.output, summary)
    print(json.dumps(summary, sort_keys=True))
    return 0


def _sa_options(p):
    g = p.add_argument_group("simulated annealing")
    g.add_argument("--runs", type=int, default=1000)
    g.add_argument("--seed", type=int, default=DEFAULT_SEED, help="first seed (runs use seed..seed+runs-1)")
    g.add_argument("--t-start", type=float, help="default: spectral spread / n")
    g.add_argument("--t-end", type=float, help="default: 0.01")
    g.add_argument("--sweeps", type=int, help="default: 100 n")
    g.add_argument("--cooling", choices=["geometric", "linear"], default="geometric")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qsep", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="build an instance JSON file and print its spectral certificate")
    p.add_argument("--hard", type=int, nargs="?", const=-1, metavar="N", help="4-local hard instance on N (even) qubits")
    p.add_argument("-n", type=int, help="qubit count for --hard")
    p.add_argument("--watermark", action="store_true", help="linear watermark instance (needs --target)")
    p.add_argument("--target", help="target bitstring")
    p.add_argument("--sign", choices=["ground", "paper"], default="ground")
    p.add_argument("--extra-terms", help='JSON list like [{"sites": [0, 2], "m": 1}]')
    p.add_argument("-o", "--output", help="instance JSON path (default: stdout)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("qaoa", help="depth-1 QAOA: grid scan or deterministic verification")
    p.add_argument("mode", choices=["grid", "verify"])
    _instance_options(p)
    p.add_argument("--betas", type=_parse_grid, default="0:pi/2:33", help="beta grid, a:b:num or comma list")
    p.add_argument("--gammas", type=_parse_grid, default="-2:2:33", help="gamma grid, a:b:num or comma list")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_qaoa)

    p = sub.add_parser("sa", help="simulated annealing success statistics")
    _instance_options(p)
    _sa_options(p)
    p.add_argument("--best-seen", action="store_true", help="count a run as successful if it ever held the lowest energy at the target")
    p.add_argument("--csv", help="per-run CSV path")
    p.add_argument("-o", "--output", help="aggregate JSON path")
    p.set_defaults(func=cmd_sa)

    p = sub.add_parser("qa", help="closed-system quantum annealing success probability")
    _instance_options(p)
    p.add_argument("--sweep-n", type=int, nargs="+", metavar="N", help="hard instances to run")
    p.add_argument("-T", type=float, default=20.0)
    p.add_argument("--steps", type=int, default=4000)
    p.add_argument("--engine", choices=["symmetric", "statevector"], default="symmetric")
    p.add_argument("--mixer-sign", type=int, choices=[-1, 1], default=-1,
                   help="-1: H = -(1-s) sum X + s H_P (default); +1: literal +sum X")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_qa)

    p = sub.add_parser("pq", help="exact overlap distribution P(q)")
    _instance_options(p)
    p.add_argument("--inverse-temperature", type=float, help="default: picked automatically")
    p.add_argument("--svg", help="histogram SVG path")
    p.add_argument("--log-y", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_pq)

    p = sub.add_parser("oracle", help="recover the target with n+1 energy queries")
    _instance_options(p)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--float", action="store_true", help="query energies as floats in radians")
    p.add_argument("--auto-sign", action="store_true", help="resolve the sign with one extra query")
    p.add_argument("--log", help="write the query log as JSON")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("export-circuit", help="depth-1 QAOA circuit as text")
    _instance_options(p)
    p.add_argument("--beta", type=float, default=math.pi / 4)
    p.add_argument("--gamma", type=float, help="default: trained gamma of the sign convention")
    p.add_argument("--ladder", action="store_true", help="expand multi-Z rotations into CX ladders")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_export_circuit)

    p = sub.add_parser("fig1", help="energy profile and overlap distribution figures")
    _instance_options(p)
    p.add_argument("--out-dir", default=".")
    p.add_argument("--inverse-temperature", type=float)
    p.add_argument("--log-y", action="store_true")
    p.set_defaults(func=cmd_fig1)

    p = sub.add_parser("compare", help="QAOA vs SA vs QA vs classical oracle summary")
    _instance_options(p)
    _sa_options(p)
    p.add_argument("--qa-T", type=float, default=20.0)
    p.add_argument("--qa-steps", type=int, default=4000)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (QsepError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
