"""Command-line front end.

    uqa analyze INSTANCE.json
    uqa grover --n 1024 [--target T] [--shots K --seed S]
    uqa qpe --m 6 --phi 0.265625 [--shots K --seed S]
    uqa verify --suite {spectral,grover,qpe} --trials 50 --seed 7
    uqa resonance --m 6 --phi 0.3 --points 41

JSON outputs are wrapped in a report {"command", "inputs", "outputs", "seed",
"version"} and serialized with sorted keys, so a fixed seed gives identical
bytes. Exit codes: 0 ok, 1 a check failed, 2 bad input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys

import numpy as np

from . import __version__, grover, oracle, phasest, spectral
from .operators import InstanceError, load_instance

log = logging.getLogger("uqa")

EXIT_OK, EXIT_FAIL, EXIT_BAD_INPUT = 0, 1, 2
REPORT_VERSION = "1"
M_RANGE = (2, 12)
QPE_PASS_FRACTION = 0.9


class BadInput(Exception):
    pass


def run_report(command, inputs, outputs, seed=None):
    return {
        "command": command,
        "inputs": inputs,
        "outputs": outputs,
        "seed": seed,
        "version": f"{REPORT_VERSION}/{__version__}",
    }


def dumps(obj):
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _emit(text, out):
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ------------------------------------------------------------------ commands


def cmd_analyze(args):
    try:
        inst = load_instance(args.instance)
    except (OSError, InstanceError) as exc:
        raise BadInput(str(exc)) from exc
    try:
        pred = spectral.predict(inst)
    except ValueError as exc:
        raise BadInput(str(exc)) from exc
    report = run_report("analyze", {"instance": str(args.instance), "n": inst.n, "target": inst.target}, pred.to_dict())
    return report, EXIT_OK


def cmd_grover(args):
    n = args.n
    if n < 3:
        raise BadInput(f"--n must be >= 3, got {n}")
    if n & (n - 1):
        log.warning("n=%d is not a power of two; running anyway with s_t = 1/sqrt(%d)", n, n)
    try:
        spec = grover.GroverSpec(n, args.target)
    except ValueError as exc:
        raise BadInput(str(exc)) from exc
    rng = np.random.default_rng(args.seed)
    res = grover.run_grover(spec, shots=args.shots, rng=rng)
    inputs = {"n": n, "target": args.target, "shots": args.shots}
    return run_report("grover", inputs, res.to_dict(), args.seed), EXIT_OK


def _check_m_phi(m, phi):
    if not M_RANGE[0] <= m <= M_RANGE[1]:
        raise BadInput(f"--m must lie in [{M_RANGE[0]}, {M_RANGE[1]}], got {m}")
    if not 0.0 <= phi < 1.0:
        raise BadInput(f"--phi must lie in [0, 1), got {phi}")


def cmd_qpe(args):
    _check_m_phi(args.m, args.phi)
    cfg = phasest.PhaseEstimationConfig(args.m, args.phi)
    rng = np.random.default_rng(args.seed)
    inputs = {"m": args.m, "phi": args.phi, "shots": args.shots}
    try:
        est = phasest.run_phase_estimation(cfg, shots=args.shots, rng=rng)
    except phasest.EstimationError as exc:
        return run_report("qpe", inputs, {"error": str(exc)}, args.seed), EXIT_FAIL
    out = est.to_dict()
    out["abs_error"] = phasest.circular_error(est.phi_hat, args.phi)
    out["resolution"] = 1.0 / (8 * est.M)
    return run_report("qpe", inputs, out, args.seed), EXIT_OK


def verify_spectral(rng, trials):
    rows = []
    for inst in oracle.in_regime_instances(rng, trials):
        rep = oracle.verify_prediction(inst)
        rows.append(
            {
                "n": inst.n,
                "s_t": inst.s_t,
                "lambda_err": list(rep.lambda_err),
                "lambda_bound": list(rep.lambda_bound),
                "overlap_err": list(rep.overlap_err),
                "overlap_bound": list(rep.overlap_bound),
                "alpha_err": rep.alpha_err,
                "passed": rep.passed,
                "ok": rep.ok,
            }
        )
    ok = len(rows) == trials and all(r["ok"] for r in rows)
    return {"trials": rows, "n_pass": sum(r["ok"] for r in rows), "ok": ok}


def verify_grover(rng, trials):
    rows = []
    for _ in range(trials):
        n = 2 ** int(rng.integers(2, 13))
        t = int(rng.integers(n))
        res = grover.run_grover(grover.GroverSpec(n, t))
        bound = 1.0 - 10.0 / n
        rows.append({**res.to_dict(), "bound": bound, "ok": res.success_probability >= bound})
    return {"trials": rows, "n_pass": sum(r["ok"] for r in rows), "ok": all(r["ok"] for r in rows)}


def verify_qpe(rng, trials, m=6):
    M = 2**m
    rows = []
    for _ in range(trials):
        phi = float(rng.uniform())
        try:
            est = phasest.run_phase_estimation(phasest.PhaseEstimationConfig(m, phi))
            err = phasest.circular_error(est.phi_hat, phi)
            rows.append({"phi": phi, "phi_hat": est.phi_hat, "abs_error": err, "ok": err <= 1.0 / (8 * M) + 1e-12})
        except phasest.EstimationError:
            rows.append({"phi": phi, "phi_hat": None, "abs_error": None, "ok": False})
    n_pass = sum(r["ok"] for r in rows)
    return {"m": m, "trials": rows, "n_pass": n_pass, "ok": n_pass >= QPE_PASS_FRACTION * trials}


SUITES = {"spectral": verify_spectral, "grover": verify_grover, "qpe": verify_qpe}


def cmd_verify(args):
    if args.trials < 1:
        raise BadInput(f"--trials must be >= 1, got {args.trials}")
    rng = np.random.default_rng(args.seed)
    out = SUITES[args.suite](rng, args.trials)
    inputs = {"suite": args.suite, "trials": args.trials}
    return run_report("verify", inputs, out, args.seed), EXIT_OK if out["ok"] else EXIT_FAIL


def cmd_resonance(args):
    _check_m_phi(args.m, args.phi)
    if args.points < 3:
        raise BadInput(f"--points must be >= 3, got {args.points}")
    half = 1.0 / (2 * 2**args.m)
    shifts = np.linspace(-half, half, args.points)
    curve = phasest.resonance_scan(args.m, args.phi, shifts)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["shift", "success"])
    for x, p in curve:
        w.writerow([repr(x), repr(p)])
    return buf.getvalue(), EXIT_OK


# ------------------------------------------------------------------ parser


def build_parser():
    p = argparse.ArgumentParser(prog="uqa", description=__doc__.split("\n")[0])
    p.add_argument("--version", action="version", version=f"uqa {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def with_out(sp):
        sp.add_argument("--out", help="write output to FILE instead of stdout")
        return sp

    a = with_out(sub.add_parser("analyze", help="closed-form prediction for an instance file"))
    a.add_argument("instance")
    a.set_defaults(func=cmd_analyze)

    g = with_out(sub.add_parser("grover", help="run Grover search exactly"))
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--target", type=int, default=0)
    g.add_argument("--shots", type=int)
    g.add_argument("--seed", type=int, default=0)
    g.set_defaults(func=cmd_grover)

    q = with_out(sub.add_parser("qpe", help="four-run phase estimation"))
    q.add_argument("--m", type=int, required=True)
    q.add_argument("--phi", type=float, required=True)
    q.add_argument("--shots", type=int)
    q.add_argument("--seed", type=int, default=0)
    q.set_defaults(func=cmd_qpe)

    v = with_out(sub.add_parser("verify", help="batch checks against the exact oracle"))
    v.add_argument("--suite", choices=sorted(SUITES), required=True)
    v.add_argument("--trials", type=int, default=50)
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=cmd_verify)

    r = with_out(sub.add_parser("resonance", help="success against applied phase shift, as CSV"))
    r.add_argument("--m", type=int, required=True)
    r.add_argument("--phi", type=float, required=True)
    r.add_argument("--points", type=int, default=41)
    r.set_defaults(func=cmd_resonance)
    return p


def main(argv=None):
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_BAD_INPUT if exc.code else EXIT_OK
    try:
        result, code = args.func(args)
    except BadInput as exc:
        log.error("%s", exc)
        return EXIT_BAD_INPUT
    _emit(result if isinstance(result, str) else dumps(result), args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
