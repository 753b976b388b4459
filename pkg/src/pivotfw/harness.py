"""Experiment harness: instance generators, CSV logging and the CLI.

CSV schema (fixed):
    iter,primal,fw_gap,active_set_size,pre_cleanup_size,step_kind,wall_time_ns,reconstruction_residual
Plain runs leave pre_cleanup_size empty. A sibling `<out>.meta` file
echoes the configuration as key=value lines.
"""

import argparse
import sys
from dataclasses import dataclass

import numpy as np

from . import fw_core, pivot
from .geometry import L1Ball, Simplex, parse_region, _parse_kv
from .identification import identification_monitor
from .linalg import SingularMatrix
from .objectives import LeastSquares, Logistic, Quadratic, StepRule
from .pivot import NoNegativeEntry, ReconstructionDrift

CSV_HEADER = (
    "iter,primal,fw_gap,active_set_size,pre_cleanup_size,"
    "step_kind,wall_time_ns,reconstruction_residual"
)


@dataclass
class ExperimentConfig:
    algorithm: str
    region_spec: str
    objective_spec: str
    step_rule: str
    max_iter: int
    gap_tol: float
    seed: int
    out: str
    debug_checks: bool = False
    identify_face: str | None = None


def gen_signal_recovery(m, n, sparsity_frac, tau_f, seed):
    """Gaussian sensing matrix, planted sparse signal, noisy observations."""
    if not (n > m >= 1) or not (0.0 < sparsity_frac < 1.0):
        raise ValueError("need n > m >= 1 and sparsity_frac in (0, 1)")
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((m, n))
    nnz = int(np.floor(sparsity_frac * n))
    support = rng.choice(n, size=nnz, replace=False)
    x_true = np.zeros(n)
    x_true[support] = rng.standard_normal(nnz)
    y = A @ x_true + rng.standard_normal(m)
    tau = float(np.abs(x_true).sum()) / tau_f
    return L1Ball(n, tau), LeastSquares(A, y), x_true


def gen_logistic(m, n, seed, planted_nnz=None, flip_frac=0.1):
    """Gaussian features, labels from a planted sparse separator with flips."""
    if m < 1 or n < 1:
        raise ValueError("need m, n >= 1")
    rng = np.random.default_rng(seed)
    features = rng.standard_normal((m, n))
    if planted_nnz is None:
        planted_nnz = max(1, n // 10)
    w = np.zeros(n)
    support = rng.choice(n, size=planted_nnz, replace=False)
    w[support] = rng.standard_normal(planted_nnz)
    labels = np.where(features @ w >= 0, 1.0, -1.0)
    flips = rng.random(m) < flip_frac
    labels[flips] *= -1.0
    return features, labels, w


def gen_face_instance(n, face_dim, seed):
    """Quadratic over the simplex whose minimizer sits inside a face.

    Returns (region, objective, face coordinate set, x_star). Every
    positive coordinate of the target gets at least 0.05 mass so the
    optimum is safely in the relative interior of the face.
    """
    k = face_dim + 1
    if not (1 <= k <= n):
        raise ValueError("need 1 <= face_dim + 1 <= n")
    if 0.05 * k > 1.0:
        raise ValueError("face too large for the 0.05 mass floor")
    rng = np.random.default_rng(seed)
    coords = np.sort(rng.choice(n, size=k, replace=False))
    u = rng.uniform(1.0, 2.0, size=k)
    p = np.zeros(n)
    p[coords] = 0.05 + (u / u.sum()) * (1.0 - 0.05 * k)
    return Simplex(n), Quadratic(p), frozenset(int(i) for i in coords), p


def parse_objective(spec, region=None, seed=0):
    """Build an objective (and maybe replace the region) from a spec string."""
    if ":" not in spec:
        raise ValueError(f"malformed objective spec {spec!r}")
    kind, body = spec.split(":", 1)
    params = _parse_kv(body)
    if kind == "lstsq":
        data = np.loadtxt(params["file"], delimiter=",", ndmin=2)
        return LeastSquares(data[:, :-1], data[:, -1]), region
    if kind == "logistic":
        data = np.loadtxt(params["file"], delimiter=",", ndmin=2)
        return Logistic(data[:, :-1], data[:, -1]), region
    if kind == "quadratic-simplex":
        n = int(params["n"])
        instance_seed = int(params.get("seed", seed))
        face_dim = int(params.get("facedim", n - 1))
        simplex, objective, _, _ = gen_face_instance(n, face_dim, instance_seed)
        if region is not None and (
            region.kind != "simplex" or region.ambient_dim != n
        ):
            raise ValueError("quadratic-simplex objective needs region simplex:n=%d" % n)
        return objective, simplex
    raise ValueError(f"unknown objective kind {kind!r}")


def _fmt(x):
    return repr(float(x))


def write_csv(path, records):
    lines = [CSV_HEADER]
    for r in records:
        pre = "" if r.pre_cleanup_size is None else str(r.pre_cleanup_size)
        lines.append(
            f"{r.iter},{_fmt(r.primal)},{_fmt(r.fw_gap)},{r.active_set_size},"
            f"{pre},{r.step_kind},{r.wall_time_ns},{_fmt(r.reconstruction_residual)}"
        )
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def write_meta(path, config, extra=None):
    items = {
        "algorithm": config.algorithm,
        "region": config.region_spec,
        "objective": config.objective_spec,
        "step_rule": config.step_rule,
        "max_iter": config.max_iter,
        "gap_tol": config.gap_tol,
        "seed": config.seed,
        "debug_checks": config.debug_checks,
    }
    if config.identify_face is not None:
        items["identify_face"] = config.identify_face
    if extra:
        items.update(extra)
    with open(path, "w") as fh:
        for k, v in items.items():
            fh.write(f"{k}={v}\n")


def run_experiment(config):
    """Run one configured experiment, write CSV and meta, return trajectory."""
    region = parse_region(config.region_spec)
    objective, maybe_region = parse_objective(
        config.objective_spec, region=region, seed=config.seed
    )
    if maybe_region is not None:
        region = maybe_region
    rule = StepRule.parse(config.step_rule)
    if config.algorithm.startswith("p-"):
        traj = pivot.run_pm(
            config.algorithm[2:], region, objective, rule,
            config.max_iter, config.gap_tol, debug=config.debug_checks,
        )
    else:
        traj = fw_core.run_plain(
            config.algorithm, region, objective, rule,
            config.max_iter, config.gap_tol,
        )
    write_csv(config.out, traj.records)
    extra = {}
    if config.identify_face is not None:
        face = [int(i) for i in config.identify_face.split(",") if i != ""]
        summary = identification_monitor(traj, region, face)
        extra = {
            "identify_achieved": summary.achieved,
            "identify_R": summary.R,
            "identify_max_size_after_R": summary.max_size_after_R,
        }
    write_meta(config.out + ".meta", config, extra)
    return traj


ALGORITHMS = ("fw", "afw", "bpfw", "p-fw", "p-afw", "p-bpfw")


def _build_parser():
    parser = argparse.ArgumentParser(prog="pivotfw")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run one experiment and log a CSV")
    run.add_argument("--alg", required=True, choices=ALGORITHMS)
    run.add_argument("--region", required=True)
    run.add_argument("--objective", required=True)
    run.add_argument("--step", default="line-search")
    run.add_argument("--max-iter", type=int, default=1000)
    run.add_argument("--gap-tol", type=float, default=0.0)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--out", required=True)
    run.add_argument("--debug-check", action="store_true")
    run.add_argument("--identify", default=None, metavar="face=<indices>")
    gen = sub.add_parser("gen", help="write a synthetic instance CSV")
    gen.add_argument("--kind", required=True, choices=("signal", "logistic"))
    gen.add_argument("--m", type=int, required=True)
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--sparsity", type=float, default=0.3)
    gen.add_argument("--tauf", type=float, default=20.0)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True)
    return parser


def _cmd_run(args):
    identify_face = None
    if args.identify is not None:
        if not args.identify.startswith("face="):
            raise ValueError("--identify expects face=<comma-separated indices>")
        identify_face = args.identify[len("face="):]
    config = ExperimentConfig(
        algorithm=args.alg,
        region_spec=args.region,
        objective_spec=args.objective,
        step_rule=args.step,
        max_iter=args.max_iter,
        gap_tol=args.gap_tol,
        seed=args.seed,
        out=args.out,
        debug_checks=args.debug_check,
        identify_face=identify_face,
    )
    if config.max_iter < 0 or config.gap_tol < 0:
        raise ValueError("budget parameters must be nonnegative")
    run_experiment(config)
    return 0


def _cmd_gen(args):
    if args.kind == "signal":
        region, objective, x_true = gen_signal_recovery(
            args.m, args.n, args.sparsity, args.tauf, args.seed
        )
        data = np.hstack([objective.A, objective.y[:, None]])
        np.savetxt(args.out, data, delimiter=",")
        print(f"wrote {args.out}; region spec: l1:n={args.n},tau={region.tau!r}")
    else:
        features, labels, _ = gen_logistic(args.m, args.n, args.seed)
        data = np.hstack([features, labels[:, None]])
        np.savetxt(args.out, data, delimiter=",")
        print(f"wrote {args.out}")
    return 0


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    try:
        if args.command == "run":
            return _cmd_run(args)
        return _cmd_gen(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 1
    except (NoNegativeEntry, ReconstructionDrift, SingularMatrix) as exc:
        print(f"numerical abort: {exc}", file=sys.stderr)
        return 2


def main_entry():
    raise SystemExit(main())
