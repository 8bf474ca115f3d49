"""``ttproj`` command line.

Subcommands
-----------
bench    run the seeded random-pair experiment, write CSV/JSON
project  project one ``t3d`` tensor onto the tangent cone at another
eta      dump the alternating-objective trace of one experiment pair

Exit codes: 0 success, 2 configuration or input error, 3 numerical failure.
"""

import argparse
import csv
import json
import logging
import sys

from . import __version__
from .bench import ExperimentConfig, generate_pair, run_experiment
from .estimator import TangentConeProjector
from .exceptions import NumericalError, RankDeficientError, TTProjError, ZeroTensorError
from .io import emit_csv, emit_json, load_tensor, store_tensor
from .projection import angle_value, approx_project, kutschan_omega
from .tensor3 import norm

log = logging.getLogger("ttproj")

EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _add_experiment_args(p):
    p.add_argument("--n", nargs=3, type=int, default=[5, 5, 5], metavar=("N1", "N2", "N3"))
    p.add_argument("--r", nargs=2, type=int, default=[2, 2], metavar=("R1", "R2"),
                   help="TT-rank of the random base points")
    p.add_argument("--k", nargs=2, type=int, default=[3, 3], metavar=("K1", "K2"),
                   help="TT-rank bound of the variety")
    p.add_argument("--pairs", type=int, default=50)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--eps", type=float, default=1e-16)
    p.add_argument("--imax", type=int, default=10)


def _config(args, **overrides):
    fields = dict(
        dims=tuple(args.n), true_rank=tuple(args.r), bound_rank=tuple(args.k),
        n_pairs=args.pairs, seed=args.seed, eps=args.eps, i_max=args.imax,
    )
    fields.update(overrides)
    return ExperimentConfig(**fields).validate()


def cmd_bench(args):
    cfg = _config(
        args, oracle=args.oracle, oracle_max_iter=args.oracle_imax, timing=not args.no_timing,
        jobs=args.jobs, eta_pair=args.eta_pair, csv_path=args.csv, json_path=args.json,
    )
    records, summary = run_experiment(cfg)
    if cfg.csv_path:
        emit_csv(records, cfg.csv_path)
    if cfg.json_path:
        emit_json(summary, cfg.json_path)
    a = summary["angle_approx"]
    print(f"pairs={len(records)} angle_approx min={a['min']:.6f} median={a['median']:.6f} "
          f"max={a['max']:.6f}")
    if summary["angle_oracle"] is not None:
        o = summary["angle_oracle"]
        print(f"angle_oracle min={o['min']:.6f} median={o['median']:.6f} max={o['max']:.6f}")
    om = summary["omega"]
    print(f"omega eq4={om['eq4']:.6f} s4={om['s4']:.6f} kutschan={om['kutschan']:.6f}")
    return 0


def cmd_project(args):
    X = load_tensor(args.x)
    Y = load_tensor(args.y)
    proj = TangentConeProjector(rank_bound=tuple(args.k), eps=args.eps, max_iter=args.imax,
                                rank_tol=args.rank_tol).fit(X)
    res = proj.project(Y)
    if args.out:
        store_tensor(res.y_tilde, args.out)
    out = {
        "tt_rank": list(proj.tt_rank_),
        "angle": angle_value(Y, res.y_tilde),
        "norm_y": norm(Y),
        "norm_ytilde": res.norm,
        "tangent_space_norm": res.tangent_space_norm,
        "omega_eq4": res.omega,
        "omega_kutschan": kutschan_omega(proj.dims_),
        "iterations": res.iterations,
        "branch": res.branch,
        "eta_trace": [float(v) for v in res.eta_trace],
    }
    print(json.dumps(out, indent=2))
    return 0


def cmd_eta(args):
    cfg = _config(args, oracle="none", n_pairs=max(args.pairs, args.pair + 1))
    X, Y = generate_pair(cfg, args.pair)
    res = approx_project(Y, X, cfg.bound_rank, eps=cfg.eps, i_max=cfg.i_max)
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["iteration", "eta_new", "eta_increment"])
        prev = 0.0
        for i, eta in enumerate(res.eta_trace, start=1):
            writer.writerow([i, repr(float(eta)), repr(float(eta - prev))])
            prev = eta
    finally:
        if args.out:
            fh.close()
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ttproj",
        description="Approximate projection onto the tangent cone of bounded TT-rank tensors.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bench", help="random-pair experiment")
    _add_experiment_args(p)
    p.add_argument("--oracle", default="multistart:100",
                   help="multistart:N, grid:RESOLUTION or none (default: %(default)s)")
    p.add_argument("--oracle-imax", type=int, default=500,
                   help="iteration cap per multistart run")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--eta-pair", type=int, default=0,
                   help="pair whose eta trace goes into the JSON summary")
    p.add_argument("--no-timing", action="store_true",
                   help="leave wall_ms empty so output files are byte-reproducible")
    p.add_argument("--csv")
    p.add_argument("--json")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("project", help="project one tensor")
    p.add_argument("--x", required=True, help="base point, t3d file")
    p.add_argument("--y", required=True, help="tensor to project, t3d file")
    p.add_argument("--k", nargs=2, type=int, required=True, metavar=("K1", "K2"))
    p.add_argument("--eps", type=float, default=1e-16)
    p.add_argument("--imax", type=int, default=10)
    p.add_argument("--rank-tol", type=float, default=1e-10)
    p.add_argument("--out", help="write the projection to this t3d file")
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("eta", help="eta trace of one experiment pair")
    _add_experiment_args(p)
    p.add_argument("--pair", type=int, required=True)
    p.add_argument("--out", help="CSV file (default: stdout)")
    p.set_defaults(func=cmd_eta)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (NumericalError, ZeroTensorError, RankDeficientError) as exc:
        log.error("numerical failure: %s", exc)
        print(f"ttproj: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (TTProjError, OSError, ValueError) as exc:
        print(f"ttproj: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
