"""Command-line surface: seeded, file-based runs of every design generator.

Every command writes a CSV payload plus a JSON metadata sidecar carrying the
command, its flags, the seed, and library versions, and is a pure function of
those inputs: rerunning with identical flags and seed reproduces the output
files byte for byte.  Candidate sets come either from a CSV file with header
x1,...,xd or from --grid m, which builds the m^d lattice of cell centers
(i - 0.5) / m over the unit cube.
"""

import argparse
import csv
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .kernel_spectral import CandidateSet, KernelSpec, build_kernel_matrix, \
    KernelError
from .dpp_sampler import Design, SamplerError, sample_fixed_rank_dpp
from .emulator import SequentialState, emulate_design, sequential_design
from .baselines import fedorov_exchange, lhs_design, random_design
from .diagnostics import csr_k, default_reference_grid, f_function, \
    g_function, ripley_k
from .sgd_design import SgdConfig, mse_ratio_experiment

PAPER_BATCH_SIZES = (23, 43, 63, 83)
KERNEL_NAMES = {"gaussian": "gaussian_iso", "gaussian_iso": "gaussian_iso",
                "exponential": "exponential_l1", "exponential_l1": "exponential_l1"}


@dataclass
class RunConfig:
    """Everything a run needs to be reproduced: command, flags, seed, paths."""

    command: str
    flags: dict
    seed: int
    out: str


def _jsonify(value):
    if isinstance(value, dict):
        return {str(k): _jsonify(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonify(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_jsonify(v) for v in value.tolist()]
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    return value


def run_config_from_args(args):
    skip = {"func", "command"}
    flags = {k: _jsonify(v) for k, v in sorted(vars(args).items())
             if k not in skip}
    return RunConfig(args.command, flags, getattr(args, "seed", 0),
                     getattr(args, "out", ""))


def write_metadata(cfg, extra):
    meta = {
        "command": cfg.command,
        "flags": cfg.flags,
        "seed": cfg.seed,
        "versions": {
            "dppdesign": __version__,
            "numpy": np.__version__,
            "scipy": scipy.__version__,
        },
    }
    meta.update(_jsonify(extra))
    path = Path(cfg.out + ".json")
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(meta, sort_keys=True, indent=2) + "\n")


def _fmt(x):
    return format(float(x), ".17g")


def write_rows_csv(out, header, rows):
    path = Path(out + ".csv")
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [",".join(header)]
    lines.extend(",".join(row) for row in rows)
    path.write_text("\n".join(lines) + "\n")


def write_design_csv(out, design):
    d = design.coords.shape[1]
    header = ["index"] + ["x%d" % (k + 1) for k in range(d)]
    rows = [[str(int(i))] + [_fmt(c) for c in xs]
            for i, xs in zip(design.indices, design.coords)]
    write_rows_csv(out, header, rows)


def lattice_candidates(m, d):
    if m < 1 or d < 1:
        raise ValueError("grid needs m >= 1 and d >= 1")
    axis = (np.arange(m) + 0.5) / m
    mesh = np.meshgrid(*([axis] * d), indexing="ij")
    pts = np.stack([mm.ravel() for mm in mesh], axis=1)
    return CandidateSet(pts)


def load_candidates(path):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        expected = ["x%d" % (k + 1) for k in range(len(header))]
        if [h.strip() for h in header] != expected:
            raise ValueError("candidate file %s must have header x1,...,xd" % path)
        pts = np.array([[float(v) for v in row] for row in reader])
    return CandidateSet(pts)


def load_design_csv(path):
    """Read a design file; returns (ids or None, coords)."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = [h.strip() for h in next(reader)]
        rows = list(reader)
    if header and header[0] == "index":
        ids = np.array([int(r[0]) for r in rows])
        coords = np.array([[float(v) for v in r[1:]] for r in rows])
        return ids, coords
    expected = ["x%d" % (k + 1) for k in range(len(header))]
    if header != expected:
        raise ValueError("design file %s must have header index,x1,...,xd "
                         "or x1,...,xd" % path)
    coords = np.array([[float(v) for v in r] for r in rows])
    return None, coords


def candidates_from_args(args):
    if args.candidates is not None:
        return load_candidates(args.candidates)
    return lattice_candidates(args.grid, args.d)


def kernel_from_args(args, parser, rho=None):
    rho = args.rho if rho is None else rho
    if rho is None:
        parser.error("--rho is required for this command")
    return KernelSpec(KERNEL_NAMES[args.kernel], float(rho),
                      float(args.nugget))


def _parse_float_list(text, flag, parser):
    try:
        return [float(v) for v in text.split(",") if v.strip() != ""]
    except ValueError:
        parser.error("%s expects a comma-separated list of numbers" % flag)


def _parse_int_list(text, flag, parser):
    try:
        return [int(v) for v in text.split(",") if v.strip() != ""]
    except ValueError:
        parser.error("%s expects a comma-separated list of integers" % flag)


# ---------------------------------------------------------------- commands

def cmd_emulate(args, parser):
    cand = candidates_from_args(args)
    spec = kernel_from_args(args, parser)
    K = build_kernel_matrix(cand, spec)
    design = emulate_design(K, args.n, tie_rng=np.random.default_rng(args.seed))
    write_design_csv(args.out, design)
    cfg = run_config_from_args(args)
    write_metadata(cfg, {"n": design.n, "log_det": design.meta["log_det"],
                         "provenance": design.provenance})
    return 0


def cmd_sample(args, parser):
    cand = candidates_from_args(args)
    spec = kernel_from_args(args, parser)
    K = build_kernel_matrix(cand, spec)
    design = sample_fixed_rank_dpp(K, args.n, np.random.default_rng(args.seed))
    from .dpp_sampler import dpp_log_pmf
    log_det = dpp_log_pmf(K, design.indices)
    write_design_csv(args.out, design)
    cfg = run_config_from_args(args)
    write_metadata(cfg, {"n": design.n, "log_det": log_det,
                         "provenance": design.provenance})
    return 0


def cmd_sequential(args, parser):
    cand = candidates_from_args(args)
    sizes = _parse_int_list(args.batch_sizes, "--batch-sizes", parser)
    rhos = _parse_float_list(args.rho_schedule, "--rho-schedule", parser)
    if len(sizes) != len(rhos):
        parser.error("--batch-sizes and --rho-schedule must have the same "
                     "number of entries")
    existing = None
    if args.existing is not None:
        ids, coords = load_design_csv(args.existing)
        if ids is None:
            raise ValueError("--existing file needs an index column tying it "
                             "to the candidate set")
        if ids.min() < 0 or ids.max() >= cand.n_points:
            raise ValueError("--existing indices fall outside the candidate set")
        if np.max(np.abs(cand.points[ids] - coords)) > 1e-9:
            raise ValueError("--existing coordinates do not match the "
                             "candidate set at the stated indices")
        existing = Design(ids, cand.points[ids], ids.size, "sequential")
    spec = KernelSpec(KERNEL_NAMES[args.kernel], rhos[0], float(args.nugget))
    K = build_kernel_matrix(cand, spec)
    state = SequentialState(existing=existing, rho_schedule=tuple(rhos),
                            batch_sizes=tuple(sizes))
    design = sequential_design(K, state, enforce_projection=args.no_collapse,
                               tie_rng=np.random.default_rng(args.seed))
    write_design_csv(args.out, design)
    cfg = run_config_from_args(args)
    write_metadata(cfg, {"n": design.n, "provenance": design.provenance,
                         **design.meta})
    return 0


def cmd_exchange(args, parser):
    cand = candidates_from_args(args)
    spec = kernel_from_args(args, parser)
    K = build_kernel_matrix(cand, spec)
    design = fedorov_exchange(K, args.n, args.iters,
                              np.random.default_rng(args.seed))
    write_design_csv(args.out, design)
    cfg = run_config_from_args(args)
    write_metadata(cfg, {"n": design.n, "log_det": design.meta["log_det"],
                         "iters": args.iters, "provenance": design.provenance})
    return 0


def cmd_lhs(args, parser):
    design = lhs_design(args.n, args.d, args.placement,
                        np.random.default_rng(args.seed))
    header = ["index"] + ["x%d" % (k + 1) for k in range(args.d)]
    rows = [[str(i)] + [_fmt(c) for c in design.points[i]]
            for i in range(args.n)]
    write_rows_csv(args.out, header, rows)
    cfg = run_config_from_args(args)
    write_metadata(cfg, {"n": args.n, "d": args.d,
                         "placement": args.placement, "provenance": "lhs"})
    return 0


def cmd_random(args, parser):
    cand = candidates_from_args(args)
    design = random_design(cand, args.n, np.random.default_rng(args.seed))
    write_design_csv(args.out, design)
    cfg = run_config_from_args(args)
    write_metadata(cfg, {"n": design.n, "provenance": design.provenance})
    return 0


def cmd_diagnose(args, parser):
    _, coords = load_design_csv(args.design)
    n, d = coords.shape
    extra = {"n": n, "d": d, "stat": args.stat}
    if args.stat in ("F", "G", "FG"):
        h = np.linspace(0.0, args.h_max, args.h_steps + 1)
        per_dim = args.ref_per_dim
        reference = (default_reference_grid(n, d) if per_dim is None else
                     lattice_candidates(per_dim, d).points)
        cols, header = [], []
        header.append("h")
        cols.append([_fmt(v) for v in h])
        if args.stat in ("F", "FG"):
            header.append("f_hat")
            cols.append([_fmt(v) for v in f_function(coords, reference, h)])
        if args.stat in ("G", "FG"):
            header.append("g_hat")
            cols.append([_fmt(v) for v in g_function(coords, h)])
        rows = [list(r) for r in zip(*cols)]
        extra["reference_points"] = reference.shape[0]
    else:
        r = np.linspace(0.0, args.r_max, args.r_steps + 1)
        k_hat = ripley_k(coords, 1.0, r,
                         translation_correction=args.translation_correction)
        k_ref = csr_k(r, d)
        header = ["r", "k_hat", "k_csr"]
        rows = [[_fmt(a), _fmt(b), _fmt(c)] for a, b, c in zip(r, k_hat, k_ref)]
    write_rows_csv(args.out, header, rows)
    cfg = run_config_from_args(args)
    write_metadata(cfg, extra)
    return 0


def cmd_sgd_demo(args, parser):
    if args.batchsize == "all":
        sizes = PAPER_BATCH_SIZES
    else:
        try:
            sizes = (int(args.batchsize),)
        except ValueError:
            parser.error("--batchsize expects an integer or 'all'")
    config = SgdConfig(batchsize=sizes[0], epochs=args.epochs,
                       replicates=args.replicates)
    table = mse_ratio_experiment(config, batchsizes=sizes, seed=args.seed,
                                 design_rho=args.rho)
    header = ["batchsize"] + ["beta%d" % j for j in range(1, 6)]
    rows = [[str(bs)] + [_fmt(v) for v in table[i]]
            for i, bs in enumerate(sizes)]
    write_rows_csv(args.out, header, rows)
    cfg = run_config_from_args(args)
    write_metadata(cfg, {"batchsizes": list(sizes), "epochs": args.epochs,
                         "replicates": args.replicates, "design_rho": args.rho})
    return 0


# ------------------------------------------------------------------ parser

def build_parser():
    parser = argparse.ArgumentParser(
        prog="dppdesign",
        description="Entropy-optimal experimental designs on discrete "
                    "candidate sets via fixed-rank determinantal sampling.")
    sub = parser.add_subparsers(dest="command", required=True)

    cand = argparse.ArgumentParser(add_help=False)
    src = cand.add_mutually_exclusive_group(required=True)
    src.add_argument("--candidates", metavar="CSV",
                     help="candidate file with header x1,...,xd")
    src.add_argument("--grid", type=int, metavar="M",
                     help="use the M^d lattice of cell centers (i - 0.5) / M")
    cand.add_argument("--d", type=int, default=2,
                      help="dimension of the --grid lattice (default 2)")

    kern = argparse.ArgumentParser(add_help=False)
    kern.add_argument("--kernel", choices=sorted(KERNEL_NAMES),
                      default="gaussian", help="correlation family")
    kern.add_argument("--rho", type=float, default=None,
                      help="correlation parameter in (0, 1)")
    kern.add_argument("--nugget", type=float, default=0.0,
                      help="diagonal jitter (default 0)")

    out = argparse.ArgumentParser(add_help=False)
    out.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    out.add_argument("--out", required=True, metavar="PREFIX",
                     help="output prefix; writes PREFIX.csv and PREFIX.json")

    p = sub.add_parser("emulate", parents=[cand, kern, out],
                       help="deterministic greedy design (mode emulation)")
    p.add_argument("--n", type=int, required=True, help="design size")
    p.set_defaults(func=cmd_emulate)

    p = sub.add_parser("sample", parents=[cand, kern, out],
                       help="random fixed-rank determinantal draw")
    p.add_argument("--n", type=int, required=True, help="design size")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("sequential", parents=[cand, kern, out],
                       help="batch-sequential design with per-batch rho")
    p.add_argument("--batch-sizes", required=True,
                   help="comma-separated batch sizes, e.g. 3,3,3,3")
    p.add_argument("--rho-schedule", required=True,
                   help="comma-separated rho per batch, e.g. 1e-10,1e-5,1e-3,1e-3")
    p.add_argument("--existing", metavar="CSV",
                   help="design file (with index column) to grow from")
    p.add_argument("--no-collapse", action="store_true",
                   help="forbid shared coordinate values in any dimension")
    p.set_defaults(func=cmd_sequential)

    p = sub.add_parser("exchange", parents=[cand, kern, out],
                       help="exchange-algorithm determinant maximization")
    p.add_argument("--n", type=int, required=True, help="design size")
    p.add_argument("--iters", type=int, default=20000,
                   help="exchange iterations (default 20000)")
    p.set_defaults(func=cmd_exchange)

    p = sub.add_parser("lhs", parents=[out],
                       help="Latin hypercube design")
    p.add_argument("--n", type=int, required=True, help="number of points")
    p.add_argument("--d", type=int, default=2, help="dimension (default 2)")
    p.add_argument("--placement", choices=("centroid", "uniform"),
                   default="centroid", help="point placement within bins")
    p.set_defaults(func=cmd_lhs)

    p = sub.add_parser("random", parents=[cand, out],
                       help="uniform random design")
    p.add_argument("--n", type=int, required=True, help="design size")
    p.set_defaults(func=cmd_random)

    p = sub.add_parser("diagnose", parents=[out],
                       help="point-pattern statistics of a design file")
    p.add_argument("--design", required=True, metavar="CSV",
                   help="design file (index,x1,...,xd or x1,...,xd)")
    p.add_argument("--stat", choices=("F", "G", "K", "FG"), default="FG",
                   help="which statistic to write (default FG)")
    p.add_argument("--h-max", type=float, default=0.5,
                   help="largest h for F/G (default 0.5)")
    p.add_argument("--h-steps", type=int, default=50,
                   help="number of h steps (default 50)")
    p.add_argument("--r-max", type=float, default=0.3,
                   help="largest r for K (default 0.3)")
    p.add_argument("--r-steps", type=int, default=30,
                   help="number of r steps (default 30)")
    p.add_argument("--ref-per-dim", type=int, default=None,
                   help="reference grid resolution for F "
                        "(default ceil(sqrt(n)) per dimension)")
    p.add_argument("--translation-correction", action="store_true",
                   help="apply the translation edge correction to K")
    p.set_defaults(func=cmd_diagnose)

    p = sub.add_parser("sgd-demo", parents=[out],
                       help="designed-vs-random mini-batch SGD comparison")
    p.add_argument("--batchsize", default="23",
                   help="batch size, or 'all' for %s" % (PAPER_BATCH_SIZES,))
    p.add_argument("--epochs", type=int, default=200,
                   help="SGD epochs (default 200)")
    p.add_argument("--replicates", type=int, default=20,
                   help="replicates per batch size (default 20)")
    p.add_argument("--rho", type=float, default=0.01,
                   help="kernel rho for designed batches (default 0.01)")
    p.set_defaults(func=cmd_sgd_demo)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except (ValueError, KernelError, SamplerError, IndexError, OSError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
