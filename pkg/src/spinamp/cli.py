"""Command-line front end.

Every experiment in the package is reachable as a subcommand producing a
deterministic CSV or JSON artifact.  Exit codes: 0 success, 1 numeric or
assertion failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Optional

import numpy as np

from . import __version__
from .algebra import (
    DENSE_CAP,
    BitConfig,
    SpinChainError,
    realize_dense,
)
from .automaton import ca_vs_hamiltonian_report
from .chains import (
    CouplingProfile,
    StarLayout,
    cluster_chain,
    exchange_chain,
    spike_hamiltonians,
    star_hamiltonian,
)
from .evolution import (
    Propagator,
    amplification_check,
    max_fidelity_scan,
    pst_time,
    transfer_fidelity,
)
from .io import format_number, header_lines, parse_time, render_csv, write_text_atomic
from .maps import conjugate_hamiltonian, gamma_matrix
from .noise import NoiseConfig, TransferTask, noise_sweep

EXIT_OK = 0
EXIT_NUMERIC = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


class NumericFailure(Exception):
    pass


def _profile(kind: str, n_sites: int) -> CouplingProfile:
    if kind == "uniform":
        return CouplingProfile.uniform(n_sites)
    if kind == "engineered":
        return CouplingProfile.engineered(n_sites)
    raise UsageError(f"unknown profile kind {kind!r}")


def _hamiltonian(family: str, profile: CouplingProfile):
    if family == "cluster":
        return cluster_chain(profile)
    if family == "exchange":
        return exchange_chain(profile)
    raise UsageError(f"unknown Hamiltonian family {family!r}")


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        write_text_atomic(out, text)
    else:
        sys.stdout.write(text)


def _json_doc(config: dict, payload: dict) -> str:
    doc = {"spinamp_version": __version__, "config": config, "result": payload}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


# -- subcommands ----------------------------------------------------------


def cmd_verify_equivalence(args) -> int:
    if args.n_max > DENSE_CAP:
        raise UsageError(f"N up to {args.n_max} exceeds the dense cap {DENSE_CAP}")
    if args.n_min < 2 or args.n_min > args.n_max:
        raise UsageError("need 2 <= n-min <= n-max")
    rng = np.random.default_rng(args.seed)
    failures = []
    lines = []
    for n in range(args.n_min, args.n_max + 1):
        worst = 0.0
        for _ in range(args.profiles):
            couplings = tuple(rng.uniform(0.2, 2.0, n - 1))
            fields = tuple(rng.uniform(-1.0, 1.0, n))
            profile = CouplingProfile(n, couplings, fields)
            h_ex = exchange_chain(profile)
            h_cluster = cluster_chain(profile)
            if args.corrupt:
                bad = CouplingProfile(n, tuple(1.01 * j for j in couplings), fields)
                h_cluster = cluster_chain(bad)
            conjugated = conjugate_hamiltonian(h_ex)
            if conjugated.term_map() != h_cluster.term_map():
                extra = set(conjugated.term_map().items()) ^ set(h_cluster.term_map().items())
                failures.append(f"N={n}: symbolic mismatch on terms {sorted(extra)}")
                continue
            gamma = gamma_matrix(n)
            dense_dev = float(np.max(np.abs(
                gamma @ realize_dense(h_ex) @ gamma.T - realize_dense(h_cluster)
            )))
            worst = max(worst, dense_dev)
            if dense_dev >= args.tol:
                failures.append(f"N={n}: dense deviation {dense_dev:.3e} >= {args.tol}")
        lines.append(f"N={n}: max dense deviation {format_number(worst)}")
    report = "\n".join(lines) + "\n"
    if failures:
        report += "\n".join(failures) + "\n"
        _emit(report, args.out)
        return EXIT_NUMERIC
    _emit(report, args.out)
    return EXIT_OK


def cmd_amplify(args) -> int:
    if args.n is None:
        raise UsageError("--n is required (flag or config)")
    profile = _profile(args.profile, args.n)
    prop = Propagator(cluster_chain(profile))
    t = parse_time(args.time) if args.time else pst_time(args.n)
    alpha = 1.0 / math.sqrt(2.0) if args.alpha is None else args.alpha
    beta = math.sqrt(max(0.0, 1.0 - alpha * alpha)) if args.beta is None else args.beta
    result = amplification_check(prop, alpha, beta, t)
    config = {"n": args.n, "profile": args.profile, "t": t,
              "alpha": alpha, "beta": beta, "seed": args.seed}
    _emit(_json_doc(config, {
        "fidelity": result.fidelity,
        "fid0": result.fid0,
        "fid1": result.fid1,
        "phase": result.phase,
    }), args.out)
    return EXIT_OK


def cmd_transfer(args) -> int:
    if args.n is None:
        raise UsageError("--n is required (flag or config)")
    if not args.source or not args.target:
        raise UsageError("--source and --target are required")
    profile = _profile(args.profile, args.n)
    prop = Propagator(_hamiltonian(args.family, profile))
    t = parse_time(args.time) if args.time else pst_time(args.n)
    source = BitConfig.from_string(args.source)
    target = BitConfig.from_string(args.target)
    if source.n_sites != args.n or target.n_sites != args.n:
        raise UsageError("source/target configs must have N bits")
    fid = transfer_fidelity(prop, source, target, t)
    config = {"n": args.n, "profile": args.profile, "family": args.family,
              "source": str(source), "target": str(target), "t": t}
    _emit(_json_doc(config, {"fidelity": fid}), args.out)
    return EXIT_OK


def cmd_scan(args) -> int:
    if args.n is None:
        raise UsageError("--n is required (flag or config)")
    if not args.source or not args.target:
        raise UsageError("--source and --target are required")
    profile = _profile(args.profile, args.n)
    prop = Propagator(_hamiltonian(args.family, profile))
    source = BitConfig.from_string(args.source)
    target = BitConfig.from_string(args.target)
    if source.n_sites != args.n or target.n_sites != args.n:
        raise UsageError("source/target configs must have N bits")
    t_star, f_star = max_fidelity_scan(prop, source, target,
                                       t_max=args.t_max, grid_step=args.grid_step)
    ts = np.arange(0.0, args.t_max + 0.5 * args.grid_step, args.grid_step)
    rows = [(t, transfer_fidelity(prop, source, target, t)) for t in ts]
    config = {"n": args.n, "profile": args.profile, "family": args.family,
              "source": str(source), "target": str(target),
              "t_max": args.t_max, "grid_step": args.grid_step}
    comments = header_lines(config, __version__)
    comments.append(f"# t_star: {format_number(t_star)}")
    comments.append(f"# fidelity_star: {format_number(f_star)}")
    _emit(render_csv(("t", "fidelity"), rows, comments), args.out)
    return EXIT_OK


def cmd_ca_compare(args) -> int:
    if args.n is None:
        raise UsageError("--n is required (flag or config)")
    if args.n > DENSE_CAP:
        raise UsageError(f"N={args.n} exceeds the dense cap {DENSE_CAP}")
    rows = ca_vs_hamiltonian_report(args.n)
    config = {"n": args.n, "profile": "engineered"}
    table = [
        (str(r.input), str(r.continuous_output), r.continuous_prob,
         str(r.mirror_output), r.agree, r.ca_hit_step)
        for r in rows
    ]
    _emit(render_csv(
        ("input", "continuous_output", "continuous_prob",
         "mirror_output", "agree", "ca_hit_step"),
        table, header_lines(config, __version__)), args.out)
    if not all(r.agree for r in rows):
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_noise_sweep(args) -> int:
    profile = _profile(args.profile, args.n)
    t = parse_time(args.time) if args.time else pst_time(args.n)
    tasks = [
        TransferTask("cluster", Propagator(cluster_chain(profile)),
                     BitConfig.single(args.n, 2), args.n, t),
        TransferTask("exchange", Propagator(exchange_chain(profile)),
                     BitConfig.single(args.n, 1), args.n, t),
    ]
    p_grid = [float(p) for p in args.p.split(",")]
    cfg = NoiseConfig(p=0.0, steps=args.steps, trials=args.trials, seed=args.seed)
    records = noise_sweep(tasks, p_grid, cfg)
    config = {"n": args.n, "profile": args.profile, "t": t, "steps": args.steps,
              "trials": args.trials, "seed": args.seed, "p_grid": args.p,
              "error_placement": records[0].error_placement}
    rows = [
        (r.hamiltonian, r.p, r.mean_fidelity, r.standard_error, r.trials, r.seed)
        for r in records
    ]
    _emit(render_csv(
        ("hamiltonian", "p", "mean_fidelity", "std_error", "trials", "seed"),
        rows, header_lines(config, __version__)), args.out)
    return EXIT_OK


def cmd_star_demo(args) -> int:
    layout = StarLayout(args.spikes, args.length,
                        _profile(args.profile, args.length))
    if layout.total_sites > DENSE_CAP:
        raise UsageError(
            f"star with {layout.total_sites} sites exceeds the dense cap {DENSE_CAP}"
        )
    spikes = spike_hamiltonians(layout)
    dense = [realize_dense(s) for s in spikes]
    comm = 0.0
    for i in range(len(dense)):
        for j in range(i + 1, len(dense)):
            comm = max(comm, float(np.max(np.abs(
                dense[i] @ dense[j] - dense[j] @ dense[i]
            ))))
    t = parse_time(args.time) if args.time else pst_time(args.length)
    star_prop = Propagator(star_hamiltonian(layout))
    u_star = star_prop.unitary(t)
    product = np.eye(u_star.shape[0], dtype=complex)
    for s in spikes:
        product = Propagator(s).unitary(t) @ product
    product_dev = float(np.max(np.abs(u_star - product)))
    source = BitConfig.single(layout.total_sites, 1)
    target = BitConfig(layout.total_sites, (1,) * layout.total_sites)
    fid = transfer_fidelity(star_prop, source, target, t)
    config = {"spikes": args.spikes, "length": args.length,
              "profile": args.profile, "t": t}
    _emit(_json_doc(config, {
        "total_sites": layout.total_sites,
        "max_pairwise_commutator": comm,
        "propagator_product_deviation": product_dev,
        "all_ones_probability": fid,
    }), args.out)
    return EXIT_OK


# -- argument plumbing ----------------------------------------------------


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="JSON file supplying argument defaults")
    sub.add_argument("--out", help="output path (stdout if omitted)")
    sub.add_argument("--seed", type=int, default=0, help="RNG seed (u64)")
    sub.add_argument("--threads", type=int, default=1,
                     help="reserved; computations are vectorized in-process")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinamp",
        description="Spin-chain amplification dynamics and differential tests",
    )
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("verify-equivalence",
                        help="check the CNOT-ladder identity symbolically and densely")
    p.add_argument("--n-min", type=int, default=2)
    p.add_argument("--n-max", type=int, default=8)
    p.add_argument("--profiles", type=int, default=5,
                   help="random profiles per chain length")
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--corrupt", action="store_true",
                   help="negative control: perturb one side and expect failure")
    _add_common(p)
    p.set_defaults(func=cmd_verify_equivalence)

    p = subs.add_parser("amplify", help="score the amplification conversion")
    p.add_argument("--n", type=int)
    p.add_argument("--profile", default="engineered")
    p.add_argument("--time", help="evolution time; accepts pi tokens like pi/2")
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    _add_common(p)
    p.set_defaults(func=cmd_amplify)

    p = subs.add_parser("transfer", help="basis-state transfer probability")
    p.add_argument("--n", type=int)
    p.add_argument("--profile", default="engineered")
    p.add_argument("--family", default="cluster", choices=("cluster", "exchange"))
    p.add_argument("--source", help="bit string, site 1 first")
    p.add_argument("--target")
    p.add_argument("--time")
    _add_common(p)
    p.set_defaults(func=cmd_transfer)

    p = subs.add_parser("scan", help="fidelity scan over a time window")
    p.add_argument("--n", type=int)
    p.add_argument("--profile", default="uniform")
    p.add_argument("--family", default="cluster", choices=("cluster", "exchange"))
    p.add_argument("--source")
    p.add_argument("--target")
    p.add_argument("--t-max", type=float, default=200.0)
    p.add_argument("--grid-step", type=float, default=0.1)
    _add_common(p)
    p.set_defaults(func=cmd_scan)

    p = subs.add_parser("ca-compare",
                        help="exhaustive CA vs continuous evolution table")
    p.add_argument("--n", type=int)
    _add_common(p)
    p.set_defaults(func=cmd_ca_compare)

    p = subs.add_parser("noise-sweep", help="Monte Carlo dephasing comparison")
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--profile", default="engineered")
    p.add_argument("--p", default="0,0.02,0.05,0.1,0.15,0.2",
                   help="comma-separated flip probabilities")
    p.add_argument("--steps", type=int, default=25)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--time")
    _add_common(p)
    p.set_defaults(func=cmd_noise_sweep)

    p = subs.add_parser("star-demo", help="star-geometry factorization checks")
    p.add_argument("--spikes", type=int, default=3)
    p.add_argument("--length", type=int, default=3)
    p.add_argument("--profile", default="engineered")
    p.add_argument("--time")
    _add_common(p)
    p.set_defaults(func=cmd_star_demo)

    return parser


def _parse_with_config(argv) -> argparse.Namespace:
    """Parse argv; --config JSON supplies defaults, explicit flags win."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if not getattr(args, "config", None):
        return args
    with open(args.config) as handle:
        doc = json.load(handle)
    if not isinstance(doc, dict):
        raise UsageError("--config must contain a JSON object")
    defaults = {}
    for key, value in doc.items():
        attr = key.replace("-", "_")
        if not hasattr(args, attr):
            raise UsageError(f"config key {key!r} unknown for this subcommand")
        defaults[attr] = value
    reparser = build_parser()
    reparser.set_defaults(**defaults)
    for action in reparser._subparsers._group_actions[0].choices.values():
        action.set_defaults(**{k: v for k, v in defaults.items()})
    return reparser.parse_args(argv)


def main(argv=None) -> int:
    try:
        args = _parse_with_config(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SpinChainError, NumericFailure, ValueError) as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
