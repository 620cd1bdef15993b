"""Command-line interface.

Subcommands: inspect, simulate, sweep, threshold, lossmap, algebra.
Parameters may come from flags or from an INI config file with one section
per command (flags override the file; unknown keys are rejected).  The
default output directory is taken from $FBQC_OUT_DIR when set.

Exit codes: 0 success, 2 usage/config error, 3 runtime/I-O error.
"""

from __future__ import annotations

import argparse
import configparser
import os
import sys
from collections import Counter

import numpy as np

from . import __version__
from .errormodel import (
    HardwareAgnosticParams,
    NoSolutionError,
    boosting_photons,
    effective_erasure,
    LinearOpticalParams,
    loss_threshold,
)
from .montecarlo import (
    FitFailedError,
    NoCrossingError,
    SweepSpec,
    build_graphs,
    estimate_threshold,
    loss_failure_curve,
    run_point,
    run_sweep,
    write_points_csv,
    write_thresholds_csv,
)
from .networks import (
    BasisTag,
    FusionNetwork,
    build_4star,
    build_6ring,
    build_bell_ftfn_example,
    build_four_line_example,
    network_groups,
)
from .pauli import (
    ErrorClass,
    Outcome,
    OutcomeVector,
    PauliOp,
    canonicalize,
    centralizer_in,
    classify_error,
    flipped_outcomes,
    intersection,
    output_stabilizer_expressions,
    output_stabilizers,
)
from .serialize import parse_network, serialize_network
from .syndrome import derive_syndrome_graphs, export_edge_list

_KINDS = {"four-star": build_4star, "six-ring": build_6ring}
_EXAMPLES = {"fig3": build_four_line_example, "fig4": build_bell_ftfn_example}

USAGE_ERROR = 2
RUNTIME_ERROR = 3


class CliError(Exception):
    def __init__(self, message: str, code: int = USAGE_ERROR):
        super().__init__(message)
        self.code = code


# ---------------------------------------------------------------------------
# pretty-printing helpers
# ---------------------------------------------------------------------------


def outcome_labels(net: FusionNetwork) -> list[str]:
    """Human labels for the fusion-group generators, in group order."""
    labels = []
    off = net.label_offset
    seq = 1
    for fu in net.fusions:
        a, b = fu.qubits[0] + off, fu.qubits[1] + off
        if fu.basis_tag is BasisTag.XX_ZZ:
            labels.append(f"m^XX_{a},{b}")
            labels.append(f"m^ZZ_{a},{b}")
        else:
            labels.append(f"m{seq}")
            labels.append(f"m{seq + 1}")
            seq += 2
    return labels


def _sign_str(idx, labels, sign) -> str:
    parts = [labels[j] for j in sorted(idx)]
    if sign < 0:
        parts.insert(0, "-1")
    return " ".join(parts) if parts else "+"


def print_example_report(net: FusionNetwork, out=sys.stdout) -> None:
    off = net.label_offset
    R, F = network_groups(net)
    labels = outcome_labels(net)
    print(f"qubits: {net.n_qubits}   resource states: "
          f"{len(net.resource_states)}   fusions: {len(net.fusions)}", file=out)
    print("outer qubits:",
          " ".join(str(q + off) for q in sorted(net.outer_qubits)), file=out)
    print("\nR (resource-state stabilizers):", file=out)
    for rs in net.resource_states:
        gens = " , ".join(
            e.to_sparse_label(off) for e in rs.embedded(net.n_qubits)
        )
        print(f"  state {rs.id} on "
              f"{{{', '.join(str(q + off) for q in rs.qubits)}}}: ({gens})",
              file=out)
    print("\nF (fusion measurements):", file=out)
    for fu in net.fusions:
        ms = " , ".join(
            e.to_sparse_label(off) for e in fu.embedded(net.n_qubits)
        )
        print(f"  fusion {fu.id}: ({ms})", file=out)
    C = intersection(R, F)
    print(f"\nC = R ∩ F (check group), rank {len(C.gens)}:", file=out)
    for g, (idx, sign) in zip(C.gens, C.f_expr or []):
        print(f"  {_sign_str(idx, labels, sign)}   "
              f"[= {g.to_sparse_label(off)}]", file=out)
    S = centralizer_in(R, F)
    print(f"\nS = Z_R(F) (surviving stabilizers), rank {len(S.gens)}", file=out)
    outer = sorted(net.outer_qubits)
    if outer:
        print("\nS_out (output stabilizers):", file=out)
        exprs = output_stabilizer_expressions(S, outer, F)
        for op, idx, sign in exprs:
            body = "".join(
                f"{op.letter(i)}{outer[i] + off}" for i in op.support()
            )
            print(f"  {_sign_str(idx, labels, sign)} · {body}", file=out)


def print_lattice_report(net: FusionNetwork, show_graph: bool,
                         out=sys.stdout) -> None:
    meta = net.lattice_meta
    print(f"kind: {meta.kind}   L: {meta.L}   "
          f"periodic: {meta.periodic}", file=out)
    print(f"qubits: {net.n_qubits}   resource states: "
          f"{len(net.resource_states)}   fusions: {len(net.fusions)}   "
          f"outer: {len(net.outer_qubits)}", file=out)
    pri, dua = derive_syndrome_graphs(net)
    for g in (pri, dua):
        degs = Counter(g.degree(v) for v in range(g.n_vertices))
        hist = " ".join(f"{d}:{c}" for d, c in sorted(degs.items()))
        print(f"{g.side}: vertices {g.n_vertices}  edges {g.n_edges}  "
              f"degree histogram {{{hist}}}  cut sizes "
              f"{[len(c) for c in g.logical_cuts]}", file=out)
    if meta.L <= 2:
        R, F = network_groups(net)
        C = intersection(R, F)
        print(f"check group rank (algebraic, L={meta.L}): {len(C.gens)}",
              file=out)
    if show_graph:
        print(export_edge_list(pri), end="", file=out)
        print(export_edge_list(dua), end="", file=out)


# ---------------------------------------------------------------------------
# config handling
# ---------------------------------------------------------------------------

_CONFIG_KEYS = {
    "simulate": {"kind", "size", "p-erasure", "p-error", "trials", "seed",
                 "workers"},
    "sweep": {"kind", "sizes", "c-erasure", "c-error", "x-values", "trials",
              "seed", "workers", "out"},
    "threshold": {"kind", "sizes", "c-erasure", "c-error", "x-values",
                  "trials", "seed", "workers", "out"},
    "lossmap": {"star-threshold", "ring-threshold", "p-fail-grid", "out"},
}


def load_config(path: str, command: str) -> dict[str, str]:
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise CliError(f"cannot read config file {path!r}")
    if command not in parser:
        return {}
    section = parser[command]
    allowed = _CONFIG_KEYS.get(command, set())
    values = {}
    for key in section:
        if key not in allowed:
            raise CliError(
                f"unknown config key {key!r} in section [{command}]"
            )
        values[key] = section[key]
    return values


def _merged(args: argparse.Namespace, command: str) -> dict[str, str]:
    values: dict[str, str] = {}
    if getattr(args, "config", None):
        values.update(load_config(args.config, command))
    for key in _CONFIG_KEYS.get(command, set()):
        attr = key.replace("-", "_")
        v = getattr(args, attr, None)
        if v is not None:
            values[key] = v if isinstance(v, str) else str(v)
    return values


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(t) for t in text.replace(",", " ").split())


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(t) for t in text.replace(",", " ").split())


def _out_dir(values: dict) -> str:
    out = values.get("out") or os.environ.get("FBQC_OUT_DIR") or "."
    os.makedirs(out, exist_ok=True)
    return out


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_inspect(args) -> int:
    if args.example:
        if args.example not in _EXAMPLES:
            raise CliError(f"unknown example {args.example!r}")
        net = _EXAMPLES[args.example]()
        print_example_report(net)
        return 0
    if not args.kind:
        raise CliError("inspect needs --example or --kind")
    if args.kind not in _KINDS:
        raise CliError(f"unknown kind {args.kind!r}")
    if args.size is None or args.size < 2:
        raise CliError("inspect needs --size >= 2")
    net = _KINDS[args.kind](args.size, periodic=True)
    if args.serialize:
        print(serialize_network(net), end="")
        return 0
    print_lattice_report(net, show_graph=args.graph)
    return 0


def cmd_simulate(args) -> int:
    v = _merged(args, "simulate")
    kind = v.get("kind")
    if kind not in _KINDS:
        raise CliError("simulate needs --kind four-star|six-ring")
    L = int(v.get("size", 0))
    if L < 2:
        raise CliError("simulate needs --size >= 2")
    trials = int(v.get("trials", 1000))
    if trials < 1:
        raise CliError("trials must be >= 1")
    params = HardwareAgnosticParams(
        float(v.get("p-erasure", 0.0)), float(v.get("p-error", 0.0))
    )
    graphs = build_graphs(kind, L)
    pt = run_point(
        graphs, params, trials, int(v.get("seed", 2024)),
        workers=int(v.get("workers", 1)), kind=kind, L=L,
    )
    lo, hi = pt.wilson_ci()
    print(f"kind={kind} L={L} p_erasure={params.p_erasure:.6g} "
          f"p_error={params.p_error:.6g} trials={trials}")
    print(f"failures={pt.failures} rate={pt.rate:.6f} "
          f"ci95=[{lo:.6f}, {hi:.6f}]")
    return 0


def _spec_from(values: dict) -> SweepSpec:
    kind = values.get("kind")
    if kind not in _KINDS:
        raise CliError("needs kind = four-star|six-ring")
    if "sizes" not in values or "x-values" not in values:
        raise CliError("needs sizes and x-values")
    trials = int(values.get("trials", 15000))
    if trials < 1:
        raise CliError("trials must be >= 1")
    return SweepSpec(
        kind=kind,
        sizes=_ints(values["sizes"]),
        c_erasure=float(values.get("c-erasure", 0.0)),
        c_error=float(values.get("c-error", 0.0)),
        x_values=_floats(values["x-values"]),
        trials_per_point=trials,
        master_seed=int(values.get("seed", 2024)),
    )


def _progress(pt):
    print(f"  L={pt.L} x={pt.x:.6g} rate={pt.rate:.5f} "
          f"({pt.failures}/{pt.trials})", flush=True)


def cmd_sweep(args) -> int:
    v = _merged(args, "sweep")
    spec = _spec_from(v)
    out = _out_dir(v)
    points = run_sweep(spec, workers=int(v.get("workers", 1)),
                       progress=_progress)
    path = os.path.join(out, f"points_{spec.kind}.csv")
    write_points_csv(path, points)
    print(f"wrote {path}")
    return 0


def cmd_threshold(args) -> int:
    v = _merged(args, "threshold")
    spec = _spec_from(v)
    out = _out_dir(v)
    try:
        est, points = estimate_threshold(
            spec, workers=int(v.get("workers", 1)), progress=_progress
        )
    except (NoCrossingError, FitFailedError) as exc:
        # still a successful run; report and emit the points
        points = run_sweep(spec, workers=int(v.get("workers", 1)))
        path = os.path.join(out, f"points_{spec.kind}.csv")
        write_points_csv(path, points)
        print(f"no threshold estimate: {exc}")
        print(f"wrote {path}")
        return 0
    ppath = os.path.join(out, f"points_{spec.kind}.csv")
    tpath = os.path.join(out, f"threshold_{spec.kind}.csv")
    write_points_csv(ppath, points)
    write_thresholds_csv(tpath, [est])
    print(f"wrote {ppath}")
    print(f"wrote {tpath}")
    print(f"threshold: x* = {est.x_threshold:.6f} ± {est.uncertainty:.6f}")
    print(f"  p_erasure* = {est.p_erasure_star:.6f}   "
          f"p_error* = {est.p_error_star:.6f}")
    return 0


def cmd_lossmap(args) -> int:
    v = _merged(args, "lossmap")
    star = v.get("star-threshold")
    ring = v.get("ring-threshold")
    if star is None or ring is None:
        raise CliError(
            "lossmap needs --star-threshold and --ring-threshold "
            "(marginal erasure thresholds)"
        )
    star, ring = float(star), float(ring)
    if "p-fail-grid" in v:
        grid = _floats(v["p-fail-grid"])
    else:
        grid = tuple(np.linspace(0.02, 0.5, 49))
    out = _out_dir(v)
    boost_levels = {0.5 ** n for n in range(1, 10)}
    path = os.path.join(out, "lossmap.csv")
    with open(path, "w", newline="") as fh:
        fh.write("network,encoded,p_fail,p_loss_star,is_boost_level\n")
        for name, thr, enc in (
            ("four-star", star, False),
            ("six-ring", ring, False),
            ("six-ring", ring, True),
        ):
            for pf, pl in loss_failure_curve(thr, enc, grid):
                mark = int(any(abs(pf - b) < 1e-12 for b in boost_levels))
                fh.write(
                    f"{name},{int(enc)},{pf:.8f},{pl:.8f},{mark}\n"
                )
    print(f"wrote {path}")
    for name, thr, enc in (("six-ring encoded", ring, True),):
        try:
            pl = loss_threshold(0.25, thr, enc)
            print(f"{name}: p_loss*(p_fail=1/4) = {pl:.6f} "
                  f"(per-fusion loss {1 - (1 - pl) ** 4:.6f})")
        except NoSolutionError:
            print(f"{name}: no loss tolerance at p_fail=1/4")
    return 0


def cmd_algebra(args) -> int:
    try:
        with open(args.network) as fh:
            net = parse_network(fh.read())
    except OSError as exc:
        raise CliError(str(exc), RUNTIME_ERROR) from exc
    if args.classify:
        R, F = network_groups(net)
        C = intersection(R, F)
        S = centralizer_in(R, F)
        op = PauliOp.from_support(
            net.n_qubits,
            _parse_sparse(args.classify, net.label_offset, net.n_qubits),
        )
        cls = classify_error(op, C, S)
        flips = flipped_outcomes(op, F)
        labels = outcome_labels(net)
        flipped = [labels[j] for j in np.flatnonzero(flips)]
        print(f"error {args.classify}: {cls.value}")
        print("flipped outcomes:", " ".join(flipped) if flipped else "(none)")
        return 0
    print_example_report(net)
    return 0


def _parse_sparse(text: str, offset: int, n: int) -> dict[int, str]:
    """Parse e.g. 'Z2Z10' (labels offset by the network's label origin)."""
    support: dict[int, str] = {}
    i = 0
    while i < len(text):
        ch = text[i].upper()
        if ch not in "IXYZ":
            raise CliError(f"bad Pauli letter in {text!r}")
        i += 1
        j = i
        while j < len(text) and text[j].isdigit():
            j += 1
        if j == i:
            raise CliError(f"missing qubit index in {text!r}")
        q = int(text[i:j]) - offset
        if not 0 <= q < n:
            raise CliError(f"qubit index out of range in {text!r}")
        support[q] = ch
        i = j
    return support


# ---------------------------------------------------------------------------


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="fbqc",
        description="Fusion-network algebra and threshold simulator",
    )
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    pi = sub.add_parser("inspect", help="network structure and group tables")
    pi.add_argument("--example", choices=sorted(_EXAMPLES))
    pi.add_argument("--kind", choices=sorted(_KINDS))
    pi.add_argument("--size", type=int)
    pi.add_argument("--graph", action="store_true",
                    help="dump syndrome-graph edge lists")
    pi.add_argument("--serialize", action="store_true",
                    help="dump the network in the text format")
    pi.set_defaults(func=cmd_inspect)

    def common(sp, keys):
        sp.add_argument("--config", help="INI config file")
        if "kind" in keys:
            sp.add_argument("--kind", choices=sorted(_KINDS))
        if "size" in keys:
            sp.add_argument("--size", type=int)
        if "sizes" in keys:
            sp.add_argument("--sizes", help="comma-separated L values")
        if "trials" in keys:
            sp.add_argument("--trials", type=int)
        sp.add_argument("--seed", type=int)
        if "workers" in keys:
            sp.add_argument("--workers", type=int)
        if "out" in keys:
            sp.add_argument("--out", help="output directory")

    ps = sub.add_parser("simulate", help="single-point failure rate")
    common(ps, {"kind", "size", "trials", "workers"})
    ps.add_argument("--p-erasure", type=float, dest="p_erasure")
    ps.add_argument("--p-error", type=float, dest="p_error")
    ps.set_defaults(func=cmd_simulate)

    pw = sub.add_parser("sweep", help="error-ray sweep, points CSV")
    common(pw, {"kind", "sizes", "trials", "workers", "out"})
    pw.add_argument("--c-erasure", type=float, dest="c_erasure")
    pw.add_argument("--c-error", type=float, dest="c_error")
    pw.add_argument("--x-values", dest="x_values",
                    help="comma-separated ray positions")
    pw.set_defaults(func=cmd_sweep)

    pt = sub.add_parser("threshold", help="sweep, beta-CDF fits, crossing")
    common(pt, {"kind", "sizes", "trials", "workers", "out"})
    pt.add_argument("--c-erasure", type=float, dest="c_erasure")
    pt.add_argument("--c-error", type=float, dest="c_error")
    pt.add_argument("--x-values", dest="x_values")
    pt.set_defaults(func=cmd_threshold)

    pl = sub.add_parser("lossmap", help="loss-tolerance curves vs p_fail")
    pl.add_argument("--config", help="INI config file")
    pl.add_argument("--star-threshold", type=float, dest="star_threshold",
                    help="4-star marginal erasure threshold")
    pl.add_argument("--ring-threshold", type=float, dest="ring_threshold",
                    help="6-ring marginal erasure threshold")
    pl.add_argument("--p-fail-grid", dest="p_fail_grid")
    pl.add_argument("--out")
    pl.set_defaults(func=cmd_lossmap)

    pa = sub.add_parser("algebra", help="group analysis of a serialized network")
    pa.add_argument("network", help="path to a fbqc-network file")
    pa.add_argument("--classify", help="sparse Pauli, e.g. Z2Z10")
    pa.set_defaults(func=cmd_algebra)

    return p


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse uses exit code 2 for usage errors
        return int(exc.code) if exc.code else 0
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (OSError,) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return RUNTIME_ERROR
    except (ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return RUNTIME_ERROR


if __name__ == "__main__":
    sys.exit(main())
