"""Command line entry point ``mfou`` with subcommands synth, theory, analyze, verify.

Configuration is read from an optional key=value file (``--config``) and
then overridden by flags. Exit status is 0 on success; for ``verify`` it is
0 only when every check passes.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import io, stats, theory
from .config import SampledPath, SimConfig, check, max_even_moment, parse_config_text, validate
from .synthesis import synth_bundle
from .verify import DESK_GAMMAS, DESK_HURSTS, run_verify

log = logging.getLogger("mfou")

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


# argument helpers --------------------------------------------------------------------

def parse_float_list(text: str) -> list[float]:
    try:
        vals = [float(eval_fraction(s)) for s in text.split(",") if s.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def eval_fraction(s: str) -> float:
    """Accept plain floats and simple fractions such as ``1/3``."""
    s = s.strip()
    if "/" in s:
        num, den = s.split("/", 1)
        return float(num) / float(den)
    return float(s)


def parse_int_list(text: str) -> list[int]:
    try:
        vals = [int(s) for s in text.split(",") if s.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def parse_scales(text: str) -> tuple[float | None, float | None, int]:
    """``min:max:per-octave``; empty fields take the defaults (dt, t_tot/4, 1)."""
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected min:max:per-octave")
    try:
        lo = eval_fraction(parts[0]) if parts[0].strip() else None
        hi = eval_fraction(parts[1]) if parts[1].strip() else None
        per = int(parts[2]) if parts[2].strip() else 1
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return lo, hi, per


def _add_config_flags(p: argparse.ArgumentParser, lists: bool = False) -> None:
    p.add_argument("--config", type=Path, help="key=value configuration file")
    p.add_argument("--seed", type=int, help="master seed (default 0)")
    p.add_argument("--n-traj", type=int, help="trajectories per ensemble (default 10)")
    conv = parse_float_list if lists else eval_fraction
    p.add_argument("--hurst", type=conv, help="Hurst exponent" + (" (comma list)" if lists else ""))
    p.add_argument("--gamma-sq", type=conv, help="intermittency gamma^2" + (" (comma list)" if lists else ""))
    p.add_argument("--epsilon-dt-multiple", type=float,
                   help="set epsilon = m * dt (default 4 unless the config file sets epsilon)")


def build_config(args, hurst=None, gamma_sq=None) -> SimConfig:
    """Desk defaults, then the config file, then command line flags."""
    values = parse_config_text(args.config.read_text()) if args.config else {}
    for key, flag in (("seed", args.seed), ("n_traj", args.n_traj),
                      ("hurst", hurst), ("gamma_sq", gamma_sq)):
        if flag is not None:
            values[key] = flag
    if args.epsilon_dt_multiple is not None:
        values.pop("epsilon", None)
        cfg = SimConfig.desk(**values)
        return cfg.with_(epsilon=args.epsilon_dt_multiple * cfg.dt)
    return SimConfig.desk(**values)


def _scales_for(args, dt: float, t_tot: float) -> np.ndarray:
    if args.scales is None:
        return stats.octave_scales(dt, t_tot)
    lo, hi, per = args.scales
    return stats.octave_scales(dt, t_tot, per, lo, hi)


# subcommands -----------------------------------------------------------------------

def cmd_synth(args) -> int:
    cfg = check(build_config(args, args.hurst, args.gamma_sq))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    hashes, second = {}, []
    for i in range(cfg.n_traj):
        b = synth_bundle(cfg, i)
        name = io.trajectory_filename(i)
        hashes[name] = io.write_trajectory(out / name, b.x, cfg, i)
        second.append(float(np.mean(b.x.values**2)))
        if args.csv:
            csv_name = f"traj_{i:05d}.csv"
            io.write_path_csv(out / csv_name, b.x)
            hashes[csv_name] = io.sha256_file(out / csv_name)
        log.info("wrote %s", name)
    var_th = theory.fou_variance(cfg.hurst, cfg.t_large)
    summary = {"ensemble_variance": float(np.mean(second)), "fou_variance": var_th,
               "relative_difference": float(np.mean(second) / var_th - 1.0),
               "note": "fou_variance is the gamma_sq = 0 prediction; the variance does not depend on gamma_sq"}
    io.write_manifest(out, cfg, hashes, summary)
    print(f"wrote {cfg.n_traj} trajectories to {out}; ensemble variance {summary['ensemble_variance']:.6g} "
          f"(fOU prediction {var_th:.6g})")
    return EXIT_OK


def cmd_theory(args) -> int:
    cfg = build_config(args, args.hurst, args.gamma_sq)
    errors = validate(cfg)
    if errors:
        print("invalid configuration: " + "; ".join(errors), file=sys.stderr)
        return EXIT_USAGE
    orders = args.orders or [2, 4]
    rep = theory.theory_report(cfg.hurst, cfg.gamma_sq, cfg.t_large, orders=orders)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rows = [("variance", "", rep.variance, 0.0)]
    rows += [("covariance", tau, v, e) for tau, v, e in rep.covariance_samples]
    for order in sorted(rep.c2n):
        v, e = rep.c2n[order]
        expo, amp = rep.s2n_scaling[order]
        rows += [("c_constant", order, v, e), ("s2n_exponent", order, expo, 0.0),
                 ("s2n_amplitude", order, amp, e * amp / v if v else 0.0)]
    if rep.flatness_amplitude is not None:
        rows += [("flatness_exponent", "", rep.flatness_exponent, 0.0),
                 ("flatness_amplitude", "", rep.flatness_amplitude, 0.0)]
    with open(out / "theory.csv", "w") as fh:
        fh.write("quantity,argument,value,error\n")
        for q, a, v, e in rows:
            fh.write(f"{q},{a},{float(v)!r},{float(e)!r}\n")
    lines = [f"H={cfg.hurst:.6g} gamma_sq={cfg.gamma_sq:.6g} T={cfg.t_large:.6g}",
             f"max even moment order: {max_even_moment(cfg.hurst, cfg.gamma_sq)}",
             f"variance {rep.variance:.10g}", f"c2 {rep.c2:.10g}"]
    for order in sorted(rep.c2n):
        v, e = rep.c2n[order]
        expo, amp = rep.s2n_scaling[order]
        lines.append(f"order {order}: c={v:.10g} +/- {e:.2g}  S ~ {amp:.6g} tau^{expo:.6g}")
    if rep.flatness_amplitude is not None:
        lines.append(f"flatness ~ {rep.flatness_amplitude:.6g} (tau/T)^{rep.flatness_exponent:.6g}")
    for order, why in sorted(rep.skipped.items()):
        lines.append(f"order {order} skipped: {why}")
    text = "\n".join(lines) + "\n"
    (out / "theory_summary.txt").write_text(text)
    print(text, end="")
    return EXIT_OK


def _collect_inputs(paths: list[Path]) -> list[Path]:
    files = []
    for p in paths:
        if p.is_dir():
            files += sorted(p.glob("traj_*.bin"))
        else:
            files.append(p)
    if not files:
        raise ValueError("no trajectory files found")
    return files


def cmd_analyze(args) -> int:
    files = _collect_inputs(args.inputs)
    headers, paths = [], []
    for f in files:
        head, values = io.read_trajectory(f)
        headers.append(head)
        paths.append(values)
    ref = headers[0]
    key = lambda h: (h.n_points, h.dt, h.hurst, h.gamma_sq, h.seed)  # noqa: E731
    mixed = [str(f) for f, h in zip(files, headers) if key(h) != key(ref)]
    if mixed:
        print("inputs do not share a configuration: " + ", ".join(mixed), file=sys.stderr)
        return EXIT_USAGE
    t_tot = ref.dt * ref.n_points
    sampled = [SampledPath(v, ref.dt) for v in paths]
    scales = _scales_for(args, ref.dt, t_tot)
    orders = args.orders or [2, 4]
    table = stats.structure_function(sampled, orders, scales)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    io.write_moments_csv(out / "moments.csv", table)
    if table.flatness is not None:
        io.write_flatness_csv(out / "flatness.csv", table)
    else:
        log.warning("orders 2 and 4 are both needed for flatness; flatness.csv not written")
    hist = stats.pdf_histograms(sampled, scales, args.bins)
    io.write_histograms_csv(out / "histograms.csv", hist)
    status = EXIT_OK
    if args.oracle:
        if ref.n_points > args.oracle_max_points:
            print(f"--oracle needs n_points <= {args.oracle_max_points}", file=sys.stderr)
            return EXIT_USAGE
        slow = stats.structure_function_bruteforce(sampled, orders, scales)
        worst = 0.0
        for n in orders:
            denom = np.maximum(np.abs(slow.s_n[n]), np.finfo(float).tiny)
            worst = max(worst, float(np.max(np.abs(table.s_n[n] - slow.s_n[n]) / denom)))
        ok = worst <= 1e-12
        print(f"oracle: max relative difference {worst:.3g} ({'ok' if ok else 'MISMATCH'})")
        status = EXIT_OK if ok else EXIT_FAIL
    print(f"analyzed {len(files)} trajectories over {len(scales)} scales -> {out}")
    return status


def cmd_verify(args) -> int:
    base = build_config(args)
    hursts = args.hurst if args.hurst is not None else list(DESK_HURSTS)
    gammas = args.gamma_sq if args.gamma_sq is not None else list(DESK_GAMMAS)
    scales = _scales_for(args, base.dt, base.t_tot) if args.scales is not None else None
    report = run_verify(base, hursts, gammas, scales=scales, kernel_scale=args.kernel_scale)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    io.write_json(out / "verify_report.json", report.to_dict())
    for c in report.checks:
        where = f" [{c.cell}]" if c.cell else ""
        print(f"{'PASS' if c.passed else 'FAIL'} criterion {c.criterion} {c.name}{where}: "
              f"{_short(c.empirical)} vs {_short(c.theoretical)} ({c.tolerance})")
    if report.aborted:
        print(f"ABORTED: {report.aborted}")
    print(f"overall: {'PASS' if report.overall_pass else 'FAIL'}")
    return EXIT_OK if report.overall_pass else EXIT_FAIL


def _short(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_short(x) for x in v) + "]"
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


# parser ------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mfou", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="synthesize trajectories")
    _add_config_flags(p)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--csv", action="store_true", help="also write index,time,value CSV files")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("theory", help="evaluate theoretical predictions")
    _add_config_flags(p)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--orders", type=parse_int_list, help="even moment orders, e.g. 2,4,6")
    p.set_defaults(func=cmd_theory)

    p = sub.add_parser("analyze", help="structure functions, flatness and histograms")
    p.add_argument("inputs", nargs="+", type=Path, help="trajectory files or synth output directories")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--scales", type=parse_scales, help="min:max:per-octave (times)")
    p.add_argument("--orders", type=parse_int_list, help="moment orders, e.g. 2,3,4")
    p.add_argument("--bins", type=int, default=64, help="histogram bins per scale")
    p.add_argument("--oracle", action="store_true", help="cross-check against the brute-force estimator")
    p.add_argument("--oracle-max-points", type=int, default=4096, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify", help="run the acceptance checks")
    _add_config_flags(p, lists=True)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--scales", type=parse_scales, help="min:max:per-octave (times)")
    p.add_argument("--kernel-scale", type=float, default=1.0, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE if isinstance(exc, ValueError) else EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
