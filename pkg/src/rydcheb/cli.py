"""Command-line driver: defect tables, wavefunction exports, hyperfine tables,
and the hydrogen validation suite.

Every command writes machine-readable CSV (floats at 17 significant digits,
so identical invocations produce byte-identical files), renders figures next
to the delimited output, and leaves a JSON run manifest -- also on failure,
with the error recorded.

Exit codes: 0 ok, 1 usage error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from . import plots
from . import quasiclassics as qc
from .chebyshev import build_grid, interpolate
from .eigensolver import SolverConfig, assemble, count_nodes, physicality_filter, \
    sampling_margin, solve_state, solve_window
from .errors import RydchebError
from .hyperfine import HyperfineResult, hyperfine_A, scaled_constant
from .params import builtin_params_path, get_isotope, load_params
from .potential import StateLabel, detect_second_region, find_turning_points, \
    q_function

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return ""
        return f"{x:.17g}"
    return str(x)


def _cell(x, width=14) -> str:
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return " " * (width - 2) + "--"
    if isinstance(x, float):
        return f"{x:>{width}.7g}"
    return f"{x:>{width}}"


def _write_csv(path: Path, header: list[str], rows: list[list]) -> Path:
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
    return path


class _Manifest:
    """Run manifest collected along the way; written even on failure."""

    def __init__(self, outdir: Path, command: str, config: dict):
        self.outdir = outdir
        self.command = command
        self.config = config
        self.outputs: list[str] = []
        self.error: str | None = None
        self._t0 = time.perf_counter()

    def add(self, path: Path) -> Path:
        self.outputs.append(path.name)
        return path

    def write(self) -> Path:
        doc = {
            "command": self.command,
            "tool_version": __version__,
            "config": self.config,
            "outputs": self.outputs,
            "wall_clock_s": round(time.perf_counter() - self._t0, 3),
            "error": self.error,
        }
        path = self.outdir / f"manifest_{self.command}.json"
        path.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
        return path


def _load(args):
    if args.params is not None:
        path = Path(args.params)
    else:
        path = builtin_params_path(args.element)
    return load_params(path), str(path)


def _parse_l_range(spec: str, parser_error) -> list[int]:
    try:
        if ".." in spec:
            lo, hi = spec.split("..")
            out = list(range(int(lo), int(hi) + 1))
        else:
            out = [int(spec)]
    except ValueError:
        parser_error(f"bad l range {spec!r} (use e.g. '2' or '0..4')")
    if not out or out[0] < 0:
        parser_error(f"bad l range {spec!r} (need 0 <= l_min <= l_max)")
    return out


def _parse_n_range(spec: str, parser_error) -> list[int]:
    try:
        if ".." in spec:
            lo, hi = spec.split("..")
            out = list(range(int(lo), int(hi) + 1))
        else:
            out = [int(spec)]
    except ValueError:
        parser_error(f"bad n range {spec!r} (use e.g. '15' or '20..33')")
    if not out or out[0] < 1:
        parser_error(f"bad n range {spec!r}")
    return out


def _j_values(l: int) -> list[float]:
    return [0.5] if l == 0 else [l - 0.5, l + 0.5]


# ---------------------------------------------------------------- defects

def cmd_defects(args, fail_usage) -> int:
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    params, params_path = _load(args)
    ls = _parse_l_range(args.l, fail_usage)
    if max(ls) >= args.n:
        fail_usage(f"l range {args.l} incompatible with n={args.n} (need l < n)")

    manifest = _Manifest(outdir, "defects", {
        "params": params_path, "n": args.n, "l": ls, "k_max": args.kmax,
        "r_max_factor": args.rmax_factor, "tail_tol": args.tail_tol,
    })
    solver = SolverConfig(k_max=args.kmax, r_max_factor=args.rmax_factor,
                          tail_threshold=args.tail_tol)

    rows, failures = [], []
    try:
        for l in ls:
            for j in _j_values(l):
                state = StateLabel(args.n, l, j)
                row = {"n": args.n, "l": l, "j": j, "defect_numeric": None,
                       "defect_quasiclassical": None, "anomaly": False,
                       "energy": None}
                try:
                    if l == 0:
                        row["defect_quasiclassical"] = \
                            qc.quantize_s_states(args.n, params)[1]
                    else:
                        row["defect_quasiclassical"] = qc.quantize_wkb(
                            state, params, ignore_inner_region=True)[1]
                except RydchebError as exc:
                    failures.append(f"{state} quasiclassical: {exc}")
                try:
                    bound = solve_state(state, params, solver)
                    row["defect_numeric"] = bound.quantum_defect
                    row["energy"] = bound.energy
                    if l >= 1:
                        row["anomaly"] = detect_second_region(
                            state, bound.energy, params) is not None
                except RydchebError as exc:
                    failures.append(f"{state} numeric: {exc}")
                rows.append(row)

        for l in ls:
            pair = [r for r in rows
                    if r["l"] == l and r["defect_numeric"] is not None]
            split = abs(pair[0]["defect_numeric"] - pair[1]["defect_numeric"]) \
                if len(pair) == 2 else None
            for r in rows:
                if r["l"] == l:
                    r["fine_splitting"] = split

        header = ["n", "l", "j", "energy_ry", "defect_numeric",
                  "defect_quasiclassical", "fine_splitting", "anomaly"]
        table = [[r["n"], r["l"], r["j"], r["energy"], r["defect_numeric"],
                  r["defect_quasiclassical"], r.get("fine_splitting"),
                  int(r["anomaly"])] for r in rows]
        manifest.add(_write_csv(outdir / "defects.csv", header, table))

        print(f"# quantum defects, {params.element} n={args.n}  "
              "(defects dimensionless, energies in Ry, radii in a_B)")
        print(f"{'l':>3} {'j':>5} {'numeric':>14} {'quasiclassical':>15} "
              f"{'fine splitting':>15} {'anomaly':>8}")
        for r in rows:
            flag = "l=3 core" if r["anomaly"] else ""
            print(f"{r['l']:>3} {r['j']:>5} {_cell(r['defect_numeric'])} "
                  f"{_cell(r['defect_quasiclassical'], 15)} "
                  f"{_cell(r.get('fine_splitting'), 15)} {flag:>8}")

        manifest.add(Path(plots.defects_figure(outdir / "defects.png", rows)))
        anomalous = sorted({r["l"] for r in rows if r["anomaly"]})
        for l in anomalous:
            energy = next(r["energy"] for r in rows if r["l"] == l and r["energy"])
            r_c = params.channel(l).r_c
            x = np.geomspace(1e-3, 1.2, 1200)
            qv = np.asarray(q_function(x * r_c, StateLabel(args.n, l, l + 0.5),
                                       energy, params))
            p = np.sqrt(np.maximum(-qv, 0.0))
            manifest.add(Path(plots.momentum_figure(
                outdir / f"core_momentum_l{l}.png",
                [(params.element, x, p)], l)))

        if failures:
            manifest.error = "; ".join(failures)
            for f in failures:
                print(f"FAILED {f}", file=sys.stderr)
            return EXIT_NUMERICAL
        return EXIT_OK
    except RydchebError as exc:
        manifest.error = str(exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    finally:
        manifest.write()


# ----------------------------------------------------------- wavefunction

def cmd_wavefunction(args, fail_usage) -> int:
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    params, params_path = _load(args)
    if args.l >= args.n:
        fail_usage(f"need l < n, got n={args.n}, l={args.l}")
    if args.j is None:
        args.j = args.l + 0.5 if args.l else 0.5
    want_fock = args.fock if args.fock is not None else args.l == 0
    if want_fock and args.l != 0:
        fail_usage("the origin-uniform (Bessel) form is constructed and "
                   "normalized for s-states only; drop --fock for l > 0")
    state = StateLabel(args.n, args.l, args.j)

    manifest = _Manifest(outdir, "wavefunction", {
        "params": params_path, "n": args.n, "l": args.l, "j": args.j,
        "k_max": args.kmax, "r_max": args.rmax,
        "r_max_factor": args.rmax_factor, "rows": args.rows,
        "force_two_turning_points": args.force_two_turning_points,
    })
    try:
        solver = SolverConfig(k_max=args.kmax, r_max_factor=args.rmax_factor,
                              tail_threshold=args.tail_tol)
        grid = build_grid(args.rmax, args.kmax) if args.rmax else None
        bound = solve_state(state, params, solver, grid=grid)
        r_max = bound.grid.r_max

        uni_l = qc.langer_uniform(
            state, bound.energy, params, r_hi=r_max,
            ignore_inner_region=args.force_two_turning_points)
        uni_f = qc.fock_uniform(state, bound.energy, params) if want_fock else None

        n_zoom = max(args.rows // 4, 16)
        r = np.unique(np.concatenate([
            np.geomspace(1e-4, min(3.0, r_max), n_zoom),
            np.linspace(0.0, r_max, args.rows - n_zoom),
        ]))
        u_num = np.array([interpolate(bound.interpolant, x) for x in r])
        u_lan = qc.langer_wavefunction(uni_l, np.maximum(r, 1e-30))
        u_fock = np.full_like(r, np.nan)
        if uni_f is not None:
            inside = r < uni_f.action.r_plus
            u_fock[inside] = qc.fock_wavefunction(uni_f, r[inside])

        err_l = np.abs(u_num - u_lan)
        err_f = np.abs(u_num - u_fock)
        header = ["r_bohr", "u_numeric", "u_langer", "u_fock",
                  "abs_err_langer", "abs_err_fock"]
        table = [[r[i], u_num[i], u_lan[i], u_fock[i], err_l[i], err_f[i]]
                 for i in range(len(r))]
        stem = f"wavefunction_n{args.n}_l{args.l}_j{args.j:g}"
        manifest.add(_write_csv(outdir / f"{stem}.csv", header, table))
        manifest.add(Path(plots.wavefunction_figure(
            outdir / f"{stem}.png", r, u_num, u_lan,
            u_fock if uni_f is not None else None, state, bound.energy)))

        sel = (r > 1.0) & np.isfinite(u_lan)
        print(f"# {params.element} n={args.n} l={args.l} j={args.j:g}: "
              f"E = {bound.energy:.10g} Ry, defect = {bound.quantum_defect:.6g}")
        print(f"max |u_num - u_langer| for r > 1 a_B: {err_l[sel].max():.3e}")
        if uni_f is not None:
            sel_f = (r < 3.0) & np.isfinite(u_fock)
            print(f"max |u_num - u_fock|   for r < 3 a_B: {err_f[sel_f].max():.3e}")
        return EXIT_OK
    except RydchebError as exc:
        manifest.error = str(exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    finally:
        manifest.write()


# -------------------------------------------------------------- hyperfine

def cmd_hyperfine(args, fail_usage) -> int:
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    params, params_path = _load(args)
    try:
        isotope = get_isotope(args.isotope)
    except KeyError as exc:
        fail_usage(str(exc))
    ns = _parse_n_range(args.n_range, fail_usage)

    manifest = _Manifest(outdir, "hyperfine", {
        "params": params_path, "isotope": isotope.label, "n": ns,
        "force_zero_slope": args.force_zero_slope,
    })
    try:
        defects: dict[int, float] = {}

        def delta0(n: int) -> float:
            if n not in defects:
                defects[n] = qc.quantize_s_states(n, params)[1]
            return defects[n]

        results = []
        for n in ns:
            d0 = delta0(n)
            slope = 0.0 if args.force_zero_slope \
                else (delta0(n + 1) - delta0(n - 1)) / 2.0
            psi0 = qc.fermi_segre_density(n, d0, slope, params.Z)
            res = HyperfineResult(isotope=isotope.label, n=n, delta0=d0,
                                  psi0_sq=psi0, A_over_h=hyperfine_A(isotope, psi0))
            results.append((res, slope))

        scaled = [scaled_constant(res) for res, _ in results]
        mean = sum(scaled) / len(scaled)
        spread = (max(scaled) - min(scaled)) / mean if len(scaled) > 1 else 0.0

        header = ["n", "delta0", "ddelta0_dn", "psi0_sq_per_bohr3",
                  "A_over_h_hz", "scaled_ghz"]
        table = [[res.n, res.delta0, slope, res.psi0_sq, res.A_over_h, s]
                 for (res, slope), s in zip(results, scaled)]
        manifest.add(_write_csv(outdir / f"hyperfine_{isotope.label}.csv",
                                header, table))

        print(f"# contact hyperfine constants, {isotope.label} "
              "(psi^2 in a_B^-3, A/h in Hz, scaled constant in GHz)")
        print(f"{'n':>4} {'delta0':>12} {'|psi(0)|^2':>14} {'A/h (Hz)':>16} "
              f"{'scaled (GHz)':>14}")
        for (res, slope), s in zip(results, scaled):
            print(f"{res.n:>4} {res.delta0:>12.6f} {res.psi0_sq:>14.6e} "
                  f"{res.A_over_h:>16.6e} {s:>14.6f}")
        print(f"# mean scaled constant: {mean:.6f} GHz, spread {spread:.2%}")

        manifest.add(Path(plots.hyperfine_figure(
            outdir / f"hyperfine_{isotope.label}.png",
            [res.n for res, _ in results], scaled, mean, isotope.label)))
        if args.json:
            doc = {"isotope": isotope.label, "mean_scaled_ghz": mean,
                   "spread": spread,
                   "rows": [{"n": res.n, "delta0": res.delta0,
                             "scaled_ghz": s}
                            for (res, _), s in zip(results, scaled)]}
            path = outdir / f"hyperfine_{isotope.label}.json"
            path.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
            manifest.add(path)
        return EXIT_OK
    except RydchebError as exc:
        manifest.error = str(exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    finally:
        manifest.write()


# --------------------------------------------------------------- validate

def cmd_validate(args, fail_usage) -> int:
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    params, params_path = _load(args)
    n_max = args.n_max
    manifest = _Manifest(outdir, "validate", {
        "params": params_path, "k_max": args.kmax, "n_max": n_max,
    })
    checks: list[tuple[str, bool, str]] = []

    def record(name: str, ok: bool, detail: str):
        checks.append((name, bool(ok), detail))
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")

    try:
        r_max = 1.5 * (2.0 * n_max**2) * 1.2
        grid = build_grid(r_max, args.kmax)

        margin = sampling_margin(grid, StateLabel(n_max, 0, 0.5),
                                 -1.0 / n_max**2, params)
        record("sampling-adequacy", margin >= 1.0,
               f"half-wavelength / node-spacing margin {margin:.2f} at n={n_max} "
               + ("(ok)" if margin >= 1.0 else
                  f"-- grid cannot resolve the oscillations; raise --kmax "
                  f"(currently {args.kmax})"))

        spectra_ok, nodes_ok, found_states = True, True, {}
        if margin >= 1.0:
            window = (-1.1, -1.0 / (n_max + 0.5) ** 2)
            for l in range(0, 3):
                h = assemble(grid, StateLabel(max(l + 1, 2), l, l + 0.5), params)
                pairs = solve_window(h, window)
                for energy, vec in pairs:
                    tp = find_turning_points(StateLabel(n_max, l, l + 0.5),
                                             energy, params)
                    if not physicality_filter(vec, grid, tp.r_plus):
                        continue
                    u = np.zeros(grid.k_max + 1)
                    u[1:-1] = vec
                    n = count_nodes(u, grid.nodes, tp.r_plus) + l + 1
                    if l < n <= n_max:
                        found_states[(n, l)] = (energy, u)
                worst = 0.0
                for n in range(l + 1, n_max + 1):
                    if (n, l) not in found_states:
                        spectra_ok = False
                        record(f"spectrum-l{l}", False, f"state n={n} not found")
                        break
                    energy = found_states[(n, l)][0]
                    worst = max(worst, abs(energy + 1.0 / n**2) * n**2)
                else:
                    ok = worst < 1e-6
                    spectra_ok &= ok
                    record(f"spectrum-l{l}",
                           ok, f"max relative energy error {worst:.2e} "
                               f"over n={l + 1}..{n_max} (tol 1e-6)")
            nodes_ok = spectra_ok
            record("node-count-law", nodes_ok,
                   "every accepted state has n - l - 1 radial nodes"
                   if nodes_ok else "skipped states above")
        else:
            record("spectrum-l0", False, "skipped: grid under-resolved")
            spectra_ok = False

        if spectra_ok:
            from .chebyshev import Interpolant, diff_matrix, quad_integrate
            d1 = diff_matrix(grid)
            worst = 0.0
            for n in range(5, n_max + 1):
                energy, u = found_states[(n, 0)]
                u = u / math.sqrt(quad_integrate(Interpolant(grid, u * u)))
                density = float(d1[0] @ u) ** 2 / (4.0 * math.pi)
                worst = max(worst, abs(density * math.pi * n**3 - 1.0))
            record("origin-density", worst < 0.01,
                   f"max |psi(0)|^2 deviation from 1/(pi n^3): {worst:.2e} "
                   "(tol 1e-2)")

        worst = 0.0
        for n in (8, 10, 12):
            _, d0 = qc.quantize_s_states(n, params)
            worst = max(worst, abs(d0))
        record("action-quantization", worst < 1e-5,
               f"max |delta_0| from the s-state quantization: {worst:.2e} "
               "(tol 1e-5)")

        c = qc.langer_norm(StateLabel(10, 0, 0.5), -0.01, params)
        dev = abs(c * c * 1000.0 / 2.0 - 1.0)
        record("norm-identity", dev < 1e-6,
               f"|C|^2 vs dE/dn deviation {dev:.2e} at n=10 (tol 1e-6)")

        all_ok = all(ok for _, ok, _ in checks)
        if args.json:
            doc = {"all_passed": all_ok,
                   "checks": [{"name": name, "passed": ok, "detail": detail}
                              for name, ok, detail in checks]}
            path = outdir / "validate.json"
            path.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
            manifest.add(path)
        if not all_ok:
            manifest.error = "; ".join(
                f"{name}: {detail}" for name, ok, detail in checks if not ok)
        return EXIT_OK if all_ok else EXIT_NUMERICAL
    except RydchebError as exc:
        manifest.error = str(exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    finally:
        manifest.write()


# ------------------------------------------------------------------ main

def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--params", help="potential parameter file (JSON)")
    p.add_argument("--element", default="Rb",
                   help="builtin parameter set when --params is absent "
                        "(Rb, Cs, H; default Rb)")
    p.add_argument("--out", default=".", help="output directory (default .)")
    p.add_argument("--kmax", type=int, default=700,
                   help="Chebyshev points (default 700)")
    p.add_argument("--rmax-factor", type=float, default=1.5,
                   help="r_max as a multiple of the outer turning point")
    p.add_argument("--tail-tol", type=float, default=1e-6,
                   help="physicality filter threshold")
    p.add_argument("--json", action="store_true",
                   help="also write a machine-readable JSON summary")


def main(argv=None) -> int:
    parser = _Parser(prog="rydcheb",
                     description="Alkali Rydberg states: spectral collocation "
                                 "cross-validated against uniform "
                                 "quasiclassical approximations")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("defects", help="quantum defect table for one n")
    _add_common(p)
    p.add_argument("--n", type=int, default=15)
    p.add_argument("--l", default="0..4", help="l or l-range, e.g. 0..4")
    p.set_defaults(func=cmd_defects)

    p = sub.add_parser("wavefunction",
                       help="export U(r): collocation vs uniform approximants")
    _add_common(p)
    p.add_argument("--n", type=int, default=15)
    p.add_argument("--l", type=int, default=0)
    p.add_argument("--j", type=float, default=None)
    p.add_argument("--rmax", type=float, default=None,
                   help="explicit grid extent in a_B (overrides --rmax-factor)")
    p.add_argument("--rows", type=int, default=2000,
                   help="number of radial samples in the table")
    p.add_argument("--fock", action="store_true", default=None,
                   help="force the origin-uniform column (s-states only)")
    p.add_argument("--force-two-turning-points", action="store_true",
                   help="evaluate the turning-point uniform form for l=3 "
                        "despite the second classical region in the core")
    p.set_defaults(func=cmd_wavefunction)

    p = sub.add_parser("hyperfine", help="contact hyperfine constants vs n")
    _add_common(p)
    p.add_argument("--isotope", default="87Rb")
    p.add_argument("--n-range", default="20..33")
    p.add_argument("--force-zero-slope", action="store_true",
                   help="treat d delta_0/dn as exactly zero")
    p.set_defaults(func=cmd_hyperfine)

    p = sub.add_parser("validate", help="hydrogen oracle suite (PASS/FAIL)")
    _add_common(p)
    p.set_defaults(element="H")
    p.add_argument("--n-max", type=int, default=10)
    p.set_defaults(func=cmd_validate)

    def fail_usage(message: str):
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)

    try:
        args = parser.parse_args(argv)
        return args.func(args, fail_usage)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
