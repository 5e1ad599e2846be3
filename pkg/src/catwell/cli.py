"""Command line interface.

Commands: ground-state, scan-parity, gap-scan, verify.  Floating-point
output is printed with 17 significant digits so parsing it back reproduces
the in-memory doubles bit for bit.  Exit codes: 0 success, 1 failed
verification checks, 2 usage errors, 3 solver failures.

If CATWELL_OUTPUT_DIR is set, relative --output paths are resolved against
it.  Without --output, results go to stdout.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from time import perf_counter

import numpy as np

from . import checks, interferometer as itf, model
from .eigen import ConvergenceError
from .interferometer import ResidualError
from .spin import cat_state

OUTPUT_DIR_ENV = "CATWELL_OUTPUT_DIR"

SCAN_COLUMNS = ("theta", "parity", "sigma_parity", "parity_deriv",
                "sigma_theta", "precision_norm", "flag")
GAP_COLUMNS = ("N", "chi", "U", "E0", "E1", "gap", "underflow_flag")


class UsageError(Exception):
    pass


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _resolve_output(path: str | None) -> str | None:
    if path is None:
        return None
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not os.path.isabs(path):
        return os.path.join(base, path)
    return path


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        parent = os.path.dirname(path)
        if parent:
            os.makedirs(parent, exist_ok=True)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _csv_lines(header, rows) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(cells) for cells in rows)
    return "\n".join(lines) + "\n"


def _parse_grid_spec(spec: str, name: str) -> tuple[float, float, int]:
    parts = spec.split(":")
    if len(parts) != 3:
        raise UsageError(f"{name} must look like start:stop:count, got {spec!r}")
    try:
        start, stop = float(parts[0]), float(parts[1])
        count = int(parts[2])
    except ValueError as exc:
        raise UsageError(f"cannot parse {name} spec {spec!r}: {exc}") from None
    if count < 2:
        raise UsageError(f"{name} needs at least 2 points, got {count}")
    if not stop > start:
        raise UsageError(f"{name} stop must exceed start, got {spec!r}")
    return start, stop, count


def _parse_state(spec: str, args) -> itf.Mixture | object:
    if spec == "ground":
        params = model.ModelParams(args.n_atoms, args.tunneling, args.interaction, args.epsilon)
        return model.ground_and_gap(params).psi0
    if spec == "thermal":
        return itf.thermal_cat_mixture(args.n_atoms)
    if spec == "cat":
        return cat_state(args.n_atoms, 0.0)
    if spec.startswith("cat:"):
        try:
            phi = float(spec[4:])
        except ValueError:
            raise UsageError(f"bad cat phase in state spec {spec!r}") from None
        return cat_state(args.n_atoms, phi)
    raise UsageError(f"unknown state spec {spec!r}; use ground, cat:PHI or thermal")


def _parse_n_list(spec: str) -> list[int]:
    try:
        values = [int(part) for part in spec.split(",") if part]
    except ValueError as exc:
        raise UsageError(f"bad atom-number list {spec!r}: {exc}") from None
    if not values:
        raise UsageError("atom-number list is empty")
    return values


def cmd_ground_state(args) -> int:
    params = model.ModelParams(args.n_atoms, args.tunneling, args.interaction, args.epsilon)
    sol = model.ground_and_gap(params)
    chi_value = model.chi(params)
    if args.format == "json":
        payload = {
            "n_atoms": params.n_atoms,
            "tunneling": params.tunneling,
            "interaction": params.interaction,
            "tilt": params.tilt,
            "e0": sol.e0,
            "e1": sol.e1,
            "gap": sol.gap,
            "chi": chi_value,
            "sectors": list(sol.sectors),
            "psi0_real": sol.psi0.amps.real.tolist(),
            "psi0_imag": sol.psi0.amps.imag.tolist(),
            "psi1_real": sol.psi1.amps.real.tolist(),
            "psi1_imag": sol.psi1.amps.imag.tolist(),
        }
        text = json.dumps(payload, indent=2) + "\n"
    else:
        header = ("index", "E0", "E1", "gap", "chi", "sector0", "sector1",
                  "psi0_re", "psi0_im", "psi1_re", "psi1_im")
        rows = []
        for i in range(params.basis.dim):
            rows.append((
                str(i), _fmt(sol.e0), _fmt(sol.e1), _fmt(sol.gap), _fmt(chi_value),
                sol.sectors[0] or "", sol.sectors[1] or "",
                _fmt(sol.psi0.amps[i].real), _fmt(sol.psi0.amps[i].imag),
                _fmt(sol.psi1.amps[i].real), _fmt(sol.psi1.amps[i].imag),
            ))
        text = _csv_lines(header, rows)
    _emit(text, _resolve_output(args.output))
    return 0


def _scan_row_cells(row: itf.ScanRow) -> tuple[str, ...]:
    return (_fmt(row.theta), _fmt(row.parity), _fmt(row.sigma_parity),
            _fmt(row.parity_deriv), _fmt(row.sigma_theta),
            _fmt(row.precision_norm), row.flag)


def cmd_scan_parity(args) -> int:
    start, stop, count = _parse_grid_spec(args.theta, "--theta")
    initial = _parse_state(args.state, args)
    rows = itf.scan(initial, itf.theta_grid(start, stop, count))
    if args.format == "json":
        payload = {
            "n_atoms": args.n_atoms,
            "state": args.state,
            "rows": [{col: getattr(row, col) for col in SCAN_COLUMNS} for row in rows],
        }
        text = json.dumps(payload, indent=2) + "\n"
    else:
        text = _csv_lines(SCAN_COLUMNS, [_scan_row_cells(row) for row in rows])
    _emit(text, _resolve_output(args.output))
    return 0


def cmd_gap_scan(args) -> int:
    n_values = _parse_n_list(args.n_list)
    if args.chi.strip() == "inf":
        chi_values = [math.inf]
    else:
        lo, hi, count = _parse_grid_spec(args.chi, "--chi")
        chi_values = np.logspace(lo, hi, count).tolist()
    rows = model.gap_scan(n_values, chi_values, args.tunneling)
    if args.format == "json":
        payload = [
            {
                "N": row.n_atoms,
                "chi": row.chi,
                "U": row.interaction,
                "E0": row.e0,
                "E1": row.e1,
                "gap": row.gap,
                "underflow_flag": "underflow" if row.underflow else "ok",
            }
            for row in rows
        ]
        text = json.dumps(payload, indent=2) + "\n"
    else:
        cells = [
            (str(row.n_atoms), _fmt(row.chi), _fmt(row.interaction), _fmt(row.e0),
             _fmt(row.e1), _fmt(row.gap), "underflow" if row.underflow else "ok")
            for row in rows
        ]
        text = _csv_lines(GAP_COLUMNS, cells)
    _emit(text, _resolve_output(args.output))
    return 0


def cmd_verify(args) -> int:
    start = perf_counter()
    results = checks.run_checks(quick=args.quick)
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        print(f"[{status}] {res.name} ({res.seconds:.2f}s): {res.detail}")
    failed = [res for res in results if not res.passed]
    total = perf_counter() - start
    print(f"{len(results) - len(failed)}/{len(results)} checks passed in {total:.2f}s")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="catwell",
        description="Double-well condensate ground states and parity interferometry.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_io(p, default_format):
        p.add_argument("--output", default=None, help="output file (default stdout)")
        p.add_argument("--format", choices=("csv", "json"), default=default_format)

    p_ground = sub.add_parser("ground-state", help="lowest two levels and their states")
    p_ground.add_argument("-N", dest="n_atoms", type=int, required=True)
    p_ground.add_argument("-J", dest="tunneling", type=float, default=1.0)
    p_ground.add_argument("-U", dest="interaction", type=float, default=0.0)
    p_ground.add_argument("--epsilon", type=float, default=0.0, help="well tilt")
    add_io(p_ground, "json")
    p_ground.set_defaults(func=cmd_ground_state)

    p_scan = sub.add_parser("scan-parity", help="parity readout over a phase grid")
    p_scan.add_argument("-N", dest="n_atoms", type=int, required=True)
    p_scan.add_argument("-J", dest="tunneling", type=float, default=1.0)
    p_scan.add_argument("-U", dest="interaction", type=float, default=0.0)
    p_scan.add_argument("--epsilon", type=float, default=0.0, help="well tilt")
    p_scan.add_argument("--theta", default="0:6.283185307179586:721",
                        help="phase grid start:stop:count")
    p_scan.add_argument("--state", default="ground",
                        help="initial state: ground, cat:PHI or thermal")
    add_io(p_scan, "csv")
    p_scan.set_defaults(func=cmd_scan_parity)

    p_gap = sub.add_parser("gap-scan", help="gap between the two lowest levels")
    p_gap.add_argument("-N", dest="n_list", default="3,6,9,12,15",
                       help="comma-separated atom numbers")
    p_gap.add_argument("-J", dest="tunneling", type=float, default=1.0)
    p_gap.add_argument("--chi", default="-2:2:41",
                       help="log10 chi grid start:stop:count, or 'inf' for U=0")
    add_io(p_gap, "csv")
    p_gap.set_defaults(func=cmd_gap_scan)

    p_verify = sub.add_parser("verify", help="run the built-in self checks")
    p_verify.add_argument("--quick", action="store_true", help="fast subset only")
    p_verify.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ConvergenceError, ResidualError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
