"""Command-line interface.

Every artifact starts with a provenance block (command line, tolerances,
package version): ``#`` comment lines in CSV and OBJ files, a
``provenance`` object in JSON, and the description metadata of SVG plots.
Exit status is 0 on success, 1 on numerical failure and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import math
import shlex
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Optional, Sequence

import numpy as np

from . import __version__
from . import profiles as pr
from ._io import text_sink
from .flux import cap_flux, solution_flux
from .pde.domain import DomainError, DomainSpec, GeodesicDisk
from .pde.solver import SolverError, solve_dirichlet, write_diagnostics_json, write_solution_csv
from .surfaces import export_csv, export_obj, revolve

GRID_MIN, GRID_MAX = 16, 1024


# ---------------------------------------------------------------- arg types

def positive(text: str) -> float:
    v = float(text)
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return v


def number(text: str) -> float:
    v = float(text)
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"expected a finite number, got {text!r}")
    return v


def grid_size(text: str) -> int:
    n = int(text)
    if not GRID_MIN <= n <= GRID_MAX:
        raise argparse.ArgumentTypeError(f"grid size must lie in [{GRID_MIN}, {GRID_MAX}], got {n}")
    return n


def _count(lo: int):
    def integer(text: str) -> int:
        n = int(text)
        if n < lo:
            raise argparse.ArgumentTypeError(f"expected an integer >= {lo}, got {n}")
        return n
    return integer


def _sweep(text: str) -> tuple[float, float, str, int]:
    """``a:b:lin|log:n``."""
    parts = text.split(":")
    if len(parts) != 4 or parts[2] not in ("lin", "log"):
        raise argparse.ArgumentTypeError(f"expected a:b:lin|log:n, got {text!r}")
    a, b, n = float(parts[0]), float(parts[1]), int(parts[3])
    if n < 2 or not (math.isfinite(a) and math.isfinite(b)) or a >= b:
        raise argparse.ArgumentTypeError(f"bad sweep range {text!r}")
    if parts[2] == "log" and a <= 0:
        raise argparse.ArgumentTypeError("log sweeps need a positive lower end")
    return a, b, parts[2], n


def _range(text: str) -> tuple[float, float, int]:
    """``a:b:n`` linear range."""
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected a:b:n, got {text!r}")
    a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
    if n < 1 or not (math.isfinite(a) and math.isfinite(b)) or a > b:
        raise argparse.ArgumentTypeError(f"bad range {text!r}")
    return a, b, n


def sweep_values(spec: tuple[float, float, str, int]) -> np.ndarray:
    a, b, kind, n = spec
    if kind == "log":
        return np.geomspace(a, b, n)
    return np.linspace(a, b, n)


# ---------------------------------------------------------------- provenance

def provenance(argv: Sequence[str], args: argparse.Namespace) -> dict:
    tols = {k: v for k, v in sorted(vars(args).items()) if k.endswith("tol")}
    return {"command": shlex.join(["h2rcmc", *argv]), "version": __version__,
            "tolerances": tols}


def header_lines(prov: dict) -> tuple[str, ...]:
    return (f"h2rcmc {prov['version']}",
            f"command: {prov['command']}",
            "tolerances: " + json.dumps(prov["tolerances"], sort_keys=True))


def _emit_json(doc: dict, path: Optional[str]) -> None:
    with text_sink(path) as fh:
        fh.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------- commands

def cmd_classify(args, prov) -> None:
    fam = pr.classify(args.H, args.d)
    doc = {"provenance": prov, "class": fam.value}
    if fam is not pr.FamilyClass.Inadmissible:
        params = pr.ProfileParams(args.H, args.d)
        dom = pr.thresholds(params)
        doc["rho1"] = dom.rho1
        if dom.rho0 is not None:
            doc["rho0"] = dom.rho0
        if dom.rho2 is not None:
            doc["rho2"] = dom.rho2
        if params.H > 0.5:
            s, c, u = pr.special_radii(params.H)
            doc["special_radii"] = {"sphere_rho2": s, "cylinder_rho": c, "unduloid_limit_rho": u}
    _emit_json(doc, None)


def cmd_profile(args, prov) -> None:
    params = pr.ProfileParams(args.H, args.d)
    curve = pr.generate_profile(params, args.n, args.tol, args.rho_max)
    export_csv(curve, args.out, header_lines(prov))


def cmd_mesh(args, prov) -> None:
    params = pr.ProfileParams(args.H, args.d)
    curve = pr.generate_profile(params, args.n, args.tol, args.rho_max)
    mesh = revolve(curve, args.n_theta, extended=args.extended)
    export_obj(mesh, args.out, header_lines(prov))


def cmd_height(args, prov) -> None:
    ds = np.array([args.d]) if args.d is not None else sweep_values(args.sweep)
    hs = [pr.catenoid_height(float(d), args.tol) for d in ds]
    with text_sink(args.out) as fh:
        for line in header_lines(prov):
            fh.write(f"# {line}\n")
        fh.write("d,h\n")
        for d, h in zip(ds, hs):
            fh.write(f"{d:.17g},{h:.17g}\n")


def _domain(args) -> DomainSpec:
    return DomainSpec(GeodesicDisk(tuple(args.center), args.disk_radius, args.model), args.grid_n)


def cmd_solve(args, prov) -> None:
    sol = solve_dirichlet(_domain(args), args.H, args.tol, allow_large_H=args.allow_large_H)
    if args.out:
        write_solution_csv(sol, args.out + ".csv", header_lines(prov))
        write_diagnostics_json(sol, args.out + ".json", prov)
    _emit_json({"provenance": prov, **sol.diagnostics()}, None)


def cmd_flux(args, prov) -> None:
    if args.cap:
        rep = cap_flux(args.H, args.cap, d=args.cap_d, mirrored=args.mirrored)
    else:
        rep = solution_flux(solve_dirichlet(_domain(args), args.H, args.tol))
    _emit_json({"provenance": prov, **rep.to_dict()}, args.out)


def _atlas_row(hd: tuple[float, float]) -> list:
    H, d = hd
    fam = pr.classify(H, d)
    row = [H, d, fam.value, math.nan, math.nan]
    if fam is not pr.FamilyClass.Inadmissible:
        dom = pr.thresholds(pr.ProfileParams(H, d))
        row[3] = dom.rho1
        row[4] = dom.rho2 if dom.rho2 is not None else math.inf
    return row


def _height_row(d: float, tol: float) -> float:
    return pr.catenoid_height(d, tol)


def cmd_sweep(args, prov) -> None:
    Hs = np.linspace(*args.H_range[:2], args.H_range[2])
    ds = np.linspace(*args.d_range[:2], args.d_range[2])
    points = [(float(H), float(d)) for H in Hs for d in ds]
    hd = sweep_values(args.height_sweep)
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as ex:
            rows = list(ex.map(_atlas_row, points, chunksize=16))
            heights = list(ex.map(_height_row, hd, [args.tol] * len(hd)))
    else:
        rows = [_atlas_row(p) for p in points]
        heights = [_height_row(d, args.tol) for d in hd]
    with text_sink(args.out) as fh:
        for line in header_lines(prov):
            fh.write(f"# {line}\n")
        fh.write("H,d,class,rho1,rho2\n")
        for H, d, cls, r1, r2 in rows:
            fh.write(f"{H:.17g},{d:.17g},{cls},{r1:.17g},{r2:.17g}\n")
    if args.svg:
        _plot_atlas(args.svg, prov, hd, heights, Hs, args.tol)


def _plot_atlas(path, prov, ds, heights, Hs, tol) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    matplotlib.rcParams["svg.hashsalt"] = "h2rcmc"
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
    ax1.semilogx(ds, heights, "k-", lw=1.5)
    ax1.axhline(math.pi, color="0.5", ls="--", lw=1)
    ax1.set_xlabel("d")
    ax1.set_ylabel("h(d)")
    ax1.set_title("catenoid height")
    for H in Hs:
        H = float(H)
        if not 0.0 < H <= 2.0:
            continue
        curve = pr.generate_profile(pr.ProfileParams(H, -2.0 * H), 120, tol, rho_max=4.0)
        rho, lam = curve.extended() if H > 0.5 else (curve.rho, curve.lam)
        ax2.plot(rho, lam, lw=1, label=f"H={H:.3g}")
    ax2.set_xlabel("rho")
    ax2.set_ylabel("lambda")
    ax2.set_title("profiles with d = -2H")
    if ax2.lines:
        ax2.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, format="svg",
                metadata={"Date": None, "Description": json.dumps(prov, sort_keys=True)})
    plt.close(fig)


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="h2rcmc", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="family class and thresholds of (H, d)")
    c.add_argument("--H", type=number, required=True)
    c.add_argument("--d", type=number, required=True)
    c.set_defaults(func=cmd_classify)

    def profile_flags(q):
        q.add_argument("--H", type=number, required=True)
        q.add_argument("--d", type=number, required=True)
        q.add_argument("--n", type=_count(2), default=200, help="number of samples")
        q.add_argument("--rho-max", type=positive, default=pr.DEFAULT_RHO_MAX,
                       help="truncation radius for unbounded profiles")
        q.add_argument("--tol", type=positive, default=pr.DEFAULT_TOL)
        q.add_argument("--out", default="-", help="output path ('-' for stdout)")

    c = sub.add_parser("profile", help="sampled profile curve as CSV")
    profile_flags(c)
    c.set_defaults(func=cmd_profile)

    c = sub.add_parser("mesh", help="surface of revolution as OBJ")
    profile_flags(c)
    c.add_argument("--n-theta", type=_count(3), default=64)
    c.add_argument("--extended", action="store_true", help="revolve the symmetric extension")
    c.set_defaults(func=cmd_mesh)

    c = sub.add_parser("height", help="catenoid height h(d) as CSV")
    g = c.add_mutually_exclusive_group(required=True)
    g.add_argument("--d", type=positive)
    g.add_argument("--sweep", type=_sweep, help="a:b:lin|log:n")
    c.add_argument("--tol", type=positive, default=pr.DEFAULT_TOL)
    c.add_argument("--out", default="-")
    c.set_defaults(func=cmd_height)

    def domain_flags(q):
        q.add_argument("--disk-radius", type=positive, default=1.0)
        q.add_argument("--center", type=number, nargs=2, default=(0.0, 0.0), metavar=("X", "Y"))
        q.add_argument("--model", choices=("disk", "halfplane"), default="disk")
        q.add_argument("--grid-n", type=grid_size, default=128)

    c = sub.add_parser("solve", help="solve the CMC graph Dirichlet problem on a geodesic disk")
    domain_flags(c)
    c.add_argument("--H", type=number, required=True)
    c.add_argument("--tol", type=positive, default=1e-8)
    c.add_argument("--allow-large-H", action="store_true")
    c.add_argument("--out", default=None, help="prefix for PREFIX.csv and PREFIX.json")
    c.set_defaults(func=cmd_solve)

    c = sub.add_parser("flux", help="flux balance of a rotational cap or a numerical solution")
    domain_flags(c)
    c.add_argument("--H", type=number, required=True)
    c.add_argument("--tol", type=positive, default=1e-8)
    c.add_argument("--cap", type=positive, default=None, metavar="RHO_C",
                   help="use the rotational cap cut at this radius instead of solving")
    c.add_argument("--cap-d", type=number, default=None, help="profile parameter of the cap")
    c.add_argument("--mirrored", action="store_true")
    c.add_argument("--out", default="-")
    c.set_defaults(func=cmd_flux)

    c = sub.add_parser("sweep", help="classification atlas CSV and SVG plot")
    c.add_argument("--H-range", type=_range, default=(0.0, 1.0, 11), help="a:b:n")
    c.add_argument("--d-range", type=_range, default=(-3.0, 1.0, 17),
                   help="a:b:n (write --d-range=a:b:n when a is negative)")
    c.add_argument("--height-sweep", type=_sweep, default=(1e-3, 1e3, "log", 50))
    c.add_argument("--tol", type=positive, default=pr.DEFAULT_TOL)
    c.add_argument("--jobs", type=_count(1), default=1)
    c.add_argument("--out", default="-")
    c.add_argument("--svg", default=None)
    c.set_defaults(func=cmd_sweep)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command == "flux" and args.cap is None and (args.cap_d is not None or args.mirrored):
        parser.print_usage(sys.stderr)
        print("h2rcmc: error: --cap-d and --mirrored need --cap", file=sys.stderr)
        return 2
    prov = provenance(argv, args)
    try:
        args.func(args, prov)
    except (pr.ProfileError, pr.QuadratureError, SolverError, DomainError, ValueError,
            FloatingPointError, RuntimeError) as exc:
        print(f"h2rcmc: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"h2rcmc: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
