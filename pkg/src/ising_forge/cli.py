"""Command surface binding the library modules.

Every report command writes delimited text (CSV with a versioned comment
header) or JSON; --plot additionally renders a figure next to it.  Exit
status: 0 on success, 1 when a numeric check fails, 2 on input errors.
Outputs are deterministic for a fixed configuration, byte-identical
across runs up to the version in the header line.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, acceptance, bose_hubbard, kitaev_solver, potts_pt, rydberg
from .errors import (
    CatalogueError,
    DimensionError,
    InputError,
    IsingForgeError,
    PathMismatchError,
    PresetError,
    SchemaError,
    SingularityError,
)
from .exact_diag import convergence_sweep, two_site_spt
from .model_ir import (
    PauliTerm,
    QubitModel,
    build_lattice,
    load_model,
    resolve_site_op,
    save_model,
    standard_model,
)
from .qudit_algebra import make_fixed_matrix, pauli_algebra_residual
from .transmute import (
    four_state_field,
    project_operator,
    three_state_field,
    transmute_qubit_model,
)

SQ3 = math.sqrt(3.0)

_INPUT_FAILURES = (
    InputError,
    SchemaError,
    CatalogueError,
    DimensionError,
    PathMismatchError,
    PresetError,
    SingularityError,
    FileNotFoundError,
    IsADirectoryError,
    json.JSONDecodeError,
)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    return f"{float(value):.12g}"


def _round12(value: float) -> float:
    return float(f"{float(value):.12g}")


def _emit_rows(path, columns, rows, comments=()):
    lines = [f"# ising-forge {__version__}"]
    lines.extend(f"# {c}" for c in comments)
    lines.append(",".join(columns))
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    text = "\n".join(lines) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _emit_json(path, payload):
    text = json.dumps(payload, indent=2) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _env_jobs():
    raw = os.environ.get("ISING_FORGE_JOBS")
    if raw is None or raw == "":
        return None
    try:
        jobs = int(raw)
    except ValueError:
        raise InputError(f"ISING_FORGE_JOBS must be an integer, got {raw!r}")
    return jobs if jobs > 0 else None


def _cmd_transmute(args, jobs):
    model = load_model(args.inp)
    ising = transmute_qubit_model(
        model, phi=args.phi, path=args.path.replace("-", "_"), lam=args.lam)
    save_model(ising, args.out)
    return 0


def _cmd_verify_algebra(args, jobs):
    worst = 0.0
    lines = []
    for phi in args.phi:
        field = four_state_field(phi)
        mats = [
            project_operator(field, SQ3 * resolve_site_op("Z" + al, 4, phi)).as_matrix()
            for al in "xyz"
        ]
        res = pauli_algebra_residual(*mats)
        worst = max(worst, res)
        lines.append(f"four_state phi={_fmt(phi)} residual {_fmt(res)}")
    field = three_state_field(0.0)
    raising = project_operator(field, resolve_site_op("Z", 3)).as_matrix()
    x3 = make_fixed_matrix("X3")
    m = 1j * x3 / SQ3
    sz = project_operator(field, m + m.conj().T).as_matrix()
    res = pauli_algebra_residual(
        raising + raising.conj().T, (raising - raising.conj().T) / 1j, sz)
    worst = max(worst, res)
    lines.append(f"three_state residual {_fmt(res)}")
    ok = worst <= args.tol
    lines.append(f"worst {_fmt(worst)} tol {_fmt(args.tol)} "
                 + ("ok" if ok else "exceeded"))
    sys.stdout.write("\n".join(lines) + "\n")
    return 0 if ok else 1


def _cmd_ed_converge(args, jobs):
    lat = build_lattice("chain", args.sites, args.boundary)
    if args.model == "heisenberg":
        target = standard_model("heisenberg", lat, J=args.j)
        path = args.path or "four-state"
    else:
        terms = []
        for b in lat.bonds:
            w = args.j * b.weight
            terms.append(PauliTerm(w, ((b.i, "plus"), (b.j, "minus"))))
            terms.append(PauliTerm(w, ((b.i, "minus"), (b.j, "plus"))))
        target = QubitModel(lat, tuple(terms))
        path = args.path or "three-state"
    ising = transmute_qubit_model(target, phi=args.phi, path=path.replace("-", "_"))
    sweep = convergence_sweep(ising, target, args.lambdas, k=args.k, jobs=jobs)
    comments = [
        "columns: lambda, max excitation error vs target, k",
        f"exponent {_fmt(sweep.exponent) or '-'}",
        f"fit_residual {_fmt(sweep.fit_residual) or '-'}",
    ]
    _emit_rows(args.out, ("lambda", "spectral_error", "k"), sweep.rows, comments)
    if args.plot:
        from . import plotting
        plotting.render_sweep(sweep.rows, args.plot)
    return 0


def _cmd_spt2(args, jobs):
    rows = []
    for lam in args.lambdas:
        point = two_site_spt(args.j, lam)
        rows.append((lam, point.report.entropy, point.gap,
                     point.report.degeneracy_pattern[0]))
    _emit_rows(args.out, ("lambda", "entropy", "gap", "schmidt_degeneracy"), rows)
    if args.plot:
        from . import plotting
        plotting.render_spt(rows, args.plot)
    return 0


def _cmd_kitaev_gap(args, jobs):
    params = kitaev_solver.KitaevParams(*args.j, args.lam)
    gap = kitaev_solver.gap(params, grid_n=args.grid)
    label = kitaev_solver.phase_label(params)
    crit = kitaev_solver.critical_fields(params)
    lc1 = crit.lambda_c1
    rows = [
        ("gap", gap),
        ("label", label),
        ("lambda_c", crit.lambda_c),
        ("lambda_c1", "inf" if lc1 == math.inf else lc1),
        ("lambda_c2", crit.lambda_c2),
    ]
    _emit_rows(args.out, ("quantity", "value"), rows)
    return 0


def _cmd_kitaev_phasediag(args, jobs):
    rows = kitaev_solver.phase_scan(
        args.lam, args.res, sign=args.sign,
        gap_grid=args.gap_grid, chern_grid=args.chern_grid, jobs=jobs)
    _emit_rows(args.out, ("Jx", "Jy", "Jz", "lambda", "gap", "chern", "label"), rows)
    if args.plot:
        from . import plotting
        plotting.render_phase_scan(rows, args.plot)
    return 0


def _cmd_potts_eff(args, jobs):
    res = potts_pt.effective_xxz(args.j, args.lam)
    try:
        kval = _round12(potts_pt.luttinger_K(res.delta))
    except IsingForgeError:
        kval = None
    payload = {
        "j": _round12(res.j),
        "lambda": _round12(res.lam),
        "j_eff": _round12(res.j_eff),
        "delta": _round12(res.delta),
        "nnn_flip": _round12(res.nnn_flip),
        "triple_term": _round12(res.triple_term),
        "luttinger_K": kval,
    }
    _emit_json(args.out, payload)
    return 0


def _cmd_potts_validate(args, jobs):
    rows = potts_pt.validate_against_ed(
        args.j, args.lambdas, args.sites, k=args.k, boundary=args.boundary)
    _emit_rows(args.out, ("lambda", "err1", "err2"), rows)
    if args.plot:
        from . import plotting
        plotting.render_validation(rows, args.plot)
    return 0


def _cmd_rydberg(args, jobs):
    picked = [args.c6 is not None, args.u is not None, args.case is not None]
    if sum(picked) != 1:
        raise InputError("pick exactly one of --c6, --u, --case")
    if args.c6 is not None:
        pe = rydberg.from_c6(*args.c6, r_um=args.r)
    elif args.u is not None:
        pe = rydberg.PairEnergies(*args.u)
    else:
        pe = rydberg.bundled_pair_energies(args.case, sigma=args.sigma)
    sc = rydberg.couplings(pe)
    payload = {
        "J_pm": _round12(sc.j_pm),
        "J_pp": _round12(sc.j_pp),
        "phase": _round12(sc.phase),
        "ratio": _round12(sc.ratio),
    }
    _emit_json(args.out, payload)
    return 0


def _cmd_bh_verify(args, jobs):
    rows = [(chk.ratio, chk.mismatch)
            for chk in bose_hubbard.validation_rows(
                args.preset, ratios=args.ratios, k=args.k)]
    _emit_rows(args.out, ("lambda_ratio", "mismatch"), rows)
    if args.plot:
        from . import plotting
        plotting.render_bh(rows, args.plot)
    return 0


def _cmd_selftest(jobs):
    results = acceptance.run_all(jobs=jobs)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status} {r.name} ({r.seconds:.2f}s): {r.detail}")
    npass = sum(r.passed for r in results)
    print(f"{npass}/{len(results)} criteria passed")
    return 0 if npass == len(results) else 1


_HANDLERS = {
    "transmute": _cmd_transmute,
    "verify-algebra": _cmd_verify_algebra,
    "ed-converge": _cmd_ed_converge,
    "spt2": _cmd_spt2,
    "kitaev-gap": _cmd_kitaev_gap,
    "kitaev-phasediag": _cmd_kitaev_phasediag,
    "potts-eff": _cmd_potts_eff,
    "potts-validate": _cmd_potts_validate,
    "rydberg": _cmd_rydberg,
    "bh-verify": _cmd_bh_verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ising-forge",
        description="Transmute qubit models into generalized Ising models "
                    "and verify the solvable physics.")
    parser.add_argument("--version", action="version",
                        version=f"ising-forge {__version__}")
    parser.add_argument("--jobs", type=int, default=None,
                        help="worker processes (default: ISING_FORGE_JOBS)")
    parser.add_argument("--selftest", action="store_true",
                        help="run the acceptance battery and exit")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("transmute", help="rewrite a qubit model file as a "
                                         "generalized Ising model file")
    p.add_argument("--in", dest="inp", required=True, metavar="FILE")
    p.add_argument("--out", required=True, metavar="FILE")
    p.add_argument("--path", choices=("four-state", "three-state"),
                   default="four-state")
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--lambda", dest="lam", type=float, default=None)

    p = sub.add_parser("verify-algebra",
                       help="residuals of the projected Pauli algebra")
    p.add_argument("--phi", type=float, nargs="+",
                   default=[0.0, math.pi / 4, 1.0])
    p.add_argument("--tol", type=float, default=1e-12)

    p = sub.add_parser("ed-converge",
                       help="spectral error sweep of a transmuted chain")
    p.add_argument("--model", choices=("heisenberg", "xy"), required=True)
    p.add_argument("--sites", type=int, default=3)
    p.add_argument("--j", type=float, default=1.0)
    p.add_argument("--boundary", choices=("periodic", "open"), default="periodic")
    p.add_argument("--path", choices=("four-state", "three-state"), default=None)
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--lambdas", type=float, nargs="+",
                   default=[50.0, 100.0, 200.0, 400.0])
    p.add_argument("--k", type=int, default=8)
    p.add_argument("--out", default="-", metavar="FILE")
    p.add_argument("--plot", default=None, metavar="FILE.png")

    p = sub.add_parser("spt2", help="two-site entanglement and gap table")
    p.add_argument("--j", type=float, default=1.0)
    p.add_argument("--lambdas", type=float, nargs="+",
                   default=[0.1, 0.5, 1.0, 2.0, 10.0])
    p.add_argument("--out", default="-", metavar="FILE")
    p.add_argument("--plot", default=None, metavar="FILE.png")

    p = sub.add_parser("kitaev-gap",
                       help="gap, phase label, and critical fields at one point")
    p.add_argument("--j", type=float, nargs=3, required=True,
                   metavar=("JX", "JY", "JZ"))
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--grid", type=int, default=201)
    p.add_argument("--out", default="-", metavar="FILE")

    p = sub.add_parser("kitaev-phasediag",
                       help="barycentric phase scan at fixed lambda")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--res", type=int, default=60)
    p.add_argument("--sign", type=int, choices=(1, -1), default=1)
    p.add_argument("--gap-grid", dest="gap_grid", type=int, default=0,
                   help="BZ grid for the gap column (0 skips it)")
    p.add_argument("--chern-grid", dest="chern_grid", type=int, default=0,
                   help="BZ grid for the Chern column (0 skips it)")
    p.add_argument("--out", default="-", metavar="FILE")
    p.add_argument("--plot", default=None, metavar="FILE.png")

    p = sub.add_parser("potts-eff",
                       help="second-order effective couplings of the Potts chain")
    p.add_argument("--j", type=float, default=1.0)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--out", default="-", metavar="FILE")

    p = sub.add_parser("potts-validate",
                       help="perturbative chain against exact diagonalization")
    p.add_argument("--j", type=float, default=1.0)
    p.add_argument("--lambdas", type=float, nargs="+", default=[20.0, 40.0, 80.0])
    p.add_argument("--sites", type=int, default=3)
    p.add_argument("--k", type=int, default=8)
    p.add_argument("--boundary", choices=("periodic", "open"), default="periodic")
    p.add_argument("--out", default="-", metavar="FILE")
    p.add_argument("--plot", default=None, metavar="FILE.png")

    p = sub.add_parser("rydberg", help="pair couplings from interaction energies")
    p.add_argument("--c6", type=float, nargs=3, default=None,
                   metavar=("NN", "TT", "NT"))
    p.add_argument("--r", type=float, default=1.0,
                   help="separation in um for --c6")
    p.add_argument("--u", type=float, nargs=3, default=None,
                   metavar=("UNN", "UTT", "UNT"))
    p.add_argument("--case", default=None, help="bundled C6 case name")
    p.add_argument("--sigma", type=int, choices=(1, -1), default=None)
    p.add_argument("--out", default="-", metavar="FILE")

    p = sub.add_parser("bh-verify",
                       help="two-star cluster ED against the effective bond")
    p.add_argument("--preset", choices=("interaction", "hopping"), required=True)
    p.add_argument("--ratios", type=float, nargs="+", default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--out", default="-", metavar="FILE")
    p.add_argument("--plot", default=None, metavar="FILE.png")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        jobs = args.jobs if args.jobs is not None else _env_jobs()
        if args.selftest:
            return _cmd_selftest(jobs)
        if args.command is None:
            parser.error("a subcommand is required (or --selftest)")
        return _HANDLERS[args.command](args, jobs)
    except _INPUT_FAILURES as exc:
        print(f"ising-forge: error: {exc}", file=sys.stderr)
        return 2
    except IsingForgeError as exc:
        print(f"ising-forge: numeric failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
