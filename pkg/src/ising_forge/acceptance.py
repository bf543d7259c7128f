"""Release gate: every numbered claim of the package as a runnable check.

Each criterion returns a CriterionResult with a pass flag, a one-line
detail naming the worst observed number, and its wall time.  A crash
inside a criterion is reported as a failure with the exception text, and
exceeding the per-criterion time budget also fails it.  run_all executes
the battery in order; the CLI --selftest flag and the acceptance test
suite both route through here.
"""

from __future__ import annotations

import math
import time
from typing import Callable, List, NamedTuple, Optional, Tuple

import numpy as np

from . import bose_hubbard, kitaev_solver, potts_pt, rydberg
from .exact_diag import convergence_sweep, two_site_spt
from .model_ir import (
    PauliTerm,
    QubitModel,
    build_lattice,
    pauli_dict_distance,
    pauli_string_dict,
    resolve_site_op,
    standard_model,
)
from .qudit_algebra import (
    antiunitary_symmetry,
    check_symmetry,
    majorana_field_residual,
    make_fixed_matrix,
    pauli_algebra_residual,
    projective_phase,
)
from .transmute import (
    effective_qubit_model,
    four_state_field,
    project_operator,
    three_state_field,
    transmute_qubit_model,
    x_of_q_matrix,
)

SQ3 = math.sqrt(3.0)


class CriterionResult(NamedTuple):
    name: str
    passed: bool
    detail: str
    seconds: float


def _run(name: str, budget: float,
         check: Callable[[], Tuple[bool, str]]) -> CriterionResult:
    start = time.perf_counter()
    try:
        passed, detail = check()
    except Exception as exc:
        passed, detail = False, f"{type(exc).__name__}: {exc}"
    seconds = time.perf_counter() - start
    if passed and seconds > budget:
        passed = False
        detail += f"; over {budget:g}s budget ({seconds:.1f}s)"
    return CriterionResult(name, passed, detail, seconds)


def criterion_1() -> CriterionResult:
    """Field spectra: +-sqrt3, each twofold, across the q family."""

    def check():
        ref = np.array([-SQ3, -SQ3, SQ3, SQ3])
        mats = [make_fixed_matrix("X4")]
        mats += [x_of_q_matrix(q) for q in (0.0, 0.1, 2.0 - SQ3, 0.5)]
        worst = max(float(np.max(np.abs(np.linalg.eigvalsh(m) - ref)))
                    for m in mats)
        return worst <= 1e-10, f"worst spectrum deviation {worst:.3e}"

    return _run("field-spectra", 1.0, check)


def criterion_2() -> CriterionResult:
    """Projected triples close the Pauli algebra on both paths."""

    def check():
        worst = 0.0
        for phi in (0.0, math.pi / 4, 1.0):
            field = four_state_field(phi)
            mats = [
                project_operator(field, SQ3 * resolve_site_op("Z" + al, 4, phi)).as_matrix()
                for al in "xyz"
            ]
            worst = max(worst, pauli_algebra_residual(*mats))
        field = three_state_field(0.0)
        raising = project_operator(field, resolve_site_op("Z", 3)).as_matrix()
        x3 = make_fixed_matrix("X3")
        m = 1j * x3 / SQ3
        sz = project_operator(field, m + m.conj().T).as_matrix()
        sx = raising + raising.conj().T
        sy = (raising - raising.conj().T) / 1j
        worst = max(worst, pauli_algebra_residual(sx, sy, sz))
        return worst <= 1e-12, f"worst algebra residual {worst:.3e}"

    return _run("projected-pauli-algebra", 1.0, check)


def criterion_3() -> CriterionResult:
    """50 randomized models survive transmute -> effective round trip."""

    def check():
        rng = np.random.default_rng(2024)
        ops = ("x", "y", "z", "plus", "minus")
        worst = 0.0
        for _ in range(50):
            nsites = int(rng.integers(2, 5))
            lat = build_lattice("custom", nsites, "open", bonds=[(0, 1)])
            terms = []
            for _ in range(int(rng.integers(2, 7))):
                k = int(rng.integers(1, 4))
                sites = rng.choice(nsites, size=min(k, nsites), replace=False)
                facs = tuple((int(s), str(rng.choice(ops))) for s in sites)
                c = complex(rng.normal(), rng.normal())
                terms.append(PauliTerm(c, facs))
                terms.append(PauliTerm(c, facs).conjugate())
            qm = QubitModel(lat, tuple(terms))
            phi = float(rng.uniform(0, 2 * math.pi))
            ising = transmute_qubit_model(qm, phi=phi, path="four_state", lam=1.0)
            eff = effective_qubit_model(ising)
            dist = pauli_dict_distance(
                pauli_string_dict(eff.qubit_model.terms), pauli_string_dict(qm.terms))
            worst = max(worst, dist)
        return worst <= 1e-12, f"worst coefficient distance {worst:.3e}"

    return _run("round-trip-compiler", 10.0, check)


def criterion_4(jobs: Optional[int] = None) -> CriterionResult:
    """Spectral errors decay like 1/lambda on both transmutation paths."""

    def check():
        lams = [50.0, 100.0, 200.0, 400.0]
        lat = build_lattice("chain", 3, "periodic")
        heis = standard_model("heisenberg", lat, J=1.0)
        sweep1 = convergence_sweep(
            transmute_qubit_model(heis, phi=math.pi / 4, path="four_state"),
            heis, lams, k=8, jobs=jobs)
        terms = []
        for b in lat.bonds:
            terms.append(PauliTerm(1.0, ((b.i, "plus"), (b.j, "minus"))))
            terms.append(PauliTerm(1.0, ((b.i, "minus"), (b.j, "plus"))))
        xy = QubitModel(lat, tuple(terms))
        sweep2 = convergence_sweep(
            transmute_qubit_model(xy, path="three_state"), xy, lams, k=8, jobs=jobs)
        ok = True
        exps = []
        for sweep in (sweep1, sweep2):
            errs = sweep.errors()
            ok = ok and bool(np.all(np.diff(errs) < 0))
            ok = ok and sweep.exponent is not None and 0.8 <= sweep.exponent <= 1.2
            exps.append(sweep.exponent)
        return ok, ("exponents " + ", ".join(f"{e:.4f}" for e in exps)
                    + "; errors monotone" if ok else
                    "exponents " + ", ".join(f"{e}" for e in exps))

    return _run("large-lambda-convergence", 120.0, check)


def criterion_5(jobs: Optional[int] = None) -> CriterionResult:
    """Kitaev solvable line: gap closing, corner dets, Chern parity."""

    def check():
        iso = (1.0 / 3.0,) * 3
        lam_c = kitaev_solver.critical_fields(
            kitaev_solver.KitaevParams(*iso, 0.0)).lambda_c
        if abs(lam_c - 1.0 / SQ3) > 1e-12:
            return False, f"lambda_c {lam_c!r} != 1/sqrt3"
        gap_at = kitaev_solver.gap(
            kitaev_solver.KitaevParams(*iso, lam_c), grid_n=201)
        if gap_at > 1e-6:
            return False, f"gap {gap_at:.3e} at lambda_c exceeds 1e-6"
        worst_margin = math.inf
        for f in (0.855, 0.9, 0.945, 1.045, 1.1, 1.155):
            g = kitaev_solver.gap(
                kitaev_solver.KitaevParams(*iso, f * lam_c), grid_n=201)
            worst_margin = min(worst_margin, g)
        if worst_margin < 1e-3:
            return False, f"margin gap {worst_margin:.3e} below 1e-3"
        rng = np.random.default_rng(7)
        worst_det = 0.0
        for _ in range(100):
            j = rng.uniform(0.1, 1.0, 3)
            lam = float(rng.uniform(0.0, 2.0))
            p = kitaev_solver.KitaevParams(*j, lam)
            worst_det = max(worst_det, kitaev_solver.corner_det_check(p))
        if worst_det > 1e-10:
            return False, f"corner-det deviation {worst_det:.3e}"
        cases = [
            (kitaev_solver.KitaevParams(*iso, 1.0), 1),
            (kitaev_solver.KitaevParams(*iso, 0.3), 0),
            (kitaev_solver.KitaevParams(1.0 / 3.0, 1.0 / 3.0, 2.0, 10.0), 0),
        ]
        for params, parity in cases:
            c = kitaev_solver.chern_number(params, grid_n=201)
            if c % 2 != parity:
                return False, f"Chern {c} at lam={params.lam} has wrong parity"
        return True, (f"gap {gap_at:.2e} at lambda_c, margins >= "
                      f"{worst_margin:.2e}, corner dets <= {worst_det:.2e}, "
                      "Chern parities as printed")

    return _run("kitaev-solvable-line", 120.0, check)


def criterion_6(jobs: Optional[int] = None) -> CriterionResult:
    """Barycentric scan structure at lam = 2.31 and 0.23."""

    def check():
        rows = kitaev_solver.phase_scan(2.31, 60, jobs=jobs)
        center = kitaev_solver.scan_center(rows)
        corners = kitaev_solver.scan_corners(rows)
        if center.label != kitaev_solver.LABEL_CHIRAL:
            return False, f"center at 2.31 is {center.label}"
        want = dict(zip("xyz", kitaev_solver.LABEL_A))
        if corners != want:
            return False, f"corners at 2.31 are {corners}"
        low = kitaev_solver.scan_center(kitaev_solver.phase_scan(0.23, 60, jobs=jobs))
        if low.label != kitaev_solver.LABEL_LOW_FIELD:
            return False, f"center at 0.23 is {low.label}"
        return True, "center Chiral with A_x/A_y/A_z corners; low-field center at 0.23"

    return _run("phase-scan-structure", 60.0, check)


def criterion_7() -> CriterionResult:
    """Two-site SPT point: ln 2 entropy, twofold Schmidt pair, gapped."""

    def check():
        worst = 0.0
        for lam in (0.1, 0.5, 1.0, 2.0, 10.0):
            point = two_site_spt(1.0, lam)
            worst = max(worst, abs(point.report.entropy - math.log(2.0)))
            if point.report.degeneracy_pattern[0] != 2:
                return False, f"Schmidt pattern {point.report.degeneracy_pattern} at lam={lam}"
            if point.gap <= 0:
                return False, f"gapless at lam={lam}"
        return worst <= 1e-10, f"worst entropy deviation {worst:.3e}"

    return _run("two-site-spt", 1.0, check)


def criterion_8() -> CriterionResult:
    """Potts perturbation theory against exact diagonalization."""

    def check():
        thr = potts_pt.relevance_threshold(1.0)
        if not 3.0 <= thr <= 3.1:
            return False, f"threshold {thr!r} outside [3.0, 3.1]"
        kval = potts_pt.luttinger_K(math.cos(5 * math.pi / 9))
        if abs(kval - 9.0 / 8.0) > 1e-12:
            return False, f"K = {kval!r} != 9/8"
        rows = potts_pt.validate_against_ed(1.0, [20.0, 40.0, 80.0], 3, k=8)
        for row in rows:
            if row.err2 >= row.err1:
                return False, f"second order not better at lam={row.lam}"
        r1 = rows[1].err2 / rows[0].err2
        r2 = rows[2].err2 / rows[1].err2
        ok = r1 <= 0.3 and r2 <= 0.3
        return ok, (f"threshold {thr:.4f}, K exact, err2 decay ratios "
                    f"{r1:.4f}, {r2:.4f}")

    return _run("potts-perturbation", 60.0, check)


def criterion_9() -> CriterionResult:
    """Rydberg pair-coupling ratios from the bundled C6 dataset."""

    def check():
        r1 = rydberg.couplings(rydberg.bundled_pair_energies("K-56-58")).ratio
        if not r1 < 0.003:
            return False, f"K-56-58 ratio {r1:.6f} not below 0.003"
        r2 = rydberg.couplings(rydberg.bundled_pair_energies("K-89-92", sigma=-1)).ratio
        if abs(r2 - 0.0009) > 0.0002:
            return False, f"K-89-92 ratio {r2:.6f} outside 0.0009 +- 0.0002"
        r3 = rydberg.couplings(rydberg.bundled_pair_energies("Rb-82-85")).ratio
        if not r3 < 2e-5:
            return False, f"Rb-82-85 ratio {r3:.2e} not below 2e-5"
        return True, f"ratios {r1:.6f}, {r2:.6f}, {r3:.2e}"

    return _run("rydberg-ratios", 1.0, check)


def criterion_10() -> CriterionResult:
    """Bose-Hubbard preset constants and two-star validation."""

    def check():
        j_over_v = bose_hubbard.effective_kitaev("interaction", v=1.0).j[2]
        if abs(j_over_v - (2.0 - SQ3) / 6.0) > 1e-14:
            return False, f"J/V = {j_over_v!r}"
        nu_over_v = bose_hubbard.zero_field_nu("interaction", v=1.0)[2]
        if abs(nu_over_v + 1.0 / (3.0 + SQ3)) > 1e-14:
            return False, f"nu/V = {nu_over_v!r}"
        j_hop = bose_hubbard.effective_kitaev("hopping", w=1.0, t_prime=1.0).j[2]
        if abs(j_hop + (2.0 - SQ3) / 12.0) > 1e-14:
            return False, f"J w/t'^2 = {j_hop!r}"
        near = bose_hubbard.verify_small_cluster("interaction", 10.0)
        far = bose_hubbard.verify_small_cluster("interaction", 100.0)
        if near.mismatch > 0.05:
            return False, f"mismatch {near.mismatch:.4f} at ratio 10 exceeds 5%"
        if far.mismatch >= near.mismatch:
            return False, "mismatch does not decrease with lambda"
        return True, (f"constants exact; mismatch {near.mismatch:.4f} -> "
                      f"{far.mismatch:.5f} for ratio 10 -> 100")

    return _run("bose-hubbard-presets", 60.0, check)


def criterion_11() -> CriterionResult:
    """Symmetry ledger: generators, projective pair, Majorana identity."""

    def check():
        x4 = make_fixed_matrix("X4")
        names = ("S12", "S13", "S14", "S23", "S24", "S34",
                 "U123", "U12_34", "U13_24", "U14_23", "T")
        worst = max(check_symmetry(antiunitary_symmetry(n), x4) for n in names)
        if worst > 1e-14:
            return False, f"generator defect {worst:.3e}"
        phase = projective_phase(make_fixed_matrix("U12_34"),
                                 make_fixed_matrix("U13_24"))
        if abs(phase + 1.0) > 1e-12:
            return False, f"projective phase {phase!r}"
        res = majorana_field_residual()
        if res > 1e-14:
            return False, f"Majorana identity defect {res:.3e}"
        return True, (f"generator defects <= {worst:.2e}, phase -1, "
                      f"Majorana defect {res:.2e}")

    return _run("symmetry-ledger", 1.0, check)


CRITERIA: Tuple[Callable[..., CriterionResult], ...] = (
    criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
    criterion_6, criterion_7, criterion_8, criterion_9, criterion_10,
    criterion_11,
)

_TAKES_JOBS = {criterion_4, criterion_5, criterion_6}


def run_all(jobs: Optional[int] = None) -> List[CriterionResult]:
    results = []
    for fn in CRITERIA:
        if fn in _TAKES_JOBS:
            results.append(fn(jobs=jobs))
        else:
            results.append(fn())
    return results
