import math

import numpy as np
import pytest

from ising_forge.errors import DimensionError, GaplessError
from ising_forge.kitaev_solver import (
    KitaevParams,
    barycentric_grid,
    bloch,
    chern_number,
    corner_det_check,
    critical_fields,
    gap,
    phase_label,
    phase_scan,
    scan_center,
    scan_corners,
)

ISO = (1 / 3, 1 / 3, 1 / 3)
LAM_C_ISO = 1 / math.sqrt(3)


def test_bloch_structure_at_zone_center():
    m = bloch(KitaevParams(0.4, 0.7, 1.1, 0.33), 0.0, 0.0).matrix
    assert m[0, 4] == pytest.approx(3j * 0.4)
    assert m[1, 5] == pytest.approx(3j * 0.7)
    assert m[2, 3] == pytest.approx(3j * 1.1)
    il = 0.33j
    for a, b, want in [(0, 1, il), (0, 2, -il), (1, 2, il),
                       (3, 4, il), (3, 5, -il), (4, 5, il)]:
        assert m[a, b] == pytest.approx(want)
    assert np.max(np.abs(m - m.conj().T)) == 0.0


def test_bloch_momentum_phases():
    kx, ky = 0.83, 2.17
    m = bloch(KitaevParams(*ISO, 0.5), kx, ky).matrix
    assert m[0, 4] == pytest.approx(1j * np.exp(-1j * kx))
    assert m[1, 5] == pytest.approx(1j * np.exp(-1j * ky))
    assert m[4, 0] == pytest.approx(-1j * np.exp(1j * kx))


def test_particle_hole_pairing():
    rng = np.random.default_rng(3)
    for _ in range(20):
        jx, jy, jz = rng.uniform(-2, 2, 3)
        lam = rng.uniform(0.0, 3)
        k = rng.uniform(0, 2 * math.pi, 2)
        ev = np.linalg.eigvalsh(bloch(KitaevParams(jx, jy, jz, lam), *k).matrix)
        assert np.max(np.abs(np.sort(ev) + np.sort(-ev)[::-1])) < 1e-12


def test_zero_field_bands_are_flat_dimers():
    # at lam=0 the matrix splits into three bond dimers with energies
    # +-3|J_alpha|; the classical spin degeneracy lives in the flux
    # sectors, not in the flux-free fermion spectrum
    ev = np.linalg.eigvalsh(bloch(KitaevParams(*ISO, 0.0), 1.0, 2.0).matrix)
    assert np.allclose(np.sort(ev), [-1, -1, -1, 1, 1, 1], atol=1e-12)


def test_params_validation():
    with pytest.raises(DimensionError):
        KitaevParams(0.0, 0.0, 0.0, 1.0)
    with pytest.raises(DimensionError):
        KitaevParams(1.0, 1.0, 1.0, -0.5)
    with pytest.raises(DimensionError):
        KitaevParams(1.0, 1.0, 1.0, 1.0, flux=-1)


def test_corner_det_formula_random_draws():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(100):
        jx, jy, jz = rng.uniform(-2, 2, 3)
        lam = rng.uniform(0.05, 3)
        worst = max(worst, corner_det_check(KitaevParams(jx, jy, jz, lam)))
    assert worst <= 1e-10


def test_gap_closes_at_isotropic_critical_field():
    assert gap(KitaevParams(*ISO, LAM_C_ISO)) <= 1e-6


def test_gap_open_around_isotropic_critical_field():
    for factor in (0.855, 0.9, 0.945, 1.045, 1.1, 1.155):
        g = gap(KitaevParams(*ISO, factor * LAM_C_ISO))
        assert g >= 1e-3, (factor, g)


def test_gap_closes_on_anisotropic_cut_boundaries():
    # Jt=(1,1,4): both transitions of the corner region
    p = KitaevParams(1 / 3, 1 / 3, 4 / 3, 1.0)
    crit = critical_fields(p)
    for lam in (crit.lambda_c2, crit.lambda_c1):
        assert gap(KitaevParams(1 / 3, 1 / 3, 4 / 3, lam)) <= 1e-6
    for lam in (0.95 * crit.lambda_c2, 1.1 * crit.lambda_c2,
                0.95 * crit.lambda_c1, 1.05 * crit.lambda_c1, 0.4):
        assert gap(KitaevParams(1 / 3, 1 / 3, 4 / 3, lam)) >= 1e-3


def test_gap_sign_toggle_invariance():
    rng = np.random.default_rng(11)
    for _ in range(4):
        j = rng.uniform(0.2, 1.5, 3)
        lam = rng.uniform(0.2, 2.0)
        signs = rng.choice([-1.0, 1.0], 3)
        a = gap(KitaevParams(*j, lam), grid_n=61)
        b = gap(KitaevParams(*(signs * j), lam), grid_n=61)
        assert a == pytest.approx(b, abs=1e-9)


def test_critical_fields_isotropic():
    crit = critical_fields(KitaevParams(*ISO, 1.0))
    assert crit.lambda_c == pytest.approx(LAM_C_ISO, abs=1e-15)
    assert crit.lambda_c1 is None
    assert crit.lambda_c2 is None


def test_critical_fields_corner_region():
    crit = critical_fields(KitaevParams(1 / 3, 1 / 3, 4 / 3, 1.0))
    assert crit.lambda_c1 == pytest.approx(math.sqrt(2), abs=1e-14)
    assert crit.lambda_c2 == pytest.approx(math.sqrt(4 / 6), abs=1e-14)
    assert crit.lambda_c == crit.lambda_c2


def test_critical_fields_region_boundary_diverges():
    crit = critical_fields(KitaevParams(0.5 / 3, 0.5 / 3, 1 / 3, 1.0))
    assert crit.lambda_c1 == math.inf


def test_phase_labels_along_anisotropic_cut():
    cut = lambda lam: phase_label(KitaevParams(1 / 3, 1 / 3, 4 / 3, lam))
    assert cut(0.4) == "LowFieldZ2"
    assert cut(1.0) == "Chiral"
    assert cut(2.0) == "A_z"
    iso = lambda lam: phase_label(KitaevParams(*ISO, lam))
    assert iso(0.5) == "LowFieldZ2"
    assert iso(0.7) == "Chiral"


def test_chern_numbers():
    assert chern_number(KitaevParams(*ISO, 1.0)) % 2 == 1
    assert chern_number(KitaevParams(*ISO, 0.3)) == 0
    assert chern_number(KitaevParams(1 / 3, 1 / 3, 2.0, 10.0)) == 0


def test_chern_parity_sign_toggle():
    a = chern_number(KitaevParams(*ISO, 1.0))
    b = chern_number(KitaevParams(-1 / 3, 1 / 3, 1 / 3, 1.0))
    assert a % 2 == b % 2 == 1


def test_chern_rejects_gapless_point():
    with pytest.raises(GaplessError):
        chern_number(KitaevParams(*ISO, LAM_C_ISO))


def test_barycentric_grid_shape():
    pts = barycentric_grid(5)
    assert len(pts) == 15
    assert all(abs(sum(p) - 1.0) < 1e-15 for p in pts)
    with pytest.raises(DimensionError):
        barycentric_grid(1)


def test_phase_scan_high_field_structure():
    rows = phase_scan(2.31, 60)
    assert len(rows) == 60 * 61 // 2
    assert scan_center(rows).label == "Chiral"
    assert scan_corners(rows) == {"x": "A_x", "y": "A_y", "z": "A_z"}


def test_phase_scan_low_field_structure():
    rows = phase_scan(0.23, 60)
    assert scan_center(rows).label == "LowFieldZ2"


def test_phase_scan_near_isotropic_critical_field():
    # lambda just below the isotropic lambda_c: a small central low-field
    # island survives, surrounded by the chiral phase
    rows = phase_scan(0.57, 60)
    labels = {r.label for r in rows}
    assert scan_center(rows).label == "LowFieldZ2"
    assert "Chiral" in labels
    n_low = sum(r.label == "LowFieldZ2" for r in rows)
    assert 0 < n_low < len(rows) // 10


def test_phase_scan_gap_and_chern_columns():
    rows = phase_scan(2.31, 4, gap_grid=41, chern_grid=41)
    assert all(r.gap is not None for r in rows)
    center = scan_center(rows)
    assert center.chern is not None and center.chern % 2 == 1


def test_phase_scan_jobs_do_not_change_content():
    a = phase_scan(2.31, 5, gap_grid=31, jobs=1)
    b = phase_scan(2.31, 5, gap_grid=31, jobs=2)
    assert a == b


def test_phase_scan_sign_flag():
    rows = phase_scan(2.31, 4, sign=-1)
    assert all(r.jx <= 0 and r.jy <= 0 and r.jz <= 0 for r in rows)
    labels_pos = [r.label for r in phase_scan(2.31, 4, sign=+1)]
    labels_neg = [r.label for r in rows]
    assert labels_pos == labels_neg
