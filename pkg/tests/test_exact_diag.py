import itertools

import numpy as np
import pytest
import scipy.sparse as sp

from ising_forge import (
    DimensionError,
    IsingModel,
    build_lattice,
    assemble,
    classical_ground_count,
    convergence_sweep,
    entanglement,
    four_state_field,
    lowest_k,
    make_fixed_matrix,
    staggered_chain_ground,
    standard_model,
    string_order,
    three_state_field,
    transmute_qubit_model,
    two_site_spt,
)
from ising_forge.model_ir import PauliTerm, QubitModel
from ising_forge.qudit_algebra import SQ3

LN2 = np.log(2.0)


def test_assemble_two_site_heisenberg():
    lat = build_lattice("chain", 2, "open")
    ham = assemble(standard_model("heisenberg", lat, J=1.0))
    evals = np.linalg.eigvalsh(ham.toarray())
    assert np.allclose(evals, [-0.75, 0.25, 0.25, 0.25], atol=1e-14)


def test_assemble_single_site_field_is_the_field():
    lat = build_lattice("custom", 1, "open", bonds=[])
    model = IsingModel(lat, 4, (), field=four_state_field(), lam=1.0)
    ham = assemble(model).toarray()
    assert np.allclose(ham, make_fixed_matrix("X4"), atol=1e-15)


def test_assemble_caps_dimension():
    lat = build_lattice("chain", 11, "open")
    model = IsingModel(lat, 4, (PauliTerm(1.0, ((0, "Zz"), (1, "Zz"))),))
    with pytest.raises(DimensionError):
        assemble(model)


def test_assemble_requires_numeric_lambda():
    lat = build_lattice("chain", 2, "open")
    ising = transmute_qubit_model(
        standard_model("heisenberg", lat), path="four_state"
    )
    with pytest.raises(DimensionError):
        assemble(ising)


def test_assemble_three_state_field_with_absorbed_h():
    lat = build_lattice("chain", 2, "open")
    model = QubitModel(
        lat,
        (
            PauliTerm(0.5, ((0, "plus"), (1, "minus"))),
            PauliTerm(0.5, ((0, "minus"), (1, "plus"))),
            PauliTerm(0.4, ((0, "z"),)),
        ),
    )
    ising = transmute_qubit_model(model, phi=0.2, path="three_state", lam=3.0)
    got = assemble(ising).toarray()

    z = np.exp(0.2j) * np.diag([1, np.exp(2j * np.pi / 3), np.exp(-2j * np.pi / 3)])
    x3 = make_fixed_matrix("X3")
    eye = np.eye(3)
    want = 0.5 * np.kron(z, z.conj().T) + 0.5 * np.kron(z.conj().T, z)
    f0 = (3.0 + 0.4j / SQ3) * x3
    f1 = 3.0 * x3
    want += np.kron(f0 + f0.conj().T, eye) + np.kron(eye, f1 + f1.conj().T)
    assert np.max(np.abs(got - want)) < 1e-13


def test_lowest_k_dense_heisenberg():
    lat = build_lattice("chain", 2, "open")
    spec = lowest_k(assemble(standard_model("heisenberg", lat)), 4)
    assert np.allclose(spec.eigenvalues, [-0.75, 0.25, 0.25, 0.25], atol=1e-12)
    assert spec.ground_degeneracy == 1
    assert spec.eigenvectors.shape == (4, 4)


def _jw_spectrum(L, J, nlow):
    # open-chain XY = free fermions; independent single-particle oracle
    modes = [J * np.cos(m * np.pi / (L + 1)) for m in range(1, L + 1)]
    sums = sorted(
        sum(c) for r in range(L + 1) for c in itertools.combinations(modes, r)
    )
    return np.array(sums[:nlow])


def test_lowest_k_matches_free_fermions_dense():
    lat = build_lattice("chain", 4, "open")
    spec = lowest_k(assemble(standard_model("xy", lat, J=1.0)), 6)
    assert np.allclose(spec.eigenvalues, _jw_spectrum(4, 1.0, 6), atol=1e-12)


def test_lowest_k_iterative_path_matches_free_fermions():
    # 2^12 sits exactly at the dense cutoff, forcing the Lanczos path
    lat = build_lattice("chain", 12, "open")
    spec = lowest_k(assemble(standard_model("xy", lat, J=1.0)), 3, want_vectors=False)
    assert np.allclose(spec.eigenvalues, _jw_spectrum(12, 1.0, 3), atol=1e-8)


def test_lowest_k_diagonal_fast_path():
    diag = sp.diags(np.array([3.0, -1.0, 2.0, -1.0, 5.0])).tocsr()
    spec = lowest_k(diag, 3)
    assert np.allclose(spec.eigenvalues, [-1.0, -1.0, 2.0])
    assert spec.ground_degeneracy == 2
    for i in range(3):
        v = spec.eigenvectors[:, i]
        assert np.linalg.norm(diag @ v - spec.eigenvalues[i] * v) < 1e-14


def test_excitations_invariant_under_constant_shift():
    lat = build_lattice("chain", 2, "open")
    ham = assemble(standard_model("heisenberg", lat))
    shifted = ham + 5.5 * sp.identity(4, format="csr")
    a = lowest_k(ham, 4).excitations()
    b = lowest_k(shifted, 4).excitations()
    assert np.allclose(a, b, atol=1e-12)


def test_solvable_two_site_limits():
    # lam = 0: pure Potts spectrum {0 x12, 3J x4}
    point = two_site_spt(1.0, 0.0)
    vals, counts = np.unique(np.round(point.energies, 9), return_counts=True)
    assert np.allclose(vals, [0.0, 3.0]) and list(counts) == [12, 4]
    # large lam: singlet limit with gap J
    point = two_site_spt(1.0, 100.0)
    assert abs(point.gap - 1.0) < 0.01
    assert abs(point.report.entropy - LN2) < 1e-10


@pytest.mark.parametrize(
    "lam,gap",
    [(0.1, 0.133573), (0.5, 0.470249), (1.0, 0.659590), (2.0, 0.806464), (10.0, 0.957557)],
)
def test_two_site_spt_entropy_and_gap(lam, gap):
    point = two_site_spt(1.0, lam)
    assert abs(point.report.entropy - LN2) < 1e-10
    assert np.allclose(point.report.spectrum[:2], [0.5, 0.5], atol=1e-10)
    assert point.report.degeneracy_pattern[0] == 2
    assert point.gap == pytest.approx(gap, abs=2e-6)
    assert point.gap > 0


def test_two_site_spt_cross_route():
    # direct 16x16 against the assembled transmuted Heisenberg (shifted)
    lat = build_lattice("chain", 2, "open")
    ising = transmute_qubit_model(
        standard_model("heisenberg", lat, J=1.0), phi=np.pi / 4, path="four_state", lam=1.0
    )
    spec = lowest_k(assemble(ising), 16)
    want = two_site_spt(1.0, 1.0).energies - 0.75  # diag constant -3J/4
    assert np.allclose(spec.eigenvalues, want, atol=1e-11)


def test_entanglement_product_and_bell():
    prod = np.kron([1, 0], [0, 1]).astype(complex)
    assert entanglement(prod, 1).entropy == pytest.approx(0.0, abs=1e-12)
    bell = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
    rep = entanglement(bell, 1)
    assert rep.entropy == pytest.approx(LN2, abs=1e-12)
    assert rep.degeneracy_pattern == (2,)
    with pytest.raises(DimensionError):
        entanglement(bell, 2)


def test_convergence_sweep_heisenberg_from_potts():
    lat = build_lattice("chain", 3, "periodic")
    target = standard_model("heisenberg", lat, J=1.0)
    ising = transmute_qubit_model(target, phi=np.pi / 4, path="four_state")
    res = convergence_sweep(ising, target, [50.0, 100.0, 200.0, 400.0], k=8)
    errs = res.errors()
    assert np.all(np.diff(errs) < 0)
    assert 0.8 <= res.exponent <= 1.2
    assert errs[0] == pytest.approx(3.426e-2, rel=1e-3)
    assert errs[-1] == pytest.approx(4.324e-3, rel=1e-3)


def test_convergence_sweep_xy_from_three_state():
    lat = build_lattice("chain", 3, "periodic")
    terms = []
    for b in lat.bonds:
        terms.append(PauliTerm(1.0, ((b.i, "plus"), (b.j, "minus"))))
        terms.append(PauliTerm(1.0, ((b.i, "minus"), (b.j, "plus"))))
    target = QubitModel(lat, tuple(terms))
    ising = transmute_qubit_model(target, path="three_state")
    res = convergence_sweep(ising, target, [50.0, 100.0, 200.0, 400.0], k=8)
    assert np.all(np.diff(res.errors()) < 0)
    assert 0.8 <= res.exponent <= 1.2


def test_convergence_sweep_zero_lambda_entry():
    lat = build_lattice("chain", 3, "periodic")
    target = standard_model("heisenberg", lat, J=1.0)
    ising = transmute_qubit_model(target, phi=np.pi / 4, path="four_state")
    res = convergence_sweep(ising, target, [0.0, 100.0, 200.0], k=8)
    # the classical point carries O(J) error and is excluded from the fit
    assert res.rows[0][1] > 0.1
    assert res.exponent is not None


def test_convergence_sweep_jobs_do_not_change_content():
    lat = build_lattice("chain", 3, "periodic")
    target = standard_model("heisenberg", lat, J=1.0)
    ising = transmute_qubit_model(target, phi=np.pi / 4, path="four_state")
    seq = convergence_sweep(ising, target, [50.0, 100.0], k=4)
    par = convergence_sweep(ising, target, [50.0, 100.0], k=4, jobs=2)
    assert seq.rows == par.rows


def test_string_order_distinguishes_stagger_sign():
    # three-cell periodic chains; interval spans cells 1..2
    psi_top = staggered_chain_ground(6, +1, J=1.0, lam=1.0, phi=np.pi / 4)
    psi_triv = staggered_chain_ground(6, -1, J=1.0, lam=1.0, phi=np.pi / 4)
    assert abs(string_order(psi_top, "trivial", (1, 2))) < 1e-8
    assert abs(string_order(psi_triv, "trivial", (1, 2))) == pytest.approx(1.0, abs=1e-8)
    assert abs(string_order(psi_top, "spt", (1, 2))) == pytest.approx(1 / 3, abs=1e-8)
    assert abs(string_order(psi_triv, "spt", (1, 2))) < 1e-8


def test_string_order_two_cell_values():
    psi = staggered_chain_ground(4, +1, J=1.0, lam=1.0, phi=np.pi / 4)
    assert abs(string_order(psi, "trivial", (1, 1))) < 1e-8
    assert abs(string_order(psi, "spt", (1, 1))) == pytest.approx(1 / 3, abs=1e-8)


def test_string_order_rejects_misaligned_interval():
    psi = staggered_chain_ground(4, +1)
    with pytest.raises(DimensionError):
        string_order(psi, "trivial", (0, 1))
    with pytest.raises(DimensionError):
        string_order(psi, "trivial", (1, 3))
    with pytest.raises(DimensionError):
        string_order(psi, "bells", (1, 1))


@pytest.mark.parametrize("J", [1.0, -1.0])
def test_classical_degeneracy_matches_ed(J):
    lat = build_lattice("honeycomb", (2, 2), "periodic")
    qm = standard_model("kitaev", lat, couplings=(J, J, J))
    ising = transmute_qubit_model(qm, phi=np.pi / 4, path="four_state", lam=0.0)
    e0, count = classical_ground_count(ising)
    spec = lowest_k(assemble(ising), 40, want_vectors=False)
    assert spec.eigenvalues[0] == pytest.approx(e0, abs=1e-9)
    assert spec.ground_degeneracy == count
    assert e0 == pytest.approx(-36.0 * abs(J))
    assert count == 32
