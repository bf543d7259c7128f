import numpy as np
import pytest

from ising_forge import (
    AntiUnitaryOp,
    CatalogueError,
    NonProjectiveError,
    antiunitary_symmetry,
    catalogue_names,
    check_symmetry,
    commutator,
    embed,
    make_fixed_matrix,
    majorana_field_residual,
    max_abs,
    pauli_algebra_residual,
    projective_phase,
)
from ising_forge.qudit_algebra import PAULI, SQ3

PHI_GRID = (0.0, np.pi / 4, 1.0)


def test_field_spectrum_two_doublets():
    evals = np.linalg.eigvalsh(make_fixed_matrix("X4"))
    assert np.allclose(evals, [-SQ3, -SQ3, SQ3, SQ3], atol=1e-14)


def test_x4_equals_sum_of_conjugated_flavor_unitaries():
    total = sum(make_fixed_matrix("U" + al).conj() for al in "xyz")
    assert max_abs(total - make_fixed_matrix("X4")) == 0.0


@pytest.mark.parametrize("alpha", "xyz")
def test_flavor_parity_from_unitary_square(alpha):
    u = make_fixed_matrix("U" + alpha)
    za = make_fixed_matrix("Z" + alpha, np.pi / 4)
    assert max_abs(u @ u.conj() - za) < 1e-15
    # involution up to complex conjugation: U U* is diagonal with +-1 entries
    d = np.diag(u @ u.conj())
    assert np.allclose(np.abs(d), 1.0) and np.allclose(np.imag(d), 0.0)


@pytest.mark.parametrize("phi", PHI_GRID)
def test_diagonal_flavor_operators_are_real(phi):
    for name in ("Zx", "Zy", "Zz"):
        m = make_fixed_matrix(name, phi)
        assert max_abs(m - np.diag(np.diag(m))) == 0.0
        assert max_abs(m - m.conj().T) < 1e-15


def test_zz_is_z_squared_and_phase_free():
    z = make_fixed_matrix("Z4")
    assert max_abs(z @ z - make_fixed_matrix("Zz")) == 0.0
    assert max_abs(make_fixed_matrix("Zz", 0.3) - make_fixed_matrix("Zz")) == 0.0


def test_three_state_shift_and_clock():
    x3 = make_fixed_matrix("X3")
    assert max_abs(x3 @ x3 @ x3 - np.eye(3)) == 0.0
    z3 = make_fixed_matrix("Z3", 0.7)
    assert max_abs(z3 @ z3.conj().T - np.eye(3)) < 1e-15


@pytest.mark.parametrize("name", ["S12", "S13", "S14", "S23", "S24", "S34"])
def test_antiunitary_permutations_preserve_field(name):
    sym = antiunitary_symmetry(name)
    assert sym.conjugates
    assert check_symmetry(sym, make_fixed_matrix("X4")) < 1e-14


@pytest.mark.parametrize("name", ["U123", "U12_34", "U13_24", "U14_23"])
def test_even_permutations_preserve_field(name):
    sym = antiunitary_symmetry(name)
    assert not sym.conjugates
    assert check_symmetry(sym, make_fixed_matrix("X4")) < 1e-14


def test_time_reversal_commutes_with_clock_and_field():
    t = antiunitary_symmetry("T")
    assert check_symmetry(t, make_fixed_matrix("Z4")) < 1e-14
    assert check_symmetry(t, make_fixed_matrix("X4")) < 1e-14


def test_projective_pair_anticommutes():
    a = make_fixed_matrix("U12_34")
    b = make_fixed_matrix("U13_24")
    assert projective_phase(a, b) == pytest.approx(-1.0)
    # same wedge relation for the flavor unitaries themselves
    uy, uz = make_fixed_matrix("Uy"), make_fixed_matrix("Uz")
    assert projective_phase(uy, uz) == pytest.approx(-1.0)
    assert max_abs(commutator(uy, uz) - 2 * uy @ uz) < 1e-14


def test_projective_phase_rejects_non_scalar_group_commutator():
    a = make_fixed_matrix("Ux")
    with pytest.raises(NonProjectiveError):
        projective_phase(a, make_fixed_matrix("X4") / SQ3 + np.eye(4) * 0.1)


def test_majorana_triple_reproduces_field():
    assert majorana_field_residual() < 1e-14


def test_pauli_algebra_residual_detects_wrong_triple():
    assert pauli_algebra_residual(PAULI["x"], PAULI["y"], PAULI["z"]) < 1e-15
    assert pauli_algebra_residual(PAULI["x"], PAULI["y"], PAULI["x"]) > 1.0


def test_embed_site_ordering():
    # site 0 is the most significant factor
    op = np.diag([1.0, -1.0]).astype(complex)
    m0 = embed(op, 0, 2, 2).toarray()
    assert np.allclose(np.diag(m0), [1, 1, -1, -1])
    m1 = embed(op, 1, 2, 2).toarray()
    assert np.allclose(np.diag(m1), [1, -1, 1, -1])


def test_catalogue_rejects_unknown_name():
    with pytest.raises(CatalogueError):
        make_fixed_matrix("sq")
    assert "X4" in catalogue_names()


def test_antiunitary_composition_conjugates_right_factor():
    s12 = antiunitary_symmetry("S12")
    comp = s12.compose(s12)
    assert not comp.conjugates  # product of two antiunitaries is unitary
    z = make_fixed_matrix("Z4")
    direct = s12.act(s12.act(z))
    assert max_abs(comp.act(z) - direct) < 1e-14


def test_antiunitary_requires_unitary_matrix():
    with pytest.raises(Exception):
        AntiUnitaryOp(np.diag([1.0, 2.0]).astype(complex))
