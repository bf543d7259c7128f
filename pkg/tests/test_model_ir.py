import numpy as np
import pytest

from ising_forge import (
    CatalogueError,
    DimensionError,
    PauliTerm,
    QubitModel,
    SchemaError,
    build_lattice,
    deserialize,
    load_model,
    pauli_string_dict,
    resolve_site_op,
    save_model,
    serialize,
    standard_model,
)
from ising_forge.model_ir import hermiticity_residual, pauli_dict_distance


def test_periodic_chain_uniform_weights():
    lat = build_lattice("chain", 4, "periodic", 0.0)
    assert lat.nsites == 4
    assert len(lat.bonds) == 4
    assert all(b.weight == 1.0 for b in lat.bonds)


def test_open_chain_full_stagger_leaves_intercell_dimers():
    # b = +1 kills the intra-cell bonds of the (2n-1, 2n) unit cell
    lat = build_lattice("chain", 4, "open", 1.0)
    assert [b.weight for b in lat.bonds] == [0.0, 2.0, 0.0]
    lat = build_lattice("chain", 4, "open", -1.0)
    assert [b.weight for b in lat.bonds] == [2.0, 0.0, 2.0]


def test_chain_rejects_overdriven_stagger():
    with pytest.raises(DimensionError):
        build_lattice("chain", 4, "open", 1.5)


def test_periodic_honeycomb_counts_and_label_partition():
    lat = build_lattice("honeycomb", (2, 2), "periodic")
    assert lat.nsites == 8
    assert len(lat.bonds) == 12
    per_site = {s: [] for s in range(8)}
    for b in lat.bonds:
        per_site[b.i].append(b.label)
        per_site[b.j].append(b.label)
    for labels in per_site.values():
        assert sorted(labels) == ["x", "y", "z"]


def test_star_honeycomb_decoration():
    # each honeycomb site becomes a center plus three corners
    hexlat = build_lattice("honeycomb", (2, 2), "periodic")
    star = build_lattice("star_honeycomb", (2, 2), "periodic")
    assert star.nsites == 4 * hexlat.nsites
    assert len(star.bonds_by_label("plain")) == 6 * hexlat.nsites
    for al in "xyz":
        assert len(star.bonds_by_label(al)) == len(hexlat.bonds_by_label(al))


def test_heisenberg_two_site_spectrum():
    lat = build_lattice("chain", 2, "open")
    model = standard_model("heisenberg", lat, J=1.0)
    mats = {op: resolve_site_op(op, 2) for op in ("x", "y", "z", "plus", "minus")}
    ham = np.zeros((4, 4), dtype=complex)
    for t in model.terms:
        acc = np.eye(1)
        for _, op in sorted(t.factors):
            acc = np.kron(acc, mats[op])
        ham += t.coeff * acc
    evals = np.linalg.eigvalsh(ham)
    assert np.allclose(evals, [-0.75, 0.25, 0.25, 0.25], atol=1e-14)


def test_xxz_at_zero_delta_is_xy():
    lat = build_lattice("chain", 3, "periodic")
    xy = standard_model("xy", lat, J=0.7)
    xxz0 = standard_model("xxz", lat, J=0.7, delta=0.0)
    assert pauli_dict_distance(pauli_string_dict(xy.terms), pauli_string_dict(xxz0.terms)) == 0.0


def test_kitaev_term_count_per_axis():
    lat = build_lattice("honeycomb", (2, 2), "periodic")
    model = standard_model("kitaev", lat, couplings=(1 / 3, 1 / 3, 1 / 3))
    assert len(model.terms) == 12
    per_axis = {"x": 0, "y": 0, "z": 0}
    for t in model.terms:
        ops = {op for _, op in t.factors}
        assert len(ops) == 1
        per_axis[ops.pop()] += 1
    assert per_axis == {"x": 4, "y": 4, "z": 4}


def test_kitaev_requires_labeled_bonds():
    lat = build_lattice("chain", 4, "periodic")
    with pytest.raises(SchemaError):
        standard_model("kitaev", lat, couplings=(1, 1, 1))


def test_unknown_model_name():
    with pytest.raises(CatalogueError):
        standard_model("sherrington", build_lattice("chain", 2, "open"))


def test_hermiticity_rejection_on_construction():
    lat = build_lattice("chain", 2, "open")
    with pytest.raises(SchemaError):
        QubitModel(lat, (PauliTerm(1.0, ((0, "plus"), (1, "plus"))),))
    # balanced pair is fine
    QubitModel(
        lat,
        (
            PauliTerm(0.5j, ((0, "plus"), (1, "plus"))),
            PauliTerm(-0.5j, ((0, "minus"), (1, "minus"))),
        ),
    )


def test_hermiticity_residual_value():
    terms = (
        PauliTerm(1.0, ((0, "plus"),)),
        PauliTerm(0.5, ((0, "minus"),)),
    )
    assert hermiticity_residual(terms) == pytest.approx(0.5)


def test_term_rejects_repeated_site():
    with pytest.raises(SchemaError):
        PauliTerm(1.0, ((0, "x"), (0, "y")))


def test_round_trip_heisenberg(tmp_path):
    lat = build_lattice("chain", 4, "periodic", 0.25)
    model = standard_model("heisenberg", lat, J=0.3)
    path = tmp_path / "model.json"
    save_model(model, path)
    back = load_model(path)
    assert back == model


def test_round_trip_transmuted(tmp_path):
    from ising_forge import transmute_qubit_model

    lat = build_lattice("chain", 3, "periodic")
    qm = standard_model("xy", lat, J=1.0)
    ising = transmute_qubit_model(qm, phi=0.4, path="three_state", lam=2.0)
    path = tmp_path / "ising.json"
    save_model(ising, path)
    back = load_model(path)
    assert back == ising


def test_deserialize_names_bad_op():
    data = serialize(standard_model("xy", build_lattice("chain", 2, "open")))
    data["terms"][0]["factors"][0]["op"] = "sq"
    with pytest.raises(SchemaError, match="op"):
        deserialize(data)


def test_deserialize_rejects_out_of_range_site():
    data = serialize(standard_model("xy", build_lattice("chain", 2, "open")))
    data["terms"][0]["factors"][0]["site"] = 5
    with pytest.raises(SchemaError, match="site"):
        deserialize(data)


def test_deserialize_rejects_non_hermitian_file():
    data = serialize(standard_model("xy", build_lattice("chain", 2, "open")))
    data["terms"] = data["terms"][:1]
    with pytest.raises(SchemaError, match="Hermitian"):
        deserialize(data)


def test_pauli_string_dict_expands_ladder_operators():
    terms = (PauliTerm(1.0, ((0, "plus"),)), PauliTerm(1.0, ((0, "minus"),)))
    d = pauli_string_dict(terms, drop_tol=1e-15)
    assert set(d) == {(((0, "x")))} or set(d) == {((0, "x"),)}
    assert d[((0, "x"),)] == pytest.approx(1.0)


def test_resolve_site_op_dimensions_and_phase():
    z3 = resolve_site_op("Z", 3, 0.5)
    assert z3.shape == (3, 3)
    assert np.allclose(np.abs(np.diag(z3)), 1.0)
    z4 = resolve_site_op("Z", 4, 0.5)
    assert np.allclose(z4 @ z4, resolve_site_op("Zz", 4, 0.5) * np.exp(1j))
    with pytest.raises(CatalogueError):
        resolve_site_op("Zx", 3)
