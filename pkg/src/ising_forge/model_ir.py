"""Lattices and term-list Hamiltonian containers.

Hamiltonians live here as lists of terms, each a complex coefficient times a
product of named single-site operators on distinct sites.  Keeping everything
term-wise means transmutation is a pure rewrite of (coeff, op-name) pairs;
matrices are materialized only in exact_diag.

Serialization round-trips through JSON validated against the schema shipped
at data/model.schema.json.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from importlib import resources
from typing import NamedTuple, Optional

import numpy as np
from jsonschema import Draft202012Validator

from .errors import CatalogueError, DimensionError, SchemaError
from .qudit_algebra import PAULI, make_fixed_matrix

HERMITICITY_TOL = 1e-14

GEOMETRIES = ("chain", "honeycomb", "star_honeycomb", "custom")
BOUNDARIES = ("open", "periodic")
BOND_LABELS = ("x", "y", "z", "plain")

# operator vocabularies per on-site dimension
SITE_OPS = {
    2: ("x", "y", "z", "plus", "minus"),
    3: ("Z", "Zdag"),
    4: ("Z", "Zdag", "Zx", "Zy", "Zz"),
}

# op name of the Hermitian conjugate; products on distinct sites need no
# reordering so conjugating a term is factor-wise
_CONJ_OP = {
    "x": "x", "y": "y", "z": "z",
    "plus": "minus", "minus": "plus",
    "Z": "Zdag", "Zdag": "Z",
    "Zx": "Zx", "Zy": "Zy", "Zz": "Zz",
}


class Bond(NamedTuple):
    i: int
    j: int
    label: str
    weight: float


@dataclass(frozen=True)
class Lattice:
    geometry: str
    nsites: int
    bonds: tuple
    boundary: str
    L: Optional[int] = None
    Lx: Optional[int] = None
    Ly: Optional[int] = None
    stagger_b: Optional[float] = None

    def __post_init__(self):
        if self.geometry not in GEOMETRIES:
            raise SchemaError(f"unknown geometry {self.geometry!r}")
        if self.boundary not in BOUNDARIES:
            raise SchemaError(f"unknown boundary {self.boundary!r}")
        for b in self.bonds:
            if b.i == b.j:
                raise SchemaError(f"self-bond on site {b.i}")
            if not (0 <= b.i < self.nsites and 0 <= b.j < self.nsites):
                raise SchemaError(f"bond ({b.i},{b.j}) out of range for {self.nsites} sites")
            if b.label not in BOND_LABELS:
                raise SchemaError(f"unknown bond label {b.label!r}")

    def bonds_by_label(self, label):
        return tuple(b for b in self.bonds if b.label == label)


def build_lattice(geometry, sizes=None, boundary="open", stagger_b=0.0, bonds=None):
    """Construct one of the supported lattices.

    ``sizes`` is L for chains, (Lx, Ly) unit cells for the honeycombs, and
    the site count for custom bond lists.  Chain bond n (1-based, first bond
    joining sites 0 and 1) carries weight 1 + stagger_b*(-1)^n, so b=+1 kills
    the intra-cell bonds of the (2n-1, 2n) unit cell and leaves full-strength
    inter-cell dimers.
    """
    if boundary not in BOUNDARIES:
        raise SchemaError(f"unknown boundary {boundary!r}")

    if geometry == "chain":
        L = int(sizes)
        if L < 2:
            raise DimensionError("chain needs at least 2 sites")
        if abs(stagger_b) > 1:
            raise DimensionError("|stagger_b| <= 1 required on chains")
        nb = L if boundary == "periodic" else L - 1
        blist = []
        for n in range(1, nb + 1):
            w = 1.0 + stagger_b * (-1) ** n
            blist.append(Bond(n - 1, n % L, "plain", w))
        return Lattice("chain", L, tuple(blist), boundary, L=L, stagger_b=stagger_b)

    if geometry in ("honeycomb", "star_honeycomb"):
        if isinstance(sizes, (int, np.integer)):
            Lx = Ly = int(sizes)
        else:
            Lx, Ly = (int(s) for s in sizes)
        if Lx < 1 or Ly < 1:
            raise DimensionError("honeycomb needs at least one unit cell")
        if boundary == "periodic" and (Lx < 2 or Ly < 2):
            raise DimensionError("periodic honeycomb needs Lx, Ly >= 2")

        def a_site(i, j):
            return 2 * ((i % Lx) * Ly + (j % Ly))

        hex_bonds = []
        for i in range(Lx):
            for j in range(Ly):
                a = a_site(i, j)
                hex_bonds.append(Bond(a, a + 1, "z", 1.0))
                if boundary == "periodic" or i > 0:
                    hex_bonds.append(Bond(a, a_site(i - 1, j) + 1, "x", 1.0))
                if boundary == "periodic" or j > 0:
                    hex_bonds.append(Bond(a, a_site(i, j - 1) + 1, "y", 1.0))
        nhex = 2 * Lx * Ly

        if geometry == "honeycomb":
            return Lattice("honeycomb", nhex, tuple(hex_bonds), boundary, Lx=Lx, Ly=Ly)

        # star lattice: each honeycomb site becomes a center plus a triangle of
        # corners; corner k inherits that site's label-k bond
        axis = {"x": 0, "y": 1, "z": 2}
        blist = []
        for s in range(nhex):
            c = 4 * s
            for k in range(3):
                blist.append(Bond(c, c + 1 + k, "plain", 1.0))
            blist.append(Bond(c + 1, c + 2, "plain", 1.0))
            blist.append(Bond(c + 2, c + 3, "plain", 1.0))
            blist.append(Bond(c + 1, c + 3, "plain", 1.0))
        for b in hex_bonds:
            k = axis[b.label]
            blist.append(Bond(4 * b.i + 1 + k, 4 * b.j + 1 + k, b.label, 1.0))
        return Lattice("star_honeycomb", 4 * nhex, tuple(blist), boundary, Lx=Lx, Ly=Ly)

    if geometry == "custom":
        if bonds is None:
            raise DimensionError("custom geometry needs an explicit bond list")
        blist = []
        for entry in bonds:
            if len(entry) == 2:
                i, j = entry
                label, w = "plain", 1.0
            else:
                i, j, label, w = entry
            blist.append(Bond(int(i), int(j), str(label), float(w)))
        if sizes is None:
            nsites = 1 + max(max(b.i, b.j) for b in blist)
        else:
            nsites = int(sizes)
        return Lattice("custom", nsites, tuple(blist), boundary)

    raise SchemaError(f"unknown geometry {geometry!r}")


@dataclass(frozen=True)
class PauliTerm:
    """coeff times a product of named single-site operators on distinct sites.

    The same container carries diagonal qudit factors after transmutation.
    """

    coeff: complex
    factors: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeff", complex(self.coeff))
        facs = tuple((int(s), str(op)) for s, op in self.factors)
        object.__setattr__(self, "factors", facs)
        if not facs:
            raise SchemaError("term needs at least one factor")
        sites = [s for s, _ in facs]
        if len(set(sites)) != len(sites):
            raise SchemaError(f"repeated site in term factors {facs}")
        for _, op in facs:
            if op not in _CONJ_OP:
                raise SchemaError(f"unknown operator name {op!r}")

    def conjugate(self):
        return PauliTerm(
            np.conjugate(self.coeff),
            tuple((s, _CONJ_OP[op]) for s, op in self.factors),
        )

    def sorted_key(self):
        return tuple(sorted(self.factors))


def hermiticity_residual(terms):
    """Max-norm defect of the term list under Hermitian conjugation."""
    acc = {}
    for t in terms:
        acc[t.sorted_key()] = acc.get(t.sorted_key(), 0.0) + t.coeff
    res = 0.0
    for key, c in acc.items():
        ckey = tuple((s, _CONJ_OP[op]) for s, op in key)
        res = max(res, abs(c - np.conjugate(acc.get(ckey, 0.0))))
    return res


def _check_terms(terms, nsites, site_dim, what="term"):
    allowed = SITE_OPS[site_dim]
    for k, t in enumerate(terms):
        for m, (s, op) in enumerate(t.factors):
            if not 0 <= s < nsites:
                raise SchemaError(f"{what}s[{k}].factors[{m}].site: {s} out of range")
            if op not in allowed:
                raise SchemaError(
                    f"{what}s[{k}].factors[{m}].op: {op!r} invalid for site_dim {site_dim}"
                )


@dataclass(frozen=True)
class QubitModel:
    lattice: Lattice
    terms: tuple

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        _check_terms(self.terms, self.lattice.nsites, 2)
        res = hermiticity_residual(self.terms)
        if res > HERMITICITY_TOL:
            raise SchemaError(f"term list not Hermitian, defect {res:.3e}")

    @property
    def nsites(self):
        return self.lattice.nsites

    @property
    def site_dim(self):
        return 2


@dataclass(frozen=True)
class IsingModel:
    """Diagonal interactions plus a transverse-field family at strength lam.

    lam None means the field strength is left symbolic; exact_diag requires
    a number.  h_field carries per-site longitudinal fields absorbed on the
    3-state path.
    """

    lattice: Lattice
    site_dim: int
    diag_terms: tuple
    field: object = None
    lam: Optional[float] = None
    h_field: Optional[tuple] = None

    def __post_init__(self):
        if self.site_dim not in (3, 4):
            raise DimensionError(f"site_dim {self.site_dim} not supported, use 3 or 4")
        object.__setattr__(self, "diag_terms", tuple(self.diag_terms))
        if self.h_field is not None:
            hf = tuple(float(h) for h in self.h_field)
            if len(hf) != self.lattice.nsites:
                raise DimensionError("h_field length must match site count")
            object.__setattr__(self, "h_field", hf)
        _check_terms(self.diag_terms, self.lattice.nsites, self.site_dim, "diag_term")
        res = hermiticity_residual(self.diag_terms)
        if res > HERMITICITY_TOL:
            raise SchemaError(f"diagonal term list not Hermitian, defect {res:.3e}")

    @property
    def nsites(self):
        return self.lattice.nsites


def standard_model(name, lattice, J=1.0, delta=1.0, couplings=None):
    """Named qubit models on a lattice.

    XY and XXZ read (J/4) sum (xx + yy + delta zz) per unit-weight bond,
    entered in the plus/minus basis; Heisenberg pins delta=1.  Kitaev takes
    couplings=(Jx, Jy, Jz) and puts J_a x^a x^a on each label-a bond.
    """
    key = str(name).lower()
    terms = []
    if key in ("xy", "xxz", "heisenberg"):
        d = {"xy": 0.0, "heisenberg": 1.0}.get(key, float(delta))
        for b in lattice.bonds:
            w = J * b.weight
            if w == 0.0:
                continue
            terms.append(PauliTerm(w / 2, ((b.i, "plus"), (b.j, "minus"))))
            terms.append(PauliTerm(w / 2, ((b.i, "minus"), (b.j, "plus"))))
            if d != 0.0:
                terms.append(PauliTerm(w * d / 4, ((b.i, "z"), (b.j, "z"))))
        return QubitModel(lattice, tuple(terms))

    if key == "kitaev":
        if couplings is None:
            raise DimensionError("Kitaev needs couplings=(Jx, Jy, Jz)")
        jmap = dict(zip("xyz", couplings))
        for b in lattice.bonds:
            if b.label not in jmap:
                raise SchemaError(f"Kitaev needs x/y/z bond labels, got {b.label!r}")
            w = jmap[b.label] * b.weight
            if w == 0.0:
                continue
            terms.append(PauliTerm(w, ((b.i, b.label), (b.j, b.label))))
        return QubitModel(lattice, tuple(terms))

    raise CatalogueError(f"unknown model name {name!r}")


def resolve_site_op(name, site_dim, phi=0.0):
    """Named single-site operator as a dense matrix.

    The transmutation phase rides on Z itself: dim-3 Z is e^{i phi}
    diag(1, w, w*) and dim-4 Z is e^{i phi} diag(1, i, -1, -i), so term
    coefficients stay phase-free.
    """
    if site_dim == 2:
        if name == "id":
            return np.eye(2, dtype=complex)
        if name in SITE_OPS[2]:
            return PAULI[name].copy()
        raise CatalogueError(f"unknown qubit operator {name!r}")
    if site_dim == 3:
        if name == "id":
            return np.eye(3, dtype=complex)
        z = make_fixed_matrix("Z3", phi)
        if name == "Z":
            return z
        if name == "Zdag":
            return z.conj().T
        raise CatalogueError(f"operator {name!r} not available at site_dim 3")
    if site_dim == 4:
        if name == "id":
            return np.eye(4, dtype=complex)
        if name == "Z":
            return np.exp(1j * phi) * make_fixed_matrix("Z4")
        if name == "Zdag":
            return np.exp(-1j * phi) * make_fixed_matrix("Z4").conj().T
        if name in ("Zx", "Zy", "Zz"):
            return make_fixed_matrix(name, phi)
        raise CatalogueError(f"operator {name!r} not available at site_dim 4")
    raise DimensionError(f"site_dim {site_dim} not supported")


# single-site expansion into the Hermitian Pauli basis
_XYZ_EXPAND = {
    "x": ((1.0 + 0j, "x"),),
    "y": ((1.0 + 0j, "y"),),
    "z": ((1.0 + 0j, "z"),),
    "plus": ((0.5 + 0j, "x"), (0.5j, "y")),
    "minus": ((0.5 + 0j, "x"), (-0.5j, "y")),
}


def pauli_string_dict(terms, drop_tol=0.0):
    """Canonical {x,y,z}-basis expansion of a qubit term list.

    Returns {sorted ((site, axis), ...): coeff}; the round-trip tests compare
    models through this normal form.
    """
    acc = {}
    for t in terms:
        choices = [_XYZ_EXPAND[op] for _, op in t.factors]
        sites = [s for s, _ in t.factors]
        for combo in itertools.product(*choices):
            c = t.coeff
            for f, _ in combo:
                c *= f
            key = tuple(sorted(zip(sites, (ax for _, ax in combo))))
            acc[key] = acc.get(key, 0.0) + c
    return {k: v for k, v in acc.items() if abs(v) > drop_tol}


def pauli_dict_distance(d1, d2):
    keys = set(d1) | set(d2)
    if not keys:
        return 0.0
    return max(abs(d1.get(k, 0.0) - d2.get(k, 0.0)) for k in keys)


_SCHEMA_CACHE = None


def _schema():
    global _SCHEMA_CACHE
    if _SCHEMA_CACHE is None:
        text = resources.files("ising_forge").joinpath("data/model.schema.json").read_text()
        _SCHEMA_CACHE = json.loads(text)
    return _SCHEMA_CACHE


def _lattice_to_dict(lat):
    out = {"geometry": lat.geometry, "boundary": lat.boundary}
    if lat.geometry == "chain":
        out["L"] = lat.L
        out["stagger_b"] = lat.stagger_b if lat.stagger_b is not None else 0.0
    elif lat.geometry in ("honeycomb", "star_honeycomb"):
        out["Lx"] = lat.Lx
        out["Ly"] = lat.Ly
    else:
        out["nsites"] = lat.nsites
        out["bonds"] = [[b.i, b.j, b.label, b.weight] for b in lat.bonds]
    return out


def _lattice_from_dict(d):
    geo = d["geometry"]
    if geo == "chain":
        return build_lattice("chain", d["L"], d["boundary"], d.get("stagger_b", 0.0))
    if geo in ("honeycomb", "star_honeycomb"):
        return build_lattice(geo, (d["Lx"], d["Ly"]), d["boundary"])
    return build_lattice("custom", d.get("nsites"), d["boundary"], bonds=d.get("bonds", ()))


def _terms_to_list(terms):
    return [
        {
            "coeff": [float(np.real(t.coeff)), float(np.imag(t.coeff))],
            "factors": [{"site": s, "op": op} for s, op in t.factors],
        }
        for t in terms
    ]


def _terms_from_list(items):
    return tuple(
        PauliTerm(
            complex(it["coeff"][0], it["coeff"][1]),
            tuple((f["site"], f["op"]) for f in it["factors"]),
        )
        for it in items
    )


def serialize(model):
    """Model to a schema-conforming plain dict."""
    out = {"lattice": _lattice_to_dict(model.lattice), "site_dim": model.site_dim}
    if isinstance(model, QubitModel):
        out["terms"] = _terms_to_list(model.terms)
        return out
    out["terms"] = _terms_to_list(model.diag_terms)
    if model.field is not None:
        f = model.field
        if getattr(f, "kind", None) == "custom" or getattr(f, "matrix", None) is not None:
            raise SchemaError("custom field matrices are not serializable")
        fd = {"kind": f.kind}
        for key in ("q", "theta", "phi"):
            val = getattr(f, key, None)
            if val is not None:
                fd[key] = float(val)
        out["field"] = fd
    out["lambda"] = model.lam
    if model.h_field is not None:
        out["h_field"] = list(model.h_field)
    return out


def deserialize(data):
    """Schema-validated dict back to a model.

    Raises SchemaError naming the offending field on any validation failure.
    """
    err = next(Draft202012Validator(_schema()).iter_errors(data), None)
    if err is not None:
        path = ".".join(str(p) for p in err.absolute_path) or "<root>"
        raise SchemaError(f"{path}: {err.message}")
    lat = _lattice_from_dict(data["lattice"])
    site_dim = data["site_dim"]
    terms = _terms_from_list(data["terms"])
    if site_dim == 2:
        if "field" in data or data.get("lambda") is not None:
            raise SchemaError("field/lambda: only valid for site_dim 3 or 4")
        return QubitModel(lat, terms)

    field = None
    if "field" in data:
        from .transmute import FieldSpec  # deferred, transmute imports this module

        fd = data["field"]
        field = FieldSpec(
            kind=fd["kind"],
            q=fd.get("q"),
            theta=fd.get("theta"),
            phi=fd.get("phi", 0.0),
        )
    hf = tuple(data["h_field"]) if "h_field" in data else None
    return IsingModel(lat, site_dim, terms, field=field, lam=data.get("lambda"), h_field=hf)


def save_model(model, path):
    with open(path, "w") as fh:
        json.dump(serialize(model), fh, indent=1)
        fh.write("\n")


def load_model(path):
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"not valid JSON: {exc}") from exc
    return deserialize(data)
