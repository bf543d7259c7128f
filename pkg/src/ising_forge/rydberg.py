"""Effective spin-1/2 couplings for Rydberg qutrit arrays.

Two nearby Rydberg levels |nS> and |nS-tilde> together with the atomic
ground state form a qutrit whose van der Waals interactions are purely
diagonal.  Decomposing the diagonal pair energies over clock operators
gives exactly two couplings,

    9 J_pm = U_nn + U_tt - U_nt            (flip-flop, real)
    9 J_pp = |w U_nn + conj(w) U_tt + 2 U_nt|   (pair creation, modulus)

with w = exp(2 pi i / 3); the complex phase of the pair-creation sum is
absorbed into the clock operator and reported separately.  A strong
symmetric drive then transmutes Z_i -> sigma+_i, leaving the spin model
J_pm s+ s- + J_pp s+ s+ + h.c. per bond.

The bundled dataset carries case-study C6 coefficients for potassium
and rubidium level pairs where J_pm nearly cancels, leaving a pure
pair-creation magnet (on bipartite lattices, unitarily an XY model).
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from importlib import resources
from typing import NamedTuple, Optional

import numpy as np

from .errors import CatalogueError, DimensionError
from .model_ir import Lattice, PauliTerm, QubitModel
from .qudit_algebra import make_fixed_matrix
from .transmute import FieldSpec, project_operator, theta_field

OMEGA = cmath.exp(2j * math.pi / 3)


@dataclass(frozen=True)
class PairEnergies:
    """Diagonal pair interaction energies (same units all three).

    ``c6`` and ``r_um`` record provenance when built from van der Waals
    coefficients.
    """

    u_nn: float
    u_tt: float
    u_nt: float
    c6: Optional[tuple] = None
    r_um: Optional[float] = None

    def __post_init__(self):
        for name in ("u_nn", "u_tt", "u_nt"):
            if not math.isfinite(getattr(self, name)):
                raise DimensionError(f"{name} must be finite")


def from_c6(c6_nn: float, c6_tt: float, c6_nt: float, r_um: float = 1.0) -> PairEnergies:
    """Pair energies U = -C6 / R^6 (C6 > 0 is attractive)."""
    if r_um <= 0:
        raise DimensionError(f"separation must be positive, got {r_um}")
    r6 = r_um ** 6
    return PairEnergies(-c6_nn / r6, -c6_tt / r6, -c6_nt / r6,
                        c6=(c6_nn, c6_tt, c6_nt), r_um=r_um)


@dataclass(frozen=True)
class SpinCouplings:
    j_pm: float
    j_pp: float
    phase: float

    @property
    def ratio(self) -> float:
        """|J_pm| / J_pp, the figure of merit for a pure pair-creation magnet."""
        if self.j_pp == 0.0:
            return math.inf if self.j_pm != 0.0 else 0.0
        return abs(self.j_pm) / self.j_pp


def couplings(pe: PairEnergies) -> SpinCouplings:
    z = OMEGA * pe.u_nn + OMEGA.conjugate() * pe.u_tt + 2.0 * pe.u_nt
    return SpinCouplings(
        j_pm=(pe.u_nn + pe.u_tt - pe.u_nt) / 9.0,
        j_pp=abs(z) / 9.0,
        phase=cmath.phase(z),
    )


def effective_spin_model(pe: PairEnergies, lattice: Lattice,
                         drop_tol: float = 1e-12) -> QubitModel:
    """Nearest-neighbor flip-flop plus pair-creation model on a lattice.

    The pair-creation coefficient is the (nonnegative) modulus; the
    phase is a single-site gauge choice and does not enter the model.
    Couplings below ``drop_tol`` relative to the larger one are rounding
    residue of a tuned cancellation and are dropped.
    """
    sc = couplings(pe)
    scale = max(abs(sc.j_pm), sc.j_pp)
    keep_pm = abs(sc.j_pm) > drop_tol * scale
    keep_pp = sc.j_pp > drop_tol * scale
    terms = []
    for bond in lattice.bonds:
        w = bond.weight
        if w == 0.0:
            continue
        i, j = bond.i, bond.j
        if keep_pm:
            terms.append(PauliTerm(sc.j_pm * w, ((i, "plus"), (j, "minus"))))
            terms.append(PauliTerm(sc.j_pm * w, ((i, "minus"), (j, "plus"))))
        if keep_pp:
            terms.append(PauliTerm(sc.j_pp * w, ((i, "plus"), (j, "plus"))))
            terms.append(PauliTerm(sc.j_pp * w, ((i, "minus"), (j, "minus"))))
    return QubitModel(lattice=lattice, terms=tuple(terms))


class ThetaAnalysis(NamedTuple):
    field: FieldSpec
    interaction: str
    projected_z: np.ndarray


def theta_field_analysis(theta: float, tol: float = 1e-10) -> ThetaAnalysis:
    """Classify the large-field interaction as the drive angle varies.

    The tunable single-site drive has a twofold ground space at every
    angle; what changes is the shape of the clock operator projected
    into it.  At theta = 0 the projection is a pure raising operator
    (flip-flop, "xy"); at theta = pi/2 it is diagonal with distinct
    eigenvalues, so only Ising-type interactions survive ("ising");
    in between both structures coexist ("mixed").
    """
    if not 0.0 <= theta <= math.pi / 2:
        raise DimensionError(f"theta must lie in [0, pi/2], got {theta}")
    field = theta_field(theta)
    zp = project_operator(field, make_fixed_matrix("Z3")).as_matrix()
    scale = np.max(np.abs(zp))
    if scale == 0.0:
        kind = "mixed"
    elif np.max(np.abs(zp @ zp)) <= tol * scale ** 2:
        kind = "xy"
    else:
        comm = zp @ zp.conj().T - zp.conj().T @ zp
        evals = np.linalg.eigvals(zp)
        if (np.max(np.abs(comm)) <= tol * scale ** 2
                and abs(evals[0] - evals[1]) > tol * scale):
            kind = "ising"
        else:
            kind = "mixed"
    return ThetaAnalysis(field, kind, zp)


def load_c6_cases() -> dict:
    """Bundled C6 case studies, keyed by name."""
    text = resources.files("ising_forge.data").joinpath(
        "rydberg_c6_cases.json").read_text()
    data = json.loads(text)
    return {case["name"]: case for case in data["cases"]}


def bundled_pair_energies(name: str, sigma: Optional[int] = None) -> PairEnergies:
    """Pair energies of a bundled case, optionally at the alternate sigma.

    Only the cross coefficient depends on sigma in the bundled data;
    requesting a sigma the dataset does not carry raises.
    """
    cases = load_c6_cases()
    if name not in cases:
        raise CatalogueError(f"unknown case {name!r}; have {sorted(cases)}")
    case = cases[name]
    if sigma is None or sigma == case["sigma"]:
        c6_nt = case["c6_nt"]
    elif sigma == -1 and "c6_nt_sigma_minus" in case:
        c6_nt = case["c6_nt_sigma_minus"]
    else:
        raise CatalogueError(f"case {name!r} has no sigma={sigma} variant")
    return from_c6(case["c6_nn"], case["c6_tt"], c6_nt, case["r_um"])
