"""Effective qubit chain of the ferromagnetic 3-state Potts model.

A clock chain J sum(Z Zdag + h.c.) in a strong symmetric field
lam sum(X + Xdag) has a twofold degenerate on-site ground space.  Since
the interaction only connects that doublet to the single excited state
(energy cost 3 lam per site), second-order perturbation theory in J/lam
is exact enough to be useful already at lam ~ 10 J.  The resulting
qubit chain is an XXZ model with a weak anisotropy plus two 1/lam
corrections: a next-nearest-neighbor flip-flop and a pair-creation term
on consecutive site triples.

Coefficient bookkeeping: the per-process amplitudes are

    J_eff     = J - J^2 / (6 lam)
    Delta     = -1 / (2 lam / J - 1/3)
    nnn_flip  = -J^2 / (3 lam)      per next-nearest pair
    triple    = -J^2 / (3 lam)      per ordered choice of the two
                                    neighbors of a middle site

Both orderings of the neighbors produce the same operator, so each
geometric triple in a chain Hamiltonian carries twice the triple
amplitude.  ``effective_model_chain`` applies that multiplicity; the
numeric Schrieffer-Wolff transform in the tests pins it down.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .errors import DimensionError, SingularityError
from .exact_diag import assemble, lowest_k
from .model_ir import Lattice, PauliTerm, QubitModel, build_lattice
from .transmute import transmute_qubit_model

# anisotropy at which the pair-creation perturbation becomes relevant
# (Luttinger parameter reaches 9/8)
RELEVANCE_DELTA = math.cos(5 * math.pi / 9)


@dataclass(frozen=True)
class PerturbationResult:
    """Second-order coefficients; inputs echoed for reporting."""

    j_eff: float
    delta: float
    nnn_flip: float
    triple_term: float
    lam: float
    j: float


def effective_xxz(j: float, lam: float) -> PerturbationResult:
    """Closed-form second-order coefficients.

    Valid for lam >> |j|; the caller judges how large is large.  The
    anisotropy has a pole at lam = j/6 where the formula loses meaning.
    """
    if lam <= 0:
        raise DimensionError(f"field strength must be positive, got {lam}")
    denom = 2.0 * lam / j - 1.0 / 3.0 if j != 0 else math.inf
    if denom == 0.0:
        raise SingularityError("anisotropy pole at lam = j/6")
    c2 = -j * j / (3.0 * lam)
    return PerturbationResult(
        j_eff=j - j * j / (6.0 * lam),
        delta=0.0 if j == 0 else -1.0 / denom,
        nnn_flip=c2,
        triple_term=c2,
        lam=lam,
        j=j,
    )


def luttinger_K(delta_tilde: float) -> float:
    """Luttinger parameter of the XXZ chain at anisotropy delta_tilde."""
    if delta_tilde <= -1.0:
        raise SingularityError(
            f"K diverges as the anisotropy approaches -1, got {delta_tilde}")
    if delta_tilde > 1.0:
        raise DimensionError(f"anisotropy must be <= 1, got {delta_tilde}")
    return 1.0 / (2.0 - (2.0 / math.pi) * math.acos(delta_tilde))


def relevance_threshold(j: float = 1.0, delta_target: float = RELEVANCE_DELTA) -> float:
    """Field strength where the running anisotropy hits delta_target.

    Inverts Delta(lam); for the default target (K = 9/8) this lands
    near lam / j ~ 3, the field below which the pair-creation term
    destabilizes the critical line.
    """
    if delta_target == 0.0:
        raise SingularityError("Delta = 0 is reached only asymptotically")
    return j * (1.0 / 3.0 - 1.0 / delta_target) / 2.0


def _chain_bonds(L: int, span: int, boundary: str) -> list:
    if boundary == "periodic":
        return [(i, (i + span) % L) for i in range(L)]
    if boundary == "open":
        return [(i, i + span) for i in range(L - span)]
    raise DimensionError(f"unknown boundary {boundary!r}")


def first_order_chain(j: float, L: int, boundary: str = "periodic") -> QubitModel:
    """Leading-order effective model: the pure XY chain."""
    lattice = build_lattice("chain", L, boundary=boundary)
    terms = []
    for a, b in _chain_bonds(L, 1, boundary):
        terms.append(PauliTerm(j, ((a, "plus"), (b, "minus"))))
        terms.append(PauliTerm(j, ((a, "minus"), (b, "plus"))))
    return QubitModel(lattice=lattice, terms=tuple(terms))


def effective_model_chain(j: float, lam: float, L: int,
                          boundary: str = "periodic") -> QubitModel:
    """Second-order effective qubit chain.

    Nearest-neighbor XXZ with (J_eff, Delta), next-nearest flip-flop,
    and pair creation on consecutive triples at twice the per-ordering
    amplitude (both neighbor orderings of each middle site coincide).
    Open chains keep only fully interior triples.
    """
    if L < 3:
        raise DimensionError(f"triple terms need L >= 3, got L={L}")
    pr = effective_xxz(j, lam)
    lattice = build_lattice("chain", L, boundary=boundary)
    terms = []
    for a, b in _chain_bonds(L, 1, boundary):
        terms.append(PauliTerm(pr.j_eff, ((a, "plus"), (b, "minus"))))
        terms.append(PauliTerm(pr.j_eff, ((a, "minus"), (b, "plus"))))
        terms.append(PauliTerm(pr.j_eff * pr.delta / 2.0, ((a, "z"), (b, "z"))))
    for a, b in _chain_bonds(L, 2, boundary):
        terms.append(PauliTerm(pr.nnn_flip, ((a, "plus"), (b, "minus"))))
        terms.append(PauliTerm(pr.nnn_flip, ((a, "minus"), (b, "plus"))))
    if boundary == "periodic":
        triples = [(i, (i + 1) % L, (i + 2) % L) for i in range(L)]
    else:
        triples = [(i, i + 1, i + 2) for i in range(L - 2)]
    for a, b, c in triples:
        coeff = 2.0 * pr.triple_term
        terms.append(PauliTerm(coeff, ((a, "plus"), (b, "plus"), (c, "plus"))))
        terms.append(PauliTerm(coeff, ((a, "minus"), (b, "minus"), (c, "minus"))))
    return QubitModel(lattice=lattice, terms=tuple(terms))


def potts_chain_model(j: float, lam: float, L: int, boundary: str = "periodic"):
    """The 3-state clock chain the effective models approximate.

    Built by transmuting the XY chain: J sum(Z Zdag + h.c.) plus the
    symmetric field at strength lam.
    """
    return transmute_qubit_model(first_order_chain(j, L, boundary),
                                 path="three_state", lam=lam)


class ValidationRow(NamedTuple):
    lam: float
    err1: float
    err2: float


def validate_against_ed(j: float, lam_list: Sequence[float], L: int,
                        k: int = 8, boundary: str = "periodic") -> list:
    """Low-excitation mismatch of both effective orders against ED.

    For each lam the clock chain is diagonalized exactly and its lowest
    k excitation energies are compared with the first-order (XY) and
    second-order chains.  Ground-state offsets drop out.  Second-order
    errors shrink like 1/lam^2, so err2(2 lam) / err2(lam) ~ 1/4.
    """
    rows = []
    for lam in lam_list:
        if j == 0.0:
            rows.append(ValidationRow(float(lam), 0.0, 0.0))
            continue
        exact = lowest_k(assemble(potts_chain_model(j, lam, L, boundary)),
                         k, want_vectors=False).excitations()
        e1 = lowest_k(assemble(first_order_chain(j, L, boundary)),
                      k, want_vectors=False).excitations()
        e2 = lowest_k(assemble(effective_model_chain(j, lam, L, boundary)),
                      k, want_vectors=False).excitations()
        err1 = float(max(abs(exact[i] - e1[i]) for i in range(1, k)))
        err2 = float(max(abs(exact[i] - e2[i]) for i in range(1, k)))
        rows.append(ValidationRow(float(lam), err1, err2))
    return rows
