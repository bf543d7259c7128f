"""Field families, doublet projectors, and the qubit <-> Ising rewrite.

A transverse-field family is chosen via FieldSpec.  Its two lowest field
eigenstates span an emergent qubit; build_projector returns the projector
onto that doublet together with an explicit orthonormal basis.  Projecting
named site operators through the basis gives 2x2 effective couplings, and
the model-level rewrites are pure coefficient maps on term lists:

    four_state path   plus -> sqrt(3/2) Z,  z -> sqrt(3) Zz,  x/y -> sqrt(3) Zx/Zy
    three_state path  plus -> Z, single-site z fields fold into the field term

with the phase e^{i phi} carried by Z itself (see resolve_site_op).  The
reverse map effective_qubit_model projects every interaction site-wise and
recovers the source qubit model as lambda -> infinity.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .errors import (
    CatalogueError,
    DegeneracyError,
    DimensionError,
    PathMismatchError,
    SchemaError,
)
from .model_ir import IsingModel, PauliTerm, QubitModel, resolve_site_op
from .qudit_algebra import SQ3, make_fixed_matrix, max_abs

FIELD_KINDS = ("four_state_x", "three_state_sym", "x_of_q", "tilde_x", "theta", "custom")

# relative splitting above which the low doublet is rejected
DEGENERACY_RTOL = 1e-10


@dataclass(frozen=True)
class FieldSpec:
    """One member of the catalogued transverse-field families.

    kind selects the matrix; q, theta, phi are the family parameters.  A
    custom Hermitian matrix may be supplied directly.  sign_convention "low"
    keeps the two lowest field eigenstates as the emergent qubit (the ground
    doublet of +lambda*field as lambda grows), "high" the two highest.
    """

    kind: str
    q: Optional[float] = None
    theta: Optional[float] = None
    phi: float = 0.0
    matrix: Optional[np.ndarray] = None
    sign_convention: str = "low"

    def __post_init__(self):
        if self.kind not in FIELD_KINDS:
            raise CatalogueError(f"unknown field kind {self.kind!r}")
        if self.sign_convention not in ("low", "high"):
            raise CatalogueError(f"unknown sign convention {self.sign_convention!r}")
        if self.kind == "x_of_q":
            if self.q is None:
                raise DimensionError("x_of_q needs q")
            if 3 * self.q * self.q >= 1:
                raise DimensionError(f"x_of_q needs q^2 < 1/3, got q={self.q}")
        if self.kind == "theta" and self.theta is None:
            raise DimensionError("theta field needs theta")
        if self.kind == "custom":
            if self.matrix is None:
                raise DimensionError("custom field needs an explicit matrix")
            m = np.asarray(self.matrix, dtype=complex)
            if m.ndim != 2 or m.shape[0] != m.shape[1]:
                raise DimensionError("field matrix must be square")
            if max_abs(m - m.conj().T) > 1e-14:
                raise SchemaError("field matrix not Hermitian to 1e-14")
            object.__setattr__(self, "matrix", m)

    @property
    def site_dim(self):
        if self.kind in ("four_state_x", "x_of_q", "tilde_x"):
            return 4
        if self.kind in ("three_state_sym", "theta"):
            return 3
        return self.matrix.shape[0]

    # phase rotations leave the field matrix itself alone
    def with_phi(self, phi):
        return replace(self, phi=float(phi))


def four_state_field(phi=0.0):
    return FieldSpec("four_state_x", phi=phi)


def three_state_field(phi=0.0):
    return FieldSpec("three_state_sym", phi=phi)


def x_of_q_field(q):
    return FieldSpec("x_of_q", q=float(q))


def tilde_x_field():
    return FieldSpec("tilde_x")


def theta_field(theta):
    return FieldSpec("theta", theta=float(theta))


def custom_field(matrix, phi=0.0, sign_convention="low"):
    return FieldSpec("custom", phi=phi, matrix=matrix, sign_convention=sign_convention)


def x_of_q_matrix(q):
    """The one-parameter deformation of the 4-state field; q=0 is the
    canonical one.  Eigenvalues stay {-sqrt3 x2, +sqrt3 x2} on |q| < 1/sqrt3."""
    if 3 * q * q >= 1:
        raise DimensionError(f"x_of_q needs q^2 < 1/3, got q={q}")
    r = np.sqrt(1.0 - 3.0 * q * q)
    return np.array(
        [
            [-3 * q, r, r, r],
            [r, q, -1j + q, 1j + q],
            [r, 1j + q, q, -1j + q],
            [r, -1j + q, 1j + q, q],
        ],
        dtype=complex,
    )


def theta_field_matrix(theta):
    """Qutrit field with a tunable angle; eigenvalues {-1, -1, 2 cos^2(theta)}."""
    c, s2 = np.cos(theta), np.sin(theta) ** 2
    return np.array(
        [[-s2, 1 - s2, c], [1 - s2, -s2, c], [c, c, 0.0]],
        dtype=complex,
    )


def field_matrix(field):
    """Hermitian field matrix for a FieldSpec."""
    if field.kind == "four_state_x":
        return make_fixed_matrix("X4")
    if field.kind == "three_state_sym":
        x3 = make_fixed_matrix("X3")
        return x3 + x3.conj().T
    if field.kind == "x_of_q":
        return x_of_q_matrix(field.q)
    if field.kind == "tilde_x":
        return make_fixed_matrix("Xtilde")
    if field.kind == "theta":
        return theta_field_matrix(field.theta)
    return field.matrix


@dataclass(frozen=True)
class DoubletBasis:
    """Orthonormal (up, down) spanning the low-field doublet.

    Column convention: matrix() = [up, down], so a projected operator
    B+ O B places <up|O|down> at [0, 1] and sigma-plus is |up><down|.
    """

    up: np.ndarray
    down: np.ndarray

    def matrix(self):
        return np.column_stack([self.up, self.down])


@dataclass(frozen=True)
class EffectiveCouplings:
    """Coefficients of a projected single-site operator on {1, x, y, z}."""

    identity: complex
    x: complex
    y: complex
    z: complex

    def vector(self):
        return np.array([self.x, self.y, self.z])

    def as_matrix(self):
        from .qudit_algebra import PAULI

        return (
            self.identity * np.eye(2)
            + self.x * PAULI["x"]
            + self.y * PAULI["y"]
            + self.z * PAULI["z"]
        )

    def items(self):
        return (("id", self.identity), ("x", self.x), ("y", self.y), ("z", self.z))


def decompose_two_by_two(m):
    m = np.asarray(m, dtype=complex)
    if m.shape != (2, 2):
        raise DimensionError(f"expected a 2x2 matrix, got {m.shape}")
    return EffectiveCouplings(
        identity=(m[0, 0] + m[1, 1]) / 2,
        x=(m[0, 1] + m[1, 0]) / 2,
        y=1j * (m[0, 1] - m[1, 0]) / 2,
        z=(m[0, 0] - m[1, 1]) / 2,
    )


def _analytic_doublet_4state(phi):
    # explicit doublet of the canonical 4-state field; exact for every phi
    a = np.sqrt(2 + SQ3)
    b = np.sqrt(2 - SQ3)
    e = np.exp(1j * np.pi / 4)
    up = (
        np.exp(1j * phi)
        / (np.sqrt(2) * np.sqrt(3 + SQ3))
        * np.array([-a, e, a, np.conj(e)])
    )
    down = 1 / (np.sqrt(2) * np.sqrt(3 - SQ3)) * np.array([-b, np.conj(e), -b, e])
    return up, down


def _analytic_doublet_3state(phi):
    w = np.exp(2j * np.pi / 3)
    down = np.array([1, w, np.conj(w)]) / np.sqrt(3)
    up = np.exp(1j * phi) * np.array([1, np.conj(w), w]) / np.sqrt(3)
    return up, down


def _phase_fix(v, tol=1e-12):
    for comp in v:
        if abs(comp) > tol:
            return v * (np.conj(comp) / abs(comp))
    raise DegeneracyError("null vector while gauge fixing")


def _deterministic_doublet(pmat):
    # project coordinate vectors and Gram-Schmidt them; reproducible and
    # independent of eigensolver internals
    dim = pmat.shape[0]
    vecs = []
    for k in range(dim):
        v = pmat[:, k].copy()
        for u in vecs:
            v -= u * (u.conj() @ v)
        nrm = np.linalg.norm(v)
        if nrm > 1e-8:
            vecs.append(v / nrm)
        if len(vecs) == 2:
            break
    if len(vecs) != 2:
        raise DegeneracyError("projector rank below 2")
    return _phase_fix(vecs[0]), _phase_fix(vecs[1])


def build_projector(field):
    """Projector onto the low-field doublet plus an explicit basis.

    Returns (P, DoubletBasis).  The canonical 4-state and symmetric 3-state
    kinds use their known closed-form projectors and explicit bases.  The
    x_of_q family fixes its gauge against the projected flavor densities
    (the frame in which the deformed-Potts densities are diagonal), so the
    q = 2-sqrt3 point lands exactly on its printed (1-sigma)/(3+sqrt3) form.
    Remaining kinds diagonalize the field matrix and fix the gauge
    deterministically (first nonvanishing component real positive).
    """
    if field.kind == "four_state_x":
        pmat = (SQ3 * np.eye(4) - make_fixed_matrix("X4")) / (2 * SQ3)
        return pmat, DoubletBasis(*_analytic_doublet_4state(field.phi))
    if field.kind == "three_state_sym":
        x3 = make_fixed_matrix("X3")
        pmat = (2 * np.eye(3) - x3 - x3.conj().T) / 3
        return pmat, DoubletBasis(*_analytic_doublet_3state(field.phi))
    if field.kind == "x_of_q":
        pmat = (np.eye(4) - x_of_q_matrix(field.q) / SQ3) / 2
        bmat = _rebased_frame(field.q)
        return pmat, DoubletBasis(bmat[:, 0], bmat[:, 1])

    m = field_matrix(field)
    evals, evecs = np.linalg.eigh(m)
    if field.sign_convention == "high":
        evals = evals[::-1]
        evecs = evecs[:, ::-1]
    scale = max(1.0, float(np.max(np.abs(evals))))
    split = abs(evals[1] - evals[0]) / scale
    if split > DEGENERACY_RTOL:
        raise DegeneracyError(
            f"low field space not doubly degenerate, relative splitting {split:.3e}"
        )
    if m.shape[0] > 2:
        gap = abs(evals[2] - evals[1]) / scale
        if gap <= DEGENERACY_RTOL:
            raise DegeneracyError(
                f"low field space not two-dimensional, third state within {gap:.3e}"
            )
    low = evecs[:, :2]
    pmat = low @ low.conj().T
    up, down = _deterministic_doublet(pmat)
    return pmat, DoubletBasis(up, down)


def project_operator(field, op):
    """Effective 2x2 couplings of a single-site operator in the doublet."""
    _, basis = build_projector(field)
    op = np.asarray(op, dtype=complex)
    bmat = basis.matrix()
    if op.shape != (bmat.shape[0], bmat.shape[0]):
        raise DimensionError(f"operator shape {op.shape} does not match field dimension")
    return decompose_two_by_two(bmat.conj().T @ op @ bmat)


def density_operator(alpha):
    """Occupation projector of flavor state alpha in the 4-state basis
    ordered (c, x, y, z)."""
    pos = {"x": 1, "y": 2, "z": 3}
    if alpha not in pos:
        raise CatalogueError(f"unknown density axis {alpha!r}")
    m = np.zeros((4, 4), dtype=complex)
    m[pos[alpha], pos[alpha]] = 1.0
    return m


def _q0_anchor_frame():
    # frame in which the q=0 projected densities take the printed
    # (1 + (s^a - s^b - s^c)/sqrt3)/4 form: the explicit 4-state doublet at
    # phi = pi/4 with flavor components reordered (c, z, x, y)
    up, down = _analytic_doublet_4state(np.pi / 4)
    idx = [0, 3, 1, 2]
    return np.column_stack([up[idx], down[idx]])


def _lowdin(bmat):
    overlap = bmat.conj().T @ bmat
    w, v = np.linalg.eigh(overlap)
    if np.min(w) < 1e-12:
        raise DegeneracyError("doublet collapsed during transport")
    return bmat @ (v @ np.diag(1.0 / np.sqrt(w)) @ v.conj().T)


def _transported_frame(q, steps=None):
    if steps is None:
        steps = max(2, int(abs(q) * 800) + 2)
    bmat = _q0_anchor_frame()
    for qk in np.linspace(0.0, q, steps)[1:]:
        pmat = (np.eye(4) - x_of_q_matrix(qk) / SQ3) / 2
        bmat = _lowdin(pmat @ bmat)
    return bmat


def _rebased_frame(q):
    # local frame of the deformed field: diagonalize the projected n^z
    # (up = smaller occupation), then rotate the relative phase until the
    # projected n^x off-diagonal is real negative
    m = x_of_q_matrix(q)
    _, evecs = np.linalg.eigh(m)
    low = evecs[:, :2]
    mz = low.conj().T @ density_operator("z") @ low
    wz, vz = np.linalg.eigh(mz)
    up = low @ vz[:, 0]
    down = low @ vz[:, 1]
    off = up.conj() @ (density_operator("x") @ down)
    down = down * np.exp(1j * (np.pi - np.angle(off)))
    return np.column_stack([up, down])


def projected_density_curve(q, alpha, branch="connected"):
    """Projected flavor density P n^alpha P along the x_of_q family.

    branch "connected" parallel-transports the doublet frame from the q=0
    anchor, so the curve starts at the symmetric-point couplings and stays
    continuous in q.  branch "rebased" rebuilds the local frame at q from
    the projected densities themselves, which lands exactly on the
    (1 - sigma^alpha)/(3+sqrt3) point of the Potts limit.
    """
    if 3 * q * q >= 1:
        raise DimensionError(f"density curve needs q^2 < 1/3, got q={q}")
    if branch == "connected":
        bmat = _transported_frame(q)
    elif branch == "rebased":
        bmat = _rebased_frame(q)
    else:
        raise CatalogueError(f"unknown branch {branch!r}")
    nmat = density_operator(alpha)
    return decompose_two_by_two(bmat.conj().T @ nmat @ bmat)


# coefficient rewrites per qubit operator, coefficient phase-free because
# resolve_site_op keeps e^{i phi} inside Z
_FOUR_STATE_MAP = {
    "plus": (np.sqrt(1.5), "Z"),
    "minus": (np.sqrt(1.5), "Zdag"),
    "x": (SQ3, "Zx"),
    "y": (SQ3, "Zy"),
    "z": (SQ3, "Zz"),
}

_THREE_STATE_MAP = {"plus": (1.0, "Z"), "minus": (1.0, "Zdag")}


def transmute_qubit_model(model, phi=0.0, path="four_state", lam=None):
    """Rewrite a qubit model as a diagonal qudit model plus a field term.

    The four_state path accepts any term list.  The three_state path accepts
    raising/lowering interactions plus single-site z fields; the fields are
    absorbed into the per-site field coefficients (h_field), everything else
    raises PathMismatchError.  lam None keeps the field strength symbolic.
    """
    if path == "four_state":
        terms = [
            PauliTerm(
                t.coeff * float(np.prod([_FOUR_STATE_MAP[op][0] for _, op in t.factors])),
                tuple((s, _FOUR_STATE_MAP[op][1]) for s, op in t.factors),
            )
            for t in model.terms
        ]
        return IsingModel(
            model.lattice,
            4,
            tuple(terms),
            field=four_state_field(phi),
            lam=lam,
        )

    if path == "three_state":
        terms = []
        h = np.zeros(model.nsites)
        for t in model.terms:
            ops = [op for _, op in t.factors]
            if ops == ["z"] and len(t.factors) == 1:
                hval = t.coeff
                if abs(np.imag(hval)) > 1e-14:
                    raise PathMismatchError("single-site z field must be real")
                h[t.factors[0][0]] += np.real(hval)
                continue
            if any(op not in _THREE_STATE_MAP for op in ops):
                raise PathMismatchError(
                    "three_state path takes raising/lowering interactions "
                    f"plus single-site z fields, got factors {t.factors}"
                )
            terms.append(
                PauliTerm(
                    t.coeff,
                    tuple((s, _THREE_STATE_MAP[op][1]) for s, op in t.factors),
                )
            )
        h_field = tuple(h) if np.any(h != 0.0) else None
        return IsingModel(
            model.lattice,
            3,
            tuple(terms),
            field=three_state_field(phi),
            lam=lam,
            h_field=h_field,
        )

    raise CatalogueError(f"unknown transmutation path {path!r}")


@dataclass(frozen=True)
class ProjectedModel:
    """Large-field effective qubit model plus the constant energy offset."""

    qubit_model: QubitModel
    constant: float


def effective_qubit_model(model, drop_tol=1e-13):
    """Project an Ising model site-wise through the field doublet.

    Returns ProjectedModel; transmute followed by this map recovers the
    source qubit model's coefficients, with the field contributing only the
    constant (and the absorbed 3-state z fields, which come back as terms).
    """
    field = model.field
    if field is None:
        raise DimensionError("model carries no field to project through")
    _, basis = build_projector(field)
    bmat = basis.matrix()

    coup_cache = {}

    def couplings(op_name):
        if op_name not in coup_cache:
            op = resolve_site_op(op_name, model.site_dim, field.phi)
            coup_cache[op_name] = decompose_two_by_two(bmat.conj().T @ op @ bmat)
        return coup_cache[op_name]

    acc = {}
    constant = 0.0
    for t in model.diag_terms:
        per_site = []
        for s, op_name in t.factors:
            c = couplings(op_name)
            opts = [(None, c.identity), ((s, "x"), c.x), ((s, "y"), c.y), ((s, "z"), c.z)]
            per_site.append([(k, v) for k, v in opts if abs(v) > drop_tol])
        for combo in itertools.product(*per_site):
            coeff = t.coeff
            for _, v in combo:
                coeff *= v
            key = tuple(sorted(k for k, _ in combo if k is not None))
            if key:
                acc[key] = acc.get(key, 0.0) + coeff
            else:
                constant += np.real(coeff)

    # field term: lambda times the low eigenvalue per site, plus any absorbed
    # longitudinal fields coming back as z terms
    if model.lam is not None:
        m = field_matrix(field)
        low = float(np.linalg.eigvalsh(m)[0])
        if field.sign_convention == "high":
            low = float(np.linalg.eigvalsh(m)[-1])
        constant += model.lam * low * model.nsites
    if model.h_field is not None:
        for s, hval in enumerate(model.h_field):
            if hval != 0.0:
                key = ((s, "z"),)
                acc[key] = acc.get(key, 0.0) + hval

    terms = tuple(
        PauliTerm(coeff, key) for key, coeff in acc.items() if abs(coeff) > drop_tol
    )
    return ProjectedModel(QubitModel(model.lattice, terms), constant)
