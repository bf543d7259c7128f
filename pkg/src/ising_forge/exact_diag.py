"""Exact diagonalization and the small-system physics checks built on it.

Models assemble into scipy CSR matrices; diagonal qudit interactions take a
vectorized diagonal path so Potts-type models never materialize off-diagonal
interaction blocks.  Dense eigensolvers run below dimension 4096, restarted
Lanczos (ARPACK eigsh) above, with an explicit residual check.  On top of
that sit the large-field convergence sweeps, the two-site gapped-SPT
solution, entanglement reports, string order on staggered chains, and the
classical ground-state count of the field-free Kitaev-type model.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import DimensionError, NonConvergenceError
from .model_ir import IsingModel, QubitModel, build_lattice, resolve_site_op, standard_model
from .qudit_algebra import SQ3, embed, make_fixed_matrix, max_abs
from .transmute import field_matrix, transmute_qubit_model

DIM_CAP = 4 ** 10
DENSE_CUTOFF = 4096
HERMITICITY_TOL = 1e-12
RESIDUAL_TOL = 1e-9
DEGENERACY_RTOL = 1e-8


def _site_digits(nsites, site, site_dim):
    dim = site_dim ** nsites
    return (np.arange(dim) // site_dim ** (nsites - 1 - site)) % site_dim


def _is_diag_op(mat):
    return max_abs(mat - np.diag(np.diag(mat))) == 0.0


def assemble(model, cap=DIM_CAP):
    """Sparse Hermitian many-body matrix of a model.

    IsingModel requires a numeric lam when it carries a field.  Hermiticity
    is verified to 1e-12 before returning.
    """
    if isinstance(model, QubitModel):
        site_dim, terms, phi = 2, model.terms, 0.0
    else:
        site_dim, terms = model.site_dim, model.diag_terms
        phi = model.field.phi if model.field is not None else 0.0
    n = model.nsites
    dim = site_dim ** n
    if dim > cap:
        raise DimensionError(f"Hilbert dimension {dim} exceeds cap {cap}")

    ham = sp.csr_matrix((dim, dim), dtype=complex)
    diag_acc = np.zeros(dim, dtype=complex)
    for t in terms:
        mats = [(s, resolve_site_op(op, site_dim, phi)) for s, op in t.factors]
        if all(_is_diag_op(m) for _, m in mats):
            vec = np.full(dim, t.coeff, dtype=complex)
            for s, m in mats:
                vec *= np.diag(m)[_site_digits(n, s, site_dim)]
            diag_acc += vec
        else:
            op = sp.identity(dim, format="csr", dtype=complex)
            for s, m in mats:
                op = op @ embed(m, s, n, site_dim)
            ham = ham + t.coeff * op

    if isinstance(model, IsingModel) and model.field is not None:
        if model.lam is None:
            raise DimensionError("field strength lam is symbolic; set a number first")
        fmat = field_matrix(model.field)
        for s in range(n):
            if model.site_dim == 3 and model.field.kind == "three_state_sym":
                h = model.h_field[s] if model.h_field is not None else 0.0
                x3 = make_fixed_matrix("X3")
                site_f = (model.lam + 1j * h / SQ3) * x3
                site_f = site_f + site_f.conj().T
            else:
                if model.h_field is not None:
                    raise DimensionError("h_field is only defined for the symmetric 3-state field")
                site_f = model.lam * fmat
            ham = ham + embed(site_f, s, n, site_dim)
    elif isinstance(model, IsingModel) and model.h_field is not None:
        raise DimensionError("h_field without a field term")

    ham = ham + sp.diags(diag_acc, format="csr")
    if max_abs(ham - ham.getH()) > HERMITICITY_TOL:
        raise DimensionError("assembled matrix is not Hermitian")
    return ham.tocsr()


@dataclass(frozen=True)
class Spectrum:
    """Ascending eigenvalues, optional eigenvector columns, and the ground
    multiplet size at relative tolerance 1e-8."""

    eigenvalues: np.ndarray
    eigenvectors: Optional[np.ndarray]
    ground_degeneracy: int

    def excitations(self):
        return self.eigenvalues - self.eigenvalues[0]


def _ground_degeneracy(evals, full_scale):
    scale = max(full_scale, 1.0)
    count = 1
    while count < len(evals) and evals[count] - evals[0] <= DEGENERACY_RTOL * scale:
        count += 1
    return count


def lowest_k(op, k, want_vectors=True):
    """k smallest eigenpairs of a sparse Hermitian matrix.

    Purely diagonal matrices are sorted directly; below dimension 4096 the
    matrix is densified; otherwise ARPACK's restarted Lanczos runs and every
    returned pair is residual-checked to 1e-9.
    """
    dim = op.shape[0]
    if not 1 <= k <= dim:
        raise DimensionError(f"need 1 <= k <= {dim}, got {k}")

    offdiag = op - sp.diags(op.diagonal())
    if offdiag.count_nonzero() == 0:
        dvals = np.real(op.diagonal())
        order = np.argsort(dvals, kind="stable")[:k]
        evals = dvals[order]
        vecs = None
        if want_vectors:
            vecs = np.zeros((dim, k), dtype=complex)
            vecs[order, np.arange(k)] = 1.0
        scale = float(np.max(np.abs(dvals))) if dim else 1.0
        return Spectrum(evals, vecs, _ground_degeneracy(evals, scale))

    if dim < DENSE_CUTOFF or k > dim - 2:
        dense = op.toarray()
        if want_vectors:
            evals, vecs = np.linalg.eigh(dense)
            evals, vecs = evals[:k], vecs[:, :k]
        else:
            evals, vecs = np.linalg.eigvalsh(dense)[:k], None
        scale = float(np.max(np.abs(evals))) if len(evals) else 1.0
        return Spectrum(evals, vecs, _ground_degeneracy(evals, scale))

    evals, vecs = spla.eigsh(op, k=k, which="SA")
    order = np.argsort(evals)
    evals, vecs = evals[order], vecs[:, order]
    for i in range(k):
        res = np.linalg.norm(op @ vecs[:, i] - evals[i] * vecs[:, i])
        if res > RESIDUAL_TOL:
            raise NonConvergenceError(
                f"eigenpair {i} residual {res:.3e} above {RESIDUAL_TOL}"
            )
    scale = float(np.max(np.abs(evals)))
    return Spectrum(evals, vecs if want_vectors else None, _ground_degeneracy(evals, scale))


def _sweep_point(args):
    ising, lam, k = args
    spec = lowest_k(assemble(replace(ising, lam=lam)), k, want_vectors=False)
    return lam, spec.excitations()


@dataclass(frozen=True)
class SweepResult:
    """Per-lambda spectral errors plus the fitted decay exponent."""

    rows: tuple  # (lambda, spectral_error, k)
    exponent: Optional[float]
    fit_residual: Optional[float]
    k: int

    def errors(self):
        return np.array([r[1] for r in self.rows])


def convergence_sweep(ising, target, lambdas, k, jobs=None):
    """Spectral error of the Ising model against the target qubit model.

    The error at each lambda is the max deviation of the lowest k excitation
    energies (never absolute energies, so constant offsets drop out).  The
    decay exponent comes from a log-log least-squares fit over the lambda > 0
    entries; its residual is reported alongside.
    """
    if ising.lattice.nsites != target.lattice.nsites:
        raise DimensionError("ising and target models must share a site count")
    tspec = lowest_k(assemble(target), k, want_vectors=False)
    texc = tspec.excitations()

    points = [(ising, float(lam), k) for lam in lambdas]
    if jobs is not None and jobs > 1 and len(points) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_sweep_point, points))
    else:
        results = [_sweep_point(p) for p in points]

    rows = []
    for lam, exc in results:
        err = float(np.max(np.abs(exc[1:] - texc[1:]))) if k > 1 else 0.0
        rows.append((lam, err, k))

    fit_lams = np.array([r[0] for r in rows if r[0] > 0 and r[1] > 0])
    fit_errs = np.array([r[1] for r in rows if r[0] > 0 and r[1] > 0])
    exponent = residual = None
    if len(fit_lams) >= 2:
        coeffs, diag = np.polynomial.polynomial.polyfit(
            np.log(fit_lams), np.log(fit_errs), 1, full=True
        )
        exponent = float(-coeffs[1])
        residual = float(diag[0][0]) if len(diag[0]) else 0.0
    return SweepResult(tuple(rows), exponent, residual, k)


@dataclass(frozen=True)
class EntanglementReport:
    """Entanglement entropy (natural log), descending Schmidt weights, and
    their multiplicity pattern at relative tolerance 1e-8."""

    entropy: float
    spectrum: np.ndarray
    degeneracy_pattern: tuple


def entanglement(state, cut, site_dim=2):
    """Schmidt decomposition of a pure state across a contiguous cut.

    cut counts the sites in the left block under the convention that site 0
    is the most significant tensor factor.
    """
    state = np.asarray(state, dtype=complex).ravel()
    dim = state.size
    n = int(round(np.log(dim) / np.log(site_dim)))
    if site_dim ** n != dim:
        raise DimensionError(f"state size {dim} is not a power of {site_dim}")
    if not 0 < cut < n:
        raise DimensionError(f"cut must split the chain, got {cut} of {n}")
    weights = np.linalg.svd(
        state.reshape(site_dim ** cut, site_dim ** (n - cut)), compute_uv=False
    ) ** 2
    total = float(np.sum(weights))
    if abs(total - 1.0) > 1e-10:
        raise DimensionError(f"state not normalized, weight sum {total}")
    weights = np.sort(weights)[::-1]
    keep = weights[weights > 1e-16]
    entropy = float(-np.sum(keep * np.log(keep)))
    pattern = []
    i = 0
    while i < len(weights):
        j = i
        while j + 1 < len(weights) and abs(weights[j + 1] - weights[i]) <= DEGENERACY_RTOL * max(
            weights[0], 1e-30
        ):
            j += 1
        pattern.append(j - i + 1)
        i = j + 1
    return EntanglementReport(entropy, weights, tuple(pattern))


@dataclass(frozen=True)
class SptPoint:
    gap: float
    report: EntanglementReport
    energies: np.ndarray


def two_site_spt(J, lam):
    """Full solution of the solvable two-site 4-state model.

    H = 3J delta(s1, s2) + lam (X x 1 + 1 x X) on 16 states.  Returns the
    gap above the ground state and the ground-state entanglement across the
    site cut; for every lam > 0 the ground state is a Bell-type pair with
    entropy ln 2.
    """
    if J <= 0 or lam < 0:
        raise DimensionError("two_site_spt needs J > 0 and lam >= 0")
    x4 = make_fixed_matrix("X4")
    eye4 = np.eye(4)
    delta = np.diag((np.arange(4)[:, None] == np.arange(4)[None, :]).astype(float).ravel())
    ham = 3 * J * delta + lam * (np.kron(x4, eye4) + np.kron(eye4, x4))
    evals, evecs = np.linalg.eigh(ham)
    report = entanglement(evecs[:, 0], 1, site_dim=4)
    return SptPoint(float(evals[1] - evals[0]), report, evals)


def staggered_chain_ground(L, b, J=1.0, lam=1.0, boundary="periodic", phi=0.0):
    """Ground state of the staggered 4-state Potts-type chain.

    Built by transmuting the staggered Heisenberg chain, so the diagonal
    part is 3J sum_n w_n delta(s_n, s_n+1) up to a constant.
    """
    lat = build_lattice("chain", L, boundary, stagger_b=b)
    qm = standard_model("heisenberg", lat, J=J)
    ising = transmute_qubit_model(qm, phi=phi, path="four_state", lam=lam)
    spec = lowest_k(assemble(ising), 2)
    return spec.eigenvectors[:, 0]


def string_order(state, kind, interval, site_dim=4):
    """String expectation value over whole unit cells of a 4-state chain.

    interval = (a, b), 1-based inclusive unit cells; cell m covers sites
    (2m-2, 2m-1).  kind "trivial" is the product of the cell symmetry
    U^z over the interval; kind "spt" appends the flavor-parity endpoint
    Z^2 on the outer site of each end cell.
    """
    if site_dim != 4:
        raise DimensionError("string order is defined on 4-state chains")
    state = np.asarray(state, dtype=complex).ravel()
    n = int(round(np.log(state.size) / np.log(4)))
    if 4 ** n != state.size:
        raise DimensionError("state size is not a power of 4")
    ncells, rem = divmod(n, 2)
    if rem:
        raise DimensionError("string order needs an even number of sites")
    a, b = interval
    if not (1 <= a <= b <= ncells):
        raise DimensionError(f"interval {interval} misaligned for {ncells} cells")
    if kind not in ("trivial", "spt"):
        raise DimensionError(f"unknown string kind {kind!r}")

    uz = make_fixed_matrix("Uz")
    z2 = make_fixed_matrix("Zz")  # Z^2, the flavor parity that is odd under U^y
    vec = state.copy()
    for m in range(a, b + 1):
        for s in (2 * m - 2, 2 * m - 1):
            vec = embed(uz, s, n, 4) @ vec
    if kind == "spt":
        vec = embed(z2, 2 * a - 2, n, 4) @ vec
        vec = embed(z2, 2 * b - 1, n, 4) @ vec
    val = np.vdot(state, vec)
    return float(np.real(val)) if abs(np.imag(val)) < 1e-10 else complex(val)


def classical_ground_count(ising):
    """Ground energy and exact degeneracy of a diagonal (lam = 0) model.

    Enumerates the classical configurations directly from the term list, so
    it is an independent cross-check against the ED route through assemble.
    """
    if ising.lam not in (None, 0.0):
        raise DimensionError("classical count requires lam = 0")
    n, d = ising.nsites, ising.site_dim
    dim = d ** n
    if dim > DIM_CAP:
        raise DimensionError(f"classical enumeration of {dim} states exceeds cap")
    energy = np.zeros(dim)
    for t in ising.diag_terms:
        vec = np.full(dim, t.coeff, dtype=complex)
        for s, op in t.factors:
            phi = ising.field.phi if ising.field is not None else 0.0
            dvals = np.diag(resolve_site_op(op, d, phi))
            vec *= dvals[_site_digits(n, s, d)]
        energy += np.real(vec)
    e0 = float(np.min(energy))
    scale = max(1.0, float(np.max(np.abs(energy))))
    count = int(np.count_nonzero(energy - e0 <= DEGENERACY_RTOL * scale))
    return e0, count
