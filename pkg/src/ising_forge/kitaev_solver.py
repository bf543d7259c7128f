"""Free-fermion solution of the transmuted Kitaev honeycomb model.

After transmutation at phi = pi/4 the model maps onto Majorana fermions
hopping on the honeycomb lattice in a fixed gauge sector (all bond
variables +1).  Each unit cell carries six Majorana modes, so the Bloch
Hamiltonian is a 6x6 Hermitian matrix with particle-hole symmetric
spectrum.  This module provides the Bloch matrix, the Brillouin-zone
gap, closed-form critical fields, Chern numbers of the occupied bands
and barycentric phase-diagram scans.

Conventions:

* couplings enter through ``Jt_alpha = 3 J_alpha`` (the qubit coupling
  picks up a factor 3 under transmutation);
* momenta ``kx, ky`` live in ``[0, 2pi)`` in the reciprocal basis in
  which hopping phases are exactly ``exp(+-i kx)`` and ``exp(+-i ky)``;
* the gap is twice the smallest nonnegative single-particle eigenvalue
  (a physical excitation creates a pair of Bogoliubov quasiparticles).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np
from scipy.optimize import minimize

from .errors import DimensionError, GaplessError, NonConvergenceError

LABEL_LOW_FIELD = "LowFieldZ2"
LABEL_CHIRAL = "Chiral"
LABEL_A = ("A_x", "A_y", "A_z")

# smallest gap for which a Chern number is still considered well defined
GAP_THRESHOLD = 1e-4


@dataclass(frozen=True)
class KitaevParams:
    """Couplings and field strength of one free-fermion point.

    ``phi`` and ``flux`` are recorded for provenance: the solution below
    is only valid at ``phi = pi/4`` in the flux-free sector.
    """

    jx: float
    jy: float
    jz: float
    lam: float
    phi: float = math.pi / 4
    flux: int = +1

    def __post_init__(self):
        for name in ("jx", "jy", "jz", "lam"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise DimensionError(f"{name} must be finite, got {v!r}")
        if self.jx == 0.0 and self.jy == 0.0 and self.jz == 0.0:
            raise DimensionError("at least one coupling must be nonzero")
        if self.lam < 0:
            raise DimensionError(f"field strength must be >= 0, got {self.lam}")
        if self.flux != +1:
            raise DimensionError("only the flux-free sector (flux=+1) is solved")

    def tilde(self) -> tuple:
        return (3.0 * self.jx, 3.0 * self.jy, 3.0 * self.jz)


class BlochMatrix(NamedTuple):
    kx: float
    ky: float
    matrix: np.ndarray


def _bloch_grid(params: KitaevParams, kxs, kys) -> np.ndarray:
    """Bloch matrices on the outer product of two momentum arrays.

    Returns an array of shape (len(kxs), len(kys), 6, 6).
    """
    kxg, kyg = np.meshgrid(np.asarray(kxs, dtype=float),
                           np.asarray(kys, dtype=float), indexing="ij")
    tjx, tjy, tjz = params.tilde()
    ex = np.exp(-1j * kxg)
    ey = np.exp(-1j * kyg)
    il = 1j * params.lam
    hs = np.zeros(kxg.shape + (6, 6), dtype=complex)
    hs[..., 0, 1] = il
    hs[..., 0, 2] = -il
    hs[..., 0, 4] = 1j * tjx * ex
    hs[..., 1, 2] = il
    hs[..., 1, 5] = 1j * tjy * ey
    hs[..., 2, 3] = 1j * tjz
    hs[..., 3, 4] = il
    hs[..., 3, 5] = -il
    hs[..., 4, 5] = il
    return hs + np.conj(np.swapaxes(hs, -1, -2))


def bloch(params: KitaevParams, kx: float, ky: float) -> BlochMatrix:
    """6x6 Bloch Hamiltonian at one momentum."""
    mat = _bloch_grid(params, [kx], [ky])[0, 0]
    return BlochMatrix(float(kx), float(ky), mat)


def _lowest_band(params: KitaevParams, kx: float, ky: float) -> float:
    mat = _bloch_grid(params, [kx], [ky])[0, 0]
    return float(np.min(np.abs(np.linalg.eigvalsh(mat))))


def corner_det_check(params: KitaevParams) -> float:
    """Discrepancy between the numeric and analytic |det| at the BZ corners.

    At kx, ky in {0, pi} the determinant of the Bloch matrix factorizes;
    sqrt|det| equals |ex Jtx ey Jty Jtz - (ex Jtx + ey Jty + Jtz) lam^2|
    with ex, ey = +-1.  Returns the worst absolute mismatch over the
    four corners.
    """
    tjx, tjy, tjz = params.tilde()
    lam2 = params.lam ** 2
    worst = 0.0
    for kx, ex in ((0.0, 1.0), (math.pi, -1.0)):
        for ky, ey in ((0.0, 1.0), (math.pi, -1.0)):
            mat = _bloch_grid(params, [kx], [ky])[0, 0]
            num = math.sqrt(abs(np.linalg.det(mat).real))
            ana = abs(ex * tjx * ey * tjy * tjz - (ex * tjx + ey * tjy + tjz) * lam2)
            worst = max(worst, abs(num - ana))
    return worst


def gap(params: KitaevParams, grid_n: int = 201) -> float:
    """Excitation gap, scanned over a grid with one local refinement pass.

    The coarse grid locates the softest momentum; a 5x finer local
    subgrid plus a simplex polish pins the minimum down.  Accurate to
    the polish tolerances (1e-10 in k), which resolves the closings
    relevant here.
    """
    if grid_n < 3:
        raise DimensionError(f"grid_n must be >= 3, got {grid_n}")
    ks = np.linspace(0.0, 2.0 * math.pi, grid_n, endpoint=False)
    ev = np.linalg.eigvalsh(_bloch_grid(params, ks, ks))
    low = np.min(np.abs(ev), axis=-1)
    i, j = np.unravel_index(np.argmin(low), low.shape)
    k0 = np.array([ks[i], ks[j]])
    dk = ks[1] - ks[0]

    best_val = float(low[i, j])
    best_k = k0
    for a in np.linspace(-dk, dk, 11):
        for b in np.linspace(-dk, dk, 11):
            v = _lowest_band(params, k0[0] + a, k0[1] + b)
            if v < best_val:
                best_val, best_k = v, k0 + (a, b)

    res = minimize(lambda k: _lowest_band(params, k[0], k[1]), best_k,
                   method="Nelder-Mead",
                   options={"xatol": 1e-10, "fatol": 1e-14})
    return 2.0 * min(best_val, float(res.fun))


@dataclass(frozen=True)
class CriticalFields:
    """Closed-form phase boundaries in the field strength.

    ``lambda_c`` always exists.  ``lambda_c1`` and ``lambda_c2`` exist
    only when one |Jt| outweighs the sum of the other two (the toric
    code like corner regions); on the boundary of that region
    ``lambda_c1`` diverges and is reported as ``inf``.
    """

    lambda_c: float
    lambda_c1: Optional[float]
    lambda_c2: Optional[float]


def critical_fields(params: KitaevParams) -> CriticalFields:
    a = tuple(abs(t) for t in params.tilde())
    prod = a[0] * a[1] * a[2]
    total = a[0] + a[1] + a[2]
    lam_c = math.sqrt(prod / total)
    dom = max(range(3), key=a.__getitem__)
    rest = total - a[dom]
    if a[dom] < rest:
        return CriticalFields(lam_c, None, None)
    gap_ = a[dom] - rest
    lam_c1 = math.inf if gap_ == 0.0 else math.sqrt(prod / gap_)
    return CriticalFields(lam_c, lam_c1, lam_c)


def phase_label(params: KitaevParams) -> str:
    """Closed-form phase assignment.

    Corner regions (one dominant coupling): low-field Z2 below
    lambda_c2, chiral between lambda_c2 and lambda_c1, anisotropic
    toric-code phase above lambda_c1.  Central region: low-field Z2
    below lambda_c, chiral above.  Points exactly on a boundary are
    assigned to the lower phase; scans exclude them from assertions.
    """
    a = tuple(abs(t) for t in params.tilde())
    dom = max(range(3), key=a.__getitem__)
    crit = critical_fields(params)
    if crit.lambda_c1 is None:
        return LABEL_LOW_FIELD if params.lam <= crit.lambda_c else LABEL_CHIRAL
    if params.lam <= crit.lambda_c2:
        return LABEL_LOW_FIELD
    if params.lam <= crit.lambda_c1:
        return LABEL_CHIRAL
    return LABEL_A[dom]


def chern_number(params: KitaevParams, grid_n: int = 101,
                 gap_threshold: float = GAP_THRESHOLD) -> int:
    """Total Chern number of the three negative-energy bands.

    Gauge-invariant plaquette method: link variables are determinants
    of neighboring occupied-frame overlaps, the Berry flux per
    plaquette is the argument of their oriented product, and the total
    flux is quantized to 2 pi x integer.  Odd values signal the
    non-Abelian chiral phase.
    """
    if gap(params, 101) <= gap_threshold:
        raise GaplessError(
            "Chern number undefined: spectrum is gapless at these parameters")
    ks = np.linspace(0.0, 2.0 * math.pi, grid_n, endpoint=False)
    _, vec = np.linalg.eigh(_bloch_grid(params, ks, ks))
    occ = vec[..., :3]
    ux = np.linalg.det(np.einsum("ijab,ijac->ijbc", occ.conj(), np.roll(occ, -1, 0)))
    uy = np.linalg.det(np.einsum("ijab,ijac->ijbc", occ.conj(), np.roll(occ, -1, 1)))
    ux /= np.abs(ux)
    uy /= np.abs(uy)
    flux = np.angle(ux * np.roll(uy, -1, 0) / (np.roll(ux, -1, 1) * uy))
    total = flux.sum() / (2.0 * math.pi)
    nearest = round(total)
    if abs(total - nearest) > 1e-6:
        raise NonConvergenceError(
            f"plaquette flux sum {total!r} is not integral; refine the grid")
    return int(nearest)


class ScanRow(NamedTuple):
    jx: float
    jy: float
    jz: float
    lam: float
    gap: Optional[float]
    chern: Optional[int]
    label: str


def barycentric_grid(resolution: int) -> list:
    """All (i+j+k = resolution-1) coupling triples with |Jx|+|Jy|+|Jz| = 1."""
    if resolution < 2:
        raise DimensionError(f"resolution must be >= 2, got {resolution}")
    den = resolution - 1
    pts = []
    for i in range(resolution):
        for j in range(resolution - i):
            k = den - i - j
            pts.append((i / den, j / den, k / den))
    return pts


def _scan_point(args) -> ScanRow:
    jx, jy, jz, lam, sign, gap_grid, chern_grid = args
    params = KitaevParams(sign * jx, sign * jy, sign * jz, lam)
    label = phase_label(params)
    g = None
    c = None
    if gap_grid:
        g = gap(params, gap_grid)
    if chern_grid:
        try:
            c = chern_number(params, chern_grid)
        except GaplessError:
            c = None
    return ScanRow(params.jx, params.jy, params.jz, lam, g, c, label)


def phase_scan(lam: float, resolution: int, sign: int = +1,
               gap_grid: int = 0, chern_grid: int = 0,
               jobs: Optional[int] = None) -> list:
    """Phase labels over the barycentric coupling triangle at fixed field.

    Labels come from the closed-form boundaries; ``gap_grid`` and
    ``chern_grid`` (0 = skip) additionally compute the numeric gap and
    Chern number per point.  Points with at least one zero coupling
    get a gap but no Chern number when gapless.  Rows are ordered by
    the (i, j) barycentric indices regardless of ``jobs``.
    """
    if sign not in (+1, -1):
        raise DimensionError(f"sign must be +1 or -1, got {sign}")
    tasks = [(jx, jy, jz, lam, sign, gap_grid, chern_grid)
             for jx, jy, jz in barycentric_grid(resolution)]
    if jobs is None:
        jobs = int(os.environ.get("ISING_FORGE_JOBS", "1"))
    if jobs > 1 and (gap_grid or chern_grid):
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_scan_point, tasks, chunksize=8))
    return [_scan_point(t) for t in tasks]


def scan_corners(rows: Sequence[ScanRow]) -> dict:
    """Labels at the three corners of a scan, keyed by dominant axis."""
    out = {}
    for row in rows:
        trip = (abs(row.jx), abs(row.jy), abs(row.jz))
        for axis in range(3):
            if trip[axis] == 1.0:
                out[("x", "y", "z")[axis]] = row.label
    return out


def scan_center(rows: Sequence[ScanRow]) -> ScanRow:
    """The scan row closest to the isotropic point."""
    def dist(row):
        return ((abs(row.jx) - 1 / 3) ** 2 + (abs(row.jy) - 1 / 3) ** 2
                + (abs(row.jz) - 1 / 3) ** 2)
    return min(rows, key=dist)
