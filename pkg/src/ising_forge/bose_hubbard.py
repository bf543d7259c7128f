"""Decorated-honeycomb Bose-Hubbard builders and their Kitaev limit.

Each honeycomb site becomes a four-site star (center c plus corners
x, y, z) hosting a fixed boson number.  Tuned intra-star hoppings make
the single-particle problem an affine transform of the deformed field
matrix X(q) at q = 2 - sqrt(3), so every star carries an exact
two-level ground space, and corner densities project onto it as
(1 - sigma^alpha) / (3 + sqrt(3)).  Density-density interactions
(version "interaction") or weak inter-star corner hopping (version
"hopping") then induce Kitaev couplings between the emergent spins.

Preset relations, with lam the intra-star energy scale:

    t_c   = 2 lam sqrt(3 sqrt(3) - 5)          center-corner hopping
    t     = lam (2 - sqrt(3) + i)              cyclic corner hopping
    mu_alpha - mu_c = 4 lam (2 - sqrt(3)) + nu_alpha

    interaction:  J_alpha = V_alpha / (3 + sqrt(3))^2
    hopping:      V_alpha = -(t'_alpha)^2 / (2 w),  same J formula
    both:         h_alpha = J_alpha + nu_alpha / (3 + sqrt(3))

Down stars in the hopping version carry the conjugated t and all
chemical potentials sign-inverted, and are loaded with three hardcore
bosons instead of one.  The "spinless fermion" reading of the
one-boson-per-star sector is available as a statistics toggle on the
cluster assembler; with one particle per star and no inter-star
hopping no exchange ever occurs, so it is a documented no-op.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from importlib import resources
from itertools import combinations, product
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .errors import DimensionError, HierarchyWarning, PresetError, SingularityError
from .transmute import density_operator, project_operator, x_of_q_field

SQ3 = math.sqrt(3.0)
QSTAR = 2.0 - SQ3
FLAVORS = ("c", "x", "y", "z")
AXES = ("x", "y", "z")
VERSIONS = ("interaction", "hopping")

DOUBLET_TOL = 1e-10


def intra_triangle_matrix(lam: float, mu_c: float = 0.0,
                          nus: Sequence[float] = (0.0, 0.0, 0.0),
                          conj: bool = False,
                          invert_mu: bool = False) -> np.ndarray:
    """Single-particle matrix of one star in the basis (c, x, y, z).

    ``conj`` conjugates the cyclic hopping and ``invert_mu`` flips the
    sign of the corner offsets relative to mu_c; down stars in the
    hopping preset use both together with a sign-flipped mu_c.
    """
    t_c = 2.0 * lam * math.sqrt(3.0 * SQ3 - 5.0)
    t = lam * (QSTAR + 1j)
    if conj:
        t = t.conjugate()
    offset = 4.0 * lam * QSTAR
    nus = np.asarray(nus, dtype=float)
    if nus.shape != (3,):
        raise DimensionError("nus must carry one value per corner axis")
    if invert_mu:
        mu_corner = mu_c - offset - nus
    else:
        mu_corner = mu_c + offset + nus
    h = np.zeros((4, 4), dtype=complex)
    h[0, 0] = mu_c
    for k in range(3):
        h[k + 1, k + 1] = mu_corner[k]
        h[k + 1, 0] = t_c
        h[0, k + 1] = t_c
    cyc = {1: 2, 2: 3, 3: 1}
    for a, b in cyc.items():
        h[b, a] += t
        h[a, b] += t.conjugate()
    return h


def _per_axis(value) -> tuple:
    if np.isscalar(value):
        return (float(value),) * 3
    out = tuple(float(x) for x in value)
    if len(out) != 3:
        raise DimensionError("per-axis parameters need three entries")
    return out


def _nu_profile(nu, axis: int) -> tuple:
    # scalar nu sits on the bond axis alone (the other corners have no
    # bond to compensate); a 3-tuple sets all corners explicitly
    if np.isscalar(nu):
        return tuple(float(nu) if k == axis else 0.0 for k in range(3))
    return _per_axis(nu)


class TriangleLevels(NamedTuple):
    energies: np.ndarray
    splitting: float


def triangle_spectrum(version: str, lam: float, nu=0.0,
                      bond_axis: str = "z", w: float = 0.0,
                      triangle: str = "up",
                      require_doublet: bool = True) -> TriangleLevels:
    """Spectrum of one star in its preset boson sector.

    Interaction version and up stars carry one boson (plain 4x4);
    down stars of the hopping version carry three hardcore bosons,
    which is again a 4-state problem.  With ``nu = 0`` the two lowest
    levels are exactly degenerate; a nonzero nu splits them (it is the
    field on the emergent spin), so callers probing that case must
    drop ``require_doublet``.
    """
    if version not in VERSIONS:
        raise PresetError(f"unknown version {version!r}")
    if lam < 0:
        raise DimensionError(f"lam must be >= 0, got {lam}")
    axis = AXES.index(bond_axis)
    nus = _nu_profile(nu, axis)
    if version == "interaction":
        h = intra_triangle_matrix(lam, 0.0, nus)
        energies = np.linalg.eigvalsh(h)
    elif triangle == "up":
        h = intra_triangle_matrix(lam, 2.0 * lam * (2.0 * SQ3 - 3.0) - w, nus)
        energies = np.linalg.eigvalsh(h)
    else:
        h = intra_triangle_matrix(lam, -2.0 * lam * (2.0 * SQ3 - 3.0) + w, nus,
                                  conj=True, invert_mu=True)
        energies = np.linalg.eigvalsh(_hardcore_sector(h, 3))
    split = float(energies[1] - energies[0])
    scale = max(abs(lam), float(np.max(np.abs(energies))), 1e-300)
    if require_doublet and split > DOUBLET_TOL * scale:
        raise PresetError(
            f"ground doublet split by {split!r}; preset parameters detuned")
    return TriangleLevels(energies, split)


def projected_density(alpha: str) -> np.ndarray:
    """Corner density in the star doublet: (1 - sigma^alpha)/(3 + sqrt3)."""
    field = x_of_q_field(QSTAR)
    return project_operator(field, density_operator(alpha)).as_matrix()


@dataclass(frozen=True)
class BHModel:
    """One- or two-star Bose-Hubbard cluster with explicit amplitudes.

    ``hoppings`` lists directed amplitudes (i, j, t) for t b_i^dag b_j,
    Hermitian-closed; ``mu`` is the per-site diagonal; ``v_bonds`` are
    density-density couplings.  Bosons are hardcore throughout.
    """

    version: str
    ntriangles: int
    hoppings: tuple
    mu: tuple
    v_bonds: tuple
    bosons_per_triangle: tuple
    lam: float
    params: tuple
    hardcore: bool = True

    def __post_init__(self):
        if self.version not in VERSIONS:
            raise PresetError(f"unknown version {self.version!r}")
        if not self.hardcore:
            raise PresetError("presets are hardcore (on-site U infinite)")
        amp = {(i, j): t for i, j, t in self.hoppings}
        for (i, j), t in amp.items():
            back = amp.get((j, i))
            if back is None or abs(back - np.conj(t)) > 1e-12 * max(1.0, abs(t)):
                raise PresetError(f"hopping list not Hermitian-closed at {(i, j)}")

    @property
    def nsites(self) -> int:
        return 4 * self.ntriangles

    @property
    def sites(self) -> tuple:
        return tuple((s, f) for s in range(self.ntriangles) for f in FLAVORS)

    @property
    def total_bosons(self) -> int:
        return sum(self.bosons_per_triangle)

    def param(self, key: str):
        return dict(self.params)[key]


def build_preset(version: str, ntriangles: int, lam: float,
                 v: Optional[float] = None, nu: Optional[float] = None,
                 w: Optional[float] = None, t_prime: Optional[float] = None,
                 bond_axis: str = "z", mu_c: float = 0.0) -> BHModel:
    """Preset cluster of one or two stars joined along ``bond_axis``.

    The interaction version needs ``v`` (and optionally ``nu``, which
    defaults to the zero-field tuning); the hopping version needs
    ``w`` and ``t_prime``.  Two-star models place the coupling on the
    matching corners of the chosen axis.
    """
    if version not in VERSIONS:
        raise PresetError(f"unknown version {version!r}")
    if ntriangles not in (1, 2):
        raise DimensionError(f"ntriangles must be 1 or 2, got {ntriangles}")
    if bond_axis not in AXES:
        raise DimensionError(f"bond_axis must be one of {AXES}")
    axis = AXES.index(bond_axis)

    if version == "interaction":
        if v is None:
            raise PresetError("interaction preset needs v")
        if nu is None:
            nu = -v / (3.0 + SQ3)
        nus = _nu_profile(nu, axis)
        hoppings = []
        mu = []
        for s in range(ntriangles):
            h1 = intra_triangle_matrix(lam, mu_c, nus)
            base = 4 * s
            for a in range(4):
                mu.append(float(h1[a, a].real))
                for b in range(4):
                    if a != b and h1[a, b] != 0:
                        hoppings.append((base + a, base + b, complex(h1[a, b])))
        v_bonds = []
        if ntriangles == 2:
            v_bonds.append((1 + axis, 5 + axis, float(v)))
        return BHModel(version, ntriangles, tuple(hoppings), tuple(mu),
                       tuple(v_bonds), (1,) * ntriangles, lam,
                       (("bond_axis", bond_axis), ("mu_c", mu_c),
                        ("nu", nus), ("v", float(v))))

    if w is None or t_prime is None:
        raise PresetError("hopping preset needs w and t_prime")
    if mu_c != 0.0:
        # the hopping preset pins both center potentials to +-(2 lam (2 sqrt3 - 3) - w)
        raise PresetError("hopping preset does not take mu_c")
    if nu is None:
        if w == 0.0:
            raise SingularityError("zero-field tuning diverges at w = 0")
        nu = t_prime ** 2 / (2.0 * (3.0 + SQ3) * w)
    nus = _nu_profile(nu, axis)
    hoppings = []
    mu = []
    for s in range(ntriangles):
        up = s % 2 == 0
        if up:
            h1 = intra_triangle_matrix(lam, 2.0 * lam * (2.0 * SQ3 - 3.0) - w, nus)
        else:
            h1 = intra_triangle_matrix(lam, -(2.0 * lam * (2.0 * SQ3 - 3.0) - w),
                                       nus, conj=True, invert_mu=True)
        base = 4 * s
        for a in range(4):
            mu.append(float(h1[a, a].real))
            for b in range(4):
                if a != b and h1[a, b] != 0:
                    hoppings.append((base + a, base + b, complex(h1[a, b])))
    if ntriangles == 2:
        hoppings.append((1 + axis, 5 + axis, complex(t_prime)))
        hoppings.append((5 + axis, 1 + axis, complex(np.conj(t_prime))))
    return BHModel(version, ntriangles, tuple(hoppings), tuple(mu),
                   (), tuple(1 if s % 2 == 0 else 3 for s in range(ntriangles)),
                   lam, (("bond_axis", bond_axis), ("nu", nus),
                         ("t_prime", float(t_prime)), ("w", float(w))))


def _hardcore_sector(h1, nbosons):
    """Many-body matrix of a single-particle matrix at fixed filling."""
    n = h1.shape[0]
    states = [frozenset(c) for c in combinations(range(n), nbosons)]
    idx = {s: i for i, s in enumerate(states)}
    out = np.zeros((len(states), len(states)), dtype=complex)
    for s in states:
        i = idx[s]
        for a in range(n):
            for b in range(n):
                t = h1[a, b]
                if abs(t) < 1e-300:
                    continue
                if a == b:
                    if a in s:
                        out[i, i] += t.real
                elif b in s and a not in s:
                    out[idx[s - {b} | {a}], i] += t
    return out


def cluster_basis(model: BHModel) -> list:
    """Hardcore occupation basis of the model's boson sector.

    The interaction version conserves the per-star numbers exactly (no
    inter-star hopping), so the basis is the product of per-star
    sectors.  The hopping version only conserves the total, and the
    virtual redistributed sectors carry the second-order physics.
    """
    if model.version == "interaction":
        per_star = [
            [frozenset(4 * s + a for a in c)
             for c in combinations(range(4), model.bosons_per_triangle[s])]
            for s in range(model.ntriangles)
        ]
        return [frozenset().union(*combo) for combo in product(*per_star)]
    return [frozenset(c) for c in combinations(range(model.nsites),
                                               model.total_bosons)]


def assemble_cluster(model: BHModel, statistics: str = "boson") -> np.ndarray:
    """Dense many-body matrix of a preset cluster.

    ``statistics="spinless_fermion"`` is accepted for the interaction
    version, where one particle per star and star-diagonal hopping mean
    no two particles ever exchange; the matrix is identical.
    """
    if statistics not in ("boson", "spinless_fermion"):
        raise DimensionError(f"unknown statistics {statistics!r}")
    if statistics == "spinless_fermion" and model.version != "interaction":
        raise PresetError(
            "fermionic reading only holds with one particle per star")
    states = cluster_basis(model)
    idx = {s: i for i, s in enumerate(states)}
    dim = len(states)
    out = np.zeros((dim, dim), dtype=complex)
    for s in states:
        i = idx[s]
        for a, mu_a in enumerate(model.mu):
            if a in s:
                out[i, i] += mu_a
        for a, b, vv in model.v_bonds:
            if a in s and b in s:
                out[i, i] += vv
        for a, b, t in model.hoppings:
            if b in s and a not in s:
                s2 = s - {b} | {a}
                j = idx.get(s2)
                if j is not None:
                    out[j, i] += t
    return out


@dataclass(frozen=True)
class KitaevEffective:
    """Emergent per-axis Kitaev couplings and fields."""

    j: tuple
    h: tuple


def effective_kitaev(version: str, v=None, nu=0.0,
                     w: Optional[float] = None, t_prime=None) -> KitaevEffective:
    """Closed-form effective couplings of a preset.

    Interaction: J_alpha = V_alpha / (3 + sqrt3)^2.  Hopping: the
    second-order pair process fixes V_alpha = -(t'_alpha)^2 / (2 w),
    then the same formula applies.  Either way the emergent field is
    h_alpha = J_alpha + nu_alpha / (3 + sqrt3).
    """
    if version not in VERSIONS:
        raise PresetError(f"unknown version {version!r}")
    if version == "interaction":
        if v is None:
            raise PresetError("interaction preset needs v")
        v_axis = _per_axis(v)
    else:
        if w is None or t_prime is None:
            raise PresetError("hopping preset needs w and t_prime")
        if w == 0.0:
            raise SingularityError("pair-process coupling diverges at w = 0")
        v_axis = tuple(-(tp ** 2) / (2.0 * w) for tp in _per_axis(t_prime))
    nu_axis = _per_axis(nu)
    j = tuple(vx / (3.0 + SQ3) ** 2 for vx in v_axis)
    h = tuple(jx + nx / (3.0 + SQ3) for jx, nx in zip(j, nu_axis))
    return KitaevEffective(j, h)


def zero_field_nu(version: str, v=None, w: Optional[float] = None,
                  t_prime=None) -> tuple:
    """Per-axis nu tuning that cancels the emergent field."""
    if version not in VERSIONS:
        raise PresetError(f"unknown version {version!r}")
    if version == "interaction":
        if v is None:
            raise PresetError("interaction preset needs v")
        return tuple(-vx / (3.0 + SQ3) for vx in _per_axis(v))
    if w is None or t_prime is None:
        raise PresetError("hopping preset needs w and t_prime")
    if w == 0.0:
        raise SingularityError("zero-field tuning diverges at w = 0")
    return tuple(tp ** 2 / (2.0 * (3.0 + SQ3) * w) for tp in _per_axis(t_prime))


class ClusterCheck(NamedTuple):
    ratio: float
    mismatch: float
    excitations: np.ndarray
    effective: np.ndarray


def verify_small_cluster(version: str, ratio: float, k: int = 4,
                         lam: float = 1.0, bond_axis: str = "z") -> ClusterCheck:
    """Two-star ED against the effective single-bond Kitaev model.

    ``ratio`` is the separation per hierarchy level: lam / V for the
    interaction version, lam / w = w / t' for the hopping version.  The
    mismatch is the worst deviation of the lowest k excitation energies,
    relative to the effective gap 2|J|.  Ratios below 10 leave the
    perturbative window and are annotated with a warning.
    """
    if ratio < 0:
        raise DimensionError(f"ratio must be >= 0, got {ratio}")
    if k < 2:
        raise DimensionError(f"need k >= 2, got {k}")
    if 0 < ratio < 10:
        warnings.warn(
            f"hierarchy ratio {ratio} below 10; effective description "
            "is outside its window", HierarchyWarning, stacklevel=2)

    if version == "interaction":
        v = lam / ratio if ratio > 0 else 0.0
        model = build_preset(version, 2, lam, v=v, bond_axis=bond_axis)
        j_eff = effective_kitaev(version, v=v).j[AXES.index(bond_axis)]
    else:
        w = lam / ratio if ratio > 0 else 0.0
        tp = w / ratio if ratio > 0 else 0.0
        if ratio == 0:
            raise DimensionError("hopping version needs a positive ratio")
        model = build_preset(version, 2, lam, w=w, t_prime=tp,
                             bond_axis=bond_axis)
        j_eff = effective_kitaev(version, w=w, t_prime=tp).j[AXES.index(bond_axis)]

    evals = np.linalg.eigvalsh(assemble_cluster(model))
    exc = evals[:k] - evals[0]
    gap = 2.0 * abs(j_eff)
    eff = np.array([0.0, 0.0] + [gap] * (k - 2))[:k]
    if gap == 0.0:
        worst = float(np.max(np.abs(exc)))
        mismatch = 0.0 if worst < 1e-12 * max(lam, 1.0) else math.inf
    else:
        mismatch = float(np.max(np.abs(exc - eff)) / gap)
    return ClusterCheck(float(ratio), mismatch, exc, eff)


def load_preset_defaults() -> dict:
    """Bundled default parameters of the validation harness."""
    path = resources.files("ising_forge.data").joinpath("bh_presets.json")
    return json.loads(path.read_text())


def validation_rows(version: str, ratios: Optional[Sequence[float]] = None,
                    k: Optional[int] = None) -> list:
    """ClusterCheck rows over a ratio sweep, defaults from the bundle."""
    defaults = load_preset_defaults()
    if version not in defaults:
        raise PresetError(f"unknown version {version!r}")
    block = defaults[version]
    if ratios is None:
        ratios = block["ratios"]
    if k is None:
        k = block["k"]
    return [verify_small_cluster(version, float(r), k=k,
                                 lam=block["lam"], bond_axis=block["bond_axis"])
            for r in ratios]
