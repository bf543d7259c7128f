"""Fixed single-site matrices and generic multi-site operator algebra.

Conventions used throughout the package:

* matrices are plain complex ndarrays; many-body operators are scipy CSR,
* in a tensor product, site 0 is the most significant digit of the
  computational index (embed(A, 0, 2) == kron(A, I)),
* residual norms are max-absolute-entry norms, default tolerance 1e-12,
* anti-unitary operators are (unitary, conjugation-flag) pairs.

All catalogued matrices are built from exact integer / unit-complex
literals; only phi-dependent entries evaluate e^{i phi}.
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import CatalogueError, DimensionError, NonProjectiveError

SQ3 = np.sqrt(3.0)
OMEGA = np.exp(2j * np.pi / 3)  # primitive cube root of unity

PAULI = {
    "id": np.eye(2, dtype=complex),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
    "plus": np.array([[0, 1], [0, 0]], dtype=complex),
    "minus": np.array([[0, 0], [1, 0]], dtype=complex),
}


def max_abs(a) -> float:
    """Max-absolute-entry norm; accepts dense or sparse input."""
    if sp.issparse(a):
        return 0.0 if a.nnz == 0 else float(np.max(np.abs(a.data)))
    return float(np.max(np.abs(np.asarray(a)))) if np.asarray(a).size else 0.0


def _z4():
    return np.diag([1, 1j, -1, -1j]).astype(complex)


def _x4():
    return np.array(
        [
            [0, 1, 1, 1],
            [1, 0, -1j, 1j],
            [1, 1j, 0, -1j],
            [1, -1j, 1j, 0],
        ],
        dtype=complex,
    )


def _x3():
    return np.array([[0, 1, 0], [0, 0, 1], [1, 0, 0]], dtype=complex)


def _u_alpha():
    ux = np.array(
        [[0, 0, 0, 1], [0, 0, 1j, 0], [0, -1j, 0, 0], [1, 0, 0, 0]], dtype=complex
    )
    uy = np.array(
        [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1j], [0, 0, -1j, 0]], dtype=complex
    )
    uz = np.array(
        [[0, 0, 1, 0], [0, 0, 0, -1j], [1, 0, 0, 0], [0, 1j, 0, 0]], dtype=complex
    )
    return ux, uy, uz


# transposition generators; the anti-unitary symmetry is S_ij = U_ij K
_S_UNITARIES = {
    "S12": np.array(
        [[0, -1j, 0, 0], [-1j, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, -1]], dtype=complex
    ),
    "S13": np.array(
        [[0, 0, -1j, 0], [0, -1, 0, 0], [-1j, 0, 0, 0], [0, 0, 0, 1]], dtype=complex
    ),
    "S14": np.array(
        [[0, 0, 0, -1j], [0, 1, 0, 0], [0, 0, -1, 0], [-1j, 0, 0, 0]], dtype=complex
    ),
    "S23": np.array(
        [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
    ),
    "S24": np.array(
        [[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]], dtype=complex
    ),
    "S34": np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
    ),
}


def _even_permutation(name):
    # products of two anti-unitaries: S_ij S_kl = U_ij conj(U_kl)
    pairs = {
        "U123": ("S12", "S23"),
        "U12_34": ("S12", "S34"),
        "U13_24": ("S13", "S24"),
        "U14_23": ("S14", "S23"),
    }
    a, b = pairs[name]
    return _S_UNITARIES[a] @ _S_UNITARIES[b].conj()


def _majorana_pairs():
    icxy = np.array(
        [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]], dtype=complex
    )
    icyz = np.array(
        [[0, 0, 0, 1], [0, 0, -1, 0], [0, -1, 0, 0], [1, 0, 0, 0]], dtype=complex
    )
    iczx = np.array(
        [[0, -1j, 0, 0], [1j, 0, 0, 0], [0, 0, 0, 1j], [0, 0, -1j, 0]], dtype=complex
    )
    return {"icxy": icxy, "icyz": icyz, "iczx": iczx}


def _xtilde():
    a = np.sqrt(1 + SQ3)
    b = np.sqrt(2 + SQ3) * np.exp(5j * np.pi / 12)
    return np.array(
        [
            [0, a, a, a],
            [a, 2, np.conj(b), b],
            [a, b, 2, np.conj(b)],
            [a, np.conj(b), b, 2],
        ],
        dtype=complex,
    )


def make_fixed_matrix(name: str, phi: float = 0.0) -> np.ndarray:
    """Return a catalogued matrix; phi enters only where the definition uses it.

    For the anti-unitary generators S12..S34 this returns the unitary part;
    use antiunitary_symmetry() for the full (U, K) pair.
    """
    z4 = _z4()
    ph = np.exp(1j * phi)
    if name == "Z4":
        return z4
    if name == "X4":
        return _x4()
    if name == "Zx":
        return (ph * z4 + np.conj(ph) * z4.conj().T) / np.sqrt(2)
    if name == "Zy":
        return (ph * z4 - np.conj(ph) * z4.conj().T) / (1j * np.sqrt(2))
    if name == "Zz":
        return z4 @ z4
    if name == "Z3":
        return ph * np.diag([1, OMEGA, np.conj(OMEGA)]).astype(complex)
    if name == "X3":
        return _x3()
    if name in ("nx", "ny", "nz"):
        k = {"nx": 1, "ny": 2, "nz": 3}[name]
        n = np.zeros((4, 4), dtype=complex)
        n[k, k] = 1.0
        return n
    if name in ("Ux", "Uy", "Uz"):
        ux, uy, uz = _u_alpha()
        return {"Ux": ux, "Uy": uy, "Uz": uz}[name]
    if name in _S_UNITARIES:
        return _S_UNITARIES[name].copy()
    if name in ("U123", "U12_34", "U13_24", "U14_23"):
        return _even_permutation(name)
    if name in ("icxy", "icyz", "iczx"):
        return _majorana_pairs()[name]
    if name == "majorana_basis":
        return np.diag([1, -1j, -1, -1]).astype(complex)
    if name == "Xtilde":
        return _xtilde()
    raise CatalogueError(f"unknown fixed-matrix identifier {name!r}")


def catalogue_names():
    return (
        "Z4",
        "X4",
        "Zx",
        "Zy",
        "Zz",
        "Z3",
        "X3",
        "nx",
        "ny",
        "nz",
        "Ux",
        "Uy",
        "Uz",
        "S12",
        "S13",
        "S14",
        "S23",
        "S24",
        "S34",
        "U123",
        "U12_34",
        "U13_24",
        "U14_23",
        "icxy",
        "icyz",
        "iczx",
        "majorana_basis",
        "Xtilde",
    )


@dataclass(frozen=True)
class AntiUnitaryOp:
    """(Anti-)unitary operator as a unitary part plus conjugation flag."""

    unitary: np.ndarray
    conjugates: bool = True

    def __post_init__(self):
        u = np.asarray(self.unitary)
        d = u.shape[0]
        if max_abs(u @ u.conj().T - np.eye(d)) > 1e-14:
            raise DimensionError("unitary part fails U U^dag = 1 to 1e-14")

    def act(self, a: np.ndarray) -> np.ndarray:
        u = self.unitary
        core = np.conj(a) if self.conjugates else a
        return u @ core @ u.conj().T

    def compose(self, other: "AntiUnitaryOp") -> "AntiUnitaryOp":
        # conjugation acts on the right factor before multiplying
        right = np.conj(other.unitary) if self.conjugates else other.unitary
        return AntiUnitaryOp(self.unitary @ right, self.conjugates ^ other.conjugates)


def antiunitary_symmetry(name: str) -> AntiUnitaryOp:
    """Catalogued symmetry operations: S_ij = U_ij K, the even-permutation
    unitaries, the time-reversal-like T = U K, and the identity."""
    if name in _S_UNITARIES:
        return AntiUnitaryOp(_S_UNITARIES[name], conjugates=True)
    if name == "T":
        return AntiUnitaryOp(_S_UNITARIES["S24"], conjugates=True)
    if name in ("U123", "U12_34", "U13_24", "U14_23"):
        return AntiUnitaryOp(_even_permutation(name), conjugates=False)
    if name == "identity":
        return AntiUnitaryOp(np.eye(4, dtype=complex), conjugates=False)
    raise CatalogueError(f"unknown symmetry identifier {name!r}")


def embed(op, site: int, nsites: int, site_dim: int | None = None) -> sp.csr_matrix:
    """Tensor product with identities; site 0 most significant."""
    op = sp.csr_matrix(op)
    d = site_dim if site_dim is not None else op.shape[0]
    if op.shape[0] != d or op.shape[1] != d:
        raise DimensionError("operator is not square with the site dimension")
    if not 0 <= site < nsites:
        raise DimensionError(f"site {site} out of range for {nsites} sites")
    left = sp.identity(d**site, dtype=complex, format="csr")
    right = sp.identity(d ** (nsites - site - 1), dtype=complex, format="csr")
    return sp.kron(sp.kron(left, op, format="csr"), right, format="csr")


def commutator(a, b):
    if a.shape != b.shape:
        raise DimensionError("commutator arguments differ in dimension")
    return a @ b - b @ a


def pauli_algebra_residual(sx, sy, sz) -> float:
    """Max-norm defect of the full Pauli algebra for the given triple."""
    sx, sy, sz = (np.asarray(m, dtype=complex) for m in (sx, sy, sz))
    if not sx.shape == sy.shape == sz.shape or sx.shape[0] != sx.shape[1]:
        raise DimensionError("need three square matrices of equal dimension")
    eye = np.eye(sx.shape[0])
    defects = [
        commutator(sx, sy) - 2j * sz,
        commutator(sy, sz) - 2j * sx,
        commutator(sz, sx) - 2j * sy,
        sx @ sx - eye,
        sy @ sy - eye,
        sz @ sz - eye,
    ]
    return max(max_abs(d) for d in defects)


def check_symmetry(sym: AntiUnitaryOp, target: np.ndarray) -> float:
    target = np.asarray(target, dtype=complex)
    if sym.unitary.shape != target.shape:
        raise DimensionError("symmetry and target dimensions differ")
    return max_abs(sym.act(target) - target)


def projective_phase(a: np.ndarray, b: np.ndarray, tol: float = 1e-12) -> complex:
    """Scalar c with a b a^dag b^dag = c * identity."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise DimensionError("projective_phase arguments differ in dimension")
    m = a @ b @ a.conj().T @ b.conj().T
    c = np.trace(m) / m.shape[0]
    if max_abs(m - c * np.eye(m.shape[0])) > tol:
        raise NonProjectiveError("group commutator is not proportional to identity")
    return complex(c)


def majorana_field_residual() -> float:
    """Entrywise defect of the rotated-basis identity sum(ic^a c^b) = -X4."""
    pairs = _majorana_pairs()
    total = pairs["icxy"] + pairs["icyz"] + pairs["iczx"]
    w = make_fixed_matrix("majorana_basis")
    return max_abs(w.conj().T @ total @ w + _x4())
