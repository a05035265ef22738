"""Dense complex matrix arithmetic, Hermitian/PSD validation and seeded random instances.

All matrices are plain complex128 numpy arrays; :class:`Observable` and
:class:`State` are thin validated wrappers around them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HERMITICITY_TOL = 1e-10
PSD_TOL = 1e-9
TRACE_TOL = 1e-10
VARIANCE_TOL = 1e-10

PAULI_1 = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_3 = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (PAULI_1, PAULI_2, PAULI_3)


class DimensionMismatchError(ValueError):
    """Operands have incompatible matrix dimensions."""


class InvariantError(ValueError):
    """A matrix failed one of its structural invariants.

    ``invariant`` names the failed check ("hermiticity", "psd", "trace",
    "finiteness", "square", "feasibility", "degenerate").
    """

    def __init__(self, invariant: str, message: str):
        super().__init__(message)
        self.invariant = invariant


def _as_square_complex(m) -> np.ndarray:
    a = np.ascontiguousarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvariantError("square", f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a.view(float))):
        raise InvariantError("finiteness", "matrix has non-finite entries")
    return a


def hermiticity_defect(m: np.ndarray) -> float:
    """Max entrywise |M - M^dag|, relative to the largest entry magnitude."""
    scale = max(1.0, float(np.abs(m).max())) if m.size else 1.0
    return float(np.abs(m - m.conj().T).max()) / scale


def check_hermitian(m: np.ndarray, tol: float = HERMITICITY_TOL) -> None:
    defect = hermiticity_defect(m)
    if defect > tol:
        raise InvariantError("hermiticity", f"matrix is not Hermitian (defect {defect:.3e})")


@dataclass(frozen=True)
class Observable:
    """A finite-dimensional Hermitian matrix."""

    matrix: np.ndarray

    def __post_init__(self):
        a = _as_square_complex(self.matrix)
        check_hermitian(a)
        a.setflags(write=False)
        object.__setattr__(self, "matrix", a)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class State:
    """A density matrix: Hermitian, positive semidefinite, unit trace."""

    matrix: np.ndarray

    def __post_init__(self):
        a = _as_square_complex(self.matrix)
        check_hermitian(a)
        tr = a.trace()
        if abs(tr - 1.0) > TRACE_TOL:
            raise InvariantError("trace", f"state trace is {tr:.12g}, expected 1")
        min_eig = float(np.linalg.eigvalsh(a).min())
        if min_eig < -PSD_TOL:
            raise InvariantError("psd", f"state has negative eigenvalue {min_eig:.3e}")
        a.setflags(write=False)
        object.__setattr__(self, "matrix", a)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def pure(cls, vector) -> "State":
        """Normalized rank-1 projector onto ``vector``."""
        v = np.asarray(vector, dtype=complex).ravel()
        norm = np.linalg.norm(v)
        if norm == 0:
            raise InvariantError("degenerate", "cannot normalize the zero vector")
        v = v / norm
        return cls(np.outer(v, v.conj()))

    @classmethod
    def maximally_mixed(cls, dim: int) -> "State":
        return cls(np.eye(dim, dtype=complex) / dim)


def basis_state(dim: int, index: int) -> State:
    """Computational basis projector |index><index|."""
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return State.pure(v)


def _require_same_dim(da: int, db: int) -> None:
    if da != db:
        raise DimensionMismatchError(f"dimension mismatch: {da} vs {db}")


def commutator(a: Observable, b: Observable) -> np.ndarray:
    """[A, B] = AB - BA; anti-Hermitian for Hermitian inputs."""
    _require_same_dim(a.dim, b.dim)
    return a.matrix @ b.matrix - b.matrix @ a.matrix


def expectation(h: np.ndarray, s: State) -> complex:
    """Tr(s h); real for Hermitian h, purely imaginary for commutators."""
    h = np.asarray(h, dtype=complex)
    _require_same_dim(h.shape[0], s.dim)
    return complex(np.trace(s.matrix @ h))


def variance(h: Observable, s: State) -> float:
    """<h^2> - <h>^2 under s, clamped to 0 when negative within tolerance."""
    _require_same_dim(h.dim, s.dim)
    second = expectation(h.matrix @ h.matrix, s).real
    mean = expectation(h.matrix, s).real
    var = second - mean * mean
    if var < -VARIANCE_TOL:
        raise InvariantError("psd", f"variance {var:.3e} below tolerance")
    return max(var, 0.0)


def center(h: Observable, s: State) -> Observable:
    """h - <h> I; zero expectation under s, variance unchanged."""
    _require_same_dim(h.dim, s.dim)
    mean = expectation(h.matrix, s).real
    return Observable(h.matrix - mean * np.eye(h.dim))


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with the first factor at the block level (ancilla-first)."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def random_observable(dim: int, seed) -> Observable:
    """GUE-style Hermitian matrix (G + G^dag)/2, deterministic in ``seed``."""
    if dim < 1:
        raise ValueError("dim must be positive")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return Observable((g + g.conj().T) / 2)


def random_state(dim: int, pure: bool, seed) -> State:
    """Random density matrix; Gaussian vector (pure) or Gram construction (mixed)."""
    if dim < 1:
        raise ValueError("dim must be positive")
    rng = np.random.default_rng(seed)
    if pure:
        v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        return State.pure(v)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    gram = g @ g.conj().T
    return State(gram / gram.trace())


# --- shared JSON matrix format -------------------------------------------------
# {"dim": n, "entries": [[[re, im], ...], ...], "kind": "observable" | "state"}


def matrix_to_json(m: np.ndarray) -> dict:
    m = np.asarray(m, dtype=complex)
    entries = [[[float(x.real), float(x.imag)] for x in row] for row in m]
    return {"dim": int(m.shape[0]), "entries": entries}


def matrix_from_json(obj: dict) -> np.ndarray:
    dim = int(obj["dim"])
    raw = obj["entries"]
    if len(raw) != dim or any(len(row) != dim for row in raw):
        raise ValueError(f"entries do not form a {dim}x{dim} matrix")
    m = np.array([[complex(re, im) for re, im in row] for row in raw], dtype=complex)
    return m


def observable_to_json(o: Observable) -> dict:
    return {**matrix_to_json(o.matrix), "kind": "observable"}


def state_to_json(s: State) -> dict:
    return {**matrix_to_json(s.matrix), "kind": "state"}


def observable_from_json(obj: dict) -> Observable:
    if obj.get("kind", "observable") != "observable":
        raise ValueError(f"expected kind 'observable', got {obj.get('kind')!r}")
    return Observable(matrix_from_json(obj))


def state_from_json(obj: dict) -> State:
    if obj.get("kind", "state") != "state":
        raise ValueError(f"expected kind 'state', got {obj.get('kind')!r}")
    return State(matrix_from_json(obj))
