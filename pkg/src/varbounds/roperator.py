"""Block operator construction, the two-parameter ancilla family, and the
analytic choice of ancilla that saturates the Schwarz step.

The whole package rests on one fact: Tr(rho R R^dag) >= 0 for any state rho.
With rho = mu (x) nu and mu the 2x2 ancilla parameterized by (alpha, r), the
trace is linear in t = sin^2(alpha) - cos^2(alpha) and r, and minimizing it
over the feasible ball t^2 + 4|r|^2 <= 1 yields the root-sum-square bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .matcore import (
    DimensionMismatchError,
    InvariantError,
    Observable,
    PAULI_1,
    PAULI_2,
    PAULI_3,
    State,
    commutator,
    expectation,
    tensor,
)

ANCILLA_FEASIBILITY_SLACK = 1e-12


@dataclass(frozen=True)
class BlockOperator:
    """A 2x2 block matrix of equal-dimension complex matrices."""

    tl: np.ndarray
    tr: np.ndarray
    bl: np.ndarray
    br: np.ndarray

    def __post_init__(self):
        dims = {b.shape for b in (self.tl, self.tr, self.bl, self.br)}
        if len(dims) != 1:
            raise DimensionMismatchError(f"blocks have mixed shapes {sorted(dims)}")

    @property
    def block_dim(self) -> int:
        return self.tl.shape[0]

    def to_matrix(self) -> np.ndarray:
        return np.block([[self.tl, self.tr], [self.bl, self.br]])

    @classmethod
    def from_matrix(cls, m: np.ndarray) -> "BlockOperator":
        d = m.shape[0] // 2
        return cls(m[:d, :d], m[:d, d:], m[d:, :d], m[d:, d:])

    def to_json(self) -> dict:
        from .matcore import matrix_to_json

        return {key: matrix_to_json(getattr(self, key))
                for key in ("tl", "tr", "bl", "br")}


def _stack3(h: Sequence[Observable]) -> list[np.ndarray]:
    if len({o.dim for o in h}) != 1:
        raise DimensionMismatchError("observables have mixed dimensions")
    return [o.matrix for o in h]


def build_r3(h: Sequence[Observable]) -> BlockOperator:
    """[[H1 + iH2, iH3], [iH3, H1 - iH2]]."""
    h1, h2, h3 = _stack3(h)
    return BlockOperator(h1 + 1j * h2, 1j * h3, 1j * h3, h1 - 1j * h2)


def build_r4(h: Sequence[Observable]) -> BlockOperator:
    """[[H1 + iH2, iH3 + H4], [iH3 - H4, H1 - iH2]]."""
    h1, h2, h3, h4 = _stack3(h)
    return BlockOperator(h1 + 1j * h2, 1j * h3 + h4, 1j * h3 - h4, h1 - 1j * h2)


def build_r(h: Sequence[Observable]) -> BlockOperator:
    if len(h) == 3:
        return build_r3(h)
    if len(h) == 4:
        return build_r4(h)
    raise ValueError(f"expected 3 or 4 observables, got {len(h)}")


def gram(rop: BlockOperator) -> BlockOperator:
    """R R^dag by direct multiplication; Hermitian PSD as a 2d x 2d matrix."""
    m = rop.to_matrix()
    return BlockOperator.from_matrix(m @ m.conj().T)


def _gram_closed_form(h: Sequence[Observable]) -> BlockOperator:
    """Closed-form commutator expressions for the blocks of R R^dag."""
    mats = _stack3(h)
    sq = sum(m @ m for m in mats)
    c = {(j, k): commutator(h[j], h[k]) for j in range(len(h)) for k in range(j + 1, len(h))}
    if len(h) == 3:
        return BlockOperator(
            sq - 1j * c[0, 1],
            -1j * c[0, 2] + c[1, 2],
            -1j * c[0, 2] - c[1, 2],
            sq + 1j * c[0, 1],
        )
    return BlockOperator(
        sq - 1j * c[0, 1] + 1j * c[2, 3],
        -1j * c[0, 2] - 1j * c[1, 3] - c[0, 3] + c[1, 2],
        -1j * c[0, 2] - 1j * c[1, 3] + c[0, 3] - c[1, 2],
        sq + 1j * c[0, 1] - 1j * c[2, 3],
    )


def structural_check(h: Sequence[Observable]) -> list[float]:
    """Max-entry deviation between each gram block and its closed form."""
    direct = gram(build_r(h))
    closed = _gram_closed_form(h)
    return [float(np.abs(getattr(direct, key) - getattr(closed, key)).max())
            for key in ("tl", "tr", "bl", "br")]


def pauli_decomposition_check(h: Sequence[Observable]) -> float:
    """Residual between the block construction of R and its Pauli-tensor form
    I(x)H1 + i s3(x)H2 + i s1(x)H3 [+ i s2(x)H4]."""
    mats = _stack3(h)
    eye = np.eye(2, dtype=complex)
    via_tensor = tensor(eye, mats[0]) + 1j * tensor(PAULI_3, mats[1]) \
        + 1j * tensor(PAULI_1, mats[2])
    if len(h) == 4:
        via_tensor = via_tensor + 1j * tensor(PAULI_2, mats[3])
    return float(np.abs(build_r(h).to_matrix() - via_tensor).max())


@dataclass(frozen=True)
class AncillaParams:
    """The (alpha, r) pair defining the 2x2 ancilla mu."""

    alpha: float
    r: complex

    def __post_init__(self):
        if not 0.0 <= self.alpha <= math.pi / 2:
            raise InvariantError("feasibility", f"alpha {self.alpha} outside [0, pi/2]")
        bound = (math.cos(self.alpha) * math.sin(self.alpha)) ** 2
        if abs(self.r) ** 2 > bound + ANCILLA_FEASIBILITY_SLACK:
            raise InvariantError(
                "feasibility",
                f"|r|^2 = {abs(self.r) ** 2:.6g} exceeds cos^2(a) sin^2(a) = {bound:.6g}")

    def mu(self) -> np.ndarray:
        c2 = math.cos(self.alpha) ** 2
        return np.array([[c2, self.r], [np.conj(self.r), 1.0 - c2]], dtype=complex)


def ancilla_state(p: AncillaParams, nu: State) -> State:
    """rho = mu (x) nu with the ancilla factor first."""
    return State(tensor(p.mu(), nu.matrix))


def trace_functional(h: Sequence[Observable], p: AncillaParams, nu: State) -> float:
    """Tr(rho R R^dag) with rho = mu (x) nu; nonnegative for feasible params."""
    rho = ancilla_state(p, nu)
    m = build_r(h).to_matrix()
    if rho.dim != m.shape[0]:
        raise DimensionMismatchError(
            f"state dimension {rho.dim} vs operator dimension {m.shape[0]}")
    return float(np.trace(rho.matrix @ (m @ m.conj().T)).real)


def ancilla_linear_coefficients(h: Sequence[Observable], nu: State):
    """The (x, b) pair in Tr(rho R R^dag) = S + t x + 2 Re(r b).

    ``t = sin^2(alpha) - cos^2(alpha)``; ``x`` is real, ``b`` complex, and
    ``sqrt(x^2 + |b|^2)`` is the root-sum-square of the bound terms.
    """
    g = {}
    for j in range(len(h)):
        for k in range(j + 1, len(h)):
            g[j, k] = expectation(commutator(h[j], h[k]), nu)
    if len(h) == 3:
        x = (1j * g[0, 1]).real
        b = -1j * g[0, 2] - g[1, 2]
    else:
        x = (1j * (g[0, 1] - g[2, 3])).real
        b = -1j * g[0, 2] - 1j * g[1, 3] + g[0, 3] - g[1, 2]
    return x, b


def _params_from_ball(t: float, r: complex) -> AncillaParams:
    # cos^2(alpha) = (1 - t)/2; boundary t = +-1 forces r = 0.
    t = min(1.0, max(-1.0, t))
    alpha = math.acos(math.sqrt((1.0 - t) / 2.0))
    return AncillaParams(alpha, r)


def optimal_ancilla(h: Sequence[Observable], nu: State) -> AncillaParams:
    """Analytic minimizer of the trace functional over the feasible ancilla set.

    At the optimum the functional equals Tr nu(sum H_j^2) - sqrt(x^2 + |b|^2);
    the degenerate case x = b = 0 returns (pi/4, 0) by convention.
    """
    x, b = ancilla_linear_coefficients(h, nu)
    n = math.hypot(x, abs(b))
    if n < 1e-300:
        return AncillaParams(math.pi / 4, 0.0)
    return _params_from_ball(-x / n, -np.conj(b) / (2.0 * n))
