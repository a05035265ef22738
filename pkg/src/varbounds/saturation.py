"""Tightness constructions, reductions, and numerical search for minimal
lhs/rhs ratios over states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import bounds, kernels
from .bounds import BoundKind, BoundReport
from .matcore import (
    InvariantError,
    Observable,
    PAULIS,
    State,
    basis_state,
    commutator,
    expectation,
    state_to_json,
    variance,
)
from .roperator import AncillaParams, trace_functional

RHS_FLOOR = 1e-12
VARIANCE_FLOOR = 1e-12


@dataclass(frozen=True)
class TightInstance:
    """Observables and a state expected to saturate a named bound."""

    observables: tuple[Observable, ...]
    state: State
    kind: BoundKind
    expected_gap: float = 0.0

    def evaluate(self, centered: bool = True) -> BoundReport:
        return bounds.evaluate(self.kind, self.observables, self.state, centered)

    def to_json(self) -> dict:
        from .matcore import observable_to_json

        return {
            "kind": self.kind.value,
            "observables": [observable_to_json(o) for o in self.observables],
            "state": state_to_json(self.state),
            "expected_gap": self.expected_gap,
        }


def tight4_family(lambda1: float = 1.0, lambda2: float = -1.0,
                  beta2: float = 0.0) -> TightInstance:
    """Four pairwise noncommuting 2x2 observables saturating the quad bound.

    H1 is diagonal; H2..H4 carry phases beta2 + 2pi/3 apart; the state is
    |0><0|, an eigenstate of H1, and the quad_sum gap vanishes.
    """
    h1 = Observable(np.diag([lambda1, lambda2]).astype(complex))
    hs = [h1]
    for j in range(3):
        beta = beta2 + j * 2.0 * math.pi / 3.0
        hs.append(Observable(np.array(
            [[1.0, np.exp(-1j * beta)], [np.exp(1j * beta), 1.0]])))
    return TightInstance(tuple(hs), basis_state(2, 0), BoundKind.QUAD_SUM)


def tight3_pauli() -> TightInstance:
    """The Pauli triple with the pure state whose Bloch vector is
    (1,1,1)/sqrt(3); saturates both the triple sum and product bounds."""
    bloch = sum(PAULIS) / math.sqrt(3.0)
    state = State((np.eye(2, dtype=complex) + bloch) / 2.0)
    return TightInstance(tuple(Observable(p) for p in PAULIS), state,
                         BoundKind.TRIPLE_SUM)


def reduce_h4_identity(h: Sequence[Observable], s: State) -> tuple[BoundReport, BoundReport]:
    """quad_sum with H4 = I collapses to triple_sum on (H1, H2, H3)."""
    eye = Observable(np.eye(h[0].dim, dtype=complex))
    return (bounds.quad_sum(list(h) + [eye], s), bounds.triple_sum(h, s))


def robertson_via_r(h1: Observable, h2: Observable, nu: State) -> BoundReport:
    """Uncentered Robertson sum form recovered from the block operator with
    H3 = 0 and the ancilla pinned to a basis state."""
    zero = Observable(np.zeros((h1.dim, h1.dim), dtype=complex))
    triple = [h1, h2, zero]
    f0 = trace_functional(triple, AncillaParams(0.0, 0.0), nu)
    f1 = trace_functional(triple, AncillaParams(math.pi / 2, 0.0), nu)
    if min(f0, f1) < -1e-10:
        raise AssertionError(f"trace functional went negative: {min(f0, f1):.3e}")
    lhs = expectation(h1.matrix @ h1.matrix, nu).real \
        + expectation(h2.matrix @ h2.matrix, nu).real
    rhs = abs(expectation(commutator(h1, h2), nu))
    return BoundReport(BoundKind.ROBERTSON, lhs, rhs, lhs - rhs, (rhs,),
                       centered=False, dim=h1.dim)


def scaling_trick(h1: Observable, h2: Observable, nu: State) -> tuple[Observable, Observable]:
    """Rescale the pair so both standard deviations equal sqrt(s1 s2);
    the product of deviations and the commutator expectation are preserved."""
    s1 = math.sqrt(variance(h1, nu))
    s2 = math.sqrt(variance(h2, nu))
    if min(s1, s2) <= VARIANCE_FLOOR:
        raise InvariantError("degenerate",
                             "zero-variance observable: rescaling is undefined")
    geo = math.sqrt(s1 * s2)
    return Observable(geo / s1 * h1.matrix), Observable(geo / s2 * h2.matrix)


@dataclass(frozen=True)
class SearchConfig:
    restarts: int = 20
    max_iters: int = 2000
    step_init: float = 0.5
    step_min: float = 1e-7
    seed: int = 0
    pure_only: bool = True

    def __post_init__(self):
        if self.restarts < 1 or self.max_iters < 1:
            raise ValueError("restarts and max_iters must be positive")
        if not 0 < self.step_min < self.step_init:
            raise ValueError("need 0 < step_min < step_init")


@dataclass(frozen=True)
class SearchResult:
    best_state: State
    best_ratio: float
    evaluations: int
    converged: bool

    def to_json(self) -> dict:
        return {
            "best_state": state_to_json(self.best_state),
            "best_ratio": self.best_ratio,
            "evaluations": self.evaluations,
            "converged": self.converged,
        }


def _ratio_from_moments(kind: BoundKind, means, second, cross) -> float:
    var = np.maximum(second - means * means, 0.0)
    g = cross - cross.T
    if kind is BoundKind.ROBERTSON:
        lhs = math.sqrt(var[0] * var[1])
        rhs = 0.5 * abs(g[0, 1])
    elif kind is BoundKind.TRIPLE_SUM:
        lhs = var.sum()
        rhs = bounds.INV_SQRT3 * (abs(g[0, 1]) + abs(g[1, 2]) + abs(g[2, 0]))
    elif kind is BoundKind.TRIPLE_PRODUCT:
        lhs = float(np.prod(var))
        rhs = bounds.INV_SQRT3 ** 3 * abs(g[0, 1]) * abs(g[1, 2]) * abs(g[2, 0])
    elif kind is BoundKind.RSS3:
        lhs = second.sum()
        rhs = math.sqrt(abs(g[0, 1]) ** 2 + abs(g[1, 2]) ** 2 + abs(g[2, 0]) ** 2)
    else:
        lhs = var.sum()
        rhs = bounds.INV_SQRT3 * sum(bounds.quad_pair_terms(g))
    if rhs < RHS_FLOOR:
        return math.inf
    return lhs / rhs


def _state_from_params(x: np.ndarray, dim: int, pure: bool):
    if pure:
        psi = x[:dim] + 1j * x[dim:]
        norm = np.linalg.norm(psi)
        if norm < 1e-12:
            return None
        return psi / norm
    factor = (x[: dim * dim] + 1j * x[dim * dim:]).reshape(dim, dim)
    rho = factor @ factor.conj().T
    tr = rho.trace().real
    if tr < 1e-12:
        return None
    return rho / tr


def search_min_ratio(h: Sequence[Observable], kind: BoundKind,
                     cfg: SearchConfig = SearchConfig()) -> SearchResult:
    """Minimize lhs/rhs over states by seeded multi-start pattern search.

    Pure states are parameterized as 2d real vectors (re/im parts of the
    amplitudes, normalized); mixed states via a complex square factor G with
    rho = G G^dag / Tr.  Each restart perturbs one re/im coordinate pair at a
    time, keeps improvements, and halves the step after a run of failures.
    Deterministic given ``cfg.seed``; states where rhs < 1e-12 score +inf.
    """
    kind = BoundKind(kind)
    dim = h[0].dim
    hs = np.ascontiguousarray([o.matrix for o in h])
    pure = cfg.pure_only
    nparams = 2 * dim if pure else 2 * dim * dim

    def ratio(x: np.ndarray) -> float:
        obj = _state_from_params(x, dim, pure)
        if obj is None:
            return math.inf
        if pure:
            exps, cross = kernels.pure_state_moments(hs, obj)
        else:
            exps, cross = kernels.state_moments(hs, np.ascontiguousarray(obj))
        return _ratio_from_moments(kind, exps.real, np.diagonal(cross).real, cross)

    best_x = None
    best_f = math.inf
    best_converged = False
    evaluations = 0

    for restart in range(cfg.restarts):
        rng = np.random.default_rng([cfg.seed, restart])
        x = rng.standard_normal(nparams)
        f = ratio(x)
        evaluations += 1
        step = cfg.step_init
        fails = 0
        for _ in range(cfg.max_iters):
            i = int(rng.integers(nparams // 2))
            cand = x.copy()
            cand[i] += step * rng.standard_normal()
            cand[i + nparams // 2] += step * rng.standard_normal()
            fc = ratio(cand)
            evaluations += 1
            if fc < f:
                x, f = cand, fc
                fails = 0
            else:
                fails += 1
                if fails >= nparams:
                    step *= 0.5
                    fails = 0
                    if step < cfg.step_min:
                        break
        if f < best_f:
            best_f = f
            best_x = x
            best_converged = step < cfg.step_min

    if best_x is None or not math.isfinite(best_f):
        raise InvariantError("degenerate",
                             "search never found a state with nonzero bound rhs")

    obj = _state_from_params(best_x, dim, pure)
    best_state = State.pure(obj) if pure else State(obj)
    # recompute from the returned state so the reported ratio is reproducible
    report = bounds.evaluate(kind, h, best_state,
                             centered=kind is not BoundKind.RSS3)
    best_ratio = report.lhs / report.rhs if report.rhs >= RHS_FLOOR else math.inf
    return SearchResult(best_state, float(best_ratio), evaluations, best_converged)
