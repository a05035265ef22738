"""Uncertainty inequality evaluators: each bound yields an (lhs, rhs, gap) report.

Commutator expectation magnitudes are taken on the complex value directly,
|Tr(s [H_j, H_k])|, which equals |<i[H_j, H_k]>| for Hermitian inputs.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .matcore import DimensionMismatchError, Observable, State

INV_SQRT3 = 1.0 / math.sqrt(3.0)

CSV_COLUMNS = ("kind", "lhs", "rhs", "gap", "terms", "centered", "dim")


class BoundKind(str, enum.Enum):
    ROBERTSON = "robertson"
    TRIPLE_SUM = "triple_sum"
    TRIPLE_PRODUCT = "triple_product"
    RSS3 = "rss3"
    QUAD_SUM = "quad_sum"

    @property
    def n_observables(self) -> int:
        return {"robertson": 2, "triple_sum": 3, "triple_product": 3,
                "rss3": 3, "quad_sum": 4}[self.value]


@dataclass(frozen=True)
class BoundReport:
    kind: BoundKind
    lhs: float
    rhs: float
    gap: float
    terms: tuple[float, ...]
    centered: bool
    dim: int

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "gap": self.gap,
            "terms": list(self.terms),
            "centered": self.centered,
            "dim": self.dim,
        }

    def to_csv_row(self) -> list:
        return [self.kind.value, repr(self.lhs), repr(self.rhs), repr(self.gap),
                ";".join(repr(t) for t in self.terms), str(self.centered).lower(),
                str(self.dim)]


def report_from_json(obj: dict) -> BoundReport:
    return BoundReport(
        kind=BoundKind(obj["kind"]),
        lhs=float(obj["lhs"]),
        rhs=float(obj["rhs"]),
        gap=float(obj["gap"]),
        terms=tuple(float(t) for t in obj["terms"]),
        centered=bool(obj["centered"]),
        dim=int(obj["dim"]),
    )


def _stack(observables: Sequence[Observable], s: State) -> np.ndarray:
    dims = {h.dim for h in observables}
    if len(dims) != 1:
        raise DimensionMismatchError(f"observables have mixed dimensions {sorted(dims)}")
    if observables[0].dim != s.dim:
        raise DimensionMismatchError(
            f"observable dimension {observables[0].dim} vs state dimension {s.dim}")
    return np.ascontiguousarray([h.matrix for h in observables])


def raw_moments(observables: Sequence[Observable], s: State):
    """(means, second moments, commutator expectations g[j,k] = Tr(s [H_j, H_k]))."""
    hs = _stack(observables, s)
    exps, cross = kernels.state_moments(hs, np.ascontiguousarray(s.matrix))
    means = exps.real
    second = np.diagonal(cross).real
    g = cross - cross.T
    return means, second, g


def _variances(means, second):
    return np.maximum(second - means * means, 0.0)


def _report(kind, lhs, rhs, terms, centered, dim) -> BoundReport:
    lhs = float(lhs)
    rhs = float(rhs)
    return BoundReport(kind, lhs, rhs, lhs - rhs,
                       tuple(float(t) for t in terms), centered, dim)


def robertson(a: Observable, b: Observable, s: State) -> BoundReport:
    """Delta A * Delta B >= |<[A, B]>| / 2."""
    means, second, g = raw_moments([a, b], s)
    var = _variances(means, second)
    comm = abs(g[0, 1])
    lhs = math.sqrt(var[0]) * math.sqrt(var[1])
    return _report(BoundKind.ROBERTSON, lhs, 0.5 * comm, (comm,), True, a.dim)


def _cyclic_terms3(g):
    return (abs(g[0, 1]), abs(g[1, 2]), abs(g[2, 0]))


def triple_sum(h: Sequence[Observable], s: State, centered: bool = True) -> BoundReport:
    """Sum of variances (or raw second moments) vs the 1/sqrt(3)-weighted
    sum of the three cyclic commutator expectation magnitudes."""
    means, second, g = raw_moments(h, s)
    lhs = _variances(means, second).sum() if centered else second.sum()
    terms = _cyclic_terms3(g)
    return _report(BoundKind.TRIPLE_SUM, lhs, INV_SQRT3 * sum(terms), terms,
                   centered, h[0].dim)


def triple_product(h: Sequence[Observable], s: State) -> BoundReport:
    """Product of variances vs (1/sqrt(3))^3 times the product of cyclic
    commutator magnitudes; centering is implicit (variances are shift-invariant)."""
    means, second, g = raw_moments(h, s)
    lhs = float(np.prod(_variances(means, second)))
    terms = _cyclic_terms3(g)
    rhs = INV_SQRT3 ** 3 * terms[0] * terms[1] * terms[2]
    return _report(BoundKind.TRIPLE_PRODUCT, lhs, rhs, terms, True, h[0].dim)


def rss3(h: Sequence[Observable], s: State) -> BoundReport:
    """Uncentered root-sum-square form: Tr(s sum H_j^2) >= sqrt(sum |g_j|^2).

    This is the inequality the positivity argument establishes directly; it is
    tighter than the 1/sqrt(3)-weighted sum it implies.
    """
    _, second, g = raw_moments(h, s)
    terms = _cyclic_terms3(g)
    rhs = math.sqrt(sum(t * t for t in terms))
    return _report(BoundKind.RSS3, second.sum(), rhs, terms, False, h[0].dim)


def quad_pair_terms(g) -> tuple[float, float, float]:
    """The three pair-partition terms |g12 - g34|, |g13 + g24|, |g14 - g23|."""
    return (abs(g[0, 1] - g[2, 3]), abs(g[0, 2] + g[1, 3]), abs(g[0, 3] - g[1, 2]))


def quad_pair_terms_by_inversions(g) -> tuple[float, ...]:
    """Cross-check form of :func:`quad_pair_terms`: enumerate the partitions of
    {1,2,3,4} into two ordered pairs and sign each by the parity of the
    inversion count of the concatenated index sequence."""
    terms = []
    for j in (1, 2, 3):
        k, l = sorted({1, 2, 3} - {j})
        seq = (0, j, k, l)
        inversions = sum(1 for a in range(4) for b in range(a + 1, 4)
                         if seq[a] > seq[b])
        terms.append(abs(g[0, j] - (-1) ** inversions * g[k, l]))
    return tuple(terms)


def quad_sum(h: Sequence[Observable], s: State, centered: bool = True) -> BoundReport:
    """Four-observable sum bound with the three signed pair-partition terms."""
    means, second, g = raw_moments(h, s)
    lhs = _variances(means, second).sum() if centered else second.sum()
    terms = quad_pair_terms(g)
    return _report(BoundKind.QUAD_SUM, lhs, INV_SQRT3 * sum(terms), terms,
                   centered, h[0].dim)


_EVALUATORS = {
    BoundKind.ROBERTSON: lambda h, s, centered: robertson(h[0], h[1], s),
    BoundKind.TRIPLE_SUM: lambda h, s, centered: triple_sum(h, s, centered),
    BoundKind.TRIPLE_PRODUCT: lambda h, s, centered: triple_product(h, s),
    BoundKind.RSS3: lambda h, s, centered: rss3(h, s),
    BoundKind.QUAD_SUM: lambda h, s, centered: quad_sum(h, s, centered),
}


def evaluate(kind: BoundKind, h: Sequence[Observable], s: State,
             centered: bool = True) -> BoundReport:
    """Dispatch a bound evaluation by kind."""
    kind = BoundKind(kind)
    if len(h) != kind.n_observables:
        raise ValueError(f"{kind.value} needs {kind.n_observables} observables, got {len(h)}")
    return _EVALUATORS[kind](list(h), s, centered)
