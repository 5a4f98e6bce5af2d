"""Finitely supported positive measures on the real line.

An :class:`AtomicMeasure` is stored as two parallel float arrays, positions
sorted strictly ascending and weights strictly positive. All operations are
pure and return new canonical measures.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import _atoms
from .errors import (
    AtomBudgetExceeded,
    EmptyMeasure,
    NegativeWeight,
    NonFiniteInput,
    WeightMismatch,
)

POSITION_TOL = 1e-12
ATOM_CAP = 10_000_000


class AtomicMeasure:
    """Canonical finitely supported positive measure.

    Build through :func:`make_measure` (or :meth:`from_arrays`) so that the
    canonical-form invariants hold; the constructor itself trusts its input.
    """

    __slots__ = ("_x", "_w")

    def __init__(self, positions: np.ndarray, weights: np.ndarray):
        self._x = positions
        self._w = weights
        self._x.setflags(write=False)
        self._w.setflags(write=False)

    @classmethod
    def from_arrays(cls, positions, weights, tol: float = POSITION_TOL) -> "AtomicMeasure":
        x = np.asarray(positions, dtype=np.float64).ravel()
        w = np.asarray(weights, dtype=np.float64).ravel()
        if x.shape != w.shape:
            raise ValueError("positions and weights must have the same length")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(w))):
            raise NonFiniteInput("atom positions and weights must be finite")
        if np.any(w < 0):
            raise NegativeWeight("atom weights must be nonnegative")
        keep = w > 0
        if not np.any(keep):
            raise EmptyMeasure("measure has no atom with positive weight")
        x, w = _atoms.canonicalize(x[keep], w[keep], tol)
        return cls(np.array(x), np.array(w))

    @property
    def positions(self) -> np.ndarray:
        return self._x

    @property
    def weights(self) -> np.ndarray:
        return self._w

    @property
    def atoms(self) -> list[tuple[float, float]]:
        return list(zip(self._x.tolist(), self._w.tolist()))

    def __len__(self) -> int:
        return self._x.size

    def __repr__(self) -> str:
        if len(self) <= 6:
            body = ", ".join(f"({x:.6g}, {w:.6g})" for x, w in self.atoms)
        else:
            body = f"{len(self)} atoms on [{self._x[0]:.6g}, {self._x[-1]:.6g}]"
        return f"AtomicMeasure({body})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, AtomicMeasure):
            return NotImplemented
        return np.array_equal(self._x, other._x) and np.array_equal(self._w, other._w)

    __hash__ = None  # type: ignore[assignment]

    def allclose(self, other: "AtomicMeasure", pos_tol: float = 1e-12, weight_tol: float = 1e-12) -> bool:
        """Atomwise comparison: same atom count, positions and weights within tolerances."""
        if len(self) != len(other):
            return False
        return bool(
            np.all(np.abs(self._x - other._x) <= pos_tol)
            and np.all(np.abs(self._w - other._w) <= weight_tol)
        )

    def to_json(self) -> list[list[float]]:
        return [[x, w] for x, w in self.atoms]


@dataclass(frozen=True)
class AdmissibilityReport:
    integral_plus: float
    integral_minus: float
    admissible: bool

    @property
    def deviation(self) -> float:
        return max(abs(self.integral_plus - 1.0), abs(self.integral_minus - 1.0))


def make_measure(raw_atoms: Iterable[Sequence[float]], tol: float = POSITION_TOL) -> AtomicMeasure:
    """Build a canonical measure from ``(position, weight)`` pairs.

    Zero-weight atoms are dropped. Atoms whose sorted positions are chained
    within ``tol`` of each other merge into one atom carrying the summed
    weight at the weight-averaged position.

    >>> make_measure([(0.0, 0.5), (0.0, 0.5)]).atoms
    [(0.0, 1.0)]
    """
    arr = np.asarray(list(raw_atoms), dtype=np.float64)
    if arr.size == 0:
        raise EmptyMeasure("no atoms given")
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("raw atoms must be (position, weight) pairs")
    return AtomicMeasure.from_arrays(arr[:, 0], arr[:, 1], tol)


def dirac(position: float = 0.0, mass: float = 1.0) -> AtomicMeasure:
    return make_measure([(position, mass)])


def check_admissible(eta: AtomicMeasure, tol: float = 1e-9) -> AdmissibilityReport:
    """Evaluate the two exponential moments and compare each with 1."""
    plus = float(np.dot(eta.weights, np.exp(eta.positions)))
    minus = float(np.dot(eta.weights, np.exp(-eta.positions)))
    ok = abs(plus - 1.0) <= tol and abs(minus - 1.0) <= tol
    return AdmissibilityReport(plus, minus, ok)


def _check_budget(size: int, cap: int) -> None:
    if size > cap:
        raise AtomBudgetExceeded(f"convolution needs {size} atoms, cap is {cap}")


def convolve(a: AtomicMeasure, b: AtomicMeasure, *, cap: int = ATOM_CAP, tol: float = POSITION_TOL) -> AtomicMeasure:
    """Distribution of the sum: every pair of atoms adds positions and multiplies weights."""
    _check_budget(len(a) * len(b), cap)
    x, w = _atoms.outer_sum(a.positions, a.weights, b.positions, b.weights)
    x, w = _atoms.canonicalize(x, w, tol)
    return AtomicMeasure(x, w)


def convolve_family(measures: Sequence[AtomicMeasure], *, cap: int = ATOM_CAP, tol: float = POSITION_TOL) -> AtomicMeasure:
    """Left fold of :func:`convolve`, canonicalizing after each step."""
    if len(measures) == 0:
        raise ValueError("need at least one measure")
    out = measures[0]
    for eta in measures[1:]:
        out = convolve(out, eta, cap=cap, tol=tol)
    return out


def power_convolve(eta: AtomicMeasure, n: int, *, cap: int = ATOM_CAP, tol: float = POSITION_TOL) -> AtomicMeasure:
    """``n``-fold convolution power of ``eta``.

    Expands the power with multinomial coefficients over the compositions of
    ``n`` into ``len(eta)`` parts, so the work is ``C(n+k-1, k-1)`` atoms
    rather than the ``k**n`` of a naive fold.
    """
    if n < 1 or int(n) != n:
        raise ValueError("n must be a positive integer")
    n = int(n)
    if n == 1:
        return eta
    _check_budget(_atoms.n_compositions(n, len(eta)), cap)
    x, w = _atoms.iid_power(eta.positions, eta.weights, n)
    x, w = _atoms.canonicalize(x, w, tol)
    return AtomicMeasure(x, w)


def mixture(
    measures: Sequence[AtomicMeasure],
    weights: Sequence[float],
    *,
    tol: float = POSITION_TOL,
    sum_tol: float = 1e-12,
) -> AtomicMeasure:
    """Convex combination ``sum_i a_i * eta_i``."""
    a = np.asarray(weights, dtype=np.float64)
    if len(measures) == 0 or a.shape != (len(measures),):
        raise WeightMismatch("need one mixing weight per measure")
    if np.any(a < 0) or abs(a.sum() - 1.0) > sum_tol:
        raise WeightMismatch(f"mixing weights must be nonnegative and sum to 1, got sum {a.sum()!r}")
    x = np.concatenate([m.positions for m in measures])
    w = np.concatenate([ai * m.weights for ai, m in zip(a, measures)])
    keep = w > 0
    x, w = _atoms.canonicalize(x[keep], w[keep], tol)
    return AtomicMeasure(x, w)


def uniform_mixture(measures: Sequence[AtomicMeasure], **kw) -> AtomicMeasure:
    n = len(measures)
    return mixture(measures, [1.0 / n] * n, sum_tol=1e-9, **kw)


def t_functional(eta: AtomicMeasure) -> float:
    """``sum w * |sinh x|``, i.e. half the integral of ``|e^x - e^-x|``."""
    return float(np.dot(eta.weights, _atoms.abs_sinh(eta.positions)))


def total_mass(eta: AtomicMeasure) -> float:
    return float(eta.weights.sum())


def mass_defect(eta: AtomicMeasure) -> float:
    """``1 - total_mass`` for an admissible measure, without cancellation.

    Uses ``cosh x - 1 = 2 sinh(x/2)**2`` together with ``integral cosh = 1``,
    so the result is only meaningful when ``eta`` is admissible.
    """
    return float(np.dot(eta.weights, 2.0 * np.sinh(0.5 * eta.positions) ** 2))
