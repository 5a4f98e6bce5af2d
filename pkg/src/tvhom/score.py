"""Score-variable view of admissible measures.

Tilting an admissible measure by ``cosh`` gives a probability law; pushing it
through ``tanh`` gives a centered score variable ``U`` on ``[-1, 1]``. T of a
convolution equals ``E|Psi(U_1, ..., U_n)|`` for the multilinear form

    Psi(y) = (prod(1 + y_i) - prod(1 - y_i)) / 2,

and the functions below compute the exact discrete expectations that the
linearization, square-function and Laplace-ordering bounds talk about.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _atoms
from .errors import EnumerationBudgetExceeded, NotAdmissible, WeightMismatch
from .measure import POSITION_TOL, AtomicMeasure, check_admissible, mass_defect

ENUMERATION_CAP = 10_000_000


class ScoreLaw:
    """Finite probability law on ``[-1, 1]`` with sorted distinct values."""

    __slots__ = ("values", "probs")

    def __init__(self, values, probs, *, tol: float = POSITION_TOL):
        v = np.asarray(values, dtype=np.float64).ravel()
        p = np.asarray(probs, dtype=np.float64).ravel()
        if v.shape != p.shape or v.size == 0:
            raise ValueError("values and probs must be non-empty and of equal length")
        if np.any(p < 0) or np.any(np.abs(v) > 1.0):
            raise ValueError("probs must be nonnegative and values lie in [-1, 1]")
        keep = p > 0
        v, p = _atoms.canonicalize(v[keep], p[keep], tol)
        if abs(p.sum() - 1.0) > 1e-12:
            raise WeightMismatch(f"score law probabilities sum to {p.sum()!r}")
        self.values = np.array(v)
        self.probs = np.array(p)
        self.values.setflags(write=False)
        self.probs.setflags(write=False)

    def __len__(self) -> int:
        return self.values.size

    def __repr__(self) -> str:
        body = ", ".join(f"{v:.6g}: {p:.6g}" for v, p in zip(self.values, self.probs))
        return f"ScoreLaw({{{body}}})"

    @property
    def mean(self) -> float:
        return float(np.dot(self.probs, self.values))

    @property
    def second_moment(self) -> float:
        return float(np.dot(self.probs, self.values ** 2))

    def as_dict(self) -> dict[float, float]:
        return dict(zip(self.values.tolist(), self.probs.tolist()))


@dataclass(frozen=True)
class SignalStats:
    alpha: float
    nu: float


def score_law(eta: AtomicMeasure, *, admissible_tol: float = 1e-9) -> ScoreLaw:
    """Law of ``tanh(X)`` where ``X`` has law ``cosh(x) eta(dx)``."""
    rep = check_admissible(eta, admissible_tol)
    if not rep.admissible:
        raise NotAdmissible(
            f"exponential moments {rep.integral_plus!r}, {rep.integral_minus!r} are not both 1"
        )
    x, w = eta.positions, eta.weights
    p = w * np.cosh(x)
    # the tilted weights sum to 1 only up to the admissibility tolerance
    return ScoreLaw(np.tanh(x), p / p.sum())


def homogenized_law(laws: Sequence[ScoreLaw]) -> ScoreLaw:
    """Uniform mixture of the laws: the law of the averaged score variable."""
    n = len(laws)
    v = np.concatenate([law.values for law in laws])
    p = np.concatenate([law.probs for law in laws]) / n
    return ScoreLaw(v, p / p.sum())


def _sum_law(values: Sequence[np.ndarray], probs: Sequence[np.ndarray], cap: int, tol: float):
    size = 1
    for v in values:
        size *= v.size
    if size > cap:
        raise EnumerationBudgetExceeded(f"sum law needs {size} atoms, cap is {cap}")
    x, w = values[0], probs[0]
    for v, p in zip(values[1:], probs[1:]):
        x, w = _atoms.outer_sum(x, w, v, p)
        x, w = _atoms.canonicalize(x, w, tol)
    return x, w


def sum_abs_mean(laws: Sequence[ScoreLaw], *, cap: int = ENUMERATION_CAP, tol: float = POSITION_TOL) -> float:
    """``E|U_1 + ... + U_n|`` for independent draws from ``laws``."""
    x, w = _sum_law([law.values for law in laws], [law.probs for law in laws], cap, tol)
    return float(np.dot(w, np.abs(x)))


def sqrt_quadratic_mean(laws: Sequence[ScoreLaw], *, cap: int = ENUMERATION_CAP, tol: float = POSITION_TOL) -> float:
    """``E sqrt(U_1**2 + ... + U_n**2)`` for independent draws from ``laws``."""
    x, w = _sum_law([law.values ** 2 for law in laws], [law.probs for law in laws], cap, tol)
    return float(np.dot(w, np.sqrt(np.maximum(x, 0.0))))


def iid_sum_abs_mean(law: ScoreLaw, n: int) -> float:
    """``E|U_1 + ... + U_n|`` for ``n`` i.i.d. copies, by multinomial expansion."""
    x, w = _atoms.iid_power(law.values, law.probs, n)
    return float(np.dot(w, np.abs(x)))


def iid_sqrt_quadratic_mean(law: ScoreLaw, n: int) -> float:
    """``E sqrt(U_1**2 + ... + U_n**2)`` for ``n`` i.i.d. copies."""
    sq, p = _atoms.canonicalize(law.values ** 2, law.probs, POSITION_TOL)
    x, w = _atoms.iid_power(sq, p, n)
    return float(np.dot(w, np.sqrt(np.maximum(x, 0.0))))


def laplace_v(laws: Sequence[ScoreLaw], lam: float) -> float:
    """``E exp(-lam * sum U_i**2)``, a product over coordinates by independence."""
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    return float(np.prod([np.dot(law.probs, np.exp(-lam * law.values ** 2)) for law in laws]))


def signal_stats(etas: Sequence[AtomicMeasure], *, admissible_tol: float = 1e-9) -> SignalStats:
    """Mass defect ``sum(1 - eta_i(R))`` and quadratic signal ``sum E U_i**2``."""
    alpha = 0.0
    nu = 0.0
    for eta in etas:
        law = score_law(eta, admissible_tol=admissible_tol)
        alpha += mass_defect(eta)
        nu += law.second_moment
    return SignalStats(alpha, nu)


def psi(y: np.ndarray) -> np.ndarray:
    """Multilinear form along the last axis of ``y``."""
    return 0.5 * (np.prod(1.0 + y, axis=-1) - np.prod(1.0 - y, axis=-1))


def enumerate_psi(laws: Sequence[ScoreLaw], *, cap: int = ENUMERATION_CAP):
    """Joint enumeration over the product of supports.

    Returns ``(prob, psi, s)`` as flat arrays: the joint probability of each
    support point, ``Psi`` there, and the linear part ``sum y_i``.
    """
    size = 1
    for law in laws:
        size *= len(law)
    if size > cap:
        raise EnumerationBudgetExceeded(f"{size} joint outcomes exceeds cap {cap}")
    prob = np.ones(1)
    plus = np.ones(1)
    minus = np.ones(1)
    s = np.zeros(1)
    for law in laws:
        prob = np.multiply.outer(prob, law.probs).ravel()
        plus = np.multiply.outer(plus, 1.0 + law.values).ravel()
        minus = np.multiply.outer(minus, 1.0 - law.values).ravel()
        s = np.add.outer(s, law.values).ravel()
    return prob, 0.5 * (plus - minus), s


def expected_abs_psi(laws: Sequence[ScoreLaw], *, cap: int = ENUMERATION_CAP) -> float:
    prob, ps, _ = enumerate_psi(laws, cap=cap)
    return float(np.dot(prob, np.abs(ps)))


def remainder_l2(second_moments: Sequence[float]) -> float:
    """Exact ``E R**2`` for ``R = Psi - S`` with independent centered coordinates.

    Orthogonality of square-free monomials makes this the sum of the odd
    elementary symmetric polynomials of order at least 3 in the second
    moments; they are accumulated by the usual product recurrence, which
    involves no subtraction.
    """
    a = np.asarray(second_moments, dtype=np.float64).ravel()
    if np.any(a < 0) or np.any(a > 1):
        raise ValueError("second moments must lie in [0, 1]")
    e = np.zeros(a.size + 1)
    e[0] = 1.0
    for k, ai in enumerate(a, start=1):
        e[1 : k + 1] += ai * e[0:k]
    return float(e[3::2].sum())


def remainder_l2_closed_form(second_moments: Sequence[float]) -> float:
    """``(prod(1+a) - prod(1-a))/2 - sum(a)``; cancels badly for small ``a``."""
    a = np.asarray(second_moments, dtype=np.float64)
    return float(0.5 * (np.prod(1 + a) - np.prod(1 - a)) - a.sum())
