"""Probability mass functions, product TV, homogenization and the lift.

The exact product TV goes through the one-dimensional encoding: each pair
``(P_i, Q_i)`` becomes an admissible atomic measure, the measures are
convolved, and the T functional of the convolution is the answer. The
brute-force and multinomial routines here are independent of that path and
serve as its oracles.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _atoms
from .errors import (
    AlphabetMismatch,
    BadDelta,
    EnumerationBudgetExceeded,
    InvalidPmf,
    NonFiniteInput,
    ZeroProbability,
)
from .measure import (
    ATOM_CAP,
    AtomicMeasure,
    POSITION_TOL,
    convolve_family,
    t_functional,
)

SUM_TOL = 1e-12
ENUMERATION_CAP = 10_000_000


class Pmf:
    """Strictly positive probability mass function on ``{0, ..., m-1}``."""

    __slots__ = ("_p",)

    def __init__(self, probs, *, sum_tol: float = SUM_TOL):
        p = np.array(probs, dtype=np.float64).ravel()
        if p.size == 0:
            raise InvalidPmf("empty pmf")
        if not np.all(np.isfinite(p)):
            raise NonFiniteInput("probabilities must be finite")
        if np.any(p < 0):
            raise InvalidPmf("negative probability")
        if np.any(p == 0):
            raise ZeroProbability("pmf has a zero entry; use smooth() first")
        if abs(p.sum() - 1.0) > sum_tol:
            raise InvalidPmf(f"probabilities sum to {p.sum()!r}, not 1")
        p.setflags(write=False)
        self._p = p

    @property
    def probs(self) -> np.ndarray:
        return self._p

    @property
    def alphabet_size(self) -> int:
        return self._p.size

    def __len__(self) -> int:
        return self._p.size

    def __repr__(self) -> str:
        return f"Pmf({self._p.tolist()})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Pmf):
            return NotImplemented
        return np.array_equal(self._p, other._p)

    __hash__ = None  # type: ignore[assignment]


def as_pmf(p) -> Pmf:
    return p if isinstance(p, Pmf) else Pmf(p)


def _same_alphabet(*pmfs: Pmf) -> None:
    sizes = {p.alphabet_size for p in pmfs}
    if len(sizes) > 1:
        raise AlphabetMismatch(f"pmfs live on alphabets of different sizes {sorted(sizes)}")


@dataclass(frozen=True)
class ProductInstance:
    """A heterogeneous pair of product distributions ``(P_1..P_n, Q_1..Q_n)``."""

    Ps: tuple[Pmf, ...]
    Qs: tuple[Pmf, ...]

    def __post_init__(self):
        object.__setattr__(self, "Ps", tuple(as_pmf(p) for p in self.Ps))
        object.__setattr__(self, "Qs", tuple(as_pmf(q) for q in self.Qs))
        if len(self.Ps) == 0 or len(self.Ps) != len(self.Qs):
            raise ValueError("need the same positive number of P and Q coordinates")
        _same_alphabet(*self.Ps, *self.Qs)

    @property
    def n(self) -> int:
        return len(self.Ps)

    @property
    def m(self) -> int:
        return self.Ps[0].alphabet_size

    def pairs(self):
        return zip(self.Ps, self.Qs)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "P": [p.probs.tolist() for p in self.Ps],
            "Q": [q.probs.tolist() for q in self.Qs],
        }

    @classmethod
    def homogeneous(cls, P, Q, n: int) -> "ProductInstance":
        return cls((as_pmf(P),) * n, (as_pmf(Q),) * n)


@dataclass(frozen=True)
class LiftedPair:
    """Pmfs on ``[n] x Omega`` flattened with ``flat = i*m + w`` (0-based)."""

    lambda_p: Pmf
    lambda_q: Pmf
    n: int
    m: int = field(repr=False)

    def flat_index(self, i: int, w: int) -> int:
        return i * self.m + w

    def unflatten(self, flat: int) -> tuple[int, int]:
        return divmod(flat, self.m)


def encode_pair(P, Q, *, tol: float = POSITION_TOL) -> AtomicMeasure:
    """Mass ``sqrt(P(w) Q(w))`` at half the log-likelihood ratio, for every ``w``.

    Outcomes with equal likelihood ratio share an atom.
    """
    P, Q = as_pmf(P), as_pmf(Q)
    _same_alphabet(P, Q)
    p, q = P.probs, Q.probs
    return AtomicMeasure.from_arrays(0.5 * (np.log(p) - np.log(q)), np.sqrt(p * q), tol)


def tv_pmf(P, Q) -> float:
    P, Q = as_pmf(P), as_pmf(Q)
    _same_alphabet(P, Q)
    return 0.5 * float(np.abs(P.probs - Q.probs).sum())


def encode_instance(inst: ProductInstance) -> list[AtomicMeasure]:
    return [encode_pair(P, Q) for P, Q in inst.pairs()]


def tv_product_exact(inst: ProductInstance, *, cap: int = ATOM_CAP) -> float:
    """TV between the two products, via T of the convolved encodings."""
    return t_functional(convolve_family(encode_instance(inst), cap=cap))


def tv_product_bruteforce(inst: ProductInstance, *, cap: int = ENUMERATION_CAP) -> float:
    """Half the L1 distance between the full joint pmfs on ``Omega**n``."""
    size = inst.m ** inst.n
    if size > cap:
        raise EnumerationBudgetExceeded(f"{inst.m}**{inst.n} = {size} outcomes exceeds cap {cap}")
    jp = np.ones(1)
    jq = np.ones(1)
    for P, Q in inst.pairs():
        jp = np.multiply.outer(jp, P.probs).ravel()
        jq = np.multiply.outer(jq, Q.probs).ravel()
    return 0.5 * float(np.abs(jp - jq).sum())


def homogenize(pmfs: Sequence) -> Pmf:
    pmfs = [as_pmf(p) for p in pmfs]
    if not pmfs:
        raise ValueError("need at least one pmf")
    _same_alphabet(*pmfs)
    mean = np.mean([p.probs for p in pmfs], axis=0)
    return Pmf(mean)


def multinomial_log_pmf(P, n: int) -> np.ndarray:
    """Log-probabilities of ``Mult(n, P)`` over all count vectors, colex order."""
    P = as_pmf(P)
    m = P.alphabet_size
    c = _atoms.compositions(n, m)
    out = _atoms.log_multinomial_coefficients(n, m).copy()
    logp = np.log(P.probs)
    for j in range(m):
        out += c[:, j] * logp[j]
    return out


def tv_homogenized_multinomial(Pbar, Qbar, n: int, *, cap: int = ENUMERATION_CAP) -> float:
    """TV between ``Mult(n, Pbar)`` and ``Mult(n, Qbar)``.

    This equals TV between the i.i.d. products because the count vector is
    sufficient. Probabilities stay in the log domain until the difference
    ``e^hi * (1 - e^(lo - hi))`` is formed.
    """
    Pbar, Qbar = as_pmf(Pbar), as_pmf(Qbar)
    _same_alphabet(Pbar, Qbar)
    if n < 1 or int(n) != n:
        raise ValueError("n must be a positive integer")
    count = _atoms.n_compositions(int(n), Pbar.alphabet_size)
    if count > cap:
        raise EnumerationBudgetExceeded(f"{count} compositions exceeds cap {cap}")
    a = multinomial_log_pmf(Pbar, int(n))
    b = multinomial_log_pmf(Qbar, int(n))
    hi = np.maximum(a, b)
    lo = np.minimum(a, b)
    return 0.5 * float(np.sum(np.exp(hi) * -np.expm1(lo - hi)))


def lift(inst: ProductInstance) -> LiftedPair:
    n, m = inst.n, inst.m
    lp = np.concatenate([P.probs for P in inst.Ps]) / n
    lq = np.concatenate([Q.probs for Q in inst.Qs]) / n
    out = LiftedPair(Pmf(lp), Pmf(lq), n, m)
    for i, (P, Q) in enumerate(inst.pairs()):
        sl = slice(i * m, (i + 1) * m)
        if not (np.allclose(out.lambda_p.probs[sl] * n, P.probs, rtol=1e-14, atol=0)
                and np.allclose(out.lambda_q.probs[sl] * n, Q.probs, rtol=1e-14, atol=0)):
            raise AssertionError("lift construction lost a coordinate")
    return out


def lifted_instance(inst: ProductInstance) -> ProductInstance:
    """``n`` identical copies of the lifted pair, as a product instance."""
    lp = lift(inst)
    return ProductInstance((lp.lambda_p,) * inst.n, (lp.lambda_q,) * inst.n)


def smooth(P, delta: float) -> Pmf:
    """Mix with the uniform pmf: ``(1 - delta) * P + delta / m``.

    Accepts pmfs with zero entries; the result is strictly positive.
    """
    if not (0.0 < delta < 1.0):
        raise BadDelta(f"delta must lie in (0, 1), got {delta!r}")
    p = np.asarray(P.probs if isinstance(P, Pmf) else P, dtype=np.float64).ravel()
    if not np.all(np.isfinite(p)):
        raise NonFiniteInput("probabilities must be finite")
    if p.size == 0 or np.any(p < 0) or abs(p.sum() - 1.0) > SUM_TOL:
        raise InvalidPmf("input must be a probability vector")
    return Pmf((1.0 - delta) * p + delta / p.size)
