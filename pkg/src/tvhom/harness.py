"""Seeded instance generation, per-instance lemma checks, and ratio search.

Every check produces a :class:`CheckRecord` whose ``margin`` is oriented so
that ``margin >= -tol`` means the inequality or identity holds. Checks whose
enumeration would exceed the budget are recorded as skipped, never passed.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .constants import default_constants, d_rho
from .errors import EnumerationBudgetExceeded, TheoremViolation
from .measure import (
    check_admissible,
    convolve_family,
    mass_defect,
    power_convolve,
    t_functional,
    uniform_mixture,
)
from .score import (
    enumerate_psi,
    homogenized_law,
    iid_sqrt_quadratic_mean,
    iid_sum_abs_mean,
    laplace_v,
    remainder_l2,
    score_law,
    sqrt_quadratic_mean,
    sum_abs_mean,
)
from .tv import (
    Pmf,
    ProductInstance,
    encode_pair,
    homogenize,
    lift,
    tv_homogenized_multinomial,
    tv_product_bruteforce,
    tv_product_exact,
)

C0_BOUND = 6.7129
C_BOUND = 0.1489
PROB_FLOOR = 1e-6
DEFAULT_LAMBDAS = (0.01, 0.1, 1.0, 10.0, 100.0)
ENUMERATION_CAP = 10_000_000

# per-check tolerances; ``verify_instance(tol=...)`` overrides all of them
DEFAULT_TOLS = {
    "admissibility": 1e-9,
    "encoding_exact": 1e-10,
    "lift_mixture": 1e-12,
    "multinomial_bruteforce": 1e-10,
    "multinomial_encoding": 1e-9,
    "data_processing": 1e-10,
    "mass_control_lower": 1e-12,
    "mass_control_upper": 1e-12,
    "signal_lower": 1e-12,
    "signal_upper": 1e-12,
    "score_mean_zero": 1e-9,
    "score_representation": 1e-9,
    "linearization_a_bound": 1e-12,
    "linearization_a_identity": 1e-9,
    "linearization_a": 1e-9,
    "linearization_b": 1e-9,
    "linearization_c": 1e-9,
    "linearization_c_homogenized": 1e-9,
    "khintchine_lower": 1e-9,
    "khintchine_upper": 1e-9,
    "khintchine_lower_homogenized": 1e-9,
    "khintchine_upper_homogenized": 1e-9,
    "laplace_order": 1e-12,
    "sqrt_v_order": 1e-9,
    "main_conv": 1e-9,
    "main_hom_lower": 1e-12,
    "main_hom_upper": 1e-12,
}


@dataclass(frozen=True)
class GeneratorConfig:
    seed: int = 42
    n_range: tuple[int, int] = (1, 6)
    m_range: tuple[int, int] = (2, 4)
    concentration: float = 1.0
    count: int = 10_000

    def __post_init__(self):
        if not (0 <= self.seed < 2**64):
            raise ValueError("seed must be a 64-bit unsigned integer")
        for name, (lo, hi), least in (("n_range", self.n_range, 1), ("m_range", self.m_range, 1)):
            if lo < least or hi < lo:
                raise ValueError(f"{name} must satisfy {least} <= min <= max, got {(lo, hi)}")
        if not self.concentration > 0:
            raise ValueError("concentration must be positive")
        if self.count < 0:
            raise ValueError("count must be nonnegative")


@dataclass
class CheckRecord:
    name: str
    lhs: float
    rhs: float
    margin: float
    tol: float
    status: str  # "pass", "fail" or "skip"

    @property
    def passed(self) -> bool:
        return self.status != "fail"


@dataclass
class LemmaReport:
    instance_id: int | None
    n: int
    m: int
    checks: list[CheckRecord]
    quantities: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[CheckRecord]:
        return [c for c in self.checks if c.status == "fail"]

    def check(self, name: str) -> CheckRecord:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json(self) -> dict:
        return {
            "instance_id": self.instance_id,
            "n": self.n,
            "m": self.m,
            "passed": self.passed,
            "quantities": self.quantities,
            "checks": [asdict(c) for c in self.checks],
        }


@dataclass
class SuiteResult:
    reports: list[LemmaReport]
    summary: dict

    @property
    def passed(self) -> bool:
        return self.summary["failed_checks"] == 0


@dataclass
class SearchReport:
    best_ratio: float
    witness: ProductInstance
    evaluations: int
    seed: int
    family: str
    restarts: int
    steps: int

    def to_json(self) -> dict:
        return {
            "best_ratio": self.best_ratio,
            "witness": self.witness.to_json(),
            "evaluations": self.evaluations,
            "seed": self.seed,
            "family": self.family,
            "restarts": self.restarts,
            "steps": self.steps,
        }


# -- generation ---------------------------------------------------------------

def _random_pmf(rng: np.random.Generator, m: int, concentration: float) -> np.ndarray:
    if m == 1:
        return np.ones(1)
    for _ in range(64):
        p = rng.dirichlet(np.full(m, concentration))
        if p.min() >= PROB_FLOOR:
            return p
    # very small concentrations: squeeze the last draw into the floored simplex
    return _floor(p)


def _floor(p: np.ndarray) -> np.ndarray:
    # affine map keeps the sum at one and every entry >= PROB_FLOOR
    if p.min() >= PROB_FLOOR:
        return p
    return PROB_FLOOR + (1.0 - p.size * PROB_FLOOR) * p


def instance_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, index]))


def gen_instance(cfg: GeneratorConfig, index: int) -> ProductInstance:
    """Instance number ``index`` of the corpus described by ``cfg``.

    Draws ``n`` then ``m`` uniformly from their ranges, then ``P_1..P_n`` and
    ``Q_1..Q_n`` from a symmetric Dirichlet, redrawing any pmf that has an
    entry below ``PROB_FLOOR``. Depends only on ``(cfg, index)``.
    """
    if not (0 <= index < max(cfg.count, 1)):
        raise IndexError(f"index {index} outside corpus of size {cfg.count}")
    rng = instance_rng(cfg.seed, index)
    n = int(rng.integers(cfg.n_range[0], cfg.n_range[1] + 1))
    m = int(rng.integers(cfg.m_range[0], cfg.m_range[1] + 1))
    Ps = [Pmf(_random_pmf(rng, m, cfg.concentration)) for _ in range(n)]
    Qs = [Pmf(_random_pmf(rng, m, cfg.concentration)) for _ in range(n)]
    return ProductInstance(tuple(Ps), tuple(Qs))


# -- per-instance verification -----------------------------------------------

class _Recorder:
    def __init__(self, tol: float | None):
        self.tol = tol
        self.records: list[CheckRecord] = []

    def _t(self, name: str) -> float:
        if self.tol is not None:
            return self.tol
        return DEFAULT_TOLS[name.split("[")[0]]

    def _add(self, name, lhs, rhs, margin):
        tol = self._t(name)
        ok = bool(np.isfinite(margin)) and margin >= -tol
        self.records.append(CheckRecord(name, float(lhs), float(rhs), float(margin), tol, "pass" if ok else "fail"))

    def le(self, name, lhs, rhs):
        """lhs <= rhs"""
        self._add(name, lhs, rhs, rhs - lhs)

    def eq(self, name, lhs, rhs):
        self._add(name, lhs, rhs, -abs(lhs - rhs))

    def skip(self, name):
        self.records.append(CheckRecord(name, math.nan, math.nan, math.nan, self._t(name), "skip"))


def _atomwise_gap(a, b) -> float:
    if len(a) != len(b):
        return math.inf
    return float(max(np.max(np.abs(a.positions - b.positions)), np.max(np.abs(a.weights - b.weights))))


def verify_instance(
    inst: ProductInstance,
    tol: float | None = None,
    *,
    instance_id: int | None = None,
    lambdas: Sequence[float] = DEFAULT_LAMBDAS,
    enumeration_cap: int = ENUMERATION_CAP,
    c0_upper: float | None = None,
) -> LemmaReport:
    """Run every lemma and theorem check on one instance."""
    if c0_upper is None:
        c0_upper = default_constants().c0_upper
    rec = _Recorder(tol)
    n = inst.n

    etas = [encode_pair(P, Q) for P, Q in inst.pairs()]
    eta_vec = convolve_family(etas)
    eta_bar = uniform_mixture(etas)
    eta_bar_n = power_convolve(eta_bar, n)
    measures = etas + [eta_vec, eta_bar, eta_bar_n]

    tv_vec = t_functional(eta_vec)
    t_bar_n = t_functional(eta_bar_n)
    Pbar, Qbar = homogenize(inst.Ps), homogenize(inst.Qs)
    tv_hom = tv_homogenized_multinomial(Pbar, Qbar, n)

    # closure under encoding, mixture, convolution
    rec.le("admissibility", max(check_admissible(e).deviation for e in measures), 0.0)

    try:
        rec.eq("encoding_exact", tv_vec, tv_product_bruteforce(inst, cap=enumeration_cap))
    except EnumerationBudgetExceeded:
        rec.skip("encoding_exact")

    lp = lift(inst)
    rec.le("lift_mixture", _atomwise_gap(encode_pair(lp.lambda_p, lp.lambda_q), eta_bar), 0.0)

    try:
        hom_inst = ProductInstance.homogeneous(Pbar, Qbar, n)
        rec.eq("multinomial_bruteforce", tv_hom, tv_product_bruteforce(hom_inst, cap=enumeration_cap))
    except EnumerationBudgetExceeded:
        rec.skip("multinomial_bruteforce")
    rec.eq("multinomial_encoding", tv_hom, t_functional(power_convolve(encode_pair(Pbar, Qbar), n)))
    rec.le("data_processing", tv_hom, t_bar_n)

    lower = min(t_functional(e) - mass_defect(e) for e in measures)
    rec.le("mass_control_lower", 0.0, lower)
    upper = min(
        math.sqrt(max(d * (2.0 - d), 0.0)) - t_functional(e)
        for e in measures
        for d in (mass_defect(e),)
    )
    rec.le("mass_control_upper", 0.0, upper)

    laws = [score_law(e) for e in etas]
    bar_law = homogenized_law(laws)
    a = np.array([law.second_moment for law in laws])
    alpha = sum(mass_defect(e) for e in etas)
    nu = float(a.sum())
    rec.le("signal_lower", alpha, nu)
    rec.le("signal_upper", nu, 2.0 * alpha)
    rec.le("score_mean_zero", max(abs(law.mean) for law in laws), 0.0)

    er2 = remainder_l2(a)
    rec.le("linearization_a_bound", er2, math.sinh(nu) - nu)
    try:
        e_s = sum_abs_mean(laws, cap=enumeration_cap)
    except EnumerationBudgetExceeded:
        e_s = None
    try:
        if e_s is None:
            raise EnumerationBudgetExceeded("sum law skipped")
        prob, ps, s = enumerate_psi(laws, cap=enumeration_cap)
        e_psi = float(np.dot(prob, np.abs(ps)))
        rec.eq("score_representation", e_psi, tv_vec)
        rec.eq("linearization_a_identity", float(np.dot(prob, (ps - s) ** 2)), er2)
        rec.le("linearization_a", float(np.dot(prob, np.abs(ps - s))) ** 2, er2)
        rec.le("linearization_c", abs(e_psi - e_s), d_rho(nu) * e_s)
    except EnumerationBudgetExceeded:
        for name in ("score_representation", "linearization_a_identity", "linearization_a", "linearization_c"):
            rec.skip(name)
    if e_s is None:
        rec.skip("linearization_b")
    else:
        rec.le("linearization_b", nu / math.sqrt(1.0 + 3.0 * nu), e_s)

    e_s_bar = iid_sum_abs_mean(bar_law, n)
    rec.le("linearization_c_homogenized", abs(t_bar_n - e_s_bar), d_rho(nu) * e_s_bar)

    e_sqrt_v_bar = iid_sqrt_quadratic_mean(bar_law, n)
    try:
        e_sqrt_v = sqrt_quadratic_mean(laws, cap=enumeration_cap)
    except EnumerationBudgetExceeded:
        e_sqrt_v = None
    if e_sqrt_v is None or e_s is None:
        rec.skip("khintchine_lower")
        rec.skip("khintchine_upper")
    else:
        rec.le("khintchine_lower", e_sqrt_v / (2.0 * math.sqrt(2.0)), e_s)
        rec.le("khintchine_upper", e_s, 2.0 * e_sqrt_v)
    rec.le("khintchine_lower_homogenized", e_sqrt_v_bar / (2.0 * math.sqrt(2.0)), e_s_bar)
    rec.le("khintchine_upper_homogenized", e_s_bar, 2.0 * e_sqrt_v_bar)

    for lam in lambdas:
        rec.le(f"laplace_order[{lam:g}]", laplace_v(laws, lam), laplace_v([bar_law] * n, lam))
    if e_sqrt_v is None:
        rec.skip("sqrt_v_order")
    else:
        rec.le("sqrt_v_order", e_sqrt_v_bar, e_sqrt_v)

    rec.le("main_conv", t_bar_n, c0_upper * tv_vec)
    rec.le("main_hom_lower", C_BOUND * tv_hom, tv_vec)
    rec.le("main_hom_upper", tv_hom, C0_BOUND * tv_vec)

    quantities = {
        "tv_vec": tv_vec,
        "tv_hom": tv_hom,
        "t_eta_bar_n": t_bar_n,
        "ratio": homogenization_ratio_values(tv_hom, tv_vec),
        "alpha": alpha,
        "nu": nu,
        "atoms_eta_vec": len(eta_vec),
        "atoms_eta_bar_n": len(eta_bar_n),
    }
    return LemmaReport(instance_id, n, inst.m, rec.records, quantities)


def homogenization_ratio_values(tv_hom: float, tv_vec: float) -> float:
    # tv_vec == 0 forces P_i == Q_i for all i, hence tv_hom == 0
    return tv_hom / tv_vec if tv_vec > 0 else 0.0


def homogenization_ratio(inst: ProductInstance) -> float:
    """``TV(Pbar^n, Qbar^n) / TV(P_vec, Q_vec)``, zero when both vanish."""
    tv_vec = tv_product_exact(inst)
    tv_hom = tv_homogenized_multinomial(homogenize(inst.Ps), homogenize(inst.Qs), inst.n)
    return homogenization_ratio_values(tv_hom, tv_vec)


# -- corpus runs ----------------------------------------------------------------

def _verify_index(args):
    cfg, tol, index, lambdas, c0 = args
    return verify_instance(gen_instance(cfg, index), tol, instance_id=index, lambdas=lambdas, c0_upper=c0)


def summarize(reports: Iterable[LemmaReport]) -> dict:
    per_check: dict[str, dict] = {}
    failed = 0
    failed_instances = 0
    max_ratio = 0.0
    worst_instance = None
    count = 0
    for r in reports:
        count += 1
        failed_instances += not r.passed
        ratio = r.quantities.get("ratio", 0.0)
        if ratio > max_ratio:
            max_ratio, worst_instance = ratio, r.instance_id
        for c in r.checks:
            s = per_check.setdefault(c.name, {"runs": 0, "failures": 0, "skipped": 0, "min_margin": math.inf})
            if c.status == "skip":
                s["skipped"] += 1
                continue
            s["runs"] += 1
            s["min_margin"] = min(s["min_margin"], c.margin)
            if c.status == "fail":
                s["failures"] += 1
                failed += 1
    return {
        "instances": count,
        "failed_checks": failed,
        "failed_instances": failed_instances,
        "max_ratio": max_ratio,
        "max_ratio_instance": worst_instance,
        "checks": per_check,
    }


def run_suite(
    cfg: GeneratorConfig,
    tol: float | None = None,
    *,
    lambdas: Sequence[float] = DEFAULT_LAMBDAS,
    jobs: int = 1,
) -> SuiteResult:
    """Verify ``cfg.count`` generated instances; order is fixed by index."""
    c0 = default_constants().c0_upper
    work = [(cfg, tol, i, tuple(lambdas), c0) for i in range(cfg.count)]
    if jobs > 1 and cfg.count > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_verify_index, work, chunksize=64))
    else:
        reports = [_verify_index(w) for w in work]
    summary = summarize(reports)
    if summary["max_ratio"] > C0_BOUND:
        raise TheoremViolation(f"homogenization ratio {summary['max_ratio']!r} exceeds {C0_BOUND}")
    return SuiteResult(reports, summary)


# -- extremal search --------------------------------------------------------------

def _perturb(rng: np.random.Generator, probs: list[np.ndarray]) -> list[np.ndarray]:
    out = [p.copy() for p in probs]
    k = int(rng.integers(len(out)))
    j = int(rng.integers(out[k].size))
    out[k][j] *= (0.9, 1.1)[int(rng.integers(2))]
    out[k] = _floor(out[k] / out[k].sum())
    return out


def _to_instance(probs: list[np.ndarray]) -> ProductInstance:
    n = len(probs) // 2
    return ProductInstance(tuple(Pmf(p) for p in probs[:n]), tuple(Pmf(q) for q in probs[n:]))


def search_worst_ratio(
    seed: int = 0,
    restarts: int = 50,
    steps: int = 200,
    family: str = "bernoulli",
    n_max: int = 16,
    *,
    m_max: int = 3,
    concentration: float = 1.0,
) -> SearchReport:
    """Random-restart hill climbing on ``TV(hom) / TV(vec)``.

    Each restart draws a fresh instance with ``n`` in ``[2, n_max]``. A move
    scales one entry of one pmf by 0.9 or 1.1 and renormalizes; it is kept
    only if the ratio strictly improves.
    """
    if family not in ("bernoulli", "general"):
        raise ValueError("family must be 'bernoulli' or 'general'")
    if restarts < 1 or steps < 0 or n_max < 1:
        raise ValueError("need restarts >= 1, steps >= 0, n_max >= 1")
    m_range = (2, 2) if family == "bernoulli" else (2, max(m_max, 2))
    cfg = GeneratorConfig(seed=seed, n_range=(min(2, n_max), n_max), m_range=m_range,
                          concentration=concentration, count=restarts)
    best_ratio, best_inst = -1.0, None
    evaluations = 0
    for r in range(restarts):
        inst = gen_instance(cfg, r)
        rng = np.random.default_rng(np.random.SeedSequence([seed, r, 1]))
        probs = [p.probs.copy() for p in inst.Ps] + [q.probs.copy() for q in inst.Qs]
        current = homogenization_ratio(inst)
        evaluations += 1
        for _ in range(steps):
            cand = _perturb(rng, probs)
            cand_inst = _to_instance(cand)
            value = homogenization_ratio(cand_inst)
            evaluations += 1
            if value > C0_BOUND:
                raise TheoremViolation(f"ratio {value!r} exceeds {C0_BOUND} at {cand_inst.to_json()}")
            if value > current:
                probs, current, inst = cand, value, cand_inst
        if current > C0_BOUND:
            raise TheoremViolation(f"ratio {current!r} exceeds {C0_BOUND}")
        if current > best_ratio:
            best_ratio, best_inst = current, inst
    return SearchReport(best_ratio, best_inst, evaluations, seed, family, restarts, steps)


def bernoulli_grid_oracle(n: int, grid: Sequence[float]) -> tuple[float, tuple]:
    """Best ratio over all Bernoulli instances with parameters on ``grid``.

    Exhaustive over ``grid**(2n)``. Both TVs come from the explicit joint
    and binomial pmfs, with no use of the encoding.
    """
    from scipy.stats import binom
    import itertools

    g = np.asarray(grid, dtype=np.float64)
    params = np.array(list(itertools.product(range(g.size), repeat=2 * n)))
    ps, qs = g[params[:, :n]], g[params[:, n:]]
    jp = np.ones((params.shape[0], 1))
    jq = np.ones((params.shape[0], 1))
    for i in range(n):
        jp = (jp[:, :, None] * np.stack((ps[:, i], 1 - ps[:, i]), axis=1)[:, None, :]).reshape(len(ps), -1)
        jq = (jq[:, :, None] * np.stack((qs[:, i], 1 - qs[:, i]), axis=1)[:, None, :]).reshape(len(qs), -1)
    tv_vec = 0.5 * np.abs(jp - jq).sum(axis=1)
    k = np.arange(n + 1)
    # counts of the first outcome; Ber(p) puts mass p on outcome 0
    hp = binom.pmf(k[None, :], n, ps.mean(axis=1)[:, None])
    hq = binom.pmf(k[None, :], n, qs.mean(axis=1)[:, None])
    tv_hom = 0.5 * np.abs(hp - hq).sum(axis=1)
    ratio = np.where(tv_vec > 1e-12, tv_hom / np.where(tv_vec > 1e-12, tv_vec, 1.0), 0.0)
    best = int(np.argmax(ratio))
    return float(ratio[best]), (tuple(ps[best].tolist()), tuple(qs[best].tolist()))
