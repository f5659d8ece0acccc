"""One-way ANOVA and Tukey HSD with self-contained distribution kernels.

The F CDF uses the regularized incomplete beta function evaluated by Lentz's
continued fraction. The studentized range CDF is a fixed double Gauss-Legendre
quadrature: 160 nodes over the scaled chi variable, 96 nodes over the normal
location, which lands far inside the 1e-6 absolute-error budget across the
(q, k, df) ranges these tests use.
"""

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

from .errors import DegenerateVarianceWarning, ValidationError

_INNER_NODES = 96          # normal-location integral, truncated to [-9, 9]
_OUTER_NODES = 160         # chi-scale integral, truncated to 12 sigma around 1
_BETA_MAX_ITER = 300
_BETA_EPS = 3e-16


@dataclass(frozen=True)
class GroupSample:
    label: str
    values: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if any(not math.isfinite(v) for v in self.values):
            raise ValidationError(f"group {self.label!r} contains non-finite values")


@dataclass(frozen=True)
class AnovaResult:
    f_stat: float
    df_between: int
    df_within: int
    p_value: float
    group_means: dict[str, float]
    ss_between: float
    ss_within: float
    ms_between: float
    ms_within: float
    degenerate: bool = False
    # variance-heterogeneity diagnostic (Levene on deviations from group means);
    # reported alongside the test but never acted upon
    levene_stat: float = 0.0
    levene_p: float = 1.0


@dataclass(frozen=True)
class PairComparison:
    a: str
    b: str
    mean_diff: float
    q_stat: float
    p_adj: float
    significant: bool


@dataclass(frozen=True)
class TukeyResult:
    pairs: tuple[PairComparison, ...]
    alpha: float
    df_within: int
    ms_within: float
    degenerate: bool = False


def _decompose(groups: list[GroupSample]):
    if len(groups) < 2:
        raise ValidationError("need at least 2 groups")
    labels = [g.label for g in groups]
    if len(set(labels)) != len(labels):
        raise ValidationError("group labels must be unique")
    for g in groups:
        if len(g.values) < 2:
            raise ValidationError(f"group {g.label!r} needs at least 2 values")
    ns = [len(g.values) for g in groups]
    means = [sum(g.values) / len(g.values) for g in groups]
    total_n = sum(ns)
    grand = sum(v for g in groups for v in g.values) / total_n
    ss_between = sum(n * (m - grand) ** 2 for n, m in zip(ns, means))
    ss_within = sum(
        sum((v - m) ** 2 for v in g.values) for g, m in zip(groups, means))
    first = groups[0].values[0]
    all_identical = all(v == first for g in groups for v in g.values)
    return labels, ns, means, ss_between, ss_within, all_identical


def _levene_diagnostic(groups: list[GroupSample],
                       means: list[float]) -> tuple[float, float]:
    """Levene's W over absolute deviations from group means; never warns."""
    z_groups = [GroupSample(g.label, tuple(abs(v - m) for v in g.values))
                for g, m in zip(groups, means)]
    _, ns, _, ss_between, ss_within, identical = _decompose(z_groups)
    if identical or ss_between == 0.0:
        return 0.0, 1.0
    k = len(groups)
    df_between, df_within = k - 1, sum(ns) - k
    if ss_within == 0.0:
        return math.inf, 0.0
    w = (ss_between / df_between) / (ss_within / df_within)
    return w, 1.0 - f_cdf(w, df_between, df_within)


def one_way_anova(groups: list[GroupSample]) -> AnovaResult:
    """Classic one-way ANOVA over two or more groups.

    Parameters
    ----------
    groups : list of GroupSample
        At least two groups with at least two finite values each.

    Returns
    -------
    AnovaResult
        F statistic, degrees of freedom, p-value from the F distribution, the
        sum-of-squares decomposition, and a Levene variance-heterogeneity
        diagnostic. Zero within-group variance with a nonzero between-group
        component reports an infinite F with p = 0 and raises
        DegenerateVarianceWarning; fully identical data reports F = 0, p = 1.
    """
    labels, ns, means, ss_between, ss_within, all_identical = _decompose(groups)
    k = len(groups)
    df_between = k - 1
    df_within = sum(ns) - k
    group_means = dict(zip(labels, means))
    if all_identical:
        return AnovaResult(0.0, df_between, df_within, 1.0, group_means,
                           0.0, 0.0, 0.0, 0.0, degenerate=True)
    levene_stat, levene_p = _levene_diagnostic(groups, means)
    if ss_within == 0.0:
        warnings.warn("zero within-group variance with nonzero between-group variance",
                      DegenerateVarianceWarning, stacklevel=2)
        return AnovaResult(math.inf, df_between, df_within, 0.0, group_means,
                           ss_between, 0.0, ss_between / df_between, 0.0, degenerate=True,
                           levene_stat=levene_stat, levene_p=levene_p)
    ms_between = ss_between / df_between
    ms_within = ss_within / df_within
    f_stat = ms_between / ms_within
    p_value = 1.0 - f_cdf(f_stat, df_between, df_within)
    return AnovaResult(f_stat, df_between, df_within, p_value, group_means,
                       ss_between, ss_within, ms_between, ms_within,
                       levene_stat=levene_stat, levene_p=levene_p)


def _beta_continued_fraction(a: float, b: float, x: float) -> float:
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, _BETA_MAX_ITER + 1):
        m2 = 2 * m
        coef = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + coef * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + coef / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        coef = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + coef * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + coef / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _BETA_EPS:
            return h
    raise ArithmeticError(f"incomplete beta did not converge for a={a}, b={b}, x={x}")


def _betainc_reg(a: float, b: float, x: float) -> float:
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                + a * math.log(x) + b * math.log1p(-x))
    front = math.exp(ln_front)
    # continued fraction converges fast below the distribution's mean
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_continued_fraction(a, b, x) / a
    return 1.0 - front * _beta_continued_fraction(b, a, 1.0 - x) / b


def f_cdf(x: float, d1: int, d2: int) -> float:
    """CDF of the F distribution with (d1, d2) degrees of freedom.

    Evaluates the regularized incomplete beta function by continued fraction;
    absolute error is well below 1e-10 over the tested grid.
    """
    if d1 < 1 or d2 < 1:
        raise ValidationError("degrees of freedom must be >= 1")
    if x <= 0.0:
        return 0.0
    if math.isinf(x):
        return 1.0
    ratio = d1 * x / (d1 * x + d2)
    return min(1.0, max(0.0, _betainc_reg(d1 / 2.0, d2 / 2.0, ratio)))


@lru_cache(maxsize=8)
def _gauss_legendre(n: int, lo: float, hi: float):
    nodes, weights = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (hi - lo)
    return half * nodes + 0.5 * (hi + lo), half * weights


def _normal_cdf_array(values: np.ndarray) -> np.ndarray:
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    return np.array([0.5 * (1.0 + math.erf(v * inv_sqrt2)) for v in values.ravel()]
                    ).reshape(values.shape)


def _range_cdf(r: float, k: int, z: np.ndarray, wz: np.ndarray,
               phi: np.ndarray, big_phi: np.ndarray) -> float:
    if r <= 0.0:
        return 0.0
    shifted = _normal_cdf_array(z - r)
    return float(np.sum(wz * k * phi * (big_phi - shifted) ** (k - 1)))


def studentized_range_cdf(q: float, k: int, df: int) -> float:
    """CDF of the studentized range of k groups with df error degrees of freedom.

    Double numerical integration of the defining integral: the outer integral
    runs over the scaled chi variable (density of sqrt(chi^2_df / df)), the
    inner over the normal location of the range. Fixed Gauss-Legendre rules
    (160 outer, 96 inner nodes) keep the absolute error below 1e-6.
    """
    if k < 2:
        raise ValidationError("k must be >= 2")
    if df < 1:
        raise ValidationError("df must be >= 1")
    if q <= 0.0:
        return 0.0
    if math.isinf(q):
        return 1.0
    z, wz = _gauss_legendre(_INNER_NODES, -9.0, 9.0)
    phi = np.exp(-0.5 * z * z) / math.sqrt(2.0 * math.pi)
    big_phi = _normal_cdf_array(z)
    if df < 4:
        s_lo, s_hi = 0.0, 14.0
    else:
        s_lo, s_hi = max(0.0, 1.0 - 12.0 / math.sqrt(df)), 1.0 + 12.0 / math.sqrt(df)
    s, ws = _gauss_legendre(_OUTER_NODES, s_lo, s_hi)
    ln_norm = (0.5 * df * math.log(df) - math.lgamma(0.5 * df)
               - (0.5 * df - 1.0) * math.log(2.0))
    density = np.exp(ln_norm + (df - 1.0) * np.log(s) - 0.5 * df * s * s)
    total = float(sum(w * d * _range_cdf(q * sv, k, z, wz, phi, big_phi)
                      for w, d, sv in zip(ws, density, s)))
    return min(1.0, max(0.0, total))


def tukey_hsd(groups: list[GroupSample], alpha: float = 0.05) -> TukeyResult:
    """Tukey HSD pairwise comparisons after a one-way layout.

    Parameters
    ----------
    groups : list of GroupSample
        Same preconditions as `one_way_anova`. Unequal group sizes use the
        Tukey-Kramer standard error.
    alpha : float
        Familywise significance level in (0, 1).

    Returns
    -------
    TukeyResult
        One comparison per unordered pair, in input order, with the signed
        mean difference (b - a), the q statistic, and the adjusted p-value
        from the studentized range distribution.
    """
    if not 0.0 < alpha < 1.0:
        raise ValidationError(f"alpha must be in (0, 1), got {alpha}")
    labels, ns, means, _, ss_within, all_identical = _decompose(groups)
    k = len(groups)
    df_within = sum(ns) - k
    degenerate = ss_within == 0.0
    if degenerate:
        if not all_identical:
            warnings.warn("zero within-group variance; Tukey q statistics are degenerate",
                          DegenerateVarianceWarning, stacklevel=2)
        ms_within = 0.0
    else:
        ms_within = ss_within / df_within
    pairs = []
    for (i, a), (j, b) in combinations(enumerate(labels), 2):
        diff = means[j] - means[i]
        if degenerate:
            q = 0.0 if diff == 0.0 else math.inf
            p = 1.0 if diff == 0.0 else 0.0
        else:
            se = math.sqrt(ms_within / 2.0 * (1.0 / ns[i] + 1.0 / ns[j]))
            q = abs(diff) / se
            p = 1.0 - studentized_range_cdf(q, k, df_within)
        pairs.append(PairComparison(a, b, diff, q, p, p < alpha))
    return TukeyResult(tuple(pairs), alpha, df_within, ms_within, degenerate)
