"""Complexity-probability analyses of an :class:`OutputDistribution`.

Probabilities are plug-in estimates ``count / total``; outputs never observed
are simply absent. Log-probabilities are base 2 throughout.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np
from scipy import stats

from simbias.core import InvalidArgument, changes_count, ktilde, ones_count
from simbias.sampling import OutputDistribution

EPS = 1e-9
APRIORI = "apriori"
ENVELOPE = "envelope"
WEIGHTED = "weighted"
UNIFORM = "uniform"
STATISTICS = {"changes": changes_count, "ones": ones_count}

UNIFORM_CAVEAT = (
    "uniform mode draws from observed outputs only; on partially sampled maps "
    "this overestimates accuracy relative to all possible outputs"
)
APRIORI_NOTE = "a = log2(distinct outputs) / max complexity"


class DegenerateFit(ValueError):
    pass


class InsufficientData(ValueError):
    pass


@dataclass(frozen=True)
class BoundFit:
    """log2 P(x) <= -a * K(x) - b."""

    a: float
    b: float
    fit_mode: str
    n_outputs: int
    k_max: float
    note: str = APRIORI_NOTE

    def bound(self, k: float) -> float:
        return -self.a * k - self.b

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class ScatterPoint:
    output: str
    k: float
    p: float
    log2p: float
    deficit: float


@dataclass(frozen=True)
class PairPredictionReport:
    sampling_mode: str
    n_pairs: int
    correct: int
    ties: int  # pairs with equal complexity, decided by coin
    p_ties: int  # pairs with equal probability, truth decided by coin
    accuracy: float
    seed: int
    map_digest: str
    notes: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class CorrelationReport:
    k: float
    statistic: str
    r: float | None
    p_value: float | None
    n: int
    outcome: str = "ok"
    map_digest: str = ""

    def to_dict(self) -> dict:
        return asdict(self)


def log2_prob(dist: OutputDistribution, x: str) -> float:
    return math.log2(dist.counts[x]) - math.log2(dist.total)


def complexities(dist: OutputDistribution) -> dict[str, float]:
    return {x: ktilde(x) for x in dist.counts}


def fit_bound(dist: OutputDistribution, mode: str = ENVELOPE) -> BoundFit:
    """Fit the slope a priori and, in envelope mode, the intercept to the data.

    The slope is ``log2(N_O) / K_max`` so the bound falls by ``log2(N_O)``
    bits across the observed complexity range. Envelope mode takes the
    smallest ``b`` that keeps every observed point on or under the line.
    """
    if mode not in (APRIORI, ENVELOPE):
        raise InvalidArgument(f"unknown fit mode {mode!r}")
    if len(dist) < 2:
        raise DegenerateFit("need at least two distinct outputs to fit the bound")
    ks = complexities(dist)
    if len(set(ks.values())) < 2:
        raise DegenerateFit("every output has the same complexity; slope is undefined")
    k_max = max(ks.values())
    a = math.log2(len(dist)) / k_max
    b = 0.0
    if mode == ENVELOPE:
        b = min(-a * k - log2_prob(dist, x) for x, k in ks.items())
    return BoundFit(a, b, mode, len(dist), k_max)


def scatter(dist: OutputDistribution, fit: BoundFit) -> list[ScatterPoint]:
    points = []
    for x in dist.outputs():
        k = ktilde(x)
        lp = log2_prob(dist, x)
        # grouped so the envelope's touching point comes out exactly 0
        deficit = (-fit.a * k - lp) - fit.b
        points.append(ScatterPoint(x, k, dist.prob(x), lp, deficit))
    return points


def rank_groups(dist: OutputDistribution) -> dict[float, list[tuple[int, str, float]]]:
    """Outputs grouped by complexity, each group as (rank, output, P) by falling P."""
    groups: dict[float, list[str]] = defaultdict(list)
    for x in dist.counts:
        groups[ktilde(x)].append(x)
    out = {}
    for k in sorted(groups):
        members = sorted(groups[k], key=lambda x: (-dist.counts[x], x))
        out[k] = [(r, x, dist.prob(x)) for r, x in enumerate(members, start=1)]
    return out


def max_prob_per_k(dist: OutputDistribution) -> dict[float, float]:
    return {k: group[0][2] for k, group in rank_groups(dist).items()}


def pair_prediction_experiment(
    dist: OutputDistribution,
    mode: str = WEIGHTED,
    n_pairs: int = 10_000,
    seed: int = 0,
) -> PairPredictionReport:
    """Predict the more probable output of random pairs from complexity alone.

    Lower complexity is predicted more probable; equal complexities are
    decided by a fair coin. When the two probabilities are exactly equal the
    true order is itself a fair coin, so a map where complexity carries no
    information scores 0.5 in expectation.
    """
    if mode not in (WEIGHTED, UNIFORM):
        raise InvalidArgument(f"unknown sampling mode {mode!r}")
    if len(dist) < 2:
        raise InvalidArgument("need at least two distinct outputs")
    if n_pairs < 1:
        raise InvalidArgument("n_pairs must be >= 1")
    outputs = dist.outputs()
    counts = np.array([dist.counts[x] for x in outputs], dtype=float)
    ks = np.array([ktilde(x) for x in outputs])
    gen = np.random.default_rng(seed)

    if mode == WEIGHTED:
        cdf = np.cumsum(counts / counts.sum())
        cdf[-1] = 1.0
        a = np.empty(n_pairs, dtype=np.int64)
        b = np.empty(n_pairs, dtype=np.int64)
        todo = np.arange(n_pairs)
        while len(todo):
            ia = np.searchsorted(cdf, gen.random(len(todo)), side="right")
            ib = np.searchsorted(cdf, gen.random(len(todo)), side="right")
            a[todo], b[todo] = ia, ib
            todo = todo[ia == ib]
    else:
        a = gen.integers(0, len(outputs), n_pairs)
        b = gen.integers(0, len(outputs) - 1, n_pairs)
        b = b + (b >= a)

    coin_k = gen.random(n_pairs) < 0.5
    coin_p = gen.random(n_pairs) < 0.5
    k_tie = ks[a] == ks[b]
    p_tie = counts[a] == counts[b]
    predict_a = np.where(k_tie, coin_k, ks[a] < ks[b])
    truth_a = np.where(p_tie, coin_p, counts[a] > counts[b])
    correct = int(np.sum(predict_a == truth_a))
    notes = (UNIFORM_CAVEAT,) if mode == UNIFORM else ()
    return PairPredictionReport(
        mode, n_pairs, correct, int(k_tie.sum()), int(p_tie.sum()),
        correct / n_pairs, seed, dist.map_digest, notes,
    )


def pearson(x: Sequence[float], y: Sequence[float]) -> tuple[float, float]:
    """Pearson r with the two-sided t-test p-value on n - 2 degrees of freedom."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = len(x)
    if n < 3:
        raise InsufficientData("need at least 3 points for a p-value")
    dx, dy = x - x.mean(), y - y.mean()
    denom = math.sqrt(float(dx @ dx) * float(dy @ dy))
    if denom == 0:
        raise InsufficientData("zero variance")
    r = max(-1.0, min(1.0, float(dx @ dy) / denom))
    if abs(r) == 1.0:
        return r, 0.0
    t = r * math.sqrt((n - 2) / (1 - r * r))
    return r, float(min(1.0, 2 * stats.t.sf(abs(t), n - 2)))


def complexity_levels(dist: OutputDistribution) -> list[float]:
    return sorted(set(complexities(dist).values()))


def correlation_report(
    dist: OutputDistribution,
    k: float | None = None,
    statistic: str = "changes",
) -> CorrelationReport:
    """Correlate a string statistic with log2 P inside one complexity group.

    ``k=None`` picks the second-lowest observed complexity.
    """
    if statistic not in STATISTICS:
        raise InvalidArgument(f"unknown statistic {statistic!r}")
    levels = complexity_levels(dist)
    if k is None:
        if len(levels) < 2:
            raise InsufficientData("only one complexity value observed")
        k = levels[1]
    members = [x for x in dist.outputs() if abs(ktilde(x) - k) < EPS]
    if len(members) < 3:
        raise InsufficientData(f"complexity group k={k} has {len(members)} member(s), need 3")
    xs = [STATISTICS[statistic](x) for x in members]
    ys = [log2_prob(dist, x) for x in members]
    try:
        r, p = pearson(xs, ys)
    except InsufficientData:
        return CorrelationReport(k, statistic, None, None, len(members), "insufficient-variance", dist.map_digest)
    return CorrelationReport(k, statistic, r, p, len(members), "ok", dist.map_digest)


def _require_envelope(fit: BoundFit) -> None:
    if fit.fit_mode != ENVELOPE:
        raise InvalidArgument("deficit-based analyses need an envelope fit")


def mass_deficit_profile(
    dist: OutputDistribution, fit: BoundFit, deltas: Sequence[float]
) -> list[tuple[float, float]]:
    """Total probability of outputs at least ``delta`` bits below the bound."""
    _require_envelope(fit)
    pts = scatter(dist, fit)
    deficits = np.array([p.deficit for p in pts])
    probs = np.array([p.p for p in pts])
    return [(float(d), float(probs[deficits >= d - EPS].sum())) for d in deltas]


def deficit_constant(profile: Sequence[tuple[float, float]]) -> float:
    """Smallest c >= 0 with mass(delta) <= 2**(-delta + 1 + c) on the profile."""
    c = 0.0
    for delta, mass in profile:
        if mass > 0:
            c = max(c, math.log2(mass) + delta - 1)
    return c


def mean_decay_rate(dist: OutputDistribution, fit: BoundFit) -> float:
    """Average fall of log2 mass(delta) per bit over [0, largest deficit]."""
    _require_envelope(fit)
    pts = scatter(dist, fit)
    d_max = max(p.deficit for p in pts)
    if d_max <= EPS:
        raise InsufficientData("every output sits on the bound")
    (_, m0), (_, m1) = mass_deficit_profile(dist, fit, [0.0, d_max])
    return (math.log2(m0) - math.log2(m1)) / d_max


def default_deltas(dist: OutputDistribution, fit: BoundFit, step: float = 1.0) -> list[float]:
    d_max = max(p.deficit for p in scatter(dist, fit))
    return [i * step for i in range(int(math.floor(d_max / step)) + 2)]


def lklp_select(
    dist: OutputDistribution,
    fit: BoundFit,
    delta_threshold: float,
    k_quantile: float,
) -> list[str]:
    """Low-complexity outputs lying at least ``delta_threshold`` bits under the bound."""
    _require_envelope(fit)
    if not 0 < k_quantile <= 1:
        raise InvalidArgument("k_quantile must lie in (0, 1]")
    pts = scatter(dist, fit)
    k_cut = float(np.quantile([p.k for p in pts], k_quantile))
    chosen = [p for p in pts if p.deficit >= delta_threshold - EPS and p.k <= k_cut + EPS]
    chosen.sort(key=lambda p: (-p.deficit, p.output))
    return [p.output for p in chosen]


def complexity_rank_agreement(dist: OutputDistribution) -> float:
    """Kendall tau-b between -complexity and probability over distinct outputs."""
    outputs = dist.outputs()
    tau = stats.kendalltau([-ktilde(x) for x in outputs], [dist.counts[x] for x in outputs]).statistic
    return float(tau)
