"""Seeded instance generation, q-sweeps, input optimization and region hunting."""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import rates
from .errors import ArgumentError
from .rates import RateResult, Region, RateTerms, Scheme
from .relay import InputDistributions, Quantizer, RelayChannel, RelayJoint, assemble_joint

SEED_MASK = (1 << 64) - 1
HUNT_GAIN_TOL = 1e-6


@dataclass(frozen=True)
class InstanceSpec:
    """Alphabet sizes (|X1|, |X2|, |Y|, |Y1|, |Yhat|) and a 64-bit seed."""

    sizes: tuple[int, int, int, int, int]
    seed: int = 0

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.sizes)
        if len(sizes) != 5 or min(sizes) < 1:
            raise ArgumentError(f"sizes must be five positive integers, got {self.sizes!r}")
        if not 0 <= int(self.seed) <= SEED_MASK:
            raise ArgumentError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        object.__setattr__(self, "sizes", sizes)
        object.__setattr__(self, "seed", int(self.seed))


def _dirichlet(rng: np.random.Generator, shape) -> np.ndarray:
    """Flat Dirichlet along the last axis via normalized exponentials."""
    e = rng.standard_exponential(shape)
    return e / e.sum(axis=-1, keepdims=True)


def sample_instance(spec: InstanceSpec) -> tuple[RelayChannel, InputDistributions, Quantizer]:
    nx1, nx2, ny, ny1, nyh = spec.sizes
    rng = np.random.default_rng(spec.seed)
    px1 = _dirichlet(rng, (nx1,))
    px2 = _dirichlet(rng, (nx2,))
    law = _dirichlet(rng, (nx1, nx2, ny * ny1)).reshape(nx1, nx2, ny, ny1)
    qz = _dirichlet(rng, (nx2, ny1, nyh))
    return RelayChannel.from_array(law), InputDistributions.from_arrays(px1, px2), Quantizer.from_array(qz)


def sample_joint(spec: InstanceSpec) -> RelayJoint:
    return assemble_joint(*sample_instance(spec))


def random_sizes_spec(seed: int, choices: Sequence[Sequence[int]]) -> InstanceSpec:
    """Spec whose five sizes are drawn from per-alphabet `choices`, all from `seed`."""
    if len(choices) != 5:
        raise ArgumentError("need one size choice list per alphabet")
    if all(len(c) == 1 for c in choices):
        return InstanceSpec(tuple(c[0] for c in choices), seed)
    rng = np.random.default_rng([seed, 1])
    return InstanceSpec(tuple(int(c[rng.integers(len(c))]) for c in choices), seed)


# ---------------------------------------------------------------- q sweep


@dataclass(frozen=True)
class SweepRow:
    q: float
    point: str  # "grid", "q_opt", "matching_q" or a "+"-joined combination
    joint: RateResult  # closed form
    joint_recomputed: RateResult  # through the time-shared joint
    ts_eaf: RateResult  # sequential EAF at this q, closed form


@dataclass(frozen=True)
class SweepResult:
    rows: tuple[SweepRow, ...]
    terms: RateTerms
    q_opt: float
    matching_q: Optional[float]

    def max_cross_check_gap(self) -> float:
        return max(abs(r.joint.rate - r.joint_recomputed.rate) for r in self.rows)


def sweep_q(rj: RelayJoint, steps: int = 100) -> SweepResult:
    if steps < 2:
        raise ArgumentError(f"steps must be at least 2, got {steps}")
    t = rates.compute_rate_terms(rj)
    rep = rates.evaluate(t)
    points: dict[float, list[str]] = {i / steps: ["grid"] for i in range(steps + 1)}
    points.setdefault(rep.q_opt, []).append("q_opt")
    if rep.matching_q is not None:
        points.setdefault(rep.matching_q, []).append("matching_q")
    rows = []
    for q in sorted(points):
        ts = rates.time_share_quantizer(rj.quantizer, q)
        t_q = rates.compute_rate_terms(assemble_joint(rj.channel, rj.inputs, ts))
        rows.append(SweepRow(q, "+".join(points[q]), rates.joint_rate_at_q(t, q),
                             rates.joint_decoding_rate(t_q), rates.eaf_rate_at_q(t, q)))
    return SweepResult(tuple(rows), t, rep.q_opt, rep.matching_q)


# ---------------------------------------------------------------- optimization


@dataclass(frozen=True)
class SearchConfig:
    restarts: int = 8
    iterations: int = 300
    perturbation_scale: float = 0.3
    improvement_tol: float = 1e-9
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1 or self.iterations < 1:
            raise ArgumentError("restarts and iterations must be positive")
        if not self.perturbation_scale > 0:
            raise ArgumentError("perturbation_scale must be positive")
        if not self.improvement_tol >= 1e-12:
            raise ArgumentError("improvement_tol must be at least 1e-12")


_OBJECTIVES = {
    Scheme.EAF: rates.eaf_rate,
    Scheme.JOINT: rates.joint_decoding_rate,
    Scheme.TS_EAF: rates.timeshared_eaf_rate,
}


def _softmax(z: np.ndarray) -> np.ndarray:
    e = np.exp(z - z.max(axis=-1, keepdims=True))
    return e / e.sum(axis=-1, keepdims=True)


@dataclass
class OptimizeResult:
    inputs: InputDistributions
    quantizer: Quantizer
    result: RateResult
    restart_best: list[float] = field(default_factory=list)
    restart_start: list[float] = field(default_factory=list)


def optimize_inputs(channel: RelayChannel, yhat_size: int, cfg: SearchConfig,
                    objective: Scheme | str = Scheme.TS_EAF) -> OptimizeResult:
    """Random-restart hill climbing over p(x1), p(x2) and the quantizer, in softmax coordinates.

    Restart r draws its start from seed stream (seed, r) and iteration k its
    perturbation from (seed, r, k), so adding restarts never changes earlier ones.
    """
    objective = Scheme(objective)
    if objective not in _OBJECTIVES:
        raise ArgumentError(f"objective must be one of EAF, JOINT, TS_EAF, got {objective.value}")
    if yhat_size < 1:
        raise ArgumentError("yhat_size must be at least 1")
    score = _OBJECTIVES[objective]
    shapes = [(channel.x1.size,), (channel.x2.size,), (channel.x2.size, channel.y1.size, yhat_size)]

    def build(logits):
        p1, p2, qz = (_softmax(z) for z in logits)
        inputs = InputDistributions.from_arrays(p1, p2)
        quant = Quantizer.from_array(qz)
        return inputs, quant, score(rates.compute_rate_terms(assemble_joint(channel, inputs, quant)))

    best = None
    restart_best, restart_start = [], []
    for r in range(cfg.restarts):
        rng = np.random.default_rng([cfg.seed, r])
        logits = [np.log(_dirichlet(rng, s)) for s in shapes]
        cur = build(logits)
        restart_start.append(cur[2].rate)
        for k in range(cfg.iterations):
            step = np.random.default_rng([cfg.seed, r, k])
            trial = [z + step.normal(0.0, cfg.perturbation_scale, z.shape) for z in logits]
            cand = build(trial)
            if cand[2].rate > cur[2].rate + cfg.improvement_tol:
                logits, cur = trial, cand
        restart_best.append(cur[2].rate)
        if best is None or cur[2].rate > best[2].rate:
            best = cur
    return OptimizeResult(best[0], best[1], best[2], restart_best, restart_start)


# ---------------------------------------------------------------- region hunting


@dataclass(frozen=True)
class HuntResult:
    found: tuple[InstanceSpec, ...]
    counts: dict
    scanned: int


def satisfies_joint_region(t: RateTerms, gain_tol: float = HUNT_GAIN_TOL) -> bool:
    """I(Yh;Y1|X1,X2,Y) <= I(X2;Y) < I(Yh;Y1|X2,Y) with I(X1;Yh|X2,Y) > gain_tol."""
    return rates.classify_region(t) is Region.JOINT_ONLY and t.i_x1_yh_g_x2y > gain_tol


def hunt_region(sizes: Sequence[int], max_seeds: int) -> HuntResult:
    """Scan seeds 0 .. max_seeds-1 for instances in the joint-decoding-only region."""
    if max_seeds < 0:
        raise ArgumentError("max_seeds must be non-negative")
    counts = Counter({r.value: 0 for r in Region})
    found = []
    for seed in range(max_seeds):
        spec = InstanceSpec(tuple(sizes), seed)
        t = rates.compute_rate_terms(sample_joint(spec))
        counts[rates.classify_region(t).value] += 1
        if satisfies_joint_region(t):
            found.append(spec)
    return HuntResult(tuple(found), dict(counts), max_seeds)


# ---------------------------------------------------------------- dominance sweep


@dataclass(frozen=True)
class InstanceOutcome:
    seed: int
    sizes: tuple[int, ...]
    report: rates.DominanceReport

    @property
    def violation(self) -> bool:
        return max(self.report.joint_gap, self.report.eaf_gap) > rates.DOMINANCE_TOL


def _evaluate_chunk(args) -> list[InstanceOutcome]:
    seeds, choices = args
    out = []
    for s in seeds:
        spec = random_sizes_spec(s, choices)
        out.append(InstanceOutcome(s, spec.sizes, rates.evaluate(rates.compute_rate_terms(sample_joint(spec)))))
    return out


def instance_seeds(base_seed: int, trials: int) -> list[int]:
    return [(base_seed + i) & SEED_MASK for i in range(trials)]


def evaluate_instances(base_seed: int, trials: int, choices: Sequence[Sequence[int]],
                       workers: int = 1, chunk: int = 500) -> list[InstanceOutcome]:
    """Evaluate instances with seeds base_seed, base_seed+1, ...; output order follows the seeds."""
    seeds = instance_seeds(base_seed, trials)
    jobs = [(seeds[i:i + chunk], choices) for i in range(0, len(seeds), chunk)]
    if workers <= 1:
        parts = map(_evaluate_chunk, jobs)
        return [o for p in parts for o in p]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return [o for p in ex.map(_evaluate_chunk, jobs) for o in p]


@dataclass(frozen=True)
class DominanceSummary:
    trials: int
    base_seed: int
    counts: dict
    violations: int
    max_joint_gap: float
    max_eaf_gap: float
    worst_seed: int
    worst_sizes: tuple[int, ...]


def summarize_dominance(outcomes: Sequence[InstanceOutcome], base_seed: int) -> DominanceSummary:
    if not outcomes:
        raise ArgumentError("no instances to summarize")
    counts = Counter({r.value: 0 for r in Region})
    counts.update(o.report.region.value for o in outcomes)
    worst = max(outcomes, key=lambda o: (o.report.joint_gap, -o.seed))
    return DominanceSummary(
        trials=len(outcomes),
        base_seed=base_seed,
        counts=dict(counts),
        violations=sum(o.violation for o in outcomes),
        max_joint_gap=worst.report.joint_gap,
        max_eaf_gap=max(o.report.eaf_gap for o in outcomes),
        worst_seed=worst.seed,
        worst_sizes=worst.sizes,
    )


def parse_size_choices(text: str) -> list[list[int]]:
    """'2,2,3,2,2' or '2-3,2,2-3,2,2': five entries, each a size or an inclusive range."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) == 1:
        parts = parts * 5
    if len(parts) != 5:
        raise ArgumentError(f"--sizes needs 1 or 5 comma-separated entries, got {text!r}")
    out = []
    for p in parts:
        try:
            lo, _, hi = p.partition("-")
            lo, hi = int(lo), int(hi or lo)
        except ValueError:
            raise ArgumentError(f"bad size entry {p!r} in {text!r}") from None
        if lo < 1 or hi < lo:
            raise ArgumentError(f"bad size range {p!r}")
        out.append(list(range(lo, hi + 1)))
    return out
