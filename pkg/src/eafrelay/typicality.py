"""Monte Carlo check of decoding the relay's partition index over the X2 -> Y link.

A codebook of M = ceil(2^(n r0)) words is drawn i.i.d. from p(x2); the
destination declares the unique codeword that is strongly typical with the
received sequence.  Zero or several typical codewords are errors.

Two modes are available:

``codebook``
    One explicit codebook shared by all trials, capped at ``codebook_cap`` words.
``ensemble``
    A fresh codebook per trial.  The transmitted word is simulated explicitly;
    the number of the other M - 1 words that happen to be typical with y is
    drawn from its exact Binomial(M - 1, P_typ(y)) law, where P_typ(y) is the
    probability that an independent i.i.d. word is typical with y.  Nothing of
    size M is materialized, so large rates stay cheap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.stats import binom, binomtest

from .errors import ArgumentError, CapExceeded
from .probability import CondPMF, JointPMF

DEFAULT_CAP = 2 ** 20
_ENSEMBLE_MAX = 2 ** 62
_TIE_TOL = 1e-12
_CHUNK = 1000


@dataclass(frozen=True)
class SimConfig:
    n: int
    r0: float
    epsilon: float = 0.05
    trials: int = 10_000
    seed: int = 0
    codebook_cap: int = DEFAULT_CAP
    mode: str = "codebook"

    def __post_init__(self):
        if self.n < 1 or self.trials < 1:
            raise ArgumentError("n and trials must be positive")
        if self.r0 < 0:
            raise ArgumentError(f"r0 must be non-negative, got {self.r0}")
        if not self.epsilon > 0:
            raise ArgumentError(f"epsilon must be positive, got {self.epsilon}")
        if self.mode not in ("codebook", "ensemble"):
            raise ArgumentError(f"mode must be 'codebook' or 'ensemble', got {self.mode!r}")

    @property
    def codebook_size(self) -> int:
        exp = self.n * self.r0
        if exp >= 63:
            return _ENSEMBLE_MAX + 1
        return max(1, math.ceil(2.0 ** exp))


@dataclass(frozen=True)
class Codebook:
    words: np.ndarray  # (M, n) symbol indices over X2

    @property
    def size(self) -> int:
        return self.words.shape[0]


@dataclass(frozen=True)
class SimResult:
    error_estimate: float
    wilson_interval: tuple[float, float]
    ambiguity_count: int
    errors: int
    trials: int
    codebook_size: int
    mode: str

    @property
    def half_width(self) -> float:
        lo, hi = self.wilson_interval
        return (hi - lo) / 2


def wilson_interval(errors: int, trials: int) -> tuple[float, float]:
    ci = binomtest(errors, trials).proportion_ci(confidence_level=0.95, method="wilson")
    return float(ci.low), float(ci.high)


def _typical_from_counts(counts: np.ndarray, p: np.ndarray, n: int, eps: float) -> np.ndarray:
    """counts has shape (..., |X2|, |Y|); returns a boolean per leading index."""
    pi = counts / n
    ok = np.abs(pi - p) <= eps + _TIE_TOL
    ok &= ~((p == 0) & (counts > 0))
    return ok.all(axis=(-2, -1))


def strongly_typical(pairs, law: JointPMF, epsilon: float) -> bool:
    """True iff the empirical joint type of `pairs` is within `epsilon` of `law` in every cell
    and puts no mass where `law` is zero.  `pairs` has shape (n, 2): columns are x2 and y indices."""
    if not epsilon > 0:
        raise ArgumentError("epsilon must be positive")
    pairs = np.asarray(pairs, dtype=np.int64)
    if pairs.ndim != 2 or pairs.shape[1] != 2 or len(pairs) == 0:
        raise ArgumentError(f"pairs must have shape (n, 2), got {pairs.shape}")
    p = law.mass
    kx, ky = p.shape
    if pairs.min() < 0 or pairs[:, 0].max() >= kx or pairs[:, 1].max() >= ky:
        raise ArgumentError("symbol index outside the alphabet")
    counts = np.bincount(pairs[:, 0] * ky + pairs[:, 1], minlength=kx * ky).reshape(kx, ky)
    return bool(_typical_from_counts(counts, p, len(pairs), epsilon))


def _pair_law(link: CondPMF, px2: JointPMF) -> np.ndarray:
    if link.given_axes[0].size != px2.axes[0].size or len(link.given_axes) != 1 or len(link.out_axes) != 1:
        raise ArgumentError("link must be p(y | x2) over the same x2 alphabet as p(x2)")
    return px2.mass[:, None] * link.mass


def make_codebook(cfg: SimConfig, px2: JointPMF) -> Codebook:
    m = cfg.codebook_size
    if m > cfg.codebook_cap:
        raise CapExceeded(f"codebook of {m} words exceeds cap {cfg.codebook_cap}")
    rng = np.random.default_rng([cfg.seed, 0])
    return Codebook(rng.choice(px2.axes[0].size, size=(m, cfg.n), p=px2.mass).astype(np.int64))


def _sample_outputs(rng, x: np.ndarray, link_mass: np.ndarray) -> np.ndarray:
    cdf = np.cumsum(link_mass, axis=1)
    cdf[:, -1] = 1.0
    u = rng.random(x.shape)
    return (u[..., None] >= cdf[x]).sum(axis=-1)


def _row_counts(x: np.ndarray, y: np.ndarray, kx: int, ky: int) -> np.ndarray:
    """Joint type counts for each row pair of x and y (or each codeword against one y)."""
    rows = x.shape[0]
    idx = x * ky + y + (np.arange(rows) * kx * ky)[:, None]
    return np.bincount(idx.ravel(), minlength=rows * kx * ky).reshape(rows, kx, ky)


def impostor_typical_prob(y_counts: tuple[int, ...], px2: np.ndarray, p: np.ndarray, n: int, eps: float) -> float:
    """P(an independent i.i.d. p(x2) word is strongly typical with a y of the given symbol counts)."""
    return _impostor_prob(tuple(int(c) for c in y_counts), tuple(map(float, px2)),
                          tuple(map(tuple, np.asarray(p, dtype=float))), n, eps)


@lru_cache(maxsize=4096)
def _impostor_prob(y_counts, px2, p, n, eps) -> float:
    px2 = np.array(px2)
    p = np.array(p)
    kx = len(px2)
    total = 1.0
    # the x counts inside each y class are independent multinomials
    for b, nb in enumerate(y_counts):
        k = np.arange(nb + 1)
        allowed = np.abs(k[None, :] / n - p[:, b][:, None]) <= eps + _TIE_TOL
        allowed &= ~((p[:, b][:, None] == 0) & (k[None, :] > 0))
        f = np.zeros(nb + 1)  # f[r]: mass with r symbols still to place
        f[nb] = 1.0
        for a in range(kx - 1):
            rest = px2[a:].sum()
            ratio = min(1.0, px2[a] / rest) if rest > 0 else 0.0
            g = np.zeros(nb + 1)
            for r in np.nonzero(f)[0]:
                kk = np.arange(r + 1)
                w = binom.pmf(kk, r, ratio) * allowed[a, kk]
                g[r - kk] += f[r] * w
            f = g
        total *= float(np.sum(f * allowed[kx - 1]))
        if total == 0.0:
            break
    return total


def simulate_step1(link: CondPMF, px2: JointPMF, cfg: SimConfig) -> SimResult:
    p = _pair_law(link, px2)
    kx, ky = p.shape
    m = cfg.codebook_size
    if cfg.mode == "codebook":
        book = make_codebook(cfg, px2)
    elif m > _ENSEMBLE_MAX:
        raise CapExceeded(f"codebook of size 2^{cfg.n * cfg.r0:.1f} is beyond the ensemble simulator")
    errors = ambiguous = 0
    for c, start in enumerate(range(0, cfg.trials, _CHUNK)):
        size = min(_CHUNK, cfg.trials - start)
        rng = np.random.default_rng([cfg.seed, 1, c])
        if cfg.mode == "codebook":
            s = rng.integers(m, size=size)
            x = book.words[s]
        else:
            x = rng.choice(kx, size=(size, cfg.n), p=px2.mass)
        y = _sample_outputs(rng, x, link.mass)
        true_typ = _typical_from_counts(_row_counts(x, y, kx, ky), p, cfg.n, cfg.epsilon)
        if m == 1:
            # single message: nothing to decode
            ambiguous += int(np.sum(~true_typ))
            continue
        if cfg.mode == "codebook":
            for i in range(size):
                typ = _typical_from_counts(
                    _row_counts(book.words, np.broadcast_to(y[i], book.words.shape), kx, ky), p, cfg.n, cfg.epsilon)
                total = int(typ.sum())
                errors += not (total == 1 and typ[s[i]])
                ambiguous += total != 1
        else:
            ycounts = np.stack([(y == b).sum(axis=1) for b in range(ky)], axis=1)
            probs = np.array([impostor_typical_prob(tuple(row), px2.mass, p, cfg.n, cfg.epsilon) for row in ycounts])
            impostors = rng.binomial(m - 1, probs)
            total = true_typ.astype(np.int64) + impostors
            errors += int(np.sum(~(true_typ & (impostors == 0))))
            ambiguous += int(np.sum(total != 1))
    return SimResult(errors / cfg.trials, wilson_interval(errors, cfg.trials), ambiguous, errors, cfg.trials, m,
                     cfg.mode)
