"""Achievable-rate expressions for estimate-and-forward relaying.

Every scheme is expressed through six conditional mutual informations of the
assembled joint (see :class:`RateTerms`).  Writing

    c = I(X2;Y)                     relay-to-destination link
    a = I(Yhat;Y1 | X1,X2,Y)        quantizer cost not explained by X1
    b = I(X1;Yhat | X2,Y)           quantizer gain
    a + b = I(Yhat;Y1 | X2,Y)       full Wyner-Ziv compression cost

the schemes are

    EAF       R = I(X1;Y|X2) + b                  if c >= a + b
    JOINT     R = I(X1;Y|X2) + min(c - a, b)      if c >= a
    TS_EAF    R = I(X1;Y|X2) + min(1, c/(a+b)) b  always

and an infeasible EAF/JOINT constraint falls back to the DIRECT rate I(X1;Y|X2).
"""

from __future__ import annotations

import enum
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .errors import ArgumentError, DominanceViolation, InternalError
from .probability import cond_mutual_information
from .relay import X1, X2, Y, Y1, YHH, Quantizer, RelayJoint

FEAS_TOL = 1e-12
IDENTITY_TOL = 1e-8
DOMINANCE_TOL = 1e-9
QUANT_GAIN_TOL = 1e-12


class Scheme(str, enum.Enum):
    EAF = "EAF"
    JOINT = "JOINT"
    TS_EAF = "TS_EAF"
    DIRECT = "DIRECT"


class Region(str, enum.Enum):
    EAF_FEASIBLE = "EAF_FEASIBLE"
    JOINT_ONLY = "JOINT_ONLY"
    INFEASIBLE = "INFEASIBLE"


@dataclass(frozen=True)
class RateTerms:
    i_x2_y: float
    i_x1_y_g_x2: float
    i_yh_y1_g_x2y: float
    i_yh_y1_g_x1x2y: float
    i_x1_yh_g_x2y: float
    i_x1_yyh_g_x2: float

    def as_dict(self) -> dict:
        return asdict(self)

    @property
    def identity_residual(self) -> float:
        """I(Yh;Y1|X2,Y) - I(Yh;Y1|X1,X2,Y) - I(X1;Yh|X2,Y)."""
        return self.i_yh_y1_g_x2y - self.i_yh_y1_g_x1x2y - self.i_x1_yh_g_x2y

    @property
    def chain_residual(self) -> float:
        """I(X1;Y,Yh|X2) - I(X1;Y|X2) - I(X1;Yh|X2,Y)."""
        return self.i_x1_yyh_g_x2 - self.i_x1_y_g_x2 - self.i_x1_yh_g_x2y


@dataclass(frozen=True)
class RateResult:
    scheme: Scheme
    rate: float
    feasible: bool
    binding: str


def compute_rate_terms(rj: RelayJoint) -> RateTerms:
    j, yh = rj.joint, rj.yhat_name
    cmi = cond_mutual_information
    t = RateTerms(
        i_x2_y=cmi(j, [X2], [Y]),
        i_x1_y_g_x2=cmi(j, [X1], [Y], [X2]),
        i_yh_y1_g_x2y=cmi(j, [yh], [Y1], [X2, Y]),
        i_yh_y1_g_x1x2y=cmi(j, [yh], [Y1], [X1, X2, Y]),
        i_x1_yh_g_x2y=cmi(j, [X1], [yh], [X2, Y]),
        i_x1_yyh_g_x2=cmi(j, [X1], [Y, yh], [X2]),
    )
    if abs(t.identity_residual) > IDENTITY_TOL or abs(t.chain_residual) > IDENTITY_TOL:
        raise InternalError(
            f"rate-term identities violated: identity {t.identity_residual:.3e}, chain {t.chain_residual:.3e}"
        )
    return t


def _direct(t: RateTerms, why: str) -> RateResult:
    return RateResult(Scheme.DIRECT, t.i_x1_y_g_x2, False, why)


def eaf_rate(t: RateTerms) -> RateResult:
    if t.i_x2_y >= t.i_yh_y1_g_x2y - FEAS_TOL:
        return RateResult(Scheme.EAF, t.i_x1_yyh_g_x2, True, "I(X2;Y) >= I(Yh;Y1|X2,Y)")
    return _direct(t, "violated: I(X2;Y) >= I(Yh;Y1|X2,Y)")


def _joint(t: RateTerms, q: float) -> RateResult:
    cost, gain = q * t.i_yh_y1_g_x1x2y, q * t.i_x1_yh_g_x2y
    if t.i_x2_y < cost - FEAS_TOL:
        return _direct(t, "violated: I(X2;Y) >= q I(Yh;Y1|X1,X2,Y)")
    link_arm = t.i_x2_y - cost
    if link_arm <= gain:
        return RateResult(Scheme.JOINT, t.i_x1_y_g_x2 + link_arm, True, "I(X2;Y) - q I(Yh;Y1|X1,X2,Y)")
    return RateResult(Scheme.JOINT, t.i_x1_y_g_x2 + gain, True, "q I(X1;Yh|X2,Y)")


def joint_decoding_rate(t: RateTerms) -> RateResult:
    return _joint(t, 1.0)


def _check_q(q: float) -> float:
    q = float(q)
    if not 0.0 <= q <= 1.0:
        raise ArgumentError(f"time-sharing fraction must lie in [0, 1], got {q!r}")
    return q


def joint_rate_at_q(t: RateTerms, q: float) -> RateResult:
    """Joint decoding with the quantizer output erased with probability 1 - q (closed form)."""
    return _joint(t, _check_q(q))


def eaf_rate_at_q(t: RateTerms, q: float) -> RateResult:
    """Sequential EAF with the quantizer output erased with probability 1 - q (closed form)."""
    q = _check_q(q)
    if t.i_x2_y >= q * t.i_yh_y1_g_x2y - FEAS_TOL:
        return RateResult(Scheme.EAF, t.i_x1_y_g_x2 + q * t.i_x1_yh_g_x2y, True, "I(X2;Y) >= q I(Yh;Y1|X2,Y)")
    return _direct(t, "violated: I(X2;Y) >= q I(Yh;Y1|X2,Y)")


def time_share_quantizer(qz: Quantizer, q: float) -> Quantizer:
    """Pass the quantizer output with probability q, else emit a fresh erasure symbol.

    The erasure is the last symbol of the enlarged alphabet.
    """
    q = _check_q(q)
    law = qz.law.mass
    ts = np.concatenate([q * law, np.full(law.shape[:2] + (1,), 1.0 - q)], axis=2)
    return Quantizer.from_array(ts, name=YHH)


def q_opt(t: RateTerms) -> float:
    """Largest erasure-free fraction keeping sequential EAF feasible: min{1, I(X2;Y) / I(Yh;Y1|X2,Y)}."""
    if t.i_yh_y1_g_x2y <= FEAS_TOL:
        return 1.0
    return min(1.0, t.i_x2_y / t.i_yh_y1_g_x2y)


def q_opt_split(t: RateTerms) -> float:
    """Same as :func:`q_opt` with the denominator split as I(Yh;Y1|X1,X2,Y) + I(X1;Yh|X2,Y)."""
    den = t.i_yh_y1_g_x1x2y + t.i_x1_yh_g_x2y
    if den <= FEAS_TOL:
        return 1.0
    return min(1.0, t.i_x2_y / den)


def timeshared_eaf_rate(t: RateTerms) -> RateResult:
    q = q_opt(t)
    binding = "q_opt = 1, relay link slack" if q >= 1.0 else f"q_opt = {q:.12g}, I(X2;Y) = q I(Yh;Y1|X2,Y)"
    return RateResult(Scheme.TS_EAF, t.i_x1_y_g_x2 + q * t.i_x1_yh_g_x2y, True, binding)


def classify_region(t: RateTerms) -> Region:
    if t.i_x2_y >= t.i_yh_y1_g_x2y - FEAS_TOL:
        return Region.EAF_FEASIBLE
    if t.i_x2_y >= t.i_yh_y1_g_x1x2y - FEAS_TOL:
        return Region.JOINT_ONLY
    return Region.INFEASIBLE


_MATCH_SLACK = 1e-9


def matching_q(t: RateTerms) -> float:
    """Erasure fraction at which time-shared EAF reproduces the joint-decoding rate.

    Defined on the closed region I(Yh;Y1|X1,X2,Y) <= I(X2;Y) <= I(Yh;Y1|X2,Y)
    with positive quantizer gain.
    """
    a, b, c = t.i_yh_y1_g_x1x2y, t.i_x1_yh_g_x2y, t.i_x2_y
    if b <= QUANT_GAIN_TOL:
        raise ArgumentError(f"matching q undefined: I(X1;Yh|X2,Y) = {b!r} vanishes")
    if c < a - FEAS_TOL or c > t.i_yh_y1_g_x2y + FEAS_TOL:
        raise ArgumentError("matching q undefined outside I(Yh;Y1|X1,X2,Y) <= I(X2;Y) <= I(Yh;Y1|X2,Y)")
    q = (c - a) / b
    if q < -_MATCH_SLACK or q > 1.0 + _MATCH_SLACK:
        raise InternalError(f"matching q {q!r} escaped [0, 1]")
    return min(max(q, 0.0), 1.0)


@dataclass(frozen=True)
class DominanceReport:
    terms: RateTerms
    eaf: RateResult
    joint: RateResult
    ts_eaf: RateResult
    region: Region
    q_opt: float
    matching_q: Optional[float]

    @property
    def joint_gap(self) -> float:
        """joint - ts_eaf; never above the dominance tolerance."""
        return self.joint.rate - self.ts_eaf.rate

    @property
    def eaf_gap(self) -> float:
        return self.eaf.rate - self.ts_eaf.rate


def evaluate(t: RateTerms) -> DominanceReport:
    """Bundle all scheme rates for one set of terms without enforcing dominance."""
    region = classify_region(t)
    mq = None
    if region is Region.JOINT_ONLY and t.i_x1_yh_g_x2y > QUANT_GAIN_TOL:
        mq = matching_q(t)
    return DominanceReport(t, eaf_rate(t), joint_decoding_rate(t), timeshared_eaf_rate(t), region, q_opt(t), mq)


def dominance_report(rj: RelayJoint) -> DominanceReport:
    """Evaluate every scheme on `rj`; raises DominanceViolation if time sharing loses."""
    rep = evaluate(compute_rate_terms(rj))
    if rep.joint_gap > DOMINANCE_TOL or rep.eaf_gap > DOMINANCE_TOL:
        raise DominanceViolation(
            f"time-shared EAF {rep.ts_eaf.rate!r} below joint {rep.joint.rate!r} or EAF {rep.eaf.rate!r}"
        )
    return rep
