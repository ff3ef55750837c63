"""Relay channel, input laws, relay quantizer and the assembled five-variable joint."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError
from .probability import NORM_TOL, Alphabet, CondPMF, JointPMF, cond_mutual_information, prob_vector

X1, X2, Y, Y1, YHAT, YHH = "x1", "x2", "y", "y1", "yhat", "yhh"


@dataclass(frozen=True, eq=False)
class RelayChannel:
    """p(y, y1 | x1, x2), stored with axes (x1, x2, y, y1)."""

    law: CondPMF

    def __post_init__(self):
        names = tuple(a.name for a in self.law.given_axes + self.law.out_axes)
        if names != (X1, X2, Y, Y1):
            raise ArgumentError(f"channel law must have axes (x1, x2 | y, y1), got {names}")

    @classmethod
    def from_array(cls, table, tol: float = NORM_TOL) -> RelayChannel:
        t = np.asarray(table, dtype=float)
        if t.ndim != 4:
            raise ArgumentError(f"channel: expected a 4-axis table (x1, x2, y, y1), got shape {t.shape}")
        a = [Alphabet(n, s) for n, s in zip((X1, X2, Y, Y1), t.shape)]
        return cls(CondPMF(a[:2], a[2:], t, tol, what="channel"))

    x1 = property(lambda self: self.law.given_axes[0])
    x2 = property(lambda self: self.law.given_axes[1])
    y = property(lambda self: self.law.out_axes[0])
    y1 = property(lambda self: self.law.out_axes[1])


@dataclass(frozen=True, eq=False)
class InputDistributions:
    """Independent source and relay input laws p(x1), p(x2)."""

    px1: JointPMF
    px2: JointPMF

    def __post_init__(self):
        if self.px1.names != (X1,) or self.px2.names != (X2,):
            raise ArgumentError(f"inputs must be vectors over x1 and x2, got {self.px1.names}, {self.px2.names}")

    @classmethod
    def from_arrays(cls, px1, px2, tol: float = NORM_TOL) -> InputDistributions:
        return cls(prob_vector(X1, px1, tol), prob_vector(X2, px2, tol))


@dataclass(frozen=True, eq=False)
class Quantizer:
    """Relay compression map p(yhat | x2, y1)."""

    law: CondPMF

    def __post_init__(self):
        names = tuple(a.name for a in self.law.given_axes)
        if names != (X2, Y1) or len(self.law.out_axes) != 1:
            raise ArgumentError(f"quantizer law must have axes (x2, y1 | yhat), got {names}")

    @classmethod
    def from_array(cls, table, name: str = YHAT, tol: float = NORM_TOL) -> Quantizer:
        t = np.asarray(table, dtype=float)
        if t.ndim != 3:
            raise ArgumentError(f"quantizer: expected a 3-axis table (x2, y1, yhat), got shape {t.shape}")
        a = [Alphabet(n, s) for n, s in zip((X2, Y1, name), t.shape)]
        return cls(CondPMF(a[:2], a[2:], t, tol, what="quantizer"))

    @property
    def yhat(self) -> Alphabet:
        return self.law.out_axes[0]

    @classmethod
    def constant(cls, x2_size: int, y1_size: int, size: int = 1) -> Quantizer:
        """Quantizer that always emits symbol 0."""
        t = np.zeros((x2_size, y1_size, size))
        t[..., 0] = 1.0
        return cls.from_array(t)


@dataclass(frozen=True, eq=False)
class RelayJoint:
    """p(x1) p(x2) p(y, y1 | x1, x2) p(yhat | x2, y1) over axes (x1, x2, y, y1, yhat)."""

    joint: JointPMF
    channel: RelayChannel
    inputs: InputDistributions
    quantizer: Quantizer

    @property
    def yhat_name(self) -> str:
        return self.joint.axes[4].name


def _check_alphabets(pairs) -> None:
    for what, a, b in pairs:
        if a != b:
            raise ArgumentError(f"alphabet mismatch for {what}: {a} vs {b}")


def assemble_joint(channel: RelayChannel, inputs: InputDistributions, quantizer: Quantizer) -> RelayJoint:
    qgiven = quantizer.law.given_axes
    _check_alphabets([
        ("x1 (channel vs p(x1))", channel.x1, inputs.px1.axes[0]),
        ("x2 (channel vs p(x2))", channel.x2, inputs.px2.axes[0]),
        ("x2 (channel vs quantizer)", channel.x2, qgiven[0]),
        ("y1 (channel vs quantizer)", channel.y1, qgiven[1]),
    ])
    px1, px2 = inputs.px1.mass, inputs.px2.mass
    # indices: a=x1, b=x2, c=y, d=y1, e=yhat
    mass = np.einsum("a,b,abcd,bde->abcde", px1, px2, channel.law.mass, quantizer.law.mass)
    axes = (channel.x1, channel.x2, channel.y, channel.y1, quantizer.yhat)
    return RelayJoint(JointPMF(axes, mass), channel, inputs, quantizer)


def markov_residual(rj: RelayJoint) -> float:
    """I(Yhat; X1, Y | X2, Y1); zero whenever the quantizer only sees (x2, y1)."""
    return cond_mutual_information(rj.joint, [rj.yhat_name], [X1, Y], [X2, Y1])


def factorization_residual(rj: RelayJoint) -> float:
    """Largest deviation between the joint's recovered factors and the ones it was built from.

    Ratios are only compared on cells where the conditioning mass is positive.
    """
    m = rj.joint.mass
    err = 0.0
    px1, px2 = m.sum(axis=(1, 2, 3, 4)), m.sum(axis=(0, 2, 3, 4))
    err = max(err, np.abs(px1 - rj.inputs.px1.mass).max(), np.abs(px2 - rj.inputs.px2.mass).max())
    m4 = m.sum(axis=4)
    w = np.multiply.outer(rj.inputs.px1.mass, rj.inputs.px2.mass)
    on = w > 0
    if on.any():
        law = m4[on] / w[on][:, None, None]
        err = max(err, np.abs(law - rj.channel.law.mass[on]).max())
    m_x2y1 = m.sum(axis=(0, 2, 4))
    on = m_x2y1 > 0
    if on.any():
        q = m.sum(axis=(0, 2))[on] / m_x2y1[on][:, None]
        err = max(err, np.abs(q - rj.quantizer.law.mass[on]).max())
    return float(err)


def direct_link_distribution(channel: RelayChannel, inputs: InputDistributions) -> CondPMF:
    """p(y | x2) = sum over x1, y1 of p(x1) p(y, y1 | x1, x2)."""
    _check_alphabets([("x1", channel.x1, inputs.px1.axes[0])])
    t = np.einsum("a,abcd->bc", inputs.px1.mass, channel.law.mass)
    return CondPMF([channel.x2], [channel.y], t, what="direct link")
