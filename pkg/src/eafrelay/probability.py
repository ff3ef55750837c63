"""Dense finite-alphabet probability tables and information measures (bits)."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError, InternalError

NORM_TOL = 1e-9
CLAMP_TOL = 1e-12
# Sums closer to 1 than this are left untouched so reloads are bit-stable.
_EXACT_TOL = 1e-14


@dataclass(frozen=True)
class Alphabet:
    name: str
    size: int

    def __post_init__(self):
        if not isinstance(self.size, (int, np.integer)) or self.size < 1:
            raise ArgumentError(f"alphabet {self.name!r}: size must be a positive integer, got {self.size!r}")
        object.__setattr__(self, "size", int(self.size))


def _check_unique(axes: Sequence[Alphabet]) -> None:
    names = [a.name for a in axes]
    if len(set(names)) != len(names):
        raise ArgumentError(f"duplicate axis names: {names}")


def _normalize(mass: np.ndarray, n_out: int, tol: float, what: str) -> np.ndarray:
    """Validate that the trailing `n_out` axes sum to one for every leading cell."""
    if not np.all(np.isfinite(mass)):
        bad = np.argwhere(~np.isfinite(mass))[0]
        raise ArgumentError(f"{what}: non-finite entry at index {tuple(int(i) for i in bad)}")
    if np.any(mass < 0):
        bad = np.argwhere(mass < 0)[0]
        raise ArgumentError(f"{what}: negative entry {mass[tuple(bad)]!r} at index {tuple(int(i) for i in bad)}")
    out_axes = tuple(range(mass.ndim - n_out, mass.ndim))
    sums = mass.sum(axis=out_axes, keepdims=True)
    dev = np.abs(sums - 1.0)
    if np.any(dev > tol):
        cell = np.unravel_index(int(np.argmax(dev)), sums.shape)[: mass.ndim - n_out]
        total = float(sums.reshape(-1)[int(np.argmax(dev))])
        where = f" at conditioning cell {tuple(int(i) for i in cell)}" if cell else ""
        raise ArgumentError(f"{what}: entries sum to {total!r}{where}, tolerance {tol:g}")
    if np.any(dev > _EXACT_TOL):
        mass = mass / sums
    return mass


def _frozen(mass) -> np.ndarray:
    arr = np.array(mass, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class JointPMF:
    """Joint distribution over named axes; ``mass[i, j, ...]`` indexes one symbol per axis."""

    axes: tuple[Alphabet, ...]
    mass: np.ndarray

    def __init__(self, axes: Iterable[Alphabet], mass, tol: float = NORM_TOL, what: str = "joint table"):
        axes = tuple(axes)
        _check_unique(axes)
        arr = np.asarray(mass, dtype=float)
        shape = tuple(a.size for a in axes)
        if arr.shape != shape:
            raise ArgumentError(f"{what}: shape {arr.shape} does not match axes {shape}")
        object.__setattr__(self, "axes", axes)
        object.__setattr__(self, "mass", _frozen(_normalize(arr, arr.ndim, tol, what)))

    @classmethod
    def from_array(cls, names: Sequence[str], mass, tol: float = NORM_TOL) -> JointPMF:
        arr = np.asarray(mass, dtype=float)
        if arr.ndim != len(names):
            raise ArgumentError(f"{len(names)} names given for a {arr.ndim}-axis table")
        return cls([Alphabet(n, s) for n, s in zip(names, arr.shape)], arr, tol)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(a.name for a in self.axes)

    def axis_index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise ArgumentError(f"unknown axis {name!r}; have {self.names}") from None

    def alphabet(self, name: str) -> Alphabet:
        return self.axes[self.axis_index(name)]


@dataclass(frozen=True, eq=False)
class CondPMF:
    """Conditional law; ``mass`` has the given axes first, then the output axes."""

    given_axes: tuple[Alphabet, ...]
    out_axes: tuple[Alphabet, ...]
    mass: np.ndarray

    def __init__(self, given_axes: Iterable[Alphabet], out_axes: Iterable[Alphabet], mass,
                 tol: float = NORM_TOL, what: str = "conditional table"):
        given_axes, out_axes = tuple(given_axes), tuple(out_axes)
        if not out_axes:
            raise ArgumentError(f"{what}: needs at least one output axis")
        _check_unique(given_axes + out_axes)
        arr = np.asarray(mass, dtype=float)
        shape = tuple(a.size for a in given_axes + out_axes)
        if arr.shape != shape:
            raise ArgumentError(f"{what}: shape {arr.shape} does not match axes {shape}")
        object.__setattr__(self, "given_axes", given_axes)
        object.__setattr__(self, "out_axes", out_axes)
        object.__setattr__(self, "mass", _frozen(_normalize(arr, len(out_axes), tol, what)))


def prob_vector(name: str, p, tol: float = NORM_TOL) -> JointPMF:
    """One-axis JointPMF."""
    p = np.asarray(p, dtype=float)
    if p.ndim != 1:
        raise ArgumentError(f"p({name}): expected a vector, got shape {p.shape}")
    return JointPMF([Alphabet(name, p.size)], p, tol, what=f"p({name})")


def _resolve(joint: JointPMF, names) -> tuple[int, ...]:
    if isinstance(names, str):
        names = (names,)
    return tuple(joint.axis_index(n) for n in names)


def _marginal(mass: np.ndarray, keep: tuple[int, ...]) -> np.ndarray:
    drop = tuple(i for i in range(mass.ndim) if i not in keep)
    m = mass.sum(axis=drop) if drop else mass
    # summed array has kept axes in ascending order; reorder to `keep`
    order = np.argsort(np.argsort(keep))
    return np.transpose(m, order) if keep != tuple(sorted(keep)) else m


def marginalize(joint: JointPMF, keep: Sequence[str]) -> JointPMF:
    """Sum out every axis not named in `keep`; the result follows `keep`'s order."""
    idx = _resolve(joint, keep)
    if not idx:
        raise ArgumentError("keep must name at least one axis")
    if len(set(idx)) != len(idx):
        raise ArgumentError(f"repeated axis in keep: {list(keep)}")
    m = _marginal(joint.mass, idx)
    return JointPMF([joint.axes[i] for i in idx], m)


def _entropy(p: np.ndarray) -> float:
    p = p[p > 0]
    return float(-np.sum(p * np.log2(p)))


def entropy(joint: JointPMF) -> float:
    """Shannon entropy of the full table, with 0 log 0 = 0."""
    return max(_entropy(joint.mass), 0.0)


def _sum_out(m: np.ndarray, axes: tuple[int, ...]) -> np.ndarray:
    return m.sum(axis=axes, keepdims=True) if axes else m


def cond_mutual_information(joint: JointPMF, a, b, c=()) -> float:
    """I(A;B|C) = H(A|C) + H(B|C) - H(A,B|C), in bits.

    Evaluated as the sum of p(a,b,c) log p(a,b,c) p(c) / (p(a,c) p(b,c)) over
    the support, which avoids cancelling large entropies and is exactly zero
    when A or B is degenerate.

    Rounding negatives down to -1e-12 are clamped to zero; anything more
    negative raises InternalError.
    """
    ia, ib, ic = _resolve(joint, a), _resolve(joint, b), _resolve(joint, c)
    if not ia or not ib:
        raise ArgumentError("a and b must each name at least one axis")
    sa, sb, sc = set(ia), set(ib), set(ic)
    if sa & sb or sa & sc or sb & sc or len(sa) != len(ia) or len(sb) != len(ib) or len(sc) != len(ic):
        raise ArgumentError(f"axis sets must be disjoint: a={a!r} b={b!r} c={c!r}")
    rest = tuple(i for i in range(joint.mass.ndim) if i not in sa | sb | sc)
    pabc = _sum_out(joint.mass, rest)
    pac = _sum_out(pabc, ib)
    pbc = _sum_out(pabc, ia)
    pc = _sum_out(pac, ia)
    on = pabc > 0
    num = (pabc * pc)[on]
    den = np.broadcast_to(pac * pbc, pabc.shape)[on]
    val = float(np.sum(pabc[on] * np.log2(num / den)))
    if val < 0:
        if val < -CLAMP_TOL:
            raise InternalError(f"negative conditional mutual information {val!r}")
        val = 0.0
    return val


def mutual_information(joint: JointPMF, a, b) -> float:
    return cond_mutual_information(joint, a, b, ())
