"""Channel-spec files (JSON) and machine-readable report documents.

Channel-spec layout (``format = "eafrelay-channel-spec"``, ``version = 1``)::

    {
      "format": "eafrelay-channel-spec",
      "version": 1,
      "alphabets": {"x1": 2, "x2": 2, "y": 2, "y1": 2, "yhat": 2},
      "p_x1": [...],            # |X1| entries
      "p_x2": [...],            # |X2| entries
      "channel": [...],         # p(y, y1 | x1, x2), row-major: x1 outermost, then x2, y, y1
      "quantizer": [...],       # p(yhat | x2, y1), row-major: x2 outermost, then y1, yhat
      "tolerance": 1e-9         # optional normalization tolerance
    }

Flattened tables must have exactly the product of their axis sizes; there is
no reshaping or transposition guesswork.
"""

from __future__ import annotations

import csv
import hashlib
import io as _io
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ArgumentError
from .probability import NORM_TOL
from .relay import X1, X2, Y, Y1, YHAT, InputDistributions, Quantizer, RelayChannel

SPEC_FORMAT = "eafrelay-channel-spec"
SPEC_VERSION = 1
REPORT_SCHEMA = "eafrelay-report/1"
SIG_DIGITS = 12
_SIZES = (X1, X2, Y, Y1, YHAT)


class SpecError(ArgumentError):
    """A channel-spec file failed to parse or validate."""


@dataclass(frozen=True)
class ChannelSpec:
    channel: RelayChannel
    inputs: InputDistributions
    quantizer: Quantizer
    tolerance: float = NORM_TOL

    @property
    def sizes(self) -> tuple[int, ...]:
        return (self.channel.x1.size, self.channel.x2.size, self.channel.y.size, self.channel.y1.size,
                self.quantizer.yhat.size)


def _table(doc: dict, key: str, shape: tuple[int, ...], axes: str) -> np.ndarray:
    if key not in doc:
        raise SpecError(f"{key}: missing table")
    raw = doc[key]
    if not isinstance(raw, list) or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in raw):
        raise SpecError(f"{key}: must be a flat list of numbers")
    want = math.prod(shape)
    if len(raw) != want:
        dims = " x ".join(map(str, shape))
        raise SpecError(f"{key}: expected {want} entries ({axes} = {dims}), got {len(raw)}")
    arr = np.array(raw, dtype=float)
    for i, v in enumerate(arr):
        if not np.isfinite(v) or v < 0:
            cell = np.unravel_index(i, shape)
            raise SpecError(f"{key}[{i}] (cell {tuple(int(c) for c in cell)} over {axes}): invalid entry {raw[i]!r}")
    return arr.reshape(shape)


def parse_spec(doc: dict) -> ChannelSpec:
    if not isinstance(doc, dict):
        raise SpecError("spec: top level must be an object")
    if doc.get("format") != SPEC_FORMAT or doc.get("version") != SPEC_VERSION:
        raise SpecError(f"spec: expected format {SPEC_FORMAT!r} version {SPEC_VERSION}, "
                        f"got {doc.get('format')!r} version {doc.get('version')!r}")
    al = doc.get("alphabets")
    if not isinstance(al, dict) or set(al) != set(_SIZES):
        raise SpecError(f"alphabets: need exactly the keys {list(_SIZES)}")
    for k in _SIZES:
        if not isinstance(al[k], int) or isinstance(al[k], bool) or al[k] < 1:
            raise SpecError(f"alphabets.{k}: size must be a positive integer, got {al[k]!r}")
    tol = doc.get("tolerance", NORM_TOL)
    if not isinstance(tol, (int, float)) or not 0 < tol < 1:
        raise SpecError(f"tolerance: must be a number in (0, 1), got {tol!r}")
    nx1, nx2, ny, ny1, nyh = (al[k] for k in _SIZES)
    px1 = _table(doc, "p_x1", (nx1,), "(x1)")
    px2 = _table(doc, "p_x2", (nx2,), "(x2)")
    ch = _table(doc, "channel", (nx1, nx2, ny, ny1), "(x1, x2, y, y1)")
    qz = _table(doc, "quantizer", (nx2, ny1, nyh), "(x2, y1, yhat)")
    try:
        return ChannelSpec(RelayChannel.from_array(ch, tol), InputDistributions.from_arrays(px1, px2, tol),
                           Quantizer.from_array(qz, tol=tol), float(tol))
    except SpecError:
        raise
    except ArgumentError as e:
        raise SpecError(str(e)) from None


def load_spec(path) -> ChannelSpec:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except OSError as e:
        raise SpecError(f"{path}: cannot read ({e.strerror})") from None
    except json.JSONDecodeError as e:
        raise SpecError(f"{path}: invalid JSON ({e})") from None
    try:
        return parse_spec(doc)
    except SpecError as e:
        raise SpecError(f"{path}: {e}") from None


def spec_document(channel: RelayChannel, inputs: InputDistributions, quantizer: Quantizer,
                  tolerance: float = NORM_TOL) -> dict:
    doc = {
        "format": SPEC_FORMAT,
        "version": SPEC_VERSION,
        "alphabets": {
            X1: channel.x1.size, X2: channel.x2.size, Y: channel.y.size, Y1: channel.y1.size,
            YHAT: quantizer.yhat.size,
        },
        "p_x1": inputs.px1.mass.tolist(),
        "p_x2": inputs.px2.mass.tolist(),
        "channel": channel.law.mass.ravel().tolist(),
        "quantizer": quantizer.law.mass.ravel().tolist(),
    }
    if tolerance != NORM_TOL:
        doc["tolerance"] = tolerance
    return doc


def save_spec(path, channel: RelayChannel, inputs: InputDistributions, quantizer: Quantizer,
              tolerance: float = NORM_TOL) -> None:
    # full repr precision so reloads are value-identical
    Path(path).write_text(json.dumps(spec_document(channel, inputs, quantizer, tolerance), indent=2) + "\n")


# ---------------------------------------------------------------- reports


def sig(x: float) -> float:
    """Round to 12 significant digits; non-finite values are rejected."""
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"non-finite value {x!r} in report")
    return float(f"{x:.{SIG_DIGITS}g}")


def _clean(obj):
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return sig(obj)
    return obj


def file_digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def report_document(command: str, body: dict, **meta) -> dict:
    doc = {"schema": REPORT_SCHEMA, "tool": "eafrelay", "version": __version__, "command": command}
    doc.update(meta)
    doc["body"] = body
    return _clean(doc)


def dumps_report(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def write_report(path, doc: dict) -> None:
    Path(path).write_text(dumps_report(doc))


def fmt(x: float) -> str:
    return f"{x:.{SIG_DIGITS}g}"


def sweep_csv(sweep) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["q", "rate_closed_form", "rate_recomputed", "feasible", "point"])
    for r in sweep.rows:
        w.writerow([fmt(r.q), fmt(r.joint.rate), fmt(r.joint_recomputed.rate), int(r.joint.feasible), r.point])
    return buf.getvalue()
