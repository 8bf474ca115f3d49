"""File formats: ``t3d`` tensors, per-pair CSV records and the JSON summary.

``t3d`` is a text format. The first line is ``t3d n1 n2 n3``; it is followed
by ``n1*n2*n3`` whitespace-separated decimal numbers in first-index-fastest
order (the first index varies fastest). Blank lines and lines starting
with ``#`` after the header are ignored. Values are written with
``repr(float)``, which round-trips exactly.
"""

import csv
import json

import numpy as np

from .exceptions import T3DFormatError
from .tensor3 import check_tensor3

CSV_COLUMNS = (
    "pair", "angle_approx", "angle_oracle", "norm_ytilde", "norm_yhat", "norm_y",
    "omega_eq4", "omega_s4", "omega_kutschan", "iters", "wall_ms",
)


def store_tensor(T, path, per_line=None):
    """Write ``T`` in ``t3d`` format, one mode-1 fiber per line by default."""
    T = check_tensor3(T)
    n1, n2, n3 = T.shape
    flat = T.ravel(order="F")
    per_line = per_line or n1
    with open(path, "w") as fh:
        fh.write(f"t3d {n1} {n2} {n3}\n")
        for start in range(0, flat.size, per_line):
            fh.write(" ".join(repr(float(x)) for x in flat[start:start + per_line]))
            fh.write("\n")


def load_tensor(path):
    """Read a ``t3d`` file.

    Raises
    ------
    T3DFormatError
        On a bad header, an unparsable number (with its line number) or a
        value count different from ``n1*n2*n3``.
    """
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise T3DFormatError("empty file", path, 1)
    head = lines[0].split()
    if len(head) != 4 or head[0] != "t3d":
        raise T3DFormatError("header must read 't3d n1 n2 n3'", path, 1)
    try:
        dims = tuple(int(x) for x in head[1:])
    except ValueError:
        raise T3DFormatError("dimensions must be integers", path, 1) from None
    if min(dims) < 1:
        raise T3DFormatError("dimensions must be positive", path, 1)
    expected = dims[0] * dims[1] * dims[2]

    values = []
    last = 1
    for lineno, line in enumerate(lines[1:], start=2):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        last = lineno
        for tok in stripped.split():
            try:
                values.append(float(tok))
            except ValueError:
                raise T3DFormatError(f"cannot parse {tok!r} as a number", path, lineno) from None
        if len(values) > expected:
            raise T3DFormatError(
                f"too many values: expected {expected}", path, lineno
            )
    if len(values) != expected:
        raise T3DFormatError(
            f"expected {expected} values for dims {dims}, found {len(values)}", path, last
        )
    T = np.array(values).reshape(dims, order="F")
    if not np.all(np.isfinite(T)):
        raise T3DFormatError("non-finite value", path)
    return T


def emit_csv(records, path):
    """Write one row per :class:`~ttproj.bench.PairRecord`; header only when empty."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for rec in records:
            writer.writerow(rec.csv_row())


def emit_json(summary, path):
    with open(path, "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=False)
        fh.write("\n")
