"""CSV ingestion, the vendored iris data and the banana-shaped generator.

Files hold one sample per row; in memory a dataset is ``x`` of shape
``(d, n)`` with samples as columns.

Banana generator
----------------
Sample i uses three uniforms drawn in order from a PCG64 stream
(``numpy.random.PCG64(seed)``, raw 64-bit outputs ``r`` mapped to
``u = (r >> 11) * 2**-53``)::

    zeta  = 2*u0 - 1
    noise = sqrt(-2 ln(1 - u1)) * cos(2 pi u2)      (Box-Muller, cosine branch)
    point = (zeta, zeta**2 + noise_std * noise)
"""

from __future__ import annotations

import csv
import hashlib
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

__all__ = [
    "DataFileError",
    "Dataset",
    "EmptyFileError",
    "MalformedCellError",
    "RaggedRowError",
    "banana",
    "iris",
    "load_csv",
    "load_dataset",
    "write_csv",
]

IRIS_SHA256 = "874d28c2148c94ac8bed1b98ab1d93d27a473f72b2a712b06833f49b3259e54d"


class DataFileError(ValueError):
    pass


class EmptyFileError(DataFileError):
    pass


class RaggedRowError(DataFileError):
    pass


class MalformedCellError(DataFileError):
    def __init__(self, row: int, col: int, text: str):
        super().__init__(f"row {row}, column {col}: cannot parse {text!r} as a number")
        self.row, self.col, self.text = row, col, text


@dataclass
class Dataset:
    x: np.ndarray
    labels: np.ndarray | None = None
    name: str = "data"

    def __post_init__(self):
        if self.labels is not None and len(self.labels) != self.x.shape[1]:
            raise ValueError("label vector length differs from the number of samples")

    @property
    def n(self) -> int:
        return self.x.shape[1]

    @property
    def d(self) -> int:
        return self.x.shape[0]


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def _read_rows(lines, delimiter: str) -> list[list[str]]:
    rows = [r for r in csv.reader(lines, delimiter=delimiter)]
    return [[c.strip() for c in r] for r in rows if any(c.strip() for c in r)]


def load_csv(path, has_labels: bool = False, delimiter: str = ",", name: str | None = None) -> Dataset:
    """Read a numeric table, one sample per row.

    A non-numeric first row is taken as a header.  With ``has_labels`` the
    last column becomes the label vector; non-integer labels are mapped to
    0, 1, ... in order of first appearance.

    Raises
    ------
    EmptyFileError, RaggedRowError, MalformedCellError
    """
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as fh:
        rows = _read_rows(fh, delimiter)
    return _parse_rows(rows, has_labels, name or path.stem)


def _parse_rows(rows, has_labels: bool, name: str) -> Dataset:
    start = 0
    if rows and not all(_is_number(c) for c in (rows[0][:-1] if has_labels else rows[0])):
        start = 1
    body = rows[start:]
    if not body:
        raise EmptyFileError("no data rows")
    width = len(body[0])
    for i, r in enumerate(body, start=start + 1):
        if len(r) != width:
            raise RaggedRowError(f"row {i} has {len(r)} fields, expected {width}")
    ncols = width - 1 if has_labels else width
    if ncols < 1:
        raise EmptyFileError("no feature columns")
    values = np.empty((len(body), ncols))
    for i, r in enumerate(body):
        for j in range(ncols):
            try:
                values[i, j] = float(r[j])
            except ValueError:
                raise MalformedCellError(i + start + 1, j + 1, r[j]) from None
    if not np.all(np.isfinite(values)):
        bad = np.argwhere(~np.isfinite(values))[0]
        raise MalformedCellError(int(bad[0]) + start + 1, int(bad[1]) + 1,
                                 body[bad[0]][bad[1]])
    labels = None
    if has_labels:
        raw = [r[-1] for r in body]
        try:
            f = [float(v) for v in raw]
            if all(v == int(v) for v in f):
                labels = np.array([int(v) for v in f])
        except ValueError:
            pass
        if labels is None:
            codes: dict[str, int] = {}
            labels = np.array([codes.setdefault(v, len(codes)) for v in raw])
    return Dataset(values.T.copy(), labels, name)


def write_csv(path, x, labels=None, header: list[str] | None = None) -> None:
    """Write samples (columns of ``x``) as rows, shortest round-trip repr."""
    x = np.asarray(x, dtype=float)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if header:
            w.writerow(header)
        for i in range(x.shape[1]):
            row = [repr(float(v)) for v in x[:, i]]
            if labels is not None:
                row.append(str(int(labels[i])))
            w.writerow(row)


def iris() -> Dataset:
    """Fisher's iris data: 150 samples, 4 features, labels 0/1/2."""
    blob = resources.files("eigencenter").joinpath("data/iris.csv").read_bytes()
    digest = hashlib.sha256(blob).hexdigest()
    if digest != IRIS_SHA256:
        raise DataFileError(f"vendored iris.csv checksum mismatch: {digest}")
    rows = _read_rows(blob.decode("utf-8").splitlines(), ",")
    return _parse_rows(rows, True, "iris")


def _uniforms(seed: int, count: int) -> np.ndarray:
    raw = np.random.PCG64(seed).random_raw(count)
    return (raw >> np.uint64(11)).astype(float) * 2.0**-53


def banana(n: int = 200, noise_std: float = 0.2, seed: int = 0) -> Dataset:
    """Banana-shaped 2-D data: (ζ, ζ² + noise), ζ ~ U[−1, 1], noise ~ N(0, noise_std²).

    Deterministic for a given seed; see the module docstring for the stream.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if noise_std < 0:
        raise ValueError("noise_std must be nonnegative")
    u = _uniforms(seed, 3 * n).reshape(n, 3)
    zeta = 2.0 * u[:, 0] - 1.0
    gauss = np.sqrt(-2.0 * np.log1p(-u[:, 1])) * np.cos(2.0 * math.pi * u[:, 2])
    x = np.vstack([zeta, zeta**2 + noise_std * gauss])
    return Dataset(x, None, f"banana(n={n},noise={noise_std:g},seed={seed})")


def load_dataset(name: str, n: int = 200, noise_std: float = 0.2, seed: int = 0) -> Dataset:
    if name == "iris":
        return iris()
    if name == "banana":
        return banana(n, noise_std, seed)
    raise ValueError(f"unknown builtin dataset {name!r}")
