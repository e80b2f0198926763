# src/core/dataset.py
import hashlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Literal, NamedTuple, Sequence, Tuple

import numpy as np
import pandas as pd

from src.core.errors import DuplicateP, EmptyInput, NonFiniteValue
from src.core.logger import log_event

DuplicatePolicy = Literal["reject", "merge"]


class DataPoint(NamedTuple):
    p: float
    x: float


@dataclass(frozen=True, eq=False)
class Dataset:
    """
    Observations sorted by p, grouped by distinct p-coordinate.

    Vertex i (0-based) owns observations starts[i]..starts[i+1]-1; without
    duplicates every vertex owns exactly one observation. The sink vertex I
    has no coordinate of its own.
    """
    p: np.ndarray
    x: np.ndarray
    coords: np.ndarray
    starts: np.ndarray
    prefix_x: np.ndarray = field(repr=False)
    prefix_x2: np.ndarray = field(repr=False)

    @property
    def I(self) -> int:
        return len(self.coords)

    @property
    def n_obs(self) -> int:
        return len(self.x)

    @property
    def counts(self) -> np.ndarray:
        return np.diff(self.starts)

    @property
    def points(self) -> list:
        return [DataPoint(float(p), float(x)) for p, x in zip(self.p, self.x)]

    @property
    def has_duplicates(self) -> bool:
        return self.n_obs > self.I

    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(self.p.tobytes())
        h.update(self.x.tobytes())
        return h.hexdigest()

    def short_id(self) -> str:
        return self.digest()[:12]


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def load_dataset(rows: Iterable[Tuple[float, float]], on_duplicate: DuplicatePolicy = "reject") -> Dataset:
    """Validates, sorts and indexes raw (p, x) rows."""
    arr = np.asarray(list(rows), dtype=np.float64)
    if arr.size == 0:
        raise EmptyInput("dataset needs at least one (p, x) row")
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"rows must be (p, x) pairs, got array of shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        bad = int(np.flatnonzero(~np.isfinite(arr).all(axis=1))[0])
        raise NonFiniteValue(f"row {bad} holds a non-finite value: {arr[bad].tolist()}")
    if on_duplicate not in ("reject", "merge"):
        raise ValueError(f"unknown duplicate policy {on_duplicate!r}")

    order = np.argsort(arr[:, 0], kind="stable")
    p = np.ascontiguousarray(arr[order, 0])
    x = np.ascontiguousarray(arr[order, 1])

    repeated = np.diff(p) == 0
    if repeated.any():
        if on_duplicate == "reject":
            where = float(p[1:][repeated][0])
            raise DuplicateP(f"p = {where} appears more than once (use the merge policy to keep them)")
        log_event(None, "DATA", f"Merged {int(repeated.sum())} observations onto shared p-coordinates", "INFO")

    new_coord = np.concatenate(([True], ~repeated))
    first = np.flatnonzero(new_coord)
    starts = np.append(first, len(p)).astype(np.int64)

    prefix_x = np.concatenate(([0.0], np.cumsum(x)))
    prefix_x2 = np.concatenate(([0.0], np.cumsum(x * x)))

    return Dataset(
        p=_frozen(p),
        x=_frozen(x),
        coords=_frozen(p[first].copy()),
        starts=_frozen(starts),
        prefix_x=_frozen(prefix_x),
        prefix_x2=_frozen(prefix_x2),
    )


def _has_header(path: Path) -> bool:
    with open(path, "r", encoding="utf-8-sig") as fh:
        first_line = fh.readline()
    first_field = first_line.split(",")[0].strip()
    if not first_field:
        return False
    try:
        float(first_field)
    except ValueError:
        return True
    return False


def read_csv(path) -> np.ndarray:
    """Reads `p,x` rows; a single header line is detected by a non-numeric first field."""
    path = Path(path)
    try:
        header = 0 if _has_header(path) else None
        frame = pd.read_csv(
            path, header=header, encoding="utf-8-sig", skipinitialspace=True, float_precision="round_trip"
        )
    except pd.errors.EmptyDataError as e:
        raise EmptyInput(f"{path} holds no rows") from e
    if frame.shape[1] < 2:
        raise ValueError(f"{path} must have two columns p,x")
    rows = frame.iloc[:, :2].to_numpy(dtype=np.float64)
    log_event(None, "DATA", f"Read {len(rows)} rows from {path}", "DEBUG")
    return rows


def write_csv(data: Dataset | Sequence[Tuple[float, float]], path) -> None:
    if isinstance(data, Dataset):
        p, x = data.p, data.x
    else:
        arr = np.asarray(data, dtype=np.float64)
        p, x = arr[:, 0], arr[:, 1]
    frame = pd.DataFrame({"p": p, "x": x})
    frame.to_csv(path, index=False, lineterminator="\n")
