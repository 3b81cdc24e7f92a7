"""Cell-weight estimators over a model's bin grids: uniform, empirical, Laplace."""

from __future__ import annotations

import csv
import itertools
from dataclasses import dataclass

import numpy as np

from .bins import bin_index
from .engine import WeightDensity
from .errors import DomainError
from .model import AdditiveModel, GridDataset, Subset, dumps_canonical

MODES = ("uniform", "empirical", "laplace")


@dataclass(frozen=True)
class DensitySpec:
    """Which estimator to use, and the dataset it counts over if it needs one.

    ``laplace_equal_mixture`` switches the Laplace estimator from add-one
    smoothing of counts (the default) to an equal mixture of the normalized
    uniform and empirical tables, for sensitivity checks.
    """

    mode: str
    data: GridDataset | None = None
    laplace_equal_mixture: bool = False

    def __post_init__(self):
        if self.mode not in MODES:
            raise DomainError(f"unknown density mode {self.mode!r}")
        if self.mode in ("empirical", "laplace"):
            if self.data is None or len(self.data) == 0:
                raise DomainError(f"{self.mode} density requires a nonempty dataset")


def required_subsets(model: AdditiveModel) -> list[Subset]:
    """Every effect subset plus everything reachable by removing features."""
    out: set[Subset] = set()
    for u in model.effects:
        for r in range(len(u) + 1):
            out.update(itertools.combinations(u, r))
    return sorted(out, key=lambda u: (len(u), u))


def _coerce(model: AdditiveModel, name: str, value):
    b = model.bins[name]
    if b.kind == "continuous" and isinstance(value, str):
        if value.strip() == "":
            raise DomainError(f"feature {name!r}: blank value")
        try:
            value = float(value)
        except ValueError:
            raise DomainError(
                f"feature {name!r}: cannot parse {value!r} as a number"
            ) from None
    return value


def bin_dataset(model: AdditiveModel, data: GridDataset) -> dict[str, np.ndarray]:
    """Cell index of every row for every model feature present in the data."""
    cols = {}
    for name in model.bins:
        if name not in data.columns:
            raise DomainError(f"dataset is missing model feature {name!r}")
        cols[name] = np.array(
            [bin_index(model.bins[name], _coerce(model, name, row[name]))
             for row in data.rows],
            dtype=int,
        )
    return cols


def _counts(model: AdditiveModel, u: Subset, cols: dict[str, np.ndarray]) -> np.ndarray:
    shape = tuple(model.bins[name].n_cells for name in u)
    out = np.zeros(shape)
    if not u:
        return np.asarray(float(len(next(iter(cols.values())))) if cols else 0.0)
    idx = tuple(cols[name] for name in u)
    np.add.at(out, idx, 1.0)
    return out


def estimate_density(model: AdditiveModel, spec: DensitySpec) -> WeightDensity:
    """Build normalized weight tables for every subset the purifier will touch."""
    subsets = required_subsets(model)
    cols = None
    if spec.mode in ("empirical", "laplace"):
        cols = bin_dataset(model, spec.data)

    tables: dict[Subset, np.ndarray] = {}
    for u in subsets:
        shape = tuple(model.bins[name].n_cells for name in u)
        if spec.mode == "uniform":
            t = np.ones(shape)
        elif spec.mode == "empirical":
            t = _counts(model, u, cols)
            if t.sum() <= 0:
                raise DomainError(f"empirical weights for {u}: no rows counted")
        else:
            if spec.laplace_equal_mixture:
                counts = _counts(model, u, cols)
                t = 0.5 * np.ones(shape) / max(1, int(np.prod(shape))) \
                    + 0.5 * counts / counts.sum()
            else:
                t = _counts(model, u, cols) + 1.0
        tables[u] = np.asarray(t, dtype=float) / np.asarray(t, dtype=float).sum()
    return WeightDensity(tables)


# --------------------------------------------------------------------------
# File I/O
# --------------------------------------------------------------------------

def dataset_from_csv(path) -> GridDataset:
    """Header row of feature names; blank cells are rejected at binning time."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise DomainError(f"{path}: empty CSV")
        rows = tuple(dict(r) for r in reader)
    return GridDataset(tuple(reader.fieldnames), rows)


def density_to_dict(w: WeightDensity) -> dict:
    return {
        "subsets": [
            {"vars": list(u), "weights": w.tables[u].tolist()}
            for u in sorted(w.tables, key=lambda u: (len(u), u))
        ]
    }


def density_to_json(w: WeightDensity) -> str:
    return dumps_canonical(density_to_dict(w))


def density_from_dict(doc: dict) -> WeightDensity:
    return WeightDensity(
        {tuple(s["vars"]): np.array(s["weights"], dtype=float)
         for s in doc["subsets"]}
    )
