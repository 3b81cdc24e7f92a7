"""Effect tensors, additive models, prediction, and the canonical JSON format."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .bins import FeatureBins, bin_index
from .errors import DomainError

Subset = tuple[str, ...]


def _frozen(a) -> np.ndarray:
    out = np.array(a, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class EffectTensor:
    """One effect term: a dense tensor over the grid of a sorted feature subset.

    The empty subset is the intercept and holds a 0-d array.
    """

    vars: Subset
    values: np.ndarray

    def __post_init__(self):
        v = tuple(self.vars)
        if list(v) != sorted(set(v)):
            raise DomainError(f"effect vars must be sorted and distinct: {v}")
        arr = _frozen(self.values)
        if arr.ndim != len(v):
            raise DomainError(
                f"effect {v}: tensor rank {arr.ndim} does not match {len(v)} vars"
            )
        if not np.all(np.isfinite(arr)):
            raise DomainError(f"effect {v}: non-finite values")
        object.__setattr__(self, "vars", v)
        object.__setattr__(self, "values", arr)

    @property
    def order(self) -> int:
        return len(self.vars)


@dataclass(frozen=True)
class AdditiveModel:
    """A set of effect tensors over a shared bins registry; predicts by summation.

    The intercept (empty subset) is always present, defaulting to 0.  A subset
    with no stored tensor contributes nothing.
    """

    bins: dict[str, FeatureBins]
    effects: dict[Subset, EffectTensor]

    def __post_init__(self):
        effects = {}
        for key, eff in self.effects.items():
            if tuple(key) != eff.vars:
                raise DomainError(f"effect keyed {key} has vars {eff.vars}")
            for k, name in enumerate(eff.vars):
                if name not in self.bins:
                    raise DomainError(f"effect {eff.vars}: no bins for feature {name!r}")
                if eff.values.shape[k] != self.bins[name].n_cells:
                    raise DomainError(
                        f"effect {eff.vars}: axis {k} has length "
                        f"{eff.values.shape[k]}, bins give {self.bins[name].n_cells}"
                    )
            effects[eff.vars] = eff
        if () not in effects:
            effects[()] = EffectTensor((), np.zeros(()))
        object.__setattr__(self, "effects", effects)

    @property
    def intercept(self) -> float:
        return float(self.effects[()].values)

    def cell_indices(self, point: dict) -> dict[str, int]:
        return {name: bin_index(b, point[name]) for name, b in self.bins.items()
                if name in point}


@dataclass(frozen=True)
class GridDataset:
    """Rows of feature values; continuous entries real, categorical entries labels."""

    columns: Subset
    rows: tuple[dict, ...]

    def __post_init__(self):
        cols = tuple(self.columns)
        rows = tuple(dict(r) for r in self.rows)
        for i, r in enumerate(rows):
            for c in cols:
                if c not in r:
                    raise DomainError(f"row {i}: missing value for column {c!r}")
        object.__setattr__(self, "columns", cols)
        object.__setattr__(self, "rows", rows)

    def __len__(self) -> int:
        return len(self.rows)


def predict(model: AdditiveModel, point: dict) -> float:
    """Sum every effect tensor's entry at the point's cell indices."""
    total = 0.0
    cache: dict[str, int] = {}
    for eff in model.effects.values():
        idx = []
        for name in eff.vars:
            if name not in cache:
                if name not in point:
                    raise DomainError(f"point is missing feature {name!r}")
                cache[name] = bin_index(model.bins[name], point[name])
            idx.append(cache[name])
        total += float(eff.values[tuple(idx)])
    return total


def effect_variance(tensor: EffectTensor, w) -> float:
    """Weighted variance of a tensor under the density's table for its subset."""
    wt = np.asarray(w.table(tensor.vars))
    if wt.shape != tensor.values.shape:
        raise DomainError(
            f"weight shape {wt.shape} does not match tensor shape {tensor.values.shape}"
        )
    mu = float((wt * tensor.values).sum())
    return float((wt * (tensor.values - mu) ** 2).sum())


# --------------------------------------------------------------------------
# Canonical JSON (bit-exact round trip; fixed ordering for determinism)
# --------------------------------------------------------------------------

def model_to_dict(model: AdditiveModel) -> dict:
    features = []
    for name in sorted(model.bins):
        b = model.bins[name]
        entry = {"name": name, "kind": b.kind}
        if b.kind == "continuous":
            entry["edges"] = list(b.edges)
        else:
            entry["labels"] = list(b.labels)
        features.append(entry)
    effects = []
    for key in sorted(model.effects, key=lambda u: (len(u), u)):
        eff = model.effects[key]
        effects.append({"vars": list(eff.vars), "values": eff.values.tolist()})
    return {"features": features, "effects": effects}


def model_from_dict(doc: dict) -> AdditiveModel:
    bins = {}
    for f in doc["features"]:
        if f["kind"] == "continuous":
            b = FeatureBins(f["name"], "continuous", edges=tuple(f["edges"]))
        else:
            b = FeatureBins(f["name"], "categorical", labels=tuple(f["labels"]))
        bins[f["name"]] = b
    effects = {}
    for e in doc["effects"]:
        key = tuple(e["vars"])
        if key in effects:
            raise DomainError(f"duplicate effect subset {key}")
        effects[key] = EffectTensor(key, np.array(e["values"], dtype=float))
    return AdditiveModel(bins, effects)


def dumps_canonical(doc: dict) -> str:
    """Serialize with sorted keys and shortest round-trip floats."""
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def model_to_json(model: AdditiveModel) -> str:
    return dumps_canonical(model_to_dict(model))


def model_from_json(text: str) -> AdditiveModel:
    return model_from_dict(json.loads(text))
