"""Finite value domains for features: continuous bin edges or category labels."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class FeatureBins:
    """The finite domain of one feature.

    Continuous features are partitioned into half-open cells
    ``(-inf, e_1), [e_1, e_2), ..., [e_k, +inf)`` by strictly increasing
    edges; a value equal to an edge falls in the upper cell (tree-split
    semantics: ``x < t`` goes left).  Categorical features enumerate their
    labels directly.
    """

    feature_name: str
    kind: str  # "continuous" | "categorical"
    edges: tuple[float, ...] = ()
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind not in ("continuous", "categorical"):
            raise DomainError(f"unknown bins kind {self.kind!r}")
        if self.kind == "continuous":
            if not self.edges:
                raise DomainError(
                    f"feature {self.feature_name!r}: continuous bins need at least one edge"
                )
            if not all(math.isfinite(e) for e in self.edges):
                raise DomainError(f"feature {self.feature_name!r}: non-finite edge")
            if any(a >= b for a, b in zip(self.edges, self.edges[1:])):
                raise DomainError(
                    f"feature {self.feature_name!r}: edges must be strictly increasing"
                )
            object.__setattr__(self, "edges", tuple(float(e) for e in self.edges))
        else:
            if not self.labels:
                raise DomainError(
                    f"feature {self.feature_name!r}: categorical bins need labels"
                )
            if len(set(self.labels)) != len(self.labels):
                raise DomainError(f"feature {self.feature_name!r}: duplicate labels")
            object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def n_cells(self) -> int:
        if self.kind == "continuous":
            return len(self.edges) + 1
        return len(self.labels)

    def representative(self, cell: int):
        """A value guaranteed to land in ``cell`` (midpoint where bounded)."""
        if self.kind == "categorical":
            return self.labels[cell]
        e = self.edges
        if cell == 0:
            return e[0] - 1.0
        if cell == len(e):
            return e[-1] + 1.0
        return 0.5 * (e[cell - 1] + e[cell])


def bin_index(bins: FeatureBins, value) -> int:
    """Return the unique cell containing ``value``."""
    if bins.kind == "categorical":
        try:
            return bins.labels.index(value)
        except ValueError:
            raise DomainError(
                f"feature {bins.feature_name!r}: unknown label {value!r}"
            ) from None
    v = float(value)
    if not math.isfinite(v):
        raise DomainError(f"feature {bins.feature_name!r}: non-finite value {value!r}")
    return int(np.searchsorted(bins.edges, v, side="right"))
