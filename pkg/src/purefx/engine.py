"""The mass-moving purifier: slice means, per-tensor centering, and the cascade.

A tensor is pure when every 1-D slice has zero weighted mean.  Purification
repeatedly subtracts slice means and deposits them into the tensor over the
remaining variables, so model predictions never change.  Mass cascades from
high-order tensors through lower orders and terminates in the intercept.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateSliceError, DomainError, NonConvergenceError
from .model import AdditiveModel, EffectTensor, Subset

HALVING_SLACK = 1e-10  # additive slack on the two-step halving bound


@dataclass(frozen=True)
class WeightDensity:
    """Nonnegative normalized cell weights, one table per feature subset."""

    tables: dict[Subset, np.ndarray]

    def __post_init__(self):
        tables = {}
        for key, arr in self.tables.items():
            key = tuple(key)
            a = np.array(arr, dtype=float)
            if a.ndim != len(key):
                raise DomainError(f"weights for {key}: rank {a.ndim} != {len(key)} vars")
            if not np.all(np.isfinite(a)) or np.any(a < 0):
                raise DomainError(f"weights for {key}: entries must be finite and >= 0")
            if abs(a.sum() - 1.0) > 1e-12:
                raise DomainError(f"weights for {key}: sum {a.sum()} != 1")
            a.setflags(write=False)
            tables[key] = a
        object.__setattr__(self, "tables", tables)

    def table(self, u) -> np.ndarray:
        u = tuple(u)
        if u not in self.tables:
            raise DomainError(f"no weight table for subset {u}")
        return self.tables[u]

    def covers(self, u) -> bool:
        return tuple(u) in self.tables


@dataclass
class ConvergenceReport:
    """Per-axis-sweep trace of the unpurified mass for one tensor."""

    vars: Subset
    trace: list[tuple[int, float]]
    terminated_by: str  # "mass_below_tol" | "pure_flag" | "max_iters"
    passes: int
    # Iterations t >= 1 where M[t+1] > 0.5*M[t-1] + HALVING_SLACK*M[0].  The
    # two-step halving rate describes typical behaviour but is not a hard
    # invariant: some positive weight matrices exceed it at isolated steps.
    halving_violations: list[tuple[int, float]] = field(default_factory=list)

    @property
    def initial_mass(self) -> float:
        return self.trace[0][1]

    @property
    def final_mass(self) -> float:
        return self.trace[-1][1]


@dataclass
class TensorPurity:
    vars: Subset
    max_abs_slice_mean: float
    passed: bool


@dataclass
class PurityReport:
    tol: float
    tensors: list[TensorPurity]

    @property
    def max_abs_slice_mean(self) -> float:
        return max((t.max_abs_slice_mean for t in self.tensors), default=0.0)

    @property
    def passed(self) -> bool:
        return all(t.passed for t in self.tensors)

    def to_dict(self) -> dict:
        return {
            "tol": self.tol,
            "pass": self.passed,
            "max_abs_slice_mean": self.max_abs_slice_mean,
            "tensors": [
                {
                    "vars": list(t.vars),
                    "max_abs_slice_mean": t.max_abs_slice_mean,
                    "pass": t.passed,
                }
                for t in self.tensors
            ],
        }


def slice_weighted_mean(tensor: EffectTensor, w: WeightDensity, axis: str,
                        fixed: dict[str, int]) -> float:
    """Weighted mean of the 1-D slice along ``axis`` at the ``fixed`` indices."""
    if axis not in tensor.vars:
        raise DomainError(f"{axis!r} is not an axis of effect {tensor.vars}")
    wt = w.table(tensor.vars)
    idx = tuple(
        slice(None) if name == axis else fixed[name] for name in tensor.vars
    )
    ws = wt[idx]
    total = float(ws.sum())
    if total <= 0.0:
        raise DegenerateSliceError(
            f"slice of {tensor.vars} along {axis!r} at {fixed} has zero weight"
        )
    return float((ws * tensor.values[idx]).sum() / total)


def _axis_stats(T: np.ndarray, W: np.ndarray, axis: int):
    """Slice total weights, weighted sums, and conditional means along one axis."""
    wsum = W.sum(axis=axis)
    ssum = (W * T).sum(axis=axis)
    ok = wsum > 0.0
    means = np.zeros_like(np.asarray(ssum))
    np.divide(ssum, wsum, out=means, where=ok)
    return wsum, ssum, ok, means


def tensor_mass(T: np.ndarray, W: np.ndarray) -> float:
    """Unpurified mass: sum over axes of slice-weight times |weighted slice sum|.

    For a matrix this is exactly sum_ij w_ij (|r_i| + |c_j|).  For other ranks
    it is the analogous sum over all 1-D slice directions (an extension; the
    two-variable case is the defined one).
    """
    if T.ndim == 0:
        return 0.0
    total = 0.0
    for axis in range(T.ndim):
        wsum, ssum, _, _ = _axis_stats(T, W, axis)
        total += float((np.asarray(wsum) * np.abs(ssum)).sum())
    return total


def unpurified_mass(tensor: EffectTensor, w: WeightDensity) -> float:
    wt = w.table(tensor.vars)
    if wt.shape != tensor.values.shape:
        raise DomainError("weight/tensor shape mismatch")
    return tensor_mass(tensor.values, wt)


def _default_pass_cap(m0: float, tol_eff: float) -> int:
    # 10x the horizon implied by a halving rate, with a small floor.
    if m0 <= tol_eff or tol_eff <= 0.0:
        return 4
    return max(4, 10 * math.ceil(math.log2(m0 / tol_eff)))


def _purify_subset(tensors: dict[Subset, np.ndarray], w: WeightDensity, u: Subset,
                   tol: float, max_passes, strict: bool) -> ConvergenceReport:
    """Center every slice of ``tensors[u]``, depositing means one order down.

    Mutates ``tensors`` in place; lower-order targets are created as zeros
    when absent.  ``tol`` is relative to the tensor's initial mass.
    """
    T = tensors[u]
    W = w.table(u)
    if W.shape != T.shape:
        raise DomainError(f"weights for {u} have shape {W.shape}, tensor {T.shape}")
    for k in range(len(u)):
        sub = u[:k] + u[k + 1:]
        if not w.covers(sub):
            raise DomainError(f"no weight table for deposit target {sub}")

    m0 = tensor_mass(T, W)
    tol_eff = tol * max(1.0, m0)

    # Mass bounds a slice's weighted sum, not its conditional mean, so the
    # mass stopping rule is scaled by the squared smallest positive slice
    # weight: mass <= tol_eff * swmin**2 implies every |mean| <= tol_eff.
    swmin = 1.0
    for axis in range(len(u)):
        wsum = W.sum(axis=axis)
        positive = wsum[wsum > 0.0]
        if positive.size:
            swmin = min(swmin, float(positive.min()))
    mass_tol = tol_eff * swmin * swmin
    # The derived cap assumes the halving rate, which needs fully positive
    # weights; sparse (empirical) weights contract slower.  In auto mode keep
    # going past the cap while the mass still shrinks geometrically.
    auto_cap = max_passes is None
    if auto_cap:
        max_passes = _default_pass_cap(m0, mass_tol)
    ceiling = max(1000, 50 * max_passes) if auto_cap else max_passes

    trace = [(0, m0)]
    it = 0
    terminated = "max_iters"
    passes = 0
    while passes < ceiling:
        passes += 1
        moved = False
        # Sweep the last axis first so deposits land in the lexicographically
        # smallest remaining subset first; the converged result is the same
        # for any sweep order.
        for axis in reversed(range(len(u))):
            var = u[axis]
            wsum, _, ok, means = _axis_stats(T, W, axis)
            if strict and not np.all(ok):
                raise DegenerateSliceError(
                    f"zero-weight slice of {u} along {var!r}"
                )
            if np.any(np.abs(means) > tol_eff):
                moved = True
            T = T - np.expand_dims(means, axis)
            sub = u[:axis] + u[axis + 1:]
            target = tensors.get(sub)
            if target is None:
                target = np.zeros(means.shape)
            tensors[sub] = target + means
            it += 1
            trace.append((it, tensor_mass(T, W)))
        tensors[u] = T
        if not moved:
            terminated = "pure_flag"
            break
        if trace[-1][1] <= mass_tol:
            terminated = "mass_below_tol"
            break
        if passes >= max_passes and auto_cap:
            prev = trace[-1 - len(u)][1]
            if prev <= 0.0 or trace[-1][1] > 0.9999 * prev:
                break  # stagnated: report max_iters

    violations = [
        (t, trace[t + 1][1])
        for t in range(1, len(trace) - 1)
        if trace[t + 1][1] > 0.5 * trace[t - 1][1] + HALVING_SLACK * m0
    ]
    report = ConvergenceReport(u, trace, terminated, passes, violations)
    if terminated == "max_iters":
        raise NonConvergenceError(
            f"tensor {u}: mass {trace[-1][1]:.3e} above tolerance "
            f"{tol_eff:.3e} after {passes} passes",
            report,
        )
    return report


def _working_tensors(model: AdditiveModel) -> dict[Subset, np.ndarray]:
    return {u: np.array(e.values, dtype=float) for u, e in model.effects.items()}


def _rebuild(model: AdditiveModel, tensors: dict[Subset, np.ndarray]) -> AdditiveModel:
    effects = {u: EffectTensor(u, v) for u, v in tensors.items()}
    return AdditiveModel(model.bins, effects)


def purify_tensor(model: AdditiveModel, u, w: WeightDensity, tol: float = 1e-12,
                  max_passes=None, strict: bool = False):
    """Purify the single tensor ``u``; returns (modified model, report)."""
    u = tuple(u)
    if u not in model.effects:
        raise DomainError(f"model has no effect for subset {u}")
    tensors = _working_tensors(model)
    report = _purify_subset(tensors, w, u, tol, max_passes, strict)
    return _rebuild(model, tensors), report


def _required_subsets(model: AdditiveModel) -> set[Subset]:
    out: set[Subset] = set()
    for u in model.effects:
        for r in range(len(u) + 1):
            out.update(itertools.combinations(u, r))
    return out


def purify_model(model: AdditiveModel, w: WeightDensity, tol: float = 1e-12,
                 max_passes=None, strict: bool = False):
    """Purify every tensor, highest order first; returns (model, reports).

    Subsets of equal order are processed in lexicographic order.  Deposits
    create missing lower-order tensors, which are then purified in turn; all
    moved mass ends in the intercept.
    """
    missing = [u for u in _required_subsets(model) if not w.covers(u)]
    if missing:
        raise DomainError(f"weight density missing subsets: {sorted(missing)}")

    tensors = _working_tensors(model)
    reports: dict[Subset, ConvergenceReport] = {}
    max_order = max((len(u) for u in tensors), default=0)
    for order in range(max_order, 0, -1):
        for u in sorted(k for k in tensors if len(k) == order):
            reports[u] = _purify_subset(tensors, w, u, tol, max_passes, strict)
    return _rebuild(model, tensors), reports


def check_purity(model: AdditiveModel, w: WeightDensity, tol: float = 1e-10) -> PurityReport:
    """Report the worst absolute weighted slice mean of every non-intercept tensor."""
    tensors = []
    for u in sorted((k for k in model.effects if k), key=lambda k: (len(k), k)):
        T = model.effects[u].values
        W = w.table(u)
        if W.shape != T.shape:
            raise DomainError(f"weights for {u} have shape {W.shape}, tensor {T.shape}")
        worst = 0.0
        for axis in range(len(u)):
            _, _, ok, means = _axis_stats(T, W, axis)
            if np.any(ok):
                worst = max(worst, float(np.abs(np.asarray(means)[ok]).max()))
        tensors.append(TensorPurity(u, worst, worst <= tol))
    return PurityReport(tol, tensors)
