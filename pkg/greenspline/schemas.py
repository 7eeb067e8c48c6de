"""
Data models for greenspline using Pydantic v2.
Covers kernel constraints, series specifications, data sets, spline fits,
Gaussian vectors and the command-line configuration.
"""

import math
from typing import Dict, List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


# ============================================================================
# Kernel Constraint Schemas
# ============================================================================

ConstraintKind = Literal["value", "derivative", "integral", "antisymmetry", "periodic"]


class Constraint(BaseModel):
    """A subspace condition that G(s, .) must satisfy for every s."""
    model_config = ConfigDict(frozen=True)

    kind: ConstraintKind
    at: Optional[float] = None

    @property
    def label(self) -> str:
        if self.kind == "value":
            return f"G(s,{self.at:g})=0"
        if self.kind == "derivative":
            return f"dG(s,{self.at:g})/dt=0"
        if self.kind == "integral":
            return "int G(s,t)dt=0"
        if self.kind == "antisymmetry":
            return "G(s,t)=-G(s,1-t)"
        return "G(s,0)=G(s,1)"


class ConstraintReport(BaseModel):
    """Per-constraint residuals of one kernel over a probe set."""
    kernel: str
    probe_count: int
    residuals: Dict[str, float] = Field(default_factory=dict)
    max_residual: float = 0.0

    @model_validator(mode="after")
    def _check_residuals(self) -> "ConstraintReport":
        if any(r < 0 or not math.isfinite(r) for r in self.residuals.values()):
            raise ValueError("residuals must be finite and non-negative")
        return self


# ============================================================================
# Series Schemas
# ============================================================================

SeriesMode = Literal[
    "unconstrained", "dirichlet_basis", "sine_only", "cosine_only",
    "zero_indices", "linear_constraint",
]


class SeriesSpec(BaseModel):
    """Truncated constrained Fourier representation of a Green's function."""
    model_config = ConfigDict(frozen=True)

    N: int = Field(default=10_000, ge=1)
    mode: SeriesMode = "unconstrained"
    zero_indices: List[int] = Field(default_factory=list)
    weights: List[float] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_mode_fields(self) -> "SeriesSpec":
        if any(i < 1 or i > self.N for i in self.zero_indices):
            raise ValueError(f"zero_indices must lie in 1..{self.N}")
        if len(self.weights) > self.N:
            raise ValueError(f"at most N={self.N} constraint weights allowed")
        if any(not math.isfinite(w) for w in self.weights):
            raise ValueError("constraint weights must be finite")
        return self


class FourierCoeffs(BaseModel):
    """a0, a_i = 2 int f cos(2 i pi t), b_i = 2 int f sin(2 i pi t)."""
    a0: float
    a: List[float]
    b: List[float]

    @model_validator(mode="after")
    def _check_finite(self) -> "FourierCoeffs":
        if len(self.a) != len(self.b):
            raise ValueError("a and b must have the same length")
        if not all(math.isfinite(v) for v in [self.a0, *self.a, *self.b]):
            raise ValueError("Fourier coefficients must be finite")
        return self


# ============================================================================
# Spline Schemas
# ============================================================================

class DataSet(BaseModel):
    """Observation pairs (t_i, y_i) with strictly increasing times in [0, 1]."""
    model_config = ConfigDict(frozen=True)

    times: List[float]
    values: List[float]

    @model_validator(mode="after")
    def _check_pairs(self) -> "DataSet":
        if len(self.times) != len(self.values):
            raise ValueError(
                f"times and values differ in length ({len(self.times)} vs {len(self.values)})"
            )
        if len(self.times) == 0:
            raise ValueError("a data set needs at least one observation")
        if not all(math.isfinite(v) for v in [*self.times, *self.values]):
            raise ValueError("times and values must be finite")
        if min(self.times) < 0.0 or max(self.times) > 1.0:
            raise ValueError("observation times must lie in [0, 1]")
        for i, (a, b) in enumerate(zip(self.times[:-1], self.times[1:])):
            if b <= a:
                kind = "duplicate" if b == a else "unsorted"
                raise ValueError(f"{kind} observation time at index {i + 1}: {b}")
        return self

    @property
    def size(self) -> int:
        return len(self.times)


class SplineFit(BaseModel):
    """Representer coefficients c solving (G + lambda I) c = y."""
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    kernel: str
    lam: float = Field(alias="lambda", ge=0.0)
    times: List[float]
    coefficients: List[float]
    jitter_applied: float = 0.0
    pinned_times: List[float] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_lengths(self) -> "SplineFit":
        if len(self.times) != len(self.coefficients):
            raise ValueError("times and coefficients differ in length")
        return self


# ============================================================================
# Gaussian Process Schemas
# ============================================================================

class GpPrior(BaseModel):
    """Zero-mean prior with covariance scale * G, scale = sigma^2 tau^2."""
    kernel: str
    scale: float = Field(default=1.0, gt=0.0)


class GaussianVector(BaseModel):
    """Mean and covariance of a process over a finite grid."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    grid: np.ndarray
    mean: np.ndarray
    covariance: np.ndarray
    pinned: Dict[float, float] = Field(default_factory=dict)

    @field_validator("grid", "mean", mode="before")
    @classmethod
    def _as_vector(cls, v):
        return np.asarray(v, dtype=float).reshape(-1)

    @field_validator("covariance", mode="before")
    @classmethod
    def _as_matrix(cls, v):
        arr = np.asarray(v, dtype=float)
        if arr.size == 0:
            return arr.reshape(0, 0)
        return arr

    @model_validator(mode="after")
    def _check_shapes(self) -> "GaussianVector":
        n = self.grid.shape[0]
        if self.mean.shape != (n,) or self.covariance.shape != (n, n):
            raise ValueError(
                f"dimension mismatch: grid {n}, mean {self.mean.shape}, covariance {self.covariance.shape}"
            )
        if n:
            if np.max(np.abs(self.covariance - self.covariance.T)) > 1e-12:
                raise ValueError("covariance must be symmetric")
            if np.min(np.diag(self.covariance)) < -1e-12:
                raise ValueError("covariance diagonal must be non-negative")
        return self

    @property
    def dimension(self) -> int:
        return int(self.grid.shape[0])


# ============================================================================
# Command-Line Configuration
# ============================================================================

def parse_grid(spec: str) -> np.ndarray:
    """
    Parse a `start:stop:step` grid.

    Stop is included when (stop - start) / step is integral within 1e-9.
    """
    parts = spec.split(":")
    if len(parts) != 3:
        raise ValueError(f"grid spec must be start:stop:step, got {spec!r}")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError:
        raise ValueError(f"grid spec has non-numeric parts: {spec!r}")
    if step <= 0 or stop < start:
        raise ValueError(f"grid spec needs step > 0 and stop >= start, got {spec!r}")
    if start < 0.0 or stop > 1.0:
        raise ValueError(f"grid spec must lie within [0, 1], got {spec!r}")

    ratio = (stop - start) / step
    count = int(math.floor(ratio + 1e-9))
    grid = start + step * np.arange(count + 1)
    if abs(ratio - round(ratio)) <= 1e-9:
        grid[-1] = stop
    return np.round(grid, 12)


Subcommand = Literal["list-kernels", "eval", "gram", "fit", "map", "sample", "verify"]


class Config(BaseModel):
    """Validated settings of one command-line invocation."""
    model_config = ConfigDict(populate_by_name=True)

    subcommand: Subcommand
    kernel: Optional[str] = None
    s: Optional[float] = None
    t: Optional[float] = None
    lam: Optional[float] = Field(default=None, alias="lambda")
    tau_sq: Optional[float] = None
    input: Optional[str] = None
    out: Optional[str] = None
    grid: str = "0:1:0.05"
    seed: Optional[int] = None
    N: int = Field(default=10_000, ge=1)
    tol: Optional[float] = Field(default=None, gt=0.0)
    format: Literal["text", "json"] = "text"
    count: int = 1
    scale: float = Field(default=1.0, gt=0.0)
    suite: Literal["all", "kernels", "series", "spline", "gp"] = "all"
    sampler: Literal["cholesky", "increments"] = "cholesky"
    panels: int = Field(default=2048, ge=2)

    @field_validator("grid")
    @classmethod
    def _check_grid(cls, v: str) -> str:
        parse_grid(v)
        return v

    @model_validator(mode="after")
    def _check_fitting_params(self) -> "Config":
        if self.subcommand not in ("list-kernels", "verify") and not self.kernel:
            raise ValueError(f"{self.subcommand} needs --kernel")
        if self.subcommand == "eval" and (self.s is None or self.t is None):
            raise ValueError("eval needs both s and t")
        if self.subcommand in ("fit", "map") and not self.input:
            raise ValueError(f"{self.subcommand} needs an input CSV")
        if self.subcommand == "fit":
            if self.lam is None or self.tau_sq is not None:
                raise ValueError("fit takes exactly one smoothing parameter: --lambda")
        if self.subcommand == "map":
            if self.tau_sq is None or self.lam is not None:
                raise ValueError("map takes exactly one smoothing parameter: --tau-sq")
        if self.subcommand == "sample" and self.count < 1:
            raise ValueError(f"--n must be a positive integer, got {self.count}")
        return self

    @property
    def grid_points(self) -> np.ndarray:
        return parse_grid(self.grid)
