"""Classical perceptron domain model: labeled data, hyperplanes, margins,
version-space membership, Gaussian candidate sampling and planted datasets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True, eq=False)
class DataPoint:
    x: np.ndarray
    y: int

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.float64)
        if x.ndim != 1 or x.size < 1:
            raise ValueError("x must be a nonempty vector")
        if not np.all(np.isfinite(x)):
            raise ValueError("x must be finite")
        if self.y not in (+1, -1):
            raise ValueError(f"label must be +1 or -1, got {self.y}")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", int(self.y))


@dataclass(frozen=True, eq=False)
class Hyperplane:
    w: np.ndarray
    b: float

    def __post_init__(self):
        w = np.asarray(self.w, dtype=np.float64)
        b = float(self.b)
        if w.ndim != 1 or w.size < 1:
            raise ValueError("w must be a nonempty vector")
        if not (np.all(np.isfinite(w)) and math.isfinite(b)):
            raise ValueError("hyperplane entries must be finite")
        if not (np.any(w != 0.0) or b != 0.0):
            raise ValueError("(w, b) must not be the zero vector")
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "b", b)

    @property
    def dim(self) -> int:
        return self.w.size


@dataclass(eq=False)
class Dataset:
    points: list[DataPoint]
    claimed_margin: float
    _arrays: tuple | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if not self.points:
            raise ValueError("dataset needs at least one point")
        dims = {p.x.size for p in self.points}
        if len(dims) != 1:
            raise ValueError(f"points have mixed dimensions: {sorted(dims)}")
        if not (self.claimed_margin > 0):
            raise ValueError("claimed_margin must be positive")

    @property
    def n_points(self) -> int:
        return len(self.points)

    @property
    def dim(self) -> int:
        return self.points[0].x.size

    def as_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Stacked (X, y) with X of shape (N, M) and y of shape (N,)."""
        if self._arrays is None:
            X = np.stack([p.x for p in self.points])
            y = np.array([p.y for p in self.points], dtype=np.int64)
            self._arrays = (X, y)
        return self._arrays


def classify(p: Hyperplane, x) -> int:
    """sgn(w.x + b) with the boundary mapped to +1."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != p.w.shape:
        raise ValueError(f"dimension mismatch: plane {p.w.shape}, point {x.shape}")
    return +1 if float(p.w @ x) + p.b >= 0.0 else -1


def correctly_classifies(p: Hyperplane, d: DataPoint) -> bool:
    """Strict condition (w.x + b) y > 0; boundary points never count."""
    if d.x.shape != p.w.shape:
        raise ValueError("dimension mismatch")
    return (float(p.w @ d.x) + p.b) * d.y > 0.0


def geometric_margin(data: Dataset, p: Hyperplane) -> float:
    """min_i y_i (w.x_i + b) / ||w||; positive iff p is in the version space."""
    wn = float(np.linalg.norm(p.w))
    if wn == 0.0:
        raise ValueError("zero weight vector has no geometric margin")
    X, y = data.as_arrays()
    if X.shape[1] != p.dim:
        raise ValueError("dimension mismatch")
    return float(np.min(y * (X @ p.w + p.b)) / wn)


def in_version_space(data: Dataset, p: Hyperplane) -> bool:
    """True iff p classifies every point strictly correctly."""
    X, y = data.as_arrays()
    if X.shape[1] != p.dim:
        raise ValueError("dimension mismatch")
    return bool(np.all(y * (X @ p.w + p.b) > 0.0))


def sample_hyperplanes(count: int, dim: int, rng_seed) -> list[Hyperplane]:
    """``count`` hyperplanes with i.i.d. standard normal entries in R^(dim+1),
    reproducible bit-exact from the seed."""
    if count < 1 or dim < 1:
        raise ValueError("count and dim must be >= 1")
    rng = np.random.default_rng(rng_seed)
    draws = rng.standard_normal((count, dim + 1))
    return [Hyperplane(row[:dim], float(row[dim])) for row in draws]


def required_sample_count(gamma: float, epsilon: float, c: float = 2.0) -> int:
    """K = ceil(c * ln(1/epsilon) / gamma), at least 1."""
    if not (0.0 < gamma <= 1.0):
        raise ValueError(f"gamma must be in (0, 1], got {gamma}")
    if not (0.0 < epsilon < 1.0):
        raise ValueError(f"epsilon must be in (0, 1), got {epsilon}")
    if c <= 0.0:
        raise ValueError("c must be positive")
    return max(1, math.ceil(c * math.log(1.0 / epsilon) / gamma))


def generate_planted_dataset(
    n_points: int,
    dim: int,
    gamma: float,
    rng_seed,
    cluster_radius_factor: float = 4.0,
    max_tries_per_point: int = 1000,
) -> tuple[Dataset, Hyperplane]:
    """Dataset labeled by a planted unit-norm hyperplane whose geometric
    margin is at least ``gamma``.

    Points form two clusters of radius ``cluster_radius_factor * gamma``
    centered on either side of the plane, then rejection-sampled so that no
    point lies within ``gamma`` of it.  Keeping the cluster spread
    proportional to gamma keeps the Gaussian version-space hit rate scaling
    linearly in gamma with an N-independent constant.
    """
    if n_points < 1 or dim < 1:
        raise ValueError("n_points and dim must be >= 1")
    if not (0.0 < gamma < 1.0):
        raise ValueError(f"gamma must be in (0, 1), got {gamma}")
    rng = np.random.default_rng(rng_seed)
    w = rng.standard_normal(dim)
    w /= np.linalg.norm(w)
    b = float(rng.uniform(-0.3, 0.3) * gamma)
    rho = cluster_radius_factor * gamma
    # Cluster centers sit at signed distance +-(gamma + rho) from the plane.
    centers = ((gamma + rho - b) * w, (-(gamma + rho) - b) * w)
    points = []
    for _ in range(n_points):
        for _ in range(max_tries_per_point):
            center = centers[int(rng.random() < 0.5)]
            direction = rng.standard_normal(dim)
            direction /= np.linalg.norm(direction)
            radius = rho * rng.random() ** (1.0 / dim)
            x = center + radius * direction
            margin = float(w @ x) + b
            if abs(margin) >= gamma:
                points.append(DataPoint(x, +1 if margin >= 0 else -1))
                break
        else:
            raise RuntimeError(
                f"rejection sampling exhausted after {max_tries_per_point} tries; "
                f"gamma={gamma} is infeasible for this geometry"
            )
    return Dataset(points, claimed_margin=gamma), Hyperplane(w, b)


def save_dataset(data: Dataset, path) -> None:
    """Text format: header ``N M gamma``, then one ``x_1 .. x_M y`` line per
    point.  Floats are written with repr precision so a round trip is
    bit-exact."""
    lines = [f"{data.n_points} {data.dim} {data.claimed_margin!r}"]
    for p in data.points:
        coords = " ".join(repr(float(v)) for v in p.x)
        lines.append(f"{coords} {p.y:d}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_dataset(path) -> Dataset:
    with open(path) as fh:
        tokens = fh.readline().split()
        if len(tokens) != 3:
            raise ValueError("dataset header must be 'N M gamma'")
        n, m, gamma = int(tokens[0]), int(tokens[1]), float(tokens[2])
        points = []
        for _ in range(n):
            parts = fh.readline().split()
            if len(parts) != m + 1:
                raise ValueError(f"expected {m} coordinates plus a label")
            x = np.array([float(v) for v in parts[:m]])
            points.append(DataPoint(x, int(parts[m])))
    return Dataset(points, claimed_margin=gamma)
