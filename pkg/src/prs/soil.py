"""Digital soil: binning one sorted feature row into a 15x12 nutrient grid.

Each sorted feature value is discretized into one of k=15 equal-width
bins and stacked as unit nutrients from the surface (row 1) downward, so
nutrient density is highest in the shallow layers and non-increasing
with depth. Two 3x3 kernel passes (zero padding 1, applied as
correlation) then redistribute the nutrients horizontally: the first
kernel pushes mass from the shallow side, the second from the deep side.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SOIL_DEPTH = 15  # k: number of bins = number of soil rows
SOIL_WIDTH = 12  # number of sorted feature columns

# Row 0 of each kernel acts on the cell above (shallower), row 2 below.
KERNEL_SHALLOW = 0.5 * np.array(
    [[1.0, 1.0, 1.0], [0.0, 1.0, 0.0], [0.5, 0.5, 0.5]]
)
KERNEL_DEEP = 0.5 * np.array(
    [[0.5, 0.5, 0.5], [0.0, 1.0, 0.0], [1.0, 1.0, 1.0]]
)
KERNEL_SHALLOW.flags.writeable = False
KERNEL_DEEP.flags.writeable = False

FILL_MODES = ("stacked", "onehot")


@dataclass(frozen=True)
class SoilConfig:
    """How a scalar feature value becomes a soil column.

    ``stacked`` (default) puts ones in rows 1..b; ``onehot`` puts a single
    one at row b. b is the value's equal-width bin index.
    """

    depth: int = SOIL_DEPTH
    fill_mode: str = "stacked"

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError(f"depth must be >= 1, got {self.depth}")
        if self.fill_mode not in FILL_MODES:
            raise ValueError(
                f"fill_mode must be one of {FILL_MODES}, got {self.fill_mode!r}"
            )


@dataclass(frozen=True)
class DiscreteSoil:
    """Binary 15x12 grid; row 1 (index 0) is the surface."""

    grid: np.ndarray

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=np.float64)
        if grid.ndim != 2:
            raise ValueError("soil grid must be 2D")
        grid.flags.writeable = False
        object.__setattr__(self, "grid", grid)


@dataclass(frozen=True)
class NutrientMatrix:
    """Non-negative 15x12 grid of reconstituted nutrient values."""

    grid: np.ndarray

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=np.float64)
        if grid.ndim != 2:
            raise ValueError("nutrient grid must be 2D")
        if not np.all(np.isfinite(grid)):
            raise ValueError("nutrient grid contains non-finite values")
        if (grid < 0).any():
            raise ValueError("nutrient grid contains negative values")
        grid.flags.writeable = False
        object.__setattr__(self, "grid", grid)


def bin_index(value: float, col_min: float, col_max: float, k: int = SOIL_DEPTH) -> int:
    """Equal-width bin of ``value`` in [col_min, col_max], clamped to [1, k].

    Degenerate bounds (col_max == col_min) give bin 1. Values outside the
    bounds (test samples scaled with train-fold bounds) clamp to the
    nearest end bin.
    """
    if col_max <= col_min:
        return 1
    delta = (col_max - col_min) / k
    b = int(np.floor((value - col_min) / delta)) + 1
    return min(max(b, 1), k)


def build_discrete_soil(
    sorted_row, bounds, config: SoilConfig = SoilConfig()
) -> DiscreteSoil:
    """Stack one sample's sorted feature row into a binary depth grid.

    ``bounds`` is an (n, 2) array of per-sorted-column (min, max) taken
    over the whole (training) dataset.
    """
    row = np.asarray(sorted_row, dtype=np.float64).ravel()
    bounds = np.asarray(bounds, dtype=np.float64)
    if bounds.shape != (row.size, 2):
        raise ValueError(f"expected bounds shape {(row.size, 2)}, got {bounds.shape}")
    grid = np.zeros((config.depth, row.size))
    for j, value in enumerate(row):
        b = bin_index(value, bounds[j, 0], bounds[j, 1], k=config.depth)
        if config.fill_mode == "stacked":
            grid[:b, j] = 1.0
        else:
            grid[b - 1, j] = 1.0
    return DiscreteSoil(grid=grid)


def correlate3(grid: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """One 3x3 stencil pass: zero-pad by 1, correlate (no kernel flip)."""
    grid = np.asarray(grid, dtype=np.float64)
    padded = np.zeros((grid.shape[0] + 2, grid.shape[1] + 2))
    padded[1:-1, 1:-1] = grid
    out = np.zeros_like(grid)
    for u in range(3):
        for v in range(3):
            if kernel[u, v] != 0.0:
                out += kernel[u, v] * padded[u : u + grid.shape[0], v : v + grid.shape[1]]
    return out


def convolve_grid(grid: np.ndarray, kernels=(KERNEL_SHALLOW, KERNEL_DEEP)) -> np.ndarray:
    """Sequential kernel passes over a real-valued grid."""
    out = np.asarray(grid, dtype=np.float64)
    for kernel in kernels:
        out = correlate3(out, kernel)
    return out


def convolve_soil(soil: DiscreteSoil) -> NutrientMatrix:
    """Reconstitute nutrients: shallow-side pass then deep-side pass."""
    return NutrientMatrix(grid=convolve_grid(soil.grid))
