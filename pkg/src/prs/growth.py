"""Root growth through the nutrient grid, and the two features it yields.

Starting from the radicle, the root spreads day by day: every occupied
cell offers its free 4-neighbors as division candidates, the candidates
are ranked globally by nutrient value, and the best few (up to the daily
division limit) are occupied. Each newly occupied cell with nutrient
value v contributes v/(1+|v|) + 0.49 to the absorption total (0 when
v = 0). The run yields NF (total absorption) and RF (area of the convex
polygon spanned by the occupied cell centers).

Cell coordinates in configs and logs are 1-based (row, col) with row 1
at the surface; the occupancy array uses normal 0-based indexing.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .soil import SOIL_DEPTH, SOIL_WIDTH, NutrientMatrix

# Upper-center seed cell: surface row, center column of a 12-wide grid.
DEFAULT_RADICLE = ((1, 6),)

_NEIGHBOR_STEPS = ((1, 0), (-1, 0), (0, 1), (0, -1))


@dataclass(frozen=True)
class GrowthConfig:
    """Growth parameters: days until the first leaf, daily division limit,
    and the radicle seed cells (1-based)."""

    days: int = 10
    division_limit: int = 2
    radicle: tuple[tuple[int, int], ...] = DEFAULT_RADICLE
    occupy_zero: bool = True  # zero-nutrient cells may still be occupied
    rows: int = SOIL_DEPTH
    cols: int = SOIL_WIDTH

    def __post_init__(self):
        if self.days < 0:
            raise ValueError(f"days must be >= 0, got {self.days}")
        if self.division_limit < 1:
            raise ValueError(f"division_limit must be >= 1, got {self.division_limit}")
        radicle = tuple((int(r), int(c)) for r, c in self.radicle)
        if not radicle:
            raise ValueError("radicle must contain at least one cell")
        for r, c in radicle:
            if not (1 <= r <= self.rows and 1 <= c <= self.cols):
                raise ValueError(
                    f"radicle cell ({r}, {c}) outside the "
                    f"{self.rows}x{self.cols} grid"
                )
        object.__setattr__(self, "radicle", radicle)


@dataclass
class RootState:
    """Occupancy grid plus accumulated absorption and the per-day log."""

    occupancy: np.ndarray  # (rows, cols) of 0/1
    absorbed: float
    day_log: list[list[tuple[int, int]]] = field(default_factory=list)

    def occupied_cells(self) -> list[tuple[int, int]]:
        """Occupied (row, col) cells, 1-based, in row-major order."""
        return [(int(r) + 1, int(c) + 1) for r, c in np.argwhere(self.occupancy == 1)]


@dataclass(frozen=True)
class PRSFeaturePair:
    """The two growth features: NF (absorption) and RF (polygon area)."""

    nf: float
    rf: float


def absorption_rate(value: float) -> float:
    """Per-cell absorption: 0 for barren cells, else v/(1+|v|) + 0.49."""
    if value == 0.0:
        return 0.0
    return value / (1.0 + abs(value)) + 0.49


def grow(nutrients: NutrientMatrix, config: GrowthConfig = GrowthConfig()) -> RootState:
    """Run the daily division loop; deterministic for identical inputs.

    Candidate ties (equal nutrient value) break by (row, col) ascending.
    Stops early when no division candidates remain.
    """
    grid = nutrients.grid
    if grid.shape != (config.rows, config.cols):
        raise ValueError(
            f"nutrient grid is {grid.shape}, config expects "
            f"{(config.rows, config.cols)}"
        )
    occupancy = np.zeros((config.rows, config.cols), dtype=np.int64)
    occupied = []
    for r, c in config.radicle:
        if not occupancy[r - 1, c - 1]:
            occupancy[r - 1, c - 1] = 1
            occupied.append((r - 1, c - 1))

    absorbed = 0.0
    day_log: list[list[tuple[int, int]]] = []
    for _ in range(config.days):
        candidates: dict[tuple[int, int], float] = {}
        for i, j in occupied:
            for di, dj in _NEIGHBOR_STEPS:
                ni, nj = i + di, j + dj
                if not (0 <= ni < config.rows and 0 <= nj < config.cols):
                    continue
                if occupancy[ni, nj] or (ni, nj) in candidates:
                    continue
                value = float(grid[ni, nj])
                if value == 0.0 and not config.occupy_zero:
                    continue
                candidates[(ni, nj)] = value
        if not candidates:
            break
        ranked = sorted(candidates.items(), key=lambda kv: (-kv[1], kv[0]))
        new_cells = []
        for (ni, nj), value in ranked[: config.division_limit]:
            occupancy[ni, nj] = 1
            occupied.append((ni, nj))
            absorbed += absorption_rate(value)
            new_cells.append((ni + 1, nj + 1))
        day_log.append(new_cells)

    return RootState(occupancy=occupancy, absorbed=absorbed, day_log=day_log)


def polygon_area(vertices) -> float:
    """Shoelace area of a closed polygon given its vertices in traversal
    order; orientation does not matter. Fewer than 3 vertices -> 0."""
    pts = np.asarray(vertices, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[0] < 3:
        return 0.0
    p = pts[:, 0]
    q = pts[:, 1]
    return 0.5 * abs(float(np.sum(p * np.roll(q, -1) - np.roll(p, -1) * q)))


def convex_hull(points) -> list[tuple[float, float]]:
    """Andrew's monotone chain; returns hull vertices in CCW order.

    Collinear boundary points are dropped, so a fully collinear input
    yields just its two extreme points.
    """
    pts = sorted({(float(x), float(y)) for x, y in points})
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def extract_prs(state: RootState) -> PRSFeaturePair:
    """NF = accumulated absorption; RF = convex-hull area of the root.

    Cell (row, col) maps to the plane point (col, row); the hull of fewer
    than 3 non-collinear cells has area 0.
    """
    points = [(c, r) for r, c in state.occupied_cells()]
    hull = convex_hull(points)
    return PRSFeaturePair(nf=state.absorbed, rf=polygon_area(hull))
