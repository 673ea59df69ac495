"""End-to-end wiring: segments -> base features -> soil -> root features.

The stateful part of the chain (normalization bounds, information-gain
ranking, column order, soil binning bounds) is fitted once on training
rows and captured in PrepArtifacts; any row, training or held-out, can
then be pushed through the same frozen transform. Held-out rows may
land outside the fitted bounds, which the soil binning clamps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .base_features import FEATURE_NAMES, ThresholdConfig, compute_base_features
from .dataset import LabeledDataset
from .feature_prep import (
    KMEANS_RESTARTS,
    FeatureMatrix,
    apply_bounds,
    column_bounds,
    minmax_normalize,
    rank_features,
    sort_center_out,
)
from .growth import GrowthConfig, PRSFeaturePair, extract_prs, grow
from .soil import DiscreteSoil, NutrientMatrix, SoilConfig, build_discrete_soil, convolve_soil
from .spectral import MEDIAN_PSD, compute_spectral

PRS_NAMES = ("NF", "RF")
SPECTRAL_NAMES = ("MaxPSD", "MedPSD")


@dataclass(frozen=True)
class PrepArtifacts:
    """Frozen train-fold state for the feature transform.

    feature_bounds  per-column (min, max) of the raw base features
    gains           information gain per raw column, same order as names
    order           column permutation applied after normalization
    soil_bounds     per-column (min, max) of the sorted normalized
                    training matrix, used for soil binning
    """

    feature_names: tuple[str, ...]
    feature_bounds: np.ndarray
    gains: np.ndarray
    order: np.ndarray
    soil_bounds: np.ndarray

    def __post_init__(self):
        n = len(self.feature_names)
        if self.feature_bounds.shape != (n, 2) or self.soil_bounds.shape != (n, 2):
            raise ValueError("bounds arrays must be shaped (n_features, 2)")
        if sorted(self.order.tolist()) != list(range(n)):
            raise ValueError("order must be a permutation of the columns")


def fit_prep(
    base_values: np.ndarray,
    labels,
    seed: int,
    restarts: int = KMEANS_RESTARTS,
) -> PrepArtifacts:
    """Fit normalization, ranking, and ordering on training rows."""
    matrix = FeatureMatrix(
        values=np.asarray(base_values, dtype=np.float64),
        names=tuple(FEATURE_NAMES),
        labels=tuple(str(v) for v in labels),
    )
    norm = minmax_normalize(matrix)
    gains = rank_features(norm, seed=seed, restarts=restarts)
    sorted_matrix = sort_center_out(norm, gains)
    return PrepArtifacts(
        feature_names=tuple(FEATURE_NAMES),
        feature_bounds=norm.bounds,
        gains=gains,
        order=np.asarray(sorted_matrix.order, dtype=np.int64),
        soil_bounds=column_bounds(sorted_matrix.values),
    )


def transform_rows(base_values: np.ndarray, artifacts: PrepArtifacts) -> np.ndarray:
    """Normalize raw base rows with fitted bounds, then reorder columns."""
    values = np.asarray(base_values, dtype=np.float64)
    if values.ndim == 1:
        values = values[None, :]
    return apply_bounds(values, artifacts.feature_bounds)[:, artifacts.order]


def soil_for_row(
    base_row: np.ndarray,
    artifacts: PrepArtifacts,
    config: SoilConfig = SoilConfig(),
) -> DiscreteSoil:
    """Discrete soil grid for one raw base-feature row."""
    sorted_row = transform_rows(base_row, artifacts)[0]
    return build_discrete_soil(sorted_row, artifacts.soil_bounds, config)


def nutrients_for_row(
    base_row: np.ndarray,
    artifacts: PrepArtifacts,
    config: SoilConfig = SoilConfig(),
) -> NutrientMatrix:
    return convolve_soil(soil_for_row(base_row, artifacts, config))


def prs_pair_for_row(
    base_row: np.ndarray,
    artifacts: PrepArtifacts,
    soil_config: SoilConfig = SoilConfig(),
    growth_config: GrowthConfig = GrowthConfig(),
) -> PRSFeaturePair:
    """NF and RF for one raw base-feature row."""
    nutrients = nutrients_for_row(base_row, artifacts, soil_config)
    return extract_prs(grow(nutrients, growth_config))


def prs_features(
    base_values: np.ndarray,
    artifacts: PrepArtifacts,
    soil_config: SoilConfig = SoilConfig(),
    growth_config: GrowthConfig = GrowthConfig(),
) -> np.ndarray:
    """(m, 2) array of [NF, RF] rows for a raw base-feature matrix."""
    values = np.asarray(base_values, dtype=np.float64)
    out = np.empty((values.shape[0], 2))
    for idx in range(values.shape[0]):
        pair = prs_pair_for_row(values[idx], artifacts, soil_config, growth_config)
        out[idx, 0] = pair.nf
        out[idx, 1] = pair.rf
    return out


def extract_base_matrix(
    dataset: LabeledDataset,
    thresholds: ThresholdConfig = ThresholdConfig(),
    centered_var: bool = False,
) -> FeatureMatrix:
    """Raw 12-column base-feature matrix, one row per segment."""
    rows = [
        compute_base_features(seg, thresholds, centered_var).values
        for seg in dataset.segments
    ]
    return FeatureMatrix(
        values=np.vstack(rows),
        names=tuple(FEATURE_NAMES),
        labels=dataset.labels,
    )


def extract_spectral_matrix(
    dataset: LabeledDataset, median_mode: str = MEDIAN_PSD
) -> np.ndarray:
    """(m, 2) array of [MaxPSD, MedPSD], one row per segment."""
    out = np.empty((len(dataset.segments), 2))
    for idx, seg in enumerate(dataset.segments):
        pair = compute_spectral(seg, median_mode)
        out[idx, 0] = pair.max_psd
        out[idx, 1] = pair.med_psd
    return out
