"""Labeled signal datasets: loading, writing, and synthetic generation.

A dataset on disk is a manifest CSV plus one plain-text signal file per
segment (one amplitude per line, scientific notation accepted):

    # sampling_rate=1000.0
    id,label,path
    p000,P,p000.txt
    ...

Paths are resolved relative to the manifest's directory. Exactly two
distinct labels must be present. Downstream code maps the two labels to
(C1, C2) by lexicographic order, so ``class_names`` is always sorted.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DatasetError

MIN_SEGMENT_LENGTH = 16


@dataclass(frozen=True)
class SignalSegment:
    """One pre-segmented 1D sample sequence with its binary class label."""

    id: str
    label: str
    sampling_rate: float
    samples: np.ndarray

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 1:
            raise DatasetError(f"segment {self.id!r}: samples must be 1D")
        if samples.size < MIN_SEGMENT_LENGTH:
            raise DatasetError(
                f"segment {self.id!r}: segment too short "
                f"({samples.size} < {MIN_SEGMENT_LENGTH} samples)"
            )
        if not np.all(np.isfinite(samples)):
            raise DatasetError(f"segment {self.id!r}: non-finite amplitude")
        if not (self.sampling_rate > 0):
            raise DatasetError(f"segment {self.id!r}: sampling_rate must be > 0")
        samples.flags.writeable = False
        object.__setattr__(self, "samples", samples)

    def __len__(self) -> int:
        return self.samples.size


@dataclass(frozen=True)
class LabeledDataset:
    """Ordered collection of segments carrying exactly two class labels."""

    name: str
    segments: tuple[SignalSegment, ...]

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(self.segments))
        labels = [s.label for s in self.segments]
        distinct = sorted(set(labels))
        if len(distinct) != 2:
            raise DatasetError(
                f"dataset {self.name!r}: expected binary classes, "
                f"got {len(distinct)} distinct label(s): {distinct}"
            )
        for lab in distinct:
            if labels.count(lab) < 2:
                raise DatasetError(
                    f"dataset {self.name!r}: class {lab!r} has fewer than 2 segments"
                )
        ids = [s.id for s in self.segments]
        if len(set(ids)) != len(ids):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise DatasetError(f"dataset {self.name!r}: duplicate segment ids {dupes}")

    @property
    def class_names(self) -> tuple[str, str]:
        """The two labels in lexicographic order: (C1, C2)."""
        c1, c2 = sorted({s.label for s in self.segments})
        return c1, c2

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(s.label for s in self.segments)

    def __len__(self) -> int:
        return len(self.segments)

    def segment_by_id(self, segment_id: str) -> SignalSegment:
        for seg in self.segments:
            if seg.id == segment_id:
                return seg
        raise DatasetError(f"dataset {self.name!r}: no segment with id {segment_id!r}")


def _read_signal_file(path: Path, segment_id: str) -> np.ndarray:
    if not path.exists():
        raise DatasetError(f"segment {segment_id!r}: missing file {path}")
    values = []
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text:
                continue
            try:
                values.append(float(text))
            except ValueError:
                raise DatasetError(
                    f"{path}:{lineno}: non-numeric sample {text!r}"
                ) from None
    return np.asarray(values, dtype=np.float64)


def load_dataset(manifest_path: str | Path, name: str | None = None) -> LabeledDataset:
    """Load a dataset from a manifest CSV (see module docstring for format)."""
    manifest_path = Path(manifest_path)
    if not manifest_path.exists():
        raise DatasetError(f"missing manifest file {manifest_path}")

    sampling_rate = None
    rows = []
    with manifest_path.open("r", encoding="utf-8", newline="") as fh:
        data_lines = []
        for line in fh:
            stripped = line.strip()
            if stripped.startswith("#"):
                body = stripped.lstrip("#").strip()
                if body.startswith("sampling_rate="):
                    try:
                        sampling_rate = float(body.split("=", 1)[1])
                    except ValueError:
                        raise DatasetError(
                            f"{manifest_path}: bad sampling_rate comment {stripped!r}"
                        ) from None
                continue
            if stripped:
                data_lines.append(line)
        reader = csv.DictReader(data_lines)
        if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != [
            "id",
            "label",
            "path",
        ]:
            raise DatasetError(
                f"{manifest_path}: manifest header must be 'id,label,path', "
                f"got {reader.fieldnames}"
            )
        rows = list(reader)

    if sampling_rate is None:
        raise DatasetError(
            f"{manifest_path}: missing '# sampling_rate=<Hz>' comment line"
        )
    if not rows:
        raise DatasetError(f"{manifest_path}: manifest lists no segments")

    segments = []
    for rownum, row in enumerate(rows, start=1):
        seg_id = (row["id"] or "").strip()
        label = (row["label"] or "").strip()
        rel = (row["path"] or "").strip()
        if not seg_id or not label or not rel:
            raise DatasetError(f"{manifest_path}: row {rownum}: empty id/label/path")
        sig_path = manifest_path.parent / rel
        try:
            samples = _read_signal_file(sig_path, seg_id)
            segments.append(
                SignalSegment(
                    id=seg_id, label=label, sampling_rate=sampling_rate, samples=samples
                )
            )
        except DatasetError as err:
            raise DatasetError(f"{manifest_path}: row {rownum}: {err}") from None

    return LabeledDataset(name=name or manifest_path.stem, segments=tuple(segments))


def write_dataset(dataset: LabeledDataset, out_dir: str | Path) -> Path:
    """Write a dataset to disk in manifest format; returns the manifest path.

    All segments must share one sampling rate (the format stores it once).
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rates = {s.sampling_rate for s in dataset.segments}
    if len(rates) != 1:
        raise DatasetError(
            f"dataset {dataset.name!r}: manifest format stores one sampling rate, "
            f"dataset has {sorted(rates)}"
        )
    (rate,) = rates

    lines = [f"# sampling_rate={float(rate)!r}", "id,label,path"]
    for seg in dataset.segments:
        fname = f"{seg.id}.txt"
        with (out_dir / fname).open("w", encoding="utf-8") as fh:
            for v in seg.samples:
                fh.write(f"{float(v)!r}\n")
        lines.append(f"{seg.id},{seg.label},{fname}")

    manifest = out_dir / "manifest.csv"
    manifest.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return manifest


def generate_synthetic(n_per_class: int, length: int, seed: int) -> LabeledDataset:
    """Deterministic two-class toy dataset.

    Class "P": unit-variance Gaussian noise plus a 10 Hz sinusoid of
    amplitude 1.5. Class "N": unit-variance Gaussian noise scaled by 2.
    Sampling rate 1000 Hz. The classes are separable by variance- and
    frequency-sensitive features, so classifiers should score highly.
    """
    if n_per_class < 2:
        raise DatasetError(f"n_per_class must be >= 2, got {n_per_class}")
    if length < MIN_SEGMENT_LENGTH:
        raise DatasetError(
            f"length must be >= {MIN_SEGMENT_LENGTH}, got {length}"
        )

    rng = np.random.default_rng(seed)
    rate = 1000.0
    t = np.arange(length) / rate
    tone = 1.5 * np.sin(2.0 * np.pi * 10.0 * t)

    width = len(str(max(n_per_class - 1, 1)))
    segments = []
    for i in range(n_per_class):
        samples = rng.standard_normal(length) + tone
        segments.append(
            SignalSegment(
                id=f"P{i:0{width}d}", label="P", sampling_rate=rate, samples=samples
            )
        )
    for i in range(n_per_class):
        samples = 2.0 * rng.standard_normal(length)
        segments.append(
            SignalSegment(
                id=f"N{i:0{width}d}", label="N", sampling_rate=rate, samples=samples
            )
        )
    return LabeledDataset(name=f"synthetic-seed{seed}", segments=tuple(segments))
