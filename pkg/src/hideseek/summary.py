"""Length-invariant record embeddings.

A summary vector packs, per temporal feature, the six statistics
{mean, std, first, last, min, max} over observed entries (population std;
all six are zero when nothing was observed), followed by the static values
with binary/categorical statics one-hot encoded. Its length depends only on
the schema, never on a record's length, so seekers and the quality learners
can compare records of different durations.
"""

from __future__ import annotations

import numpy as np

from hideseek.data import Dataset, FeatureSchema, Record

STATS_PER_FEATURE = 6


def static_design_length(schema: FeatureSchema) -> int:
    return sum(1 if f.is_continuous else f.levels for f in schema.static)


def summary_length(schema: FeatureSchema) -> int:
    return STATS_PER_FEATURE * schema.n_temporal + static_design_length(schema)


def static_design(schema: FeatureSchema, static_values: np.ndarray) -> np.ndarray:
    """Static block of the embedding: continuous as-is, categoricals one-hot."""
    out = np.zeros(static_design_length(schema))
    pos = 0
    for value, feat in zip(static_values, schema.static):
        if feat.is_continuous:
            out[pos] = value
            pos += 1
        else:
            out[pos + int(value)] = 1.0
            pos += feat.levels
    return out


def summarize_record(record: Record, schema: FeatureSchema) -> np.ndarray:
    """Embed one record. Pure: identical inputs give bit-identical vectors."""
    d = schema.n_temporal
    stats = np.zeros(STATS_PER_FEATURE * d)
    values, mask = record.temporal_values, record.mask
    for j in range(d):
        observed = values[mask[:, j], j]
        if observed.size == 0:
            continue
        base = STATS_PER_FEATURE * j
        mean = observed.mean()
        stats[base + 0] = mean
        stats[base + 1] = np.sqrt(np.mean((observed - mean) ** 2))
        stats[base + 2] = observed[0]
        stats[base + 3] = observed[-1]
        stats[base + 4] = observed.min()
        stats[base + 5] = observed.max()
    return np.concatenate([stats, static_design(schema, record.static_values)])


def summarize_dataset(dataset: Dataset) -> np.ndarray:
    """Stack of summary vectors, one row per record in dataset order."""
    out = np.empty((len(dataset), summary_length(dataset.schema)))
    for i, r in enumerate(dataset.records):
        out[i] = summarize_record(r, dataset.schema)
    return out


def standardize_by(reference: np.ndarray, *matrices: np.ndarray) -> tuple[np.ndarray, ...]:
    """Standardize columns by `reference`'s mean/std, dropping zero-std columns.

    Every input matrix (reference included, if passed again) is projected onto
    the kept columns with the reference statistics applied.
    """
    mean = reference.mean(axis=0)
    std = reference.std(axis=0)
    keep = std > 0.0
    return tuple((m[:, keep] - mean[keep]) / std[keep] for m in matrices)
