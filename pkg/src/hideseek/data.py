"""Dataset model: feature schema, records, and membership ground truth.

All types are immutable after construction and validated eagerly, so the rest
of the engine can treat them as plain values. Masked temporal entries are
stored as 0.0 with mask False, which makes equality of observed content the
same as array equality.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class FormatError(ValueError):
    """A dataset directory or CSV file does not match the on-disk contract."""


class SchemaError(ValueError):
    """A value violates its schema; the message names the record and feature."""


_KINDS = ("continuous", "binary", "categorical")


@dataclass(frozen=True)
class Feature:
    """One feature: continuous, binary (levels {0,1}), or categorical(levels)."""

    name: str
    kind: str
    levels: int = 0

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise SchemaError(f"unknown feature kind {self.kind!r} for {self.name!r}")
        if self.kind == "binary":
            object.__setattr__(self, "levels", 2)
        elif self.kind == "categorical":
            if self.levels < 2:
                raise SchemaError(
                    f"categorical feature {self.name!r} needs >= 2 levels, got {self.levels}"
                )
        else:
            object.__setattr__(self, "levels", 0)

    @property
    def is_continuous(self) -> bool:
        return self.kind == "continuous"


def continuous(name: str) -> Feature:
    return Feature(name, "continuous")


def binary(name: str) -> Feature:
    return Feature(name, "binary")


def categorical(name: str, levels: int) -> Feature:
    return Feature(name, "categorical", levels)


@dataclass(frozen=True)
class FeatureSchema:
    """Static features, temporal features, and the binary label column."""

    static: tuple[Feature, ...]
    temporal: tuple[Feature, ...]
    label_name: str

    def __post_init__(self):
        object.__setattr__(self, "static", tuple(self.static))
        object.__setattr__(self, "temporal", tuple(self.temporal))
        names = [f.name for f in self.static] + [f.name for f in self.temporal]
        names.append(self.label_name)
        if len(set(names)) != len(names):
            raise SchemaError(f"feature names must be unique, got {sorted(names)}")

    @property
    def n_static(self) -> int:
        return len(self.static)

    @property
    def n_temporal(self) -> int:
        return len(self.temporal)

    @property
    def static_names(self) -> list[str]:
        return [f.name for f in self.static]

    @property
    def temporal_names(self) -> list[str]:
        return [f.name for f in self.temporal]

    def temporal_index(self, name: str) -> int:
        for i, f in enumerate(self.temporal):
            if f.name == name:
                return i
        raise SchemaError(f"unknown temporal feature {name!r}")


def _check_static_value(value: float, feat: Feature, record_id: int) -> None:
    if feat.is_continuous:
        if not np.isfinite(value):
            raise SchemaError(f"record {record_id}: non-finite value for {feat.name!r}")
        return
    if value != int(value) or not (0 <= int(value) < feat.levels):
        raise SchemaError(
            f"record {record_id}: value {value!r} is not a valid level of "
            f"{feat.name!r} ({feat.kind} with {feat.levels} levels)"
        )


@dataclass(frozen=True)
class Record:
    """A single variable-length multivariate time series with static features.

    temporal_values has shape (T, n_temporal) and mask the same shape; mask is
    True where the entry was observed. Masked entries are normalised to 0.0.
    """

    record_id: int
    static_values: np.ndarray
    temporal_values: np.ndarray
    mask: np.ndarray
    label: int

    def __post_init__(self):
        sv = np.ascontiguousarray(np.asarray(self.static_values, dtype=np.float64))
        tv = np.asarray(self.temporal_values, dtype=np.float64)
        mk = np.asarray(self.mask, dtype=bool)
        if tv.ndim != 2 or mk.shape != tv.shape:
            raise SchemaError(
                f"record {self.record_id}: temporal values {tv.shape} and mask "
                f"{mk.shape} must be 2-d and agree"
            )
        tv = np.where(mk, tv, 0.0)
        object.__setattr__(self, "static_values", sv)
        object.__setattr__(self, "temporal_values", np.ascontiguousarray(tv))
        object.__setattr__(self, "mask", np.ascontiguousarray(mk))
        object.__setattr__(self, "record_id", int(self.record_id))
        object.__setattr__(self, "label", int(self.label))
        if self.label not in (0, 1):
            raise SchemaError(f"record {self.record_id}: label must be 0/1, got {self.label}")

    @property
    def length(self) -> int:
        return self.temporal_values.shape[0]

    def with_id(self, record_id: int) -> "Record":
        return Record(record_id, self.static_values, self.temporal_values, self.mask, self.label)

    def validate(self, schema: FeatureSchema) -> None:
        """Check this record's values against the schema, naming any offender."""
        if self.static_values.shape != (schema.n_static,):
            raise SchemaError(
                f"record {self.record_id}: expected {schema.n_static} static values, "
                f"got {self.static_values.shape}"
            )
        if self.temporal_values.shape[1] != schema.n_temporal:
            raise SchemaError(
                f"record {self.record_id}: expected {schema.n_temporal} temporal "
                f"features, got {self.temporal_values.shape[1]}"
            )
        for value, feat in zip(self.static_values, schema.static):
            _check_static_value(float(value), feat, self.record_id)
        for j, feat in enumerate(schema.temporal):
            observed = self.temporal_values[self.mask[:, j], j]
            if observed.size == 0:
                continue
            if feat.is_continuous:
                if not np.all(np.isfinite(observed)):
                    raise SchemaError(
                        f"record {self.record_id}: non-finite value for {feat.name!r}"
                    )
            else:
                bad = (observed != np.floor(observed)) | (observed < 0) | (observed >= feat.levels)
                if np.any(bad):
                    value = observed[bad][0]
                    raise SchemaError(
                        f"record {self.record_id}: value {value!r} is not a valid level of "
                        f"{feat.name!r} ({feat.kind} with {feat.levels} levels)"
                    )

    def equals(self, other: "Record") -> bool:
        return (
            self.record_id == other.record_id
            and self.label == other.label
            and np.array_equal(self.static_values, other.static_values)
            and np.array_equal(self.temporal_values, other.temporal_values)
            and np.array_equal(self.mask, other.mask)
        )


@dataclass(frozen=True)
class Dataset:
    """An ordered collection of records under one schema, with unique ids."""

    schema: FeatureSchema
    records: tuple[Record, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))
        ids = [r.record_id for r in self.records]
        if len(set(ids)) != len(ids):
            seen, dup = set(), None
            for i in ids:
                if i in seen:
                    dup = i
                    break
                seen.add(i)
            raise SchemaError(f"duplicate record_id {dup}")
        for r in self.records:
            r.validate(self.schema)

    def __len__(self) -> int:
        return len(self.records)

    @property
    def ids(self) -> list[int]:
        return [r.record_id for r in self.records]

    @property
    def labels(self) -> np.ndarray:
        return np.array([r.label for r in self.records], dtype=np.int64)

    def subset_by_ids(self, wanted: set[int]) -> "Dataset":
        """Records whose id is in `wanted`, in this dataset's order."""
        return Dataset(self.schema, tuple(r for r in self.records if r.record_id in wanted))

    def equals(self, other: "Dataset") -> bool:
        if self.schema != other.schema or len(self) != len(other):
            return False
        return all(a.equals(b) for a, b in zip(self.records, other.records))


@dataclass(frozen=True)
class MembershipGroundTruth:
    """Which ids of an enlarged set were actually used to train the hider."""

    enlarged_ids: frozenset[int]
    member_ids: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "enlarged_ids", frozenset(int(i) for i in self.enlarged_ids))
        object.__setattr__(self, "member_ids", frozenset(int(i) for i in self.member_ids))
        if not self.member_ids <= self.enlarged_ids:
            raise SchemaError("member_ids must be a subset of enlarged_ids")

    @property
    def n_members(self) -> int:
        return len(self.member_ids)
