import numpy as np
import pytest

from hideseek.data import (
    Dataset,
    FeatureSchema,
    Record,
    SchemaError,
    binary,
    categorical,
    continuous,
)
from tests.conftest import make_dataset


def test_duplicate_feature_names_rejected():
    with pytest.raises(SchemaError, match="unique"):
        FeatureSchema((continuous("x"), binary("x")), (), "y")
    with pytest.raises(SchemaError, match="unique"):
        FeatureSchema((continuous("x"),), (continuous("y"),), "y")


def test_categorical_needs_two_levels():
    with pytest.raises(SchemaError):
        categorical("c", 1)
    assert categorical("c", 2).levels == 2
    assert binary("b").levels == 2


def test_record_shape_mismatch_rejected():
    with pytest.raises(SchemaError, match="agree"):
        Record(0, np.zeros(1), np.zeros((3, 2)), np.zeros((2, 2), dtype=bool), 0)


def test_masked_entries_normalised_to_zero():
    values = np.array([[1.0, 2.0], [3.0, 4.0]])
    mask = np.array([[True, False], [False, True]])
    r = Record(0, np.zeros(0), values, mask, 0)
    assert r.temporal_values[0, 1] == 0.0 and r.temporal_values[1, 0] == 0.0
    assert r.temporal_values[0, 0] == 1.0 and r.temporal_values[1, 1] == 4.0


def test_invalid_categorical_level_names_record_and_feature(mixed_schema):
    values = np.zeros((2, 3))
    values[:, 2] = 5  # 'vent' is binary
    mask = np.ones((2, 3), dtype=bool)
    r = Record(17, np.array([0.0, 1.0, 2.0]), values, mask, 0)
    with pytest.raises(SchemaError, match=r"record 17.*vent"):
        Dataset(mixed_schema, (r,))


def test_nonfinite_continuous_rejected(mixed_schema):
    values = np.zeros((2, 3))
    values[0, 0] = np.inf
    mask = np.ones((2, 3), dtype=bool)
    r = Record(4, np.array([0.0, 1.0, 2.0]), values, mask, 0)
    with pytest.raises(SchemaError, match=r"record 4.*hr"):
        Dataset(mixed_schema, (r,))


def test_masked_nonfinite_is_fine(mixed_schema):
    values = np.zeros((2, 3))
    values[0, 0] = np.nan
    mask = np.ones((2, 3), dtype=bool)
    mask[0, 0] = False
    r = Record(4, np.array([0.0, 1.0, 2.0]), values, mask, 0)
    Dataset(mixed_schema, (r,)).records[0].validate(mixed_schema)


def test_duplicate_record_ids_rejected(mixed_schema, mixed_dataset):
    records = mixed_dataset.records[:2]
    clash = records[1].with_id(records[0].record_id)
    with pytest.raises(SchemaError, match="duplicate record_id"):
        Dataset(mixed_schema, (records[0], clash))


def test_dataset_equals(mixed_schema):
    a = make_dataset(mixed_schema, 5, seed=1)
    b = make_dataset(mixed_schema, 5, seed=1)
    c = make_dataset(mixed_schema, 5, seed=2)
    assert a.equals(b)
    assert not a.equals(c)


def test_label_must_be_binary(mixed_schema):
    with pytest.raises(SchemaError, match="label"):
        Record(0, np.zeros(3), np.zeros((2, 3)), np.ones((2, 3), dtype=bool), 2)
