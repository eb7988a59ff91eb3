import numpy as np
import pytest

from hideseek.data import Dataset, FeatureSchema, Record, binary, categorical, continuous
from hideseek.sampling import split_public_private
from hideseek.simulate import SimConfig, simulate_dataset


@pytest.fixture(scope="session")
def mixed_schema() -> FeatureSchema:
    """A small schema exercising every feature kind."""
    return FeatureSchema(
        static=(continuous("age"), binary("sex"), categorical("unit", 3)),
        temporal=(continuous("hr"), continuous("bp"), binary("vent")),
        label_name="outcome",
    )


def make_record(schema, record_id, rng, length=4, label=0):
    """A random schema-valid record; masked entries are zeroed by Record."""
    statics = []
    for f in schema.static:
        statics.append(rng.standard_normal() if f.is_continuous else rng.integers(f.levels))
    values = np.zeros((length, schema.n_temporal))
    mask = rng.random((length, schema.n_temporal)) < 0.8
    mask[-1, 0] = True  # keep the final step partially observed so length survives IO
    for j, f in enumerate(schema.temporal):
        if f.is_continuous:
            values[:, j] = rng.standard_normal(length)
        else:
            values[:, j] = rng.integers(f.levels, size=length)
    return Record(record_id, np.array(statics, dtype=float), values, mask, label)


def make_dataset(schema, n, seed=0, length=4):
    rng = np.random.default_rng(seed)
    records = tuple(
        make_record(schema, i, rng, length=length, label=int(rng.random() < 0.5))
        for i in range(n)
    )
    return Dataset(schema, records)


@pytest.fixture(scope="session")
def mixed_dataset(mixed_schema) -> Dataset:
    return make_dataset(mixed_schema, 12, seed=3)


@pytest.fixture(scope="session")
def sim_default() -> Dataset:
    """The default-configuration simulated dataset shared across tests."""
    return simulate_dataset(SimConfig(seed=7))


@pytest.fixture(scope="session")
def sim_split(sim_default):
    return split_public_private(sim_default, 0.5, 11)
