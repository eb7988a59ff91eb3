import numpy as np
import pytest

from hideseek.io import save_dataset
from hideseek.quality import _observed_means, _transition_design, one_step_ahead_score
from hideseek.simulate import SimConfig, label_prevalence, simulate_dataset


def test_config_validation():
    with pytest.raises(ValueError):
        SimConfig(t_min=1)
    with pytest.raises(ValueError):
        SimConfig(t_min=10, t_max=9)
    with pytest.raises(ValueError):
        SimConfig(transition_matrix_spectral_radius=1.0)
    with pytest.raises(ValueError):
        SimConfig(missing_rate=1.0)


def test_no_missing_when_rate_zero():
    d = simulate_dataset(SimConfig(n_records=20, missing_rate=0.0, seed=1))
    assert all(r.mask.all() for r in d.records)


def test_lengths_within_bounds(sim_default):
    lengths = [r.length for r in sim_default.records]
    assert min(lengths) >= 12 and max(lengths) <= 24


def test_same_seed_identical_different_seed_differs(tmp_path):
    cfg = SimConfig(n_records=30, d_latent=10, d_temporal=10,
                    observation_noise_std=0.0, seed=9)
    a = simulate_dataset(cfg)
    b = simulate_dataset(cfg)
    assert a.equals(b)
    save_dataset(a, tmp_path / "a")
    save_dataset(b, tmp_path / "b")
    assert (tmp_path / "a" / "temporal.csv").read_bytes() == (
        tmp_path / "b" / "temporal.csv"
    ).read_bytes()
    c = simulate_dataset(SimConfig(n_records=30, d_latent=10, d_temporal=10,
                                   observation_noise_std=0.0, seed=10))
    assert not a.equals(c)


def test_stability_bound(sim_default):
    values = np.concatenate([r.temporal_values[r.mask] for r in sim_default.records])
    assert np.abs(values).max() < 1e6


def test_lag1_autocorrelation_positive():
    d = simulate_dataset(SimConfig(n_records=500, seed=7))
    acs = []
    for r in d.records:
        for j in range(d.schema.n_temporal):
            x = r.temporal_values[r.mask[:, j], j]
            if x.size >= 3 and x.std() > 0:
                acs.append(np.corrcoef(x[:-1], x[1:])[0, 1])
    assert np.mean(acs) > 0.3


def test_var_beats_persistence_on_500_records():
    d = simulate_dataset(SimConfig(n_records=500, seed=7))
    var_rmse = one_step_ahead_score(d, d)
    X, targets, mask = _transition_design(d, _observed_means(d))
    persistence = np.sqrt(
        np.mean(((X[:, : d.schema.n_temporal] - targets)[mask]) ** 2)
    )
    assert var_rmse < persistence


def test_label_prevalence_trivial(mixed_schema):
    from tests.conftest import make_dataset
    from hideseek.data import Dataset, Record

    d = make_dataset(mixed_schema, 6, seed=1)
    zeros = Dataset(
        mixed_schema,
        tuple(
            Record(r.record_id, r.static_values, r.temporal_values, r.mask, 0)
            for r in d.records
        ),
    )
    assert label_prevalence(zeros) == 0.0
    one = Dataset(mixed_schema, (d.records[0].with_id(0),))
    one = Dataset(
        mixed_schema,
        (Record(0, one.records[0].static_values, one.records[0].temporal_values,
                one.records[0].mask, 1),),
    )
    assert label_prevalence(one) == 1.0


def test_default_prevalence_balanced(sim_default):
    assert 0.3 <= label_prevalence(sim_default) <= 0.7


def test_masks_match_missing_rate(sim_default):
    observed = np.mean([r.mask.mean() for r in sim_default.records])
    assert observed == pytest.approx(0.9, abs=0.02)
