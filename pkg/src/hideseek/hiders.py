"""Built-in synthetic-data generators (hiders).

Every hider maps a real dataset to a synthetic one of the same size and
schema, with fresh record ids so identifiers cannot leak membership. The
identity and shuffle hiders are calibration endpoints (maximal fidelity /
destroyed structure); the noise hider is the classic perturbation baseline;
the autoregressive-Gaussian hider is a closed-form generative model that fits
statics, initial observations, and one-step dynamics.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np

from hideseek.data import Dataset, Record
from hideseek.learners import DegenerateTaskError, train_logistic, train_ridge
from hideseek.seeds import rng_from
from hideseek.summary import static_design, summarize_dataset

log = logging.getLogger(__name__)

BUILTIN_HIDERS = ("identity", "noise", "shuffle", "ar_gaussian")


@dataclass(frozen=True)
class HiderSpec:
    """A registry entry: either a builtin identifier or an external command."""

    name: str
    builtin: str | None = None
    params: Mapping[str, Any] = field(default_factory=dict)
    command: tuple[str, ...] | None = None
    timeout_s: float | None = None

    def __post_init__(self):
        if (self.builtin is None) == (self.command is None):
            raise ValueError(f"spec {self.name!r} needs exactly one of builtin/command")
        if self.builtin is not None and self.builtin not in BUILTIN_HIDERS:
            raise ValueError(f"unknown builtin hider {self.builtin!r}")

    @property
    def is_external(self) -> bool:
        return self.command is not None


def _fresh_ids(d_real: Dataset) -> list[int]:
    base = max(d_real.ids, default=-1) + 1
    return [base + i for i in range(len(d_real))]


def run_builtin_hider(spec: HiderSpec, d_real: Dataset, seed: int) -> Dataset:
    kind = spec.builtin
    if kind == "identity":
        return hider_identity(d_real)
    if kind == "noise":
        return hider_noise(d_real, float(spec.params.get("sigma", 0.5)), seed)
    if kind == "shuffle":
        return hider_shuffle(d_real, seed)
    if kind == "ar_gaussian":
        return hider_ar_gaussian(d_real, float(spec.params.get("ridge", 1.0)), seed)
    raise ValueError(f"unknown builtin hider {kind!r}")


def hider_identity(d_real: Dataset) -> Dataset:
    """Exact copy with fresh ids: maximal fidelity, zero privacy."""
    if len(d_real) == 0:
        raise ValueError("input dataset is empty")
    records = tuple(
        r.with_id(new_id) for r, new_id in zip(d_real.records, _fresh_ids(d_real))
    )
    return Dataset(d_real.schema, records)


def _observed_stats(d_real: Dataset):
    """Per-feature observed std for continuous columns and level marginals."""
    schema = d_real.schema
    static_std = np.zeros(schema.n_static)
    static_marginals: list[np.ndarray | None] = [None] * schema.n_static
    static_matrix = np.array([r.static_values for r in d_real.records])
    for i, feat in enumerate(schema.static):
        if feat.is_continuous:
            static_std[i] = static_matrix[:, i].std()
        else:
            counts = np.bincount(static_matrix[:, i].astype(int), minlength=feat.levels)
            static_marginals[i] = counts / counts.sum()

    temporal_std = np.zeros(schema.n_temporal)
    temporal_marginals: list[np.ndarray | None] = [None] * schema.n_temporal
    for j, feat in enumerate(schema.temporal):
        observed = np.concatenate(
            [r.temporal_values[r.mask[:, j], j] for r in d_real.records]
        )
        if feat.is_continuous:
            temporal_std[j] = observed.std() if observed.size else 0.0
        elif observed.size:
            counts = np.bincount(observed.astype(int), minlength=feat.levels)
            temporal_marginals[j] = counts / counts.sum()
        else:
            temporal_marginals[j] = np.full(feat.levels, 1.0 / feat.levels)
    label_marginal = np.bincount(d_real.labels, minlength=2) / len(d_real)
    return static_std, static_marginals, temporal_std, temporal_marginals, label_marginal


def hider_noise(d_real: Dataset, sigma: float, seed: int) -> Dataset:
    """Perturbation baseline: additive Gaussian noise at sigma times each
    continuous feature's observed std; level-valued columns (label included)
    are resampled from their empirical marginal with probability min(sigma, 1).

    sigma = 0 reproduces the input content exactly, whatever the seed.
    """
    if len(d_real) == 0:
        raise ValueError("input dataset is empty")
    if sigma < 0:
        raise ValueError("sigma must be >= 0")
    schema = d_real.schema
    static_std, static_marg, temporal_std, temporal_marg, label_marg = _observed_stats(d_real)
    flip_p = min(sigma, 1.0)
    rng = rng_from(seed, "noise")

    records = []
    for r, new_id in zip(d_real.records, _fresh_ids(d_real)):
        statics = r.static_values.copy()
        for i, feat in enumerate(schema.static):
            if feat.is_continuous:
                statics[i] += sigma * static_std[i] * rng.standard_normal()
            elif rng.random() < flip_p:
                statics[i] = rng.choice(feat.levels, p=static_marg[i])
        values = r.temporal_values.copy()
        for j, feat in enumerate(schema.temporal):
            observed = r.mask[:, j]
            if feat.is_continuous:
                noise = rng.standard_normal(int(observed.sum()))
                values[observed, j] += sigma * temporal_std[j] * noise
            else:
                for t in np.flatnonzero(observed):
                    if rng.random() < flip_p:
                        values[t, j] = rng.choice(feat.levels, p=temporal_marg[j])
        label = r.label
        if rng.random() < flip_p:
            label = int(rng.choice(2, p=label_marg))
        records.append(Record(new_id, statics, values, r.mask, label))
    return Dataset(schema, tuple(records))


def hider_shuffle(d_real: Dataset, seed: int) -> Dataset:
    """Permute every column independently across records (label included),
    destroying cross-feature structure while keeping each marginal intact.

    A donated trajectory is truncated to the receiving record's length, or
    padded with masked steps when it is shorter.
    """
    n = len(d_real)
    if n < 2:
        raise ValueError("need at least 2 records to shuffle")
    schema = d_real.schema
    rng = rng_from(seed, "shuffle")

    static_matrix = np.array([r.static_values for r in d_real.records])
    for i in range(schema.n_static):
        static_matrix[:, i] = static_matrix[rng.permutation(n), i]
    labels = d_real.labels[rng.permutation(n)]
    donors = [rng.permutation(n) for _ in range(schema.n_temporal)]

    records = []
    for pos, (r, new_id) in enumerate(zip(d_real.records, _fresh_ids(d_real))):
        length = r.length
        values = np.zeros((length, schema.n_temporal))
        mask = np.zeros((length, schema.n_temporal), dtype=bool)
        for j in range(schema.n_temporal):
            donor = d_real.records[donors[j][pos]]
            keep = min(length, donor.length)
            values[:keep, j] = donor.temporal_values[:keep, j]
            mask[:keep, j] = donor.mask[:keep, j]
        records.append(Record(new_id, static_matrix[pos], values, mask, int(labels[pos])))
    return Dataset(schema, tuple(records))


@dataclass(frozen=True)
class _ArGaussianFit:
    static_mean: np.ndarray
    static_chol: np.ndarray  # lower-triangular factor, possibly diagonal fallback
    static_marginals: list
    init_model: Any
    init_chol: np.ndarray
    dyn_model: Any
    dyn_chol: np.ndarray
    feature_means: np.ndarray
    lengths: np.ndarray
    missing_rates: np.ndarray
    label_model: Any
    label_mean: np.ndarray
    label_std: np.ndarray
    label_marginal: np.ndarray


def _safe_cholesky(cov: np.ndarray, what: str) -> np.ndarray:
    try:
        return np.linalg.cholesky(cov)
    except np.linalg.LinAlgError:
        log.warning("%s covariance is degenerate; falling back to diagonal", what)
        return np.diag(np.sqrt(np.clip(np.diag(cov), 0.0, None)))


def _impute_temporal(d: Dataset) -> tuple[list[np.ndarray], np.ndarray]:
    """Mean-impute masked entries per feature; returns per-record matrices."""
    schema = d.schema
    means = np.zeros(schema.n_temporal)
    for j in range(schema.n_temporal):
        observed = np.concatenate([r.temporal_values[r.mask[:, j], j] for r in d.records])
        means[j] = observed.mean() if observed.size else 0.0
    imputed = [np.where(r.mask, r.temporal_values, means) for r in d.records]
    return imputed, means


def hider_ar_gaussian(d_real: Dataset, ridge: float, seed: int) -> Dataset:
    """Closed-form generative baseline.

    Fits (a) a Gaussian over continuous statics (marginals for level-valued
    ones), (b) a ridge model of the first observation given the statics, and
    (c) a ridge one-step vector autoregression with static inputs, each with a
    fitted residual covariance. Labels are sampled from a logistic model of
    the record summary fitted on the real data, so the label-feature link
    survives generation. Sampling draws lengths from the empirical length
    distribution and re-masks entries at the per-feature empirical missing
    rate. Deterministic in `seed`.
    """
    if len(d_real) < 10:
        raise ValueError("ar_gaussian needs at least 10 records")
    if ridge <= 0:
        raise ValueError("ridge must be > 0")
    schema = d_real.schema
    fit = _fit_ar_gaussian(d_real, ridge)
    rng = rng_from(seed, "ar_gaussian")
    d_t = schema.n_temporal

    drafts = []
    for new_id in _fresh_ids(d_real):
        statics = np.empty(schema.n_static)
        eps = rng.standard_normal(int((fit.static_chol.shape[0])))
        cont = fit.static_mean + fit.static_chol @ eps
        pos = 0
        for i, feat in enumerate(schema.static):
            if feat.is_continuous:
                statics[i] = cont[pos]
                pos += 1
            else:
                statics[i] = rng.choice(feat.levels, p=fit.static_marginals[i])
        design = static_design(schema, statics)

        length = int(rng.choice(fit.lengths))
        values = np.empty((length, d_t))
        y = fit.init_model.predict(design[None, :])[0] + fit.init_chol @ rng.standard_normal(d_t)
        values[0] = y
        for t in range(1, length):
            step_in = np.concatenate([y, design])
            y = fit.dyn_model.predict(step_in[None, :])[0] + fit.dyn_chol @ rng.standard_normal(d_t)
            values[t] = y
        for j, feat in enumerate(schema.temporal):
            if not feat.is_continuous:
                values[:, j] = np.clip(np.rint(values[:, j]), 0, feat.levels - 1)
        mask = rng.random((length, d_t)) >= fit.missing_rates[None, :]
        drafts.append(Record(new_id, statics, values, mask, 0))

    summaries = summarize_dataset(Dataset(schema, tuple(drafts)))
    z = (summaries - fit.label_mean) / fit.label_std
    if fit.label_model is not None:
        probs = fit.label_model.predict_proba(z)
    else:
        probs = np.full(len(drafts), fit.label_marginal[1])
    labels = rng.random(len(drafts)) < probs
    records = tuple(
        Record(r.record_id, r.static_values, r.temporal_values, r.mask, int(lab))
        for r, lab in zip(drafts, labels)
    )
    return Dataset(schema, records)


def _fit_ar_gaussian(d_real: Dataset, ridge: float) -> _ArGaussianFit:
    schema = d_real.schema
    records = d_real.records
    n = len(records)

    static_matrix = np.array([r.static_values for r in records])
    cont_idx = [i for i, f in enumerate(schema.static) if f.is_continuous]
    cont = static_matrix[:, cont_idx] if cont_idx else np.zeros((n, 0))
    static_mean = cont.mean(axis=0) if cont_idx else np.zeros(0)
    if cont_idx:
        centred = cont - static_mean
        static_cov = centred.T @ centred / n
        static_chol = _safe_cholesky(static_cov, "static")
    else:
        static_chol = np.zeros((0, 0))
    static_marginals = []
    for i, feat in enumerate(schema.static):
        if feat.is_continuous:
            static_marginals.append(None)
        else:
            counts = np.bincount(static_matrix[:, i].astype(int), minlength=feat.levels)
            static_marginals.append(counts / counts.sum())

    imputed, feature_means = _impute_temporal(d_real)
    designs = np.array([static_design(schema, r.static_values) for r in records])

    init_targets = np.array([imp[0] for imp in imputed])
    init_model = train_ridge(designs, init_targets, ridge)
    init_resid = init_targets - init_model.predict(designs)
    init_chol = _safe_cholesky(init_resid.T @ init_resid / n, "initial-step")

    rows, targets = [], []
    for imp, design in zip(imputed, designs):
        for t in range(imp.shape[0] - 1):
            rows.append(np.concatenate([imp[t], design]))
            targets.append(imp[t + 1])
    if not rows:
        raise ValueError("no transitions available to fit dynamics")
    rows = np.array(rows)
    targets = np.array(targets)
    dyn_model = train_ridge(rows, targets, ridge)
    dyn_resid = targets - dyn_model.predict(rows)
    dyn_chol = _safe_cholesky(dyn_resid.T @ dyn_resid / len(rows), "dynamics")

    lengths = np.array([r.length for r in records])
    missing = np.zeros(schema.n_temporal)
    total_steps = lengths.sum()
    for j in range(schema.n_temporal):
        observed = sum(int(r.mask[:, j].sum()) for r in records)
        missing[j] = 1.0 - observed / total_steps if total_steps else 0.0

    summaries = summarize_dataset(d_real)
    label_mean = summaries.mean(axis=0)
    label_std = summaries.std(axis=0)
    label_std[label_std == 0.0] = 1.0
    label_marginal = np.bincount(d_real.labels, minlength=2) / n
    try:
        label_model = train_logistic((summaries - label_mean) / label_std, d_real.labels)
    except DegenerateTaskError:
        log.warning("single-class labels; sampling labels from the marginal")
        label_model = None

    return _ArGaussianFit(
        static_mean,
        static_chol,
        static_marginals,
        init_model,
        init_chol,
        dyn_model,
        dyn_chol,
        feature_means,
        lengths,
        missing,
        label_model,
        label_mean,
        label_std,
        label_marginal,
    )
