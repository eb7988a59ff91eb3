"""The minimum-quality bar: train-on-synthetic/test-on-real (TSTR) tasks,
their train-on-real references (TRTR), and the relative-performance test.

Three tasks: (1) predict a held-out temporal feature's per-record level from
the rest of the summary, (2) one-step-ahead prediction over all temporal
features, (3) classify the record label. Each TSTR score is compared to its
TRTR reference as a direction-corrected ratio (reward metrics: tstr/trtr;
error metrics: trtr/tstr, so a ratio of 1 always means parity and higher is
always better). A generator qualifies on an instance only if every task's
ratio reaches the fraction f, and overall only if every instance qualifies.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from hideseek.data import Dataset
from hideseek.learners import (
    DegenerateTaskError,
    auroc,
    rmse,
    train_logistic,
    train_ridge,
)
from hideseek.summary import STATS_PER_FEATURE, static_design, summarize_dataset

RATIO_CAP = 10.0
_EPS = 1e-12

# Strong enough that the same-data reference fit is honest rather than
# interpolating noise at the desk-scale instance size (100 records, ~60
# summary columns); overridable per run via EvalConfig.ridge_lambda.
DEFAULT_RIDGE_LAMBDA = 25000.0

REWARD_KINDS = ("auroc", "accuracy")
ERROR_KINDS = ("rmse",)


@dataclass(frozen=True)
class QualityReport:
    """All TSTR/TRTR scores for one (instance, hider) pair."""

    feature_indices: tuple[int, ...]
    feature_tstr: tuple[float, ...]
    feature_trtr: tuple[float, ...]
    feature_kinds: tuple[str, ...]
    seq_tstr: float
    seq_trtr: float
    class_tstr: float
    class_trtr: float
    f: float
    qualified: bool

    def ratios(self, auroc_skill: bool = False) -> list[float]:
        out = [
            relative_performance(tstr, trtr, kind, auroc_skill=auroc_skill)
            for tstr, trtr, kind in zip(self.feature_tstr, self.feature_trtr, self.feature_kinds)
        ]
        out.append(relative_performance(self.seq_tstr, self.seq_trtr, "rmse"))
        out.append(
            relative_performance(self.class_tstr, self.class_trtr, "auroc", auroc_skill=auroc_skill)
        )
        return out


def relative_performance(
    tstr: float, trtr: float, kind: str, auroc_skill: bool = False
) -> float:
    """Direction-corrected TSTR/TRTR ratio, capped at 10.

    Reward metrics use tstr/trtr; error metrics invert to trtr/tstr so that
    "at least fraction f of the reference performance" reads the same way for
    every metric kind. A vanishing denominator yields the cap when the
    numerator also vanishes, else 0.
    """
    if kind in ERROR_KINDS:
        num, den = trtr, tstr
    elif kind in REWARD_KINDS:
        if auroc_skill and kind == "auroc":
            num, den = tstr - 0.5, trtr - 0.5
            if num < 0.0:
                num = 0.0
        else:
            num, den = tstr, trtr
    else:
        raise ValueError(f"unknown metric kind {kind!r}")
    if abs(den) < _EPS:
        return RATIO_CAP if abs(num) < _EPS else 0.0
    return min(num / den, RATIO_CAP)


def qualify(report: QualityReport, f: float, auroc_skill: bool = False) -> bool:
    """True iff every task's relative performance reaches f."""
    if not 0.0 <= f <= 1.0:
        raise ValueError(f"f must be in [0,1], got {f}")
    return all(ratio >= f for ratio in report.ratios(auroc_skill=auroc_skill))


def _feature_targets(d: Dataset, feature_index: int):
    """Per-record target for the feature-prediction task, skipping records
    where the feature was never observed. Continuous: observed mean; level
    kinds: majority observed value (lowest level wins ties)."""
    feat = d.schema.temporal[feature_index]
    keep, targets = [], []
    for i, r in enumerate(d.records):
        observed = r.temporal_values[r.mask[:, feature_index], feature_index]
        if observed.size == 0:
            continue
        keep.append(i)
        if feat.is_continuous:
            targets.append(observed.mean())
        else:
            counts = np.bincount(observed.astype(int), minlength=feat.levels)
            targets.append(int(np.argmax(counts)))
    return np.array(keep, dtype=int), np.array(targets, dtype=np.float64), feat


def feature_prediction_score(
    d_train: Dataset,
    d_test: Dataset,
    feature_index: int,
    lam: float = DEFAULT_RIDGE_LAMBDA,
    seed: int | None = None,
) -> tuple[float, str]:
    """Train a model of temporal feature `feature_index` from everything else;
    return (score on d_test, metric kind). RMSE for continuous features,
    AUROC for binary, accuracy for categorical. `seed` is accepted for
    call-site uniformity; the learners are deterministic.
    """
    del seed
    if d_train.schema != d_test.schema:
        raise ValueError("train/test schemas differ")
    block = slice(STATS_PER_FEATURE * feature_index, STATS_PER_FEATURE * (feature_index + 1))

    def design_of(d: Dataset, rows: np.ndarray) -> np.ndarray:
        full = summarize_dataset(d)[rows]
        return np.delete(full, np.r_[block], axis=1)

    train_rows, train_y, feat = _feature_targets(d_train, feature_index)
    test_rows, test_y, _ = _feature_targets(d_test, feature_index)
    if test_rows.size == 0:
        raise DegenerateTaskError(
            f"feature {feat.name!r} never observed in the test data"
        )
    if train_rows.size < 2:
        raise DegenerateTaskError(
            f"feature {feat.name!r} observed in fewer than 2 training records"
        )
    X_train = design_of(d_train, train_rows)
    X_test = design_of(d_test, test_rows)

    if feat.is_continuous:
        model = train_ridge(X_train, train_y, lam)
        return rmse(model.predict(X_test), test_y), "rmse"

    mean = X_train.mean(axis=0)
    std = X_train.std(axis=0)
    std[std == 0.0] = 1.0
    Z_train = (X_train - mean) / std
    Z_test = (X_test - mean) / std
    if feat.kind == "binary":
        model = train_logistic(Z_train, (train_y == 1).astype(int))
        return auroc(model.predict_proba(Z_test), (test_y == 1).astype(int)), "auroc"

    scores = np.full((X_test.shape[0], feat.levels), -np.inf)
    for level in range(feat.levels):
        level_y = (train_y == level).astype(int)
        if level_y.min() == level_y.max():
            continue  # level absent (or universal) in training data
        scores[:, level] = train_logistic(Z_train, level_y).predict_proba(Z_test)
    predicted = np.argmax(scores, axis=1)
    return float(np.mean(predicted == test_y)), "accuracy"


def _transition_design(d: Dataset, means: np.ndarray):
    """Stacked (input, target, target-mask) rows for one-step-ahead fitting."""
    schema = d.schema
    rows, targets, target_masks = [], [], []
    for r in d.records:
        imputed = np.where(r.mask, r.temporal_values, means)
        design = static_design(schema, r.static_values)
        for t in range(r.length - 1):
            rows.append(np.concatenate([imputed[t], design]))
            targets.append(imputed[t + 1])
            target_masks.append(r.mask[t + 1])
    if not rows:
        raise DegenerateTaskError("no transitions available (all records shorter than 2)")
    return np.array(rows), np.array(targets), np.array(target_masks)


def _observed_means(d: Dataset) -> np.ndarray:
    means = np.zeros(d.schema.n_temporal)
    for j in range(d.schema.n_temporal):
        observed = np.concatenate([r.temporal_values[r.mask[:, j], j] for r in d.records])
        means[j] = observed.mean() if observed.size else 0.0
    return means


def one_step_ahead_score(d_train: Dataset, d_test: Dataset, lam: float = DEFAULT_RIDGE_LAMBDA) -> float:
    """RMSE of a ridge one-step vector autoregression (with static inputs)
    trained on d_train's transitions, over d_test's observed next-step values.

    Masked entries are mean-imputed with each dataset's own observed means for
    fitting and for inputs; only observed targets count toward the error.
    """
    if d_train.schema != d_test.schema:
        raise ValueError("train/test schemas differ")
    X_train, y_train, _ = _transition_design(d_train, _observed_means(d_train))
    model = train_ridge(X_train, y_train, lam)
    X_test, y_test, mask = _transition_design(d_test, _observed_means(d_test))
    if not mask.any():
        raise DegenerateTaskError("no observed next-step targets in the test data")
    errors = (model.predict(X_test) - y_test)[mask]
    return float(np.sqrt(np.mean(errors**2)))


def classification_score(d_train: Dataset, d_test: Dataset) -> float:
    """AUROC on d_test of a logistic label model over summary vectors."""
    if d_train.schema != d_test.schema:
        raise ValueError("train/test schemas differ")
    X_train = summarize_dataset(d_train)
    mean = X_train.mean(axis=0)
    std = X_train.std(axis=0)
    std[std == 0.0] = 1.0
    model = train_logistic((X_train - mean) / std, d_train.labels)
    scores = model.predict_proba((summarize_dataset(d_test) - mean) / std)
    return auroc(scores, d_test.labels)


@dataclass(frozen=True)
class TrtrReference:
    """Per-instance train-on-real reference scores, shared across hiders."""

    feature_scores: tuple[float, ...]
    feature_kinds: tuple[str, ...]
    seq_score: float
    class_score: float


def trtr_reference(
    d_real: Dataset, feature_indices: tuple[int, ...], lam: float = DEFAULT_RIDGE_LAMBDA
) -> TrtrReference:
    scores, kinds = [], []
    for l in feature_indices:
        score, kind = feature_prediction_score(d_real, d_real, l, lam)
        scores.append(score)
        kinds.append(kind)
    return TrtrReference(
        tuple(scores),
        tuple(kinds),
        one_step_ahead_score(d_real, d_real, lam),
        classification_score(d_real, d_real),
    )


def evaluate_quality(
    d_syn: Dataset,
    d_real: Dataset,
    feature_indices: tuple[int, ...],
    reference: TrtrReference,
    f: float,
    lam: float = DEFAULT_RIDGE_LAMBDA,
    auroc_skill: bool = False,
) -> QualityReport:
    """TSTR scores for one synthetic set against its real counterpart."""
    tstr_scores = []
    for l in feature_indices:
        score, _ = feature_prediction_score(d_syn, d_real, l, lam)
        tstr_scores.append(score)
    seq = one_step_ahead_score(d_syn, d_real, lam)
    cls = classification_score(d_syn, d_real)
    report = QualityReport(
        feature_indices=tuple(feature_indices),
        feature_tstr=tuple(tstr_scores),
        feature_trtr=reference.feature_scores,
        feature_kinds=reference.feature_kinds,
        seq_tstr=seq,
        seq_trtr=reference.seq_score,
        class_tstr=cls,
        class_trtr=reference.class_score,
        f=f,
        qualified=False,
    )
    return replace(report, qualified=qualify(report, f, auroc_skill=auroc_skill))
