"""Built-in membership-inference attacks (seekers).

All builtins exploit the protocol's public 50% prior and predict exactly
floor(n/2) members of the enlarged set. Distances are taken between summary
vectors standardized by the enlarged set's statistics, which handles
variable-length records and missingness uniformly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

import numpy as np

from hideseek import _kernels
from hideseek.data import Dataset, MembershipGroundTruth
from hideseek.learners import train_logistic
from hideseek.seeds import rng_from
from hideseek.summary import standardize_by, summarize_dataset

BUILTIN_SEEKERS = ("nn", "classifier", "random")

ATTACK_KNN = 5


@dataclass(frozen=True)
class SeekerSpec:
    """A registry entry: either a builtin identifier or an external command."""

    name: str
    builtin: str | None = None
    params: Mapping[str, Any] = field(default_factory=dict)
    command: tuple[str, ...] | None = None
    timeout_s: float | None = None

    def __post_init__(self):
        if (self.builtin is None) == (self.command is None):
            raise ValueError(f"spec {self.name!r} needs exactly one of builtin/command")
        if self.builtin is not None and self.builtin not in BUILTIN_SEEKERS:
            raise ValueError(f"unknown builtin seeker {self.builtin!r}")

    @property
    def is_external(self) -> bool:
        return self.command is not None


@dataclass(frozen=True)
class MembershipPrediction:
    predicted_member_ids: frozenset[int]

    def __post_init__(self):
        object.__setattr__(
            self, "predicted_member_ids", frozenset(int(i) for i in self.predicted_member_ids)
        )


def _top_half_by_score(d_enl: Dataset, scores: np.ndarray) -> MembershipPrediction:
    """Predict the floor(n/2) highest-scoring records, ties by record order."""
    n_pred = len(d_enl) // 2
    order = np.argsort(-scores, kind="stable")[:n_pred]
    ids = d_enl.ids
    return MembershipPrediction(frozenset(ids[i] for i in order))


def seeker_nn(d_syn: Dataset, d_enl: Dataset) -> MembershipPrediction:
    """Nearest-neighbour attack: the enlarged records closest to any synthetic
    record are declared members."""
    if len(d_syn) == 0 or len(d_enl) == 0:
        raise ValueError("datasets must be nonempty")
    if d_syn.schema != d_enl.schema:
        raise ValueError("synthetic and enlarged datasets have different schemas")
    enl = summarize_dataset(d_enl)
    syn = summarize_dataset(d_syn)
    enl_z, syn_z = standardize_by(enl, enl, syn)
    dists = _kernels.nearest_dists(enl_z, syn_z)
    return _top_half_by_score(d_enl, -dists)


def _attack_features(d_syn: Dataset, d_enl: Dataset) -> np.ndarray:
    """Per enlarged record: [nearest-synthetic distance, mean distance to the
    5 nearest synthetic records, nearest-other-enlarged distance]."""
    enl = summarize_dataset(d_enl)
    syn = summarize_dataset(d_syn)
    enl_z, syn_z = standardize_by(enl, enl, syn)
    return np.column_stack(
        [
            _kernels.nearest_dists(enl_z, syn_z),
            _kernels.knn_mean_dists(enl_z, syn_z, ATTACK_KNN),
            _kernels.nearest_other_dists(enl_z),
        ]
    )


CalibrationTuple = tuple[Dataset, Dataset, MembershipGroundTruth]


@dataclass(frozen=True)
class AttackModel:
    """A fitted classifier attack: logistic weights over standardized features."""

    model: Any
    feature_mean: np.ndarray
    feature_std: np.ndarray

    def score(self, d_syn: Dataset, d_enl: Dataset) -> np.ndarray:
        features = (_attack_features(d_syn, d_enl) - self.feature_mean) / self.feature_std
        return self.model.predict_proba(features)


def fit_attack_model(calibration: Sequence[CalibrationTuple]) -> AttackModel:
    """Train the classifier attack on calibration tuples with known membership."""
    if not calibration:
        raise ValueError("calibration must be nonempty")
    feature_blocks, label_blocks = [], []
    for d_syn_cal, d_enl_cal, truth in calibration:
        if d_syn_cal.schema != d_enl_cal.schema:
            raise ValueError("calibration tuple schemas differ")
        feature_blocks.append(_attack_features(d_syn_cal, d_enl_cal))
        label_blocks.append(
            np.array([1 if i in truth.member_ids else 0 for i in d_enl_cal.ids])
        )
    features = np.vstack(feature_blocks)
    labels = np.concatenate(label_blocks)
    mean = features.mean(axis=0)
    std = features.std(axis=0)
    std[std == 0.0] = 1.0
    model = train_logistic((features - mean) / std, labels)
    return AttackModel(model, mean, std)


def seeker_classifier(
    d_syn: Dataset, d_enl: Dataset, calibration: Sequence[CalibrationTuple]
) -> MembershipPrediction:
    """Classifier attack: rank enlarged records by membership probability under
    a logistic model trained on published calibration tuples."""
    if d_syn.schema != d_enl.schema:
        raise ValueError("synthetic and enlarged datasets have different schemas")
    attack = fit_attack_model(calibration)
    return _top_half_by_score(d_enl, attack.score(d_syn, d_enl))


def seeker_random(d_enl: Dataset, seed: int) -> MembershipPrediction:
    """Chance-level control: a uniformly random floor(n/2)-subset."""
    if len(d_enl) == 0:
        raise ValueError("enlarged dataset is empty")
    rng = rng_from(seed, "random_seeker")
    picked = rng.permutation(len(d_enl))[: len(d_enl) // 2]
    ids = d_enl.ids
    return MembershipPrediction(frozenset(ids[i] for i in picked))
