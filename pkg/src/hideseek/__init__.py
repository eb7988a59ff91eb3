"""hideseek: a desk-scale privacy competition engine.

Hiders turn a real time-series dataset into a synthetic one; seekers try to
re-identify which records of an enlarged candidate set were used. The engine
simulates clinical-style data, runs every hider against every seeker, applies
a train-on-synthetic/test-on-real quality bar, and emits both leaderboards.
"""

from hideseek.data import Dataset, Feature, FeatureSchema, MembershipGroundTruth, Record
from hideseek.io import load_dataset, save_dataset
from hideseek.simulate import SimConfig, simulate_dataset

__version__ = "0.1.0"

__all__ = [
    "Dataset",
    "Feature",
    "FeatureSchema",
    "MembershipGroundTruth",
    "Record",
    "SimConfig",
    "load_dataset",
    "save_dataset",
    "simulate_dataset",
    "__version__",
]
