"""Public/private splits and the enlarged-set membership game.

sample_membership_instance re-keys the drawn records with fresh ids (0..n-1,
in shuffled order) so that neither identifiers nor positions can leak which
records are members; an attack has to work on data content.
"""

from __future__ import annotations

import numpy as np

from hideseek.data import Dataset, MembershipGroundTruth
from hideseek.seeds import rng_from


def split_public_private(
    dataset: Dataset, public_fraction: float, seed: int
) -> tuple[Dataset, Dataset]:
    """Disjoint (public, private) partition with |public| = floor(fraction*n).

    Uniform without replacement and deterministic in `seed`; both halves keep
    the input's record order.
    """
    if len(dataset) == 0:
        raise ValueError("cannot split an empty dataset")
    if not 0.0 < public_fraction < 1.0:
        raise ValueError(f"public_fraction must be in (0,1), got {public_fraction}")
    n = len(dataset)
    n_public = int(np.floor(public_fraction * n))
    rng = rng_from(seed, "split")
    chosen = set(rng.permutation(n)[:n_public].tolist())
    public = tuple(r for i, r in enumerate(dataset.records) if i in chosen)
    private = tuple(r for i, r in enumerate(dataset.records) if i not in chosen)
    return Dataset(dataset.schema, public), Dataset(dataset.schema, private)


def sample_membership_instance(
    d_priv: Dataset, enlarged_size: int, seed: int
) -> tuple[Dataset, MembershipGroundTruth]:
    """Draw one enlarged set plus ground truth for the membership game.

    `enlarged_size` records are drawn uniformly without replacement from the
    private data, shuffled, and re-keyed 0..enlarged_size-1; exactly
    floor(enlarged_size/2) of the fresh ids are designated members.
    """
    if not 2 <= enlarged_size <= len(d_priv):
        raise ValueError(
            f"enlarged_size must be in [2, {len(d_priv)}], got {enlarged_size}"
        )
    rng = rng_from(seed, "instance")
    picked = rng.permutation(len(d_priv))[:enlarged_size]
    records = tuple(
        d_priv.records[src].with_id(new_id) for new_id, src in enumerate(picked)
    )
    n_members = enlarged_size // 2
    member_ids = frozenset(rng.permutation(enlarged_size)[:n_members].tolist())
    truth = MembershipGroundTruth(frozenset(range(enlarged_size)), member_ids)
    return Dataset(d_priv.schema, records), truth


def extract_members(d_enl: Dataset, truth: MembershipGroundTruth) -> Dataset:
    """The member records of an enlarged set, in enlarged-set order."""
    if truth.enlarged_ids != frozenset(d_enl.ids):
        raise ValueError("ground truth does not match the enlarged set's ids")
    return d_enl.subset_by_ids(set(truth.member_ids))
