"""Membership-accuracy scoring and the two leaderboards.

A score cell is the classification accuracy of one seeker against one
(hider, instance) pair, counting both recovered members and correctly
rejected non-members over the enlarged set. Seekers are ranked by their mean
cell over all instances and qualified hiders (descending); hiders by the best
seeker's per-instance mean against them (ascending: a low ceiling means a
safe generator). Disqualified hiders keep their cells for diagnostics but
contribute to neither board.
"""

from __future__ import annotations

from dataclasses import dataclass

from hideseek.data import MembershipGroundTruth
from hideseek.seekers import MembershipPrediction


def accuracy_score(pred: MembershipPrediction, truth: MembershipGroundTruth) -> float:
    """(true members found + true non-members rejected) / enlarged-set size."""
    predicted = pred.predicted_member_ids
    stray = predicted - truth.enlarged_ids
    if stray:
        raise ValueError(f"prediction contains ids outside the enlarged set: {sorted(stray)[:5]}")
    members = truth.member_ids
    true_pos = len(predicted & members)
    true_neg = len(truth.enlarged_ids) - len(predicted | members)
    return (true_pos + true_neg) / len(truth.enlarged_ids)


@dataclass(frozen=True)
class ScoreTensor:
    """Accuracy cells keyed by (instance, hider, seeker) indices."""

    K: int
    hider_names: tuple[str, ...]
    seeker_names: tuple[str, ...]
    cells: dict[tuple[int, int, int], float]
    qualified: dict[int, bool]

    @property
    def n_hiders(self) -> int:
        return len(self.hider_names)

    @property
    def n_seekers(self) -> int:
        return len(self.seeker_names)


def seeker_overall(tensor: ScoreTensor, k: int) -> float | None:
    """Mean cell over all instances and qualified hiders; None if no hider
    qualified."""
    values = [
        tensor.cells[(i, j, k)]
        for i in range(tensor.K)
        for j in range(tensor.n_hiders)
        if tensor.qualified.get(j, False)
    ]
    if not values:
        return None
    return sum(values) / len(values)


def hider_reid_score(tensor: ScoreTensor, j: int, normalize: bool = True) -> float | None:
    """Best seeker's mean accuracy against hider j (lower is better for the
    hider). With normalize=False the per-seeker inner sums are left
    unnormalised; the max is over the same per-seeker ordering either way, so
    rankings are unaffected."""
    per_seeker = []
    for k in range(tensor.n_seekers):
        total = sum(tensor.cells[(i, j, k)] for i in range(tensor.K))
        per_seeker.append(total / tensor.K if normalize else total)
    if not per_seeker:
        return None
    return max(per_seeker)


@dataclass(frozen=True)
class Leaderboard:
    track: str  # "hider" | "seeker"
    entries: tuple[tuple[str, float, int], ...]  # (name, score, rank)
    direction: str  # "higher" | "lower"
    disqualified: tuple[str, ...] = ()


def _ranked(scored: list[tuple[str, float]], direction: str) -> tuple[tuple[str, float, int], ...]:
    """Sort by score in track direction (ties listed by name) and assign
    min-rank: tied entries share the rank of their first position."""
    sign = -1.0 if direction == "higher" else 1.0
    ordered = sorted(scored, key=lambda item: (sign * item[1], item[0]))
    entries = []
    for pos, (name, score) in enumerate(ordered):
        rank = pos + 1
        if pos > 0 and score == ordered[pos - 1][1]:
            rank = entries[-1][2]
        entries.append((name, score, rank))
    return tuple(entries)


def build_leaderboards(tensor: ScoreTensor) -> tuple[Leaderboard, Leaderboard]:
    """(seeker board, hider board) from a complete tensor."""
    seeker_scored = []
    for k, name in enumerate(tensor.seeker_names):
        overall = seeker_overall(tensor, k)
        if overall is not None:
            seeker_scored.append((name, overall))
    seeker_board = Leaderboard("seeker", _ranked(seeker_scored, "higher"), "higher")

    hider_scored, disqualified = [], []
    for j, name in enumerate(tensor.hider_names):
        if not tensor.qualified.get(j, False):
            disqualified.append(name)
            continue
        score = hider_reid_score(tensor, j)
        if score is not None:
            hider_scored.append((name, score))
    hider_board = Leaderboard(
        "hider", _ranked(hider_scored, "lower"), "lower", tuple(sorted(disqualified))
    )
    return seeker_board, hider_board


def leaderboard_json_text(
    seeker_board: Leaderboard,
    hider_board: Leaderboard,
    config_echo: dict,
) -> str:
    """Render leaderboard.json byte-deterministically (scores at 6 decimals).

    config_echo must provide K, f, N_f, and seed.
    """

    def entry(name: str, score: float, rank: int) -> str:
        return f'{{"name":"{name}","score":{score:.6f},"rank":{rank}}}'

    seekers = ",".join(entry(*e) for e in seeker_board.entries)
    hiders = ",".join(entry(*e) for e in hider_board.entries)
    disq = ",".join(f'"{name}"' for name in hider_board.disqualified)
    echo = (
        f'{{"K":{int(config_echo["K"])},"f":{float(config_echo["f"])!r},'
        f'"N_f":{int(config_echo["N_f"])},"seed":{int(config_echo["seed"])}}}'
    )
    return (
        f'{{"seekers":[{seekers}],"hiders":[{hiders}],'
        f'"disqualified":[{disq}],"config_echo":{echo}}}\n'
    )
