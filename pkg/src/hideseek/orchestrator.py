"""End-to-end competition protocol: data, calibration, matchups, leaderboards.

One run works through, deterministically in the master seed:

  1. acquire the dataset (simulate, or load a directory), split public/private
  2. publish per-hider calibration bundles built from public data
  3. for each evaluation instance: draw an enlarged set + members, run every
     hider on the member half, score the three quality tasks against the
     train-on-real reference, then run every seeker on every synthetic set
  4. fold the accuracy cells into the two leaderboards and write artifacts

Every per-unit seed is a hash of (master_seed, labels, indices), so cells can
be evaluated in any order or in parallel without changing the outcome. A
crashing, hanging, or malformed external algorithm is marked failed and the
run continues; builtin failures are contained the same way.
"""

from __future__ import annotations

import json
import logging
import shutil
import subprocess
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

from hideseek import io as dio
from hideseek.data import Dataset, FormatError
from hideseek.hiders import HiderSpec, run_builtin_hider
from hideseek.learners import DegenerateTaskError
from hideseek.quality import (
    DEFAULT_RIDGE_LAMBDA,
    QualityReport,
    TrtrReference,
    evaluate_quality,
    qualify,
    trtr_reference,
)
from hideseek.sampling import extract_members, sample_membership_instance, split_public_private
from hideseek.scoring import (
    Leaderboard,
    ScoreTensor,
    accuracy_score,
    build_leaderboards,
    hider_reid_score,
    leaderboard_json_text,
    seeker_overall,
)
from hideseek.seeds import derive_seed, rng_from
from hideseek.seekers import (
    AttackModel,
    MembershipPrediction,
    SeekerSpec,
    _top_half_by_score,
    fit_attack_model,
    seeker_nn,
    seeker_random,
)
from hideseek.simulate import SimConfig, simulate_dataset

log = logging.getLogger(__name__)

_NAME_OK = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_-")
_MAX_INSTANCE_ATTEMPTS = 25

SCORING_NOTE = (
    "Seeker overall score is the mean accuracy over every (instance, qualified "
    "generator) cell; hider re-identification score is the best seeker's "
    "per-instance mean, normalised to [0,1]."
)


@dataclass(frozen=True)
class EvalConfig:
    """Everything a run needs; mirrors the JSON config file field for field."""

    K: int = 5
    f: float = 0.8
    N_f: int = 5
    enlarged_size: int = 200
    public_fraction: float = 0.5
    n_public_calibration: int = 10
    master_seed: int = 2020
    hider_timeout_s: float = 60.0
    seeker_timeout_s: float = 60.0
    ridge_lambda: float = DEFAULT_RIDGE_LAMBDA
    auroc_skill: bool = False
    hiders: tuple[HiderSpec, ...] = ()
    seekers: tuple[SeekerSpec, ...] = ()
    sim: SimConfig | None = None
    data: str | None = None

    def __post_init__(self):
        if self.K < 1:
            raise ValueError("K must be >= 1")
        if not 0.0 <= self.f <= 1.0:
            raise ValueError("f must be in [0,1]")
        if self.N_f < 1:
            raise ValueError("N_f must be >= 1")
        if self.enlarged_size < 2:
            raise ValueError("enlarged_size must be >= 2")
        if self.enlarged_size % 2:
            log.warning("enlarged_size %d is odd; the member half is rounded down", self.enlarged_size)
        if self.hider_timeout_s <= 0 or self.seeker_timeout_s <= 0:
            raise ValueError("timeouts must be > 0")
        if (self.sim is None) == (self.data is None):
            raise ValueError("config needs exactly one of 'sim' or 'data'")
        for spec in (*self.hiders, *self.seekers):
            if not spec.name or not set(spec.name) <= _NAME_OK:
                raise ValueError(f"algorithm name {spec.name!r} must match [A-Za-z0-9_-]+")
        for specs in (self.hiders, self.seekers):
            names = [s.name for s in specs]
            if len(set(names)) != len(names):
                raise ValueError(f"duplicate algorithm names in registry: {names}")
        if not self.hiders or not self.seekers:
            raise ValueError("need at least one hider and one seeker")


def _spec_from_obj(obj: dict, cls):
    known = {"name", "builtin", "params", "command", "timeout_s"}
    unknown = set(obj) - known
    if unknown:
        raise ValueError(f"unknown keys in algorithm spec: {sorted(unknown)}")
    return cls(
        name=obj["name"],
        builtin=obj.get("builtin"),
        params=obj.get("params", {}),
        command=tuple(obj["command"]) if "command" in obj else None,
        timeout_s=obj.get("timeout_s"),
    )


def config_from_obj(obj: dict) -> EvalConfig:
    """Build an EvalConfig from a parsed JSON object, rejecting unknown keys."""
    obj = dict(obj)
    hiders = tuple(_spec_from_obj(h, HiderSpec) for h in obj.pop("hiders", []))
    seekers = tuple(_spec_from_obj(s, SeekerSpec) for s in obj.pop("seekers", []))
    sim = obj.pop("sim", None)
    if sim is not None:
        sim = SimConfig(**sim)
    known = {
        "K", "f", "N_f", "enlarged_size", "public_fraction", "n_public_calibration",
        "master_seed", "hider_timeout_s", "seeker_timeout_s", "ridge_lambda",
        "auroc_skill", "data",
    }
    unknown = set(obj) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    return EvalConfig(hiders=hiders, seekers=seekers, sim=sim, **obj)


def load_config(path: str | Path) -> EvalConfig:
    with open(path, encoding="utf-8") as fh:
        return config_from_obj(json.load(fh))


def config_to_obj(cfg: EvalConfig) -> dict:
    def spec_obj(spec):
        out = {"name": spec.name}
        if spec.builtin is not None:
            out["builtin"] = spec.builtin
            if spec.params:
                out["params"] = dict(spec.params)
        else:
            out["command"] = list(spec.command)
            if spec.timeout_s is not None:
                out["timeout_s"] = spec.timeout_s
        return out

    obj = {
        "K": cfg.K,
        "f": cfg.f,
        "N_f": cfg.N_f,
        "enlarged_size": cfg.enlarged_size,
        "public_fraction": cfg.public_fraction,
        "n_public_calibration": cfg.n_public_calibration,
        "master_seed": cfg.master_seed,
        "hider_timeout_s": cfg.hider_timeout_s,
        "seeker_timeout_s": cfg.seeker_timeout_s,
        "ridge_lambda": cfg.ridge_lambda,
        "auroc_skill": cfg.auroc_skill,
        "hiders": [spec_obj(s) for s in cfg.hiders],
        "seekers": [spec_obj(s) for s in cfg.seekers],
    }
    if cfg.sim is not None:
        obj["sim"] = asdict(cfg.sim)
    else:
        obj["data"] = cfg.data
    return obj


# ---------------------------------------------------------------------------
# external plugin invocation


@dataclass(frozen=True)
class InvocationResult:
    status: str  # ok | error | timeout | malformed
    duration_s: float
    detail: str = ""
    returncode: int | None = None

    @property
    def ok(self) -> bool:
        return self.status == "ok"


def invoke_external(
    command: tuple[str, ...] | list[str],
    input_dir: str | Path,
    output_dir: str | Path,
    timeout_s: float,
) -> InvocationResult:
    """Run an external algorithm `command --input <dir> --output <dir>`.

    Success requires exit code 0 within the wall-clock timeout; the caller
    validates the produced files and may downgrade the result to 'malformed'.
    """
    argv = [*command, "--input", str(input_dir), "--output", str(output_dir)]
    started = time.perf_counter()
    try:
        proc = subprocess.run(argv, capture_output=True, timeout=timeout_s)
    except subprocess.TimeoutExpired:
        return InvocationResult("timeout", time.perf_counter() - started,
                                f"killed after {timeout_s}s")
    except OSError as exc:
        return InvocationResult("error", time.perf_counter() - started, str(exc))
    duration = time.perf_counter() - started
    if proc.returncode != 0:
        tail = proc.stderr.decode("utf-8", errors="replace")[-500:]
        return InvocationResult("error", duration, tail, proc.returncode)
    return InvocationResult("ok", duration, returncode=0)


class _AlgorithmFailed(RuntimeError):
    def __init__(self, status: str, detail: str):
        super().__init__(f"{status}: {detail}")
        self.status = status
        self.detail = detail


def _run_hider(spec: HiderSpec, d_real: Dataset, seed: int, timeout_s: float) -> Dataset:
    """One hider invocation, builtin or external, with output validation."""
    if spec.is_external:
        with tempfile.TemporaryDirectory(prefix=f"hider_{spec.name}_") as scratch:
            input_dir = Path(scratch) / "input"
            output_dir = Path(scratch) / "output"
            dio.save_dataset(d_real, input_dir)
            output_dir.mkdir()
            result = invoke_external(
                spec.command, input_dir, output_dir, spec.timeout_s or timeout_s
            )
            if not result.ok:
                raise _AlgorithmFailed(result.status, result.detail)
            try:
                d_syn = dio.load_dataset(output_dir)
            except Exception as exc:  # noqa: BLE001 - wire boundary
                raise _AlgorithmFailed("malformed", str(exc)) from exc
    else:
        try:
            d_syn = run_builtin_hider(spec, d_real, seed)
        except Exception as exc:  # noqa: BLE001 - crash containment
            raise _AlgorithmFailed("error", f"{type(exc).__name__}: {exc}") from exc
    _validate_hider_output(spec.name, d_real, d_syn)
    return d_syn


def _validate_hider_output(name: str, d_real: Dataset, d_syn: Dataset) -> None:
    if d_syn.schema != d_real.schema:
        raise _AlgorithmFailed("malformed", f"hider {name!r} changed the schema")
    if len(d_syn) != len(d_real):
        raise _AlgorithmFailed(
            "malformed",
            f"hider {name!r} produced {len(d_syn)} records for {len(d_real)} inputs",
        )
    overlap = set(d_syn.ids) & set(d_real.ids)
    if overlap:
        raise _AlgorithmFailed(
            "malformed", f"hider {name!r} reused input ids: {sorted(overlap)[:5]}"
        )


def _run_seeker(
    spec: SeekerSpec,
    hider_name: str,
    d_syn: Dataset,
    d_enl: Dataset,
    calibration,
    seed: int,
    timeout_s: float,
) -> MembershipPrediction:
    """One non-classifier seeker invocation; external seekers get the full
    wire input tree (the classifier builtin is dispatched by the orchestrator
    so its attack model is fitted once per hider, not once per cell)."""
    if spec.is_external:
        with tempfile.TemporaryDirectory(prefix=f"seeker_{spec.name}_") as scratch:
            input_dir = Path(scratch) / "input"
            output_dir = Path(scratch) / "output"
            dio.save_dataset(d_syn, input_dir / "synthetic")
            dio.save_dataset(d_enl, input_dir / "enlarged")
            (input_dir / "hider_name.txt").write_text(hider_name + "\n", encoding="utf-8")
            for t, (cal_syn, cal_enl, cal_truth) in enumerate(calibration):
                cal_dir = input_dir / "calibration" / f"cal_{t}"
                dio.save_dataset(cal_syn, cal_dir / "synthetic")
                dio.save_dataset(cal_enl, cal_dir / "enlarged")
                dio.save_membership(cal_enl, cal_truth, cal_dir / "membership.csv")
            output_dir.mkdir()
            result = invoke_external(
                spec.command, input_dir, output_dir, spec.timeout_s or timeout_s
            )
            if not result.ok:
                raise _AlgorithmFailed(result.status, result.detail)
            try:
                ids = dio.load_prediction(output_dir / "prediction.csv")
            except FormatError as exc:
                raise _AlgorithmFailed("malformed", str(exc)) from exc
            stray = ids - set(d_enl.ids)
            if stray:
                raise _AlgorithmFailed(
                    "malformed",
                    f"prediction contains ids outside the enlarged set: {sorted(stray)[:5]}",
                )
            return MembershipPrediction(ids)
    try:
        if spec.builtin == "nn":
            return seeker_nn(d_syn, d_enl)
        if spec.builtin == "random":
            return seeker_random(d_enl, seed)
        raise ValueError(f"unknown builtin seeker {spec.builtin!r}")
    except Exception as exc:  # noqa: BLE001 - crash containment
        raise _AlgorithmFailed("error", f"{type(exc).__name__}: {exc}") from exc


# ---------------------------------------------------------------------------
# the protocol


@dataclass
class EvaluationReport:
    config: dict
    scoring_note: str
    feature_indices: list[int]
    instances: list[dict]
    hiders: dict
    seekers: dict
    cells: list[dict]
    invocations: list[dict]
    seeker_board: Leaderboard
    hider_board: Leaderboard
    leaderboard_text: str

    def to_json_obj(self) -> dict:
        def board_obj(board: Leaderboard) -> dict:
            out = {
                "track": board.track,
                "direction": board.direction,
                "entries": [
                    {"name": n, "score": s, "rank": r} for n, s, r in board.entries
                ],
            }
            if board.track == "hider":
                out["disqualified"] = list(board.disqualified)
            return out

        return {
            "config": self.config,
            "scoring_note": self.scoring_note,
            "feature_indices": self.feature_indices,
            "instances": self.instances,
            "hiders": self.hiders,
            "seekers": self.seekers,
            "cells": self.cells,
            "leaderboards": {
                "seekers": board_obj(self.seeker_board),
                "hiders": board_obj(self.hider_board),
            },
            "invocations": self.invocations,
        }


def acquire_dataset(cfg: EvalConfig) -> Dataset:
    if cfg.sim is not None:
        return simulate_dataset(cfg.sim)
    return dio.load_dataset(cfg.data)


def _instance_is_usable(d_real: Dataset, feature_indices) -> bool:
    labels = d_real.labels
    if labels.min() == labels.max():
        return False
    for l in feature_indices:
        observed = sum(1 for r in d_real.records if r.mask[:, l].any())
        if observed < 2:
            return False
    return True


def _sample_usable_instance(d_priv: Dataset, cfg: EvalConfig, i: int, feature_indices):
    for attempt in range(_MAX_INSTANCE_ATTEMPTS):
        seed = derive_seed(cfg.master_seed, "instance", i, attempt)
        d_enl, truth = sample_membership_instance(d_priv, cfg.enlarged_size, seed)
        d_real = extract_members(d_enl, truth)
        if _instance_is_usable(d_real, feature_indices):
            return d_enl, truth, d_real, attempt
    raise RuntimeError(
        f"could not draw a usable evaluation instance after {_MAX_INSTANCE_ATTEMPTS} tries"
    )


def publish_calibration(
    hiders: list[HiderSpec],
    d_pub: Dataset,
    cfg: EvalConfig,
    fail,
    invocation_log,
    workers: int = 1,
) -> dict[str, list]:
    """Build each hider's public calibration tuples (enlarged set, synthetic
    set, known membership) from independent draws of the public data.

    Returns {hider_name: [(d_syn, d_enl, truth), ...]}; hiders that fail here
    are reported through `fail` and excluded.
    """
    if cfg.enlarged_size > len(d_pub):
        raise FormatError(
            f"insufficient public data: need {cfg.enlarged_size} records per "
            f"calibration draw, have {len(d_pub)}"
        )
    draws = []
    for t in range(cfg.n_public_calibration):
        seed = derive_seed(cfg.master_seed, "calibration", t)
        d_enl, truth = sample_membership_instance(d_pub, cfg.enlarged_size, seed)
        draws.append((d_enl, truth, extract_members(d_enl, truth)))

    bundles: dict[str, list] = {spec.name: [] for spec in hiders}
    jobs = [
        (spec, t)
        for spec in hiders
        for t in range(cfg.n_public_calibration)
    ]

    def run_one(job):
        spec, t = job
        d_enl, truth, d_real = draws[t]
        seed = derive_seed(cfg.master_seed, "cal_hider", t, spec.name)
        started = time.perf_counter()
        try:
            d_syn = _run_hider(spec, d_real, seed, cfg.hider_timeout_s)
            return spec.name, t, d_syn, d_enl, truth, time.perf_counter() - started, None
        except _AlgorithmFailed as exc:
            return spec.name, t, None, d_enl, truth, time.perf_counter() - started, exc

    results = _parallel_map(run_one, jobs, workers)
    for name, t, d_syn, d_enl, truth, duration, err in results:
        invocation_log.append(
            {"algorithm": name, "phase": f"calibration_{t}", "duration_s": round(duration, 4),
             "status": "ok" if err is None else err.status}
        )
        if err is not None:
            fail("hider", name, err.status, f"calibration draw {t}: {err.detail}")
        elif name in bundles:
            bundles[name].append((d_syn, d_enl, truth))
    return bundles


def _parallel_map(fn, jobs, workers):
    if workers <= 1 or len(jobs) <= 1:
        return [fn(job) for job in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs))


def run_protocol(cfg: EvalConfig, out_dir: str | Path, workers: int = 1) -> EvaluationReport:
    """Execute the full protocol and write artifacts under out_dir.

    Artifacts: run_config.json, report.json, leaderboard.json, calibration/
    (per-hider public bundles), and instances/ (enlarged sets, ground truth,
    synthetic sets, quality scores, per-seeker predictions). Only fully
    successful algorithms leave artifacts; failures are recorded in
    report.json and the run continues without them.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    failures: dict[str, dict] = {}
    invocation_log: list[dict] = []

    def fail(track: str, name: str, reason: str, detail: str):
        if name not in failures:
            failures[name] = {"track": track, "reason": reason, "detail": detail}
            log.warning("%s %r failed (%s): %s", track, name, reason, detail)

    dataset = acquire_dataset(cfg)
    d_pub, d_priv = split_public_private(
        dataset, cfg.public_fraction, derive_seed(cfg.master_seed, "public")
    )
    if cfg.enlarged_size > len(d_priv):
        raise ValueError(
            f"enlarged_size {cfg.enlarged_size} exceeds private pool {len(d_priv)}"
        )

    n_temporal = dataset.schema.n_temporal
    if cfg.N_f > n_temporal:
        raise ValueError(f"N_f {cfg.N_f} exceeds the {n_temporal} temporal features")
    feature_rng = rng_from(cfg.master_seed, "features")
    feature_indices = tuple(sorted(feature_rng.permutation(n_temporal)[: cfg.N_f].tolist()))

    # --- calibration bundles on public data (also feeds the classifier seeker)
    calibration = publish_calibration(
        list(cfg.hiders), d_pub, cfg, fail, invocation_log, workers
    )

    # --- evaluation instances
    instances = []
    for i in range(cfg.K):
        d_enl, truth, d_real, attempt = _sample_usable_instance(d_priv, cfg, i, feature_indices)
        instances.append({"d_enl": d_enl, "truth": truth, "d_real": d_real, "attempt": attempt})

    trtr_refs: list[TrtrReference] = [
        trtr_reference(inst["d_real"], feature_indices, cfg.ridge_lambda) for inst in instances
    ]

    # --- hiders on every instance
    hider_jobs = [
        (spec, i)
        for spec in cfg.hiders
        if spec.name not in failures
        for i in range(cfg.K)
    ]

    def run_hider_job(job):
        spec, i = job
        seed = derive_seed(cfg.master_seed, "hider", i, spec.name)
        started = time.perf_counter()
        try:
            d_syn = _run_hider(spec, instances[i]["d_real"], seed, cfg.hider_timeout_s)
            return spec.name, i, d_syn, time.perf_counter() - started, None
        except _AlgorithmFailed as exc:
            return spec.name, i, None, time.perf_counter() - started, exc

    synthetic: dict[tuple[str, int], Dataset] = {}
    for name, i, d_syn, duration, err in _parallel_map(run_hider_job, hider_jobs, workers):
        invocation_log.append(
            {"algorithm": name, "phase": f"instance_{i}", "duration_s": round(duration, 4),
             "status": "ok" if err is None else err.status}
        )
        if err is not None:
            fail("hider", name, err.status, f"instance {i}: {err.detail}")
        else:
            synthetic[(name, i)] = d_syn

    hiders_ok = [s for s in cfg.hiders if s.name not in failures]

    # --- quality bar
    quality: dict[tuple[str, int], QualityReport | dict] = {}

    def run_quality_job(job):
        spec, i = job
        try:
            report = evaluate_quality(
                synthetic[(spec.name, i)],
                instances[i]["d_real"],
                feature_indices,
                trtr_refs[i],
                cfg.f,
                cfg.ridge_lambda,
                cfg.auroc_skill,
            )
            return spec.name, i, report
        except DegenerateTaskError as exc:
            return spec.name, i, {"error": str(exc)}
        except Exception as exc:  # noqa: BLE001 - pathological synthetic data
            return spec.name, i, {"error": f"{type(exc).__name__}: {exc}"}

    quality_jobs = [(spec, i) for spec in hiders_ok for i in range(cfg.K)]
    for name, i, report in _parallel_map(run_quality_job, quality_jobs, workers):
        quality[(name, i)] = report

    qualified: dict[str, bool] = {}
    for spec in hiders_ok:
        reports = [quality[(spec.name, i)] for i in range(cfg.K)]
        qualified[spec.name] = all(
            isinstance(r, QualityReport) and r.qualified for r in reports
        )

    # --- seekers: classifier attack models are fitted once per target hider
    attack_models: dict[str, AttackModel | None] = {}
    needs_classifier = any(s.builtin == "classifier" for s in cfg.seekers)
    if needs_classifier:
        for spec in hiders_ok:
            try:
                attack_models[spec.name] = fit_attack_model(calibration[spec.name])
            except Exception as exc:  # noqa: BLE001
                attack_models[spec.name] = None
                log.warning("attack model for %r failed: %s", spec.name, exc)

    seeker_jobs = [
        (sspec, hspec, i)
        for sspec in cfg.seekers
        for hspec in hiders_ok
        for i in range(cfg.K)
    ]

    def run_seeker_job(job):
        sspec, hspec, i = job
        seed = derive_seed(cfg.master_seed, "cell", i, hspec.name, sspec.name)
        started = time.perf_counter()
        try:
            if sspec.builtin == "classifier":
                attack = attack_models.get(hspec.name)
                if attack is None:
                    raise _AlgorithmFailed("error", f"no attack model for {hspec.name!r}")
                scores = attack.score(synthetic[(hspec.name, i)], instances[i]["d_enl"])
                pred = _top_half_by_score(instances[i]["d_enl"], scores)
            else:
                pred = _run_seeker(
                    sspec,
                    hspec.name,
                    synthetic[(hspec.name, i)],
                    instances[i]["d_enl"],
                    calibration.get(hspec.name, []),
                    seed,
                    cfg.seeker_timeout_s,
                )
            return sspec.name, hspec.name, i, pred, time.perf_counter() - started, None
        except _AlgorithmFailed as exc:
            return sspec.name, hspec.name, i, None, time.perf_counter() - started, exc
        except Exception as exc:  # noqa: BLE001 - crash containment
            failure = _AlgorithmFailed("error", f"{type(exc).__name__}: {exc}")
            return sspec.name, hspec.name, i, None, time.perf_counter() - started, failure

    predictions: dict[tuple[str, str, int], MembershipPrediction] = {}
    for sname, hname, i, pred, duration, err in _parallel_map(run_seeker_job, seeker_jobs, workers):
        invocation_log.append(
            {"algorithm": sname, "phase": f"cell_{i}_{hname}", "duration_s": round(duration, 4),
             "status": "ok" if err is None else err.status}
        )
        if err is not None:
            fail("seeker", sname, err.status, f"instance {i} vs {hname!r}: {err.detail}")
        else:
            predictions[(sname, hname, i)] = pred

    seekers_ok = [s for s in cfg.seekers if s.name not in failures]

    # --- tensor and leaderboards
    hider_names = tuple(s.name for s in hiders_ok)
    seeker_names = tuple(s.name for s in seekers_ok)
    cells = {}
    for k, sname in enumerate(seeker_names):
        for j, hname in enumerate(hider_names):
            for i in range(cfg.K):
                cells[(i, j, k)] = accuracy_score(
                    predictions[(sname, hname, i)], instances[i]["truth"]
                )
    tensor = ScoreTensor(
        K=cfg.K,
        hider_names=hider_names,
        seeker_names=seeker_names,
        cells=cells,
        qualified={j: qualified[name] for j, name in enumerate(hider_names)},
    )
    seeker_board, hider_board = build_leaderboards(tensor)
    lb_text = leaderboard_json_text(
        seeker_board,
        hider_board,
        {"K": cfg.K, "f": cfg.f, "N_f": cfg.N_f, "seed": cfg.master_seed},
    )

    report = _assemble_report(
        cfg, feature_indices, instances, tensor, quality, qualified,
        failures, invocation_log, seeker_board, hider_board, lb_text,
    )
    _write_artifacts(out, cfg, instances, synthetic, quality, predictions,
                     calibration, failures, report)
    return report


def _quality_obj(report: QualityReport | dict) -> dict:
    if isinstance(report, dict):
        return report
    return {
        "feature_indices": list(report.feature_indices),
        "feature_tstr": list(report.feature_tstr),
        "feature_trtr": list(report.feature_trtr),
        "feature_kinds": list(report.feature_kinds),
        "seq_tstr": report.seq_tstr,
        "seq_trtr": report.seq_trtr,
        "class_tstr": report.class_tstr,
        "class_trtr": report.class_trtr,
        "f": report.f,
        "qualified": report.qualified,
    }


def _quality_from_obj(obj: dict) -> QualityReport:
    return QualityReport(
        feature_indices=tuple(obj["feature_indices"]),
        feature_tstr=tuple(obj["feature_tstr"]),
        feature_trtr=tuple(obj["feature_trtr"]),
        feature_kinds=tuple(obj["feature_kinds"]),
        seq_tstr=obj["seq_tstr"],
        seq_trtr=obj["seq_trtr"],
        class_tstr=obj["class_tstr"],
        class_trtr=obj["class_trtr"],
        f=obj["f"],
        qualified=obj["qualified"],
    )


def _assemble_report(
    cfg, feature_indices, instances, tensor, quality, qualified,
    failures, invocation_log, seeker_board, hider_board, lb_text,
) -> EvaluationReport:
    hider_info = {}
    for spec in cfg.hiders:
        name = spec.name
        if name in failures:
            hider_info[name] = {"status": "failed", **failures[name]}
            continue
        j = tensor.hider_names.index(name)
        hider_info[name] = {
            "status": "ok",
            "qualified": qualified[name],
            "reid_score": hider_reid_score(tensor, j),
            "quality": [
                _quality_obj(quality[(name, i)]) for i in range(cfg.K)
            ],
        }
    seeker_info = {}
    for spec in cfg.seekers:
        name = spec.name
        if name in failures:
            seeker_info[name] = {"status": "failed", **failures[name]}
            continue
        k = tensor.seeker_names.index(name)
        seeker_info[name] = {"status": "ok", "overall": seeker_overall(tensor, k)}

    cell_rows = [
        {
            "instance": i,
            "hider": tensor.hider_names[j],
            "seeker": tensor.seeker_names[k],
            "accuracy": tensor.cells[(i, j, k)],
            "counts_for_boards": tensor.qualified.get(j, False),
        }
        for (i, j, k) in sorted(tensor.cells)
    ]
    instance_rows = [
        {
            "index": i,
            "enlarged_size": len(inst["d_enl"]),
            "n_members": inst["truth"].n_members,
            "sampling_attempt": inst["attempt"],
        }
        for i, inst in enumerate(instances)
    ]
    return EvaluationReport(
        config=config_to_obj(cfg),
        scoring_note=SCORING_NOTE,
        feature_indices=list(feature_indices),
        instances=instance_rows,
        hiders=hider_info,
        seekers=seeker_info,
        cells=cell_rows,
        invocations=invocation_log,
        seeker_board=seeker_board,
        hider_board=hider_board,
        leaderboard_text=lb_text,
    )


def _write_artifacts(
    out: Path, cfg, instances, synthetic, quality, predictions, calibration,
    failures, report: EvaluationReport,
) -> None:
    (out / "run_config.json").write_text(
        json.dumps(config_to_obj(cfg), indent=2) + "\n", encoding="utf-8"
    )
    (out / "leaderboard.json").write_text(report.leaderboard_text, encoding="utf-8")
    (out / "report.json").write_text(
        json.dumps(report.to_json_obj(), indent=2) + "\n", encoding="utf-8"
    )

    cal_root = out / "calibration"
    if cal_root.exists():
        shutil.rmtree(cal_root)
    for name, tuples in calibration.items():
        if name in failures:
            continue
        for t, (d_syn, d_enl, truth) in enumerate(tuples):
            cal_dir = cal_root / name / f"cal_{t}"
            dio.save_dataset(d_syn, cal_dir / "synthetic")
            dio.save_dataset(d_enl, cal_dir / "enlarged")
            dio.save_membership(d_enl, truth, cal_dir / "membership.csv")

    inst_root = out / "instances"
    if inst_root.exists():
        shutil.rmtree(inst_root)
    seeker_ok_names = [s.name for s in cfg.seekers if s.name not in failures]
    for i, inst in enumerate(instances):
        idir = inst_root / f"instance_{i}"
        dio.save_dataset(inst["d_enl"], idir / "enlarged")
        dio.save_membership(inst["d_enl"], inst["truth"], idir / "membership.csv")
        for spec in cfg.hiders:
            if spec.name in failures:
                continue
            hdir = idir / "hiders" / spec.name
            dio.save_dataset(synthetic[(spec.name, i)], hdir / "synthetic")
            (hdir / "quality.json").write_text(
                json.dumps(_quality_obj(quality[(spec.name, i)]), indent=2) + "\n",
                encoding="utf-8",
            )
            pdir = hdir / "predictions"
            pdir.mkdir(parents=True, exist_ok=True)
            for sname in seeker_ok_names:
                dio.save_prediction(
                    predictions[(sname, spec.name, i)].predicted_member_ids,
                    pdir / f"{sname}.csv",
                )


def rescore_report(out_dir: str | Path) -> str:
    """Recompute leaderboard.json purely from stored artifacts.

    Reads the config echo, per-instance ground truth, quality scores, and
    per-seeker predictions; algorithms without complete artifacts were failed
    in the original run and stay excluded. Returns the leaderboard JSON text.
    """
    out = Path(out_dir)
    cfg_obj = json.loads((out / "run_config.json").read_text(encoding="utf-8"))
    K = int(cfg_obj["K"])
    f = float(cfg_obj["f"])
    auroc_skill = bool(cfg_obj.get("auroc_skill", False))
    hider_names_all = [h["name"] for h in cfg_obj["hiders"]]
    seeker_names_all = [s["name"] for s in cfg_obj["seekers"]]

    inst_root = out / "instances"
    truths = [
        dio.load_membership(inst_root / f"instance_{i}" / "membership.csv")
        for i in range(K)
    ]

    def hider_complete(name: str) -> bool:
        return all(
            (inst_root / f"instance_{i}" / "hiders" / name / "quality.json").is_file()
            for i in range(K)
        )

    hider_names = [n for n in hider_names_all if hider_complete(n)]

    def seeker_complete(name: str) -> bool:
        return all(
            (inst_root / f"instance_{i}" / "hiders" / h / "predictions" / f"{name}.csv").is_file()
            for i in range(K)
            for h in hider_names
        )

    seeker_names = [n for n in seeker_names_all if seeker_complete(n)]

    qualified = {}
    for j, name in enumerate(hider_names):
        flags = []
        for i in range(K):
            qpath = inst_root / f"instance_{i}" / "hiders" / name / "quality.json"
            obj = json.loads(qpath.read_text(encoding="utf-8"))
            if "error" in obj:
                flags.append(False)
            else:
                flags.append(qualify(_quality_from_obj(obj), f, auroc_skill=auroc_skill))
        qualified[j] = all(flags)

    cells = {}
    for k, sname in enumerate(seeker_names):
        for j, hname in enumerate(hider_names):
            for i in range(K):
                pred = dio.load_prediction(
                    inst_root / f"instance_{i}" / "hiders" / hname / "predictions" / f"{sname}.csv"
                )
                cells[(i, j, k)] = accuracy_score(MembershipPrediction(pred), truths[i])

    tensor = ScoreTensor(
        K=K,
        hider_names=tuple(hider_names),
        seeker_names=tuple(seeker_names),
        cells=cells,
        qualified=qualified,
    )
    seeker_board, hider_board = build_leaderboards(tensor)
    return leaderboard_json_text(
        seeker_board,
        hider_board,
        {"K": K, "f": f, "N_f": int(cfg_obj["N_f"]), "seed": int(cfg_obj["master_seed"])},
    )
