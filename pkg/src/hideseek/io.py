"""On-disk dataset format plus the small CSV side-files of the wire contract.

A dataset directory holds exactly three files:

  schema.json   {"static": [{"name": ..., "kind": ...}, ...],
                 "temporal": [...], "label": "<name>"}
                where kind is "continuous", "binary", or {"categorical": k}
  static.csv    header: record_id,<static names...>,<label name>
  temporal.csv  header: record_id,t,feature,value (long format, 0-based t);
                a missing (record_id, t, feature) row means the entry is masked

All files are UTF-8 with LF line endings and comma delimiters; values are
written as shortest round-trip decimal text, so save -> load -> save is
byte-stable. A record's length is the largest t present plus one, so a
trailing fully-masked time step is not representable; the simulator and the
built-in hiders never emit one.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

import numpy as np

from hideseek.data import (
    Dataset,
    Feature,
    FeatureSchema,
    FormatError,
    MembershipGroundTruth,
    Record,
    SchemaError,
)

SCHEMA_FILE = "schema.json"
STATIC_FILE = "static.csv"
TEMPORAL_FILE = "temporal.csv"


def _kind_to_json(f: Feature):
    if f.kind == "categorical":
        return {"categorical": f.levels}
    return f.kind


def _kind_from_json(name: str, kind) -> Feature:
    if kind == "continuous":
        return Feature(name, "continuous")
    if kind == "binary":
        return Feature(name, "binary")
    if isinstance(kind, dict) and set(kind) == {"categorical"}:
        return Feature(name, "categorical", int(kind["categorical"]))
    raise FormatError(f"schema.json: unknown kind {kind!r} for feature {name!r}")


def schema_to_json_text(schema: FeatureSchema) -> str:
    obj = {
        "static": [{"name": f.name, "kind": _kind_to_json(f)} for f in schema.static],
        "temporal": [{"name": f.name, "kind": _kind_to_json(f)} for f in schema.temporal],
        "label": schema.label_name,
    }
    return json.dumps(obj, separators=(",", ":")) + "\n"


def schema_from_json_text(text: str) -> FeatureSchema:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"schema.json is not valid JSON: {exc}") from exc
    for key in ("static", "temporal", "label"):
        if key not in obj:
            raise FormatError(f"schema.json: missing key {key!r}")
    static = tuple(_kind_from_json(f["name"], f["kind"]) for f in obj["static"])
    temporal = tuple(_kind_from_json(f["name"], f["kind"]) for f in obj["temporal"])
    return FeatureSchema(static, temporal, obj["label"])


def format_value(value: float, feat: Feature) -> str:
    """Render one cell: integers for level-valued kinds, repr for continuous."""
    if feat.is_continuous:
        return repr(float(value))
    return str(int(value))


def save_dataset(dataset: Dataset, path: str | os.PathLike) -> None:
    """Write `dataset` to `path` in the dataset-directory format."""
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    schema = dataset.schema

    (out / SCHEMA_FILE).write_text(schema_to_json_text(schema), encoding="utf-8")

    header = ",".join(["record_id", *schema.static_names, schema.label_name])
    lines = [header]
    for r in dataset.records:
        cells = [str(r.record_id)]
        cells.extend(format_value(v, f) for v, f in zip(r.static_values, schema.static))
        cells.append(str(r.label))
        lines.append(",".join(cells))
    (out / STATIC_FILE).write_text("\n".join(lines) + "\n", encoding="utf-8")

    tlines = ["record_id,t,feature,value"]
    for r in dataset.records:
        for t in range(r.length):
            row_mask = r.mask[t]
            for j, feat in enumerate(schema.temporal):
                if row_mask[j]:
                    tlines.append(
                        f"{r.record_id},{t},{feat.name},"
                        f"{format_value(r.temporal_values[t, j], feat)}"
                    )
    (out / TEMPORAL_FILE).write_text("\n".join(tlines) + "\n", encoding="utf-8")


def _read_lines(path: Path) -> list[str]:
    if not path.is_file():
        raise FormatError(f"missing file: {path}")
    text = path.read_text(encoding="utf-8")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return lines


def _parse_cell(text: str, feat: Feature, record_id) -> float:
    try:
        value = float(text)
    except ValueError as exc:
        raise FormatError(
            f"record {record_id}: cannot parse {text!r} for feature {feat.name!r}"
        ) from exc
    return value


def load_dataset(path: str | os.PathLike) -> Dataset:
    """Load a dataset directory, validating the schema and every value.

    Raises FormatError for structural problems (missing files, bad headers,
    unknown ids) and SchemaError for value-level violations; both name the
    offending record and feature where applicable.
    """
    root = Path(path)
    schema_path = root / SCHEMA_FILE
    if not schema_path.is_file():
        raise FormatError(f"missing file: {schema_path}")
    schema = schema_from_json_text(schema_path.read_text(encoding="utf-8"))

    static_lines = _read_lines(root / STATIC_FILE)
    expected_header = ",".join(["record_id", *schema.static_names, schema.label_name])
    if not static_lines or static_lines[0] != expected_header:
        raise FormatError(
            f"static.csv header mismatch: expected {expected_header!r}, "
            f"got {static_lines[0] if static_lines else ''!r}"
        )

    order: list[int] = []
    statics: dict[int, np.ndarray] = {}
    labels: dict[int, int] = {}
    n_cols = 2 + schema.n_static
    for line in static_lines[1:]:
        cells = line.split(",")
        if len(cells) != n_cols:
            raise FormatError(f"static.csv: expected {n_cols} columns, got {len(cells)}")
        try:
            rid = int(cells[0])
        except ValueError as exc:
            raise FormatError(f"static.csv: bad record_id {cells[0]!r}") from exc
        if rid in statics:
            raise FormatError(f"duplicate record_id {rid}")
        values = np.array(
            [_parse_cell(c, f, rid) for c, f in zip(cells[1:-1], schema.static)],
            dtype=np.float64,
        )
        try:
            label = int(cells[-1])
        except ValueError as exc:
            raise FormatError(f"record {rid}: bad label {cells[-1]!r}") from exc
        order.append(rid)
        statics[rid] = values
        labels[rid] = label

    temporal_lines = _read_lines(root / TEMPORAL_FILE)
    if not temporal_lines or temporal_lines[0] != "record_id,t,feature,value":
        raise FormatError("temporal.csv header mismatch")
    feat_index = {f.name: j for j, f in enumerate(schema.temporal)}
    cells_by_record: dict[int, list[tuple[int, int, float]]] = {rid: [] for rid in order}
    for line in temporal_lines[1:]:
        parts = line.split(",")
        if len(parts) != 4:
            raise FormatError(f"temporal.csv: expected 4 columns, got {len(parts)}")
        try:
            rid = int(parts[0])
            t = int(parts[1])
        except ValueError as exc:
            raise FormatError(f"temporal.csv: bad record_id/t in {line!r}") from exc
        if rid not in cells_by_record:
            raise FormatError(f"temporal.csv references unknown record_id {rid}")
        if parts[2] not in feat_index:
            raise FormatError(f"temporal.csv: unknown feature {parts[2]!r}")
        if t < 0:
            raise FormatError(f"record {rid}: negative time step {t}")
        j = feat_index[parts[2]]
        value = _parse_cell(parts[3], schema.temporal[j], rid)
        cells_by_record[rid].append((t, j, value))

    records = []
    d = schema.n_temporal
    for rid in order:
        entries = cells_by_record[rid]
        length = 1 + max((t for t, _, _ in entries), default=-1)
        values = np.zeros((length, d))
        mask = np.zeros((length, d), dtype=bool)
        for t, j, value in entries:
            if mask[t, j]:
                raise FormatError(
                    f"temporal.csv: duplicate entry for record {rid}, t={t}, "
                    f"feature {schema.temporal[j].name!r}"
                )
            values[t, j] = value
            mask[t, j] = True
        records.append(Record(rid, statics[rid], values, mask, labels[rid]))

    return Dataset(schema, tuple(records))


def save_membership(dataset: Dataset, truth: MembershipGroundTruth, path: str | os.PathLike) -> None:
    """Write membership.csv (record_id,is_member) in dataset order."""
    lines = ["record_id,is_member"]
    for r in dataset.records:
        lines.append(f"{r.record_id},{1 if r.record_id in truth.member_ids else 0}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_membership(path: str | os.PathLike) -> MembershipGroundTruth:
    lines = _read_lines(Path(path))
    if not lines or lines[0] != "record_id,is_member":
        raise FormatError(f"{path}: bad membership header")
    enlarged, members = set(), set()
    for line in lines[1:]:
        rid_text, flag = line.split(",")
        rid = int(rid_text)
        enlarged.add(rid)
        if flag == "1":
            members.add(rid)
        elif flag != "0":
            raise FormatError(f"{path}: is_member must be 0/1, got {flag!r}")
    return MembershipGroundTruth(frozenset(enlarged), frozenset(members))


def save_prediction(ids, path: str | os.PathLike) -> None:
    """Write prediction.csv: one predicted-member record_id per line, sorted."""
    text = "".join(f"{int(i)}\n" for i in sorted(int(i) for i in ids))
    Path(path).write_text(text, encoding="utf-8")


def load_prediction(path: str | os.PathLike) -> frozenset[int]:
    p = Path(path)
    if not p.is_file():
        raise FormatError(f"missing file: {p}")
    ids = []
    for line in p.read_text(encoding="utf-8").split("\n"):
        if line == "":
            continue
        try:
            ids.append(int(line))
        except ValueError as exc:
            raise FormatError(f"{p}: bad record_id line {line!r}") from exc
    if len(set(ids)) != len(ids):
        raise FormatError(f"{p}: duplicate predicted ids")
    return frozenset(ids)
