"""Pair ingestion, filtering, dedup, splitting, and JSONL persistence.

Directory convention: each pair lives in ``<corpus>/<id>/buggy.js`` and
``<corpus>/<id>/fixed.js``. When the subset parser rejects a file, a sibling
``buggy.estree.json`` / ``fixed.estree.json`` (ESTree emitted by an external
parser) is used instead, so full-language files can still enter the corpus.
"""

from __future__ import annotations

import hashlib
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import diffs, slicing
from .syntax import ingest_estree, parse
from .syntax.tree import ParseError, SourceFile, SyntaxTree

MAX_LINE_LENGTH = 1000  # DD: longer lines are treated as minified output
MINIFIED_BYTES = 500  # files of <= 2 lines above this size count as minified


@dataclass
class RawPair:
    id: str
    buggy: SourceFile
    fixed: SourceFile
    origin: str | None = None


@dataclass
class Datapoint:
    id: str
    buggy_source: str
    fixed_source: str
    buggy_line: int
    fixed_line: int
    edit: diffs.GraphEdit
    sliced_single: slicing.SlicedPair | None = None
    sliced_dual: slicing.SlicedPair | None = None
    origin: str | None = None


@dataclass
class SplitSpec:
    train: float = 0.8
    test: float = 0.1
    validation: float = 0.1
    seed: int = 0

    def __post_init__(self):
        total = self.train + self.test + self.validation
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"split fractions sum to {total}, expected 1")


@dataclass
class FilterReport:
    total: int = 0
    kept: int = 0
    rejected: dict[str, int] = field(default_factory=dict)
    edit_ops: dict[str, int] = field(default_factory=dict)

    def reject(self, reason: str):
        self.rejected[reason] = self.rejected.get(reason, 0) + 1

    def to_json(self) -> dict:
        return {
            "total": self.total,
            "kept": self.kept,
            "rejected": dict(sorted(self.rejected.items())),
            "edit_ops": dict(sorted(self.edit_ops.items())),
        }


def is_minified(content: str) -> bool:
    lines = content.split("\n")
    if any(len(line) > MAX_LINE_LENGTH for line in lines):
        return True
    real_lines = len(lines) - (1 if lines and lines[-1] == "" else 0)
    return real_lines <= 2 and len(content.encode("utf-8")) > MINIFIED_BYTES


def load_pairs(corpus_dir: str | Path) -> list[RawPair]:
    corpus_dir = Path(corpus_dir)
    if not corpus_dir.is_dir():
        raise FileNotFoundError(f"corpus directory not found: {corpus_dir}")
    pairs = []
    for entry in sorted(corpus_dir.iterdir()):
        buggy = entry / "buggy.js"
        fixed = entry / "fixed.js"
        if not (entry.is_dir() and buggy.exists() and fixed.exists()):
            continue
        origin_file = entry / "origin.txt"
        pairs.append(
            RawPair(
                entry.name,
                SourceFile(str(buggy), buggy.read_text(encoding="utf-8")),
                SourceFile(str(fixed), fixed.read_text(encoding="utf-8")),
                origin_file.read_text(encoding="utf-8").strip() if origin_file.exists() else None,
            )
        )
    return pairs


def parse_or_ingest(source: SourceFile) -> SyntaxTree:
    try:
        return parse(source.content)
    except ParseError:
        estree = Path(source.path).with_suffix(".estree.json")
        if estree.exists():
            return ingest_estree(estree.read_text(encoding="utf-8"), source.content)
        raise


def _examine(pair: RawPair):
    if is_minified(pair.buggy.content) or is_minified(pair.fixed.content):
        return "minified", None
    try:
        buggy_tree = parse_or_ingest(pair.buggy)
        fixed_tree = parse_or_ingest(pair.fixed)
    except ParseError:
        return "unparseable", None
    diff = diffs.ast_diff(buggy_tree, fixed_tree)
    if isinstance(diff, diffs.NoDifference):
        return "no_difference", None
    if isinstance(diff, diffs.NotOneNode):
        return "not_one_node", None
    return None, Datapoint(
        pair.id,
        pair.buggy.content,
        pair.fixed.content,
        diff.buggy_line,
        diff.fixed_line,
        diff.edit,
        origin=pair.origin,
    )


def filter_pairs(
    pairs: list[RawPair], threads: int = 1
) -> tuple[list[Datapoint], FilterReport]:
    """Keep pairs that parse, are not minified, and differ by one node."""
    report = FilterReport(total=len(pairs))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_examine, pairs))
    else:
        results = [_examine(pair) for pair in pairs]
    kept = []
    for reason, datapoint in results:
        if reason is not None:
            report.reject(reason)
        else:
            kept.append(datapoint)
            op = datapoint.edit.op
            report.edit_ops[op] = report.edit_ops.get(op, 0) + 1
    report.kept = len(kept)
    return kept, report


def _normalized_hash(datapoint: Datapoint) -> str:
    def norm(text: str) -> str:
        return "\n".join(line.rstrip() for line in text.split("\n"))

    digest = hashlib.sha256()
    digest.update(norm(datapoint.buggy_source).encode("utf-8"))
    digest.update(b"\x00")
    digest.update(norm(datapoint.fixed_source).encode("utf-8"))
    return digest.hexdigest()


def dedup(datapoints: list[Datapoint]) -> list[Datapoint]:
    """Drop exact duplicates (trailing whitespace ignored); applied before the
    split so no pair can sit in both train and test."""
    seen = set()
    out = []
    for datapoint in datapoints:
        key = _normalized_hash(datapoint)
        if key not in seen:
            seen.add(key)
            out.append(datapoint)
    return out


def split(
    datapoints: list[Datapoint], spec: SplitSpec
) -> dict[str, list[Datapoint]]:
    """Seeded random partition; test/validation get the floor of their
    fractions and train the remainder."""
    import numpy as np

    if len(datapoints) < 3:
        raise ValueError(f"corpus of {len(datapoints)} datapoints cannot be split")
    order = np.random.default_rng(spec.seed).permutation(len(datapoints))
    shuffled = [datapoints[i] for i in order]
    n = len(shuffled)
    n_test = int(n * spec.test)
    n_val = int(n * spec.validation)
    n_train = n - n_test - n_val
    return {
        "train": shuffled[:n_train],
        "test": shuffled[n_train : n_train + n_test],
        "validation": shuffled[n_train + n_test :],
    }


# -- JSONL persistence -----------------------------------------------------


def _edit_to_json(edit: diffs.GraphEdit) -> dict:
    out = {"op": edit.op, "location": edit.location}
    if edit.position is not None:
        out["position"] = edit.position
    if edit.kind_label is not None:
        out["kind_label"] = edit.kind_label
    if edit.value_token is not None:
        out["value_token"] = edit.value_token
    return out


def _edit_from_json(data: dict) -> diffs.GraphEdit:
    return diffs.GraphEdit(
        data["op"],
        data["location"],
        data.get("position"),
        data.get("kind_label"),
        data.get("value_token"),
    )


def datapoint_to_json(datapoint: Datapoint) -> dict:
    out = {
        "id": datapoint.id,
        "buggy_source": datapoint.buggy_source,
        "fixed_source": datapoint.fixed_source,
        "buggy_line": datapoint.buggy_line,
        "fixed_line": datapoint.fixed_line,
        "edit": _edit_to_json(datapoint.edit),
    }
    if datapoint.sliced_single is not None:
        out["sliced_single"] = datapoint.sliced_single.to_json()
    if datapoint.sliced_dual is not None:
        out["sliced_dual"] = datapoint.sliced_dual.to_json()
    if datapoint.origin is not None:
        out["origin"] = datapoint.origin
    return out


def datapoint_from_json(data: dict) -> Datapoint:
    return Datapoint(
        data["id"],
        data["buggy_source"],
        data["fixed_source"],
        data["buggy_line"],
        data["fixed_line"],
        _edit_from_json(data["edit"]),
        slicing.SlicedPair.from_json(data["sliced_single"]) if "sliced_single" in data else None,
        slicing.SlicedPair.from_json(data["sliced_dual"]) if "sliced_dual" in data else None,
        data.get("origin"),
    )


def write_jsonl(datapoints: list[Datapoint], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for datapoint in datapoints:
            handle.write(json.dumps(datapoint_to_json(datapoint), sort_keys=True))
            handle.write("\n")


def read_jsonl(path: str | Path) -> list[Datapoint]:
    out = []
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                out.append(datapoint_from_json(json.loads(line)))
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise ValueError(f"{path}:{lineno}: malformed datapoint record: {exc}")
    return out


def attach_slices(
    datapoints: list[Datapoint], mode: str, threads: int = 1
) -> tuple[list[Datapoint], dict[str, int]]:
    """Compute sliced pairs for each datapoint; drops datapoints whose sliced
    pair no longer reproduces a one-node diff (counted, not raised)."""
    if mode not in ("single", "dual", "none"):
        raise ValueError(f"unknown slicing mode {mode!r}")
    failures = {"slice_failed": 0, "sliced_diff_invalid": 0}
    if mode == "none":
        return datapoints, failures

    def work(datapoint: Datapoint):
        pair = RawPair(
            datapoint.id,
            SourceFile("buggy.js", datapoint.buggy_source),
            SourceFile("fixed.js", datapoint.fixed_source),
        )
        diff = diffs.DiffResult(datapoint.edit, datapoint.buggy_line, datapoint.fixed_line)
        try:
            datapoint.sliced_single = slicing.single_slice(pair, diff)
            if mode == "dual":
                datapoint.sliced_dual = slicing.dual_slice(pair, diff)
        except Exception:
            return "slice_failed"
        sliced = diffs.ast_diff(
            parse(datapoint.sliced_single.buggy_text),
            parse(datapoint.sliced_single.fixed_text),
        )
        if not isinstance(sliced, diffs.DiffResult):
            return "sliced_diff_invalid"
        return None

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(work, datapoints))
    else:
        outcomes = [work(datapoint) for datapoint in datapoints]
    kept = []
    for datapoint, outcome in zip(datapoints, outcomes):
        if outcome is None:
            kept.append(datapoint)
        else:
            failures[outcome] += 1
    return kept, failures
