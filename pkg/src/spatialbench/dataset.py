"""On-disk dataset layout, manifest schema, and prediction import.

Layout under a dataset directory:

    imagesTr/{case_id}_{c:04d}.png   one 8-bit grayscale PNG per channel, on=255
    labelsTr/{case_id}.png           8-bit grayscale, on=1
    dataset.json                     manifest (schema below)

Writes go to a temporary sibling directory and are renamed into place once
complete, so readers never observe a partial dataset. The manifest is
serialized with sorted keys and a trailing newline; identical inputs yield
byte-identical trees.
"""

from __future__ import annotations

import json
import os
import re
import shutil
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import BitMask
from .pngio import read_foreground, read_gray, write_png

SCHEMA_VERSION = 1
GENERATOR_VERSION = "0.1.0"

_CASE_ID_RE = re.compile(r"^(dots|maze_\d+x\d+)_\d{3}$")


class ValidationError(Exception):
    """Dataset contents violate the format contract.

    Carries every problem found in one pass rather than stopping at the
    first, so a broken tree is diagnosed in a single read.
    """

    def __init__(self, message: str, problems: tuple[str, ...] = ()):
        self.problems = problems
        if problems:
            message = message + "\n" + "\n".join(f"  - {p}" for p in problems)
        super().__init__(message)


class IoError(OSError):
    """Filesystem-level failure writing or reading a dataset."""


@dataclass(frozen=True)
class CaseRecord:
    case_id: str
    seed: int
    channel_files: tuple[str, ...]
    label_file: str
    meta: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "case_id": self.case_id,
            "seed": self.seed,
            "channel_files": list(self.channel_files),
            "label_file": self.label_file,
            "meta": dict(self.meta),
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "CaseRecord":
        return cls(
            case_id=data["case_id"],
            seed=data["seed"],
            channel_files=tuple(data["channel_files"]),
            label_file=data["label_file"],
            meta=dict(data.get("meta", {})),
        )


@dataclass(frozen=True)
class DatasetManifest:
    task: str
    resolution: int
    num_cases: int
    master_seed: int
    params: dict
    channels: tuple[tuple[int, str], ...]
    cases: tuple[CaseRecord, ...]
    schema_version: int = SCHEMA_VERSION
    generator_version: str = GENERATOR_VERSION
    folds: object = None  # reserved for external cross-validation tooling

    def to_json_text(self) -> str:
        doc = {
            "schema_version": self.schema_version,
            "task": self.task,
            "resolution": self.resolution,
            "num_cases": self.num_cases,
            "master_seed": self.master_seed,
            "params": self.params,
            "channels": [{"index": i, "name": n} for i, n in self.channels],
            "cases": [c.to_json_dict() for c in self.cases],
            "generator_version": self.generator_version,
            "folds": self.folds,
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json_text(cls, text: str) -> "DatasetManifest":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"manifest is not valid JSON: {exc}") from exc
        if not isinstance(doc, dict):
            raise ValidationError("manifest root must be a JSON object")
        version = doc.get("schema_version")
        if version != SCHEMA_VERSION:
            raise ValidationError(f"unsupported schema_version {version!r} (expected {SCHEMA_VERSION})")
        try:
            return cls(
                task=doc["task"],
                resolution=doc["resolution"],
                num_cases=doc["num_cases"],
                master_seed=doc["master_seed"],
                params=dict(doc["params"]),
                channels=tuple((c["index"], c["name"]) for c in doc["channels"]),
                cases=tuple(CaseRecord.from_json_dict(c) for c in doc["cases"]),
                schema_version=version,
                generator_version=doc["generator_version"],
                folds=doc.get("folds"),
            )
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"manifest missing or malformed field: {exc}") from exc


@dataclass(frozen=True)
class GeneratedCase:
    """One fully rendered case headed for disk."""

    case_id: str
    seed: int
    channels: tuple[BitMask, ...]
    label: BitMask
    meta: dict = field(default_factory=dict)


@dataclass(frozen=True)
class PredictionSet:
    source_dir: str
    masks: dict


def channel_file_name(case_id: str, channel: int) -> str:
    return f"{case_id}_{channel:04d}.png"


def write_dataset(
    cases: list[GeneratedCase],
    *,
    task: str,
    resolution: int,
    master_seed: int,
    params: dict,
    channel_names: tuple[str, ...],
    out_dir: str | Path,
    generator_version: str = GENERATOR_VERSION,
) -> DatasetManifest:
    out = Path(out_dir)
    if out.exists():
        if not out.is_dir():
            raise IoError(f"{out} exists and is not a directory")
        if any(out.iterdir()):
            raise IoError(f"refusing to write into non-empty directory {out}")

    problems: list[str] = []
    seen: set[str] = set()
    for case in cases:
        if case.case_id in seen:
            problems.append(f"duplicate case_id {case.case_id!r}")
        seen.add(case.case_id)
        if not _CASE_ID_RE.match(case.case_id):
            problems.append(f"malformed case_id {case.case_id!r}")
        if len(case.channels) != len(channel_names):
            problems.append(
                f"{case.case_id}: {len(case.channels)} channels, expected {len(channel_names)}"
            )
        for mask in (*case.channels, case.label):
            if mask.width != resolution or mask.height != resolution:
                problems.append(
                    f"{case.case_id}: mask is {mask.width}x{mask.height}, expected {resolution}x{resolution}"
                )
                break
    if problems:
        raise ValidationError("invalid cases", tuple(problems))

    out.parent.mkdir(parents=True, exist_ok=True)
    tmp = Path(tempfile.mkdtemp(prefix=f".{out.name}.tmp-", dir=out.parent))
    try:
        (tmp / "imagesTr").mkdir()
        (tmp / "labelsTr").mkdir()
        records = []
        for case in cases:
            channel_files = []
            for c, mask in enumerate(case.channels):
                rel = f"imagesTr/{channel_file_name(case.case_id, c)}"
                write_png(tmp / rel, mask.to_u8(255))
                channel_files.append(rel)
            label_rel = f"labelsTr/{case.case_id}.png"
            write_png(tmp / label_rel, case.label.to_u8(1))
            records.append(
                CaseRecord(
                    case_id=case.case_id,
                    seed=case.seed,
                    channel_files=tuple(channel_files),
                    label_file=label_rel,
                    meta=dict(case.meta),
                )
            )
        manifest = DatasetManifest(
            task=task,
            resolution=resolution,
            num_cases=len(records),
            master_seed=master_seed,
            params=params,
            channels=tuple(enumerate(channel_names)),
            cases=tuple(records),
            generator_version=generator_version,
        )
        (tmp / "dataset.json").write_text(manifest.to_json_text(), encoding="utf-8")
        if out.exists():
            out.rmdir()  # verified empty above
        os.rename(tmp, out)
    except OSError as exc:
        raise IoError(f"failed to write dataset to {out}: {exc}") from exc
    finally:
        if tmp.exists():
            shutil.rmtree(tmp, ignore_errors=True)
    return manifest


def _decode_mask(path: Path, resolution: int, domain: tuple[int, int],
                 problems: list[str], context: str) -> BitMask | None:
    if not path.is_file():
        problems.append(f"{context}: missing file {path.name}")
        return None
    try:
        arr = read_gray(path)
    except (OSError, ValueError) as exc:
        problems.append(f"{context}: {exc}")
        return None
    if arr.shape != (resolution, resolution):
        problems.append(
            f"{context}: {path.name} is {arr.shape[1]}x{arr.shape[0]}, expected {resolution}x{resolution}"
        )
        return None
    off, on = domain
    bad = np.setdiff1d(np.unique(arr), [off, on])
    if bad.size:
        problems.append(
            f"{context}: {path.name} contains values {bad.tolist()} outside {{{off},{on}}}"
        )
        return None
    return BitMask(arr == on)


def read_dataset(dir_path: str | Path) -> tuple[DatasetManifest, dict]:
    """Load and validate a dataset tree.

    Returns the manifest and a map case_id -> (channels tuple, label mask).
    """
    root = Path(dir_path)
    manifest_path = root / "dataset.json"
    if not manifest_path.is_file():
        raise ValidationError(f"no dataset.json in {root}")
    manifest = DatasetManifest.from_json_text(manifest_path.read_text(encoding="utf-8"))

    problems: list[str] = []
    if manifest.num_cases != len(manifest.cases):
        problems.append(
            f"manifest num_cases={manifest.num_cases} but {len(manifest.cases)} cases listed"
        )
    decoded: dict = {}
    for record in manifest.cases:
        channels = []
        for rel in record.channel_files:
            mask = _decode_mask(root / rel, manifest.resolution, (0, 255), problems, record.case_id)
            if mask is not None:
                channels.append(mask)
        label = _decode_mask(root / record.label_file, manifest.resolution, (0, 1), problems,
                             record.case_id)
        if label is not None and len(channels) == len(record.channel_files):
            decoded[record.case_id] = (tuple(channels), label)
    if problems:
        raise ValidationError(f"invalid dataset at {root}", tuple(problems))
    return manifest, decoded


def import_predictions(dir_path: str | Path, manifest: DatasetManifest) -> PredictionSet:
    """Load `{case_id}.png` per manifest case, taking any nonzero pixel as on."""
    root = Path(dir_path)
    problems: list[str] = []
    masks: dict = {}
    size = manifest.resolution
    for record in manifest.cases:
        path = root / f"{record.case_id}.png"
        if not path.is_file():
            problems.append(f"{record.case_id}: missing prediction {path.name}")
            continue
        try:
            fg = read_foreground(path)
        except OSError as exc:
            problems.append(f"{record.case_id}: {exc}")
            continue
        if fg.shape != (size, size):
            problems.append(
                f"{record.case_id}: prediction is {fg.shape[1]}x{fg.shape[0]}, expected {size}x{size}"
            )
            continue
        masks[record.case_id] = BitMask(fg)
    if problems:
        raise ValidationError(f"invalid predictions in {root}", tuple(problems))
    return PredictionSet(source_dir=str(root), masks=masks)
