"""Overlap metrics, aggregation, sweep reports, and overlay renders.

Dice and IoU are both derived from one confusion count, so the identity
dice = 2*iou/(1+iou) holds exactly (up to float rounding) for every row.
When prediction and ground truth are both empty the convention is 1.0 for
both metrics; such rows carry a both_empty flag since the case deserves a
second look when it comes from an imported prediction set.

CSV cells hold full-precision floats (Python str round-trip); markdown
tables round to four decimals for reading.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import BitMask


class DimensionError(ValueError):
    """Masks being compared do not share dimensions."""


def confusion(pred: BitMask, gt: BitMask) -> tuple[int, int, int]:
    """Pixel counts (tp, fp, fn) of a prediction against ground truth."""
    if pred.shape != gt.shape:
        raise DimensionError(f"prediction is {pred.shape}, ground truth is {gt.shape}")
    tp = int(np.count_nonzero(pred.bits & gt.bits))
    fp = int(np.count_nonzero(pred.bits & ~gt.bits))
    fn = int(np.count_nonzero(~pred.bits & gt.bits))
    return tp, fp, fn


def dice(tp: int, fp: int, fn: int) -> float:
    denom = 2 * tp + fp + fn
    return 1.0 if denom == 0 else 2 * tp / denom


def iou(tp: int, fp: int, fn: int) -> float:
    denom = tp + fp + fn
    return 1.0 if denom == 0 else tp / denom


@dataclass(frozen=True)
class MetricsRow:
    case_id: str
    tp: int
    fp: int
    fn: int
    iou: float
    dice: float
    both_empty: bool = False


def evaluate_case(case_id: str, pred: BitMask, gt: BitMask) -> MetricsRow:
    tp, fp, fn = confusion(pred, gt)
    return MetricsRow(
        case_id=case_id,
        tp=tp,
        fp=fp,
        fn=fn,
        iou=iou(tp, fp, fn),
        dice=dice(tp, fp, fn),
        both_empty=tp + fp + fn == 0,
    )


def aggregate(values: list[float]) -> tuple[float, float, int]:
    """Mean and sample standard deviation (n-1 denominator; 0.0 when n=1)."""
    n = len(values)
    if n < 1:
        raise ValueError("aggregate requires at least one value")
    arr = np.asarray(values, dtype=np.float64)
    mean = float(arr.mean())
    std = float(arr.std(ddof=1)) if n > 1 else 0.0
    return mean, std, n


@dataclass(frozen=True)
class Summary:
    n: int
    mean_iou: float
    std_iou: float
    mean_dice: float
    std_dice: float

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "mean_iou": self.mean_iou,
            "std_iou": self.std_iou,
            "mean_dice": self.mean_dice,
            "std_dice": self.std_dice,
        }


def summarize(rows: list[MetricsRow]) -> Summary:
    mean_iou, std_iou, n = aggregate([r.iou for r in rows])
    mean_dice, std_dice, _ = aggregate([r.dice for r in rows])
    return Summary(n=n, mean_iou=mean_iou, std_iou=std_iou,
                   mean_dice=mean_dice, std_dice=std_dice)


def metrics_csv(rows: list[MetricsRow]) -> str:
    lines = ["case_id,tp,fp,fn,iou,dice"]
    for r in rows:
        lines.append(f"{r.case_id},{r.tp},{r.fp},{r.fn},{r.iou},{r.dice}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class SweepRow:
    task: str
    resolution: int
    summary: Summary


@dataclass(frozen=True)
class SweepReport:
    rows: tuple[SweepRow, ...]

    @classmethod
    def build(cls, runs: list[tuple[str, int, list[MetricsRow]]]) -> "SweepReport":
        if not runs:
            raise ValueError("sweep report requires at least one run")
        rows = [SweepRow(task, resolution, summarize(case_rows))
                for task, resolution, case_rows in runs]
        rows.sort(key=lambda r: (r.task, r.resolution))
        return cls(tuple(rows))

    def to_csv(self) -> str:
        lines = ["task,resolution,n,mean_iou,std_iou,mean_dice,std_dice"]
        for r in self.rows:
            s = r.summary
            lines.append(
                f"{r.task},{r.resolution},{s.n},{s.mean_iou},{s.std_iou},{s.mean_dice},{s.std_dice}"
            )
        return "\n".join(lines) + "\n"

    def to_markdown(self) -> str:
        parts: list[str] = []
        for task in sorted({r.task for r in self.rows}):
            parts.append(f"## {task}")
            parts.append("")
            parts.append("| Resolution | n | IoU (mean ± std) | Dice (mean ± std) |")
            parts.append("| --- | --- | --- | --- |")
            for r in self.rows:
                if r.task != task:
                    continue
                s = r.summary
                parts.append(
                    f"| {r.resolution} | {s.n} "
                    f"| {s.mean_iou:.4f} ± {s.std_iou:.4f} "
                    f"| {s.mean_dice:.4f} ± {s.std_dice:.4f} |"
                )
            parts.append("")
        return "\n".join(parts)

    def dice_vs_resolution_csv(self) -> str:
        lines = ["task,resolution,mean_dice"]
        for r in self.rows:
            lines.append(f"{r.task},{r.resolution},{r.summary.mean_dice}")
        return "\n".join(lines) + "\n"


_SEPARATOR = 128
_TP_COLOR = (0, 255, 0)
_FP_COLOR = (255, 0, 0)
_FN_COLOR = (0, 0, 255)


def render_triptych(pred: BitMask, gt: BitMask) -> np.ndarray:
    """Three panels: prediction, TP/FP/FN overlay, ground truth.

    Returns an (R, 3R+4, 3) uint8 image with 2-pixel gray separators.
    """
    if pred.shape != gt.shape:
        raise DimensionError(f"prediction is {pred.shape}, ground truth is {gt.shape}")
    h, w = pred.shape
    out = np.zeros((h, 3 * w + 4, 3), dtype=np.uint8)
    out[:, w:w + 2, :] = _SEPARATOR
    out[:, 2 * w + 2:2 * w + 4, :] = _SEPARATOR

    out[:, :w, :] = pred.to_u8(255)[:, :, None]
    overlay = out[:, w + 2:2 * w + 2, :]
    overlay[pred.bits & gt.bits] = _TP_COLOR
    overlay[pred.bits & ~gt.bits] = _FP_COLOR
    overlay[~pred.bits & gt.bits] = _FN_COLOR
    out[:, 2 * w + 4:, :] = gt.to_u8(255)[:, :, None]
    return out
