"""Orchestration: generate -> predict -> evaluate -> report.

Directory scheme under the output root:

    {task}_{R}px/dataset/          written by generate
    {task}_{R}px/preds_{kind}/     one {case_id}.png per case, per baseline
    {task}_{R}px/eval_{kind}/      metrics.csv, summary.json, viz/ triptychs
    report/                        sweep.csv, sweep.md, dice_vs_resolution.csv

Every product is a pure function of the pipeline config, so running the
subcommands separately, re-running, or raising --jobs must reproduce the
same bytes. Cases are generated from per-case derived seeds and collected
in index order regardless of worker scheduling.

A failed (task, resolution) run is reported and skipped; remaining runs
still execute and the exit status reflects the worst failure seen
(1 config/validation, 2 generation, 3 I/O).
"""

from __future__ import annotations

import dataclasses
import json
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .baselines import BaselineKind, ConfigError, predict
from .config import PipelineConfig
from .core import BitMask, derive_case_seed
from .dataset import (
    DatasetManifest,
    GeneratedCase,
    IoError,
    ValidationError,
    import_predictions,
    read_dataset,
    write_dataset,
)
from .metrics import (
    MetricsRow,
    SweepReport,
    evaluate_case,
    metrics_csv,
    render_triptych,
    summarize,
)
from .pngio import write_png
from .scenes import (
    DotsConfig,
    GenerationError,
    MazeConfig,
    RasterSpec,
    dots_ground_truth,
    maze_ground_truth,
    rasterize_dots,
    rasterize_maze,
    sample_dots_scene,
    sample_maze_scene,
)
from .slcs import op_gdt

MAZE_CHANNEL_NAMES = ("walls", "entry", "exit")
DOTS_CHANNEL_NAMES = ("dots", "reference")

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_GENERATION = 2
EXIT_IO = 3


def run_dir(out_dir: str | Path, task: str, resolution: int) -> Path:
    return Path(out_dir) / f"{task}_{resolution}px"


def dataset_dir(out_dir: str | Path, task: str, resolution: int) -> Path:
    return run_dir(out_dir, task, resolution) / "dataset"


def preds_dir(out_dir: str | Path, task: str, resolution: int, kind: BaselineKind) -> Path:
    return run_dir(out_dir, task, resolution) / f"preds_{kind.slug}"


def eval_dir(out_dir: str | Path, task: str, resolution: int, kind: BaselineKind) -> Path:
    return run_dir(out_dir, task, resolution) / f"eval_{kind.slug}"


def report_dir(out_dir: str | Path) -> Path:
    return Path(out_dir) / "report"


def case_id_for(task: str, config: PipelineConfig, index: int) -> str:
    if task == "maze":
        return f"maze_{config.maze.cells_x}x{config.maze.cells_y}_{index:03d}"
    return f"dots_{index:03d}"


def dataset_params(config: PipelineConfig, task: str) -> dict:
    """Manifest params echo; enough to rebuild the task config for the oracle."""
    sub = config.maze if task == "maze" else config.dots
    return {
        "adjacency": config.adjacency,
        task: dataclasses.asdict(sub),
    }


def task_configs_from_params(params: dict) -> tuple[MazeConfig | None, DotsConfig | None, int]:
    """Invert dataset_params: (maze config, dots config, adjacency)."""
    adjacency = int(params.get("adjacency", 4))
    maze = MazeConfig(**params["maze"]) if "maze" in params else None
    dots = DotsConfig(**params["dots"]) if "dots" in params else None
    return maze, dots, adjacency


def generate_case(task: str, config: PipelineConfig, resolution: int, index: int) -> GeneratedCase:
    seed = derive_case_seed(config.master_seed, task, resolution, index)
    raster = RasterSpec(resolution)
    if task == "maze":
        scene = sample_maze_scene(seed, config.maze)
        channels = rasterize_maze(scene, raster)
        label = maze_ground_truth(channels, config.maze, config.adjacency)
        walls, entry, exit_ = channels
        dist = op_gdt(~walls, entry, config.adjacency)
        meta = {
            "entry_cell": list(scene.entry_cell),
            "exit_cell": list(scene.exit_cell),
            "num_open_walls": len(scene.open_walls),
            "path_length": int(np.min(dist.values[exit_.bits])),
        }
    elif task == "dots":
        scene = sample_dots_scene(seed, config.dots)
        channels = rasterize_dots(scene, raster)
        label = dots_ground_truth(channels, config.dots, config.adjacency)
        meta = {
            "num_dots": len(scene.dots),
            "num_selected": len(scene.selected),
        }
    else:
        raise ConfigError(f"unknown task {task!r}")
    return GeneratedCase(
        case_id=case_id_for(task, config, index),
        seed=seed,
        channels=channels,
        label=label,
        meta=meta,
    )


def _map_cases(fn, indices, jobs: int) -> list:
    if jobs <= 1:
        return [fn(i) for i in indices]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, indices))


def generate_dataset(config: PipelineConfig, task: str, resolution: int,
                     out_dir: str | Path) -> DatasetManifest:
    cases = _map_cases(
        lambda i: generate_case(task, config, resolution, i),
        range(config.num_cases),
        config.jobs,
    )
    channel_names = MAZE_CHANNEL_NAMES if task == "maze" else DOTS_CHANNEL_NAMES
    return write_dataset(
        cases,
        task=task,
        resolution=resolution,
        master_seed=config.master_seed,
        params=dataset_params(config, task),
        channel_names=channel_names,
        out_dir=out_dir,
    )


def run_baseline(kind: BaselineKind, manifest: DatasetManifest, decoded: dict,
                 out_dir: str | Path, *, maze_config: MazeConfig | None,
                 dots_config: DotsConfig | None, adjacency: int, jobs: int = 1) -> None:
    """Write one prediction PNG per case into out_dir (created, must be absent/empty)."""
    out = Path(out_dir)
    if out.exists() and any(out.iterdir()):
        raise IoError(f"refusing to write into non-empty directory {out}")
    case_ids = [record.case_id for record in manifest.cases]

    def compute(case_id: str) -> BitMask:
        channels, _ = decoded[case_id]
        return predict(kind, channels, manifest.task, maze_config=maze_config,
                       dots_config=dots_config, adjacency=adjacency)

    masks = _map_cases(compute, case_ids, jobs)
    out.mkdir(parents=True, exist_ok=True)
    for case_id, mask in zip(case_ids, masks):
        write_png(out / f"{case_id}.png", mask.to_u8(255))


def evaluate_predictions(dataset_path: str | Path, pred_path: str | Path,
                         out_dir: str | Path, *, viz: bool = True) -> list[MetricsRow]:
    """Score a prediction directory against a dataset; write metrics artifacts."""
    manifest, decoded = read_dataset(dataset_path)
    predictions = import_predictions(pred_path, manifest)
    out = Path(out_dir)
    if out.exists() and any(out.iterdir()):
        raise IoError(f"refusing to write into non-empty directory {out}")
    rows = []
    for record in manifest.cases:
        _, label = decoded[record.case_id]
        rows.append(evaluate_case(record.case_id, predictions.masks[record.case_id], label))
    out.mkdir(parents=True, exist_ok=True)
    (out / "metrics.csv").write_text(metrics_csv(rows), encoding="utf-8")
    summary = summarize(rows)
    (out / "summary.json").write_text(
        json.dumps(summary.to_json_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    if viz:
        viz_dir = out / "viz"
        viz_dir.mkdir()
        for record in manifest.cases:
            _, label = decoded[record.case_id]
            image = render_triptych(predictions.masks[record.case_id], label)
            write_png(viz_dir / f"{record.case_id}_triptych.png", image)
    return rows


def load_metrics_csv(path: str | Path) -> list[MetricsRow]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != "case_id,tp,fp,fn,iou,dice":
        raise ValidationError(f"{path}: unexpected metrics.csv header")
    rows = []
    for line in lines[1:]:
        case_id, tp, fp, fn, iou_v, dice_v = line.split(",")
        rows.append(MetricsRow(case_id, int(tp), int(fp), int(fn), float(iou_v), float(dice_v),
                               both_empty=int(tp) + int(fp) + int(fn) == 0))
    return rows


def write_sweep_report(runs: list[tuple[str, int, list[MetricsRow]]],
                       out_dir: str | Path, suffix: str = "") -> SweepReport:
    report = SweepReport.build(runs)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / f"sweep{suffix}.csv").write_text(report.to_csv(), encoding="utf-8")
    (out / f"sweep{suffix}.md").write_text(report.to_markdown(), encoding="utf-8")
    (out / f"dice_vs_resolution{suffix}.csv").write_text(
        report.dice_vs_resolution_csv(), encoding="utf-8"
    )
    return report


def _exit_code_for(exc: Exception) -> int:
    if isinstance(exc, GenerationError):
        return EXIT_GENERATION
    if isinstance(exc, (ConfigError, ValidationError, ValueError)):
        return EXIT_CONFIG
    if isinstance(exc, OSError):
        return EXIT_IO
    raise exc


def run_pipeline(config: PipelineConfig, log=print) -> int:
    """Run every (task, resolution) end to end; returns a process exit code."""
    kinds = [BaselineKind.parse(text) for text in config.baselines]
    status = EXIT_OK
    # sweep rows keyed per baseline; the first baseline feeds the main report
    sweep_runs: dict[str, list[tuple[str, int, list[MetricsRow]]]] = {k.slug: [] for k in kinds}
    for task in config.tasks:
        for resolution in config.resolutions:
            tag = f"{task}@{resolution}px"
            try:
                manifest = generate_dataset(
                    config, task, resolution, dataset_dir(config.out_dir, task, resolution)
                )
                _, decoded = read_dataset(dataset_dir(config.out_dir, task, resolution))
            except Exception as exc:  # noqa: BLE001 - isolate per-run failures
                status = max(status, _exit_code_for(exc))
                log(f"[{tag}] generation failed: {exc}")
                continue
            log(f"[{tag}] generated {manifest.num_cases} cases")
            for kind in kinds:
                try:
                    run_baseline(
                        kind, manifest, decoded,
                        preds_dir(config.out_dir, task, resolution, kind),
                        maze_config=config.maze, dots_config=config.dots,
                        adjacency=config.adjacency, jobs=config.jobs,
                    )
                    rows = evaluate_predictions(
                        dataset_dir(config.out_dir, task, resolution),
                        preds_dir(config.out_dir, task, resolution, kind),
                        eval_dir(config.out_dir, task, resolution, kind),
                    )
                except Exception as exc:  # noqa: BLE001
                    status = max(status, _exit_code_for(exc))
                    log(f"[{tag}] baseline {kind} failed: {exc}")
                    continue
                sweep_runs[kind.slug].append((task, resolution, rows))
                log(f"[{tag}] {kind}: mean dice {summarize(rows).mean_dice:.4f}")
    try:
        primary = kinds[0].slug
        if sweep_runs[primary]:
            write_sweep_report(sweep_runs[primary], report_dir(config.out_dir))
        for kind in kinds[1:]:
            if sweep_runs[kind.slug]:
                write_sweep_report(sweep_runs[kind.slug], report_dir(config.out_dir),
                                   suffix=f"_{kind.slug}")
    except Exception as exc:  # noqa: BLE001
        status = max(status, _exit_code_for(exc))
        log(f"report failed: {exc}")
    return status
