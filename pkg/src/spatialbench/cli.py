"""Command-line interface.

One binary with subcommands `generate`, `gt`, `predict`, `evaluate`,
`report`, and `pipeline`. Flags override config-file values, which override
defaults. Exit codes: 0 success, 1 configuration or validation error,
2 generation failure (rejection budget exhausted), 3 I/O failure.
"""

from __future__ import annotations

import dataclasses
import sys
from pathlib import Path

import click

from .baselines import BaselineKind, ConfigError
from .config import PipelineConfig, load_config_file
from .dataset import IoError, ValidationError, read_dataset
from .pipeline import (
    EXIT_CONFIG,
    EXIT_GENERATION,
    EXIT_IO,
    EXIT_OK,
    dataset_dir,
    eval_dir,
    evaluate_predictions,
    generate_dataset,
    load_metrics_csv,
    report_dir,
    run_baseline,
    run_pipeline,
    task_configs_from_params,
    write_sweep_report,
)
from .pngio import write_png
from .scenes import GenerationError
from .slcs import EvalContext, SpecError, evaluate, parse_source, sort_check
from .speclib import spec_names, spec_text


def _split_csv(text: str) -> tuple[str, ...]:
    return tuple(part.strip() for part in text.split(",") if part.strip())


def config_options(f):
    options = [
        click.option("--config", "config_path", default=None,
                     type=click.Path(exists=True, dir_okay=False),
                     help="Key=value config file; flags override it."),
        click.option("--task", "--tasks", "tasks", default=None,
                     help="Comma-separated task list (dots,maze)."),
        click.option("--resolution", "--resolutions", "resolutions", default=None,
                     help="Comma-separated resolutions, multiples of 16."),
        click.option("--num-cases", type=int, default=None, help="Cases per dataset."),
        click.option("--seed", "master_seed", type=int, default=None, help="Master seed."),
        click.option("--out", "out_dir", default=None, help="Output root directory."),
        click.option("--baseline", "baselines", multiple=True,
                     help="Baseline predictor; repeatable."),
        click.option("--jobs", type=int, default=None, help="Worker threads per stage."),
        click.option("--label-mode", type=click.Choice(["shortest", "corridor"]), default=None,
                     help="Maze label rule."),
        click.option("--adjacency", type=click.Choice(["4", "8"]), default=None,
                     help="Pixel adjacency for spatial operators."),
    ]
    for option in reversed(options):
        f = option(f)
    return f


def build_config(config_path, tasks, resolutions, num_cases, master_seed, out_dir,
                 baselines, jobs, label_mode, adjacency) -> PipelineConfig:
    config = PipelineConfig()
    if config_path:
        config = load_config_file(config_path, config)
    overrides: dict = {}
    if tasks:
        overrides["tasks"] = _split_csv(tasks)
    if resolutions:
        try:
            overrides["resolutions"] = tuple(int(r) for r in _split_csv(resolutions))
        except ValueError:
            raise ConfigError(f"resolutions must be integers, got {resolutions!r}") from None
    if num_cases is not None:
        overrides["num_cases"] = num_cases
    if master_seed is not None:
        overrides["master_seed"] = master_seed
    if out_dir is not None:
        overrides["out_dir"] = out_dir
    if baselines:
        overrides["baselines"] = tuple(baselines)
    if jobs is not None:
        overrides["jobs"] = jobs
    if adjacency is not None:
        overrides["adjacency"] = int(adjacency)
    if overrides:
        config = dataclasses.replace(config, **overrides)
    if label_mode is not None:
        config = dataclasses.replace(
            config, maze=dataclasses.replace(config.maze, label_mode=label_mode)
        )
    return config


@click.group()
def cli():
    """Synthetic spatial-reasoning benchmark pipeline."""


@cli.command()
@config_options
def generate(**kwargs):
    """Generate datasets for each configured task and resolution."""
    config = build_config(**kwargs)
    status = EXIT_OK
    for task in config.tasks:
        for resolution in config.resolutions:
            target = dataset_dir(config.out_dir, task, resolution)
            try:
                manifest = generate_dataset(config, task, resolution, target)
            except GenerationError as exc:
                status = max(status, EXIT_GENERATION)
                click.echo(f"[{task}@{resolution}px] generation failed: {exc}", err=True)
                continue
            click.echo(f"[{task}@{resolution}px] wrote {manifest.num_cases} cases to {target}")
    sys.exit(status)


@cli.command()
@click.option("--spec", "spec_ref", required=True,
              help="Shipped spec name or path to a spec file.")
@click.option("--images", "dataset_path", required=True,
              type=click.Path(exists=True, file_okay=False),
              help="Dataset directory to read channels from.")
@click.option("--out", "out_path", required=True, help="Directory for output masks.")
@click.option("--param", "params", multiple=True, help="Spec parameter as name=value; repeatable.")
@click.option("--adjacency", type=click.Choice(["4", "8"]), default="4")
def gt(spec_ref, dataset_path, out_path, params, adjacency):
    """Apply a spec to every case of a dataset and write the result masks.

    A spec with one save writes {case_id}.png; with several saves it writes
    {case_id}_{save}.png per save.
    """
    shipped = spec_ref if spec_ref in spec_names() else f"{spec_ref}.sls"
    if shipped in spec_names():
        text = spec_text(shipped)
    elif Path(spec_ref).is_file():
        text = Path(spec_ref).read_text(encoding="utf-8")
    else:
        raise ConfigError(f"no shipped spec or file named {spec_ref!r}")
    program = parse_source(text)
    sort_check(program)

    param_values: dict[str, float] = {}
    for item in params:
        name, eq, value = item.partition("=")
        if not eq:
            raise ConfigError(f"--param needs name=value, got {item!r}")
        try:
            param_values[name.strip()] = float(value)
        except ValueError:
            raise ConfigError(f"--param {name.strip()}: not a number: {value!r}") from None

    manifest, decoded = read_dataset(dataset_path)
    out = Path(out_path)
    if out.exists() and any(out.iterdir()):
        raise IoError(f"refusing to write into non-empty directory {out}")
    out.mkdir(parents=True, exist_ok=True)
    for record in manifest.cases:
        channels, _ = decoded[record.case_id]
        ctx = EvalContext(channels=channels, params=param_values, adjacency=int(adjacency))
        results = evaluate(program, ctx)
        if len(results) == 1:
            (mask,) = results.values()
            write_png(out / f"{record.case_id}.png", mask.to_u8(255))
        else:
            for save_name, mask in results.items():
                write_png(out / f"{record.case_id}_{save_name}.png", mask.to_u8(255))
    click.echo(f"wrote {len(manifest.cases)} case masks to {out}")


@cli.command()
@click.option("--dataset", "dataset_path", required=True,
              type=click.Path(exists=True, file_okay=False))
@click.option("--baseline", "baselines", multiple=True, default=("oracle",), show_default=True)
@click.option("--out", "out_dir", default=None,
              help="Run directory receiving preds_<kind> subdirectories "
                   "[default: the dataset's parent].")
@click.option("--jobs", type=int, default=1, show_default=True)
def predict(dataset_path, baselines, out_dir, jobs):
    """Run baseline predictors over a generated dataset."""
    manifest, decoded = read_dataset(dataset_path)
    maze_config, dots_config, adjacency = task_configs_from_params(manifest.params)
    out = Path(out_dir) if out_dir else Path(dataset_path).parent
    for text in baselines:
        kind = BaselineKind.parse(text)
        target = out / f"preds_{kind.slug}"
        run_baseline(kind, manifest, decoded, target, maze_config=maze_config,
                     dots_config=dots_config, adjacency=adjacency, jobs=jobs)
        click.echo(f"wrote {manifest.num_cases} predictions to {target}")


@cli.command("evaluate")
@click.option("--dataset", "dataset_path", required=True,
              type=click.Path(exists=True, file_okay=False))
@click.option("--pred-dir", "pred_path", required=True,
              type=click.Path(exists=True, file_okay=False))
@click.option("--out", "out_dir", default=None,
              help="Output directory [default: eval_<kind> next to a preds_<kind> input].")
@click.option("--viz/--no-viz", default=True, show_default=True,
              help="Render triptych overlays.")
def evaluate_cmd(dataset_path, pred_path, out_dir, viz):
    """Score a prediction directory against a dataset's labels."""
    if out_dir is None:
        pred = Path(pred_path)
        if not pred.name.startswith("preds_"):
            raise ConfigError("--out is required when --pred-dir is not a preds_<kind> directory")
        out_dir = pred.parent / f"eval_{pred.name[len('preds_'):]}"
    rows = evaluate_predictions(dataset_path, pred_path, out_dir, viz=viz)
    click.echo(f"evaluated {len(rows)} cases into {out_dir}")


@cli.command()
@config_options
def report(**kwargs):
    """Aggregate existing eval directories into sweep reports."""
    config = build_config(**kwargs)
    kinds = [BaselineKind.parse(text) for text in config.baselines]
    wrote_any = False
    for position, kind in enumerate(kinds):
        runs = []
        for task in config.tasks:
            for resolution in config.resolutions:
                path = eval_dir(config.out_dir, task, resolution, kind) / "metrics.csv"
                if not path.is_file():
                    click.echo(f"skipping {task}@{resolution}px ({kind}): no {path}", err=True)
                    continue
                runs.append((task, resolution, load_metrics_csv(path)))
        if not runs:
            continue
        suffix = "" if position == 0 else f"_{kind.slug}"
        write_sweep_report(runs, report_dir(config.out_dir), suffix=suffix)
        wrote_any = True
    if not wrote_any:
        raise ConfigError(f"no metrics.csv found under {config.out_dir}")
    click.echo(f"wrote sweep reports to {report_dir(config.out_dir)}")


@cli.command()
@config_options
def pipeline(**kwargs):
    """Generate, predict, evaluate, and report in one run."""
    config = build_config(**kwargs)
    status = run_pipeline(config, log=click.echo)
    sys.exit(status)


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as exc:
        return int(exc.exit_code)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    except click.ClickException as exc:
        exc.show()
        return EXIT_CONFIG
    except click.Abort:
        click.echo("aborted", err=True)
        return EXIT_CONFIG
    except GenerationError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_GENERATION
    except (ConfigError, ValidationError, SpecError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_CONFIG
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_IO
    return EXIT_OK
