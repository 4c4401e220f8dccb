"""
roadseg command line.

Every subcommand is deterministic given its settings and seed. Flags
override values from --config, which override --preset defaults.

Exit codes: 0 success, 1 usage error, 2 data or configuration error,
3 runtime failure. Failures print one line on stderr:

    roadseg: error code=<n> kind=<kind> message=<text>
"""
import logging
import sys
from pathlib import Path
from typing import List, Optional

import click
import typer
from dotenv import load_dotenv

from roadseg.config import (
    RunSettings,
    clean_timestep,
    log_level,
    resolve_settings,
)
from roadseg.core.errors import (
    ConfigurationError,
    CorruptFileError,
    InvalidArgumentError,
    RoadsegError,
    ShapeError,
)
from roadseg.experiments.compare import evaluate_on_tiles, run_comparison
from roadseg.experiments.datasets import (
    generate_dataset,
    ingest_dataset,
    is_scene,
    load_labelled,
    load_split,
)
from roadseg.inference.maps import emit_map
from roadseg.inference.predict import (
    load_prediction,
    predict_patch,
    resolve_model,
    save_prediction,
)
from roadseg.inference.stitch import predict_scene
from roadseg.ingest.manifest import DatasetManifest
from roadseg.metrics.scores import evaluate_rasters
from roadseg.metrics.table import format_report
from roadseg.models.checkpoint import save_checkpoint
from roadseg.models.unet import build_model
from roadseg.training.trainer import seed_everything, train

logger = logging.getLogger(__name__)

DATA_ERRORS = (
    ConfigurationError,
    CorruptFileError,
    InvalidArgumentError,
    ShapeError,
    FileNotFoundError,
)

app = typer.Typer(
    add_completion=False,
    no_args_is_help=True,
    help="Ordinal road extraction from multispectral image sequences.",
)

ConfigOption = typer.Option(None, "--config", help="JSON settings file")
SeedOption = typer.Option(None, "--seed", help="Random seed")
OutOption = typer.Option(None, "--out", help="Output directory or path")
PresetOption = typer.Option(None, "--preset", help="desk or full")


def configure_logging(verbosity: int = 0) -> None:
    logging.basicConfig(
        level=log_level(verbosity),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


def _settings(config: Optional[Path], **flags) -> RunSettings:
    return resolve_settings(flags, config)


def _require(value, flag: str):
    if value is None:
        raise click.UsageError(f"Missing option '{flag}'")
    return value


@app.callback()
def root(
    verbose: int = typer.Option(
        0, "--verbose", "-v", count=True, help="-v info, -vv debug"
    ),
):
    configure_logging(verbose)


@app.command("gen-data")
def gen_data(
    config: Optional[Path] = ConfigOption,
    seed: Optional[int] = SeedOption,
    out: Optional[str] = OutOption,
    preset: Optional[str] = PresetOption,
    scenes: Optional[int] = typer.Option(None, "--scenes"),
    test_scenes: Optional[int] = typer.Option(None, "--test-scenes"),
    size: Optional[int] = typer.Option(None, "--size"),
    timesteps: Optional[int] = typer.Option(None, "--timesteps"),
    road_density: Optional[float] = typer.Option(None, "--road-density"),
    cloud_coverage: Optional[float] = typer.Option(
        None, "--cloud-coverage"
    ),
):
    """Write synthetic scene containers and a manifest."""
    s = _settings(
        config, seed=seed, out=out, preset=preset, scenes=scenes,
        test_scenes=test_scenes, size=size, timesteps=timesteps,
        road_density=road_density, cloud_coverage=cloud_coverage,
    )
    manifest = generate_dataset(
        _require(s.out, "--out"),
        s.seed,
        s.scenes,
        s.size,
        timesteps=s.timesteps,
        test_scenes=s.test_scenes,
        road_density=s.road_density,
        cloud_coverage=s.cloud_coverage,
        clean_timestep=clean_timestep(s.timesteps),
    )
    typer.echo(f"Wrote {len(manifest.entries)} scenes to {s.out}")


@app.command()
def ingest(
    config: Optional[Path] = ConfigOption,
    seed: Optional[int] = SeedOption,
    out: Optional[str] = OutOption,
    preset: Optional[str] = PresetOption,
    manifest: Optional[str] = typer.Option(None, "--manifest"),
    patch: Optional[int] = typer.Option(None, "--patch"),
    patches_per_scene: Optional[int] = typer.Option(
        None, "--patches-per-scene"
    ),
    label_resolution: Optional[float] = typer.Option(
        None, "--label-resolution", help="5 or 10 (metres)"
    ),
):
    """Rasterize road vectors and extract labelled patches."""
    s = _settings(
        config, seed=seed, out=out, preset=preset, manifest=manifest,
        patch=patch, patches_per_scene=patches_per_scene,
        label_resolution=label_resolution,
    )
    source = DatasetManifest.load(_require(s.manifest, "--manifest"))
    result = ingest_dataset(
        source,
        _require(s.out, "--out"),
        s.patch,
        s.patches_per_scene,
        seed=s.seed,
        label_resolution_m=s.label_resolution,
    )
    typer.echo(f"Wrote {len(result.entries)} samples to {s.out}")


@app.command("train")
def train_command(
    config: Optional[Path] = ConfigOption,
    seed: Optional[int] = SeedOption,
    out: Optional[str] = OutOption,
    preset: Optional[str] = PresetOption,
    manifest: Optional[str] = typer.Option(None, "--manifest"),
    variant: Optional[str] = typer.Option(None, "--variant"),
    checkpoint: Optional[str] = typer.Option(
        None, "--checkpoint", help="Checkpoint file to write"
    ),
    epochs: Optional[int] = typer.Option(None, "--epochs"),
    depth: Optional[int] = typer.Option(None, "--depth"),
    base_width: Optional[int] = typer.Option(None, "--base-width"),
    batch_size: Optional[int] = typer.Option(None, "--batch-size"),
    timestep: Optional[int] = typer.Option(None, "--timestep"),
):
    """Train a variant on the manifest's training split."""
    s = _settings(
        config, seed=seed, out=out, preset=preset, manifest=manifest,
        variant=variant, checkpoint=checkpoint, epochs=epochs, depth=depth,
        base_width=base_width, batch_size=batch_size, timestep=timestep,
    )
    out_dir = Path(_require(s.out, "--out"))
    samples = load_split(
        DatasetManifest.load(_require(s.manifest, "--manifest")), "train"
    )
    seed_everything(s.seed)
    model = build_model(s.model_settings())
    overrides = {} if s.timestep is None else {"timestep": s.timestep}
    result = train(
        model,
        samples,
        s.train_settings(**overrides),
        s.device,
        out_dir / f"history_{s.variant}.csv",
    )
    path = save_checkpoint(
        s.checkpoint or out_dir / f"{s.variant}.rspc",
        result.model,
        result.summary(),
    )
    best = result.best_val_f1
    typer.echo(
        f"Saved {path} (best epoch {result.best_epoch}, "
        f"validation F1 {'n/a' if best is None else f'{best:.3f}'})"
    )


@app.command("eval")
def eval_command(
    config: Optional[Path] = ConfigOption,
    seed: Optional[int] = SeedOption,
    out: Optional[str] = OutOption,
    checkpoint: Optional[str] = typer.Option(None, "--checkpoint"),
    manifest: Optional[str] = typer.Option(None, "--manifest"),
    split: Optional[str] = typer.Option(None, "--split"),
    predictions: Optional[str] = typer.Option(
        None, "--predictions", help="Directory of saved predictions"
    ),
    patch: Optional[int] = typer.Option(None, "--patch"),
    timestep: Optional[int] = typer.Option(None, "--timestep"),
):
    """Score a checkpoint on a split, or saved predictions."""
    s = _settings(
        config, seed=seed, out=out, checkpoint=checkpoint,
        manifest=manifest, split=split, predictions=predictions,
        patch=patch, timestep=timestep,
    )
    if s.predictions:
        pairs = [load_prediction(p) for p in _containers(s.predictions)]
        missing = [i for i, (_, label) in enumerate(pairs) if label is None]
        if missing:
            raise ConfigurationError(
                f"{len(missing)} predictions carry no reference label"
            )
        report = evaluate_rasters(
            [pred for pred, _ in pairs], [label for _, label in pairs]
        )
        name = Path(s.predictions).name
    else:
        checkpoint_path = _require(s.checkpoint, "--checkpoint")
        model = resolve_model(checkpoint_path, s.device)
        samples = load_split(
            DatasetManifest.load(_require(s.manifest, "--manifest")), s.split
        )
        report = evaluate_on_tiles(
            model, samples, s.patch, s.timestep, s.device
        )
        name = model.config.variant
    table = format_report(report, name)
    typer.echo(table)
    if s.out:
        out_dir = Path(s.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "metrics.json").write_text(report.to_json() + "\n")
        (out_dir / "metrics.md").write_text(table + "\n")


def _containers(path: str) -> List[Path]:
    root = Path(path)
    if root.is_file():
        return [root]
    if not root.is_dir():
        raise FileNotFoundError(f"No such file or directory: {root}")
    files = sorted(root.glob("*.rspc"))
    if not files:
        raise ConfigurationError(f"No .rspc files in {root}")
    return files


@app.command()
def predict(
    config: Optional[Path] = ConfigOption,
    seed: Optional[int] = SeedOption,
    out: Optional[str] = OutOption,
    checkpoint: Optional[str] = typer.Option(None, "--checkpoint"),
    input_path: Optional[str] = typer.Option(
        None, "--input", help="Patch container, directory or manifest"
    ),
    split: Optional[str] = typer.Option(None, "--split"),
    patch: Optional[int] = typer.Option(None, "--patch"),
    timestep: Optional[int] = typer.Option(None, "--timestep"),
):
    """
    Predict class rasters for patch containers.

    Patches run through the network whole; scene containers are
    stitched from --patch windows.
    """
    s = _settings(
        config, seed=seed, out=out, checkpoint=checkpoint,
        input_path=input_path, split=split, patch=patch, timestep=timestep,
    )
    model = resolve_model(_require(s.checkpoint, "--checkpoint"), s.device)
    source = Path(_require(s.input_path, "--input"))
    if source.suffix == ".json":
        entries = DatasetManifest.load(source).split(s.split)
        paths = [Path(entry.path) for entry in entries]
    else:
        paths = _containers(str(source))
    out_dir = Path(_require(s.out, "--out"))
    for path in paths:
        sample = load_labelled(path, 10.0 / model.config.label_upscale)
        if is_scene(path):
            prediction = predict_scene(
                model, sample, min(s.patch, *sample.size_px),
                timestep=s.timestep, device=s.device,
            )
        else:
            prediction = predict_patch(
                model, sample, timestep=s.timestep, device=s.device
            )
        save_prediction(out_dir / path.name, prediction, sample.label)
    typer.echo(f"Wrote {len(paths)} predictions to {out_dir}")


@app.command("map")
def map_command(
    config: Optional[Path] = ConfigOption,
    seed: Optional[int] = SeedOption,
    out: Optional[str] = OutOption,
    checkpoint: Optional[str] = typer.Option(None, "--checkpoint"),
    input_path: Optional[str] = typer.Option(
        None, "--input", help="Scene or patch container"
    ),
    patch: Optional[int] = typer.Option(None, "--patch"),
    stride: Optional[int] = typer.Option(None, "--stride"),
    origin_row: int = typer.Option(0, "--origin-row"),
    origin_col: int = typer.Option(0, "--origin-col"),
    average: Optional[bool] = typer.Option(
        None, "--average/--central-crop"
    ),
    timestep: Optional[int] = typer.Option(None, "--timestep"),
):
    """Stitch a scene-wide prediction and write the map files."""
    origin = (origin_row, origin_col) if origin_row or origin_col else None
    s = _settings(
        config, seed=seed, out=out, checkpoint=checkpoint,
        input_path=input_path, patch=patch, stride=stride,
        grid_origin=origin, average=average, timestep=timestep,
    )
    model = resolve_model(_require(s.checkpoint, "--checkpoint"), s.device)
    scene = load_labelled(
        _require(s.input_path, "--input"),
        10.0 / model.config.label_upscale,
    )
    prediction = predict_scene(
        model,
        scene,
        s.patch,
        stride=s.stride,
        grid_origin=s.grid_origin,
        average=s.average,
        timestep=s.timestep,
        device=s.device,
    )
    files = emit_map(
        prediction.classes,
        _require(s.out, "--out"),
        prediction.geo_extent,
        prediction.resolution_m,
    )
    typer.echo(f"Wrote {files.image}, {files.raster} and {files.sidecar}")


@app.command()
def compare(
    config: Optional[Path] = ConfigOption,
    seed: Optional[int] = SeedOption,
    out: Optional[str] = OutOption,
    preset: Optional[str] = PresetOption,
    epochs: Optional[int] = typer.Option(None, "--epochs"),
    rows: Optional[List[str]] = typer.Option(
        None, "--row", help="Restrict to rows (repeatable)"
    ),
):
    """Train and score all variants plus the shift protocol."""
    s = _settings(
        config, seed=seed, out=out, preset=preset, epochs=epochs,
        rows=rows or None,
    )
    comparison = run_comparison(s, s.rows)
    typer.echo(comparison.table)


def _report(code: int, kind: str, message: str) -> int:
    text = " ".join(str(message).split())
    typer.echo(
        f"roadseg: error code={code} kind={kind} message={text}", err=True
    )
    return code


def main(argv: Optional[List[str]] = None) -> int:
    """Run the command line; returns the process exit code."""
    load_dotenv()
    command = typer.main.get_command(app)
    try:
        command.main(
            args=argv, prog_name="roadseg", standalone_mode=False
        )
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.UsageError as e:
        return _report(1, "usage", e.format_message())
    except click.Abort:
        return _report(3, "aborted", "interrupted")
    except DATA_ERRORS as e:
        kind = getattr(e, "kind", "data")
        return _report(2, kind, str(e))
    except RoadsegError as e:
        return _report(3, e.kind, str(e))
    except Exception as e:
        logger.debug("Unhandled failure", exc_info=True)
        return _report(3, "runtime", f"{type(e).__name__}: {str(e)}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
