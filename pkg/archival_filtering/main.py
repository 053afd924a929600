import functools
import logging
import sys
from pathlib import Path
from typing import Optional

import click
import rich
import rich.traceback
from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from archival_filtering.core.config import FilteringConfig
from archival_filtering.models import (
    NOISE_IDS,
    Approach,
    ColorSpace,
    ExperimentConfig,
    FilterKind,
    FilterSpec,
    LeeParams,
    NoiseSpec,
    Summary,
    Findings,
)
from archival_filtering.services.bench import (
    BenchEngine,
    build_meta,
    emit_csv,
    emit_json,
    findings,
    format_float,
    generate_step_image,
    generate_synthetic_document,
    summarize,
)
from archival_filtering.services.filters import (
    apply_denoise,
    apply_edge,
    closing,
    dilate,
    erode,
    opening,
    sobel_vector_dominance,
)
from archival_filtering.services.imaging import load_image, save_image, save_scalar_image, to_space
from archival_filtering.services.metrics import mse, psnr, rsc, sr
from archival_filtering.services.noise import apply_noise
from archival_filtering.utils.decorators import log_execution

rich.traceback.install(show_locals=False, max_frames=20)

log = logging.getLogger("archival_filtering")
console = Console()
err_console = Console(stderr=True)

BUNDLED_CONFIG = Path(__file__).parent / "config" / "bench_default.json"
MORPHOLOGY_OPS = {"erode": erode, "dilate": dilate, "opening": opening, "closing": closing}
FILTER_CHOICES = [k.value for k in FilterKind] + list(MORPHOLOGY_OPS)
APPROACH_CHOICES = [a.value for a in Approach]
SPACE_CHOICES = [s.value for s in ColorSpace]
EDGE_CHOICES = [k.value for k in FilterKind if k.is_edge]
LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR"]


def setup_logging(level: str) -> None:
    logging.basicConfig(
        level=level,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=err_console, rich_tracebacks=True)],
        force=True,
    )


def handle_errors(func):
    """Exit 2 for invalid arguments, 1 for any other failure."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except click.ClickException:
            raise
        except ValidationError as e:
            raise click.BadParameter(str(e)) from e
        except Exception as e:
            log.debug("Command failed", exc_info=True)
            err_console.print(f"[red]Error: {type(e).__name__}: {e}")
            sys.exit(1)

    return wrapper


@click.group()
@click.option('--log-level', type=click.Choice(LOG_LEVELS, case_sensitive=False), default=None,
              help='Logging level (default: config log_level, WARNING).')
@click.option('--config-file', '-c', type=Path, default=None,
              help='YAML file with FilteringConfig settings; ARCHIVAL_* variables are used otherwise.')
@click.pass_context
def cli(ctx: click.Context, log_level: Optional[str], config_file: Optional[Path]):
    """Marginal, vector and dual color filtering for archival document images."""
    config = FilteringConfig.load(config_file)
    setup_logging((log_level or ("DEBUG" if config.debug else config.log_level)).upper())
    ctx.obj = config


@cli.command('filter')
@click.argument('in_path', type=Path)
@click.argument('out_path', type=Path)
@click.option('--kind', type=click.Choice(FILTER_CHOICES), default=FilterKind.MEDIAN.value, show_default=True,
              help='Filter to apply.')
@click.option('--approach', type=click.Choice(APPROACH_CHOICES), default=Approach.MARGINAL.value,
              show_default=True, help='marginal, vector, mv (marginal then vector) or vm (vector then marginal).')
@click.option('--space', type=click.Choice(SPACE_CHOICES), default=ColorSpace.RGB.value, show_default=True,
              help='Color space the filter runs in.')
@handle_errors
@log_execution
def filter_cmd(in_path: Path, out_path: Path, kind: str, approach: str, space: str):
    """Filter IN_PATH into OUT_PATH. Edge filters write an 8-bit grayscale map and print its scale factor."""
    approach = Approach(approach)
    if kind in MORPHOLOGY_OPS and approach.is_dual:
        raise click.BadParameter(f"{kind} accepts only the marginal and vector approaches", param_hint='--approach')
    if kind not in MORPHOLOGY_OPS:
        spec = FilterSpec(kind=kind, approach=approach)

    image = to_space(load_image(in_path), ColorSpace(space))
    if kind in MORPHOLOGY_OPS:
        result = MORPHOLOGY_OPS[kind](image, approach)
    elif spec.kind.is_edge:
        edge_map = apply_edge(image, spec)
        if spec.kind is FilterKind.SOBEL:
            log.info(f"Vector Sobel >= marginal Sobel on {sobel_vector_dominance(image):.1%} of pixels")
        scale = save_scalar_image(edge_map, out_path)
        click.echo(format_float(scale))
        return
    else:
        result = apply_denoise(image, spec)
    save_image(to_space(result, ColorSpace.RGB), out_path)


@cli.command('noise')
@click.argument('in_path', type=Path)
@click.argument('out_path', type=Path)
@click.option('--model', type=click.Choice(list(NOISE_IDS)), required=True,
              help='noise1/2 gaussian weak/strong, noise3/4 speckle, noise5/6 salt & pepper.')
@click.option('--seed', type=click.IntRange(0, 2 ** 64 - 1), default=0, show_default=True, help='Noise seed.')
@click.option('--parameter', type=float, default=None,
              help='Override sigma, variance or density; the configured default otherwise.')
@click.pass_obj
@handle_errors
@log_execution
def noise_cmd(config: FilteringConfig, in_path: Path, out_path: Path, model: str, seed: int,
              parameter: Optional[float]):
    """Corrupt IN_PATH with a seeded noise model and write OUT_PATH."""
    spec = NoiseSpec.from_id(model, seed=seed, config=config, parameter=parameter)
    save_image(apply_noise(load_image(in_path), spec), out_path)


@cli.command('metric')
@click.argument('ref_path', type=Path)
@click.argument('test_path', type=Path)
@click.option('--metric', type=click.Choice(['psnr', 'mse', 'sr', 'rsc']), default='psnr', show_default=True,
              help='psnr and mse compare TEST to REF; sr is the regional residual ratio; '
                   'rsc scores the edge map of TEST.')
@click.option('--space', type=click.Choice(SPACE_CHOICES), default=ColorSpace.RGB.value, show_default=True,
              help='Color space both images are compared in.')
@click.option('--edge-filter', type=click.Choice(EDGE_CHOICES), default=FilterKind.LAPLACIAN.value,
              show_default=True, help='Edge filter producing the map scored by rsc.')
@click.option('--approach', type=click.Choice([Approach.MARGINAL.value, Approach.VECTOR.value]),
              default=Approach.MARGINAL.value, show_default=True, help='Approach of the rsc edge filter.')
@click.option('--lee/--no-lee', default=None, help='Lee-smooth the edge map before rsc.')
@click.pass_obj
@handle_errors
@log_execution
def metric_cmd(config: FilteringConfig, ref_path: Path, test_path: Path, metric: str, space: str,
               edge_filter: str, approach: str, lee: Optional[bool]):
    """Print one metric value with six significant digits."""
    space = ColorSpace(space)
    test = to_space(load_image(test_path), space)
    if metric == 'rsc':
        lee_params = LeeParams(window=config.lee_window) if (config.lee_enabled if lee is None else lee) else None
        edge_map = apply_edge(test, FilterSpec(kind=edge_filter, approach=approach))
        value = rsc(edge_map, config.rsc_segment_length, lee_params, config.rsc_epsilon, config.rsc_ratio_cap)
    else:
        reference = to_space(load_image(ref_path), space)
        if metric == 'psnr':
            value = psnr(reference, test, config.psnr_peak)
        elif metric == 'mse':
            value = mse(reference, test)
        else:
            value = sr(reference, test, config.sr_tile)
    click.echo(format_float(value))


def _summary_table(summary: Summary) -> Table:
    table = Table(title="Winning approach per cell")
    for column in ("filter", "noise", "space", "metric", "M", "V", "MV", "VM", "winner"):
        table.add_column(column)
    for cell in summary.cells:
        means = [format_float(cell.means.get(a)) for a in Approach]
        table.add_row(cell.filter.value, cell.noise, cell.space.value, cell.metric, *means, cell.winner.value)
    return table


def _findings_table(result: Findings) -> Table:
    table = Table(title="Findings")
    table.add_column("statistic")
    table.add_column("value")
    for metric, fraction in result.marginal_win_fraction.items():
        table.add_row(f"marginal win fraction, noisy RGB ({metric})", format_float(fraction))
    for metric, fraction in result.dual_win_fraction.items():
        table.add_row(f"dual win fraction, noisy RGB ({metric})", format_float(fraction))
    if result.space_agreement is not None:
        table.add_row("RGB/HSB winner agreement, noisy denoising cells", format_float(result.space_agreement))
    for kind, ratio in result.rsc_vector_ratio.items():
        table.add_row(f"R_SC vector/marginal ({kind.value})", format_float(ratio))
    return table


@cli.command('bench')
@click.option('--config', 'config_path', type=Path, default=BUNDLED_CONFIG, show_default=True,
              help='Experiment matrix (JSON or YAML).')
@click.option('--out', 'out_dir', type=Path, default=None,
              help='Directory for results.csv and results.json (default: config output_dir).')
@click.option('--timing/--no-timing', default=None,
              help='Record per-cell milliseconds; --no-timing makes the CSV byte-reproducible.')
@click.pass_obj
@handle_errors
@log_execution
def bench_cmd(config: FilteringConfig, config_path: Path, out_dir: Optional[Path], timing: Optional[bool]):
    """Run the experiment matrix, write CSV and JSON results and print a summary."""
    experiment = ExperimentConfig.from_file(config_path)
    if timing is not None:
        experiment = experiment.model_copy(update={"record_timing": timing})

    out_dir = out_dir or config.output_dir
    csv_path = experiment.csv_path or out_dir / "results.csv"
    json_path = experiment.json_path or out_dir / "results.json"

    engine = BenchEngine(config)
    results = engine.run(experiment)
    emit_csv(results, csv_path)
    emit_json(results, json_path, build_meta(experiment, config))

    failed = sum(1 for r in results if r.error)
    if failed:
        log.warning(f"{failed} of {len(results)} cells failed; see the error column")
    if failed < len(results):
        summary = summarize(results)
        console.print(_summary_table(summary))
        console.print(_findings_table(findings(summary)))
    click.echo(f"{len(results)} rows written to {csv_path} and {json_path}")


@cli.command('synth')
@click.argument('out_path', type=Path)
@click.option('--width', type=click.IntRange(min=64), default=512, show_default=True)
@click.option('--height', type=click.IntRange(min=64), default=512, show_default=True)
@click.option('--seed', type=click.IntRange(min=0), default=0, show_default=True)
@click.option('--kind', type=click.Choice(['document', 'step']), default='document', show_default=True,
              help='Parchment page with ink strokes, or a noisy paper/ink step image.')
@handle_errors
@log_execution
def synth_cmd(out_path: Path, width: int, height: int, seed: int, kind: str):
    """Write a deterministic synthetic document image."""
    generate = generate_step_image if kind == 'step' else generate_synthetic_document
    save_image(generate(width, height, seed), out_path)


if __name__ == "__main__":
    cli()
