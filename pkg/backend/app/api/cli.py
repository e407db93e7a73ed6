"""CLI interface for D2PC experiments"""

import sys
from pathlib import Path
from typing import Callable, Optional, Tuple

import click
import numpy as np
from rich import box
from rich.console import Console
from rich.table import Table

from ..config import config
from ..controllers import ControllerFactory, ControllerMethod, run_closed_loop
from ..datadriven import identify as identify_model
from ..errors import D2pcError
from ..harness import (
    ExperimentResult,
    ExperimentSpec,
    TrialResult,
    build_controller,
    compute_mae,
    get_table,
    nominal_trajectory,
    reproduce_table,
    run_experiment,
    trial_generators,
    validate_spec,
    write_experiment_csv,
)
from ..log import configure_logging
from ..plant import (
    BenchmarkName,
    EpisodeData,
    ExcitationSpec,
    NoiseSpec,
    benchmark,
    collect_episode,
)

console = Console()

BENCHMARKS = [b.value for b in BenchmarkName]
METHODS = [m.value for m in ControllerMethod]


def _spec_options(func: Callable) -> Callable:
    """Options shared by the commands that build an ExperimentSpec"""
    options = [
        click.option("--benchmark", "benchmark_name", type=click.Choice(BENCHMARKS),
                     default="two_mass", show_default=True, help="Benchmark plant"),
        click.option("--method", type=click.Choice(METHODS), default="d2pc",
                     show_default=True, help="Controller"),
        click.option("--nbar", type=int, default=None, help="Order bound (d2pc)"),
        click.option("--nd", "n_d", type=int, default=1, show_default=True,
                     help="Episodes averaged (d2pc, rdeepc)"),
        click.option("--tini", "t_ini", type=int, default=None,
                     help="Initial trajectory length (deepc, rdeepc)"),
        click.option("--q", type=int, default=1, show_default=True,
                     help="Episodes concatenated into a mosaic Hankel matrix (deepc, rdeepc)"),
        click.option("--lambda-g", type=float, default=None, help="rDeePC weight on g"),
        click.option("--lambda-y", type=float, default=None, help="rDeePC weight on the slack"),
        click.option("--noise", type=float, default=0.0, show_default=True,
                     help="Noise intensity A_n"),
        click.option("--nsim", "n_sim", type=int, default=None,
                     help="Closed-loop steps (defaults to the benchmark's)"),
        click.option("--seed", type=int, default=None, help="Base seed (defaults to D2PC_SEED)"),
        click.option("--episode-length", type=int, default=None,
                     help="Override the benchmark's episode length"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _build_spec(trials: Optional[int] = None, **fields) -> ExperimentSpec:
    fields = {key: value for key, value in fields.items() if value is not None}
    fields["benchmark"] = BenchmarkName.from_string(fields.pop("benchmark_name"))
    fields["method"] = ControllerFactory.from_string(fields["method"])
    if trials is not None:
        fields["trials"] = trials
    return ExperimentSpec.create(**fields)


def _fail(error: Exception) -> None:
    console.print(f"[bold red]Error: {error}[/bold red]")
    sys.exit(1)


def _out_path(out: Optional[str], default_name: str) -> Path:
    return Path(out) if out else Path(config.OUTPUT_DIR) / default_name


def _cell_table(title: str, result: ExperimentResult) -> Table:
    table = Table(title=title, box=box.ROUNDED)
    table.add_column("Metric", style="cyan")
    table.add_column("Value", style="green", justify="right")
    table.add_row("Trials", str(result.cell.trials))
    table.add_row("MAE", result.cell.mae_text)
    table.add_row("FR", result.cell.fr_text)
    return table


@click.group()
@click.option("--log-level", default=None, help="Log level (defaults to D2PC_LOG_LEVEL)")
def cli(log_level: Optional[str]):
    """D2PC - data-driven predictive control experiments"""
    configure_logging(log_level)


@cli.command()
@_spec_options
@click.option("--out", default=None, help="Trajectory CSV path")
@click.option("--dump-qp", default=None, help="Directory for QPs whose solve failed")
def simulate(out: Optional[str], dump_qp: Optional[str], **fields):
    """Run a single closed loop and write its trajectory"""
    try:
        spec = _build_spec(trials=1, **fields)
        bench = validate_spec(spec)
        n_sim = spec.n_sim or bench.defaults.n_sim
        y_nom = nominal_trajectory(bench, n_sim)

        data_rng, loop_rng = trial_generators(spec.seed, 0)
        controller = build_controller(spec, bench, data_rng, dump_dir=dump_qp)
        trajectory = run_closed_loop(
            bench.system,
            controller,
            bench.defaults.reference,
            NoiseSpec(intensity=spec.noise),
            n_sim=n_sim,
            rng=loop_rng,
        )
        path = trajectory.to_csv(_out_path(out, f"trajectory_{spec.method.value}.csv"), y_nom)
    except (D2pcError, OSError) as e:
        _fail(e)
        return

    if trajectory.failed:
        console.print(
            f"[bold yellow]Solver failed at step {trajectory.failure_step}[/bold yellow]"
        )
    else:
        mae = compute_mae(trajectory.true_outputs, y_nom)
        console.print(f"[green]✓ {spec.label()}: MAE {mae:.4g}[/green]")
    console.print(f"[green]✓ Trajectory written to {path}[/green]")


@cli.command()
@click.option("--benchmark", "benchmark_name", type=click.Choice(BENCHMARKS),
              default="two_mass", show_default=True, help="Benchmark plant")
@click.option("--nbar", type=int, required=True, help="Order bound")
@click.option("--nd", "n_d", type=int, default=1, show_default=True, help="Episodes to average")
@click.option("--noise", type=float, default=0.0, show_default=True, help="Noise intensity A_n")
@click.option("--seed", type=int, default=None, help="Seed (defaults to D2PC_SEED)")
@click.option("--episode-length", type=int, default=None, help="Episode length T")
@click.option("--episode-csv", "episode_csvs", multiple=True,
              help="Recorded episode CSV (repeatable); skips simulation")
@click.option("--save-episodes", default=None, help="Directory to write simulated episodes to")
@click.option("--out", default=None, help="Model file path")
def identify(
    benchmark_name: str,
    nbar: int,
    n_d: int,
    noise: float,
    seed: Optional[int],
    episode_length: Optional[int],
    episode_csvs: Tuple[str, ...],
    save_episodes: Optional[str],
    out: Optional[str],
):
    """Identify a data-driven model from episodes"""
    try:
        if episode_csvs:
            episodes = [EpisodeData.from_csv(path) for path in episode_csvs]
            source = f"{len(episodes)} recorded episode(s)"
        else:
            bench = benchmark(benchmark_name)
            system, defaults = bench.system, bench.defaults
            length = episode_length or defaults.d2pc_episode_length(nbar, system.m)
            rng = np.random.default_rng(seed if seed is not None else config.DEFAULT_SEED)
            episodes = [
                collect_episode(
                    system,
                    length,
                    nbar,
                    ExcitationSpec(amplitude=defaults.excitation_amplitude),
                    NoiseSpec(intensity=noise),
                    rng=rng,
                )
                for _ in range(n_d)
            ]
            source = f"{n_d} simulated {benchmark_name} episode(s) of length {length}"
            if save_episodes:
                for k, episode in enumerate(episodes):
                    episode.to_csv(Path(save_episodes) / f"episode_{k}.csv")

        model = identify_model(episodes, nbar)
        path = model.to_file(_out_path(out, f"model_nbar{nbar}.txt"))
    except (D2pcError, OSError) as e:
        _fail(e)
        return

    table = Table(title="Identified model", box=box.ROUNDED)
    table.add_column("Channel", style="cyan")
    table.add_column("Data rank", style="green", justify="right")
    table.add_column("Full rank", style="yellow", justify="right")
    for channel, rank in enumerate(model.ranks):
        table.add_row(str(channel + 1), str(rank), str(model.chi_dim + model.m))
    console.print(table)
    console.print(f"[green]✓ Identified from {source}[/green]")
    console.print(f"[green]✓ Model written to {path}[/green]")


@cli.command()
@_spec_options
@click.option("--trials", type=int, default=None, help="Trials (defaults to D2PC_TRIALS)")
@click.option("--workers", type=int, default=None, help="Trial threads")
@click.option("--out", default=None, help="Per-trial CSV path")
def experiment(trials: Optional[int], workers: Optional[int], out: Optional[str], **fields):
    """Run a seeded trial battery for one configuration"""
    try:
        spec = _build_spec(trials=trials, **fields)

        def report(trial: TrialResult) -> None:
            status = "[red]failed[/red]" if trial.failed else f"MAE {trial.mae:.4g}"
            console.print(f"[dim]trial {trial.index} (seed {trial.seed}): {status}[/dim]")

        result = run_experiment(spec, workers=workers, on_trial=report)
        path = write_experiment_csv(
            result, _out_path(out, f"experiment_{spec.benchmark.value}_{spec.method.value}.csv")
        )
    except (D2pcError, OSError) as e:
        _fail(e)
        return

    console.print(_cell_table(spec.label(), result))
    console.print(f"[green]✓ Trials written to {path}[/green]")


@cli.command()
@click.argument("table_id", type=int)
@click.option("--trials", type=int, default=None, help="Trials per cell (defaults to D2PC_TRIALS)")
@click.option("--nsim", "n_sim", type=int, default=None, help="Closed-loop steps")
@click.option("--seed", type=int, default=None, help="Base seed (defaults to D2PC_SEED)")
@click.option("--workers", type=int, default=None, help="Trial threads per cell")
@click.option("--out", default=None, help="Output directory (defaults to D2PC_OUTPUT_DIR)")
def table(
    table_id: int,
    trials: Optional[int],
    n_sim: Optional[int],
    seed: Optional[int],
    workers: Optional[int],
    out: Optional[str],
):
    """Reproduce one comparison table as CSV"""
    try:
        definition = get_table(table_id)
        console.print(f"[bold blue]Table {table_id}: {definition.title}[/bold blue]")
        cells = {}

        def report(row: str, column: str, result: ExperimentResult) -> None:
            cells[(row, column)] = result.cell
            console.print(
                f"[dim]{row} / {column}: MAE {result.cell.mae_text}, FR {result.cell.fr_text}[/dim]"
            )

        path = reproduce_table(
            table_id,
            out_dir=out,
            trials=trials,
            n_sim=n_sim,
            seed=seed,
            workers=workers,
            on_cell=report,
        )
    except (D2pcError, OSError) as e:
        _fail(e)
        return

    rich_table = Table(title=definition.title, box=box.ROUNDED)
    rich_table.add_column("", style="cyan")
    for column in definition.columns:
        rich_table.add_column(column, justify="right")
    for row in definition.rows:
        rich_table.add_row(
            row,
            *(
                f"{cells[(row, column)].mae_text} (FR {cells[(row, column)].fr_text})"
                for column in definition.columns
            ),
        )
    console.print(rich_table)
    console.print(f"[green]✓ Table written to {path}[/green]")


@cli.command()
def benchmarks():
    """List benchmark plants and their defaults"""
    table = Table(title="Benchmarks", box=box.ROUNDED)
    table.add_column("Name", style="cyan")
    table.add_column("n / m / p", justify="right")
    table.add_column("Horizon", justify="right")
    table.add_column("N_sim", justify="right")
    table.add_column("Input bounds", style="yellow")
    for name in BenchmarkName:
        bench = benchmark(name)
        system, defaults = bench.system, bench.defaults
        bounds = (
            f"[{defaults.u_min:g}, {defaults.u_max:g}]" if defaults.constrained else "none"
        )
        table.add_row(
            name.value,
            f"{system.n} / {system.m} / {system.p}",
            str(defaults.horizon),
            str(defaults.n_sim),
            bounds,
        )
    console.print(table)


if __name__ == "__main__":
    cli()
