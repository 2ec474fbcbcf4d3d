import sys
import os
import glob
import logging
from typing import Optional
try:
    import typer
    from rich.console import Console
    from rich.table import Table
    from rich.panel import Panel
except ImportError:
    print('Error: CLI dependencies not found.')
    print('Please install with: pip install windpf[cli] or pip install typer rich')
    sys.exit(1)
from .config import Scenario, bundled_scenarios, dump_defaults, load_grid, load_scenario
from .diagnostics import compute_metrics, feasibility_conformance
from .exceptions import ConfigError, SimulationError
from .storage import LogStorage, load_log, table_to_csv
from .sweep import SWEEP_COLUMNS, run_batch, run_scenario, sweep_airspeed_map
from .utils import BUNDLED_DIR, get_seed_override, get_workers, normalize_target, setup_logging
app = typer.Typer(help='windpf - wind-aware fixed-wing path following', no_args_is_help=False, add_completion=False)
console = Console()
logger = logging.getLogger(__name__)
EXIT_CONFIG = 1
EXIT_RUNTIME = 2

def _fail(message: str, code: int):
    console.print(f'[bold red]{message}[/bold red]')
    raise typer.Exit(code=code)

def _config_failure(e: ConfigError):
    console.print(f"[bold red]Invalid config{(' ' + e.source) if e.source else ''}:[/bold red]")
    for issue in e.issues:
        console.print(f'  - [yellow]{issue.key}[/yellow]' + (f' (line {issue.line})' if issue.line is not None else '') + f': {issue.message}', highlight=False)
    raise typer.Exit(code=EXIT_CONFIG)

def _resolve_seed(seed: Optional[int]) -> Optional[int]:
    return seed if seed is not None else get_seed_override()

@app.callback(invoke_without_command=True)
def windpf_main(ctx: typer.Context, dump: bool=typer.Option(False, '--dump-defaults', help='Print the default scenario as YAML and exit'), f32: bool=typer.Option(False, '--f32-conformance', help='Run the 32-bit feasibility precision suite and exit')):
    setup_logging()
    if dump:
        typer.echo(dump_defaults(), nl=False)
        raise typer.Exit()
    if f32:
        report = feasibility_conformance()
        console.print_json(data=report)
        if report['status'] != 'pass':
            raise typer.Exit(code=EXIT_RUNTIME)
        raise typer.Exit()
    if ctx.invoked_subcommand is None:
        windpf_show_help()

@app.command(name='run', help='Run one scenario and write <name>_log.csv and <name>_metrics.json.\n\nUsage: windpf run <scenario-file> [--out DIR] [--seed N]')
def windpf_run(target: str=typer.Argument(..., help='Scenario file or bundled scenario name'), out: str=typer.Option('.', '--out', '-o', help='Output directory'), seed: Optional[int]=typer.Option(None, '--seed', help='Override sim.seed'), archive: bool=typer.Option(False, '--archive', help='Also write a compressed .wpfz log archive')):
    try:
        scenario = load_scenario(target).with_seed(_resolve_seed(seed))
    except ConfigError as e:
        _config_failure(e)
    try:
        result = run_scenario(scenario, out, archive=archive)
    except ConfigError as e:
        _config_failure(e)
    except SimulationError as e:
        _fail(f'Simulation failed: {e}', EXIT_RUNTIME)
    except Exception as e:
        logger.debug('run failed', exc_info=True)
        _fail(f'Error: {e}', EXIT_RUNTIME)
    console.print(f"[bold green]{scenario.name}[/bold green]: max track error {result['max_track_error']:.3f} m")
    for kind, path in result['paths'].items():
        console.print(f'  {kind}: {path}')

@app.command(name='sweep', help='Evaluate the steady-state airspeed map over a (w, lambda) grid.\n\nUsage: windpf sweep <grid-file> [--out DIR]')
def windpf_sweep(target: str=typer.Argument(..., help='Grid file or bundled grid name'), out: str=typer.Option('.', '--out', '-o', help='Output directory'), workers: Optional[int]=typer.Option(None, '--workers', '-j', help='Worker processes (default: WINDPF_WORKERS or min(4, cpus))')):
    try:
        grid = load_grid(target)
    except ConfigError as e:
        _config_failure(e)
    try:
        data = sweep_airspeed_map(grid, workers=get_workers(workers))
        path = LogStorage(out).save_bytes(f'{grid.name}.csv', table_to_csv(SWEEP_COLUMNS, data))
    except Exception as e:
        logger.debug('sweep failed', exc_info=True)
        _fail(f'Error: {e}', EXIT_RUNTIME)
    failed = int((data[:, 4] < 0.5).sum() + (data[:, 7] < 0.5).sum())
    console.print(f'[bold green]Swept {data.shape[0]} cells[/bold green] -> {path}')
    if failed:
        console.print(f'[yellow]{failed} cells did not converge (flagged in converged columns)[/yellow]')

@app.command(name='batch', help='Run every scenario file in a directory on a worker pool.\n\nUsage: windpf batch <dir> [--out DIR] [--seed N]')
def windpf_batch(directory: str=typer.Argument(..., help='Directory of scenario files'), out: str=typer.Option('.', '--out', '-o', help='Output directory'), seed: Optional[int]=typer.Option(None, '--seed', help='Override sim.seed for every scenario'), workers: Optional[int]=typer.Option(None, '--workers', '-j', help='Worker processes'), archive: bool=typer.Option(False, '--archive', help='Also write .wpfz archives')):
    if not os.path.isdir(directory):
        _fail(f"Directory '{directory}' not found.", EXIT_CONFIG)
    paths = sorted(glob.glob(os.path.join(directory, '*.yaml')) + glob.glob(os.path.join(directory, '*.yml')))
    if not paths:
        _fail(f"No scenario files in '{directory}'.", EXIT_CONFIG)
    results = run_batch(paths, out, seed=_resolve_seed(seed), workers=get_workers(workers), archive=archive)
    table = Table(title='Batch Results')
    table.add_column('Scenario', style='cyan')
    table.add_column('Status')
    table.add_column('Max track error [m]', justify='right')
    table.add_column('Detail', style='dim')
    for r in results:
        style = 'green' if r['status'] == 'ok' else 'red'
        err = f"{r['max_track_error']:.3f}" if 'max_track_error' in r else '-'
        table.add_row(r['scenario'], f"[{style}]{r['status']}[/{style}]", err, r.get('error', '').splitlines()[0] if r.get('error') else '')
    console.print(table)
    statuses = {r['status'] for r in results}
    if 'failed' in statuses:
        raise typer.Exit(code=EXIT_RUNTIME)
    if 'invalid' in statuses:
        raise typer.Exit(code=EXIT_CONFIG)

@app.command(name='inspect', help='Recompute and print metrics of a log (.csv or .wpfz).\n\nUsage: windpf inspect <log> [--scenario FILE]')
def windpf_inspect(target: str=typer.Argument(..., help='Log file (.csv or .wpfz)'), scenario_file: Optional[str]=typer.Option(None, '--scenario', '-s', help='Scenario the log came from (metrics window, v_g_min)')):
    if not os.path.exists(target):
        _fail(f"File '{target}' not found.", EXIT_CONFIG)
    try:
        log = load_log(target)
    except (ValueError, OSError) as e:
        _fail(f'Cannot read log: {e}', EXIT_RUNTIME)
    try:
        if scenario_file:
            scenario = load_scenario(scenario_file)
        elif normalize_target(str(log.meta.get('name', ''))).startswith(BUNDLED_DIR):
            scenario = load_scenario(str(log.meta['name']))
        else:
            scenario = Scenario(name=str(log.meta.get('name') or 'run'))
    except ConfigError as e:
        _config_failure(e)
    try:
        report = compute_metrics(log, scenario)
    except (ValueError, KeyError) as e:
        _fail(f'Cannot compute metrics: {e}', EXIT_RUNTIME)
    console.print(f'[bold]Log:[/bold] {target} ({len(log)} samples, {len(log.columns)} columns)')
    console.print_json(data=report.model_dump(mode='json'))

@app.command(name='scenarios', help='List bundled scenarios.\n\nUsage: windpf scenarios')
def windpf_scenarios():
    table = Table(title='Bundled Scenarios')
    table.add_column('Name', style='cyan')
    table.add_column('Path', style='green')
    table.add_column('Wind')
    table.add_column('Airspeed mode')
    table.add_column('Duration [s]', justify='right')
    for name in bundled_scenarios():
        try:
            s = load_scenario(name)
        except ConfigError as e:
            table.add_row(name, '[red]invalid[/red]', '', '', str(len(e.issues)) + ' issues')
            continue
        table.add_row(name, s.path.kind, s.wind.kind, s.guidance.airspeed.mode.value, f'{s.sim.duration:g}')
    console.print(table)

@app.command(name='env')
def windpf_env():
    table = Table(title='Environment Variables')
    table.add_column('Variable', style='cyan')
    table.add_column('Value', style='green')
    table.add_column('Description', style='white')
    env_vars = {'WINDPF_DEBUG': (os.environ.get('WINDPF_DEBUG', 'False'), 'Enable Debug Logging'), 'WINDPF_WORKERS': (os.environ.get('WINDPF_WORKERS', 'Not Set'), 'Worker processes for sweep/batch'), 'WINDPF_SEED': (os.environ.get('WINDPF_SEED', 'Not Set'), 'Seed override when --seed is not given')}
    for key, (val, desc) in env_vars.items():
        table.add_row(key, val, desc)
    console.print(table)

@app.command(name='version')
def windpf_version():
    from . import __version__ as pkg_version
    console.print(f'[bold cyan]windpf v{pkg_version}[/bold cyan]')

@app.command(name='help')
def windpf_help(command: Optional[str]=typer.Argument(None, help='Command to get help for')):
    if command:
        windpf_show_command_help(command)
    else:
        windpf_show_help()

def windpf_show_command_help(command_name: str):
    cmd_func = None
    for cmd in app.registered_commands:
        if cmd.name == command_name:
            cmd_func = cmd
            break
    if not cmd_func:
        console.print(f"[red]Command '{command_name}' not found.[/red]")
        return
    help_text = cmd_func.help or 'No description available.'
    console.print(Panel(f'[white]{help_text}[/white]', title=f'[bold cyan]Help: {command_name}[/bold cyan]', border_style='cyan'))

def windpf_show_help():
    console.print(Panel('[bold]Wind-aware path following guidance[/bold]\n[dim]Scenario runner and analysis front end[/dim]', title='[bold cyan]windpf[/bold cyan]', border_style='cyan'))
    table = Table(show_header=True, header_style='bold magenta', box=None)
    table.add_column('Category', style='dim', width=15)
    table.add_column('Command', style='green', width=20)
    table.add_column('Description', style='white')
    table.add_row('Simulation', 'run', 'Run one scenario')
    table.add_row('', 'batch', 'Run a directory of scenarios')
    table.add_row('', 'scenarios', 'List bundled scenarios')
    table.add_row('Analysis', 'sweep', 'Steady-state airspeed map')
    table.add_row('', 'inspect', 'Metrics of a saved log')
    table.add_row('Info', 'env', 'Environment variables')
    table.add_row('', 'version', 'Show version')
    table.add_row('', 'help', 'Show this help or command help')
    console.print(table)
    console.print("\n[dim]Tip: Use 'windpf help <command>' for detailed usage.[/dim]")
    console.print('\n[bold underline]Usage Examples:[/bold underline]')
    console.print('  [white]windpf[/white] [bold cyan]run[/bold cyan] [yellow]line_nowind[/yellow] [blue]--out results[/blue]')
    console.print('  [white]windpf[/white] [bold cyan]sweep[/bold cyan] [yellow]airspeed_map[/yellow]')
    console.print('  [white]windpf[/white] [bold cyan]--dump-defaults[/bold cyan] > my_scenario.yaml')
if __name__ == '__main__':
    app()
