"""Command line interface.

Every command reads one run-config file (``--config`` or FOCIRNET_CONFIG);
``--set section.key=value`` and the dedicated flags override its keys.
Exit codes: 0 success, 1 usage or configuration error, 2 data error,
3 numerical failure.
"""

import logging
import sys

import click

from src.config import load_run_config
from src.config.run_config import TARGETS, VARIANTS
from src.controllers import (
    cmd_ablate,
    cmd_evaluate,
    cmd_gradcheck,
    cmd_importance,
    cmd_ingest,
    cmd_predict,
    cmd_sweep,
    cmd_synth,
    cmd_train,
)
from src.controllers.experiment_controller import ABLATION_MODES, SWEEP_PARAMETERS
from src.utils.errors import FocirError
from src.utils.logger import setup_logger

# Configure logger
logger = logging.getLogger(__name__)


class FocirGroup(click.Group):
    """Command group mapping toolkit errors to process exit codes."""

    def main(self, *args, **kwargs):
        kwargs['standalone_mode'] = False
        try:
            return super().main(*args, **kwargs)
        except click.ClickException as e:
            e.show()
            sys.exit(1)
        except click.Abort:
            click.echo("Aborted!", err=True)
            sys.exit(1)
        except FocirError as e:
            click.echo(f"Error: {e.message}", err=True)
            sys.exit(e.exit_code)


def config_options(func):
    func = click.option('--set', 'overrides', multiple=True, metavar='SECTION.KEY=VALUE',
                        help='Override a run-config key (repeatable).')(func)
    func = click.option('--config', 'config_path', type=click.Path(dir_okay=False), envvar='FOCIRNET_CONFIG',
                        default=None, help='Run-config TOML file.')(func)
    return func


def model_options(func):
    func = click.option('--seed', type=int, default=None, help='Seed for initialisation and batching.')(func)
    func = click.option('--variant', type=click.Choice(VARIANTS), default=None, help='Network variant.')(func)
    func = click.option('--target', type=click.Choice(TARGETS), default=None, help='Forecast target.')(func)
    return func


def data_option(func):
    return click.option('--data', 'data_dir', type=click.Path(file_okay=False), envvar='FOCIRNET_DATA_DIR',
                        required=True, help='Directory with the raw data files.')(func)


def checkpoint_option(func):
    return click.option('--checkpoint', type=click.Path(dir_okay=False), envvar='FOCIRNET_CHECKPOINT',
                        required=True, help='Model checkpoint file.')(func)


def resolve_run_config(config_path, overrides, target=None, variant=None, seed=None):
    """Run config with flags applied after ``--set`` overrides (flags win)."""
    overrides = list(overrides)
    if target is not None:
        overrides.append(f'model.target="{target}"')
    if variant is not None:
        overrides.append(f'model.variant="{variant}"')
    if seed is not None:
        overrides += [f'model.seed={seed}', f'train.seed={seed}', f'synth.seed={seed}']
    return load_run_config(config_path, overrides)


def echo_rows(rows, columns=None):
    if not rows:
        return
    columns = columns or list(rows[0])
    click.echo(','.join(columns))
    for row in rows:
        click.echo(','.join(f"{row[c]:.6g}" if isinstance(row[c], float) else str(row[c]) for c in columns))


def echo_summary(summary):
    for key, value in summary.items():
        click.echo(f"{key}: {value:.4f}" if isinstance(value, float) else f"{key}: {value}")


@click.group(cls=FocirGroup)
@click.option('--log-level', default=None, help='Logging level (default from LOG_LEVEL or INFO).')
def cli(log_level):
    """FOCIR-Net ride-hailing demand and supply-demand gap forecasting."""
    setup_logger('src', log_level)


@cli.command()
@config_options
@click.option('--seed', type=int, default=None, help='Generator seed.')
@click.option('--out', 'out_dir', type=click.Path(file_okay=False), required=True, help='Output directory.')
def synth(config_path, overrides, seed, out_dir):
    """Generate a synthetic dataset with planted spatial structure."""
    run_config = resolve_run_config(config_path, overrides, seed=seed)
    result = cmd_synth(run_config, out_dir)
    echo_summary(result['summary'])


@cli.command()
@config_options
@data_option
@click.option('--out', type=click.Path(dir_okay=False), default=None, help='Per-zone totals CSV.')
def ingest(config_path, overrides, data_dir, out):
    """Aggregate raw files into the zone/slot frame and summarise it."""
    run_config = resolve_run_config(config_path, overrides)
    result = cmd_ingest(run_config, data_dir, out)
    echo_summary(result['summary'])


@cli.command()
@config_options
@model_options
@data_option
@click.option('--out', type=click.Path(dir_okay=False), required=True, help='Checkpoint to write.')
@click.option('--log', 'log_path', type=click.Path(dir_okay=False), default=None, help='Train log CSV.')
def train(config_path, overrides, target, variant, seed, data_dir, out, log_path):
    """Train a network and write its checkpoint and train log."""
    run_config = resolve_run_config(config_path, overrides, target, variant, seed)
    result = cmd_train(run_config, data_dir, out, log_path)
    echo_summary({k: v for k, v in result.items() if k != 'success'})


@cli.command()
@checkpoint_option
@data_option
@click.option('--split', type=click.Choice(('train', 'val', 'test')), default='test', help='Split to score.')
@click.option('--out', type=click.Path(dir_okay=False), default=None, help='Metrics CSV.')
def evaluate(checkpoint, data_dir, split, out):
    """Score a checkpoint and the naive baselines."""
    result = cmd_evaluate(checkpoint, data_dir, out, split)
    echo_rows(result['metrics'], ['model', 'target', 'mae', 'rmse', 'smape'])


@cli.command()
@config_options
@model_options
@data_option
@click.option('--mode', type=click.Choice(ABLATION_MODES), required=True, help='Ablate variants or feature groups.')
@click.option('--out', type=click.Path(dir_okay=False), default=None, help='Ablation matrix CSV.')
def ablate(config_path, overrides, target, variant, seed, data_dir, mode, out):
    """Train and score every ablation configuration."""
    run_config = resolve_run_config(config_path, overrides, target, variant, seed)
    result = cmd_ablate(run_config, data_dir, mode, out)
    echo_rows(result['rows'], ['configuration', 'seed', 'target', 'mae', 'rmse', 'smape'])


@cli.command()
@checkpoint_option
@click.option('--out', 'out_dir', type=click.Path(file_okay=False), default=None, help='Output directory.')
def importance(checkpoint, out_dir):
    """Extract feature importance scores from a checkpoint."""
    result = cmd_importance(checkpoint, out_dir)
    echo_rows(result['spatial'], ['feature', 'score'])


@cli.command()
@checkpoint_option
@data_option
@click.option('--slot', type=int, required=True, help='Slot index to predict.')
@click.option('--clamp-zero', is_flag=True, default=False, help='Clamp predictions at zero.')
@click.option('--out', type=click.Path(dir_okay=False), default=None, help='Prediction CSV.')
def predict(checkpoint, data_dir, slot, clamp_zero, out):
    """Predict every zone for one slot."""
    result = cmd_predict(checkpoint, data_dir, slot, clamp_zero, out)
    echo_rows(result['predictions'], ['zone', 'prediction', 'actual'])


@cli.command()
@config_options
@model_options
@data_option
@click.option('--param', type=click.Choice(sorted(SWEEP_PARAMETERS)), required=True, help='Parameter to sweep.')
@click.option('--values', required=True, help='Comma-separated values, e.g. 3,5,7,9,11,13.')
@click.option('--out', type=click.Path(dir_okay=False), default=None, help='Sweep CSV.')
def sweep(config_path, overrides, target, variant, seed, data_dir, param, values, out):
    """Train one model per parameter value and select by validation loss."""
    run_config = resolve_run_config(config_path, overrides, target, variant, seed)
    result = cmd_sweep(run_config, data_dir, param, [v.strip() for v in values.split(',') if v.strip()], out)
    echo_rows(result['rows'])
    click.echo(f"best: {param}={result['best']}")


@cli.command()
@click.option('--variant', 'variants', type=click.Choice(VARIANTS), multiple=True, help='Variant(s) to check.')
@click.option('--eps', type=float, default=1e-6, help='Finite-difference step.')
@click.option('--tolerance', type=float, default=1e-5, help='Largest accepted relative error.')
@click.option('--activation', type=click.Choice(('tanh', 'relu')), default='tanh', help='Hidden activations.')
def gradcheck(variants, eps, tolerance, activation):
    """Check analytic gradients of the training objective by finite differences."""
    result = cmd_gradcheck(variants or VARIANTS, eps, tolerance, activation)
    echo_rows(result['rows'], ['variant', 'max_relative_error', 'worst_array'])


@cli.command()
@click.option('--checkpoint', type=click.Path(dir_okay=False), envvar='FOCIRNET_CHECKPOINT', default=None)
@click.option('--data', 'data_dir', type=click.Path(file_okay=False), envvar='FOCIRNET_DATA_DIR', default=None)
@click.option('--config-name', default='development', envvar='FLASK_CONFIG', help='Server configuration.')
@click.option('--host', default=None, help='Bind address (default from HOST).')
@click.option('--port', type=int, default=None, help='Port (default from PORT).')
def serve(checkpoint, data_dir, config_name, host, port):
    """Serve predictions over a read-only HTTP JSON API."""
    from src import create_app

    app = create_app(config_name, checkpoint=checkpoint, data_dir=data_dir)
    host = host or app.config.get('HOST', '127.0.0.1')
    port = port or app.config.get('PORT', 20001)
    click.echo(f"Starting {app.config.get('APP_NAME')} in {config_name.upper()} mode on http://{host}:{port}")
    app.run(host=host, port=port, debug=app.config['DEBUG'], use_reloader=False)


def main():
    cli()


if __name__ == '__main__':
    main()
