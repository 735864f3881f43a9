"""
Command-line entry point

    python -m src.runner.cli run --config configs/ants-netlogo.yaml
    python -m src.runner.cli validate-prompts
    python -m src.runner.cli summarize --in output/ants-netlogo
    python -m src.runner.cli show-config --llm
"""

import sys
from pathlib import Path

import click

from src.llm.registry import validate_prompts
from src.runner.experiment import run_experiment
from src.runner.run_config import load_run_config, parse_controller_mix
from src.runner.summary import summarize
from src.utils.config import Config
from src.utils.errors import SwarmSimError

EXIT_SEED_FAILED = 1
EXIT_DEGRADED = 2


@click.group()
def cli():
    """Swarm simulations driven by rule-based, LLM and scripted-oracle agents."""


@cli.command()
@click.option('--config', 'config_path', required=True, type=click.Path(dir_okay=False, path_type=Path),
              help='Run configuration (YAML).')
@click.option('--seed', type=int, default=None, help='Run this single seed instead of the configured list.')
@click.option('--out', 'out_dir', type=click.Path(file_okay=False, path_type=Path), default=None,
              help='Output directory (default: OUTPUT_DIR/<config name>).')
@click.option('--controller-mix', default=None, help='e.g. rule_based:25,scripted_oracle:5')
@click.option('--template', default=None, help='Prompt template name, e.g. ants/v9.')
@click.option('--workers', type=int, default=1, show_default=True, help='Seeds run in parallel.')
@click.option('--fail-on-degraded', is_flag=True, help='Exit with status 2 if any decision fell back.')
@click.option('--progress/--no-progress', default=True, help='Show a progress bar per seed.')
def run(config_path, seed, out_dir, controller_mix, template, workers, fail_on_degraded, progress):
    """Run every seed of a configuration and write logs, metrics and a manifest."""
    try:
        overrides = {
            'seeds': [seed] if seed is not None else None,
            'controller_mix': parse_controller_mix(controller_mix) if controller_mix else None,
            'prompt_template': template,
        }
        config = load_run_config(config_path, overrides)
        out_dir = out_dir or Config.OUTPUT_DIR / config.name
        result = run_experiment(config, out_dir, workers=max(1, workers), progress=progress)
    except SwarmSimError as e:
        raise click.ClickException(str(e))

    for seed_result in result.seeds:
        line = f"seed {seed_result.seed}: {seed_result.status}"
        if seed_result.degraded_decisions:
            line += f" ({seed_result.degraded_decisions} fallback decisions)"
        if seed_result.error:
            line += f" - {seed_result.error}"
        click.echo(line)
    click.echo(f"outputs: {result.out_dir}")

    if result.failed:
        sys.exit(EXIT_SEED_FAILED)
    if fail_on_degraded and result.degraded:
        sys.exit(EXIT_DEGRADED)


@cli.command('validate-prompts')
@click.option('--golden', 'golden_dir', type=click.Path(file_okay=False, path_type=Path), default=None,
              help='Directory of golden prompt files (default: GOLDEN_DIR).')
def validate_prompts_command(golden_dir):
    """Check the registry prompts byte-for-byte against the golden texts."""
    try:
        report = validate_prompts(golden_dir)
    except SwarmSimError as e:
        raise click.ClickException(str(e))

    for check in report.checks:
        click.echo(f"{'PASS' if check.passed else 'FAIL'}  {check.template} ({check.part})")
    if not report.passed:
        raise click.ClickException(f"prompt mismatch: {', '.join(report.failures)}")
    click.echo('all prompts match')


@cli.command('summarize')
@click.option('--in', 'in_dir', required=True, type=click.Path(file_okay=False, path_type=Path),
              help='Run output directory.')
def summarize_command(in_dir):
    """Print the result tables of a finished run and write summary.csv."""
    try:
        text, path = summarize(in_dir)
    except SwarmSimError as e:
        raise click.ClickException(str(e))
    click.echo(text)
    click.echo(f"written: {path}")


@cli.command('show-config')
@click.option('--llm', is_flag=True, help='Also require the API key for llm_remote agents.')
def show_config_command(llm):
    """Print the environment settings (secrets masked) and check them."""
    Config.display()
    try:
        Config.validate(needs_llm=llm)
    except SwarmSimError as e:
        raise click.ClickException(str(e))
    click.echo('configuration ok')


if __name__ == '__main__':
    cli()
