#!/usr/bin/env python3
"""
Augmentation Selection Tool
Pick audio augmentation distributions by conditional dependence, analyze the
search, listen to samples, and run a small contrastive trainer with the choice.

Usage:
    python aug_select.py make-corpus --out-dir data/synthetic
    python aug_select.py search --manifest data/synthetic/manifest.jsonl --out-dir runs/search
    python aug_select.py med runs/search/search_result.jsonl --out-dir runs/med
    python aug_select.py preview --audio clip.wav --distribution runs/search/selected_distribution.json --out-dir runs/preview
    python aug_select.py toytrain --manifest data/synthetic/manifest.jsonl --preset basic --out-dir runs/train

Exit codes: 0 success, 1 usage or configuration error, 2 data error, 3 numerical failure.
"""

import sys
import os
import json
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

import click
import numpy as np
import pandas as pd

# Add project root to Python path for imports
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from config.settings import settings
from src.analysis.med import compare_med_reports, med_report
from src.analysis.reports import emit_report
from src.augment.chain import apply_chain, sample_chain
from src.augment.distribution import PRESETS, AugDistribution, load_distribution, save_distribution
from src.contrastive.training import ToyTrainer, load_checkpoint, save_checkpoint
from src.corpus.audio import cut_random_segment, load_waveform, write_waveform
from src.corpus.manifest import load_dataset_audio, load_manifest
from src.corpus.synthetic import SYNTHETIC_CLASSES, generate_synthetic_corpus
from src.selector.report import read_search_result, write_search_result
from src.selector.search import random_search, score_candidates
from src.utils.exceptions import AugSelError, ConfigurationError
from src.utils.logger import (
    get_logger,
    set_level_everywhere,
    set_run_context_everywhere,
    suppress_console_logging,
)
from src.utils.run_config import RunConfig
from src.utils.validators import require
from src.utils.table_formatters import (
    format_chain_rich,
    format_med_comparison_rich,
    format_med_rich,
    format_score_rich,
    format_search_summary_rich,
    format_training_rich,
)

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1

SEARCH_RESULT_FILE = 'search_result.jsonl'
SELECTED_DISTRIBUTION_FILE = 'selected_distribution.json'
CHECKPOINT_FILE = 'checkpoint.npz'
LOSS_CURVE_FILE = 'loss_curve.csv'
MED_COMPARISON_FILE = 'med_comparison.csv'


class AugSelGroup(click.Group):
    """Click group that maps failures to the tool's exit codes."""

    def main(self, *args, **kwargs):
        if not kwargs.pop('standalone_mode', True):
            return super().main(*args, standalone_mode=False, **kwargs)
        try:
            rv = super().main(*args, standalone_mode=False, **kwargs)
        except click.UsageError as e:
            e.show()
            sys.exit(EXIT_USAGE)
        except click.ClickException as e:
            e.show()
            sys.exit(e.exit_code)
        except click.Abort:
            click.echo("Aborted!", err=True)
            sys.exit(EXIT_USAGE)
        except AugSelError as e:
            logger.error(str(e))
            click.echo(f"Error: {e}", err=True)
            sys.exit(e.exit_code)
        sys.exit(rv if isinstance(rv, int) else EXIT_OK)


def resolve_distribution(distribution_file: Optional[str], preset: Optional[str]) -> Tuple[str, AugDistribution]:
    """Exactly one of a distribution file or a named preset."""
    require(bool(distribution_file) != bool(preset), "give exactly one of --distribution or --preset")
    if preset:
        return f"preset:{preset}", PRESETS[preset]()
    return str(distribution_file), load_distribution(distribution_file)


def embedded_config(rc: RunConfig) -> Dict[str, Any]:
    """Run configuration written into outputs; worker count never changes results."""
    record = rc.to_dict()
    record.pop('workers', None)
    return record


def start_run(rc: RunConfig) -> RunConfig:
    rc.validate()
    set_run_context_everywhere(rc.command, rc.seed)
    logger.info(f"Starting {rc.command} (seed {rc.seed})")
    return rc


@click.group(cls=AugSelGroup)
@click.option('--config', 'config_file', type=click.Path(dir_okay=False), help='Configuration file path')
@click.option('--log-level', type=click.Choice(['DEBUG', 'INFO', 'WARNING', 'ERROR'], case_sensitive=False),
              help='Override the configured log level')
@click.option('--quiet', '-q', is_flag=True, help='Suppress console logging (summaries are still printed)')
@click.pass_context
def cli(ctx, config_file, log_level, quiet):
    """Augmentation distribution selection by conditional dependence."""
    ctx.ensure_object(dict)
    if config_file:
        if not os.path.exists(config_file):
            raise ConfigurationError(f"configuration file not found: {config_file}")
        settings.reload(config_file)
        set_level_everywhere(str(settings.get('logging.level', 'INFO')))
    if log_level:
        set_level_everywhere(log_level)
    if quiet:
        suppress_console_logging()
    ctx.obj['quiet'] = quiet


@cli.command('make-corpus')
@click.option('--out-dir', required=True, type=click.Path(file_okay=False), help='Directory for audio and manifest')
@click.option('--per-class', default=20, show_default=True, type=int, help='Files per class')
@click.option('--classes', default='low,high', show_default=True,
              help=f"Comma-separated classes from: {', '.join(SYNTHETIC_CLASSES)}")
@click.option('--seed', default=0, show_default=True, type=int, help='Random seed')
def make_corpus(out_dir, per_class, classes, seed):
    """Write the bundled synthetic corpus and its manifest."""
    names = tuple(c.strip() for c in classes.split(',') if c.strip())
    unknown = [c for c in names if c not in SYNTHETIC_CLASSES]
    if unknown or len(names) < 2:
        raise ConfigurationError(
            f"need two or more classes from {', '.join(SYNTHETIC_CLASSES)}; got {classes!r}"
        )
    if per_class < 1:
        raise ConfigurationError(f"--per-class must be positive, got {per_class}")
    set_run_context_everywhere('make-corpus', seed)
    manifest = generate_synthetic_corpus(out_dir, n_per_class=per_class, classes=names, seed=seed)
    click.echo(f"Manifest written to: {manifest}")


@cli.command()
@click.option('--manifest', required=True, type=click.Path(exists=True, dir_okay=False), help='Dataset manifest (JSON lines)')
@click.option('--out-dir', required=True, type=click.Path(file_okay=False), help='Output directory')
@click.option('--seed', default=0, show_default=True, type=int, help='Master seed')
@click.option('--candidates', '-p', type=int, help='Number of sampled distributions [default: 100]')
@click.option('--views', '-n', 'n_views', type=int, help='Augmented views per sample [default: 20]')
@click.option('--epsilon', type=float, help='Regularization of the conditional operator [default: 1e-3]')
@click.option('--max-origins', type=int, help='Cap on origin samples used for scoring [default: 100]')
@click.option('--workers', type=int, envvar='AUGSEL_WORKERS', show_envvar=True,
              help='Parallel candidate scoring processes [default: 1]')
@click.pass_context
def search(ctx, manifest, out_dir, seed, candidates, n_views, epsilon, max_origins, workers):
    """Random search for the distribution with the lowest dependence score."""
    rc = start_run(RunConfig.from_settings(
        'search', manifest=manifest, out_dir=out_dir, seed=seed, candidates=candidates,
        n_views=n_views, epsilon=epsilon, max_origins=max_origins, workers=workers,
    ))
    ds = load_manifest(manifest)
    result = random_search(ds, rc.candidates, rc.scoring_config(), rc.seed, workers=rc.workers,
                           extra_config={'run_config': embedded_config(rc)})

    out = Path(out_dir)
    result_path = write_search_result(result, out / SEARCH_RESULT_FILE)
    selected_path = save_distribution(result.best().distribution, out / SELECTED_DISTRIBUTION_FILE)

    click.echo(format_search_summary_rich(result, run_config=embedded_config(rc)))
    click.echo(f"Search result written to: {result_path}")
    click.echo(f"Selected distribution written to: {selected_path}")


@cli.command()
@click.option('--manifest', required=True, type=click.Path(exists=True, dir_okay=False), help='Dataset manifest (JSON lines)')
@click.option('--distribution', '-d', 'distribution_files', multiple=True, type=click.Path(exists=True, dir_okay=False),
              help='Distribution JSON file (repeatable)')
@click.option('--preset', 'presets', multiple=True, type=click.Choice(sorted(PRESETS)), help='Named preset (repeatable)')
@click.option('--seed', default=0, show_default=True, type=int, help='Master seed')
@click.option('--views', '-n', 'n_views', type=int, help='Augmented views per sample [default: 20]')
@click.option('--epsilon', type=float, help='Regularization of the conditional operator [default: 1e-3]')
@click.option('--max-origins', type=int, help='Cap on origin samples used for scoring [default: 100]')
@click.option('--workers', type=int, envvar='AUGSEL_WORKERS', show_envvar=True, help='Parallel scoring processes')
@click.option('--output-file', '-f', type=click.Path(dir_okay=False), help='Also write the scores as a search result file')
def score(manifest, distribution_files, presets, seed, n_views, epsilon, max_origins, workers, output_file):
    """Score given distributions without sampling new ones."""
    named = [(f"preset:{p}", PRESETS[p]()) for p in presets]
    named += [(str(path), load_distribution(path)) for path in distribution_files]
    if not named:
        raise ConfigurationError("give at least one --distribution or --preset")

    rc = start_run(RunConfig.from_settings(
        'score', manifest=manifest, seed=seed, n_views=n_views, epsilon=epsilon,
        max_origins=max_origins, workers=workers, candidates=len(named),
    ))
    ds = load_manifest(manifest)
    result = score_candidates(ds, [d for _, d in named], rc.scoring_config(), rc.seed, workers=rc.workers,
                              extra_config={'run_config': embedded_config(rc),
                                            'sources': [name for name, _ in named]})

    by_index = {c.index: c for c in result.candidates}
    rows = [{'name': name, 'score': by_index[i].score.value, 'n': by_index[i].score.n,
             'epsilon': by_index[i].score.epsilon} for i, (name, _) in enumerate(named)]
    click.echo(format_score_rich(rows))

    if output_file:
        path = write_search_result(result, output_file)
        click.echo(f"Scores written to: {path}")


@cli.command()
@click.argument('result_files', nargs=-1, required=True, type=click.Path(exists=True, dir_okay=False))
@click.option('--k', type=int, help='Size of the best and worst groups [default: 10]')
@click.option('--out-dir', required=True, type=click.Path(file_okay=False), help='Output directory')
@click.option('--task', 'tasks', multiple=True, help='Task name per result file (default: file name)')
def med(result_files, k, out_dir, tasks):
    """Mean Extremal Difference reports for one or more search results."""
    if tasks and len(tasks) != len(result_files):
        raise ConfigurationError(f"got {len(tasks)} --task names for {len(result_files)} result files")
    names = list(tasks) if tasks else [Path(p).stem for p in result_files]
    if len(set(names)) != len(names):
        raise ConfigurationError(f"task names must be unique, got {names}; use --task to name them")

    rc = start_run(RunConfig.from_settings('med', out_dir=out_dir, k=k))
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    reports = {}
    for name, path in zip(names, result_files):
        report = med_report(read_search_result(path), rc.k)
        reports[name] = report
        config = dict(embedded_config(rc), source=str(path), task=name)
        for fmt, suffix in (('table', 'txt'), ('csv', 'csv'), ('jsonl', 'jsonl')):
            emit_report(report, fmt, out / f"{name}_med.{suffix}", config)
        click.echo(format_med_rich(report, name))

    if len(reports) > 1:
        frame = compare_med_reports(reports)
        comparison = out / MED_COMPARISON_FILE
        frame.to_csv(comparison, float_format='%.17g')
        click.echo(format_med_comparison_rich(frame))
        click.echo(f"Comparison written to: {comparison}")
    click.echo(f"MED reports written to: {out}")


@cli.command()
@click.option('--audio', 'audio_file', required=True, type=click.Path(exists=True, dir_okay=False), help='16-bit mono WAV file')
@click.option('--distribution', '-d', 'distribution_file', type=click.Path(exists=True, dir_okay=False),
              help='Distribution JSON file')
@click.option('--preset', type=click.Choice(sorted(PRESETS)), help='Named preset instead of a file')
@click.option('--count', default=5, show_default=True, type=int, help='Number of augmented variants')
@click.option('--out-dir', required=True, type=click.Path(file_okay=False), help='Output directory')
@click.option('--seed', default=0, show_default=True, type=int, help='Random seed')
def preview(audio_file, distribution_file, preset, count, out_dir, seed):
    """Write augmented 1 s variants of one file with their sampled chains."""
    if count < 1:
        raise ConfigurationError(f"--count must be positive, got {count}")
    source, distribution = resolve_distribution(distribution_file, preset)
    rc = start_run(RunConfig.from_settings('preview', out_dir=out_dir, seed=seed))
    config = dict(embedded_config(rc), audio=str(audio_file), distribution=source, count=count)

    w = load_waveform(audio_file)
    rng = np.random.default_rng(seed)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    chains, files = [], []
    for i in range(count):
        segment = cut_random_segment(w, rc.segment_seconds, rng)
        chain = sample_chain(distribution, rng)
        wav_path = write_waveform(apply_chain(chain, segment), out / f"preview_{i:03d}.wav")
        with open(out / f"preview_{i:03d}.json", 'w', encoding='utf-8') as f:
            json.dump({'file': wav_path.name, 'chain': chain.to_dict(), 'run_config': config}, f, indent=2)
            f.write('\n')
        chains.append(chain)
        files.append(wav_path.name)

    click.echo(format_chain_rich(chains, files))
    click.echo(f"Preview written to: {out}")


@cli.command()
@click.option('--manifest', required=True, type=click.Path(exists=True, dir_okay=False), help='Dataset manifest (JSON lines)')
@click.option('--distribution', '-d', 'distribution_file', type=click.Path(exists=True, dir_okay=False),
              help='Distribution JSON file')
@click.option('--preset', type=click.Choice(sorted(PRESETS)), help='Named preset instead of a file')
@click.option('--out-dir', required=True, type=click.Path(file_okay=False), help='Output directory')
@click.option('--seed', default=0, show_default=True, type=int, help='Random seed')
@click.option('--steps', type=int, help='Training steps [default: 200]')
@click.option('--batch-size', type=int, help='Pairs per batch [default: 8]')
@click.option('--lr', 'learning_rate', type=float, help='Learning rate [default: 0.01]')
@click.option('--resume', type=click.Path(exists=True, dir_okay=False), help='Continue from a checkpoint')
def toytrain(manifest, distribution_file, preset, out_dir, seed, steps, batch_size, learning_rate, resume):
    """Contrastive training of the small encoder with a chosen distribution."""
    source, distribution = resolve_distribution(distribution_file, preset)
    rc = start_run(RunConfig.from_settings(
        'toytrain', manifest=manifest, out_dir=out_dir, seed=seed,
        training={'steps': steps, 'batch_size': batch_size, 'learning_rate': learning_rate},
    ))
    training = rc.training_config()
    config = dict(embedded_config(rc), distribution=source)

    ds = load_manifest(manifest)
    audio = load_dataset_audio(ds, workers=rc.workers)
    trainer = ToyTrainer(ds, audio, distribution, training, seed=rc.seed)

    params, start_step = None, 0
    if resume:
        params, meta = load_checkpoint(resume)
        start_step = meta['step']
        saved_seed = meta.get('metadata', {}).get('seed')
        if saved_seed is not None and saved_seed != rc.seed:
            logger.warning(f"Checkpoint was trained with seed {saved_seed}, resuming with seed {rc.seed}")
        logger.info(f"Resuming from {resume} at step {start_step}")

    params, losses = trainer.run(params=params, start_step=start_step)

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    curve = pd.DataFrame({'step': range(start_step, start_step + len(losses)), 'loss': losses})
    curve.to_csv(out / LOSS_CURVE_FILE, index=False, float_format='%.17g')
    checkpoint = save_checkpoint(params, out / CHECKPOINT_FILE, step=start_step + len(losses), metadata=config)

    click.echo(format_training_rich(losses, training.batch_size, str(checkpoint)))
    click.echo(f"Loss curve written to: {out / LOSS_CURVE_FILE}")


def main():
    cli(obj={})


if __name__ == '__main__':
    main()
