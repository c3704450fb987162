#!/usr/bin/env python3
"""
Rich table formatters for augmentation selection console output.
Each formatter renders to a string so the CLI can echo it or write it to a file.
"""

import math
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd
from rich.console import Console
from rich.table import Table
from rich.panel import Panel
from rich import box

from ..analysis.med import MEDReport
from ..augment.chain import AugChain
from ..augment.distribution import AugDistribution, PARAMETER_NAMES
from ..selector.search import SearchResult

console = Console(width=120)


def _render(items: Sequence[Any]) -> str:
    with console.capture() as capture:
        for item in items:
            console.print(item)
            console.print()
    return capture.get()


def _sign_style(value: float) -> str:
    if value > 0:
        return "green"
    if value < 0:
        return "red"
    return "white"


def distribution_table(d: AugDistribution, title: str = "Augmentation Distribution") -> Table:
    table = Table(
        title=f"[bold magenta]{title}[/bold magenta]",
        box=box.ROUNDED,
        show_header=True,
        header_style="bold cyan"
    )
    table.add_column("Parameter", style="yellow", no_wrap=True)
    table.add_column("Value", style="green", justify="right")
    for name in PARAMETER_NAMES:
        table.add_row(name, f"{d.value(name):.4g}")
    return table


def format_search_summary_rich(result: SearchResult, top: int = 5,
                               run_config: Optional[Dict[str, Any]] = None) -> str:
    """Selected distribution, its score, and the top-ranked candidates."""
    output = []
    best = result.best()

    header = Panel(
        f"[bold white]Selected candidate {best.index}[/bold white]  "
        f"score [bold green]{best.score.value:.6g}[/bold green]  "
        f"({len(result)} candidates, result {result.identifier})",
        style="bold cyan",
        border_style="cyan"
    )
    output.append(header)
    output.append(distribution_table(best.distribution, "Selected Distribution"))

    ranking = Table(
        title="[bold blue]Lowest Dependence Scores[/bold blue]",
        box=box.ROUNDED,
        show_header=True,
        header_style="bold cyan"
    )
    ranking.add_column("Rank", style="yellow", justify="right")
    ranking.add_column("Index", style="white", justify="right")
    ranking.add_column("Score", style="green", justify="right")
    ranking.add_column("Seed", style="dim", justify="right")
    for rank, c in enumerate(result.candidates[:top], start=1):
        ranking.add_row(str(rank), str(c.index), f"{c.score.value:.6g}", str(c.seed))
    output.append(ranking)

    if run_config:
        output.append(format_run_config_table(run_config))
    return _render(output)


def format_score_rich(rows: List[Dict[str, Any]]) -> str:
    """One row per scored distribution file."""
    table = Table(
        title="[bold magenta]Conditional Dependence Scores[/bold magenta]",
        box=box.ROUNDED,
        show_header=True,
        header_style="bold cyan"
    )
    table.add_column("Distribution", style="yellow")
    table.add_column("Score", style="green", justify="right")
    table.add_column("Views", style="white", justify="right")
    table.add_column("Epsilon", style="dim", justify="right")
    for row in rows:
        table.add_row(str(row['name']), f"{row['score']:.6g}", str(row['n']), f"{row['epsilon']:g}")
    return _render([table])


def format_med_rich(report: MEDReport, task: Optional[str] = None) -> str:
    title = f"Mean Extremal Difference (k={report.k})"
    if task:
        title += f" - {task}"
    table = Table(
        title=f"[bold magenta]{title}[/bold magenta]",
        box=box.ROUNDED,
        show_header=True,
        header_style="bold cyan"
    )
    table.add_column("Parameter", style="yellow", no_wrap=True)
    table.add_column("MED", justify="right")
    for name, value, _ in report.series():
        style = _sign_style(value)
        table.add_row(name, f"[{style}]{value:+.6f}[/{style}]")
    return _render([table])


def format_med_comparison_rich(frame: pd.DataFrame) -> str:
    """Parameter x task MED table."""
    table = Table(
        title="[bold blue]MED Across Tasks[/bold blue]",
        box=box.ROUNDED,
        show_header=True,
        header_style="bold cyan"
    )
    table.add_column("Parameter", style="yellow", no_wrap=True)
    for task in frame.columns:
        table.add_column(str(task), justify="right")
    for name, row in frame.iterrows():
        cells = []
        for value in row:
            style = _sign_style(value)
            cells.append(f"[{style}]{value:+.4f}[/{style}]")
        table.add_row(str(name), *cells)
    return _render([table])


def format_chain_rich(chains: Sequence[AugChain], files: Sequence[str]) -> str:
    table = Table(
        title="[bold magenta]Augmentation Preview[/bold magenta]",
        box=box.ROUNDED,
        show_header=True,
        header_style="bold cyan"
    )
    table.add_column("File", style="yellow")
    table.add_column("Effects", style="green")
    for path, chain in zip(files, chains):
        table.add_row(str(path), ', '.join(chain.names) or '[dim]none[/dim]')
    return _render([table])


def format_training_rich(losses: Sequence[float], batch_size: int, checkpoint: str) -> str:
    """First/last loss against the chance level ln(B)."""
    chance = math.log(batch_size) if batch_size > 1 else 0.0
    table = Table(
        title="[bold magenta]Contrastive Training[/bold magenta]",
        box=box.ROUNDED,
        show_header=True,
        header_style="bold cyan"
    )
    table.add_column("Metric", style="yellow", no_wrap=True)
    table.add_column("Value", style="white", justify="right")
    table.add_row("Steps", str(len(losses)))
    table.add_row("Chance level ln(B)", f"{chance:.4f}")
    if losses:
        table.add_row("First loss", f"{losses[0]:.4f}")
        final_style = "green" if losses[-1] < chance else "red"
        table.add_row("Final loss", f"[{final_style}]{losses[-1]:.4f}[/{final_style}]")
    table.add_row("Checkpoint", checkpoint)
    return _render([table])


def format_run_config_table(run_config: Dict[str, Any]) -> Table:
    table = Table(
        title="[bold blue]Run Configuration[/bold blue]",
        box=box.SIMPLE,
        show_header=True,
        header_style="bold cyan"
    )
    table.add_column("Setting", style="yellow", no_wrap=True)
    table.add_column("Value", style="white")
    for key, value in run_config.items():
        if isinstance(value, dict):
            value = ', '.join(f"{k}={v}" for k, v in value.items())
        table.add_row(key, str(value))
    return table
