"""
Verbose console output for tfpdiff runs using rich.

Everything goes to stderr so stdout stays clean for data. Uses the same
"Tokyo Night" inspired palette throughout.
"""

from collections.abc import Sequence
from typing import Any

from rich.console import Console
from rich.panel import Panel
from rich.rule import Rule
from rich.style import Style
from rich.table import Table
from rich.text import Text

from tfpdiff.core.types import FitResult, JumpPath, ProjectionTable, RunMetadata

# ============================================================================
# Tokyo Night Color Theme
# ============================================================================
COLORS = {
    "primary": "#7AA2F7",  # Soft blue - headers, titles
    "secondary": "#BB9AF7",  # Soft purple - emphasis
    "success": "#9ECE6A",  # Soft green - converged fits
    "warning": "#E0AF68",  # Soft amber - flags
    "error": "#F7768E",  # Soft red/pink - failures
    "text": "#A9B1D6",  # Soft gray-blue - regular text
    "muted": "#565F89",  # Muted gray - less important
    "accent": "#7DCFFF",  # Bright cyan - accents
    "border": "#3B4261",  # Border color
}

STYLE_PRIMARY = Style(color=COLORS["primary"], bold=True)
STYLE_SECONDARY = Style(color=COLORS["secondary"])
STYLE_SUCCESS = Style(color=COLORS["success"])
STYLE_WARNING = Style(color=COLORS["warning"])
STYLE_ERROR = Style(color=COLORS["error"])
STYLE_TEXT = Style(color=COLORS["text"])
STYLE_MUTED = Style(color=COLORS["muted"])
STYLE_ACCENT = Style(color=COLORS["accent"], bold=True)


def _fmt(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


class VerbosePrinter:
    """
    Rich console printer for calibration and simulation runs.

    Args:
        enabled: Whether verbose printing is enabled. If False, all methods are no-ops.
        console: Console to print to; defaults to one writing to stderr.
    """

    def __init__(self, enabled: bool = True, console: Console | None = None):
        self.enabled = enabled
        self.console = (console or Console(stderr=True)) if enabled else None

    def print_header(self, metadata: RunMetadata) -> None:
        if not self.enabled:
            return

        title = Text()
        title.append("◆ ", style=STYLE_ACCENT)
        title.append("tfpdiff", style=STYLE_PRIMARY)
        title.append(f" ━ {metadata.command}", style=STYLE_MUTED)

        config_table = Table(show_header=False, show_edge=False, box=None, padding=(0, 2), expand=True)
        config_table.add_column("key", style=STYLE_MUTED, width=16)
        config_table.add_column("value", style=STYLE_TEXT)
        config_table.add_column("key2", style=STYLE_MUTED, width=16)
        config_table.add_column("value2", style=STYLE_TEXT)
        config_table.add_row(
            "Reference",
            Text(metadata.reference or "-", style=STYLE_SECONDARY),
            "t0 year",
            Text(_fmt(metadata.t0_year), style=STYLE_WARNING),
        )
        config_table.add_row(
            "Max Iterations",
            Text(str(metadata.options.max_iterations), style=STYLE_WARNING),
            "Damping",
            Text(_fmt(metadata.options.initial_damping), style=STYLE_WARNING),
        )
        if metadata.countries:
            config_table.add_row(
                "Countries", Text(", ".join(metadata.countries), style=STYLE_SECONDARY), "", ""
            )

        panel = Panel(
            config_table,
            title=title,
            title_align="left",
            border_style=COLORS["border"],
            padding=(1, 2),
        )
        self.console.print()
        self.console.print(panel)
        self.console.print()

    def print_fit(self, fit: FitResult) -> None:
        """One panel per fit: parameters with standard errors, SSR and status."""
        if not self.enabled:
            return

        status_style = STYLE_SUCCESS if fit.converged and not fit.flags else STYLE_WARNING
        header = Text()
        header.append("▸ ", style=status_style)
        header.append(fit.country or "fit", style=STYLE_PRIMARY)
        header.append(f"  ({fit.model}, {fit.iterations} iterations)", style=STYLE_MUTED)

        table = Table(show_header=True, show_edge=False, box=None, padding=(0, 2))
        table.add_column("param", style=STYLE_MUTED)
        table.add_column("value", style=STYLE_ACCENT, justify="right")
        table.add_column("stderr", style=STYLE_TEXT, justify="right")
        for name, value in fit.params.items():
            table.add_row(name, _fmt(value), _fmt(fit.stderr[name]))
        table.add_row("ssr", _fmt(fit.ssr), "")
        if not fit.converged:
            table.add_row(Text("status", style=STYLE_ERROR), Text("not converged", style=STYLE_ERROR), "")
        if fit.flags:
            table.add_row(Text("flags", style=STYLE_WARNING), Text(", ".join(fit.flags), style=STYLE_WARNING), "")

        self.console.print(
            Panel(table, title=header, title_align="left", border_style=COLORS["muted"], padding=(0, 1))
        )

    def print_table(self, table: ProjectionTable) -> None:
        if not self.enabled:
            return

        out = Table(title=Text("Projected TFP", style=STYLE_PRIMARY), border_style=COLORS["border"])
        for column in table.columns:
            out.add_column(column, style=STYLE_TEXT, justify="left" if column == "country" else "right")
        for row in table.rows:
            out.add_row(*(_fmt(v) for v in row.to_dict().values()))
        self.console.print(out)

    def print_simulation_summary(self, paths: Sequence[JumpPath], seed: int) -> None:
        if not self.enabled:
            return

        summary_table = Table(show_header=False, show_edge=False, box=None, padding=(0, 2))
        summary_table.add_column("metric", style=STYLE_MUTED)
        summary_table.add_column("value", style=STYLE_ACCENT)
        summary_table.add_row("Runs", str(len(paths)))
        summary_table.add_row("Seed", str(seed))
        summary_table.add_row("Events", f"{sum(p.event_count for p in paths):,}")
        if paths:
            final = [int(p.states[-1]) for p in paths]
            summary_table.add_row("Final adopters", f"{min(final)}..{max(final)} of {paths[0].n}")

        self.console.print()
        self.console.print(Rule(style=COLORS["border"], characters="═"))
        self.console.print(summary_table, justify="center")
        self.console.print(Rule(style=COLORS["border"], characters="═"))
        self.console.print()
