"""Rendering of diagnostics and provenance notes for generated loops."""

import logging

try:
    from colorama import Fore, Style
    COLORAMA_AVAILABLE = True
except ImportError:
    COLORAMA_AVAILABLE = False

from ..config import INTERNAL_PREFIXES
from ..models.Diagnostic import Diagnostic, Severity
from ..models.Stmt import Provenance

logger = logging.getLogger(__name__)

SEVERITY_COLORS = {
    Severity.ERROR: 'RED',
    Severity.WARNING: 'MAGENTA',
    Severity.NOTE: 'CYAN',
}


def provenance_notes(provenance: Provenance | None) -> list[Diagnostic]:
    """Notes pointing at each directive that generated a loop, innermost first."""
    if provenance is None:
        return []
    return [
        Diagnostic.note(f"generated by '{p.directive}' here", p.loc)
        for p in provenance.chain()
    ]


def is_internal_name(name: str) -> bool:
    return name.startswith(INTERNAL_PREFIXES)


def _severity_text(severity: Severity, color: bool) -> str:
    text = f"{severity.value}:"
    if color and COLORAMA_AVAILABLE:
        return f"{Style.BRIGHT}{getattr(Fore, SEVERITY_COLORS[severity])}{text}{Style.RESET_ALL}"
    return text


def render_diagnostic(diagnostic: Diagnostic, color: bool = False) -> str:
    """Format a diagnostic as ``file:line:col: severity: message`` plus its notes.

    Notes follow on their own lines, indented by two spaces.

    Args:
        diagnostic: Diagnostic to render
        color: Colour the severity with colorama when it is installed

    Returns:
        str: Rendered text, one line per diagnostic, ending with a newline
    """
    lines = [f"{diagnostic.loc}: {_severity_text(diagnostic.severity, color)} {diagnostic.message}"]
    for note in diagnostic.notes:
        lines.append(f"  {note.loc}: {_severity_text(note.severity, color)} {note.message}")
    return '\n'.join(lines) + '\n'


def render_diagnostics(diagnostics, color: bool = False) -> str:
    return ''.join(render_diagnostic(d, color) for d in diagnostics)
