"""
Formatters - Utility functions for formatting report values
"""

from typing import List, Optional, Sequence


def format_percent(rate: Optional[float], digits: int = 1) -> str:
    """
    Format a rate in [0, 1] as a percentage

    Args:
        rate: Fraction, or None when nothing was attempted

    Returns:
        Percentage string (e.g., "98.0%"), "n/a" for None
    """
    if rate is None:
        return "n/a"
    return f"{100.0 * rate:.{digits}f}%"


def format_table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    """
    Align columns of strings into a plain-text table

    The first column is left-aligned, the rest right-aligned.
    """
    widths = [len(h) for h in header]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))

    def line(cells: Sequence[str]) -> str:
        parts: List[str] = []
        for i, cell in enumerate(cells):
            parts.append(cell.ljust(widths[i]) if i == 0 else cell.rjust(widths[i]))
        return '  '.join(parts).rstrip()

    separator = '  '.join('-' * w for w in widths)
    return '\n'.join([line(header), separator] + [line(row) for row in rows])
