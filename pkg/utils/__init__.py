"""
Utils - Report formatting helpers
"""

from .formatters import format_percent, format_table

__all__ = ['format_percent', 'format_table']
