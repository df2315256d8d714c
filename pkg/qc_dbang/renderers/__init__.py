from .base import REPORT_COLUMNS, BaseRenderer, ReportColumn
from .markdown import MarkdownRenderer
from .table import TableRenderer
from .text import JsonRenderer, TextRenderer

RENDERERS = {
    'text': TextRenderer,
    'json': JsonRenderer,
    'markdown': MarkdownRenderer,
    'table': TableRenderer,
}

__all__ = [
    'BaseRenderer',
    'ReportColumn',
    'REPORT_COLUMNS',
    'TextRenderer',
    'JsonRenderer',
    'MarkdownRenderer',
    'TableRenderer',
    'RENDERERS',
]
