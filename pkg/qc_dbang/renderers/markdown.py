from pathlib import Path
from typing import Any, Dict, List, Optional

from jinja2 import Environment, FileSystemLoader

from ..i18n.translations import get_text
from .base import REPORT_COLUMNS, BaseRenderer, ReportColumn
from .text import Reports, _as_list

TEMPLATE_DIR = Path(__file__).parent.parent / 'templates'


def _cell(value: Any) -> str:
    """表格单元: 转义竖线, 去掉换行"""
    return str(value).replace('|', '\\|').replace('\n', ' ')


class MarkdownRenderer(BaseRenderer):
    """用 report.md.j2 渲染 markdown 报告"""

    def __init__(self, template: str = 'report.md.j2', columns: Optional[List[ReportColumn]] = None):
        self.env = Environment(
            loader=FileSystemLoader(str(TEMPLATE_DIR)),
            keep_trailing_newline=True,
            autoescape=False,
        )
        self.env.globals.update({'get_text': get_text})
        self.env.filters['cell'] = _cell
        self.template = self.env.get_template(template)
        self.columns = columns or REPORT_COLUMNS

    def render(self, value: Reports, context: Dict[str, Any] = None) -> str:
        context = context or {}
        return self.template.render(
            reports=_as_list(value),
            columns=self.columns,
            lang=context.get('lang'),
        )
