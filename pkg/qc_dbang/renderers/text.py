from typing import Any, Dict, Iterable, Union

import orjson

from ..core.report import CheckReport
from ..i18n.translations import get_text
from .base import BaseRenderer, verdict_label

Reports = Union[CheckReport, Iterable[CheckReport]]


def _as_list(value: Reports):
    return [value] if isinstance(value, CheckReport) else list(value)


class TextRenderer(BaseRenderer):
    """终端输出: 每份报告一段"""

    def render(self, value: Reports, context: Dict[str, Any] = None) -> str:
        context = context or {}
        lang = context.get('lang')
        blocks = []
        for report in _as_list(value):
            params = ' '.join(f"{k}={v}" for k, v in report.params.items())
            lines = [f"{report.check}: {verdict_label(report, lang)}  ({params})"]
            if report.counterexample:
                lines.append(f"  {get_text('counterexample', lang)}: {report.counterexample}")
            if report.reason:
                lines.append(f"  {get_text('reason', lang)}: {report.reason}")
            counts = ' '.join(f"{k}={v}" for k, v in report.counts.items())
            lines.append(f"  {get_text('counts', lang)}: {counts}")
            if context.get('details'):
                for key, detail in report.details.items():
                    lines.append(f"  {key}: {detail}")
            blocks.append('\n'.join(lines))
        return '\n'.join(blocks)


class JsonRenderer(BaseRenderer):
    """稳定的 JSON: 键排序, 同样的输入得到同样的字节"""

    def render(self, value: Any, context: Dict[str, Any] = None) -> str:
        context = context or {}
        with_timing = context.get('with_timing', False)
        if isinstance(value, CheckReport):
            payload = value.to_dict(with_timing)
        elif isinstance(value, (list, tuple)) and value and all(isinstance(v, CheckReport) for v in value):
            payload = [r.to_dict(with_timing) for r in value]
        else:
            payload = value
        option = orjson.OPT_SORT_KEYS | orjson.OPT_NON_STR_KEYS
        if context.get('indent'):
            option |= orjson.OPT_INDENT_2
        return orjson.dumps(payload, option=option, default=str).decode('utf-8')
