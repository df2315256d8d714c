from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional

from ..core.report import CheckReport
from ..i18n.translations import get_text


class BaseRenderer(ABC):
    """渲染器基类"""

    @abstractmethod
    def render(self, value: Any, context: Dict[str, Any] = None) -> str:
        """渲染值"""
        pass


@dataclass
class ReportColumn:
    """报告表格的列配置"""
    name: str
    label: Optional[str] = None      # i18n key, 默认与 name 相同
    formatter: Optional[Callable[[CheckReport], Any]] = None

    def __post_init__(self):
        if self.label is None:
            self.label = self.name

    def header(self, lang: str = None) -> str:
        return get_text(self.label, lang)

    def value(self, report: CheckReport, lang: str = None) -> Any:
        if self.formatter:
            return self.formatter(report)
        return getattr(report, self.name)


def _verdict(report: CheckReport) -> str:
    return report.verdict.value


def _params(report: CheckReport) -> str:
    return ', '.join(f"{k}={v}" for k, v in report.params.items())


def _counts(report: CheckReport) -> str:
    return ', '.join(f"{k}={v}" for k, v in report.counts.items())


def _outcome(report: CheckReport) -> str:
    return report.counterexample or report.reason or ''


REPORT_COLUMNS: List[ReportColumn] = [
    ReportColumn('check'),
    ReportColumn('params', formatter=_params),
    ReportColumn('verdict', formatter=_verdict),
    ReportColumn('counts', formatter=_counts),
    ReportColumn('counterexample', label='details', formatter=_outcome),
    ReportColumn('wall_time', formatter=lambda r: round(r.wall_time, 4)),
]


def verdict_label(report: CheckReport, lang: str = None) -> str:
    return get_text(report.verdict.value, lang)
