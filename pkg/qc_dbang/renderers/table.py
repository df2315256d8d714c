import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import pandas as pd

from .base import REPORT_COLUMNS, BaseRenderer, ReportColumn
from .text import Reports, _as_list

logger = logging.getLogger(__name__)

EXPORT_SUFFIXES = ('.xlsx', '.csv')


class TableRenderer(BaseRenderer):
    """报告表格: 终端显示或导出为 Excel / CSV"""

    def __init__(self, columns: Optional[List[ReportColumn]] = None):
        self.columns = columns or REPORT_COLUMNS

    def to_frame(self, value: Reports, lang: str = None) -> pd.DataFrame:
        rows = [
            {column.header(lang): column.value(report, lang) for column in self.columns}
            for report in _as_list(value)
        ]
        return pd.DataFrame(rows, columns=[column.header(lang) for column in self.columns])

    def render(self, value: Reports, context: Dict[str, Any] = None) -> str:
        context = context or {}
        frame = self.to_frame(value, context.get('lang'))
        return frame.to_string(index=False)

    def export(self, value: Reports, path: Union[str, Path], lang: str = None) -> Path:
        path = Path(path)
        if path.suffix not in EXPORT_SUFFIXES:
            raise ValueError(f"unsupported export format {path.suffix!r}, expected one of {EXPORT_SUFFIXES}")
        frame = self.to_frame(value, lang)
        if path.suffix == '.csv':
            frame.to_csv(path, index=False)
        else:
            frame.to_excel(path, index=False, engine='openpyxl')
        logger.info("exported %d reports to %s", len(frame), path)
        return path
