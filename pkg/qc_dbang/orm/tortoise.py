import logging
import os
from typing import Iterable, List, Optional

from tortoise import Tortoise

from ..core.report import CheckReport
from ..models import CheckRun
from .base import BaseReportAdapter

logger = logging.getLogger(__name__)

MODELS_MODULE = 'qc_dbang.models'


class TortoiseReportAdapter(BaseReportAdapter):
    """Tortoise-ORM适配器"""

    async def save(self, report: CheckReport) -> CheckRun:
        return await CheckRun.create(**CheckRun.fields_from_report(report))

    async def list(self, check: Optional[str] = None, limit: Optional[int] = None) -> List[CheckRun]:
        queryset = CheckRun.all() if check is None else CheckRun.filter(check_name=check)
        queryset = queryset.order_by('id')
        if limit is not None:
            queryset = queryset.limit(limit)
        return await queryset

    async def get(self, id: int) -> Optional[CheckRun]:
        return await CheckRun.get_or_none(id=id)

    async def delete(self, id: int) -> bool:
        deleted = await CheckRun.filter(id=id).delete()
        return deleted > 0


class ReportStore:
    """
    打开 Tortoise 连接并生成表结构; 用作异步上下文管理器:

        async with ReportStore('sqlite://runs.sqlite3') as store:
            await store.save_all(reports)
    """

    def __init__(self, db_url: str, generate_schemas: bool = True,
                 adapter: Optional[BaseReportAdapter] = None):
        self.db_url = db_url
        self.generate_schemas = generate_schemas
        self.adapter = adapter or TortoiseReportAdapter()
        # 确保数据库文件路径存在
        if db_url.startswith('sqlite'):
            db_path = db_url.replace('sqlite://', '')
            if db_path != ':memory:':
                os.makedirs(os.path.dirname(os.path.abspath(db_path)), exist_ok=True)

    async def open(self) -> 'ReportStore':
        await Tortoise.init(db_url=self.db_url, modules={'models': [MODELS_MODULE]})
        if self.generate_schemas:
            await Tortoise.generate_schemas(safe=True)
        logger.info("report store opened at %s", self.db_url)
        return self

    async def close(self) -> None:
        await Tortoise.close_connections()

    async def __aenter__(self) -> 'ReportStore':
        return await self.open()

    async def __aexit__(self, *exc) -> None:
        await self.close()

    async def save(self, report: CheckReport) -> CheckRun:
        run = await self.adapter.save(report)
        logger.debug("stored %s", run)
        return run

    async def save_all(self, reports: Iterable[CheckReport]) -> List[CheckRun]:
        return [await self.save(report) for report in reports]

    async def list(self, check: Optional[str] = None, limit: Optional[int] = None) -> List[CheckRun]:
        return await self.adapter.list(check, limit)

    async def reports(self, check: Optional[str] = None, limit: Optional[int] = None) -> List[CheckReport]:
        return [run.to_report() for run in await self.list(check, limit)]

    async def get(self, id: int) -> Optional[CheckRun]:
        return await self.adapter.get(id)

    async def delete(self, id: int) -> bool:
        return await self.adapter.delete(id)
