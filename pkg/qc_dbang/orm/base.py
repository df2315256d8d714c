from abc import ABC, abstractmethod
from typing import Any, List, Optional

from ..core.report import CheckReport


class BaseReportAdapter(ABC):
    """检查结果存储适配器基类"""

    @abstractmethod
    async def save(self, report: CheckReport) -> Any:
        """保存一份报告, 返回记录"""
        pass

    @abstractmethod
    async def list(self, check: Optional[str] = None, limit: Optional[int] = None) -> List[Any]:
        """按保存顺序列出记录, 可按检查名过滤"""
        pass

    @abstractmethod
    async def get(self, id: int) -> Optional[Any]:
        """通过ID获取记录"""
        pass

    @abstractmethod
    async def delete(self, id: int) -> bool:
        """删除记录"""
        pass
