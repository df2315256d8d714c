from .base import BaseReportAdapter
from .tortoise import ReportStore, TortoiseReportAdapter

__all__ = ['BaseReportAdapter', 'TortoiseReportAdapter', 'ReportStore']
