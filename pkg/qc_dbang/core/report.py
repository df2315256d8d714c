import logging
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional

logger = logging.getLogger(__name__)


class Verdict(Enum):
    """检查结论"""
    PASS = 'pass'
    FAIL = 'fail'
    INCONCLUSIVE = 'inconclusive'

    @property
    def exit_code(self) -> int:
        return {Verdict.PASS: 0, Verdict.FAIL: 1, Verdict.INCONCLUSIVE: 2}[self]


@dataclass
class CheckReport:
    """一次性质检查的结果; FAIL 时必须带可复现的反例"""
    check: str
    params: Dict[str, Any]
    verdict: Verdict
    counterexample: Optional[str] = None
    reason: Optional[str] = None
    counts: Dict[str, int] = field(default_factory=dict)
    details: Dict[str, Any] = field(default_factory=dict)
    wall_time: float = 0.0

    def __post_init__(self):
        if self.verdict is Verdict.FAIL and not self.counterexample:
            raise ValueError(f"failing report {self.check!r} needs a counterexample")

    @property
    def passed(self) -> bool:
        return self.verdict is Verdict.PASS

    def to_dict(self, with_timing: bool = False) -> Dict[str, Any]:
        """稳定的 JSON 结构 {check, params, verdict, details}"""
        details = dict(self.details)
        details['counts'] = dict(self.counts)
        if self.counterexample is not None:
            details['counterexample'] = self.counterexample
        if self.reason is not None:
            details['reason'] = self.reason
        data = {
            'check': self.check,
            'params': dict(self.params),
            'verdict': self.verdict.value,
            'details': details,
        }
        if with_timing:
            data['wall_time'] = round(self.wall_time, 6)
        return data


class ReportBuilder:
    """逐项累积 ok / fail / inconclusive, 最后生成 CheckReport"""

    def __init__(self, check: str, params: Dict[str, Any]):
        self.check = check
        self.params = params
        self.failures: List[str] = []
        self.reasons: List[str] = []
        self.counts: Dict[str, int] = {'checked': 0, 'passed': 0, 'failed': 0, 'inconclusive': 0}
        self.details: Dict[str, Any] = {}
        self._started = time.perf_counter()

    def ok(self) -> None:
        self.counts['checked'] += 1
        self.counts['passed'] += 1

    def fail(self, counterexample: str) -> None:
        self.counts['checked'] += 1
        self.counts['failed'] += 1
        self.failures.append(counterexample)

    def inconclusive(self, reason: str) -> None:
        self.counts['checked'] += 1
        self.counts['inconclusive'] += 1
        self.reasons.append(reason)

    def expect(self, condition: bool, counterexample: str) -> None:
        if condition:
            self.ok()
        else:
            self.fail(counterexample)

    def count(self, name: str, value: int) -> None:
        self.counts[name] = value

    def detail(self, name: str, value: Any) -> None:
        self.details[name] = value

    def build(self) -> CheckReport:
        if self.failures:
            verdict = Verdict.FAIL
        elif self.reasons:
            verdict = Verdict.INCONCLUSIVE
        else:
            verdict = Verdict.PASS
        report = CheckReport(
            check=self.check,
            params=dict(self.params),
            verdict=verdict,
            counterexample=self.failures[0] if self.failures else None,
            reason=self.reasons[0] if self.reasons and not self.failures else None,
            counts=dict(self.counts),
            details=dict(self.details),
            wall_time=time.perf_counter() - self._started,
        )
        if verdict is Verdict.FAIL:
            logger.warning("%s failed: %s", self.check, report.counterexample)
        else:
            logger.info("%s: %s %s", self.check, verdict.value, self.counts)
        return report


def merge_reports(check: str, params: Dict[str, Any], reports: Iterable[CheckReport]) -> CheckReport:
    """按提交顺序合并多份报告: 有 FAIL 取第一个 FAIL, 否则有 INCONCLUSIVE 取第一个"""
    reports = list(reports)
    counts = {'runs': len(reports), 'pass': 0, 'fail': 0, 'inconclusive': 0}
    first_fail: Optional[CheckReport] = None
    first_open: Optional[CheckReport] = None
    for report in reports:
        counts[report.verdict.value] += 1
        if report.verdict is Verdict.FAIL and first_fail is None:
            first_fail = report
        if report.verdict is Verdict.INCONCLUSIVE and first_open is None:
            first_open = report
    if first_fail is not None:
        verdict = Verdict.FAIL
    elif first_open is not None:
        verdict = Verdict.INCONCLUSIVE
    else:
        verdict = Verdict.PASS
    return CheckReport(
        check=check,
        params=dict(params),
        verdict=verdict,
        counterexample=_locate(first_fail, 'counterexample'),
        reason=_locate(first_open, 'reason') if first_fail is None else None,
        counts=counts,
        details={'runs': [r.to_dict() for r in reports]},
        wall_time=sum(r.wall_time for r in reports),
    )


def _locate(report: Optional[CheckReport], attr: str) -> Optional[str]:
    if report is None:
        return None
    value = getattr(report, attr)
    term = report.params.get('term')
    return f"{value} (term {term})" if term else value
