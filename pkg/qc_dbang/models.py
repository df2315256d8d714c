from tortoise import fields, models

from .core.report import CheckReport, Verdict


class CheckRun(models.Model):
    """一次保存下来的检查结果"""
    id = fields.IntField(pk=True)
    check_name = fields.CharField(max_length=64, index=True)
    params = fields.JSONField(default=dict)
    verdict = fields.CharField(max_length=16)
    counts = fields.JSONField(default=dict)
    details = fields.JSONField(default=dict)
    wall_time = fields.FloatField(default=0.0)
    created_at = fields.DatetimeField(auto_now_add=True)

    class Meta:
        table = "qc_dbang_check_runs"
        ordering = ["id"]

    @classmethod
    def fields_from_report(cls, report: CheckReport) -> dict:
        data = report.to_dict()
        return {
            'check_name': report.check,
            'params': data['params'],
            'verdict': report.verdict.value,
            'counts': dict(report.counts),
            'details': data['details'],
            'wall_time': report.wall_time,
        }

    def to_report(self) -> CheckReport:
        details = dict(self.details or {})
        details.pop('counts', None)
        counterexample = details.pop('counterexample', None)
        reason = details.pop('reason', None)
        return CheckReport(
            check=self.check_name,
            params=dict(self.params or {}),
            verdict=Verdict(self.verdict),
            counterexample=counterexample,
            reason=reason,
            counts=dict(self.counts or {}),
            details=details,
            wall_time=self.wall_time,
        )

    def __str__(self):
        return f"{self.check_name} #{self.id}: {self.verdict}"
