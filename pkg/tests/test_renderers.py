from pathlib import Path

import orjson
import pandas as pd
import pytest

import qc_dbang
from qc_dbang.core.report import CheckReport, ReportBuilder, Verdict, merge_reports
from qc_dbang.i18n import TRANSLATIONS, get_text
from qc_dbang.renderers import (
    RENDERERS, REPORT_COLUMNS, JsonRenderer, MarkdownRenderer, TableRenderer, TextRenderer,
)


@pytest.fixture
def reports():
    passing = ReportBuilder('sn', {'term': 'x [y]'})
    passing.ok()
    failing = ReportBuilder('diamond', {'term': 'der [x | y]'})
    failing.fail('[x] and [] have no common parallel reduct')
    open_ = ReportBuilder('meaningful', {'term': 'Omega'})
    open_.inconclusive('budget exhausted')
    return [passing.build(), failing.build(), open_.build()]


def test_builder_verdicts(reports):
    assert [r.verdict for r in reports] == [Verdict.PASS, Verdict.FAIL, Verdict.INCONCLUSIVE]
    assert [r.verdict.exit_code for r in reports] == [0, 1, 2]
    assert reports[1].counterexample.startswith('[x]')
    assert reports[2].reason == 'budget exhausted'


def test_failing_report_needs_a_counterexample():
    with pytest.raises(ValueError):
        CheckReport('sn', {}, Verdict.FAIL)


def test_merge_takes_the_first_failure(reports):
    merged = merge_reports('all', {}, reports)
    assert merged.verdict is Verdict.FAIL
    assert merged.counterexample.endswith('(term der [x | y])')
    assert merged.reason is None
    assert merged.counts == {'runs': 3, 'pass': 1, 'fail': 1, 'inconclusive': 1}


def test_json_is_stable_and_sorted(reports):
    first = JsonRenderer().render(reports)
    second = JsonRenderer().render(reports)
    assert first == second
    data = orjson.loads(first)
    assert [item['verdict'] for item in data] == ['pass', 'fail', 'inconclusive']
    assert list(data[0]) == sorted(data[0])
    assert 'wall_time' not in data[0]
    assert 'wall_time' in orjson.loads(JsonRenderer().render(reports[0], {'with_timing': True}))


def test_text_renderer_localizes_verdicts(reports):
    text = TextRenderer().render(reports)
    assert 'sn: PASS  (term=x [y])' in text
    assert 'Counterexample: [x] and [] have no common parallel reduct' in text
    chinese = TextRenderer().render(reports, {'lang': 'zh_CN'})
    assert 'sn: 通过' in chinese
    assert get_text('reason', 'zh_CN') in chinese


def test_markdown_escapes_cells(reports):
    markdown = MarkdownRenderer().render(reports)
    assert markdown.startswith('# dBang property check report')
    assert 'der [x \\| y]' in markdown
    assert '## diamond: FAIL' in markdown
    assert '## sn' not in markdown


def test_markdown_without_reports():
    assert 'No data' in MarkdownRenderer().render([])


def test_table_frame_uses_localized_headers(reports):
    frame = TableRenderer().to_frame(reports, 'en_US')
    assert list(frame.columns) == [column.header('en_US') for column in REPORT_COLUMNS]
    assert list(frame['Verdict']) == ['pass', 'fail', 'inconclusive']


def test_table_export_csv(tmp_path, reports):
    path = TableRenderer().export(reports, tmp_path / 'runs.csv')
    frame = pd.read_csv(path)
    assert list(frame['Check']) == ['sn', 'diamond', 'meaningful']


def test_table_export_xlsx(tmp_path, reports):
    path = TableRenderer().export(reports, tmp_path / 'runs.xlsx', 'zh_CN')
    frame = pd.read_excel(path, engine='openpyxl')
    assert list(frame['检查']) == ['sn', 'diamond', 'meaningful']


def test_table_export_rejects_other_formats(tmp_path, reports):
    with pytest.raises(ValueError):
        TableRenderer().export(reports, tmp_path / 'runs.txt')


def test_renderer_registry():
    assert set(RENDERERS) == {'text', 'json', 'markdown', 'table'}


def test_every_translation_key_is_rendered_somewhere():
    package = Path(qc_dbang.__file__).parent
    sources = ''.join(
        path.read_text(encoding='utf-8')
        for path in [*package.rglob('*.py'), *package.rglob('*.j2')]
        if path.name != 'translations.py'
    )
    assert set(TRANSLATIONS['zh_CN']) == set(TRANSLATIONS['en_US'])
    for key in TRANSLATIONS['en_US']:
        if key in {v.value for v in Verdict}:
            continue
        assert f"'{key}'" in sources, key
