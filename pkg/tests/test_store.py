import asyncio

from qc_dbang.core.report import ReportBuilder, Verdict
from qc_dbang.orm import ReportStore


def _reports():
    sn = ReportBuilder('sn', {'term': 'x [y]'})
    sn.ok()
    sn.detail('normal_forms', ['x [y]'])
    diamond = ReportBuilder('diamond', {'term': 'der [x, y]'})
    diamond.fail('no common reduct')
    sn_again = ReportBuilder('sn', {'term': 'der [x]'})
    sn_again.inconclusive('fuel exhausted')
    return [sn.build(), diamond.build(), sn_again.build()]


def test_reports_round_trip(tmp_path):
    url = f"sqlite://{tmp_path / 'runs.sqlite3'}"

    async def scenario():
        async with ReportStore(url) as store:
            runs = await store.save_all(_reports())
            assert [run.check_name for run in runs] == ['sn', 'diamond', 'sn']
            return await store.reports()

    loaded = asyncio.run(scenario())
    assert [r.verdict for r in loaded] == [Verdict.PASS, Verdict.FAIL, Verdict.INCONCLUSIVE]
    assert loaded[0].details == {'normal_forms': ['x [y]']}
    assert loaded[0].counts['passed'] == 1
    assert loaded[1].counterexample == 'no common reduct'
    assert loaded[2].reason == 'fuel exhausted'
    assert loaded[2].params == {'term': 'der [x]'}


def test_list_filters_and_deletes(tmp_path):
    url = f"sqlite://{tmp_path / 'nested' / 'runs.sqlite3'}"

    async def scenario():
        async with ReportStore(url) as store:
            await store.save_all(_reports())
            only_sn = await store.list('sn')
            first = await store.list(limit=1)
            target = only_sn[0].id
            fetched = await store.get(target)
            removed = await store.delete(target)
            removed_twice = await store.delete(target)
            remaining = await store.list('sn')
            return only_sn, first, fetched, removed, removed_twice, remaining

    only_sn, first, fetched, removed, removed_twice, remaining = asyncio.run(scenario())
    assert len(only_sn) == 2
    assert [run.check_name for run in first] == ['sn']
    assert str(fetched) == f"sn #{fetched.id}: pass"
    assert removed is True
    assert removed_twice is False
    assert len(remaining) == 1
    assert (tmp_path / 'nested' / 'runs.sqlite3').exists()
