import io

import orjson
import pytest

from qc_dbang.cli import EXIT_USAGE, dispatch
from qc_dbang.config import Settings


def run(*argv, settings=None):
    out, err = io.StringIO(), io.StringIO()
    code = dispatch(list(argv), out=out, err=err, settings=settings or Settings())
    return code, out.getvalue(), err.getvalue()


def test_parse():
    code, out, _ = run('parse', r'\x. x')
    assert code == 0
    assert out.strip() == r'\x. x'


def test_parse_json():
    code, out, _ = run('parse', 'x !y', '--json')
    assert code == 0
    assert orjson.loads(out)['kind'] == 'app'


def test_reduce_running_example():
    code, out, _ = run('reduce', 'running', '--trace')
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[-1] == '!N z'
    assert lines[0].startswith('step 1: DistantBeta')


def test_reduce_out_of_fuel():
    code, out, err = run('reduce', 'Omega', '--fuel', '3')
    assert code == 2
    assert 'fuel 3 exhausted' in err


def test_nf_and_res_nf():
    assert run('nf', r'(\x. x) !y')[0] == 0
    code, out, _ = run('res-nf', r'(\x. x) [y]')
    assert code == 0
    assert out.strip() == 'y'


def test_taylor_and_translate():
    code, out, _ = run('taylor', '!x', '--cap', '3')
    assert code == 0
    assert out.split('\n')[:3] == ['[]', '[x]', '[x, x]']
    code, out, _ = run('translate', 'x y z', '--mode', 'v')
    assert code == 0
    assert out.strip() == 'der (x !y) !z'


def test_taylor_normal_form_of_omega_is_incomplete():
    assert run('taylor', 'Omega', '--nf', '--cap', '4', '--fuel', '4')[0] == 2


def test_fragment_exit_codes():
    assert run('fragment', '!x', '--mode', 'n')[:2] == (1, 'no\n')
    assert run('fragment', '!x', '--mode', 'v')[:2] == (0, 'yes\n')


def test_meaningful():
    code, out, _ = run('meaningful', 'Delta')
    assert code == 0
    assert out.startswith('Witness:')
    code, out, _ = run('meaningful', 'Omega', '--fuel', '20', '--budget', '50')
    assert code == 2
    assert out.startswith('Unknown:')


def test_check_json():
    code, out, _ = run('check', 'commutation', '--term', 'Omega', '--fuel', '10', '--cap', '6', '--json')
    assert code == 0
    report = orjson.loads(out)
    assert report['check'] == 'commutation'
    assert report['verdict'] == 'pass'


def test_check_markdown_in_chinese():
    code, out, _ = run('check', 'factorization', '--term', 'I', '--format', 'markdown',
                       '--locale', 'zh_CN')
    assert code == 0
    assert out.startswith('# dBang 性质检查报告')


def test_check_exports_a_table(tmp_path):
    target = tmp_path / 'runs.csv'
    code, _, _ = run('check', 'factorization', '--term', 'I', '--export', str(target))
    assert code == 0
    assert target.exists()


def test_fuzz_is_reproducible():
    argv = ('fuzz', '--suite', 'sn', '--seed', '3', '--count', '5', '--size', '4', '--json')
    first = run(*argv)
    second = run(*argv)
    assert first[0] == 0
    assert first[1] == second[1]


def test_listings():
    code, out, _ = run('suites')
    assert code == 0
    assert any(line.startswith('commutation') and '[dbang]' in line for line in out.splitlines())
    code, out, _ = run('corpus')
    assert code == 0
    assert 'running = ' in out


@pytest.mark.parametrize('argv', [
    (),
    ('frobnicate',),
    ('parse', r'\x x'),
    ('check', 'termination'),
    ('reports',),
])
def test_usage_errors(argv):
    assert run(*argv)[0] == EXIT_USAGE


def test_parse_error_shows_a_pointer():
    _, _, err = run('parse', r'\x x')
    assert err.splitlines()[-1].endswith('^')


def test_store_and_list_reports(tmp_path):
    store = f"sqlite://{tmp_path / 'runs.sqlite3'}"
    assert run('check', 'factorization', '--term', 'I', '--store', store)[0] == 0
    code, out, _ = run('reports', '--store', store, '--json')
    assert code == 0
    stored = orjson.loads(out)
    assert [item['check'] for item in stored] == ['factorization']
    assert 'wall_time' in stored[0]
