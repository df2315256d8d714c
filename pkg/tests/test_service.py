import orjson
import pytest

from qc_dbang.config import Settings
from qc_dbang.core.errors import CorpusError
from qc_dbang.core.syntax import Language, print_term
from qc_dbang.service import (
    OPERATIONS, ROUTES, handle_check, handle_corpus, handle_fragment, handle_meaningful,
    handle_parse, handle_reduce, handle_res_nf, handle_taylor, handle_translate, json_response,
    resolve_term,
)


@pytest.fixture
def base():
    return Settings()


def test_parse_returns_canonical_text_and_json(base):
    result = handle_parse({'term': 'λx. x'}, base)
    assert result['success'] is True
    assert result['term'] == r'\x. x'
    assert result['json']['kind'] == 'lam'


def test_terms_resolve_by_corpus_name(base):
    assert print_term(resolve_term('I', Language.DBANG, base)) == r'\x. x'
    assert print_term(resolve_term('I', Language.RESOURCE, base)) == 'I'
    assert print_term(resolve_term('omega', Language.LAMBDA, base)) == r'(\x. x x) (\x. x x)'
    with pytest.raises(ValueError):
        resolve_term(3, Language.DBANG, base)


def test_reduce_the_running_example(base):
    result = handle_reduce({'term': 'running', 'trace': True}, base)
    assert result['success'] is True
    assert result['result'] == '!N z'
    assert result['status'] == 'NormalForm'
    assert result['steps'] == 5
    assert len(result['trace']) == 5


def test_reduce_in_a_lambda_mode(base):
    result = handle_reduce({'term': 'id_app', 'language': 'lambda', 'mode': 'v'}, base)
    assert result['result'] == 'y'


def test_resource_normal_forms(base):
    assert handle_res_nf({'term': r'(\x. x) [y]'}, base)['normal_forms'] == ['y']
    assert handle_res_nf({'term': r'(\x. x x) [y]'}, base)['normal_forms'] == []


def test_taylor(base):
    result = handle_taylor({'term': '!x', 'cap': 3}, base)
    assert result['terms'] == ['[]', '[x]', '[x, x]']
    assert result['complete'] is True
    normal = handle_taylor({'term': 'x !y', 'cap': 4, 'nf': True}, base)
    assert normal['complete'] is True


def test_translate_and_fragment(base):
    assert handle_translate({'term': 'x y z', 'mode': 'cbv'}, base)['term'] == 'der (x !y) !z'
    assert handle_fragment({'term': '!x', 'mode': 'n'}, base)['member'] is False
    assert handle_fragment({'term': '!x', 'mode': 'v'}, base)['member'] is True


def test_meaningful(base):
    delta = handle_meaningful({'term': 'Delta'}, base)
    assert delta['witness'] is True
    assert delta['strategy'] == 'cbn'
    omega = handle_meaningful({'term': 'Omega', 'fuel': 20, 'budget': 50}, base)
    assert omega['witness'] is False
    assert 'budget 50' in omega['reason']


def test_check_a_suite_on_one_term(base):
    result = handle_check({'suite': 'commutation', 'term': 'Omega', 'fuel': 10, 'cap': 6}, base)
    assert result['success'] is True
    assert result['report']['verdict'] == 'pass'
    assert result['report']['check'] == 'commutation'


def test_check_on_corpus_names(base):
    result = handle_check({'suite': 'factorization', 'names': ['I', 'running']}, base)
    assert result['report']['details']['counts']['runs'] == 2


@pytest.mark.parametrize('handler, body, message', [
    (handle_parse, {}, "missing field 'term'"),
    (handle_check, {'term': 'I'}, "missing field 'suite'"),
    (handle_parse, {'term': r'\x x'}, 'expected'),
    (handle_check, {'suite': 'termination'}, 'unknown suite'),
    (handle_reduce, {'term': 'I', 'class': 'deep'}, 'deep'),
])
def test_failures_become_messages(base, handler, body, message):
    result = handler(body, base)
    assert result['success'] is False
    assert message in result['message']


def test_unwrapped_operations_raise(base):
    with pytest.raises(CorpusError):
        OPERATIONS['check']({'suite': 'factorization', 'names': ['Theta']}, base)
    assert set(OPERATIONS) == set(ROUTES) | {'corpus'}


def test_corpus_listing(base):
    result = handle_corpus({}, base)
    assert result['terms']['bang_var'] == '!y'
    assert result['lambda_terms']['esub'] == 'x[y/x]'


def test_json_response():
    response = json_response({'success': False, 'message': '语法错误'}, 400)
    assert response.status_code == 400
    description = response.description
    if isinstance(description, bytes):
        description = description.decode('utf-8')
    assert orjson.loads(description) == {'message': '语法错误', 'success': False}
