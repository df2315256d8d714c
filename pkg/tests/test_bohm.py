import pytest
from hypothesis import given, settings, strategies as st

from qc_dbang.core.bohm import (
    approximant_set, bot_leq, bot_truncations, bt_truncate, check_bohm_properties,
    check_commutation, direct_approximant, is_approximant, join, taylor_of_bt,
)
from qc_dbang.core.parser import parse
from qc_dbang.core.report import Verdict
from qc_dbang.core.syntax import BOT, Language, enumerate_terms, print_term

SMALL_TERMS = list(enumerate_terms(5, Language.DBANG, ('x',)))

OMEGA = r'(\x. x !x) !(\x. x !x)'
YN = r'(\y. x !(y !y)) !(\y. x !(y !y))'
RUNNING = r'(\x. x y)[!z/y] !!((\w. w) !N)'


def approx(text):
    return parse(text, Language.DBANG_BOT)


@pytest.mark.parametrize('text, expected', [
    ('bot', True),
    ('x !bot', True),
    (r'\x. x !(x bot)', True),
    ('der x', True),
    ('x[y/z]', True),
    (r'(\x. x) y', False),
    ('der !x', False),
    ('x[!y/z]', False),
    ('bot y', False),
])
def test_approximant_grammar(text, expected):
    assert is_approximant(approx(text)) is expected


@pytest.mark.parametrize('text, expected', [
    ('x', 'x'),
    (r'x !((\y. y) z)', 'x !bot'),
    ('der !x', 'bot'),
    (r'(\x. x)[y/z] w', 'bot'),
    (r'\x. x !x', r'\x. x !x'),
    ('x[z/y] w', 'x[z/y] w'),
])
def test_direct_approximant(text, expected):
    assert print_term(direct_approximant(parse(text))) == expected


def test_order_and_join():
    assert bot_leq(BOT, parse('x'))
    assert bot_leq(approx('x !bot'), parse('x !(y z)'))
    assert not bot_leq(approx('x !bot'), parse('y !z'))
    assert bot_leq(approx(r'\y. y bot'), parse(r'\x. x z'))
    assert print_term(join(approx('x !bot'), approx('x !(x bot)'))) == 'x !(x bot)'
    assert join(approx('x'), approx('y')) is None
    assert join(approx('bot'), approx('y')) == approx('y')


def test_bot_truncations_include_the_extremes():
    truncations = list(bot_truncations(approx('x !y')))
    assert BOT in truncations
    assert approx('x !y') in truncations
    assert len(truncations) == 1 + (2 * (1 + 2))


def test_bohm_truncations_of_yn_grow_with_fuel():
    yn = parse(YN)
    assert print_term(bt_truncate(yn, 0)) == 'bot'
    assert print_term(bt_truncate(yn, 2)) == 'x !bot'
    assert print_term(bt_truncate(yn, 4)) == 'x !(x !bot)'


def test_bohm_truncation_of_omega_is_bottom():
    assert bt_truncate(parse(OMEGA), 6) == BOT


def test_bohm_truncation_of_a_normal_form():
    assert print_term(bt_truncate(parse(r'\x. x !x'), 0)) == r'\x. x !x'


def test_approximant_set_closure():
    aset = approximant_set(parse(YN), 4)
    assert set(print_term(a) for a in aset.closure()) == {
        'bot', 'x bot', 'x !bot', 'x !(x bot)', 'x !(x !bot)',
    }
    assert approx('x !(x bot)') in aset
    assert approx('x !(x !(x bot))') not in aset
    assert aset.truncated
    assert not aset.complete


def test_approximant_set_of_a_normalizing_term_is_complete():
    aset = approximant_set(parse(RUNNING), 10)
    assert aset.complete
    assert parse('!N z') in aset


def test_taylor_of_bohm_tree():
    bt = taylor_of_bt(parse(YN), 4, 5)
    assert bt.terms.printed() == ['x []', 'x [x []]']


def test_commutation_on_omega():
    report = check_commutation(parse(OMEGA), 20, 8)
    assert report.verdict is Verdict.PASS
    assert report.counts['bt_side'] == 0
    assert report.counts['nf_side'] == 0


def test_commutation_on_the_running_example():
    report = check_commutation(parse(RUNNING), 12, 6)
    assert report.verdict is Verdict.PASS
    assert '[] z' in report.details['nf_side']


@pytest.mark.parametrize('text', [OMEGA, YN, RUNNING])
def test_bohm_properties_on_corpus_terms(text):
    assert check_bohm_properties(parse(text), 4).verdict is Verdict.PASS


@given(st.sampled_from(SMALL_TERMS))
@settings(deadline=None, max_examples=150)
def test_direct_approximant_is_below_the_term(t):
    A = direct_approximant(t)
    assert is_approximant(A)
    assert bot_leq(A, t)


@given(st.sampled_from(SMALL_TERMS))
@settings(deadline=None, max_examples=60)
def test_commutation_never_fails(t):
    assert check_commutation(t, 6, 5, 200).verdict is not Verdict.FAIL
