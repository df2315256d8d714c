import pytest
from hypothesis import given, settings, strategies as st

from qc_dbang.core.errors import LanguageError
from qc_dbang.core.parser import parse
from qc_dbang.core.report import Verdict
from qc_dbang.core.resource import (
    NOT_REDEX, Reduces, check_parallel_chain, check_parallel_diamond, check_resource_factorization,
    check_size_decrease, check_strategy_independence, is_res_normal, parallel_reducts,
    plug_test_context, res_find_redexes, res_normal_forms, res_normalize, res_one_steps,
    res_reach, res_root_step,
)
from qc_dbang.core.rewrite import AppFrame, ContextClass, TestingContext
from qc_dbang.core.syntax import Bang, Language, Var, alpha_eq, enumerate_terms

RESOURCE_TERMS = list(enumerate_terms(5, Language.RESOURCE, ('x',)))


def res(text):
    return parse(text, Language.RESOURCE)


@pytest.mark.parametrize('text, expected', [
    ('x[[y]/x]', ['y']),
    ('x[[]/x]', []),
    ('(x x)[[y, z]/x]', ['y z', 'z y']),
    ('der [y]', ['y']),
    ('der [y, z]', []),
    ('der []', []),
    (r'(\x. x) [y]', ['y']),
    (r'(\x. x x) [y]', []),
    ('x [y, z]', ['x [y, z]']),
])
def test_normal_forms(text, expected):
    assert res_normal_forms(res(text)).printed() == expected


def test_root_step_results():
    assert res_root_step(res('x y')) is NOT_REDEX
    step = res_root_step(res('der [y, z]'))
    assert isinstance(step, Reduces) and step.annihilates
    step = res_root_step(res('x[[y]/x]'))
    assert step.results.printed() == ['y']


def test_clash_rules_annihilate_when_enabled():
    clash = res(r'der (\x. x)')
    assert res_root_step(clash) is NOT_REDEX
    assert res_root_step(clash, clash_empty=True).annihilates
    assert res_normal_forms(clash).printed() == [r'der (\x. x)']
    assert res_normal_forms(clash, clash_empty=True).is_empty()
    assert res_normal_forms(res('[y] z'), clash_empty=True).is_empty()


def test_substitution_through_a_list():
    step = res_root_step(res('x[[y][[]/z]/x]'))
    assert len(step.results) == 1
    assert alpha_eq(step.results.ordered()[0], res('y[[]/z]'))
    assert res_normal_forms(res('x[[y][[]/z]/x]')).printed() == ['y']


def test_annihilation_propagates_to_the_whole_term():
    fan = res_one_steps(res('x (der [])'))
    assert len(fan) == 1
    site, results = fan.steps[0]
    assert results.is_empty()
    assert site.path == (1,)


def test_surface_steps_do_not_enter_bags():
    m = res(r'x [(\y. y) z]')
    assert res_find_redexes(m, ContextClass.SURFACE) == []
    assert len(res_find_redexes(m, ContextClass.INTERNAL)) == 1
    assert is_res_normal(m, ContextClass.SURFACE)
    assert not is_res_normal(m)


def test_unknown_strategy():
    with pytest.raises(ValueError):
        res_normal_forms(res('x'), 'random')


def test_leftmost_normalization_agrees():
    m = res('(x x)[[y, z]/x]')
    assert res_normalize(m) == res_normal_forms(m)


def test_reach_includes_start_and_normal_forms():
    m = res(r'(\x. x) [y]')
    reached = res_reach(m)
    assert m in reached
    assert res('y') in reached
    assert res('x[[y]/x]') in reached


def test_parallel_reducts_are_reflexive():
    par = parallel_reducts(res(r'(\x. x) [y]'))
    assert set(par.terms.printed()) == {r'(\x. x) [y]', 'x[[y]/x]'}
    assert not par.annihilates
    assert parallel_reducts(res('der [y, z]')).annihilates


def test_test_context_arguments_must_be_resource_terms():
    bad = TestingContext((AppFrame(Bang(Var('z'))),))
    with pytest.raises(LanguageError):
        plug_test_context(bad, Var('x'))
    good = TestingContext((AppFrame(res('[z]')),))
    assert plug_test_context(good, Var('x')) == res('x [z]')


@given(st.sampled_from(RESOURCE_TERMS))
@settings(deadline=None, max_examples=200)
def test_steps_shrink(m):
    assert check_size_decrease(m).verdict is Verdict.PASS


@given(st.sampled_from(RESOURCE_TERMS))
@settings(deadline=None, max_examples=100)
def test_parallel_diamond(m):
    assert check_parallel_diamond(m).verdict is not Verdict.FAIL


@given(st.sampled_from(RESOURCE_TERMS))
@settings(deadline=None, max_examples=100)
def test_parallel_chain(m):
    assert check_parallel_chain(m).verdict is Verdict.PASS


@given(st.sampled_from(RESOURCE_TERMS))
@settings(deadline=None, max_examples=100)
def test_strategy_independence(m):
    assert check_strategy_independence(m).verdict is Verdict.PASS


@given(st.sampled_from(RESOURCE_TERMS))
@settings(deadline=None, max_examples=100)
def test_resource_factorization(m):
    assert check_resource_factorization(m).verdict is Verdict.PASS


@given(st.sampled_from(RESOURCE_TERMS))
@settings(deadline=None, max_examples=100)
def test_normal_forms_are_normal(m):
    for n in res_normal_forms(m):
        assert is_res_normal(n)
