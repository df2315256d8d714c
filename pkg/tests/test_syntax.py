import pytest
from hypothesis import given, settings, strategies as st

from qc_dbang.core.parser import parse
from qc_dbang.core.syntax import (
    App, Bag, Bang, Lam, Language, TermSet, Var, alpha_eq, canonicalize, enumerate_terms,
    free_vars, language_violation, multilinear_substitute, occurrences, print_term, size,
    substitute,
)

DBANG_TERMS = list(enumerate_terms(5, Language.DBANG, ('x', 'y')))
RESOURCE_TERMS = list(enumerate_terms(4, Language.RESOURCE, ('x',)))


def test_size_counts_nodes():
    assert size(parse(r'\x. x !x')) == 5
    assert size(parse('[x, x]', Language.RESOURCE)) == 3


def test_free_vars_respect_binders():
    assert free_vars(parse(r'\x. x y')) == {'y'}
    assert free_vars(parse('x[y/x]')) == {'y'}
    assert free_vars(parse('x[x/y]')) == {'x'}


def test_occurrences_count_under_bang():
    assert occurrences(parse('x (x !x)'), 'x') == 3
    assert occurrences(parse(r'\x. x'), 'x') == 0


def test_substitute_avoids_capture():
    result = substitute(parse(r'\y. x'), 'x', Var('y'))
    assert isinstance(result, Lam)
    assert result.binder != 'y'
    assert alpha_eq(result, parse(r'\z. y'))


def test_alpha_equivalence():
    assert alpha_eq(parse(r'\x. x'), parse(r'\y. y'))
    assert not alpha_eq(parse(r'\x. y'), parse(r'\y. y'))
    assert alpha_eq(parse('x[!z/y]'), parse('x[!z/w]'))


def test_canonical_bags_ignore_order():
    left = parse('x [y, z]', Language.RESOURCE)
    right = parse('x [z, y]', Language.RESOURCE)
    assert canonicalize(left) == canonicalize(right)


def test_multilinear_substitution_takes_all_permutations():
    m = parse('x x', Language.RESOURCE)
    assert multilinear_substitute(m, 'x', [Var('y'), Var('z')]).printed() == ['y z', 'z y']


def test_multilinear_substitution_arity_mismatch_is_empty():
    m = parse('x x', Language.RESOURCE)
    assert multilinear_substitute(m, 'x', [Var('y')]).is_empty()
    assert multilinear_substitute(m, 'x', []).is_empty()


def test_term_set_identifies_alpha_variants():
    terms = TermSet([parse(r'\x. x'), parse(r'\y. y'), parse('z')])
    assert len(terms) == 2
    assert parse(r'\w. w') in terms
    assert terms.printed() == ['z', r'\x. x']


def test_language_violation():
    assert language_violation(Bang(Var('x')), Language.LAMBDA) == '!'
    assert language_violation(App(Var('x'), Bag()), Language.DBANG) == 'bag'
    assert language_violation(parse('der x'), Language.DBANG) is None


def test_enumerate_small_sizes():
    assert [print_term(t) for t in enumerate_terms(1)] == ['x']
    assert len(list(enumerate_terms(2))) == 5
    assert len(list(enumerate_terms(2, Language.LAMBDA))) == 3
    with pytest.raises(ValueError):
        list(enumerate_terms(0))


def test_enumeration_has_one_term_per_alpha_class():
    assert len(TermSet(DBANG_TERMS)) == len(DBANG_TERMS)


@given(st.sampled_from(DBANG_TERMS))
@settings(deadline=None, max_examples=200)
def test_print_then_parse_is_alpha_equal(t):
    assert alpha_eq(parse(print_term(t)), t)


@given(st.sampled_from(RESOURCE_TERMS))
@settings(deadline=None, max_examples=100)
def test_resource_print_then_parse(t):
    assert alpha_eq(parse(print_term(t), Language.RESOURCE), t)


@given(st.sampled_from(DBANG_TERMS))
@settings(deadline=None, max_examples=100)
def test_canonicalize_is_idempotent(t):
    once = canonicalize(t)
    assert canonicalize(once) == once
    assert free_vars(once) == free_vars(t)
