import pytest
from hypothesis import given, settings, strategies as st

from qc_dbang.core.parser import parse
from qc_dbang.core.report import Verdict
from qc_dbang.core.rewrite import DBANG, AppFrame, ContextClass, LamFrame, TestingContext
from qc_dbang.core.syntax import App, Bag, Bang, Language, TermSet, Var, enumerate_terms, print_term, size
from qc_dbang.core.taylor import (
    approximants_of_size, approximates, bags_from, check_context_decomposition, check_nf_invariance,
    check_simulation_full, check_simulation_surface, check_substitution_lemma,
    check_test_context_annihilation, contract_copies, copies_of,
    resource_contexts, substitution_lemma_backward, taylor_enum, taylor_nf,
)

SMALL_TERMS = list(enumerate_terms(4, Language.DBANG, ('x',)))
RESOURCE_TERMS = list(enumerate_terms(5, Language.RESOURCE, ('x',)))

OMEGA = r'(\x. x !x) !(\x. x !x)'
YN = r'(\y. x !(y !y)) !(\y. x !(y !y))'
YV = r'(\y. x (y !y)) !(\y. x (y !y))'
RUNNING = r'(\x. x y)[!z/y] !!((\w. w) !N)'


def res(text):
    return parse(text, Language.RESOURCE)


def test_approximation_relation():
    assert approximates(res('x [y, y]'), parse('x !y'))
    assert approximates(res('x []'), parse('x !y'))
    assert not approximates(res('x y'), parse('x !y'))
    assert approximates(res(r'\z. z [z]'), parse(r'\x. x !x'))
    assert approximates(res('x[[]/y]'), parse('x[!z/y]'))
    assert not approximates(res('x'), parse('bot', Language.DBANG_BOT))


def test_taylor_enum_of_a_bang():
    assert taylor_enum(parse('!x'), 3).terms.printed() == ['[]', '[x]', '[x, x]']


def test_taylor_enum_of_an_application():
    assert taylor_enum(parse('x !y'), 4).terms.printed() == ['x []', 'x [y]']


def test_taylor_enum_rejects_bad_cap():
    with pytest.raises(ValueError):
        taylor_enum(parse('x'), 0)


def test_approximants_of_exact_size():
    assert approximants_of_size(parse('!x'), 1) == (res('[]'),)
    assert approximants_of_size(parse('x'), 2) == ()


def test_taylor_normal_forms_of_omega_are_empty():
    nf = taylor_nf(parse(OMEGA), 10)
    assert nf.is_empty()
    assert not nf.complete_up_to_cap


def test_taylor_normal_forms_of_yn():
    nf = taylor_nf(parse(YN), 7)
    assert res('x []') in nf
    assert res('x [x []]') in nf
    assert not nf.complete_up_to_cap


def test_taylor_normal_forms_of_yv_are_empty():
    assert taylor_nf(parse(YV), 7).is_empty()


def test_taylor_normal_forms_of_a_normal_term_are_complete():
    nf = taylor_nf(parse('x !y'), 4)
    assert nf.complete_up_to_cap
    assert nf.terms.printed() == ['x []', 'x [y]']


def test_running_example_taylor_normal_form():
    nf = taylor_nf(parse(r'(\x. x y)[!z/y] !!((\w. w) !N)'), 5)
    assert nf.complete_up_to_cap
    assert res('[] z') in nf
    assert res('[N] z') in nf


def test_bags_from():
    pool = [Var('x'), parse(r'\y. y')]
    assert next(bags_from(pool, 0, 0)) == []
    assert [len(b) for b in bags_from(pool, 2, 2)] == [2]
    assert len(list(bags_from(pool, 2, 4))) == 3


def test_resource_contexts():
    context = TestingContext((AppFrame(Bang(Var('z'))), LamFrame('w', Bang(Var('z')))))
    rendered = {c.render() for c in resource_contexts(context, 2)}
    assert rendered == {r'(\w. □ [z]) [z]', r'(\w. □ []) [z]', r'(\w. □ [z]) []', r'(\w. □ []) []'}


def test_substitution_lemma_on_a_sample():
    M, N = parse('x !x'), parse('!y')
    report = check_substitution_lemma(M, 'x', N, res('x [x]'), [res('[y]'), res('[]')])
    assert report.verdict is Verdict.PASS
    assert substitution_lemma_backward(M, 'x', N, 5).verdict is Verdict.PASS


def test_substitution_lemma_needs_its_premises():
    report = check_substitution_lemma(parse('x'), 'x', parse('y'), res('z'), [])
    assert report.verdict is Verdict.INCONCLUSIVE


@pytest.mark.parametrize('text', [OMEGA, YN, r'(\x. x y)[!z/y] !!((\w. w) !N)'])
def test_simulations_on_corpus_terms(text):
    M = parse(text)
    assert check_simulation_surface(M, size_cap=7).verdict is Verdict.PASS
    assert check_simulation_full(M, size_cap=7).verdict is Verdict.PASS


def test_context_annihilation_for_omega():
    context = TestingContext((AppFrame(Bang(Var('z'))), LamFrame('w', Bang(Var('z')))))
    report = check_test_context_annihilation(parse(OMEGA), context, size_cap=6, arg_cap=3)
    assert report.verdict is Verdict.PASS
    assert report.counts['checked'] > 0


def test_nf_invariance_on_the_running_example():
    report = check_nf_invariance(parse(r'(\x. x y)[!z/y] !!((\w. w) !N)'), fuel=3, size_cap=5)
    assert report.verdict is Verdict.PASS


@given(st.sampled_from(SMALL_TERMS))
@settings(deadline=None, max_examples=100)
def test_enumerated_members_approximate(M):
    for m in taylor_enum(M, 5):
        assert approximates(m, M), print_term(m)


@given(st.sampled_from(SMALL_TERMS))
@settings(deadline=None, max_examples=80)
def test_simulation_never_fails(M):
    assert check_simulation_surface(M, size_cap=6).verdict is Verdict.PASS
    assert check_simulation_full(M, size_cap=6).verdict is Verdict.PASS


def _yn_shaped(t):
    return (isinstance(t, App) and t.fun == Var('x') and isinstance(t.arg, Bag)
            and all(_yn_shaped(e) for e in t.arg.elements))


def test_every_yn_normal_form_is_x_applied_to_a_bag_of_them():
    nf = taylor_nf(parse(YN), 7)
    assert not nf.is_empty()
    for t in nf:
        assert _yn_shaped(t), print_term(t)


@pytest.mark.parametrize('text', [YN, RUNNING, r'\x. x !x'])
def test_bounded_sets_grow_with_the_cap(text):
    M = parse(text)
    for cap in range(1, 8):
        small, large = taylor_enum(M, cap), taylor_enum(M, cap + 1)
        assert small.terms <= large.terms
        assert large.terms.filter(lambda t: size(t) <= cap) == small.terms
        nf_small, nf_large = taylor_nf(M, cap), taylor_nf(M, cap + 1)
        assert nf_small.terms <= nf_large.terms
        assert nf_small.complete_up_to_cap <= nf_large.complete_up_to_cap
        if nf_small.complete_up_to_cap:
            assert nf_large.terms.filter(lambda t: size(t) <= cap) == nf_small.terms


def test_copies_of_a_redex_under_a_bang():
    M = parse(r'!((\x. x) !y)')
    m = res(r'[(\x. x) [y], (\x. x) []]')
    paths = copies_of(m, M, (0,))
    assert paths == [(0,), (1,)]
    assert contract_copies(m, paths) == TermSet([res('[x[[y]/x], x[[]/x]]')])
    assert copies_of(res('[]'), M, (0,)) == []
    assert contract_copies(res('[]'), []) == TermSet([res('[]')])


def test_one_empty_copy_empties_the_parallel_step():
    M = parse('!(der !y)')
    m = res('[der [y], der [y, y]]')
    assert contract_copies(m, copies_of(m, M, (0,))).is_empty()


@pytest.mark.parametrize('text', [r'!((\x. x) !y)', r'(\x. x !x) !y', r'!(der !y)'])
def test_full_simulation_passes_under_bangs(text):
    report = check_simulation_full(parse(text), size_cap=8)
    assert report.verdict is Verdict.PASS
    assert report.counts['checked'] > 0


@pytest.mark.parametrize('text', [r'!((\x. x) !y)', r'(\x. x !x) !y'])
def test_full_simulation_rejects_a_step_that_leaves_the_term_unchanged(monkeypatch, text):
    real = DBANG.one_steps
    monkeypatch.setattr(DBANG, 'one_steps',
                        lambda t, cls=ContextClass.FULL: [(site, t) for site, _ in real(t, cls)])
    assert check_simulation_full(parse(text), size_cap=6).verdict is Verdict.FAIL


def test_simulation_fuel_covers_every_reduct_on_the_way():
    M = parse(OMEGA)
    for check in (check_simulation_surface, check_simulation_full):
        one, two = check(M, fuel=1, size_cap=6), check(M, fuel=2, size_cap=6)
        assert one.verdict is two.verdict is Verdict.PASS
        assert one.counts['sources'] == 1
        assert two.counts['sources'] == 2
        assert two.params['fuel'] == 2
        assert two.counts['checked'] > one.counts['checked']
    with pytest.raises(ValueError):
        check_simulation_full(M, fuel=0)


@pytest.mark.parametrize('text, length', [
    ('(x !y)[!z/y][!w/x]', 2),
    (r'(\y. y x)[!x/x][!y/x]', 2),
    (RUNNING, 0),
    (r'(der x)[!(\y. y)/x]', 1),
])
def test_context_decomposition(text, length):
    report = check_context_decomposition(parse(text), size_cap=7)
    assert report.verdict is Verdict.PASS
    assert report.details['list_length'] == length
    assert report.counts['checked'] > 0


@given(st.sampled_from(SMALL_TERMS))
@settings(deadline=None, max_examples=80)
def test_context_decomposition_never_fails(M):
    assert check_context_decomposition(M, size_cap=6).verdict is Verdict.PASS


@given(st.sampled_from(SMALL_TERMS))
@settings(deadline=None, max_examples=40)
def test_membership_agrees_with_approximation(M):
    approx = taylor_enum(M, 5)
    for m in RESOURCE_TERMS:
        assert (m in approx) == approximates(m, M), (print_term(m), print_term(M))
