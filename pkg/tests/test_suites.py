import pytest

from qc_dbang.core.lam import Mode
from qc_dbang.core.report import Verdict
from qc_dbang.suites import (
    DBANG, GLOBAL, LAMBDA, RESOURCE, SUITES, corpus_population, fuzz, get_suite, modes_for,
    run_suite,
)


def test_registry_covers_every_kind():
    kinds = {suite.kind for suite in SUITES.values()}
    assert kinds == {DBANG, RESOURCE, LAMBDA, GLOBAL}
    for name in ('factorization', 'confluence', 'simulation', 'simulation-full', 'nf-invariance',
                 'commutation', 'bohm', 'meaningful', 'tnf-witness', 'context-annihilation',
                 'sn', 'diamond', 'parallel-chain', 'strategy', 'resource-factorization',
                 'embedding', 'translation-simulation', 'translation-taylor', 'translation-bohm',
                 'translation-commutation', 'meaningfulness-transfer', 'fragment-closure',
                 'nf-shape', 'translation-fragment', 'substitution', 'context-decomposition'):
        assert name in SUITES


def test_unknown_suite():
    with pytest.raises(ValueError, match='unknown suite'):
        get_suite('termination')


def test_modes_for():
    assert modes_for(None) == (Mode.CBN, Mode.CBV)
    assert modes_for(Mode.CBV) == (Mode.CBV,)


def test_single_term_gives_a_single_report(corpus, settings):
    report = run_suite('factorization', settings, [('running', corpus.get('running'))])
    assert report.check == 'factorization'
    assert report.verdict is Verdict.PASS
    assert 'runs' not in report.counts


def test_resource_suite_runs_on_enumerated_terms(settings):
    report = run_suite('sn', settings)
    assert report.verdict is Verdict.PASS
    assert report.counts['runs'] > 10
    assert report.counts['pass'] == report.counts['runs']


def test_lambda_suite_runs_in_both_modes(lambda_corpus, settings):
    report = run_suite('embedding', settings, [('id_app', lambda_corpus.get('id_app'))])
    assert report.verdict is Verdict.PASS
    assert report.counts['runs'] == 2
    assert [run['params']['mode'] for run in report.details['runs']] == ['n', 'v']


def test_lambda_suite_with_a_fixed_mode(lambda_corpus, settings):
    report = run_suite('embedding', settings, [('id_app', lambda_corpus.get('id_app'))], Mode.CBV)
    assert report.params['mode'] == 'v'
    assert report.verdict is Verdict.PASS


def test_global_suites(settings):
    small = settings.override(cap=4)
    assert run_suite('fragment-closure', small, mode=Mode.CBN).verdict is Verdict.PASS
    assert run_suite('translation-fragment', small).verdict is Verdict.PASS


def test_context_annihilation_suite(corpus, settings):
    report = run_suite('context-annihilation', settings, [('Omega', corpus.get('Omega'))])
    assert report.verdict is Verdict.PASS


def test_meaningful_suite_on_omega_is_inconclusive(corpus, settings):
    report = run_suite('meaningful', settings, [('Omega', corpus.get('Omega'))])
    assert report.verdict is Verdict.INCONCLUSIVE
    assert report.reason


def test_merged_reports_count_runs(corpus, settings):
    report = run_suite('commutation', settings, corpus_population(corpus, ['Omega', 'Delta']))
    assert report.verdict is Verdict.PASS
    assert report.counts == {'runs': 2, 'pass': 2, 'fail': 0, 'inconclusive': 0}


def test_fuzz_is_deterministic(settings):
    first = fuzz(7, 4, 5, 'sn', settings)
    second = fuzz(7, 4, 5, 'sn', settings)
    assert first.to_dict() == second.to_dict()
    assert first.params['seed'] == 7
    assert first.params['count'] == 5


def test_fuzz_rejects_global_suites(settings):
    with pytest.raises(ValueError):
        fuzz(0, 4, 5, 'nf-shape', settings)


def test_corpus_population(corpus):
    assert [name for name, _ in corpus_population(corpus, ['I', 'Delta'])] == ['I', 'Delta']
    assert len(corpus_population(corpus)) == len(corpus)


def test_substitution_suite_records_its_term_size(settings):
    report = run_suite('substitution', settings.override(cap=3))
    assert report.verdict is Verdict.PASS
    assert report.params['term_cap'] == 3
    assert report.params['cap'] == 3


def test_context_decomposition_suite(corpus, settings):
    report = run_suite('context-decomposition', settings, corpus_population(corpus, ['running', 'Omega']))
    assert report.verdict is Verdict.PASS
    assert report.counts['runs'] == 2
