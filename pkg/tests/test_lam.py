import pytest

from qc_dbang.core.lam import (
    CBN, CBV, Mode, lam_find_redexes, lam_normalize, lam_reducts, lam_step, system_for,
)
from qc_dbang.core.parser import parse
from qc_dbang.core.rewrite import ContextClass, NormalizeStatus
from qc_dbang.core.syntax import Language, alpha_eq, print_term


def lam(text):
    return parse(text, Language.LAMBDA)


@pytest.mark.parametrize('value, expected', [
    ('n', Mode.CBN), ('cbn', Mode.CBN), ('CBN', Mode.CBN),
    ('v', Mode.CBV), ('cbv', Mode.CBV), (Mode.CBV, Mode.CBV),
])
def test_mode_aliases(value, expected):
    assert Mode.parse(value) is expected


def test_unknown_mode():
    with pytest.raises(ValueError):
        Mode.parse('lazy')


def test_systems_by_mode():
    assert system_for('n') is CBN
    assert system_for(Mode.CBV) is CBV


def test_cbn_steps_one_at_a_time():
    M = lam(r'(\x. x) y')
    first = lam_step(M, 'n')
    assert alpha_eq(first, lam('x[y/x]'))
    assert print_term(lam_step(first, 'n')) == 'y'
    assert lam_step(lam('y'), 'n') is None


def test_cbv_waits_for_a_value():
    stuck = lam(r'(\x. \y. y) (z z)')
    cbv = lam_normalize(stuck, 'v')
    assert cbv.is_normal
    assert alpha_eq(cbv.result, lam(r'(\y. y)[z z/x]'))
    cbn = lam_normalize(stuck, 'n')
    assert alpha_eq(cbn.result, lam(r'\y. y'))


def test_cbv_substitutes_values_through_a_list():
    step = lam_step(lam(r'x[(\y. y)[z/w]/x]'), 'v')
    assert alpha_eq(step, lam(r'(\y. y)[z/w]'))
    assert alpha_eq(lam_normalize(step, 'v').result, lam(r'\y. y'))


def test_cbn_surface_is_head_reduction():
    M = lam(r'x ((\y. y) z)')
    assert lam_find_redexes(M, 'n', ContextClass.SURFACE) == []
    assert len(lam_find_redexes(M, 'n', ContextClass.FULL)) == 1
    assert lam_find_redexes(lam(r'\x. (\y. y) x'), 'n', ContextClass.SURFACE)


def test_cbv_surface_is_weak():
    M = lam(r'\x. (\y. y) x')
    assert lam_find_redexes(M, 'v', ContextClass.SURFACE) == []
    assert len(lam_find_redexes(M, 'v', ContextClass.FULL)) == 1
    assert lam_find_redexes(lam(r'x ((\y. y) z)'), 'v', ContextClass.SURFACE)


def test_omega_runs_out_of_fuel_in_both_modes():
    omega = lam(r'(\x. x x) (\x. x x)')
    for mode in Mode:
        outcome = lam_normalize(omega, mode, fuel=10)
        assert outcome.status is NormalizeStatus.FUEL_EXHAUSTED


def test_reducts_in_both_modes():
    M = lam(r'(\x. x) ((\y. y) z)')
    for mode in ('n', 'v'):
        found = lam_reducts(M, mode, fuel=6)
        assert lam('z') in found
        assert not found.truncated
