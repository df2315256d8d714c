"""
dCBN / dCBV: 带显式替换的远程 λ 演算.

    CbN:  L⟨λx.M⟩ N → L⟨M[N/x]⟩      M[N/x] → M{N/x}
    CbV:  L⟨λx.M⟩ N → L⟨M[N/x]⟩      M[L⟨V⟩/x] → L⟨M{V/x}⟩
"""
from __future__ import annotations

import logging
from enum import Enum
from typing import List, Optional, Union

from .rewrite import (
    ContextClass, NormalizeOutcome, RedexKind, RedexSite, RewriteSystem, freshen_list,
    list_view, wrap,
)
from .syntax import App, ESub, Lam, Term, TermSet, free_vars, is_value, substitute

logger = logging.getLogger(__name__)


class Mode(Enum):
    CBN = 'n'
    CBV = 'v'

    @classmethod
    def parse(cls, value: Union['Mode', str]) -> 'Mode':
        if isinstance(value, Mode):
            return value
        aliases = {'n': cls.CBN, 'cbn': cls.CBN, 'v': cls.CBV, 'cbv': cls.CBV}
        try:
            return aliases[value.lower()]
        except KeyError:
            raise ValueError(f"unknown mode {value!r}, expected n or v")


class LamSystem(RewriteSystem):
    """两种模式共用 distant beta; 显式替换规则由子类决定"""
    mode: Mode

    def root_redex(self, t: Term) -> Optional[RedexKind]:
        if isinstance(t, App) and isinstance(list_view(t.fun)[1], Lam):
            return RedexKind.DISTANT_BETA
        if isinstance(t, ESub) and self.fires(t):
            return RedexKind.SUBST_FIRE
        return None

    def fires(self, t: ESub) -> bool:
        raise NotImplementedError

    def contract(self, t: Term, kind: RedexKind) -> Term:
        if kind is RedexKind.DISTANT_BETA:
            subs, core = list_view(t.fun)
            subs, core = freshen_list(subs, core, free_vars(t.arg))
            return wrap(ESub(core.body, t.arg, core.binder), subs)
        return self.fire(t)

    def fire(self, t: ESub) -> Term:
        raise NotImplementedError


class CbnSystem(LamSystem):
    name = 'dcbn'
    mode = Mode.CBN

    def fires(self, t: ESub) -> bool:
        return True

    def fire(self, t: ESub) -> Term:
        return substitute(t.body, t.binder, t.arg)

    def is_surface_child(self, t: Term, index: int) -> bool:
        # 头部位置: 函数部分, 抽象体, 显式替换的体
        if isinstance(t, (App, ESub)):
            return index == 0
        return True


class CbvSystem(LamSystem):
    name = 'dcbv'
    mode = Mode.CBV

    def fires(self, t: ESub) -> bool:
        return is_value(list_view(t.arg)[1])

    def fire(self, t: ESub) -> Term:
        subs, value = list_view(t.arg)
        subs, value = freshen_list(subs, value, free_vars(t.body) - {t.binder})
        return wrap(substitute(t.body, t.binder, value), subs)

    def is_surface_child(self, t: Term, index: int) -> bool:
        # weak: 不进入抽象体
        return not isinstance(t, Lam)


CBN = CbnSystem()
CBV = CbvSystem()


def system_for(mode: Union[Mode, str]) -> LamSystem:
    return CBN if Mode.parse(mode) is Mode.CBN else CBV


def lam_find_redexes(M: Term, mode: Union[Mode, str],
                     cls: ContextClass = ContextClass.FULL) -> List[RedexSite]:
    return system_for(mode).find_redexes(M, cls)


def lam_step(M: Term, mode: Union[Mode, str], cls: ContextClass = ContextClass.FULL) -> Optional[Term]:
    """leftmost-outermost 一步; 正规时返回 None"""
    system = system_for(mode)
    sites = system.find_redexes(M, cls)
    if not sites:
        return None
    return system.step_at(M, sites[0])


def lam_normalize(M: Term, mode: Union[Mode, str], cls: ContextClass = ContextClass.FULL,
                  fuel: int = 100, trace: bool = False) -> NormalizeOutcome:
    return system_for(mode).normalize(M, cls, fuel, trace)


def lam_reducts(M: Term, mode: Union[Mode, str], cls: ContextClass = ContextClass.FULL,
                fuel: int = 10, cap: int = 500) -> TermSet:
    return system_for(mode).reducts(M, cls, fuel, cap)
