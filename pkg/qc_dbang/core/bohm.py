"""
Böhm 近似元: 文法判定, 序 ⊑, 直接近似 ω, join, 有界近似集与 Böhm 树截断.

    A   := ⊥ | B | λx A | !A | A[A_!/x]
    B   := x | A_λ A | der A_!
    A_! := B | λx A | A_![A_!/x]
    A_λ := B | !A | A_λ[A_!/x]
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Iterator, List, Optional, Set

from .errors import InvariantViolation
from .report import CheckReport, ReportBuilder
from .rewrite import DBANG, ContextClass
from .syntax import (
    BOT, App, Bang, Bot, Der, ESub, Lam, Term, TermSet, Var, canonicalize,
    children, print_term, sort_key, with_children,
)
from .taylor import DEFAULT_REDUCT_CAP, TaylorSet, align_binders, taylor_enum, taylor_nf

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# 文法
# ---------------------------------------------------------------------------

def _in_b(t: Term) -> bool:
    if isinstance(t, Var):
        return True
    if isinstance(t, App):
        return _in_lam_sort(t.fun) and is_approximant(t.arg)
    if isinstance(t, Der):
        return _in_bang_sort(t.body)
    return False


def _in_bang_sort(t: Term) -> bool:
    """A_!: 核心不是 bang"""
    if isinstance(t, Lam):
        return is_approximant(t.body)
    if isinstance(t, ESub):
        return _in_bang_sort(t.body) and _in_bang_sort(t.arg)
    return _in_b(t)


def _in_lam_sort(t: Term) -> bool:
    """A_λ: 核心不是抽象"""
    if isinstance(t, Bang):
        return is_approximant(t.body)
    if isinstance(t, ESub):
        return _in_lam_sort(t.body) and _in_bang_sort(t.arg)
    return _in_b(t)


def is_approximant(t: Term) -> bool:
    if isinstance(t, Bot):
        return True
    if isinstance(t, (Lam, Bang)):
        return is_approximant(t.body)
    if isinstance(t, ESub):
        return is_approximant(t.body) and _in_bang_sort(t.arg)
    return _in_b(t)


# ---------------------------------------------------------------------------
# 序与 join
# ---------------------------------------------------------------------------

def bot_leq(A: Term, M: Term) -> bool:
    """A ⊑ M: A 由 M 把若干子项换成 ⊥ 得到"""
    if isinstance(A, Bot):
        return True
    if type(A) is not type(M):
        return False
    if isinstance(A, Var):
        return A.name == M.name
    if isinstance(A, Lam):
        _, body_a, body_m = align_binders(A.binder, A.body, M.binder, M.body)
        return bot_leq(body_a, body_m)
    if isinstance(A, ESub):
        if not bot_leq(A.arg, M.arg):
            return False
        _, body_a, body_m = align_binders(A.binder, A.body, M.binder, M.body)
        return bot_leq(body_a, body_m)
    return all(bot_leq(a, m) for a, m in zip(children(A), children(M)))


def join(A1: Term, A2: Term) -> Optional[Term]:
    """⊑ 下的最小上界; 结构不相容时返回 None"""
    if isinstance(A1, Bot):
        return A2
    if isinstance(A2, Bot):
        return A1
    if type(A1) is not type(A2):
        return None
    if isinstance(A1, Var):
        return A1 if A1.name == A2.name else None
    if isinstance(A1, (Lam, ESub)):
        binder, body1, body2 = align_binders(A1.binder, A1.body, A2.binder, A2.body)
        body = join(body1, body2)
        if body is None:
            return None
        if isinstance(A1, Lam):
            return Lam(binder, body)
        arg = join(A1.arg, A2.arg)
        return None if arg is None else ESub(body, arg, binder)
    kids = []
    for k1, k2 in zip(children(A1), children(A2)):
        k = join(k1, k2)
        if k is None:
            return None
        kids.append(k)
    return with_children(A1, kids)


# ---------------------------------------------------------------------------
# 直接近似 ω
# ---------------------------------------------------------------------------

def direct_approximant(N: Term) -> Term:
    """ω(N): N 之下最大的近似元; redex 塌缩为 ⊥, 非法位置向上传播 ⊥"""
    if isinstance(N, (Var, Bot)):
        return N
    if DBANG.root_redex(N) is not None:
        return BOT
    if isinstance(N, Lam):
        return Lam(N.binder, direct_approximant(N.body))
    if isinstance(N, Bang):
        return Bang(direct_approximant(N.body))
    if isinstance(N, Der):
        body = direct_approximant(N.body)
        return Der(body) if _in_bang_sort(body) else BOT
    if isinstance(N, App):
        fun = direct_approximant(N.fun)
        return App(fun, direct_approximant(N.arg)) if _in_lam_sort(fun) else BOT
    if isinstance(N, ESub):
        arg = direct_approximant(N.arg)
        return ESub(direct_approximant(N.body), arg, N.binder) if _in_bang_sort(arg) else BOT
    raise TypeError(f"not a dBang term: {N!r}")


def bot_truncations(A: Term) -> Iterator[Term]:
    """把若干子项换成 ⊥ 得到的所有项 (含 A 本身与 ⊥)"""
    yield BOT
    if isinstance(A, Bot):
        return
    kids = children(A)
    for picked in itertools.product(*[list(bot_truncations(k)) for k in kids]):
        yield with_children(A, picked)


# ---------------------------------------------------------------------------
# 近似集与 Böhm 树截断
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ApproximantSet:
    """A(M) 的有界版本: generators 为各可达项的 ω"""
    generators: TermSet
    fuel: int
    truncated: bool = False
    complete: bool = False

    def closure(self) -> Iterator[Term]:
        """向下闭包, 惰性去重"""
        seen: Set[Term] = set()
        for generator in self.generators:
            for candidate in bot_truncations(generator):
                candidate = canonicalize(candidate)
                if candidate not in seen and is_approximant(candidate):
                    seen.add(candidate)
                    yield candidate

    def __contains__(self, A: object) -> bool:
        return any(bot_leq(A, g) for g in self.generators)


def approximant_set(M: Term, fuel: int, cap: int = DEFAULT_REDUCT_CAP) -> ApproximantSet:
    exploration = DBANG.explore(M, ContextClass.FULL, fuel, cap)
    generators = TermSet(direct_approximant(N) for N in exploration.terms)
    complete = any(DBANG.is_normal(N, ContextClass.FULL) for N in exploration.terms)
    if exploration.truncated:
        logger.debug("approximant set of %s truncated at fuel %d", print_term(M), fuel)
    return ApproximantSet(generators, fuel, exploration.truncated, complete)


def bt_truncate(M: Term, fuel: int, cap: int = DEFAULT_REDUCT_CAP) -> Term:
    """fuel 内所有生成元的 join"""
    aset = approximant_set(M, fuel, cap)
    result: Term = BOT
    for generator in sorted(aset.generators, key=sort_key):
        joined = join(result, generator)
        if joined is None:
            raise InvariantViolation(
                f"approximants {print_term(result)} and {print_term(generator)} of "
                f"{print_term(M)} have no upper bound"
            )
        result = joined
    return canonicalize(result)


def taylor_of_bt(M: Term, fuel: int, size_cap: int, cap: int = DEFAULT_REDUCT_CAP) -> TaylorSet:
    """T(BT(M)) 在 size_cap 以内的部分; 对生成元取并即可"""
    aset = approximant_set(M, fuel, cap)
    terms: Set[Term] = set()
    for generator in aset.generators:
        terms |= taylor_enum(generator, size_cap).terms.members
    return TaylorSet(TermSet(terms), size_cap, aset.complete)


# ---------------------------------------------------------------------------
# 性质检查
# ---------------------------------------------------------------------------

def check_commutation(M: Term, fuel: int = 12, size_cap: int = 8,
                      cap: int = DEFAULT_REDUCT_CAP) -> CheckReport:
    """T(BT(M)) 与 T_nf(M) 的有界比较; BT 一侧在任意 fuel 下都必须包含于 NF 一侧"""
    builder = ReportBuilder('commutation', {'term': print_term(M), 'fuel': fuel, 'cap': size_cap})
    bt_side = taylor_of_bt(M, fuel, size_cap, cap)
    nf_side = taylor_nf(M, size_cap, fuel, cap)
    builder.count('bt_side', len(bt_side))
    builder.count('nf_side', len(nf_side))
    builder.detail('bt_side', bt_side.terms.printed())
    builder.detail('nf_side', nf_side.terms.printed())
    for m in bt_side:
        builder.expect(m in nf_side, f"{print_term(m)} ∈ T(BT) but not in T_nf of {print_term(M)}")
    for m in nf_side:
        if m in bt_side:
            builder.ok()
        elif bt_side.complete_up_to_cap:
            builder.fail(f"{print_term(m)} ∈ T_nf but not in T(BT) of {print_term(M)}")
        else:
            builder.inconclusive(f"{print_term(m)} missing from T(BT) of {print_term(M)}: fuel {fuel} truncation")
    return builder.build()


def check_bohm_properties(M: Term, fuel: int = 6, cap: int = DEFAULT_REDUCT_CAP) -> CheckReport:
    """ω 的正确性, 持久性, 理想性以及 bt_truncate 对 fuel 的单调性"""
    builder = ReportBuilder('bohm', {'term': print_term(M), 'fuel': fuel})
    exploration = DBANG.explore(M, ContextClass.FULL, fuel, cap)
    for N in exploration.terms:
        A = direct_approximant(N)
        builder.expect(is_approximant(A) and bot_leq(A, N),
                       f"ω({print_term(N)}) = {print_term(A)} is not an approximant below it")
        for _, reduct in DBANG.one_steps(N, ContextClass.FULL):
            builder.expect(bot_leq(A, reduct),
                           f"{print_term(A)} ⊑ {print_term(N)} but not ⊑ its reduct {print_term(reduct)}")
    generators: List[Term] = sorted(TermSet(direct_approximant(N) for N in exploration.terms), key=sort_key)
    for i, g1 in enumerate(generators):
        for g2 in generators[i + 1:]:
            builder.expect(join(g1, g2) is not None,
                           f"approximants {print_term(g1)} and {print_term(g2)} have no join")
    previous: Optional[Term] = None
    for f in range(fuel + 1):
        try:
            current = bt_truncate(M, f, cap)
        except InvariantViolation as exc:
            builder.fail(str(exc))
            break
        if previous is not None:
            builder.expect(bot_leq(previous, current),
                           f"bt_truncate at fuel {f - 1} = {print_term(previous)} not ⊑ {print_term(current)}")
        previous = current
    return builder.build()

