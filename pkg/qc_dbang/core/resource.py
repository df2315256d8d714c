"""
资源演算 δBang 的归约.

一步归约是集合值的: 结果为空集表示湮灭 (m → ∅), 并按 f⟨∅⟩ = ∅ 向外传播.
bag 里的位置是指数位置, surface 归约不进入 bag.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import FrozenSet, List, Optional, Set, Tuple, Union

from .errors import LanguageError
from .report import CheckReport, ReportBuilder
from .rewrite import (
    ContextClass, RedexKind, RedexSite, TestingContext, freshen_list, list_view, wrap,
)
from .syntax import (
    App, Bag, Der, ESub, Lam, Language, Term, TermSet, canonicalize, children, free_vars,
    language_violation, multilinear_substitute, print_term, replace_at, size, with_children,
)

logger = logging.getLogger(__name__)

STRATEGIES = ('leftmost', 'rightmost', 'exhaustive')


@dataclass(frozen=True)
class NotRedex:
    pass


@dataclass(frozen=True)
class Reduces:
    """根归约结果; results 为空表示归约到 ∅"""
    results: TermSet

    @property
    def annihilates(self) -> bool:
        return self.results.is_empty()


RootStepResult = Union[NotRedex, Reduces]

NOT_REDEX = NotRedex()


@dataclass(frozen=True)
class StepFan:
    """所有一步归约: (位置, 整个项的结果集)"""
    steps: Tuple[Tuple[RedexSite, TermSet], ...]

    def __iter__(self):
        return iter(self.steps)

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def sites(self) -> List[RedexSite]:
        return [site for site, _ in self.steps]


def _root_kind(m: Term, clash_empty: bool = False) -> Optional[RedexKind]:
    if isinstance(m, App):
        core = list_view(m.fun)[1]
        if isinstance(core, Lam) or (clash_empty and isinstance(core, Bag)):
            return RedexKind.DISTANT_BETA
    elif isinstance(m, ESub):
        if isinstance(list_view(m.arg)[1], Bag):
            return RedexKind.SUBST_FIRE
    elif isinstance(m, Der):
        core = list_view(m.body)[1]
        if isinstance(core, Bag) or (clash_empty and isinstance(core, Lam)):
            return RedexKind.DER_FIRE
    return None


def res_root_step(m: Term, clash_empty: bool = False) -> RootStepResult:
    """
    根位置的资源归约.

    clash_empty=True 时 der l⟨λx.m⟩ 与 l⟨[..]⟩ n 这类 clash 也归约到 ∅.
    """
    kind = _root_kind(m, clash_empty)
    if kind is None:
        return NOT_REDEX
    if kind is RedexKind.DISTANT_BETA:
        subs, core = list_view(m.fun)
        if not isinstance(core, Lam):
            return Reduces(TermSet.empty())
        subs, core = freshen_list(subs, core, free_vars(m.arg))
        return Reduces(TermSet([wrap(ESub(core.body, m.arg, core.binder), subs)]))
    if kind is RedexKind.SUBST_FIRE:
        subs, core = list_view(m.arg)
        subs, core = freshen_list(subs, core, free_vars(m.body) - {m.binder})
        filled = multilinear_substitute(m.body, m.binder, core.elements)
        return Reduces(TermSet(wrap(t, subs) for t in filled))
    subs, core = list_view(m.body)
    if isinstance(core, Bag) and len(core.elements) == 1:
        return Reduces(TermSet([wrap(core.elements[0], subs)]))
    return Reduces(TermSet.empty())


def _collect_sites(m: Term, path: Tuple[int, ...], surface: bool, cls: ContextClass,
                   out: List[RedexSite], clash_empty: bool) -> None:
    kind = _root_kind(m, clash_empty)
    admitted = surface if cls is ContextClass.SURFACE else (
        not surface if cls is ContextClass.INTERNAL else True)
    if kind is not None and admitted:
        out.append(RedexSite(path, kind, cls))
    for i, child in enumerate(children(m)):
        child_surface = surface and not isinstance(m, Bag)
        if cls is ContextClass.SURFACE and not child_surface:
            continue
        _collect_sites(child, path + (i,), child_surface, cls, out, clash_empty)


def res_find_redexes(m: Term, cls: ContextClass = ContextClass.FULL, clash_empty: bool = False) -> List[RedexSite]:
    sites: List[RedexSite] = []
    _collect_sites(m, (), True, cls, sites, clash_empty)
    return sites


def res_one_steps(m: Term, cls: ContextClass = ContextClass.FULL, clash_empty: bool = False) -> StepFan:
    """该类别下每个位置的一步结果; 湮灭的分支结果为空集"""
    steps = []
    for site in res_find_redexes(m, cls, clash_empty):
        sub = m
        for i in site.path:
            sub = children(sub)[i]
        outcome = res_root_step(sub, clash_empty)
        steps.append((site, TermSet(replace_at(m, site.path, r) for r in outcome.results)))
    return StepFan(tuple(steps))


def is_res_normal(m: Term, cls: ContextClass = ContextClass.FULL) -> bool:
    return not res_find_redexes(m, cls)


def res_normal_forms(m: Term, strategy: str = 'exhaustive', clash_empty: bool = False) -> TermSet:
    """
    nf(m): 从 m 出发所有 full 归约可达的正规项.
    强正规化保证终止; 由合流性, 三种策略结果相同.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}, expected one of {STRATEGIES}")
    return TermSet(_normal_forms(canonicalize(m), strategy, clash_empty))


@lru_cache(maxsize=None)
def _normal_forms(m: Term, strategy: str, clash_empty: bool) -> FrozenSet[Term]:
    fan = res_one_steps(m, ContextClass.FULL, clash_empty)
    if not len(fan):
        return frozenset((m,))
    if strategy == 'leftmost':
        chosen = fan.steps[:1]
    elif strategy == 'rightmost':
        chosen = fan.steps[-1:]
    else:
        chosen = fan.steps
    result: Set[Term] = set()
    for _, outcome in chosen:
        for reduct in outcome:
            result |= _normal_forms(reduct, strategy, clash_empty)
    return frozenset(result)


def res_normalize(m: Term) -> TermSet:
    """确定性的 leftmost-outermost 集合值正规化"""
    return res_normal_forms(m, 'leftmost')


def plug_test_context(context: TestingContext, m: Term) -> Term:
    """t⟨m⟩, t 为资源 testing context (参数是资源项)"""
    for frame in context.frames:
        bad = language_violation(frame.arg, Language.RESOURCE)
        if bad:
            raise LanguageError(f"{bad!r} in a resource testing context argument")
    return context.plug(m)


def res_reach(m: Term, cls: ContextClass = ContextClass.FULL) -> TermSet:
    """该类别下所有 (多步) 可达项, 含 m 本身"""
    seen = {canonicalize(m)}
    stack = [canonicalize(m)]
    while stack:
        current = stack.pop()
        for _, outcome in res_one_steps(current, cls):
            for reduct in outcome:
                if reduct not in seen:
                    seen.add(reduct)
                    stack.append(reduct)
    return TermSet(seen)


def size_measure(m: Term) -> int:
    """强正规化度量: 节点数"""
    return size(m)


# ---------------------------------------------------------------------------
# 并行归约 ⇉
# ---------------------------------------------------------------------------

Outcome = FrozenSet[Term]


@dataclass(frozen=True)
class ParallelReducts:
    """m ⇉ 的全部结果; annihilates 表示存在归约到 ∅ 的选择"""
    terms: TermSet
    annihilates: bool

    def __contains__(self, t: object) -> bool:
        return t in self.terms

    def __iter__(self):
        return iter(self.terms)


def parallel_outcomes(m: Term) -> Tuple[TermSet, ...]:
    """
    每种 redex 选择对应一个结果集 (排列已取并); 空集表示该选择湮灭.
    同时对所有直接子项做合同归约, 并允许在列表上下文中做 dereliction.
    """
    return tuple(TermSet(o) for o in sorted(_outcomes(canonicalize(m)), key=_outcome_key))


def _outcome_key(outcome: Outcome):
    return (len(outcome), sorted(print_term(t) for t in outcome))


def parallel_reducts(m: Term) -> ParallelReducts:
    outcomes = _outcomes(canonicalize(m))
    terms: Set[Term] = set()
    for outcome in outcomes:
        terms |= outcome
    return ParallelReducts(TermSet(terms), any(not o for o in outcomes))


@lru_cache(maxsize=None)
def _outcomes(m: Term) -> FrozenSet[Outcome]:
    kids = children(m)
    # 同时对所有子项做一步并行归约
    kid_choices = [_outcomes(k) for k in kids]
    result: Set[Outcome] = set()
    for combo in itertools.product(*kid_choices):
        result.add(frozenset(
            canonicalize(with_children(m, picked))
            for picked in itertools.product(*combo)
        ))
    result |= _rule_outcomes(m)
    return frozenset(result)


def _subs_outcomes(subs) -> List[List[Tuple[Tuple[Term, str], ...]]]:
    """列表上下文 l ⇉ l' 的所有选择, 每个选择给出一组可能的 l'"""
    per_arg = [_outcomes(canonicalize(arg)) for arg, _ in subs]
    choices = []
    for combo in itertools.product(*per_arg):
        choices.append([
            tuple((arg, binder) for arg, (_, binder) in zip(args, subs))
            for args in itertools.product(*combo)
        ])
    return choices


def _rule_outcomes(m: Term) -> Set[Outcome]:
    kind = _root_kind(m)
    if kind is None:
        return set()
    out: Set[Outcome] = set()
    if kind is RedexKind.DISTANT_BETA:
        subs, core = list_view(m.fun)
        for body_o in _outcomes(canonicalize(core.body)):
            for arg_o in _outcomes(m.arg):
                for subs_o in _subs_outcomes(subs):
                    terms = set()
                    for body, arg, new_subs in itertools.product(body_o, arg_o, subs_o):
                        fresh_subs, lam = freshen_list(new_subs, Lam(core.binder, body), free_vars(arg))
                        terms.add(canonicalize(wrap(ESub(lam.body, arg, lam.binder), fresh_subs)))
                    out.add(frozenset(terms))
    elif kind is RedexKind.SUBST_FIRE:
        subs, core = list_view(m.arg)
        element_choices = [_outcomes(canonicalize(e)) for e in core.elements]
        for body_o in _outcomes(m.body):
            for subs_o in _subs_outcomes(subs):
                for elements_o in itertools.product(*element_choices):
                    terms = set()
                    for body, new_subs, elements in itertools.product(
                            body_o, subs_o, itertools.product(*elements_o)):
                        fresh_subs, fresh_bag = freshen_list(
                            new_subs, Bag(tuple(elements)), free_vars(body) - {m.binder})
                        for filled in multilinear_substitute(body, m.binder, fresh_bag.elements):
                            terms.add(canonicalize(wrap(filled, fresh_subs)))
                    out.add(frozenset(terms))
    else:
        subs, core = list_view(m.body)
        if len(core.elements) != 1:
            out.add(frozenset())
        else:
            for elem_o in _outcomes(canonicalize(core.elements[0])):
                for subs_o in _subs_outcomes(subs):
                    out.add(frozenset(
                        canonicalize(wrap(e, s)) for e, s in itertools.product(elem_o, subs_o)
                    ))
    return out


def lift_outcomes(terms: TermSet, limit: int = 4096) -> Optional[Set[Outcome]]:
    """
    集合到集合的并行归约: 每个成员任选一个结果集再取并.
    组合数超过 limit 时返回 None.
    """
    current: Set[Outcome] = {frozenset()}
    for t in terms:
        options = _outcomes(canonicalize(t))
        current = {acc | o for acc in current for o in options}
        if len(current) > limit:
            return None
    return current


# ---------------------------------------------------------------------------
# 性质检查
# ---------------------------------------------------------------------------

def check_size_decrease(m: Term) -> CheckReport:
    """每个 full 一步结果的大小都严格小于 m"""
    builder = ReportBuilder('sn', {'term': print_term(m)})
    for site, outcome in res_one_steps(m):
        for reduct in outcome:
            builder.expect(size_measure(reduct) < size_measure(m),
                           f"{print_term(m)} -> {print_term(reduct)} at {site.describe()} does not shrink")
    return builder.build()


def check_parallel_diamond(m: Term, limit: int = 4096) -> CheckReport:
    """⇉ 的一步 diamond (在集合层面)"""
    builder = ReportBuilder('diamond', {'term': print_term(m)})
    outcomes = parallel_outcomes(m)
    builder.count('outcomes', len(outcomes))
    lifted = [lift_outcomes(o, limit) for o in outcomes]
    for i in range(len(outcomes)):
        for j in range(i + 1, len(outcomes)):
            left, right = lifted[i], lifted[j]
            if left is None or right is None:
                builder.inconclusive(f"join search over {limit} combinations exhausted")
            else:
                builder.expect(bool(left & right),
                               f"{outcomes[i]!r} and {outcomes[j]!r} have no common parallel reduct")
    return builder.build()


def check_parallel_chain(m: Term) -> CheckReport:
    """一步 full ⊆ ⇉ ⊆ full 多步"""
    builder = ReportBuilder('parallel-chain', {'term': print_term(m)})
    par = parallel_reducts(m)
    outcomes = set(parallel_outcomes(m))
    for site, results in res_one_steps(m):
        builder.expect(results in outcomes,
                       f"step {site.describe()} of {print_term(m)} to {results!r} is not a parallel step")
    reachable = res_reach(m)
    for t in par.terms:
        builder.expect(t in reachable, f"{print_term(m)} ⇉ {print_term(t)} is not a full reduction")
    return builder.build()


def check_strategy_independence(m: Term) -> CheckReport:
    builder = ReportBuilder('strategy', {'term': print_term(m)})
    reference = res_normal_forms(m, 'exhaustive')
    for strategy in ('leftmost', 'rightmost'):
        found = res_normal_forms(m, strategy)
        builder.expect(found == reference,
                       f"{strategy} normal forms {found!r} differ from {reference!r} for {print_term(m)}")
    return builder.build()


def check_resource_factorization(m: Term) -> CheckReport:
    """每个 full 可达项都可以写成 surface 归约后再只在 bag 内归约"""
    builder = ReportBuilder('resource-factorization', {'term': print_term(m)})
    inside_bags: Set[Term] = set()
    for p in res_reach(m, ContextClass.SURFACE):
        inside_bags |= res_reach(p, ContextClass.INTERNAL).members
    for target in res_reach(m, ContextClass.FULL):
        builder.expect(canonicalize(target) in inside_bags,
                       f"{print_term(target)} is not surface-then-internal from {print_term(m)}")
    return builder.build()
