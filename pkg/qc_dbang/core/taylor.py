"""
近似关系 m ⊲ M, 有界 Taylor 展开, Taylor 正规形以及模拟 / 不变性检查.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, List, Set, Tuple

from .report import CheckReport, ReportBuilder
from .resource import NotRedex, plug_test_context, res_normal_forms, res_one_steps, res_root_step
from .rewrite import DBANG, AppFrame, ContextClass, LamFrame, RedexKind, RedexSite, TestingContext, list_view, wrap
from .syntax import (
    App, Bag, Bang, Bot, Der, ESub, Lam, Term, TermSet, Var, all_names, children,
    canonicalize, fresh_name, multilinear_substitute, occurrences, print_term,
    rename, replace_at, size, subterm_at, substitute,
)

logger = logging.getLogger(__name__)

DEFAULT_NF_FUEL = 8
DEFAULT_REDUCT_CAP = 300


@dataclass(frozen=True)
class TaylorSet:
    """有界 Taylor 集; complete_up_to_cap 表示 cap 以内没有遗漏"""
    terms: TermSet
    size_cap: int
    complete_up_to_cap: bool

    def __contains__(self, m: object) -> bool:
        return m in self.terms

    def __iter__(self):
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def is_empty(self) -> bool:
        return self.terms.is_empty()


def align_binders(b1: str, body1: Term, b2: str, body2: Term) -> Tuple[str, Term, Term]:
    """把两个绑定换成同一个名字, 便于结构比较"""
    if b1 == b2:
        return b1, body1, body2
    common = fresh_name(b1, all_names(body1) | all_names(body2) | {b1, b2})
    return common, rename(body1, b1, common), rename(body2, b2, common)


def approximates(m: Term, M: Term) -> bool:
    """m ⊲ M; 没有资源项近似 ⊥"""
    if isinstance(M, Bot):
        return False
    if isinstance(M, Var):
        return isinstance(m, Var) and m.name == M.name
    if isinstance(M, Lam):
        if not isinstance(m, Lam):
            return False
        _, body_m, body_M = align_binders(m.binder, m.body, M.binder, M.body)
        return approximates(body_m, body_M)
    if isinstance(M, App):
        return isinstance(m, App) and approximates(m.fun, M.fun) and approximates(m.arg, M.arg)
    if isinstance(M, Der):
        return isinstance(m, Der) and approximates(m.body, M.body)
    if isinstance(M, Bang):
        return isinstance(m, Bag) and all(approximates(e, M.body) for e in m.elements)
    if isinstance(M, ESub):
        if not isinstance(m, ESub) or not approximates(m.arg, M.arg):
            return False
        _, body_m, body_M = align_binders(m.binder, m.body, M.binder, M.body)
        return approximates(body_m, body_M)
    return False


@lru_cache(maxsize=None)
def approximants_of_size(M: Term, n: int) -> Tuple[Term, ...]:
    """大小恰为 n 的 M 的全部近似元 (生成顺序确定)"""
    if n < 1 or isinstance(M, Bot):
        return ()
    if isinstance(M, Var):
        return (M,) if n == 1 else ()
    if isinstance(M, Lam):
        return tuple(Lam(M.binder, b) for b in approximants_of_size(M.body, n - 1))
    if isinstance(M, Der):
        return tuple(Der(b) for b in approximants_of_size(M.body, n - 1))
    if isinstance(M, App):
        return tuple(
            App(f, a)
            for left in range(1, n - 1)
            for f in approximants_of_size(M.fun, left)
            for a in approximants_of_size(M.arg, n - 1 - left)
        )
    if isinstance(M, ESub):
        return tuple(
            ESub(b, a, M.binder)
            for left in range(1, n - 1)
            for b in approximants_of_size(M.body, left)
            for a in approximants_of_size(M.arg, n - 1 - left)
        )
    if isinstance(M, Bang):
        return tuple(Bag(elements) for elements in _bags(M.body, n - 1, 1, 0))
    return ()


def _bags(M: Term, total: int, min_size: int, min_index: int) -> Iterator[Tuple[Term, ...]]:
    if total == 0:
        yield ()
        return
    for s in range(min_size, total + 1):
        candidates = approximants_of_size(M, s)
        start = min_index if s == min_size else 0
        for i in range(start, len(candidates)):
            for rest in _bags(M, total - s, s, i):
                yield (candidates[i],) + rest


def taylor_enum(M: Term, size_cap: int) -> TaylorSet:
    """{m | m ⊲ M, |m| ≤ size_cap}"""
    if size_cap < 1:
        raise ValueError("size_cap must be >= 1")
    terms = [m for n in range(1, size_cap + 1) for m in approximants_of_size(M, n)]
    return TaylorSet(TermSet(terms), size_cap, True)


def taylor_nf(M: Term, size_cap: int, fuel: int = DEFAULT_NF_FUEL,
              cap: int = DEFAULT_REDUCT_CAP) -> TaylorSet:
    """
    Taylor 正规形 ⋃ nf(m) 在 size_cap 以内的部分.

    除 M 的近似元外也使用 fuel 步内 full 可达项的近似元 (它们的 Taylor 正规形相同),
    以找到来源很大的成员. 可达项中出现 full 正规形时结果完整.
    """
    if size_cap < 1:
        raise ValueError("size_cap must be >= 1")
    exploration = DBANG.explore(M, ContextClass.FULL, fuel, cap)
    result: Set[Term] = set()
    complete = False
    for source in exploration.terms:
        if DBANG.is_normal(source, ContextClass.FULL):
            complete = True
        result |= _nf_of_approximants(source, size_cap)
    logger.debug("taylor_nf(%s, %d): %d members from %d sources",
                 print_term(M), size_cap, len(result), len(exploration.terms))
    return TaylorSet(TermSet(result), size_cap, complete)


@lru_cache(maxsize=None)
def _nf_of_approximants(M: Term, size_cap: int) -> frozenset:
    found: Set[Term] = set()
    for m in taylor_enum(M, size_cap):
        found |= res_normal_forms(m).members
    return frozenset(t for t in found if size(t) <= size_cap)


# ---------------------------------------------------------------------------
# 性质检查
# ---------------------------------------------------------------------------

def _pull_cap(size_cap: int, factor: int) -> int:
    # 一步资源归约的来源至多为 factor * |n| + 2
    return max(0, (size_cap - 2) // factor)


def _sources(M: Term, cls: ContextClass, fuel: int) -> List[Term]:
    # fuel - 1 步内可达的项, 每个都检查它的所有一步归约
    if fuel < 1:
        raise ValueError("fuel must be >= 1")
    return list(DBANG.reducts(M, cls, fuel - 1))


def check_simulation_surface(M: Term, fuel: int = 1, size_cap: int = 8) -> CheckReport:
    """
    M →s N 时: 每个 m ⊲ M 在同一位置要么 →rs ∅ 要么 →rs 到某个 n ⊲ N;
    每个足够小的 n ⊲ N 都有 m ⊲ M 与 m →rs n.
    fuel > 1 时对 fuel - 1 步内的每个 surface 可达项做同样的检查.
    """
    pull_cap = _pull_cap(size_cap, 2)
    builder = ReportBuilder('simulation-surface', {'term': print_term(M), 'fuel': fuel, 'cap': size_cap})
    builder.detail('pull_cap', pull_cap)
    sources = _sources(M, ContextClass.SURFACE, fuel)
    builder.count('sources', len(sources))
    for source in sources:
        _simulate_surface(builder, source, size_cap, pull_cap)
    return builder.build()


def _simulate_surface(builder: ReportBuilder, M: Term, size_cap: int, pull_cap: int) -> None:
    approx_M = taylor_enum(M, size_cap)
    fans = {m: res_one_steps(m, ContextClass.SURFACE) for m in approx_M}
    for site, N in DBANG.one_steps(M, ContextClass.SURFACE):
        approx_N = taylor_enum(N, size_cap)
        pulled: Set[Term] = set()
        for m in approx_M:
            matching = [outcome for res_site, outcome in fans[m] if res_site.path == site.path]
            ok = any(outcome.is_empty() or all(n in approx_N for n in outcome) for outcome in matching)
            builder.expect(ok, f"{print_term(m)} ⊲ {print_term(M)} cannot follow {site.describe()}")
            for outcome in matching:
                pulled |= outcome.members
        if pull_cap:
            for n in taylor_enum(N, pull_cap):
                builder.expect(canonicalize(n) in pulled,
                               f"{print_term(n)} ⊲ {print_term(N)} has no surface source in T({print_term(M)})")


def copies_of(m: Term, M: Term, path: Tuple[int, ...]) -> List[Tuple[int, ...]]:
    """
    m ⊲ M 中与 M 的位置 path 对应的全部位置.

    经过 M 的 ! 时在 bag 的每个元素里各有一份, 空 bag 没有.
    """
    if not path:
        return [()]
    if isinstance(M, Bang):
        return [(i,) + rest
                for i, element in enumerate(m.elements)
                for rest in copies_of(element, M.body, path[1:])]
    i = path[0]
    return [(i,) + rest for rest in copies_of(children(m)[i], children(M)[i], path[1:])]


def contract_copies(m: Term, paths: List[Tuple[int, ...]]) -> TermSet:
    """在互不相交的 paths 上各做一次根资源归约; 任一处为 ∅ 则整体为 ∅"""
    current: Set[Term] = {m}
    for path in paths:
        following: Set[Term] = set()
        for t in current:
            step = res_root_step(subterm_at(t, path))
            if isinstance(step, NotRedex):
                raise ValueError(f"{print_term(subterm_at(t, path))} is not a resource redex")
            following |= {replace_at(t, path, r) for r in step.results}
        current = following
    return TermSet(current)


def _source_bound(n: Term, N: Term, site: RedexSite) -> int:
    # 与 n 对应的源近似元大小的上界
    bound = size(n)
    for path in copies_of(n, N, site.path):
        if site.kind is RedexKind.DISTANT_BETA:
            bound += 1
        elif site.kind is RedexKind.DER_FIRE:
            bound += 2
        else:
            bound += 2 + size(subterm_at(n, path))
    return bound


def check_simulation_full(M: Term, fuel: int = 1, size_cap: int = 8) -> CheckReport:
    """
    M →f N 时: 每个 m ⊲ M 在该 redex 的所有副本上同时归约, 结果为 ∅ 或全部 ⊲ N;
    每个 n ⊲ N 只要其源近似元不超过 size_cap, 就由某个 m ⊲ M 这样得到.
    fuel > 1 时对 fuel - 1 步内的每个 full 可达项做同样的检查.
    """
    builder = ReportBuilder('simulation-full', {'term': print_term(M), 'fuel': fuel, 'cap': size_cap})
    sources = _sources(M, ContextClass.FULL, fuel)
    builder.count('sources', len(sources))
    skipped = sum(_simulate_full(builder, source, size_cap) for source in sources)
    builder.detail('pull_skipped', skipped)
    return builder.build()


def _simulate_full(builder: ReportBuilder, M: Term, size_cap: int) -> int:
    approx_M = taylor_enum(M, size_cap)
    skipped = 0
    for site, N in DBANG.one_steps(M, ContextClass.FULL):
        approx_N = taylor_enum(N, size_cap)
        pulled: Set[Term] = set()
        for m in approx_M:
            outcome = contract_copies(m, copies_of(m, M, site.path))
            ok = outcome.is_empty() or all(n in approx_N for n in outcome)
            builder.expect(ok, f"{print_term(m)} ⊲ {print_term(M)} cannot follow {site.describe()} in parallel")
            pulled |= outcome.members
        for n in approx_N:
            if _source_bound(n, N, site) > size_cap:
                skipped += 1
                continue
            builder.expect(canonicalize(n) in pulled,
                           f"{print_term(n)} ⊲ {print_term(N)} has no parallel source in T({print_term(M)})")
    return skipped


def _rebind(core: Term, old: List[str], new: List[str]) -> Term:
    # 由内到外把列表绑定 old[i] 改名为 new[i]
    avoid = all_names(core) | set(old) | set(new)
    temps = []
    for name in old:
        temp = fresh_name(name, avoid)
        avoid |= {temp}
        temps.append(temp)
        core = rename(core, name, temp)
    for temp, name in zip(temps, new):
        core = rename(core, temp, name)
    return core


def check_context_decomposition(M: Term, size_cap: int = 8) -> CheckReport:
    """M = L⟨N⟩ 时每个 m ⊲ M 都拆成 l⟨n⟩, 其中 l ⊲ L 且 n ⊲ N"""
    subs, core = list_view(M)
    builder = ReportBuilder('context-decomposition', {'term': print_term(M), 'cap': size_cap})
    builder.detail('list_length', len(subs))
    for m in taylor_enum(M, size_cap):
        m_subs, m_core = list_view(m)
        if len(m_subs) != len(subs):
            builder.fail(f"{print_term(m)} has a list of length {len(m_subs)}, expected {len(subs)}")
            continue
        hole = Var(fresh_name('h', all_names(M) | all_names(m)))
        l, L = wrap(hole, m_subs), wrap(hole, subs)
        n = _rebind(m_core, [b for _, b in m_subs], [b for _, b in subs])
        builder.expect(approximates(l, L), f"{print_term(l)} does not approximate {print_term(L)}")
        builder.expect(approximates(n, core), f"{print_term(n)} does not approximate {print_term(core)}")
    return builder.build()


def check_nf_invariance(M: Term, fuel: int = 4, size_cap: int = 8) -> CheckReport:
    """
    (a) 每个 fuel 内的可达项 N 的 Taylor 正规形与 M 相同;
    (b) 每个 m ∈ T_nf(M) 都有可达项 M' 使 m ⊲ M'.
    """
    builder = ReportBuilder('nf-invariance', {'term': print_term(M), 'fuel': fuel, 'cap': size_cap})
    exploration = DBANG.explore(M, ContextClass.FULL, fuel)
    base = taylor_nf(M, size_cap, fuel=2 * fuel)
    for N in exploration.terms:
        other = taylor_nf(N, size_cap, fuel=2 * fuel)
        if other.terms == base.terms:
            builder.ok()
        elif base.complete_up_to_cap and other.complete_up_to_cap:
            builder.fail(f"T_nf({print_term(N)}) = {other.terms!r} but T_nf({print_term(M)}) = {base.terms!r}")
        else:
            builder.inconclusive(f"Taylor normal forms of {print_term(N)} differ within fuel {2 * fuel}")
    witnesses = DBANG.reducts(M, ContextClass.FULL, 2 * fuel)
    for m in base.terms:
        if any(approximates(m, source) for source in witnesses):
            builder.ok()
        else:
            builder.inconclusive(f"no reduct within fuel {2 * fuel} is approximated by {print_term(m)}")
    return builder.build()


def check_substitution_lemma(M: Term, x: str, N: Term, m: Term, bag: List[Term]) -> CheckReport:
    """m ⊲ M 且 bag 元素都 ⊲ N 时, m⟨bag/x⟩ 的每个成员 ⊲ M{N/x}"""
    builder = ReportBuilder('substitution', {
        'M': print_term(M), 'x': x, 'N': print_term(N), 'm': print_term(m),
        'bag': [print_term(e) for e in bag],
    })
    if not (approximates(m, M) and all(approximates(e, N) for e in bag)):
        builder.inconclusive("premises m ⊲ M and bag ⊲ N do not hold")
        return builder.build()
    target = substitute(M, x, N)
    for result in multilinear_substitute(m, x, bag):
        builder.expect(approximates(result, target),
                       f"{print_term(result)} does not approximate {print_term(target)}")
    return builder.build()


def substitution_lemma_backward(M: Term, x: str, N: Term, size_cap: int) -> CheckReport:
    """每个 p ⊲ M{N/x} (|p| ≤ cap) 都来自某个 m ⊲ M 与 bag ⊲ N"""
    builder = ReportBuilder('substitution-backward', {
        'M': print_term(M), 'x': x, 'N': print_term(N), 'cap': size_cap,
    })
    target = substitute(M, x, N)
    produced = set()
    approx_N = list(taylor_enum(N, size_cap))
    for m in taylor_enum(M, size_cap):
        k = occurrences(m, x)
        for bag in bags_from(approx_N, k, size_cap - size(m) + k):
            produced |= multilinear_substitute(m, x, bag).members
    for p in taylor_enum(target, size_cap):
        builder.expect(canonicalize(p) in produced,
                       f"{print_term(p)} ⊲ {print_term(target)} has no decomposition")
    return builder.build()


def bags_from(pool: List[Term], k: int, budget: int, start: int = 0) -> Iterator[List[Term]]:
    """从 pool 中可重复地取 k 个元素 (非降下标), 总大小不超过 budget"""
    if k == 0:
        yield []
        return
    for i in range(start, len(pool)):
        s = size(pool[i])
        if s > budget:
            continue
        for rest in bags_from(pool, k - 1, budget - s, i):
            yield [pool[i]] + rest


def resource_contexts(context: TestingContext, arg_cap: int) -> Iterator[TestingContext]:
    """T 的资源近似 t ⊲ T: 每个参数换成它的一个近似元"""
    options = []
    for frame in context.frames:
        approx = list(taylor_enum(frame.arg, arg_cap))
        if isinstance(frame, AppFrame):
            options.append([AppFrame(a) for a in approx])
        else:
            options.append([LamFrame(frame.binder, a) for a in approx])
    for frames in itertools.product(*options):
        yield TestingContext(tuple(frames))


def check_test_context_annihilation(M: Term, context: TestingContext, size_cap: int = 6,
                                    arg_cap: int = 4) -> CheckReport:
    """nf(m) = ∅ 的近似元放进任意 t ⊲ T 后仍然湮灭"""
    builder = ReportBuilder('context-annihilation', {
        'term': print_term(M), 'context': context.render(), 'cap': size_cap,
    })
    contexts = list(resource_contexts(context, arg_cap))
    builder.count('contexts', len(contexts))
    for m in taylor_enum(M, size_cap):
        if not res_normal_forms(m).is_empty():
            continue
        for t in contexts:
            plugged = plug_test_context(t, m)
            builder.expect(res_normal_forms(plugged).is_empty(),
                           f"{print_term(m)} annihilates but {print_term(plugged)} does not")
    return builder.build()
