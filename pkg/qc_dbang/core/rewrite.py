"""
dBang 归约: 经由显式替换列表的远程 redex, surface / full / internal 三类上下文,
带燃料的正规化, 可达集以及 factorization 检查.

RewriteSystem 是通用框架, dCBN / dCBV 在 lam 模块中复用它.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .errors import InvalidSiteError
from .report import CheckReport, ReportBuilder
from .syntax import (
    App, Bang, Der, ESub, Lam, Term, TermSet, Var, all_names, canonicalize, children,
    fresh_name, free_vars, print_term, rename, replace_at, subterm_at, substitute,
)

logger = logging.getLogger(__name__)

Subs = Tuple[Tuple[Term, str], ...]


class ContextClass(Enum):
    """归约上下文类别"""
    SURFACE = 'surface'
    FULL = 'full'
    INTERNAL = 'internal'


class RedexKind(Enum):
    DISTANT_BETA = 'DistantBeta'
    SUBST_FIRE = 'SubstFire'
    DER_FIRE = 'DerFire'


class NormalizeStatus(Enum):
    NORMAL_FORM = 'NormalForm'
    FUEL_EXHAUSTED = 'FuelExhausted'


@dataclass(frozen=True)
class RedexSite:
    """redex 的位置: 从根出发的子项下标路径"""
    path: Tuple[int, ...]
    kind: RedexKind
    context_class: ContextClass

    @property
    def key(self) -> Tuple[Tuple[int, ...], RedexKind]:
        """忽略上下文类别的位置标识"""
        return (self.path, self.kind)

    def describe(self) -> str:
        path = '.'.join(str(i) for i in self.path) or 'root'
        return f"{self.kind.value}@{path}"


@dataclass(frozen=True)
class TraceStep:
    index: int
    site: RedexSite
    term: Term

    def render(self) -> str:
        return f"step {self.index}: {self.site.describe()}  {print_term(self.term)}"


@dataclass
class NormalizeOutcome:
    result: Term
    status: NormalizeStatus
    steps_used: int
    trace: List[TraceStep] = field(default_factory=list)

    @property
    def is_normal(self) -> bool:
        return self.status is NormalizeStatus.NORMAL_FORM


# ---------------------------------------------------------------------------
# 列表上下文
# ---------------------------------------------------------------------------

def list_view(t: Term) -> Tuple[Subs, Term]:
    """拆出最外层显式替换链: 返回 (由内到外的 (arg, binder), core)"""
    subs: List[Tuple[Term, str]] = []
    while isinstance(t, ESub):
        subs.append((t.arg, t.binder))
        t = t.body
    subs.reverse()
    return tuple(subs), t


def wrap(core: Term, subs: Subs) -> Term:
    """L⟨core⟩"""
    for arg, binder in subs:
        core = ESub(core, arg, binder)
    return core


def freshen_list(subs: Subs, core: Term, avoid) -> Tuple[Subs, Term]:
    """
    重命名列表上下文的绑定, 使其不与 avoid 冲突; 用于把 L 移到别的项外面.
    第 i 个绑定的作用域是 core 与更内层的参数.
    """
    subs_list = list(subs)
    avoid = set(avoid)
    for i, (arg, binder) in enumerate(subs_list):
        if binder not in avoid:
            continue
        taken = set(avoid) | all_names(core)
        for inner_arg, inner_binder in subs_list:
            taken |= all_names(inner_arg) | {inner_binder}
        new = fresh_name(binder, taken)
        # 内层同名绑定遮蔽的部分不改名
        if not any(subs_list[k][1] == binder for k in range(i)):
            core = rename(core, binder, new)
        for j in range(i):
            if any(subs_list[k][1] == binder for k in range(j + 1, i)):
                continue
            inner_arg, inner_binder = subs_list[j]
            subs_list[j] = (rename(inner_arg, binder, new), inner_binder)
        subs_list[i] = (arg, new)
    return tuple(subs_list), core


# ---------------------------------------------------------------------------
# testing context  T := □ | T N | (λx T) N
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AppFrame:
    arg: Term


@dataclass(frozen=True)
class LamFrame:
    binder: str
    arg: Term


Frame = Union[AppFrame, LamFrame]

HOLE = '□'


@dataclass(frozen=True)
class TestingContext:
    """frames 由内到外排列; 空元组即 □"""
    frames: Tuple[Frame, ...] = ()

    __test__ = False

    def plug(self, t: Term) -> Term:
        for frame in self.frames:
            if isinstance(frame, AppFrame):
                t = App(t, frame.arg)
            else:
                t = App(Lam(frame.binder, t), frame.arg)
        return t

    def render(self) -> str:
        return print_term(self.plug(Var(HOLE)))

    def __len__(self) -> int:
        return len(self.frames)


# ---------------------------------------------------------------------------
# 通用重写系统
# ---------------------------------------------------------------------------

class RewriteSystem:
    """
    基于根 redex 识别与收缩的重写系统.

    子类实现 root_redex / contract / is_surface_child; 其余操作
    (find_redexes, step_at, normalize, reducts) 在此统一实现.
    """
    name = 'abstract'

    def root_redex(self, t: Term) -> Optional[RedexKind]:
        raise NotImplementedError

    def contract(self, t: Term, kind: RedexKind) -> Term:
        raise NotImplementedError

    def is_surface_child(self, t: Term, index: int) -> bool:
        raise NotImplementedError

    # -- sites
    def find_redexes(self, t: Term, cls: ContextClass = ContextClass.FULL) -> List[RedexSite]:
        """按 leftmost-outermost (先序) 列出该类别的全部 redex 位置"""
        sites: List[RedexSite] = []
        self._collect(t, (), True, cls, sites)
        return sites

    def _collect(self, t: Term, path: Tuple[int, ...], surface: bool,
                 cls: ContextClass, out: List[RedexSite]) -> None:
        kind = self.root_redex(t)
        if kind is not None and self._admits(surface, cls):
            out.append(RedexSite(path, kind, cls))
        for i, child in enumerate(children(t)):
            child_surface = surface and self.is_surface_child(t, i)
            if cls is ContextClass.SURFACE and not child_surface:
                continue
            self._collect(child, path + (i,), child_surface, cls, out)

    @staticmethod
    def _admits(surface: bool, cls: ContextClass) -> bool:
        if cls is ContextClass.SURFACE:
            return surface
        if cls is ContextClass.INTERNAL:
            return not surface
        return True

    def _path_is_surface(self, t: Term, path: Sequence[int]) -> bool:
        for i in path:
            if not self.is_surface_child(t, i):
                return False
            t = children(t)[i]
        return True

    def is_normal(self, t: Term, cls: ContextClass = ContextClass.FULL) -> bool:
        return not self.find_redexes(t, cls)

    def step_at(self, t: Term, site: RedexSite) -> Term:
        """在给定位置收缩; 位置不合法时抛出 InvalidSiteError"""
        try:
            sub = subterm_at(t, site.path)
        except (IndexError, TypeError):
            raise InvalidSiteError(f"path {site.path} does not exist in {print_term(t)}")
        kind = self.root_redex(sub)
        if kind is not site.kind:
            raise InvalidSiteError(
                f"no {site.kind.value} redex at {site.describe()} in {print_term(t)}"
            )
        if not self._admits(self._path_is_surface(t, site.path), site.context_class):
            raise InvalidSiteError(
                f"{site.describe()} is not a {site.context_class.value} position"
            )
        return replace_at(t, site.path, self.contract(sub, kind))

    def one_steps(self, t: Term, cls: ContextClass = ContextClass.FULL) -> List[Tuple[RedexSite, Term]]:
        return [(site, self.step_at(t, site)) for site in self.find_redexes(t, cls)]

    # -- 正规化与可达集
    def normalize(self, t: Term, cls: ContextClass = ContextClass.FULL, fuel: int = 100,
                  trace: bool = False) -> NormalizeOutcome:
        """反复收缩第一个 redex, 直到正规形或燃料耗尽"""
        steps: List[TraceStep] = []
        for used in range(fuel + 1):
            sites = self.find_redexes(t, cls)
            if not sites:
                return NormalizeOutcome(t, NormalizeStatus.NORMAL_FORM, used, steps)
            if used == fuel:
                break
            t = self.step_at(t, sites[0])
            if trace:
                steps.append(TraceStep(used + 1, sites[0], t))
        logger.debug("%s: fuel %d exhausted at %s", self.name, fuel, print_term(t))
        return NormalizeOutcome(t, NormalizeStatus.FUEL_EXHAUSTED, fuel, steps)

    def reducts(self, t: Term, cls: ContextClass = ContextClass.FULL, fuel: int = 10,
                cap: int = 500) -> TermSet:
        """
        fuel 步内可达的全部项 (广度优先). 达到 cap 或者最后一层还能产生新项时
        truncated 为 True.
        """
        return self.explore(t, cls, fuel, cap).terms

    def explore(self, t: Term, cls: ContextClass = ContextClass.FULL, fuel: int = 10,
                cap: int = 500) -> 'Exploration':
        start = canonicalize(t)
        depth: Dict[Term, int] = {start: 0}
        frontier = [start]
        truncated = False
        for level in range(1, fuel + 2):
            next_frontier = []
            for term in frontier:
                for _, reduct in self.one_steps(term, cls):
                    key = canonicalize(reduct)
                    if key in depth:
                        continue
                    if level > fuel or len(depth) >= cap:
                        truncated = True
                        break
                    depth[key] = level
                    next_frontier.append(key)
                if truncated:
                    break
            if truncated or not next_frontier:
                break
            frontier = next_frontier
        if truncated:
            logger.debug("%s: reducts of %s truncated (fuel %d, cap %d)",
                         self.name, print_term(t), fuel, cap)
        return Exploration(TermSet(depth, truncated=truncated), depth)


@dataclass
class Exploration:
    """reducts 的结果及每个项的最短距离"""
    terms: TermSet
    depth: Dict[Term, int]

    @property
    def truncated(self) -> bool:
        return self.terms.truncated

    def normal_forms(self, system: RewriteSystem, cls: ContextClass) -> List[Term]:
        return [t for t in self.terms if system.is_normal(t, cls)]


class DBangSystem(RewriteSystem):
    """dBang 的三条规则 (dB, s!, d!)"""
    name = 'dbang'

    def root_redex(self, t: Term) -> Optional[RedexKind]:
        if isinstance(t, App):
            if isinstance(list_view(t.fun)[1], Lam):
                return RedexKind.DISTANT_BETA
        elif isinstance(t, ESub):
            if isinstance(list_view(t.arg)[1], Bang):
                return RedexKind.SUBST_FIRE
        elif isinstance(t, Der):
            if isinstance(list_view(t.body)[1], Bang):
                return RedexKind.DER_FIRE
        return None

    def contract(self, t: Term, kind: RedexKind) -> Term:
        if kind is RedexKind.DISTANT_BETA:
            # L⟨λx.M⟩ N → L⟨M[N/x]⟩
            subs, core = list_view(t.fun)
            subs, core = freshen_list(subs, core, free_vars(t.arg))
            return wrap(ESub(core.body, t.arg, core.binder), subs)
        if kind is RedexKind.SUBST_FIRE:
            # M[L⟨!N⟩/x] → L⟨M{N/x}⟩
            subs, core = list_view(t.arg)
            subs, core = freshen_list(subs, core, free_vars(t.body) - {t.binder})
            return wrap(substitute(t.body, t.binder, core.body), subs)
        # der L⟨!M⟩ → L⟨M⟩
        subs, core = list_view(t.body)
        return wrap(core.body, subs)

    def is_surface_child(self, t: Term, index: int) -> bool:
        return not isinstance(t, Bang)


DBANG = DBangSystem()


# ---------------------------------------------------------------------------
# 模块级操作
# ---------------------------------------------------------------------------

def root_redex(t: Term) -> Optional[RedexKind]:
    return DBANG.root_redex(t)


def find_redexes(t: Term, cls: ContextClass = ContextClass.FULL) -> List[RedexSite]:
    return DBANG.find_redexes(t, cls)


def step_at(t: Term, site: RedexSite) -> Term:
    return DBANG.step_at(t, site)


def normalize(t: Term, cls: ContextClass = ContextClass.FULL, fuel: int = 100,
              trace: bool = False) -> NormalizeOutcome:
    return DBANG.normalize(t, cls, fuel, trace)


def reducts(t: Term, cls: ContextClass = ContextClass.FULL, fuel: int = 10, cap: int = 500) -> TermSet:
    return DBANG.reducts(t, cls, fuel, cap)


def is_normal(t: Term, cls: ContextClass = ContextClass.FULL) -> bool:
    return DBANG.is_normal(t, cls)


def check_factorization(t: Term, fuel: int = 10, window: int = 3, cap: int = 500) -> CheckReport:
    """
    对每个 full 可达项 N 寻找 P 使 M →s* P →i* N.
    只有 surface 与 internal 搜索都完整时才判定失败.
    """
    builder = ReportBuilder('factorization', {'term': print_term(t), 'fuel': fuel, 'window': window})
    targets = DBANG.reducts(t, ContextClass.FULL, fuel, cap)
    surface = DBANG.reducts(t, ContextClass.SURFACE, fuel * window, cap)
    covered = set()
    complete = not surface.truncated
    for p in surface:
        internal = DBANG.reducts(p, ContextClass.INTERNAL, fuel * window, cap)
        complete = complete and not internal.truncated
        covered |= internal.members
    builder.count('targets', len(targets))
    builder.count('surface_reducts', len(surface))
    for n in targets:
        if canonicalize(n) in covered:
            builder.ok()
        elif complete:
            builder.fail(f"{print_term(n)} has no surface-then-internal factorization")
        else:
            builder.inconclusive(f"no factorization of {print_term(n)} within window x{window}")
    return builder.build()


def check_confluence(t: Term, cls: ContextClass = ContextClass.FULL, fuel: int = 10,
                     cap: int = 500) -> CheckReport:
    """一步分叉在 fuel 内可汇合"""
    builder = ReportBuilder('confluence', {'term': print_term(t), 'class': cls.value, 'fuel': fuel})
    branches = [reduct for _, reduct in DBANG.one_steps(t, cls)]
    closures = [DBANG.reducts(b, cls, fuel, cap) for b in branches]
    for i in range(len(branches)):
        for j in range(i + 1, len(branches)):
            left, right = closures[i], closures[j]
            if not (left & right).is_empty():
                builder.ok()
            elif left.truncated or right.truncated:
                builder.inconclusive(
                    f"{print_term(branches[i])} and {print_term(branches[j])} not joined within fuel {fuel}"
                )
            else:
                builder.fail(f"{print_term(branches[i])} and {print_term(branches[j])} do not join")
    return builder.build()

