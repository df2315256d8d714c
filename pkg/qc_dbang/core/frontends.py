"""
dCBN / dCBV 前端: 翻译 ()^n 与 ()^v, 片段 dBang_N / dBang_V, 正规形形状,
∘_k 族, 各模式的 Taylor 关系与 Böhm 近似, 以及 meaningfulness 见证构造.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterator, List, Optional, Sequence, Set, Tuple, Union

from .bohm import bot_leq, bt_truncate, join
from .errors import InvariantViolation, NotNormalError
from .lam import Mode, lam_normalize, lam_reducts, system_for
from .report import CheckReport, ReportBuilder
from .resource import is_res_normal
from .rewrite import (
    DBANG, AppFrame, ContextClass, LamFrame, TestingContext, list_view, wrap,
)
from .syntax import (
    BOT, App, Bag, Bang, Bot, Der, ESub, Lam, Language, Term, TermSet, Var,
    all_names, alpha_eq, canonicalize, enumerate_terms, free_vars, fresh_name,
    is_value, print_term, sort_key,
)
from .taylor import DEFAULT_REDUCT_CAP, TaylorSet, align_binders, taylor_enum, taylor_nf

logger = logging.getLogger(__name__)

DEFAULT_FUEL_FACTOR = 3

ModeLike = Union[Mode, str]


# ---------------------------------------------------------------------------
# 翻译
# ---------------------------------------------------------------------------

def translate(M: Term, mode: ModeLike) -> Term:
    """()^n 或 ()^v; ⊥ 翻译为 ⊥"""
    return _cbn(M) if Mode.parse(mode) is Mode.CBN else _cbv(M)


def _cbn(M: Term) -> Term:
    if isinstance(M, (Var, Bot)):
        return M
    if isinstance(M, Lam):
        return Lam(M.binder, _cbn(M.body))
    if isinstance(M, App):
        return App(_cbn(M.fun), Bang(_cbn(M.arg)))
    if isinstance(M, ESub):
        return ESub(_cbn(M.body), Bang(_cbn(M.arg)), M.binder)
    raise TypeError(f"not a lambda term: {M!r}")


def _cbv(M: Term) -> Term:
    if isinstance(M, Bot):
        return M
    if isinstance(M, Var):
        return Bang(M)
    if isinstance(M, Lam):
        return Bang(Lam(M.binder, _cbv(M.body)))
    if isinstance(M, App):
        fun = _cbv(M.fun)
        subs, core = list_view(fun)
        if isinstance(core, Bang):
            # 消去翻译产生的 der ! 对
            return App(wrap(core.body, subs), _cbv(M.arg))
        return App(Der(fun), _cbv(M.arg))
    if isinstance(M, ESub):
        return ESub(_cbv(M.body), _cbv(M.arg), M.binder)
    raise TypeError(f"not a lambda term: {M!r}")


# ---------------------------------------------------------------------------
# 片段
# ---------------------------------------------------------------------------

def fragment_check(M: Term, mode: ModeLike) -> bool:
    return _in_fragment_n(M) if Mode.parse(mode) is Mode.CBN else _in_fragment_v(M)


def _in_fragment_n(M: Term) -> bool:
    """M_n := x | λx M_n | M_n !M_n | M_n[!M_n/x]"""
    if isinstance(M, Var):
        return True
    if isinstance(M, Lam):
        return _in_fragment_n(M.body)
    if isinstance(M, App):
        return _in_fragment_n(M.fun) and isinstance(M.arg, Bang) and _in_fragment_n(M.arg.body)
    if isinstance(M, ESub):
        return _in_fragment_n(M.body) and isinstance(M.arg, Bang) and _in_fragment_n(M.arg.body)
    return False


def _in_fragment_v(M: Term) -> bool:
    """
    M_v := !x | !(λx M_v) | L_v⟨λx M_v⟩ M_v | L_v⟨x⟩ M_v | der(M_v) M_v | M_v[M_v/x]
    L_v := □ | L_v[M_v/x]
    """
    if isinstance(M, Bang):
        body = M.body
        return isinstance(body, Var) or (isinstance(body, Lam) and _in_fragment_v(body.body))
    if isinstance(M, ESub):
        return _in_fragment_v(M.body) and _in_fragment_v(M.arg)
    if isinstance(M, App):
        if not _in_fragment_v(M.arg):
            return False
        if isinstance(M.fun, Der):
            return _in_fragment_v(M.fun.body)
        subs, core = list_view(M.fun)
        if not all(_in_fragment_v(arg) for arg, _ in subs):
            return False
        return isinstance(core, Var) or (isinstance(core, Lam) and _in_fragment_v(core.body))
    return False


# ---------------------------------------------------------------------------
# 正规形形状
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CbnShape:
    """λx1…xk.(x) !N1…!Nl; 资源层面参数是 bag"""
    lams: Tuple[str, ...]
    head: str
    args: Tuple[Term, ...]

    @property
    def head_index(self) -> Optional[int]:
        """绑定头变量的最内层 λ 的下标 (从 0 开始), 自由时为 None"""
        for i in range(len(self.lams) - 1, -1, -1):
            if self.lams[i] == self.head:
                return i
        return None


@dataclass(frozen=True)
class CbvShapeB:
    term: Term


@dataclass(frozen=True)
class CbvShapeBBang:
    term: Term


@dataclass(frozen=True)
class NotShaped:
    reason: str


NfShape = Union[CbnShape, CbvShapeB, CbvShapeBBang, NotShaped]


def cbn_shape(t: Term, level: str = 'term') -> Optional[CbnShape]:
    lams: List[str] = []
    while isinstance(t, Lam):
        lams.append(t.binder)
        t = t.body
    args: List[Term] = []
    while isinstance(t, App):
        if level == 'term' and isinstance(t.arg, Bang):
            args.append(t.arg.body)
        elif level == 'resource' and isinstance(t.arg, Bag):
            args.append(t.arg)
        else:
            return None
        t = t.fun
    if not isinstance(t, Var):
        return None
    return CbnShape(tuple(lams), t.name, tuple(reversed(args)))


def _in_cbv_b(t: Term, relaxed: bool = False) -> bool:
    """B := B_! | !λx B | !x | L⟨B⟩,  L := □ | L[B_!/x]"""
    if _in_cbv_b_bang(t, relaxed):
        return True
    if isinstance(t, Bang):
        body = t.body
        return relaxed or isinstance(body, Var) or (isinstance(body, Lam) and _in_cbv_b(body.body, relaxed))
    if isinstance(t, ESub):
        return _in_cbv_b_bang(t.arg, relaxed) and _in_cbv_b(t.body, relaxed)
    return False


def _in_cbv_b_bang(t: Term, relaxed: bool = False) -> bool:
    """B_! := L⟨x⟩ B | der(B_!) B | L⟨B_!⟩"""
    if isinstance(t, App):
        if not _in_cbv_b(t.arg, relaxed):
            return False
        if isinstance(t.fun, Der):
            return _in_cbv_b_bang(t.fun.body, relaxed)
        subs, core = list_view(t.fun)
        return isinstance(core, Var) and all(_in_cbv_b_bang(arg, relaxed) for arg, _ in subs)
    if isinstance(t, ESub):
        return _in_cbv_b_bang(t.arg, relaxed) and _in_cbv_b_bang(t.body, relaxed)
    return False


def _in_res_b(t: Term) -> bool:
    """b := b_! | [λx b, …] | [x, …, x] | l⟨b⟩"""
    if _in_res_b_bang(t):
        return True
    if isinstance(t, Bag):
        if all(isinstance(e, Lam) and _in_res_b(e.body) for e in t.elements):
            return True
        return all(isinstance(e, Var) for e in t.elements) and len({e.name for e in t.elements}) <= 1
    if isinstance(t, ESub):
        return _in_res_b_bang(t.arg) and _in_res_b(t.body)
    return False


def _in_res_b_bang(t: Term) -> bool:
    """b_! := l⟨x⟩ b | der(b_!) b | l⟨b_!⟩"""
    if isinstance(t, App):
        if not _in_res_b(t.arg):
            return False
        if isinstance(t.fun, Der):
            return _in_res_b_bang(t.fun.body)
        subs, core = list_view(t.fun)
        return isinstance(core, Var) and all(_in_res_b_bang(arg) for arg, _ in subs)
    if isinstance(t, ESub):
        return _in_res_b_bang(t.arg) and _in_res_b_bang(t.body)
    return False


def classify_nf(M: Term, mode: ModeLike, level: str = 'term') -> NfShape:
    """正规形的形状; 输入不是正规形时抛出 NotNormalError"""
    if level not in ('term', 'resource'):
        raise ValueError(f"level must be 'term' or 'resource', got {level!r}")
    normal = is_res_normal(M) if level == 'resource' else DBANG.is_normal(M, ContextClass.FULL)
    if not normal:
        raise NotNormalError(f"{print_term(M)} is not a {level} normal form")
    if Mode.parse(mode) is Mode.CBN:
        shape = cbn_shape(M, level)
        return shape if shape is not None else NotShaped("not of shape λx1…xk.(x) !N1…!Nl")
    bang_sort, b_sort = (_in_res_b_bang, _in_res_b) if level == 'resource' else (_in_cbv_b_bang, _in_cbv_b)
    if bang_sort(M):
        return CbvShapeBBang(M)
    if b_sort(M):
        return CbvShapeB(M)
    return NotShaped("outside the call-by-value normal form grammar")


def circ(k: int) -> Term:
    """∘_0 = λx0.x0,  ∘_{k+1} = λx_{k+1}.!∘_k"""
    if k < 0:
        raise ValueError("k must be >= 0")
    term: Term = Lam('x0', Var('x0'))
    for i in range(1, k + 1):
        term = Lam(f"x{i}", Bang(term))
    return term


# ---------------------------------------------------------------------------
# meaningfulness 见证
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Witness:
    context: TestingContext
    steps: int
    strategy: str
    result: Term

    def render(self) -> str:
        return self.context.render()


@dataclass(frozen=True)
class Unknown:
    reason: str


WitnessResult = Union[Witness, Unknown]


class _Budget:
    """所有验证尝试共享的步数预算"""

    def __init__(self, steps: int):
        self.left = steps

    def spend(self, n: int) -> None:
        self.left = max(0, self.left - n)


def _reach_bang(t: Term, budget: _Budget) -> Optional[Tuple[int, Term]]:
    """surface 归约直到根部是 bang; 返回 (步数, 结果)"""
    for used in range(budget.left + 1):
        if isinstance(t, Bang):
            budget.spend(used)
            return used, t
        sites = DBANG.find_redexes(t, ContextClass.SURFACE)
        if not sites or used == budget.left:
            budget.spend(used)
            return None
        t = DBANG.step_at(t, sites[0])
    return None


def _fresh_names(base: str, count: int, avoid: Set[str]) -> List[str]:
    names = []
    for i in range(count):
        name = f"{base}{i}"
        while name in avoid:
            name = fresh_name(name, avoid)
        avoid.add(name)
        names.append(name)
    return names


def _cbn_context(shape: CbnShape, avoid: Set[str]) -> TestingContext:
    k, l = len(shape.lams), len(shape.args)
    zs = _fresh_names('z', k + 1, avoid)
    ys = _fresh_names('y', l, avoid)
    W: Term = Bang(Var(zs[0]))
    for y in reversed(ys):
        W = Lam(y, W)
    index = shape.head_index
    if index is not None:
        args = [W if j == index else Var(zs[j + 1]) for j in range(k)]
        return TestingContext(tuple(AppFrame(Bang(a)) for a in args))
    frames: List = [LamFrame(shape.head, Bang(W))]
    frames += [AppFrame(Bang(Var(z))) for z in zs[1:]]
    return TestingContext(tuple(frames))


def _try(M: Term, context: TestingContext, strategy: str, budget: _Budget) -> Optional[Witness]:
    reached = _reach_bang(context.plug(M), budget)
    if reached is None:
        return None
    steps, result = reached
    logger.debug("witness %s for %s via %s in %d steps", context.render(), print_term(M), strategy, steps)
    return Witness(context, steps, strategy, result)


def _cbn_path(M: Term, fuel: int, budget: _Budget) -> Optional[Witness]:
    outcome = DBANG.normalize(M, ContextClass.SURFACE, fuel)
    if not outcome.is_normal:
        return None
    shape = cbn_shape(outcome.result)
    if shape is None:
        return None
    context = _cbn_context(shape, set(all_names(M)) | set(all_names(outcome.result)))
    return _try(M, context, 'cbn', budget)


def _cbv_path(M: Term, fuel: int, budget: _Budget, max_depth: int) -> Optional[Witness]:
    outcome = DBANG.normalize(M, ContextClass.FULL, fuel)
    if outcome.is_normal and _in_cbv_b(outcome.result):
        target = outcome.result
    else:
        surface = DBANG.normalize(M, ContextClass.SURFACE, fuel)
        if not (surface.is_normal and _in_cbv_b(surface.result, relaxed=True)):
            return None
        target = surface.result
    variables = sorted(free_vars(target))
    for c in range(max_depth + 1):
        if budget.left <= 0:
            return None
        context = TestingContext(tuple(LamFrame(x, Bang(circ(c))) for x in reversed(variables)))
        found = _try(M, context, 'cbv', budget)
        if found is not None:
            return found
    return None


def _feed_path(M: Term, fuel: int, budget: _Budget) -> Optional[Witness]:
    """surface 正规形是 λx1…xk.!P 一类时, 直接喂入 k 个新的 bang 变量"""
    outcome = DBANG.normalize(M, ContextClass.SURFACE, fuel)
    if not outcome.is_normal:
        return None
    k, t = 0, outcome.result
    while isinstance(t, Lam):
        k, t = k + 1, t.body
    if k == 0:
        return None
    zs = _fresh_names('z', k, set(all_names(M)))
    return _try(M, TestingContext(tuple(AppFrame(Bang(Var(z))) for z in zs)), 'feed', budget)


def meaningful_witness(M: Term, mode_hint: Optional[ModeLike] = None, fuel: int = 50,
                       search_budget: int = 200, max_depth: int = 6) -> WitnessResult:
    """
    寻找 testing context T 使 T⟨M⟩ →s* !P. 只在验证成功后返回 Witness;
    预算耗尽时返回 Unknown, 从不断言 M 无意义.
    """
    budget = _Budget(search_budget)
    trivial = _try(M, TestingContext(), 'bang', _Budget(min(fuel, search_budget)))
    if trivial is not None:
        return trivial
    order = [Mode.CBN, Mode.CBV]
    if mode_hint is not None and Mode.parse(mode_hint) is Mode.CBV:
        order.reverse()
    for mode in order:
        if mode is Mode.CBN:
            found = _cbn_path(M, fuel, budget)
        else:
            found = _cbv_path(M, fuel, budget, max_depth)
        if found is not None:
            return found
    found = _feed_path(M, fuel, budget)
    if found is not None:
        return found
    return Unknown(f"no testing context found within fuel {fuel} and budget {search_budget}")


def _lam_id() -> Term:
    return Lam('u', Var('u'))


def lam_meaningful_witness(M: Term, mode: ModeLike, fuel: int = 50,
                           search_budget: int = 200) -> WitnessResult:
    """
    dCBN: 寻找 T 使 T⟨M⟩ →n* λx.x;  dCBV: 寻找 T 使 T⟨M⟩ →v* 某个值.
    """
    mode = Mode.parse(mode)
    if mode is Mode.CBN:
        return _lam_cbn_witness(M, fuel, search_budget)
    return _lam_cbv_witness(M, fuel, search_budget)


def _lam_cbn_witness(M: Term, fuel: int, search_budget: int) -> WitnessResult:
    head = lam_normalize(M, Mode.CBN, ContextClass.SURFACE, fuel)
    if not head.is_normal:
        return Unknown(f"no head normal form within fuel {fuel}")
    lams: List[str] = []
    t = head.result
    while isinstance(t, Lam):
        lams.append(t.binder)
        t = t.body
    args = 0
    while isinstance(t, App):
        args, t = args + 1, t.fun
    if not isinstance(t, Var):
        return Unknown(f"{print_term(head.result)} is not a head normal form")
    avoid = set(all_names(M))
    ys = _fresh_names('y', args, avoid)
    eraser: Term = _lam_id()
    for y in reversed(ys):
        eraser = Lam(y, eraser)
    bound = [i for i, x in enumerate(lams) if x == t.name]
    if bound:
        frames = [AppFrame(eraser if i == bound[-1] else _lam_id()) for i in range(len(lams))]
    else:
        frames = [LamFrame(t.name, eraser)] + [AppFrame(_lam_id()) for _ in lams]
    context = TestingContext(tuple(frames))
    outcome = lam_normalize(context.plug(M), Mode.CBN, ContextClass.SURFACE, search_budget)
    if outcome.is_normal and alpha_eq(outcome.result, _lam_id()):
        return Witness(context, outcome.steps_used, 'dcbn', outcome.result)
    return Unknown(f"context {context.render()} does not reach the identity within {search_budget} steps")


def _lam_cbv_witness(M: Term, fuel: int, search_budget: int) -> WitnessResult:
    variables = sorted(free_vars(M))
    value: Term = _lam_id()
    budget = _Budget(search_budget)
    for _ in range(4):
        context = TestingContext(tuple(LamFrame(x, value) for x in reversed(variables)))
        outcome = lam_normalize(context.plug(M), Mode.CBV, ContextClass.SURFACE, min(fuel, budget.left))
        budget.spend(outcome.steps_used)
        if outcome.is_normal and is_value(outcome.result):
            return Witness(context, outcome.steps_used, 'dcbv', outcome.result)
        if not variables or budget.left <= 0:
            break
        value = Lam(fresh_name('w', all_names(value)), value)
    return Unknown(f"no value reached within fuel {fuel} and budget {search_budget}")


# ---------------------------------------------------------------------------
# 各模式的 Taylor 关系
# ---------------------------------------------------------------------------

def lam_approximates(m: Term, M: Term, mode: ModeLike) -> bool:
    mode = Mode.parse(mode)
    return _approx_n(m, M) if mode is Mode.CBN else _approx_v(m, M)


def _approx_bag(m: Term, M: Term, rel: Callable[[Term, Term], bool]) -> bool:
    return isinstance(m, Bag) and all(rel(e, M) for e in m.elements)


def _approx_n(m: Term, M: Term) -> bool:
    if isinstance(M, Var):
        return isinstance(m, Var) and m.name == M.name
    if isinstance(M, Lam):
        if not isinstance(m, Lam):
            return False
        _, body_m, body_M = align_binders(m.binder, m.body, M.binder, M.body)
        return _approx_n(body_m, body_M)
    if isinstance(M, App):
        return isinstance(m, App) and _approx_n(m.fun, M.fun) and _approx_bag(m.arg, M.arg, _approx_n)
    if isinstance(M, ESub):
        if not isinstance(m, ESub) or not _approx_bag(m.arg, M.arg, _approx_n):
            return False
        _, body_m, body_M = align_binders(m.binder, m.body, M.binder, M.body)
        return _approx_n(body_m, body_M)
    return False


def _approx_v(m: Term, M: Term) -> bool:
    if isinstance(M, Var):
        return isinstance(m, Bag) and all(isinstance(e, Var) and e.name == M.name for e in m.elements)
    if isinstance(M, Lam):
        return _approx_bag(m, M, _approx_v_value)
    if isinstance(M, App):
        if not isinstance(m, App) or not _approx_v(m.arg, M.arg):
            return False
        if is_value(list_view(M.fun)[1]):
            return _approx_v_head(m.fun, M.fun)
        return isinstance(m.fun, Der) and _approx_v(m.fun.body, M.fun)
    if isinstance(M, ESub):
        if not isinstance(m, ESub) or not _approx_v(m.arg, M.arg):
            return False
        _, body_m, body_M = align_binders(m.binder, m.body, M.binder, M.body)
        return _approx_v(body_m, body_M)
    return False


def _approx_v_value(m: Term, V: Term) -> bool:
    """[m] ⊲v V 的单元素版本"""
    if isinstance(V, Var):
        return isinstance(m, Var) and m.name == V.name
    if not isinstance(m, Lam):
        return False
    _, body_m, body_V = align_binders(m.binder, m.body, V.binder, V.body)
    return _approx_v(body_m, body_V)


def _approx_v_head(m: Term, H: Term) -> bool:
    """m ⊲ L⟨V⟩ 作为函数部分: l 逐个近似 L, 核心是 V 的单元素近似"""
    if isinstance(H, ESub):
        if not isinstance(m, ESub) or not _approx_v(m.arg, H.arg):
            return False
        _, body_m, body_H = align_binders(m.binder, m.body, H.binder, H.body)
        return _approx_v_head(body_m, body_H)
    return _approx_v_value(m, H)


def _compose(total: int, gens: Sequence[Callable[[int], Sequence[Term]]]) -> Iterator[Tuple[Term, ...]]:
    """把 total 个节点分给各部分 (每部分至少 1)"""
    if not gens:
        if total == 0:
            yield ()
        return
    first, rest = gens[0], gens[1:]
    for s in range(1, total - len(rest) + 1):
        for t in first(s):
            for tail in _compose(total - s, rest):
                yield (t,) + tail


def _multisets(total: int, gen: Callable[[int], Sequence[Term]],
               min_size: int = 1, min_index: int = 0) -> Iterator[Tuple[Term, ...]]:
    if total == 0:
        yield ()
        return
    for s in range(min_size, total + 1):
        candidates = gen(s)
        start = min_index if s == min_size else 0
        for i in range(start, len(candidates)):
            for rest in _multisets(total - s, gen, s, i):
                yield (candidates[i],) + rest


@lru_cache(maxsize=None)
def _lam_approx(M: Term, mode: Mode, n: int) -> Tuple[Term, ...]:
    if n < 1 or isinstance(M, Bot):
        return ()

    def sub(term: Term) -> Callable[[int], Tuple[Term, ...]]:
        return lambda s: _lam_approx(term, mode, s)

    if mode is Mode.CBN:
        def bag_of(term: Term) -> Callable[[int], Tuple[Term, ...]]:
            return lambda s: tuple(Bag(es) for es in _multisets(s - 1, sub(term)))

        if isinstance(M, Var):
            return (M,) if n == 1 else ()
        if isinstance(M, Lam):
            return tuple(Lam(M.binder, b) for b in _lam_approx(M.body, mode, n - 1))
        if isinstance(M, App):
            return tuple(App(f, a) for f, a in _compose(n - 1, [sub(M.fun), bag_of(M.arg)]))
        if isinstance(M, ESub):
            return tuple(ESub(b, a, M.binder) for b, a in _compose(n - 1, [sub(M.body), bag_of(M.arg)]))
        return ()

    if isinstance(M, Var):
        return (Bag((M,) * (n - 1)),)
    if isinstance(M, Lam):
        def element(s: int) -> Tuple[Term, ...]:
            return tuple(Lam(M.binder, b) for b in _lam_approx(M.body, mode, s - 1))
        return tuple(Bag(es) for es in _multisets(n - 1, element))
    if isinstance(M, App):
        subs, core = list_view(M.fun)
        if not is_value(core):
            return tuple(App(Der(f), a) for f, a in _compose(n - 2, [sub(M.fun), sub(M.arg)]))

        def core_gen(s: int) -> Tuple[Term, ...]:
            if isinstance(core, Var):
                return (core,) if s == 1 else ()
            return tuple(Lam(core.binder, b) for b in _lam_approx(core.body, mode, s - 1))

        def head(s: int) -> Tuple[Term, ...]:
            gens = [core_gen] + [sub(arg) for arg, _ in subs]
            return tuple(
                wrap(parts[0], tuple(zip(parts[1:], (binder for _, binder in subs))))
                for parts in _compose(s - len(subs), gens)
            )
        return tuple(App(f, a) for f, a in _compose(n - 1, [head, sub(M.arg)]))
    if isinstance(M, ESub):
        return tuple(ESub(b, a, M.binder) for b, a in _compose(n - 1, [sub(M.body), sub(M.arg)]))
    return ()


def lam_taylor_enum(M: Term, mode: ModeLike, size_cap: int) -> TaylorSet:
    """{m | m ⊲n M} 或 {m | m ⊲v M}, |m| ≤ size_cap"""
    if size_cap < 1:
        raise ValueError("size_cap must be >= 1")
    mode = Mode.parse(mode)
    terms = [m for n in range(1, size_cap + 1) for m in _lam_approx(M, mode, n)]
    return TaylorSet(TermSet(terms), size_cap, True)


# ---------------------------------------------------------------------------
# 各模式的 Böhm 近似
# ---------------------------------------------------------------------------

def lam_is_approximant(A: Term, mode: ModeLike) -> bool:
    """
    CbN:  A_n := ⊥ | N_λ | λx A_n,  N_λ := x | N_λ A_n
    CbV:  A_v := ⊥ | A_λ | λx A_v | A_v[A_xλ/x]
          A_λ := x | A_λ A_v | A_λ[A_xλ/x]
          A_xλ := A_λ A_v | A_xλ[A_xλ/x]
    """
    if Mode.parse(mode) is Mode.CBN:
        return _in_a_n(A)
    return _in_a_v(A)


def _in_a_n(A: Term) -> bool:
    if isinstance(A, Bot):
        return True
    if isinstance(A, Lam):
        return _in_a_n(A.body)
    return _in_n_lam(A)


def _in_n_lam(A: Term) -> bool:
    if isinstance(A, Var):
        return True
    return isinstance(A, App) and _in_n_lam(A.fun) and _in_a_n(A.arg)


def _in_a_v(A: Term) -> bool:
    if isinstance(A, Bot):
        return True
    if isinstance(A, Lam):
        return _in_a_v(A.body)
    if isinstance(A, ESub) and _in_a_v(A.body) and _in_a_xlam(A.arg):
        return True
    return _in_a_lam(A)


def _in_a_lam(A: Term) -> bool:
    if isinstance(A, Var):
        return True
    if isinstance(A, App):
        return _in_a_lam(A.fun) and _in_a_v(A.arg)
    if isinstance(A, ESub):
        return _in_a_lam(A.body) and _in_a_xlam(A.arg)
    return False


def _in_a_xlam(A: Term) -> bool:
    if isinstance(A, App):
        return _in_a_lam(A.fun) and _in_a_v(A.arg)
    if isinstance(A, ESub):
        return _in_a_xlam(A.body) and _in_a_xlam(A.arg)
    return False


def lam_direct_approximant(N: Term, mode: ModeLike) -> Term:
    """模式自身的 ω: redex 塌缩为 ⊥, 非法位置向上传播"""
    mode = Mode.parse(mode)
    system = system_for(mode)
    if isinstance(N, (Var, Bot)):
        return N
    if system.root_redex(N) is not None:
        return BOT
    if isinstance(N, Lam):
        return Lam(N.binder, lam_direct_approximant(N.body, mode))
    if isinstance(N, App):
        fun = lam_direct_approximant(N.fun, mode)
        fun_ok = _in_n_lam(fun) if mode is Mode.CBN else _in_a_lam(fun)
        return App(fun, lam_direct_approximant(N.arg, mode)) if fun_ok else BOT
    if isinstance(N, ESub):
        if mode is Mode.CBN:
            return BOT
        arg = lam_direct_approximant(N.arg, mode)
        if not _in_a_xlam(arg):
            return BOT
        return ESub(lam_direct_approximant(N.body, mode), arg, N.binder)
    raise TypeError(f"not a lambda term: {N!r}")


def lam_approximant_generators(M: Term, mode: ModeLike, fuel: int,
                               cap: int = DEFAULT_REDUCT_CAP) -> Tuple[TermSet, bool]:
    """(各可达项的 ω, 是否到达了 full 正规形)"""
    system = system_for(mode)
    exploration = system.explore(M, ContextClass.FULL, fuel, cap)
    complete = any(system.is_normal(N, ContextClass.FULL) for N in exploration.terms)
    return TermSet(lam_direct_approximant(N, mode) for N in exploration.terms), complete


def lam_bt_truncate(M: Term, mode: ModeLike, fuel: int, cap: int = DEFAULT_REDUCT_CAP) -> Term:
    generators, _ = lam_approximant_generators(M, mode, fuel, cap)
    result: Term = BOT
    for generator in sorted(generators, key=sort_key):
        joined = join(result, generator)
        if joined is None:
            raise InvariantViolation(
                f"{Mode.parse(mode).value}-approximants {print_term(result)} and "
                f"{print_term(generator)} of {print_term(M)} have no upper bound"
            )
        result = joined
    return canonicalize(result)


# ---------------------------------------------------------------------------
# 性质检查
# ---------------------------------------------------------------------------

def _params(M: Term, mode: Mode, **extra) -> dict:
    return {'term': print_term(M), 'mode': mode.value, **extra}


def check_embedding(M: Term, mode: ModeLike, fuel: int = 12, cap: int = DEFAULT_REDUCT_CAP) -> CheckReport:
    """M^∘ 的每个一步 full 归约 N, 都有 M →∘* P 且 N →f* P^∘"""
    mode = Mode.parse(mode)
    builder = ReportBuilder('embedding', _params(M, mode, fuel=fuel))
    candidates = lam_reducts(M, mode, ContextClass.FULL, fuel, cap)
    targets = [canonicalize(translate(P, mode)) for P in candidates]
    for site, N in DBANG.one_steps(translate(M, mode), ContextClass.FULL):
        closure = DBANG.reducts(N, ContextClass.FULL, fuel, cap)
        if any(t in closure for t in targets):
            builder.ok()
        elif closure.truncated or candidates.truncated:
            builder.inconclusive(f"no common reduct for step {site.describe()} within fuel {fuel}")
        else:
            builder.fail(f"step {site.describe()} to {print_term(N)} leaves the image of the translation")
    return builder.build()


def check_translation_simulation(M: Term, mode: ModeLike, fuel: int = 6,
                                 cap: int = DEFAULT_REDUCT_CAP) -> CheckReport:
    """M →∘ N 蕴含 M^∘ →f+ N^∘"""
    mode = Mode.parse(mode)
    builder = ReportBuilder('translation-simulation', _params(M, mode, fuel=fuel))
    closure = DBANG.reducts(translate(M, mode), ContextClass.FULL, fuel, cap)
    for site, N in system_for(mode).one_steps(M, ContextClass.FULL):
        image = translate(N, mode)
        if image in closure:
            builder.ok()
        elif closure.truncated:
            builder.inconclusive(f"{print_term(image)} not reached within fuel {fuel}")
        else:
            builder.fail(f"{print_term(M)} -> {print_term(N)} at {site.describe()} but "
                         f"{print_term(image)} is not reachable from the translation")
    return builder.build()


def check_translation_taylor(M: Term, mode: ModeLike, size_cap: int = 8) -> CheckReport:
    """T^∘(M) = T(M^∘) 在 size_cap 以内"""
    mode = Mode.parse(mode)
    builder = ReportBuilder('translation-taylor', _params(M, mode, cap=size_cap))
    native = lam_taylor_enum(M, mode, size_cap).terms
    image = taylor_enum(translate(M, mode), size_cap).terms
    builder.count('native', len(native))
    builder.count('translated', len(image))
    for m in image:
        builder.expect(m in native and lam_approximates(m, M, mode),
                       f"{print_term(m)} ⊲ {print_term(translate(M, mode))} but not ⊲{mode.value} {print_term(M)}")
    for m in native - image:
        builder.fail(f"{print_term(m)} ⊲{mode.value} {print_term(M)} but not in T of the translation")
    return builder.build()


def check_translation_bohm(M: Term, mode: ModeLike, fuel: int = 4,
                           factor: int = DEFAULT_FUEL_FACTOR) -> CheckReport:
    """(BT_∘(M))^∘ = BT(M^∘) 在匹配的 fuel 窗口内"""
    mode = Mode.parse(mode)
    builder = ReportBuilder('translation-bohm', _params(M, mode, fuel=fuel, factor=factor))
    native = translate(lam_bt_truncate(M, mode, fuel), mode)
    image = bt_truncate(translate(M, mode), factor * fuel)
    builder.detail('native', print_term(native))
    builder.detail('translated', print_term(image))
    if alpha_eq(native, image):
        builder.ok()
        return builder.build()
    upper = translate(lam_bt_truncate(M, mode, factor * fuel), mode)
    if bot_leq(native, image) and bot_leq(image, upper):
        builder.inconclusive(f"truncations differ within fuel window x{factor}: "
                             f"{print_term(native)} ⊑ {print_term(image)} ⊑ {print_term(upper)}")
    else:
        builder.fail(f"BT of {print_term(M)} translates to {print_term(native)} but BT of the translation is "
                     f"{print_term(image)}")
    return builder.build()


def check_translation_commutation(M: Term, mode: ModeLike, fuel: int = 4, size_cap: int = 8,
                                  factor: int = DEFAULT_FUEL_FACTOR) -> CheckReport:
    """T_∘(BT_∘(M)) = nf(T(M^∘)), BT 一侧由模式自身计算"""
    mode = Mode.parse(mode)
    builder = ReportBuilder('translation-commutation', _params(M, mode, fuel=fuel, cap=size_cap))
    generators, bt_complete = lam_approximant_generators(M, mode, fuel)
    bt_side: Set[Term] = set()
    for generator in generators:
        bt_side |= lam_taylor_enum(generator, mode, size_cap).terms.members
    nf_side = taylor_nf(translate(M, mode), size_cap, factor * fuel)
    builder.count('bt_side', len(bt_side))
    builder.count('nf_side', len(nf_side))
    for m in sorted(bt_side, key=sort_key):
        if m in nf_side:
            builder.ok()
        elif nf_side.complete_up_to_cap:
            builder.fail(f"{print_term(m)} ∈ T_{mode.value}(BT_{mode.value}) but not in nf(T) of the translation")
        else:
            builder.inconclusive(f"{print_term(m)} not produced within fuel {factor * fuel}")
    for m in nf_side:
        if canonicalize(m) in bt_side:
            builder.ok()
        elif bt_complete:
            builder.fail(f"{print_term(m)} ∈ nf(T) of the translation but not in T_{mode.value}(BT_{mode.value})")
        else:
            builder.inconclusive(f"{print_term(m)} missing from T_{mode.value}(BT_{mode.value}) at fuel {fuel}")
    return builder.build()


def check_fragment_closure(mode: ModeLike, size_cap: int = 5, fuel: int = 3,
                           free_pool: Sequence[str] = ('x', 'y'), cap: int = 200) -> CheckReport:
    """片段成员的 full 可达项仍在片段内"""
    mode = Mode.parse(mode)
    builder = ReportBuilder('fragment-closure', {'mode': mode.value, 'size_cap': size_cap, 'fuel': fuel})
    members = 0
    for M in enumerate_terms(size_cap, Language.DBANG, free_pool):
        if not fragment_check(M, mode):
            continue
        members += 1
        for N in DBANG.reducts(M, ContextClass.FULL, fuel, cap):
            builder.expect(fragment_check(N, mode),
                           f"{print_term(M)} ∈ dBang_{mode.value.upper()} reduces to {print_term(N)} outside it")
    builder.count('members', members)
    return builder.build()


def check_nf_shapes(mode: ModeLike, size_cap: int = 5, fuel: int = 10,
                    free_pool: Sequence[str] = ('x', 'y')) -> CheckReport:
    """片段成员的 full 正规形符合该模式的形状"""
    mode = Mode.parse(mode)
    builder = ReportBuilder('nf-shape', {'mode': mode.value, 'size_cap': size_cap, 'fuel': fuel})
    for M in enumerate_terms(size_cap, Language.DBANG, free_pool):
        if not fragment_check(M, mode):
            continue
        outcome = DBANG.normalize(M, ContextClass.FULL, fuel)
        if not outcome.is_normal:
            builder.inconclusive(f"{print_term(M)} has no normal form within fuel {fuel}")
            continue
        shape = classify_nf(outcome.result, mode)
        builder.expect(not isinstance(shape, NotShaped),
                       f"normal form {print_term(outcome.result)} of {print_term(M)} is not shaped")
    return builder.build()


def check_meaningfulness(M: Term, mode_hint: Optional[ModeLike] = None, fuel: int = 50,
                         search_budget: int = 200) -> CheckReport:
    """找到见证时重新验证 T⟨M⟩ →s* !P"""
    builder = ReportBuilder('meaningful', {'term': print_term(M), 'fuel': fuel, 'budget': search_budget})
    result = meaningful_witness(M, mode_hint, fuel, search_budget)
    if isinstance(result, Unknown):
        builder.inconclusive(result.reason)
        return builder.build()
    builder.detail('context', result.render())
    builder.detail('steps', result.steps)
    builder.detail('strategy', result.strategy)
    builder.detail('result', print_term(result.result))
    replay = _reach_bang(result.context.plug(M), _Budget(result.steps))
    builder.expect(replay is not None, f"context {result.render()} does not drive {print_term(M)} to a bang")
    return builder.build()


def check_meaningfulness_transfer(M: Term, mode: ModeLike, fuel: int = 50,
                                  search_budget: int = 200) -> CheckReport:
    """模式层面的见证与翻译后的 dBang 见证同时存在或同时未找到"""
    mode = Mode.parse(mode)
    builder = ReportBuilder('meaningfulness-transfer', _params(M, mode, fuel=fuel, budget=search_budget))
    native = lam_meaningful_witness(M, mode, fuel, search_budget)
    image = meaningful_witness(translate(M, mode), mode, fuel, search_budget)
    builder.detail('native', native.render() if isinstance(native, Witness) else None)
    builder.detail('translated', image.render() if isinstance(image, Witness) else None)
    if isinstance(native, Witness) == isinstance(image, Witness):
        builder.ok()
    else:
        side = 'translation' if isinstance(native, Witness) else mode.value
        builder.inconclusive(f"no witness found on the {side} side within budget {search_budget}")
    return builder.build()


def check_tnf_witness(M: Term, fuel: int = 50, search_budget: int = 200, size_cap: int = 10,
                      witness_cap: int = 12) -> CheckReport:
    """
    片段成员: T_nf 非空 ⇒ 找到见证;
    任意项: 找到见证 ⇒ T_nf 在 witness_cap 内非空.
    """
    builder = ReportBuilder('tnf-witness', {'term': print_term(M), 'fuel': fuel, 'cap': size_cap})
    result = meaningful_witness(M, None, fuel, search_budget)
    fragments = [mode.value for mode in Mode if fragment_check(M, mode)]
    builder.detail('fragments', fragments)
    if fragments:
        tnf = taylor_nf(M, size_cap)
        if not tnf.is_empty():
            if isinstance(result, Witness):
                builder.ok()
            else:
                builder.inconclusive(f"T_nf is non-empty but {result.reason}")
    if isinstance(result, Witness):
        tnf = taylor_nf(M, witness_cap)
        if not tnf.is_empty():
            builder.ok()
        elif tnf.complete_up_to_cap:
            builder.fail(f"{print_term(M)} is meaningful via {result.render()} but T_nf is empty")
        else:
            builder.inconclusive(f"T_nf empty within cap {witness_cap}")
    return builder.build()
