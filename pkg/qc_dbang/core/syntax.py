"""
四种语言共用的术语表示: dBang, dBang_⊥, 资源演算 δBang 以及 dCBN/dCBV.

所有节点都是不可变的 dataclass, 名字是具名绑定; alpha 等价通过
canonicalize 判定 (绑定变量按深度重命名, bag 按打印形式排序).
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import (
    Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple, Union
)

logger = logging.getLogger(__name__)


class Language(Enum):
    """术语语言"""
    DBANG = 'dbang'
    DBANG_BOT = 'dbang_bot'
    RESOURCE = 'resource'
    LAMBDA = 'lambda'


class _Node:
    """所有术语节点的基类"""
    __slots__ = ()

    def __str__(self) -> str:
        return print_term(self)


@dataclass(frozen=True)
class Var(_Node):
    name: str


@dataclass(frozen=True)
class App(_Node):
    fun: 'Term'
    arg: 'Term'


@dataclass(frozen=True)
class Lam(_Node):
    binder: str
    body: 'Term'


@dataclass(frozen=True)
class Bang(_Node):
    body: 'Term'


@dataclass(frozen=True)
class Der(_Node):
    body: 'Term'


@dataclass(frozen=True)
class ESub(_Node):
    """显式替换 body[arg/binder]"""
    body: 'Term'
    arg: 'Term'
    binder: str


@dataclass(frozen=True)
class Bot(_Node):
    pass


@dataclass(frozen=True)
class Bag(_Node):
    """资源项的 multiset, 规范化后元素有序"""
    elements: Tuple['Term', ...] = ()


BOT = Bot()

Term = Union[Var, App, Lam, Bang, Der, ESub, Bot, Bag]
# 语义上的别名, 运行时同一套节点
BotTerm = Term
ResTerm = Term
LamTerm = Term

KEYWORDS = frozenset({'der', 'bot'})


# ---------------------------------------------------------------------------
# 结构工具
# ---------------------------------------------------------------------------

def children(t: Term) -> Tuple[Term, ...]:
    """子项, 顺序与 RedexSite 路径下标一致"""
    if isinstance(t, App):
        return (t.fun, t.arg)
    if isinstance(t, (Lam, Bang, Der)):
        return (t.body,)
    if isinstance(t, ESub):
        return (t.body, t.arg)
    if isinstance(t, Bag):
        return t.elements
    return ()


def with_children(t: Term, kids: Sequence[Term]) -> Term:
    """用新的子项重建同构节点"""
    if isinstance(t, App):
        return App(kids[0], kids[1])
    if isinstance(t, Lam):
        return Lam(t.binder, kids[0])
    if isinstance(t, Bang):
        return Bang(kids[0])
    if isinstance(t, Der):
        return Der(kids[0])
    if isinstance(t, ESub):
        return ESub(kids[0], kids[1], t.binder)
    if isinstance(t, Bag):
        return Bag(tuple(kids))
    return t


def subterm_at(t: Term, path: Sequence[int]) -> Term:
    for i in path:
        t = children(t)[i]
    return t


def replace_at(t: Term, path: Sequence[int], new: Term) -> Term:
    if not path:
        return new
    kids = list(children(t))
    kids[path[0]] = replace_at(kids[path[0]], path[1:], new)
    return with_children(t, kids)


@lru_cache(maxsize=None)
def size(t: Term) -> int:
    """节点数; Bag 计 1 再加元素"""
    return 1 + sum(size(c) for c in children(t))


@lru_cache(maxsize=None)
def free_vars(t: Term) -> FrozenSet[str]:
    if isinstance(t, Var):
        return frozenset((t.name,))
    if isinstance(t, Lam):
        return free_vars(t.body) - {t.binder}
    if isinstance(t, ESub):
        return (free_vars(t.body) - {t.binder}) | free_vars(t.arg)
    result: FrozenSet[str] = frozenset()
    for c in children(t):
        result = result | free_vars(c)
    return result


@lru_cache(maxsize=None)
def all_names(t: Term) -> FrozenSet[str]:
    """出现过的所有名字, 含绑定变量"""
    names = set()
    if isinstance(t, Var):
        names.add(t.name)
    elif isinstance(t, (Lam, ESub)):
        names.add(t.binder)
    for c in children(t):
        names |= all_names(c)
    return frozenset(names)


def is_value(t: Term) -> bool:
    """dCBV 的值: 变量或抽象"""
    return isinstance(t, (Var, Lam))


def contains_bot(t: Term) -> bool:
    if isinstance(t, Bot):
        return True
    return any(contains_bot(c) for c in children(t))


def language_violation(t: Term, language: Language) -> Optional[str]:
    """返回第一个不属于该语言的构造名, 合法时返回 None"""
    if isinstance(t, Bot) and language is not Language.DBANG_BOT:
        return 'bot'
    if isinstance(t, Bag) and language is not Language.RESOURCE:
        return 'bag'
    if isinstance(t, Bang) and language in (Language.RESOURCE, Language.LAMBDA):
        return '!'
    if isinstance(t, Der) and language is Language.LAMBDA:
        return 'der'
    for c in children(t):
        found = language_violation(c, language)
        if found:
            return found
    return None


def fresh_name(base: str, avoid: Iterable[str]) -> str:
    """在 base 后追加 ' 直到不与 avoid 冲突"""
    avoid = set(avoid)
    name = base + "'"
    while name in avoid:
        name += "'"
    return name


# ---------------------------------------------------------------------------
# 替换
# ---------------------------------------------------------------------------

def substitute(t: Term, x: str, n: Term) -> Term:
    """避免捕获的元替换 t{n/x}"""
    return _subst(t, x, n, free_vars(n))


def rename(t: Term, old: str, new: str) -> Term:
    return _subst(t, old, Var(new), frozenset((new,)))


def _subst(t: Term, x: str, n: Term, fvn: FrozenSet[str]) -> Term:
    if x not in free_vars(t):
        return t
    if isinstance(t, Var):
        return n
    if isinstance(t, Lam):
        binder, body = _avoid_capture(t.binder, t.body, x, fvn)
        return Lam(binder, _subst(body, x, n, fvn))
    if isinstance(t, ESub):
        arg = _subst(t.arg, x, n, fvn)
        if t.binder == x:
            return ESub(t.body, arg, t.binder)
        binder, body = _avoid_capture(t.binder, t.body, x, fvn)
        return ESub(_subst(body, x, n, fvn), arg, binder)
    return with_children(t, [_subst(c, x, n, fvn) for c in children(t)])


def _avoid_capture(binder: str, body: Term, x: str, fvn: FrozenSet[str]) -> Tuple[str, Term]:
    if binder not in fvn:
        return binder, body
    new = fresh_name(binder, fvn | all_names(body) | {x})
    return new, rename(body, binder, new)


@lru_cache(maxsize=None)
def occurrences(t: Term, x: str) -> int:
    """x 的自由出现次数 d_x(t)"""
    if isinstance(t, Var):
        return 1 if t.name == x else 0
    if isinstance(t, Lam):
        return 0 if t.binder == x else occurrences(t.body, x)
    if isinstance(t, ESub):
        inner = 0 if t.binder == x else occurrences(t.body, x)
        return inner + occurrences(t.arg, x)
    return sum(occurrences(c, x) for c in children(t))


def multilinear_substitute(m: Term, x: str, bag: Sequence[Term]) -> 'TermSet':
    """
    线性替换 m⟨bag/x⟩: 第 i 个自由出现 (打印顺序) 换成 bag[σ(i)],
    对所有排列 σ 取并; 元素个数与出现次数不等时结果为空集.
    """
    bag = list(bag)
    if len(bag) != occurrences(m, x):
        return TermSet.empty()
    avoid: FrozenSet[str] = frozenset()
    for n in bag:
        avoid = avoid | free_vars(n)
    # 相同元素的排列只算一次
    orders = sorted(set(itertools.permutations([canonicalize(n) for n in bag])),
                    key=lambda seq: [print_term(n) for n in seq])
    results = []
    for order in orders:
        feed = iter(order)
        results.append(_fill(m, x, feed, avoid))
    return TermSet(results)


def _fill(t: Term, x: str, feed: Iterator[Term], avoid: FrozenSet[str]) -> Term:
    if x not in free_vars(t):
        return t
    if isinstance(t, Var):
        return next(feed)
    if isinstance(t, Lam):
        binder, body = _avoid_capture(t.binder, t.body, x, avoid)
        return Lam(binder, _fill(body, x, feed, avoid))
    if isinstance(t, ESub):
        if t.binder == x:
            return ESub(t.body, _fill(t.arg, x, feed, avoid), t.binder)
        binder, body = _avoid_capture(t.binder, t.body, x, avoid)
        new_body = _fill(body, x, feed, avoid)
        return ESub(new_body, _fill(t.arg, x, feed, avoid), binder)
    return with_children(t, [_fill(c, x, feed, avoid) for c in children(t)])


# ---------------------------------------------------------------------------
# 规范形
# ---------------------------------------------------------------------------

_BASE_NAMES = ('x', 'y', 'z', 'w', 'u', 'v', 'a', 'b', 'c', 'd', 'e', 'f', 'g', 'h')


def binder_names(avoid: Iterable[str]) -> Iterator[str]:
    """规范绑定名序列, 跳过 avoid"""
    avoid = set(avoid)
    for name in _BASE_NAMES:
        if name not in avoid:
            yield name
    for i in itertools.count(1):
        for base in _BASE_NAMES:
            name = f"{base}{i}"
            if name not in avoid:
                yield name


@lru_cache(maxsize=None)
def canonicalize(t: Term) -> Term:
    """绑定变量按深度命名, bag 元素按打印形式排序; 幂等"""
    stream = binder_names(free_vars(t))
    names: List[str] = []
    return _canon(t, {}, 0, names, stream)


def _canon(t: Term, env: Dict[str, str], depth: int, names: List[str], stream: Iterator[str]) -> Term:
    if isinstance(t, Var):
        return Var(env.get(t.name, t.name))
    if isinstance(t, Lam):
        new = _name_at(depth, names, stream)
        return Lam(new, _canon(t.body, {**env, t.binder: new}, depth + 1, names, stream))
    if isinstance(t, ESub):
        new = _name_at(depth, names, stream)
        body = _canon(t.body, {**env, t.binder: new}, depth + 1, names, stream)
        return ESub(body, _canon(t.arg, env, depth, names, stream), new)
    if isinstance(t, Bag):
        elements = [_canon(e, env, depth, names, stream) for e in t.elements]
        return Bag(tuple(sorted(elements, key=print_term)))
    return with_children(t, [_canon(c, env, depth, names, stream) for c in children(t)])


def _name_at(depth: int, names: List[str], stream: Iterator[str]) -> str:
    while len(names) <= depth:
        names.append(next(stream))
    return names[depth]


def alpha_eq(t1: Term, t2: Term) -> bool:
    """alpha 等价 (资源项忽略 bag 顺序)"""
    return canonicalize(t1) == canonicalize(t2)


def sort_key(t: Term) -> Tuple[int, str]:
    return (size(t), print_term(t))


class TermSet:
    """规范化术语的有限集合, 构造后不再修改"""
    __slots__ = ('_members', 'truncated', '_ordered')

    def __init__(self, terms: Iterable[Term] = (), truncated: bool = False):
        self._members: FrozenSet[Term] = frozenset(canonicalize(t) for t in terms)
        self.truncated = truncated
        self._ordered: Optional[Tuple[Term, ...]] = None

    @classmethod
    def empty(cls) -> 'TermSet':
        return cls()

    @property
    def members(self) -> FrozenSet[Term]:
        return self._members

    def ordered(self) -> Tuple[Term, ...]:
        """按 (size, 打印形式) 排序的成员"""
        if self._ordered is None:
            self._ordered = tuple(sorted(self._members, key=sort_key))
        return self._ordered

    def is_empty(self) -> bool:
        return not self._members

    def printed(self) -> List[str]:
        return [print_term(t) for t in self.ordered()]

    def union(self, *others: 'TermSet') -> 'TermSet':
        members = set(self._members)
        truncated = self.truncated
        for other in others:
            members |= other._members
            truncated = truncated or other.truncated
        return TermSet._from_canonical(members, truncated)

    def filter(self, predicate) -> 'TermSet':
        return TermSet._from_canonical({t for t in self._members if predicate(t)}, self.truncated)

    @classmethod
    def _from_canonical(cls, members: Iterable[Term], truncated: bool) -> 'TermSet':
        result = cls.__new__(cls)
        result._members = frozenset(members)
        result.truncated = truncated
        result._ordered = None
        return result

    def __or__(self, other: 'TermSet') -> 'TermSet':
        return self.union(other)

    def __and__(self, other: 'TermSet') -> 'TermSet':
        return TermSet._from_canonical(self._members & other._members, self.truncated or other.truncated)

    def __sub__(self, other: 'TermSet') -> 'TermSet':
        return TermSet._from_canonical(self._members - other._members, self.truncated)

    def __le__(self, other: 'TermSet') -> bool:
        return self._members <= other._members

    def __contains__(self, t: object) -> bool:
        return isinstance(t, _Node) and canonicalize(t) in self._members

    def __iter__(self) -> Iterator[Term]:
        return iter(self.ordered())

    def __len__(self) -> int:
        return len(self._members)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TermSet):
            return NotImplemented
        return self._members == other._members

    def __hash__(self) -> int:
        return hash(self._members)

    def __repr__(self) -> str:
        flag = ', truncated' if self.truncated else ''
        return f"TermSet({{{', '.join(self.printed())}}}{flag})"


# ---------------------------------------------------------------------------
# 枚举
# ---------------------------------------------------------------------------

def enumerate_terms(
    size_cap: int,
    language: Language = Language.DBANG,
    free_pool: Sequence[str] = ('x',),
) -> Iterator[Term]:
    """按大小递增枚举所有节点数 ≤ size_cap 的术语, 每个 alpha 类恰好一次"""
    if size_cap < 1:
        raise ValueError("size_cap must be >= 1")
    pool = tuple(dict.fromkeys(free_pool))
    for n in range(1, size_cap + 1):
        yield from _terms_of_size(n, (), language, pool)


@lru_cache(maxsize=None)
def _terms_of_size(n: int, scope: Tuple[str, ...], language: Language, pool: Tuple[str, ...]) -> Tuple[Term, ...]:
    out: List[Term] = []
    if n == 1:
        out.extend(Var(name) for name in pool + scope)
        if language is Language.DBANG_BOT:
            out.append(BOT)
        if language is Language.RESOURCE:
            out.append(Bag())
        return tuple(out)
    inner = scope + (_scope_name(scope, pool),)
    out.extend(Lam(inner[-1], body) for body in _terms_of_size(n - 1, inner, language, pool))
    if language in (Language.DBANG, Language.DBANG_BOT):
        out.extend(Bang(body) for body in _terms_of_size(n - 1, scope, language, pool))
    if language is not Language.LAMBDA:
        out.extend(Der(body) for body in _terms_of_size(n - 1, scope, language, pool))
    for left in range(1, n - 1):
        right = n - 1 - left
        for fun in _terms_of_size(left, scope, language, pool):
            for arg in _terms_of_size(right, scope, language, pool):
                out.append(App(fun, arg))
    for left in range(1, n - 1):
        right = n - 1 - left
        for body in _terms_of_size(left, inner, language, pool):
            for arg in _terms_of_size(right, scope, language, pool):
                out.append(ESub(body, arg, inner[-1]))
    if language is Language.RESOURCE:
        out.extend(Bag(elements) for elements in _multisets(n - 1, scope, language, pool, 1, 0))
    return tuple(out)


def _scope_name(scope: Tuple[str, ...], pool: Tuple[str, ...]) -> str:
    stream = binder_names(pool)
    for _ in range(len(scope)):
        next(stream)
    return next(stream)


def _multisets(total: int, scope, language, pool, min_size: int, min_index: int) -> Iterator[Tuple[Term, ...]]:
    """元素大小之和为 total 的 multiset, 以 (size, index) 非降序列表示"""
    if total == 0:
        yield ()
        return
    for s in range(min_size, total + 1):
        candidates = _terms_of_size(s, scope, language, pool)
        start = min_index if s == min_size else 0
        for i in range(start, len(candidates)):
            for rest in _multisets(total - s, scope, language, pool, s, i):
                yield (candidates[i],) + rest


# ---------------------------------------------------------------------------
# 打印
# ---------------------------------------------------------------------------

_TOP, _FUN, _ARG, _SUB_BODY = 0, 1, 2, 3


def print_term(t: Term) -> str:
    """打印为具体语法; parse(print_term(t)) 与 t alpha 等价"""
    return _print(t, _TOP)


def _print(t: Term, level: int) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Bot):
        return 'bot'
    if isinstance(t, Bag):
        return '[' + ', '.join(_print(e, _TOP) for e in t.elements) + ']'
    if isinstance(t, ESub):
        return f"{_print(t.body, _SUB_BODY)}[{_print(t.arg, _TOP)}/{t.binder}]"
    if isinstance(t, Lam):
        text = f"\\{t.binder}. {_print(t.body, _TOP)}"
        return f"({text})" if level >= _FUN else text
    if isinstance(t, App):
        text = f"{_print(t.fun, _FUN)} {_print(t.arg, _ARG)}"
        return f"({text})" if level >= _ARG else text
    if isinstance(t, Bang):
        text = '!' + _print(t.body, _ARG)
        return f"({text})" if level >= _SUB_BODY else text
    if isinstance(t, Der):
        text = 'der ' + _print(t.body, _ARG)
        return f"({text})" if level >= _SUB_BODY else text
    raise TypeError(f"not a term: {t!r}")
