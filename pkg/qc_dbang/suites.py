"""
检查套件注册表: 把套件名映射到 core 中的检查函数, 供命令行与服务共用.

套件按输入分为四类:
    dbang     每个 dBang 项一份报告
    resource  每个资源项一份报告
    lambda    每个 dCBN/dCBV 项 (及模式) 一份报告
    global    只依赖参数的扫描
"""
import logging
import random
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .config import Settings
from .core import bohm, frontends, resource, rewrite, taylor
from .core.frontends import Mode
from .core.report import CheckReport, ReportBuilder, merge_reports
from .core.rewrite import AppFrame, ContextClass, LamFrame, TestingContext
from .core.syntax import Bang, Language, Term, Var, enumerate_terms, occurrences, print_term, size
from .corpus import Corpus, load_corpus

logger = logging.getLogger(__name__)

DBANG, RESOURCE, LAMBDA, GLOBAL = 'dbang', 'resource', 'lambda', 'global'

FREE_POOL = ('x', 'y')

Runner = Callable[[Optional[Term], Settings, Optional[Mode]], CheckReport]


@dataclass(frozen=True)
class Suite:
    name: str
    kind: str
    run: Runner
    description: str = ''
    per_mode: bool = True

    @property
    def language(self) -> Language:
        return {RESOURCE: Language.RESOURCE, LAMBDA: Language.LAMBDA}.get(self.kind, Language.DBANG)


SUITES: Dict[str, Suite] = {}


def register(name: str, kind: str, description: str = '',
             per_mode: bool = True) -> Callable[[Runner], Runner]:
    def decorator(func: Runner) -> Runner:
        SUITES[name] = Suite(name, kind, func, description, per_mode)
        return func
    return decorator


def get_suite(name: str) -> Suite:
    try:
        return SUITES[name]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}; available: {', '.join(sorted(SUITES))}")


# ---------------------------------------------------------------------------
# dBang
# ---------------------------------------------------------------------------

@register('factorization', DBANG, 'M →f* N factors as M →s* P →i* N')
def _factorization(term, s, mode):
    return rewrite.check_factorization(term, s.fuel, cap=s.reduct_cap)


@register('confluence', DBANG, 'one-step full forks join within fuel')
def _confluence(term, s, mode):
    return rewrite.check_confluence(term, ContextClass.FULL, s.fuel, s.reduct_cap)


@register('simulation', DBANG, 'surface steps are simulated by resource surface steps')
def _simulation(term, s, mode):
    return taylor.check_simulation_surface(term, min(s.fuel, 2), s.cap)


@register('simulation-full', DBANG, 'full steps are simulated by parallel resource steps')
def _simulation_full(term, s, mode):
    return taylor.check_simulation_full(term, min(s.fuel, 2), s.cap)


@register('context-decomposition', DBANG, 'approximants of L⟨N⟩ split as l⟨n⟩ with l ⊲ L and n ⊲ N')
def _context_decomposition(term, s, mode):
    return taylor.check_context_decomposition(term, size_cap=s.cap)


@register('nf-invariance', DBANG, 'Taylor normal forms are invariant under full reduction')
def _nf_invariance(term, s, mode):
    return taylor.check_nf_invariance(term, min(s.fuel, 4), s.cap)


ANNIHILATION_CONTEXT = TestingContext((AppFrame(Bang(Var('z'))), LamFrame('w', Bang(Var('z')))))


@register('context-annihilation', DBANG, 'annihilating approximants stay annihilated inside resource testing contexts')
def _context_annihilation(term, s, mode):
    return taylor.check_test_context_annihilation(term, ANNIHILATION_CONTEXT, size_cap=min(s.cap, 6), arg_cap=3)


@register('commutation', DBANG, 'T(BT(M)) = T_nf(M) within fuel and cap')
def _commutation(term, s, mode):
    return bohm.check_commutation(term, s.fuel, s.cap, s.reduct_cap)


@register('bohm', DBANG, 'direct approximants, persistence, joins and monotone truncation')
def _bohm(term, s, mode):
    return bohm.check_bohm_properties(term, min(s.fuel, 6), s.reduct_cap)


@register('meaningful', DBANG, 'a found testing context really drives M to a bang')
def _meaningful(term, s, mode):
    return frontends.check_meaningfulness(term, mode, s.fuel, s.budget)


@register('tnf-witness', DBANG, 'non-empty T_nf on fragments gives a witness, and witnesses give non-empty T_nf')
def _tnf_witness(term, s, mode):
    return frontends.check_tnf_witness(term, s.fuel, s.budget, size_cap=s.cap, witness_cap=s.cap + 2)


# ---------------------------------------------------------------------------
# 资源演算
# ---------------------------------------------------------------------------

@register('sn', RESOURCE, 'every resource step strictly decreases size')
def _sn(term, s, mode):
    return resource.check_size_decrease(term)


@register('diamond', RESOURCE, 'parallel reduction has the one-step diamond property')
def _diamond(term, s, mode):
    return resource.check_parallel_diamond(term)


@register('parallel-chain', RESOURCE, 'one full step ⊆ parallel step ⊆ full reduction')
def _parallel_chain(term, s, mode):
    return resource.check_parallel_chain(term)


@register('strategy', RESOURCE, 'normal forms do not depend on the site order')
def _strategy(term, s, mode):
    return resource.check_strategy_independence(term)


@register('resource-factorization', RESOURCE, 'full resource reduction factors through surface steps')
def _resource_factorization(term, s, mode):
    return resource.check_resource_factorization(term)


# ---------------------------------------------------------------------------
# dCBN / dCBV
# ---------------------------------------------------------------------------

@register('embedding', LAMBDA, 'steps of a translation return to the image of the translation')
def _embedding(term, s, mode):
    return frontends.check_embedding(term, mode, s.fuel, s.reduct_cap)


@register('translation-simulation', LAMBDA, 'mode steps are simulated on translations')
def _translation_simulation(term, s, mode):
    return frontends.check_translation_simulation(term, mode, min(s.fuel, 6), s.reduct_cap)


@register('translation-taylor', LAMBDA, 'mode-native Taylor expansion equals expansion of the translation')
def _translation_taylor(term, s, mode):
    return frontends.check_translation_taylor(term, mode, s.cap)


@register('translation-bohm', LAMBDA, 'translation commutes with Böhm truncation')
def _translation_bohm(term, s, mode):
    return frontends.check_translation_bohm(term, mode, min(s.fuel, 4), s.fuel_factor)


@register('translation-commutation', LAMBDA, 'T(BT) of the mode equals T_nf of the translation')
def _translation_commutation(term, s, mode):
    return frontends.check_translation_commutation(term, mode, min(s.fuel, 4), s.cap, s.fuel_factor)


@register('meaningfulness-transfer', LAMBDA, 'mode meaningfulness agrees with meaningfulness of the translation')
def _meaningfulness_transfer(term, s, mode):
    return frontends.check_meaningfulness_transfer(term, mode, s.fuel, s.budget)


# ---------------------------------------------------------------------------
# 参数扫描
# ---------------------------------------------------------------------------

@register('fragment-closure', GLOBAL, 'fragments are closed under full reduction')
def _fragment_closure(term, s, mode):
    return frontends.check_fragment_closure(mode, min(s.cap, 5), min(s.fuel, 6), FREE_POOL, s.reduct_cap)


@register('nf-shape', GLOBAL, 'full normal forms of fragment members have the mode shape')
def _nf_shape(term, s, mode):
    return frontends.check_nf_shapes(mode, min(s.cap, 5), s.fuel, FREE_POOL)


@register('translation-fragment', GLOBAL, 'translations land in the fragment of their mode')
def _translation_fragment(term, s, mode):
    builder = ReportBuilder('translation-fragment', {'mode': mode.value, 'size_cap': min(s.cap, 6)})
    for M in enumerate_terms(min(s.cap, 6), Language.LAMBDA, FREE_POOL):
        image = frontends.translate(M, mode)
        builder.expect(frontends.fragment_check(image, mode),
                       f"{print_term(M)} translates to {print_term(image)} outside dBang_{mode.value.upper()}")
    return builder.build()


@register('substitution', GLOBAL, 'Taylor expansion commutes with substitution in both directions',
          per_mode=False)
def _substitution(term, s, mode):
    term_cap = res_cap = min(s.cap, 4)
    reports: List[CheckReport] = []
    for M in enumerate_terms(term_cap, Language.DBANG, ('x', 'y')):
        for N in enumerate_terms(term_cap - 1, Language.DBANG, ('y',)):
            reports.append(taylor.substitution_lemma_backward(M, 'x', N, res_cap))
            approx_N = list(taylor.taylor_enum(N, res_cap))
            for m in taylor.taylor_enum(M, res_cap):
                k = occurrences(m, 'x')
                for bag in taylor.bags_from(approx_N, k, res_cap - size(m) + k):
                    reports.append(taylor.check_substitution_lemma(M, 'x', N, m, bag))
    return merge_reports('substitution', {'term_cap': term_cap, 'cap': res_cap}, reports)


# ---------------------------------------------------------------------------
# 运行
# ---------------------------------------------------------------------------

def modes_for(mode: Optional[Mode]) -> Sequence[Mode]:
    return (mode,) if mode is not None else (Mode.CBN, Mode.CBV)


def default_population(suite: Suite, settings: Settings) -> List[Tuple[str, Term]]:
    """未指定项时的默认输入: dBang 与 lambda 套件用语料, 资源套件用小枚举"""
    if suite.kind == DBANG:
        return list(load_corpus(settings.corpus).items())
    if suite.kind == LAMBDA:
        return list(load_corpus(settings.lambda_corpus).items())
    if suite.kind == RESOURCE:
        return [(print_term(m), m) for m in enumerate_terms(4, Language.RESOURCE, ('x',))]
    return []


def run_suite(name: str, settings: Settings, terms: Optional[Iterable[Tuple[str, Term]]] = None,
              mode: Optional[Mode] = None) -> CheckReport:
    """在给定项 (默认是语料) 上运行套件, 合并为一份报告"""
    suite = get_suite(name)
    params = {'suite': name, 'fuel': settings.fuel, 'cap': settings.cap}
    if mode is not None:
        params['mode'] = mode.value
    if suite.kind == GLOBAL:
        modes = modes_for(mode) if suite.per_mode else (None,)
        reports = [suite.run(None, settings, m) for m in modes]
    else:
        population = list(terms) if terms is not None else default_population(suite, settings)
        reports = []
        for label, term in population:
            logger.debug("running %s on %s", name, label)
            if suite.kind == LAMBDA:
                reports.extend(suite.run(term, settings, m) for m in modes_for(mode))
            else:
                reports.append(suite.run(term, settings, mode))
    if len(reports) == 1:
        return reports[0]
    return merge_reports(name, params, reports)


def fuzz(seed: int, size_cap: int, count: int, suite: str, settings: Settings,
         mode: Optional[Mode] = None) -> CheckReport:
    """确定性的随机抽样: 同样的 seed 得到同样的报告"""
    chosen = get_suite(suite)
    if chosen.kind == GLOBAL:
        raise ValueError(f"suite {suite!r} does not take terms and cannot be fuzzed")
    population = list(enumerate_terms(size_cap, chosen.language, FREE_POOL))
    rng = random.Random(seed)
    sample = population if count >= len(population) else rng.sample(population, count)
    logger.info("fuzz %s: %d of %d terms (seed %d, size <= %d)", suite, len(sample), len(population), seed, size_cap)
    report = run_suite(suite, settings, [(print_term(t), t) for t in sample], mode)
    report.params.update({'seed': seed, 'size_cap': size_cap, 'count': len(sample)})
    return report


def corpus_population(corpus: Corpus, names: Optional[Sequence[str]] = None) -> List[Tuple[str, Term]]:
    if not names:
        return list(corpus.items())
    return [(name, corpus.get(name)) for name in names]
