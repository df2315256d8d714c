"""
JSON 服务: CalculusSite 在 Robyn 应用上注册与命令行对应的路由.

处理逻辑都在 handle_* 函数中, 输入请求体 dict, 返回响应 dict,
不需要启动服务器即可测试. 出错时返回 {"success": false, "message": ...}.
"""
import logging
from functools import wraps
from typing import Any, Callable, Dict, Optional

import orjson
from robyn import Request, Response, Robyn

from .config import Settings
from .core.bohm import approximant_set, bt_truncate
from .core.errors import DBangError
from .core.frontends import Mode, Witness, fragment_check, meaningful_witness, translate
from .core.lam import lam_normalize
from .core.parser import from_json, parse, to_json
from .core.resource import res_normal_forms
from .core.rewrite import DBANG, ContextClass
from .core.syntax import Language, Term, canonicalize, print_term
from .core.taylor import taylor_enum, taylor_nf
from .corpus import Corpus, load_corpus
from .i18n.translations import get_text
from .suites import corpus_population, get_suite, run_suite

logger = logging.getLogger(__name__)

Handler = Callable[..., Dict[str, Any]]


def _guard(func: Handler) -> Handler:
    """把库异常转换为失败响应"""
    @wraps(func)
    def wrapper(body: Optional[Dict[str, Any]] = None, settings: Optional[Settings] = None) -> Dict[str, Any]:
        try:
            result = func(body or {}, settings or Settings.from_env())
            return {'success': True, **result}
        except (DBangError, ValueError, KeyError, TypeError) as exc:
            logger.info("%s rejected: %s", func.__name__, exc)
            message = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
            if isinstance(exc, KeyError):
                message = f"missing field {message!r}"
            return {'success': False, 'message': message}
    return wrapper


def _int(body: Dict[str, Any], key: str, default: int) -> int:
    value = body.get(key)
    return default if value is None else int(value)


def _mode(body: Dict[str, Any]) -> Optional[Mode]:
    value = body.get('mode')
    return None if value is None else Mode.parse(value)


def _corpus_for(language: Language, settings: Settings) -> Optional[Corpus]:
    if language is Language.LAMBDA:
        return load_corpus(settings.lambda_corpus)
    if language in (Language.DBANG, Language.DBANG_BOT):
        return load_corpus(settings.corpus)
    return None


def resolve_term(value: Any, language: Language, settings: Settings) -> Term:
    """请求中的项: JSON 对象, 语料名, 或具体语法"""
    if isinstance(value, dict):
        return from_json(value, language)
    if not isinstance(value, str):
        raise ValueError(f"term must be a string or a JSON term, got {type(value).__name__}")
    corpus = _corpus_for(language, settings)
    if corpus is not None and value in corpus:
        return corpus.get(value)
    return parse(value.replace('λ', '\\'), language)


def _term(body: Dict[str, Any], settings: Settings, default: Language = Language.DBANG) -> Term:
    language = Language(body.get('language', default.value))
    return resolve_term(body['term'], language, settings)


# ---------------------------------------------------------------------------
# handlers
# ---------------------------------------------------------------------------

@_guard
def handle_corpus(body, settings):
    dbang = load_corpus(settings.corpus)
    lam = load_corpus(settings.lambda_corpus)
    return {
        'terms': {name: print_term(t) for name, t in dbang.items()},
        'lambda_terms': {name: print_term(t) for name, t in lam.items()},
    }


@_guard
def handle_parse(body, settings):
    term = canonicalize(_term(body, settings))
    return {'term': print_term(term), 'json': to_json(term)}


@_guard
def handle_reduce(body, settings):
    cls = ContextClass(body.get('class', 'full'))
    fuel = _int(body, 'fuel', settings.fuel)
    trace = bool(body.get('trace', False))
    language = Language(body.get('language', Language.DBANG.value))
    term = _term(body, settings)
    if language is Language.LAMBDA:
        mode = _mode(body) or Mode.CBN
        outcome = lam_normalize(term, mode, cls, fuel, trace)
    else:
        outcome = DBANG.normalize(term, cls, fuel, trace)
    return {
        'result': print_term(outcome.result),
        'status': outcome.status.value,
        'steps': outcome.steps_used,
        'trace': [step.render() for step in outcome.trace],
    }


@_guard
def handle_res_nf(body, settings):
    term = _term(body, settings, Language.RESOURCE)
    strategy = body.get('strategy', 'exhaustive')
    return {'normal_forms': res_normal_forms(term, strategy).printed()}


@_guard
def handle_taylor(body, settings):
    term = _term(body, settings)
    cap = _int(body, 'cap', settings.cap)
    if body.get('nf'):
        result = taylor_nf(term, cap, _int(body, 'fuel', settings.fuel), settings.reduct_cap)
    else:
        result = taylor_enum(term, cap)
    return {'terms': result.terms.printed(), 'complete': result.complete_up_to_cap}


@_guard
def handle_bt(body, settings):
    term = _term(body, settings)
    return {'truncation': print_term(bt_truncate(term, _int(body, 'fuel', settings.fuel), settings.reduct_cap))}


@_guard
def handle_approximants(body, settings):
    term = _term(body, settings)
    aset = approximant_set(term, _int(body, 'fuel', settings.fuel), settings.reduct_cap)
    result = {
        'generators': aset.generators.printed(),
        'truncated': aset.truncated,
        'complete': aset.complete,
    }
    if body.get('closure'):
        result['closure'] = sorted(print_term(a) for a in aset.closure())
    return result


@_guard
def handle_translate(body, settings):
    term = _term(body, settings, Language.LAMBDA)
    mode = _mode(body) or Mode.CBN
    return {'mode': mode.value, 'term': print_term(translate(term, mode))}


@_guard
def handle_fragment(body, settings):
    term = _term(body, settings)
    mode = _mode(body) or Mode.CBN
    return {'mode': mode.value, 'member': fragment_check(term, mode)}


@_guard
def handle_meaningful(body, settings):
    term = _term(body, settings)
    result = meaningful_witness(
        term, _mode(body), _int(body, 'fuel', settings.fuel), _int(body, 'budget', settings.budget),
    )
    if isinstance(result, Witness):
        return {
            'witness': True,
            'context': result.render(),
            'steps': result.steps,
            'strategy': result.strategy,
            'result': print_term(result.result),
        }
    return {'witness': False, 'reason': result.reason}


@_guard
def handle_check(body, settings):
    settings = settings.override(
        fuel=body.get('fuel'), cap=body.get('cap'), budget=body.get('budget'),
    )
    suite = get_suite(body['suite'])
    terms = None
    if body.get('term') is not None:
        term = resolve_term(body['term'], suite.language, settings)
        terms = [(str(body['term']), term)]
    elif body.get('names'):
        corpus = _corpus_for(suite.language, settings)
        if corpus is None:
            raise ValueError(f"suite {suite.name!r} has no corpus, pass 'term' instead")
        terms = corpus_population(corpus, body['names'])
    report = run_suite(suite.name, settings, terms, _mode(body))
    return {'report': report.to_dict()}


# ---------------------------------------------------------------------------
# Robyn
# ---------------------------------------------------------------------------

def json_response(payload: Dict[str, Any], status_code: int = 200) -> Response:
    # orjson 输出, 中文正常显示
    return Response(
        status_code=status_code,
        description=orjson.dumps(payload, option=orjson.OPT_SORT_KEYS).decode('utf-8'),
        headers={"Content-Type": "application/json;charset=utf-8"},
    )


def request_body(request: Request) -> Dict[str, Any]:
    raw = request.body
    if not raw:
        return {}
    data = orjson.loads(raw)
    if not isinstance(data, dict):
        raise ValueError("request body must be a JSON object")
    return data


ROUTES: Dict[str, Handler] = {
    'parse': handle_parse,
    'reduce': handle_reduce,
    'res-nf': handle_res_nf,
    'taylor': handle_taylor,
    'bt': handle_bt,
    'approximants': handle_approximants,
    'translate': handle_translate,
    'fragment': handle_fragment,
    'meaningful': handle_meaningful,
    'check': handle_check,
}


class CalculusSite:
    """在 Robyn 应用上注册计算接口"""

    def __init__(self, app: Robyn, prefix: str = 'api', settings: Optional[Settings] = None,
                 default_language: str = 'en_US'):
        self.app = app
        self.prefix = prefix.strip('/')
        self.settings = settings or Settings.from_env()
        self.default_language = default_language
        self._setup_routes()

    def get_text(self, key: str, lang: str = None) -> str:
        return get_text(key, lang or self.default_language)

    def dispatch(self, name: str, body: Dict[str, Any]) -> Response:
        result = ROUTES[name](body, self.settings)
        status = 200 if result.get('success') else 400
        logger.info("POST /%s/%s -> %d", self.prefix, name, status)
        return json_response(result, status)

    def _setup_routes(self):
        """设置路由"""
        @self.app.get(f"/{self.prefix}/corpus")
        async def corpus(request: Request):
            logger.info("GET /%s/corpus", self.prefix)
            return json_response(handle_corpus({}, self.settings))

        for name in ROUTES:
            self._register_post(name)

    def _register_post(self, name: str):
        async def endpoint(request: Request):
            try:
                body = request_body(request)
            except (orjson.JSONDecodeError, ValueError) as exc:
                return json_response({
                    'success': False,
                    'message': f"{self.get_text('parse_error')}: {exc}",
                }, 400)
            return self.dispatch(name, body)

        endpoint.__name__ = f"post_{name.replace('-', '_')}"
        self.app.post(f"/{self.prefix}/{name}")(endpoint)


def create_app(settings: Optional[Settings] = None, prefix: str = 'api') -> Robyn:
    app = Robyn(__file__)
    CalculusSite(app, prefix=prefix, settings=settings)
    return app

# 未包装的处理函数, 异常原样抛出; 命令行据此区分退出码
OPERATIONS: Dict[str, Handler] = {
    'corpus': handle_corpus.__wrapped__,
    **{name: handler.__wrapped__ for name, handler in ROUTES.items()},
}
