"""
命令行入口.

    qc-dbang parse '\\x. x'
    qc-dbang reduce running --class full --fuel 10 --trace
    qc-dbang meaningful Omega --fuel 50 --budget 200
    qc-dbang check commutation --term Omega --fuel 20 --cap 12
    qc-dbang fuzz --suite simulation --seed 1 --count 200 --size 6

退出码: 0 成功 / 通过, 1 失败 / 反例, 2 无定论 / 未知, 64 用法错误.
"""
import argparse
import asyncio
import logging
import sys
from typing import Any, Dict, List, Optional, Sequence, TextIO

from .config import Settings
from .core.errors import CorpusError, DBangError, InvariantViolation, ParseError
from .core.frontends import Mode
from .core.report import CheckReport
from .core.syntax import Language
from .orm.tortoise import ReportStore
from .renderers import JsonRenderer, MarkdownRenderer, TableRenderer, TextRenderer
from .service import OPERATIONS, resolve_term
from .suites import SUITES, fuzz, get_suite, run_suite

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAIL, EXIT_OPEN, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def _common() -> argparse.ArgumentParser:
    common = _ArgumentParser(add_help=False)
    common.add_argument('--fuel', type=int)
    common.add_argument('--cap', type=int)
    common.add_argument('--budget', type=int)
    common.add_argument('--seed', type=int)
    common.add_argument('--mode', choices=['n', 'v', 'cbn', 'cbv'])
    common.add_argument('--json', action='store_true', help='JSON output')
    common.add_argument('--corpus', help='dBang corpus file')
    common.add_argument('--lambda-corpus', dest='lambda_corpus', help='dCBN/dCBV corpus file')
    common.add_argument('--store', help='database URL, e.g. sqlite://runs.sqlite3')
    common.add_argument('--locale', choices=['en_US', 'zh_CN'])
    common.add_argument('--format', choices=['text', 'markdown', 'table'], default='text')
    common.add_argument('--export', help='export reports to .xlsx or .csv')
    common.add_argument('-v', '--verbose', action='store_true')
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _ArgumentParser(prog='qc-dbang', description='dBang calculus toolkit')
    sub = parser.add_subparsers(dest='command', metavar='command')

    def command(name: str, help: str, term: bool = True, language: str = 'dbang') -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help, parents=[common])
        if term:
            p.add_argument('term', help='corpus name or term in concrete syntax')
            p.add_argument('--lang', dest='language', default=language,
                           choices=[lang.value for lang in Language])
        return p

    command('parse', 'parse and print in canonical form')
    p = command('reduce', 'normalize with a reduction class')
    p.add_argument('--class', dest='cls', choices=['surface', 'full', 'internal'], default='full')
    p.add_argument('--trace', action='store_true')
    command('nf', 'full normal form')
    p = command('res-nf', 'resource normal forms', language='resource')
    p.add_argument('--strategy', choices=['exhaustive', 'leftmost', 'rightmost'], default='exhaustive')
    p = command('taylor', 'bounded Taylor expansion')
    p.add_argument('--nf', action='store_true', help='Taylor normal form')
    command('bt', 'Böhm tree truncation')
    p = command('approximants', 'direct approximants of the reducts')
    p.add_argument('--closure', action='store_true')
    command('translate', 'dCBN / dCBV translation into dBang', language='lambda')
    command('fragment', 'membership in dBang_N / dBang_V')
    command('meaningful', 'search a testing context to a bang')

    p = sub.add_parser('check', help='run a property suite', parents=[common])
    p.add_argument('suite', help='suite name, see the suites command')
    p.add_argument('--term', action='append', help='corpus name or term (repeatable)')
    p = sub.add_parser('fuzz', help='run a suite on seeded random terms', parents=[common])
    p.add_argument('--suite', required=True)
    p.add_argument('--count', type=int, default=50)
    p.add_argument('--size', type=int, default=5)
    sub.add_parser('suites', help='list property suites', parents=[common])
    sub.add_parser('corpus', help='list corpus terms', parents=[common])
    p = sub.add_parser('reports', help='list stored check runs', parents=[common])
    p.add_argument('--check', help='filter by check name')
    p.add_argument('--limit', type=int)
    p = sub.add_parser('serve', help='start the JSON service', parents=[common])
    p.add_argument('--host', default='127.0.0.1')
    p.add_argument('--port', type=int, default=8180)
    return parser


def configure_logging(verbose: bool, stream: TextIO) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format='%(levelname)s %(name)s: %(message)s',
        stream=stream,
        force=True,
    )


class _Context:
    def __init__(self, args: argparse.Namespace, settings: Settings, out: TextIO, err: TextIO):
        self.args = args
        self.settings = settings
        self.out = out
        self.err = err

    def emit(self, text: str) -> None:
        if text:
            self.out.write(text if text.endswith('\n') else text + '\n')

    def emit_json(self, payload: Any) -> None:
        self.emit(JsonRenderer().render(payload))

    def body(self, **extra: Any) -> Dict[str, Any]:
        args = self.args
        body: Dict[str, Any] = {'term': args.term, 'language': args.language}
        if args.mode:
            body['mode'] = args.mode
        body.update({k: v for k, v in extra.items() if v is not None})
        return body

    def operation(self, name: str, **extra: Any) -> Dict[str, Any]:
        return OPERATIONS[name](self.body(**extra), self.settings)


# ---------------------------------------------------------------------------
# 子命令
# ---------------------------------------------------------------------------

def _cmd_parse(ctx: _Context) -> int:
    result = ctx.operation('parse')
    if ctx.args.json:
        ctx.emit_json(result['json'])
    else:
        ctx.emit(result['term'])
    return EXIT_OK


def _cmd_reduce(ctx: _Context, cls: Optional[str] = None) -> int:
    args = ctx.args
    result = ctx.operation('reduce', **{
        'class': cls or args.cls, 'fuel': ctx.settings.fuel, 'trace': getattr(args, 'trace', False),
    })
    if args.json:
        ctx.emit_json(result)
    else:
        for line in result['trace']:
            ctx.emit(line)
        ctx.emit(result['result'])
        if result['status'] != 'NormalForm':
            ctx.err.write(f"fuel {ctx.settings.fuel} exhausted after {result['steps']} steps\n")
    return EXIT_OK if result['status'] == 'NormalForm' else EXIT_OPEN


def _cmd_nf(ctx: _Context) -> int:
    return _cmd_reduce(ctx, 'full')


def _cmd_res_nf(ctx: _Context) -> int:
    result = ctx.operation('res-nf', strategy=ctx.args.strategy)
    if ctx.args.json:
        ctx.emit_json(result['normal_forms'])
    else:
        ctx.emit('\n'.join(result['normal_forms']))
    return EXIT_OK


def _cmd_taylor(ctx: _Context) -> int:
    result = ctx.operation('taylor', cap=ctx.settings.cap, nf=ctx.args.nf, fuel=ctx.settings.fuel)
    if ctx.args.json:
        ctx.emit_json(result)
    else:
        ctx.emit('\n'.join(result['terms']))
    return EXIT_OK if result['complete'] else EXIT_OPEN


def _cmd_bt(ctx: _Context) -> int:
    result = ctx.operation('bt', fuel=ctx.settings.fuel)
    if ctx.args.json:
        ctx.emit_json(result)
    else:
        ctx.emit(result['truncation'])
    return EXIT_OK


def _cmd_approximants(ctx: _Context) -> int:
    result = ctx.operation('approximants', fuel=ctx.settings.fuel, closure=ctx.args.closure)
    if ctx.args.json:
        ctx.emit_json(result)
    else:
        ctx.emit('\n'.join(result.get('closure', result['generators'])))
    return EXIT_OK


def _cmd_translate(ctx: _Context) -> int:
    result = ctx.operation('translate')
    if ctx.args.json:
        ctx.emit_json(result)
    else:
        ctx.emit(result['term'])
    return EXIT_OK


def _cmd_fragment(ctx: _Context) -> int:
    result = ctx.operation('fragment')
    if ctx.args.json:
        ctx.emit_json(result)
    else:
        ctx.emit('yes' if result['member'] else 'no')
    return EXIT_OK if result['member'] else EXIT_FAIL


def _cmd_meaningful(ctx: _Context) -> int:
    result = ctx.operation('meaningful', fuel=ctx.settings.fuel, budget=ctx.settings.budget)
    if ctx.args.json:
        ctx.emit_json(result)
    elif result['witness']:
        ctx.emit(f"Witness: {result['context']}  ({result['steps']} steps, {result['strategy']})")
        ctx.emit(result['result'])
    else:
        ctx.emit(f"Unknown: {result['reason']}")
    return EXIT_OK if result['witness'] else EXIT_OPEN


def _output_reports(ctx: _Context, reports: List[CheckReport]) -> None:
    args = ctx.args
    lang = ctx.settings.lang
    if args.json:
        ctx.emit(JsonRenderer().render(reports[0] if len(reports) == 1 else reports))
    elif args.format == 'markdown':
        ctx.emit(MarkdownRenderer().render(reports, {'lang': lang}))
    elif args.format == 'table':
        ctx.emit(TableRenderer().render(reports, {'lang': lang}))
    else:
        ctx.emit(TextRenderer().render(reports, {'lang': lang, 'details': args.verbose}))
    if args.export:
        TableRenderer().export(reports, args.export, lang)
    if ctx.settings.store_url:
        asyncio.run(store_reports(ctx.settings.store_url, reports))


async def store_reports(db_url: str, reports: Sequence[CheckReport]) -> None:
    async with ReportStore(db_url) as store:
        await store.save_all(reports)


def _cmd_check(ctx: _Context) -> int:
    args = ctx.args
    suite = get_suite(args.suite)
    mode = Mode.parse(args.mode) if args.mode else None
    terms = None
    if args.term:
        terms = [(text, resolve_term(text, suite.language, ctx.settings)) for text in args.term]
    report = run_suite(suite.name, ctx.settings, terms, mode)
    _output_reports(ctx, [report])
    return report.verdict.exit_code


def _cmd_fuzz(ctx: _Context) -> int:
    args = ctx.args
    mode = Mode.parse(args.mode) if args.mode else None
    report = fuzz(ctx.settings.seed, args.size, args.count, args.suite, ctx.settings, mode)
    _output_reports(ctx, [report])
    return report.verdict.exit_code


def _cmd_suites(ctx: _Context) -> int:
    if ctx.args.json:
        ctx.emit_json({name: {'kind': s.kind, 'description': s.description} for name, s in SUITES.items()})
        return EXIT_OK
    width = max(len(name) for name in SUITES)
    for name, suite in sorted(SUITES.items()):
        ctx.emit(f"{name.ljust(width)}  [{suite.kind}] {suite.description}")
    return EXIT_OK


def _cmd_corpus(ctx: _Context) -> int:
    result = OPERATIONS['corpus']({}, ctx.settings)
    if ctx.args.json:
        ctx.emit_json(result)
        return EXIT_OK
    for section in ('terms', 'lambda_terms'):
        for name, printed in result[section].items():
            ctx.emit(f"{name} = {printed}")
    return EXIT_OK


def _cmd_reports(ctx: _Context) -> int:
    if not ctx.settings.store_url:
        raise UsageError("reports needs --store <db_url>")

    async def fetch() -> List[CheckReport]:
        async with ReportStore(ctx.settings.store_url) as store:
            return await store.reports(ctx.args.check, ctx.args.limit)

    reports = asyncio.run(fetch())
    if ctx.args.json:
        ctx.emit(JsonRenderer().render([r.to_dict(True) for r in reports]))
    else:
        ctx.emit(TableRenderer().render(reports, {'lang': ctx.settings.lang}))
    return EXIT_OK


def _cmd_serve(ctx: _Context) -> int:
    from .service import create_app

    app = create_app(ctx.settings)
    app.start(host=ctx.args.host, port=ctx.args.port)
    return EXIT_OK


COMMANDS = {
    'parse': _cmd_parse,
    'reduce': _cmd_reduce,
    'nf': _cmd_nf,
    'res-nf': _cmd_res_nf,
    'taylor': _cmd_taylor,
    'bt': _cmd_bt,
    'approximants': _cmd_approximants,
    'translate': _cmd_translate,
    'fragment': _cmd_fragment,
    'meaningful': _cmd_meaningful,
    'check': _cmd_check,
    'fuzz': _cmd_fuzz,
    'suites': _cmd_suites,
    'corpus': _cmd_corpus,
    'reports': _cmd_reports,
    'serve': _cmd_serve,
}


def settings_from_args(args: argparse.Namespace, base: Optional[Settings] = None) -> Settings:
    base = base or Settings.from_env()
    return base.override(
        fuel=args.fuel, cap=args.cap, budget=args.budget, seed=args.seed,
        corpus=args.corpus, lambda_corpus=args.lambda_corpus,
        store_url=args.store, lang=args.locale,
    )


def dispatch(argv: Optional[Sequence[str]] = None, out: Optional[TextIO] = None,
             err: Optional[TextIO] = None, settings: Optional[Settings] = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(list(sys.argv[1:] if argv is None else argv))
    except UsageError as exc:
        err.write(f"usage error: {exc}\n{parser.format_usage()}")
        return EXIT_USAGE
    configure_logging(getattr(args, 'verbose', False), err)
    if not args.command:
        err.write(parser.format_usage())
        return EXIT_USAGE
    ctx = _Context(args, settings_from_args(args, settings), out, err)
    try:
        return COMMANDS[args.command](ctx)
    except ParseError as exc:
        err.write(f"{exc}\n{exc.pointer()}\n" if exc.text else f"{exc}\n")
        return EXIT_USAGE
    except (UsageError, CorpusError, ValueError) as exc:
        err.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except InvariantViolation as exc:
        logger.error("invariant violated: %s", exc)
        err.write(f"invariant violated: {exc}\n")
        return EXIT_FAIL
    except DBangError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_FAIL


def main() -> None:
    sys.exit(dispatch())
