"""
具体语法解析与 JSON 编解码.

    term    := "\\" ident+ "." term | app
    app     := postfix+
    postfix := atom ("[" term "/" ident "]")*
    atom    := ident | "bot" | "!" postfix | "der" postfix | "(" term ")" | "[" terms? "]"
"""
import re
from typing import Any, Dict, List, Union

from .errors import LanguageError, ParseError
from .syntax import (
    BOT, KEYWORDS, App, Bag, Bang, Bot, Der, ESub, Lam, Language, Term, Var,
    language_violation,
)

_TOKEN_RE = re.compile(r"\s*(?:(?P<ident>[A-Za-z_][A-Za-z0-9_']*)|(?P<sym>[\\().\[\],/!]))")

_ATOM_START = {'(', '[', '!'}


class _Token:
    __slots__ = ('kind', 'value', 'pos')

    def __init__(self, kind: str, value: str, pos: int):
        self.kind = kind      # ident / keyword / sym / eof
        self.value = value
        self.pos = pos

    def __repr__(self) -> str:
        return f"{self.kind}:{self.value}@{self.pos}"


def tokenize(text: str) -> List[_Token]:
    tokens: List[_Token] = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        match = _TOKEN_RE.match(text, pos)
        if not match or match.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        if match.group('ident'):
            value = match.group('ident')
            kind = 'keyword' if value in KEYWORDS else 'ident'
            tokens.append(_Token(kind, value, match.start('ident')))
        else:
            tokens.append(_Token('sym', match.group('sym'), match.start('sym')))
        pos = match.end()
    tokens.append(_Token('eof', '', len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, language: Language):
        self.text = text
        self.language = language
        self.tokens = tokenize(text)
        self.i = 0

    # -- token helpers
    def peek(self, offset: int = 0) -> _Token:
        return self.tokens[min(self.i + offset, len(self.tokens) - 1)]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str) -> _Token:
        tok = self.peek()
        if tok.kind != 'sym' or tok.value != value:
            self.error(f"expected {value!r}", tok)
        return self.advance()

    def expect_ident(self) -> str:
        tok = self.peek()
        if tok.kind != 'ident':
            self.error("expected identifier", tok)
        return self.advance().value

    def error(self, message: str, tok: _Token):
        found = tok.value or 'end of input'
        raise ParseError(f"{message}, found {found!r}", tok.pos, self.text)

    def forbid(self, construct: str, tok: _Token):
        raise LanguageError(
            f"{construct!r} is not allowed in {self.language.value} mode", tok.pos, self.text
        )

    # -- grammar
    def parse(self) -> Term:
        term = self.term()
        if self.peek().kind != 'eof':
            self.error("unexpected token", self.peek())
        return term

    def term(self) -> Term:
        tok = self.peek()
        if tok.kind == 'sym' and tok.value == '\\':
            self.advance()
            binders = [self.expect_ident()]
            while self.peek().kind == 'ident':
                binders.append(self.advance().value)
            self.expect('.')
            body = self.term()
            for binder in reversed(binders):
                body = Lam(binder, body)
            return body
        return self.app()

    def starts_atom(self, tok: _Token) -> bool:
        if tok.kind in ('ident', 'keyword'):
            return True
        return tok.kind == 'sym' and tok.value in _ATOM_START

    def app(self) -> Term:
        if not self.starts_atom(self.peek()):
            self.error("expected a term", self.peek())
        fun = self.postfix()
        while self.starts_atom(self.peek()):
            fun = App(fun, self.postfix())
        return fun

    def postfix(self) -> Term:
        term = self.atom()
        while self.peek().kind == 'sym' and self.peek().value == '[' and self.is_esub_suffix():
            self.advance()
            arg = self.term()
            self.expect('/')
            binder = self.expect_ident()
            self.expect(']')
            term = ESub(term, arg, binder)
        return term

    def is_esub_suffix(self) -> bool:
        """'[' 所包围的区域以 '/ ident ]' 结尾时是显式替换"""
        depth = 0
        j = self.i
        while j < len(self.tokens):
            tok = self.tokens[j]
            if tok.kind == 'sym' and tok.value in ('[', '('):
                depth += 1
            elif tok.kind == 'sym' and tok.value in (']', ')'):
                depth -= 1
                if depth == 0:
                    break
            elif tok.kind == 'eof':
                return False
            j += 1
        if j - 2 <= self.i:
            return False
        slash, ident = self.tokens[j - 2], self.tokens[j - 1]
        return slash.kind == 'sym' and slash.value == '/' and ident.kind == 'ident'

    def atom(self) -> Term:
        tok = self.peek()
        if tok.kind == 'ident':
            self.advance()
            return Var(tok.value)
        if tok.kind == 'keyword' and tok.value == 'bot':
            if self.language is not Language.DBANG_BOT:
                self.forbid('bot', tok)
            self.advance()
            return BOT
        if tok.kind == 'keyword' and tok.value == 'der':
            if self.language is Language.LAMBDA:
                self.forbid('der', tok)
            self.advance()
            return Der(self.postfix())
        if tok.kind == 'sym' and tok.value == '!':
            if self.language in (Language.RESOURCE, Language.LAMBDA):
                self.forbid('!', tok)
            self.advance()
            return Bang(self.postfix())
        if tok.kind == 'sym' and tok.value == '(':
            self.advance()
            inner = self.term()
            self.expect(')')
            return inner
        if tok.kind == 'sym' and tok.value == '[':
            if self.language is not Language.RESOURCE:
                self.forbid('bag', tok)
            self.advance()
            elements: List[Term] = []
            if not (self.peek().kind == 'sym' and self.peek().value == ']'):
                elements.append(self.term())
                while self.peek().kind == 'sym' and self.peek().value == ',':
                    self.advance()
                    elements.append(self.term())
            self.expect(']')
            return Bag(tuple(elements))
        self.error("expected a term", tok)


def parse(text: str, language: Union[Language, str] = Language.DBANG) -> Term:
    """解析具体语法; 出错时抛出带位置的 ParseError"""
    return _Parser(text, Language(language)).parse()


# ---------------------------------------------------------------------------
# JSON 术语格式
# ---------------------------------------------------------------------------

def to_json(t: Term) -> Dict[str, Any]:
    if isinstance(t, Var):
        return {'kind': 'var', 'name': t.name}
    if isinstance(t, App):
        return {'kind': 'app', 'fun': to_json(t.fun), 'arg': to_json(t.arg)}
    if isinstance(t, Lam):
        return {'kind': 'lam', 'binder': t.binder, 'body': to_json(t.body)}
    if isinstance(t, Bang):
        return {'kind': 'bang', 'body': to_json(t.body)}
    if isinstance(t, Der):
        return {'kind': 'der', 'body': to_json(t.body)}
    if isinstance(t, ESub):
        return {'kind': 'esub', 'body': to_json(t.body), 'arg': to_json(t.arg), 'binder': t.binder}
    if isinstance(t, Bag):
        return {'kind': 'bag', 'elements': [to_json(e) for e in t.elements]}
    if isinstance(t, Bot):
        return {'kind': 'bot'}
    raise TypeError(f"not a term: {t!r}")


def from_json(data: Dict[str, Any], language: Union[Language, str] = Language.DBANG) -> Term:
    """JSON 对象转术语, 并检查语言限制"""
    language = Language(language)
    term = _from_json(data)
    bad = language_violation(term, language)
    if bad:
        raise LanguageError(f"{bad!r} is not allowed in {language.value} mode")
    return term


def _from_json(data: Any) -> Term:
    if not isinstance(data, dict) or 'kind' not in data:
        raise ParseError(f"malformed JSON term: {data!r}")
    kind = data['kind']
    try:
        if kind == 'var':
            return Var(_ident(data['name']))
        if kind == 'app':
            return App(_from_json(data['fun']), _from_json(data['arg']))
        if kind == 'lam':
            return Lam(_ident(data['binder']), _from_json(data['body']))
        if kind == 'bang':
            return Bang(_from_json(data['body']))
        if kind == 'der':
            return Der(_from_json(data['body']))
        if kind == 'esub':
            return ESub(_from_json(data['body']), _from_json(data['arg']), _ident(data['binder']))
        if kind == 'bag':
            return Bag(tuple(_from_json(e) for e in data['elements']))
        if kind == 'bot':
            return BOT
    except KeyError as exc:
        raise ParseError(f"JSON term of kind {kind!r} misses field {exc.args[0]!r}") from exc
    raise ParseError(f"unknown JSON term kind {kind!r}")


_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")


def _ident(name: Any) -> str:
    if not isinstance(name, str) or not _IDENT_RE.match(name) or name in KEYWORDS:
        raise ParseError(f"invalid identifier {name!r}")
    return name

