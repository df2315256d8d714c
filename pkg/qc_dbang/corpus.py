"""
命名项语料: 每行 `name = term`, 首个注释行 `# lang: <language>` 决定解析模式.
"""
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Tuple, Union

from .core.errors import CorpusError, ParseError
from .core.parser import parse
from .core.syntax import Language, Term

logger = logging.getLogger(__name__)

_LANG_RE = re.compile(r"#\s*lang:\s*(\S+)")
_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")


@dataclass
class Corpus:
    language: Language
    terms: Dict[str, Term] = field(default_factory=dict)
    source: Optional[str] = None

    def get(self, name: str) -> Term:
        try:
            return self.terms[name]
        except KeyError:
            raise CorpusError(f"unknown corpus term {name!r}; known: {', '.join(self.names())}")

    def names(self) -> List[str]:
        return list(self.terms)

    def items(self) -> Iterator[Tuple[str, Term]]:
        return iter(self.terms.items())

    def __contains__(self, name: object) -> bool:
        return name in self.terms

    def __len__(self) -> int:
        return len(self.terms)


def parse_corpus(text: str, source: Optional[str] = None) -> Corpus:
    language: Optional[Language] = None
    terms: Dict[str, Term] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith('#'):
            match = _LANG_RE.match(line)
            if match and language is None:
                try:
                    language = Language(match.group(1))
                except ValueError:
                    raise CorpusError(f"{source or '<corpus>'}:{lineno}: unknown language {match.group(1)!r}")
            continue
        if language is None:
            raise CorpusError(f"{source or '<corpus>'}:{lineno}: missing '# lang:' header")
        name, sep, body = line.partition('=')
        name = name.strip()
        if not sep or not _NAME_RE.match(name):
            raise CorpusError(f"{source or '<corpus>'}:{lineno}: expected 'name = term'")
        if name in terms:
            raise CorpusError(f"{source or '<corpus>'}:{lineno}: duplicate name {name!r}")
        try:
            terms[name] = parse(body.strip(), language)
        except ParseError as exc:
            raise CorpusError(f"{source or '<corpus>'}:{lineno}: {exc}") from exc
    if language is None:
        raise CorpusError(f"{source or '<corpus>'}: missing '# lang:' header")
    logger.debug("loaded %d terms from %s", len(terms), source or '<corpus>')
    return Corpus(language, terms, source)


def load_corpus(path: Union[str, Path]) -> Corpus:
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as exc:
        raise CorpusError(f"cannot read corpus {path}: {exc.strerror}") from exc
    return parse_corpus(text, str(path))
