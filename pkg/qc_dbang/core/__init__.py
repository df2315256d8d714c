from .errors import (
    CorpusError, DBangError, InvalidSiteError, InvariantViolation, LanguageError, NotNormalError, ParseError,
)
from .syntax import (
    App, Bag, Bang, BOT, Der, ESub, Lam, Language, Term, TermSet, Var, alpha_eq, canonicalize, enumerate_terms,
    print_term, size,
)
from .parser import from_json, parse, to_json
from .report import CheckReport, ReportBuilder, Verdict, merge_reports
from .rewrite import DBANG, ContextClass, NormalizeStatus, TestingContext
from .resource import res_normal_forms
from .taylor import TaylorSet, taylor_enum, taylor_nf
from .bohm import approximant_set, bt_truncate
from .lam import Mode, lam_normalize
from .frontends import Unknown, Witness, fragment_check, meaningful_witness, translate

__all__ = [
    'DBangError',
    'ParseError',
    'LanguageError',
    'InvalidSiteError',
    'NotNormalError',
    'InvariantViolation',
    'CorpusError',
    'Var', 'App', 'Lam', 'Bang', 'Der', 'ESub', 'Bag', 'BOT',
    'Term',
    'TermSet',
    'Language',
    'alpha_eq',
    'canonicalize',
    'enumerate_terms',
    'print_term',
    'size',
    'parse',
    'to_json',
    'from_json',
    'CheckReport',
    'ReportBuilder',
    'Verdict',
    'merge_reports',
    'DBANG',
    'ContextClass',
    'NormalizeStatus',
    'TestingContext',
    'res_normal_forms',
    'TaylorSet',
    'taylor_enum',
    'taylor_nf',
    'approximant_set',
    'bt_truncate',
    'Mode',
    'lam_normalize',
    'Witness',
    'Unknown',
    'fragment_check',
    'meaningful_witness',
    'translate',
]
