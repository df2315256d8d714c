from .config import Settings
from .core import (
    DBANG, ContextClass, Language, Mode, TermSet, meaningful_witness, parse, print_term, translate,
)
from .service import CalculusSite, create_app
from .suites import SUITES, fuzz, run_suite

__version__ = "0.2.0"

__all__ = [
    'Settings',
    'DBANG',
    'ContextClass',
    'Language',
    'Mode',
    'TermSet',
    'parse',
    'print_term',
    'translate',
    'meaningful_witness',
    'CalculusSite',
    'create_app',
    'SUITES',
    'run_suite',
    'fuzz',
]
