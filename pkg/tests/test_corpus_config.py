import pytest

from qc_dbang.config import DATA_DIR, Settings
from qc_dbang.core.errors import CorpusError
from qc_dbang.core.syntax import Language, print_term
from qc_dbang.corpus import load_corpus, parse_corpus


def test_bundled_corpora(corpus, lambda_corpus):
    assert corpus.language is Language.DBANG
    assert lambda_corpus.language is Language.LAMBDA
    assert print_term(corpus.get('Delta')) == r'\x. x !x'
    assert 'running' in corpus
    assert 'stuck_cbv' in lambda_corpus
    assert corpus.names()[0] == 'Delta'


def test_unknown_corpus_name(corpus):
    with pytest.raises(CorpusError, match='unknown corpus term'):
        corpus.get('Theta')


def test_parse_corpus_skips_comments_and_blank_lines():
    text = "# lang: resource\n\n# bags\nempty = []\npair = x [y, z]\n"
    parsed = parse_corpus(text)
    assert parsed.language is Language.RESOURCE
    assert parsed.names() == ['empty', 'pair']


@pytest.mark.parametrize('text', [
    "I = \\x. x\n",
    "# lang: klingon\nI = x\n",
    "# lang: dbang\nI \\x. x\n",
    "# lang: dbang\nI = x\nI = y\n",
    "# lang: dbang\nbad = (x\n",
    "# lang: lambda\nbang = !x\n",
])
def test_malformed_corpora(text):
    with pytest.raises(CorpusError):
        parse_corpus(text, 'sample.txt')


def test_header_only_corpus_is_empty():
    assert len(parse_corpus("# lang: dbang\n")) == 0


def test_missing_corpus_file(tmp_path):
    with pytest.raises(CorpusError, match='cannot read corpus'):
        load_corpus(tmp_path / 'absent.txt')


def test_settings_from_environment():
    settings = Settings.from_env({
        'QC_DBANG_FUEL': '5',
        'QC_DBANG_LANG': 'zh_CN',
        'QC_DBANG_CAP': 'many',
        'QC_DBANG_STORE_URL': 'sqlite://:memory:',
    })
    assert settings.fuel == 5
    assert settings.lang == 'zh_CN'
    assert settings.cap == Settings().cap
    assert settings.store_url == 'sqlite://:memory:'


def test_settings_override_ignores_none():
    base = Settings()
    changed = base.override(fuel=3, cap=None, unknown=1)
    assert changed.fuel == 3
    assert changed.cap == base.cap
    assert base.fuel == 12
    assert changed.to_dict()['corpus'] == str(DATA_DIR / 'corpus.txt')
