import pytest

from qc_dbang.config import DATA_DIR, Settings
from qc_dbang.corpus import load_corpus


@pytest.fixture(scope="session")
def corpus():
    return load_corpus(DATA_DIR / 'corpus.txt')


@pytest.fixture(scope="session")
def lambda_corpus():
    return load_corpus(DATA_DIR / 'corpus_lambda.txt')


@pytest.fixture
def settings():
    # 桌面规模的参数, 保证测试很快
    return Settings(fuel=8, cap=6, budget=100, reduct_cap=200)
