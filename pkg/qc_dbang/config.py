import logging
import os
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

logger = logging.getLogger(__name__)

ENV_PREFIX = 'QC_DBANG_'
DATA_DIR = Path(__file__).parent / 'data'


@dataclass
class Settings:
    """默认参数; 环境变量 QC_DBANG_<NAME> 覆盖默认值, 命令行参数再覆盖环境变量"""
    fuel: int = 12                 # 归约燃料
    cap: int = 8                   # Taylor 尺寸上限
    budget: int = 200              # meaningful 搜索预算
    reduct_cap: int = 300          # reducts 最多保留的项数
    fuel_factor: int = 3           # 翻译检查中 dBang 一侧的燃料倍数
    seed: int = 0
    language: str = 'dbang'
    lang: str = 'en_US'            # 报告语言 en_US, zh_CN
    corpus: str = str(DATA_DIR / 'corpus.txt')
    lambda_corpus: str = str(DATA_DIR / 'corpus_lambda.txt')
    store_url: Optional[str] = None

    @classmethod
    def from_env(cls, environ: Optional[Mapping[str, str]] = None) -> 'Settings':
        environ = os.environ if environ is None else environ
        settings = cls()
        for f in fields(cls):
            raw = environ.get(ENV_PREFIX + f.name.upper())
            if raw is None:
                continue
            current = getattr(settings, f.name)
            try:
                value: Any = int(raw) if isinstance(current, int) else raw
            except ValueError:
                logger.warning("ignoring %s%s=%r: not an integer", ENV_PREFIX, f.name.upper(), raw)
                continue
            setattr(settings, f.name, value)
        return settings

    def override(self, **values: Any) -> 'Settings':
        """用非 None 的值覆盖, 返回新对象"""
        data = self.to_dict()
        data.update({k: v for k, v in values.items() if v is not None and k in data})
        return Settings(**data)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)
