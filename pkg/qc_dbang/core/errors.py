from typing import Optional


class DBangError(Exception):
    """qc_dbang 异常基类"""


class ParseError(DBangError):
    """语法错误, 带出错位置"""

    def __init__(self, message: str, position: Optional[int] = None, text: str = ""):
        self.message = message
        self.position = position
        self.text = text
        if position is None:
            super().__init__(message)
        else:
            super().__init__(f"{message} at position {position}")

    def pointer(self) -> str:
        """返回带 ^ 指示的出错行"""
        if self.position is None or not self.text:
            return self.text
        return f"{self.text}\n{' ' * self.position}^"


class LanguageError(ParseError):
    """当前语言模式不允许的构造 (bot / bag / ! / der)"""


class InvalidSiteError(DBangError):
    """step_at 的位置不是该类别下的 redex"""


class NotNormalError(DBangError):
    """classify_nf 的输入不是正规形"""


class InvariantViolation(DBangError):
    """内部不变量被破坏, 例如 Böhm 近似元的 join 失败"""


class CorpusError(DBangError):
    """语料文件格式错误或名字不存在"""
