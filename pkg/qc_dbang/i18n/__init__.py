from .translations import TRANSLATIONS, get_text

__all__ = ['TRANSLATIONS', 'get_text']
