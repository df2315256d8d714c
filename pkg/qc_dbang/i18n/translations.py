TRANSLATIONS = {
    'zh_CN': {
        # 通用
        'report_title': 'dBang 性质检查报告',
        'check': '检查',
        'params': '参数',
        'verdict': '结论',
        'counts': '计数',
        'details': '详情',
        'wall_time': '耗时 (秒)',
        'counterexample': '反例',
        'reason': '原因',
        'no_data': '暂无数据',

        # 结论
        'pass': '通过',
        'fail': '失败',
        'inconclusive': '无定论',

        # 提示信息
        'parse_error': '语法错误',
    },
    'en_US': {
        # common
        'report_title': 'dBang property check report',
        'check': 'Check',
        'params': 'Parameters',
        'verdict': 'Verdict',
        'counts': 'Counts',
        'details': 'Details',
        'wall_time': 'Wall time (s)',
        'counterexample': 'Counterexample',
        'reason': 'Reason',
        'no_data': 'No data',

        # verdicts
        'pass': 'PASS',
        'fail': 'FAIL',
        'inconclusive': 'INCONCLUSIVE',

        # messages
        'parse_error': 'Syntax error',
    },
}

def get_text(key: str, lang: str = None) -> str:
    """获取指定语言的文本"""
    # 如果没有指定语言，使用英文作为默认值
    default_lang = 'en_US'
    current_lang = lang or default_lang
    return TRANSLATIONS.get(current_lang, TRANSLATIONS[default_lang]).get(key, key)
