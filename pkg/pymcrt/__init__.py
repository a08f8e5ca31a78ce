# Copyright (c) 2024 The pymcrt developers
# All rights reserved.
#
# SPDX-License-Identifier: BSD-3-Clause

#pylint: disable-msg=missing-docstring

__version__ = '0.3.0'
__title__ = 'PyMcrt'
__description__ = 'Multicritical random tree laboratory (exact and numerical)'
__uri__ = 'https://github.com/pymcrt/pymcrt'
__doc__ = __description__ + ' <' + __uri__ + '>'
__author__ = 'The pymcrt developers'
# For all support requests, please open a new issue on GitHub
__email__ = 'pymcrt@users.noreply.github.com'
__license__ = 'Modified BSD'
__copyright__ = 'Copyright (c) 2024 The pymcrt developers'


from logging import WARNING, NullHandler, getLogger


class McrtLogger:

    log = getLogger('pymcrt')
    log.addHandler(NullHandler())
    log.setLevel(level=WARNING)

    @classmethod
    def set_formatter(cls, formatter):
        handlers = list(cls.log.handlers)
        for handler in handlers:
            handler.setFormatter(formatter)

    @classmethod
    def get_level(cls):
        return cls.log.getEffectiveLevel()

    @classmethod
    def set_level(cls, level):
        cls.log.setLevel(level=level)
