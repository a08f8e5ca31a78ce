# Copyright (c) 2024 The pymcrt developers
# All rights reserved.
#
# SPDX-License-Identifier: BSD-3-Clause

"""Plot-ready CSV and JSON reports.

   Cells are formatted before they reach the writers: exact rationals as
   ``p/q`` strings, other numbers as 15 significant digit decimals, so that
   identical computations always yield byte-identical reports.
"""

from dataclasses import dataclass, field
from enum import Enum, unique
from fractions import Fraction
from json import dump
from typing import Any, Dict, List, Sequence, TextIO, Tuple
from pandas import DataFrame
from .misc import fraction_str, to_decimal_str


@unique
class ReportFormat(Enum):
    """Output formats."""
    CSV = 'csv'
    JSON = 'json'


def exact_cell(value: Any) -> str:
    """Format an exact rational."""
    return fraction_str(value)


def decimal_cell(value: Any) -> str:
    """Format any real number as a decimal."""
    return to_decimal_str(value)


def cell(value: Any) -> str:
    """Format a value, exactly if it is an int or a Fraction."""
    if isinstance(value, str):
        return value
    if isinstance(value, (int, Fraction)):
        return exact_cell(value)
    return decimal_cell(value)


@dataclass
class Report:
    """Table of formatted cells, with trailing summary items.

       :param columns: column names
       :param rows: row values, formatted with :py:func:`cell`
       :param footer: named summary values, emitted after the rows
    """
    columns: Sequence[str]
    rows: List[Tuple[Any, ...]] = field(default_factory=list)
    footer: Dict[str, Any] = field(default_factory=dict)

    def add_row(self, *values: Any) -> None:
        """Append a row."""
        if len(values) != len(self.columns):
            raise ValueError(f'Expected {len(self.columns)} cells, got '
                             f'{len(values)}')
        self.rows.append(tuple(values))

    def cells(self) -> List[List[str]]:
        """Formatted rows."""
        return [[cell(v) for v in row] for row in self.rows]

    def write(self, out: TextIO, fmt: ReportFormat = ReportFormat.CSV) \
            -> None:
        """Emit the report into a text stream."""
        if fmt == ReportFormat.JSON:
            write_json({'columns': list(self.columns),
                        'rows': [dict(zip(self.columns, row))
                                 for row in self.cells()],
                        'footer': {k: cell(v)
                                   for k, v in self.footer.items()}}, out)
            return
        write_csv(self.columns, self.cells(), out)
        for name, value in self.footer.items():
            out.write(f'#{name},{cell(value)}\n')


def write_csv(columns: Sequence[str], rows: Sequence[Sequence[str]],
              out: TextIO) -> None:
    """Comma separated values with a header row and LF line endings."""
    frame = DataFrame(list(rows), columns=list(columns), dtype=str)
    frame.to_csv(out, index=False, lineterminator='\n')


def write_json(payload: Any, out: TextIO) -> None:
    """UTF-8 JSON document with sorted keys."""
    dump(payload, out, sort_keys=True, indent=2, ensure_ascii=False)
    out.write('\n')
