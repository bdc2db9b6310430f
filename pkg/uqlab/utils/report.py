# -*- coding: utf-8 -*-
"""
Report model and serialization
JSON at 15 significant digits, aligned tables at 6, CSV with a header row
"""

from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple
import csv
import io
import json
import logging
import sys

import numpy as np

from uqlab._core.errors import ConfigError

logger = logging.getLogger('uqlab')

JSON_DIGITS = 15
TABLE_DIGITS = 6
FORMATS = ('json', 'table', 'csv')


@dataclass
class BoundReport:
    """One measured quantity against a list of named bounds"""
    title: str
    lhs_name: str
    lhs_value: Optional[float]
    rhs: List[Tuple[str, Optional[float]]] = field(default_factory=list)
    verdict: str = ''
    metadata: Dict[str, Any] = field(default_factory=dict)

    def rhs_dict(self) -> Dict[str, Optional[float]]:
        return dict(self.rhs)


def _plain(obj, digits: int):
    """Recursively convert to JSON-native types, rounding floats to `digits` significant digits"""
    if hasattr(obj, '__dataclass_fields__'):
        obj = asdict(obj)
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): _plain(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v, digits) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist(), digits)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        if not np.isfinite(value):
            return None
        return float(f'{value:.{digits}g}')
    return obj


def report_to_dict(report: BoundReport, digits: int = JSON_DIGITS) -> Dict[str, Any]:
    """Ordered plain dict; rhs becomes a list of {name, value} objects"""
    return {
        'title': report.title,
        'lhs_name': report.lhs_name,
        'lhs_value': _plain(report.lhs_value, digits),
        'rhs': [{'name': name, 'value': _plain(value, digits)} for name, value in report.rhs],
        'verdict': report.verdict,
        'metadata': _plain(report.metadata, digits),
    }


def report_from_dict(data: Dict[str, Any]) -> BoundReport:
    return BoundReport(
        title=data['title'],
        lhs_name=data['lhs_name'],
        lhs_value=data['lhs_value'],
        rhs=[(entry['name'], entry['value']) for entry in data['rhs']],
        verdict=data.get('verdict', ''),
        metadata=data.get('metadata', {}),
    )


def _fmt(value, digits: int = TABLE_DIGITS) -> str:
    if value is None:
        return '-'
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (float, np.floating, int, np.integer)):
        return f'{float(value):.{digits}g}'
    return str(value)


def render_table(rows: Sequence[Sequence[Any]], header: Sequence[str]) -> str:
    """Aligned ASCII table"""
    cells = [[str(h) for h in header]] + [[_fmt(c) for c in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    line = '+' + '+'.join('-' * (w + 2) for w in widths) + '+'
    out = [line]
    for k, row in enumerate(cells):
        out.append('| ' + ' | '.join(c.ljust(w) for c, w in zip(row, widths)) + ' |')
        if k == 0:
            out.append(line)
    out.append(line)
    return '\n'.join(out)


def _report_rows(report: BoundReport) -> List[Tuple[str, Any]]:
    return [(report.lhs_name, report.lhs_value)] + list(report.rhs)


def render_report(report: BoundReport, fmt: str) -> str:
    """Text of a single report (or a list of reports) in the requested format"""
    if fmt not in FORMATS:
        raise ConfigError(f'unknown output format {fmt!r}; choose from {", ".join(FORMATS)}')
    reports = report if isinstance(report, list) else [report]

    if fmt == 'json':
        payload = report_to_dict(reports[0]) if len(reports) == 1 else [report_to_dict(r) for r in reports]
        return json.dumps(payload, ensure_ascii=False, indent=2) + '\n'

    if fmt == 'csv':
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator='\n')
        writer.writerow(['title', 'name', 'value'])
        for r in reports:
            for name, value in _report_rows(r):
                writer.writerow([r.title, name, '' if value is None else repr(float(value))])
        return buf.getvalue()

    blocks = []
    for r in reports:
        block = [r.title, render_table(_report_rows(r), ('quantity', 'value'))]
        if r.verdict:
            block.append(f'verdict: {r.verdict}')
        blocks.append('\n'.join(block))
    return '\n\n'.join(blocks) + '\n'


def emit_report(report, fmt: str = 'json', path: Optional[str] = None):
    """
    Write a report to path, or to stdout when path is None

    Args:
        report: BoundReport or list of BoundReport
        fmt: json | table | csv
        path: output file
    """
    text = render_report(report, fmt)
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    try:
        with open(path, 'w', encoding='utf-8', newline='') as f:
            f.write(text)
    except OSError as e:
        raise ConfigError(f'cannot write report to {path}: {e}')
    logger.info('Wrote %s report to %s', fmt, path)


def write_rows_csv(rows: Iterable[Sequence[float]], header: Sequence[str], path: str):
    """Plain CSV dump (e.g. a phase-space grid as u,v,p rows)"""
    try:
        with open(path, 'w', encoding='utf-8', newline='') as f:
            writer = csv.writer(f, lineterminator='\n')
            writer.writerow(header)
            for row in rows:
                writer.writerow([repr(float(v)) for v in row])
    except OSError as e:
        raise ConfigError(f'cannot write CSV to {path}: {e}')
