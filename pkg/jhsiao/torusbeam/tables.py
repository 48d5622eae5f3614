"""Result tables and their CSV/JSON form.

Column order: experiment, N, n_t, K1, K2, trials, then metric columns
named <solver>_<metric>_<stat>.  Floats are written with 9 significant
digits ('.' decimal point, no grouping), ints as ints, missing values
as an empty CSV cell or JSON null.  Non-finite floats are inf, -inf and
nan in CSV and the strings "inf", "-inf" and "nan" in JSON.  Rendering
is deterministic so emitting the same table twice gives identical
bytes, and emit(load(emit(t))) == emit(t).
"""
from __future__ import print_function
__all__ = [
    'ResultTable', 'BASE_COLUMNS', 'CSV', 'JSON', 'render', 'emit', 'load',
    'emit_histogram', 'check_format',
]

import csv
import io
import json
import math
import sys

CSV = 'csv'
JSON = 'json'
FORMATS = (CSV, JSON)
BASE_COLUMNS = ('experiment', 'N', 'n_t', 'K1', 'K2', 'trials')
INT_COLUMNS = frozenset(('N', 'n_t', 'trials', 'oracle_violations'))
STR_COLUMNS = frozenset(('experiment',))


class ResultTable(object):
    """Aggregated rows plus (optionally) the per-trial records.

    columns: full column order, BASE_COLUMNS first
    rows: list of dicts keyed by column
    records: {sweep point: [TrialRecord]} (not serialized)
    histograms: {sweep point: Histogram} (not serialized, see emit_histogram)
    """
    def __init__(self, experiment, columns, rows=None, records=None, histograms=None):
        columns = tuple(columns)
        if columns[:len(BASE_COLUMNS)] != BASE_COLUMNS:
            raise ValueError(
                'columns must start with {}, got {}'.format(BASE_COLUMNS, columns))
        self.experiment = experiment
        self.columns = columns
        self.rows = rows if rows is not None else []
        self.records = records if records is not None else {}
        self.histograms = histograms if histograms is not None else {}

    def __len__(self):
        return len(self.rows)

    def column(self, name):
        return [row.get(name) for row in self.rows]


def _fixed(name, value):
    """Value as it is rendered (9 significant digits for floats)."""
    if value is None:
        return None
    if name in STR_COLUMNS:
        return str(value)
    if name in INT_COLUMNS:
        return int(value)
    return float('{:.9g}'.format(float(value)))


def _cell(name, value):
    value = _fixed(name, value)
    if value is None:
        return ''
    if isinstance(value, float):
        return '{:.9g}'.format(value)
    return str(value)


def check_format(fmt):
    """Lower-cased fmt, or ValueError if it is not one of FORMATS."""
    fmt = str(fmt).lower()
    if fmt not in FORMATS:
        raise ValueError('format must be one of {}, got {}'.format(FORMATS, fmt))
    return fmt


def _json_value(value):
    # JSON has no inf/nan literals
    if isinstance(value, float) and not math.isfinite(value):
        return '{:.9g}'.format(value)
    return value


def render(table, fmt=CSV):
    """Return the table as text."""
    fmt = check_format(fmt)
    if fmt == CSV:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator='\n')
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow([_cell(c, row.get(c)) for c in table.columns])
        return buf.getvalue()
    rows = [
        [(c, _fixed(c, row.get(c))) for c in table.columns]
        for row in table.rows]
    # list of pairs keeps the column order without relying on dict order
    body = ',\n'.join(
        '  {' + ', '.join(
            '{}: {}'.format(json.dumps(k), json.dumps(_json_value(v)))
            for k, v in row) + '}'
        for row in rows)
    if body:
        return '[\n' + body + '\n]\n'
    return '[]\n'


def emit(table, path, fmt=CSV):
    """Write the table to path ('-' is stdout) as UTF-8 CSV or JSON."""
    text = render(table, fmt)
    if path == '-':
        sys.stdout.write(text)
        return
    try:
        with io.open(path, 'w', encoding='utf-8', newline='') as f:
            f.write(text)
    except (IOError, OSError) as e:
        raise OSError('could not write {}: {}'.format(path, e))


def _parse(name, text):
    if text == '' or text is None:
        return None
    if name in STR_COLUMNS:
        return text
    if name in INT_COLUMNS:
        return int(text)
    return float(text)


def load(path, fmt=CSV):
    """Read a table written by emit()."""
    fmt = check_format(fmt)
    try:
        with io.open(path, 'r', encoding='utf-8', newline='') as f:
            text = f.read()
    except (IOError, OSError) as e:
        raise OSError('could not read {}: {}'.format(path, e))
    if fmt == CSV:
        lines = list(csv.reader(io.StringIO(text)))
        if not lines:
            raise ValueError('{}: empty table'.format(path))
        columns = lines[0]
        rows = [
            dict((c, _parse(c, v)) for c, v in zip(columns, line))
            for line in lines[1:]]
    else:
        raw = json.loads(text)
        if raw:
            columns = list(raw[0].keys())
        else:
            columns = list(BASE_COLUMNS)
        rows = [dict((c, _parse(c, r.get(c))) for c in columns) for r in raw]
    experiment = rows[0]['experiment'] if rows else None
    return ResultTable(experiment, columns, rows)


def emit_histogram(hist, path):
    """Write a Histogram as CSV: left, right, count, density."""
    lines = ['left,right,count,density\n']
    edges = hist.bin_edges
    for i in range(hist.counts.size):
        lines.append('{:.9g},{:.9g},{:d},{:.9g}\n'.format(
            edges[i], edges[i + 1], int(hist.counts[i]),
            hist.normalized_density[i]))
    try:
        with io.open(path, 'w', encoding='utf-8', newline='') as f:
            f.write(''.join(lines))
    except (IOError, OSError) as e:
        raise OSError('could not write {}: {}'.format(path, e))
