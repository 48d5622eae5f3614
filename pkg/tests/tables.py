from __future__ import print_function
import io
import json
import math
import os
import shutil
import sys
import tempfile

import numpy as np

from jhsiao.torusbeam import spectral
from jhsiao.torusbeam import tables

COLUMNS = tables.BASE_COLUMNS + ('ra_snr_mean', 'ra_snr_std', 'oracle_violations')


def sample_table(nrows=2):
    rows = []
    for i in range(nrows):
        rows.append(dict(
            experiment='ORACLE', N=4 + i, n_t=2, K1=float('inf'), K2=0.5,
            trials=3, ra_snr_mean=1.0 / 3 + i, ra_snr_std=None,
            oracle_violations=0))
    return tables.ResultTable('ORACLE', COLUMNS, rows)


def read(path):
    with io.open(path, 'r', encoding='utf-8', newline='') as f:
        return f.read()


def test_columns_checked():
    try:
        tables.ResultTable('SNR_VS_N', ('N', 'experiment'))
    except ValueError:
        pass
    else:
        raise AssertionError('expected ValueError for bad column order')


def test_render_csv():
    text = tables.render(sample_table(1))
    lines = text.split('\n')
    assert len(lines) == 3 and lines[-1] == ''
    assert lines[0] == ','.join(COLUMNS)
    assert lines[1] == 'ORACLE,4,2,inf,0.5,3,0.333333333,,0'


def test_render_empty():
    table = tables.ResultTable('SPIKE', tables.BASE_COLUMNS)
    assert tables.render(table) == ','.join(tables.BASE_COLUMNS) + '\n'
    assert tables.render(table, 'json') == '[]\n'
    assert len(table) == 0


def test_render_json():
    text = tables.render(sample_table(1), tables.JSON)
    assert text.startswith('[\n  {"experiment": "ORACLE", "N": 4,')
    assert '"ra_snr_std": null' in text
    assert '"K1": "inf"' in text


def reject_constant(name):
    raise ValueError('non-standard JSON constant {}'.format(name))


def test_json_non_finite():
    table = sample_table()
    table.rows[1]['ra_snr_mean'] = float('nan')
    text = tables.render(table, tables.JSON)
    raw = json.loads(text, parse_constant=reject_constant)
    assert raw[0]['K1'] == 'inf' and raw[1]['ra_snr_mean'] == 'nan'
    d = tempfile.mkdtemp()
    try:
        path = os.path.join(d, 'inf.json')
        tables.emit(table, path, tables.JSON)
        loaded = tables.load(path, tables.JSON)
        assert loaded.rows[0]['K1'] == float('inf')
        assert math.isnan(loaded.rows[1]['ra_snr_mean'])
        assert loaded.rows[0]['N'] == 4 and loaded.rows[0]['experiment'] == 'ORACLE'
        assert tables.render(loaded, tables.JSON) == text
    finally:
        shutil.rmtree(d)


def test_render_rejects_format():
    try:
        tables.render(sample_table(), 'xml')
    except ValueError:
        pass
    else:
        raise AssertionError('expected ValueError')
    assert tables.check_format('JSON') == tables.JSON


def test_emit_load_round_trip():
    d = tempfile.mkdtemp()
    try:
        for fmt in tables.FORMATS:
            first = os.path.join(d, 'first.' + fmt)
            second = os.path.join(d, 'second.' + fmt)
            tables.emit(sample_table(), first, fmt)
            loaded = tables.load(first, fmt)
            assert loaded.experiment == 'ORACLE'
            assert loaded.columns == COLUMNS
            assert loaded.rows[1]['N'] == 5
            assert loaded.rows[0]['ra_snr_std'] is None
            assert loaded.rows[0]['ra_snr_mean'] == 0.333333333
            tables.emit(loaded, second, fmt)
            assert read(first) == read(second)
    finally:
        shutil.rmtree(d)


def test_emit_twice_identical():
    d = tempfile.mkdtemp()
    try:
        path = os.path.join(d, 'out.csv')
        tables.emit(sample_table(), path)
        first = read(path)
        tables.emit(sample_table(), path)
        assert read(path) == first
    finally:
        shutil.rmtree(d)


def test_emit_bad_path():
    path = os.path.join(tempfile.gettempdir(), 'no-such-dir-torusbeam', 'x.csv')
    try:
        tables.emit(sample_table(), path)
    except OSError as e:
        assert path in str(e)
    else:
        raise AssertionError('expected OSError')


def test_load_empty_json():
    d = tempfile.mkdtemp()
    try:
        path = os.path.join(d, 'empty.json')
        tables.emit(tables.ResultTable('SPIKE', tables.BASE_COLUMNS), path, 'json')
        loaded = tables.load(path, 'json')
        assert loaded.columns == tables.BASE_COLUMNS
        assert len(loaded) == 0
    finally:
        shutil.rmtree(d)


def test_emit_histogram():
    hist = spectral.histogram(np.array([0.0, 0.5, 1.0, 1.0]), 2)
    d = tempfile.mkdtemp()
    try:
        path = os.path.join(d, 'esd.csv')
        tables.emit_histogram(hist, path)
        assert read(path) == (
            'left,right,count,density\n'
            '0,0.5,1,0.5\n'
            '0.5,1,3,1.5\n')
    finally:
        shutil.rmtree(d)


if __name__ == '__main__':
    import pytest
    sys.exit(pytest.main([__file__] + sys.argv[1:]))
