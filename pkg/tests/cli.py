from __future__ import print_function
import io
import os
import shutil
import sys
import tempfile

from jhsiao.torusbeam import cli
from jhsiao.torusbeam import experiments as ex
from jhsiao.torusbeam import tables


class Workdir(object):
    def __enter__(self):
        self.path = tempfile.mkdtemp()
        return self

    def __exit__(self, *exc):
        shutil.rmtree(self.path)

    def join(self, name):
        return os.path.join(self.path, name)

    def write(self, name, text):
        path = self.join(name)
        with io.open(path, 'w', encoding='utf-8') as f:
            f.write(text)
        return path


def test_parse_value():
    assert cli.parse_value('N', '50, 100') == [50, 100]
    assert cli.parse_value('K1', 'inf') == [float('inf')]
    assert cli.parse_value('K2', '0,1e6') == [0.0, 1e6]
    assert cli.parse_value('trials', ' 5 ') == 5
    assert cli.parse_value('sigma2', '0.5') == 0.5
    assert cli.parse_value('angle_user', 'None') is None
    assert cli.parse_value('angle_user', '0.25') == 0.25
    assert cli.parse_value('mo_init', 'auto') is None
    assert cli.parse_value('mo_init', 'ones') == 'ones'
    assert cli.parse_value('output_path', 'x.csv') == 'x.csv'
    for key, text in (('N', '1,,2'), ('trials', 'many'), ('K1', 'big')):
        try:
            cli.parse_value(key, text)
        except ValueError:
            pass
        else:
            raise AssertionError('expected ValueError for {}={!r}'.format(key, text))


def test_read_config():
    with Workdir() as d:
        path = d.write('a.conf', (
            '# sweep\n'
            'experiment = ratio-k1\n'
            'N = 12\n'
            'K1 = 0, 10  # two points\n'
            '\n'
            'out = result.json\n'
            'format = json\n'))
        conf = cli.read_config(path)
        assert conf == dict(
            experiment='ratio-k1', N=[12], K1=[0.0, 10.0],
            output_path='result.json', output_format='json')


def test_read_config_errors():
    with Workdir() as d:
        for text, lineno in (('N = 4\nbogus = 1\n', 2), ('N 4\n', 1), ('trials = x\n', 1)):
            path = d.write('bad.conf', text)
            try:
                cli.read_config(path)
            except ValueError as e:
                assert '{}:{}:'.format(path, lineno) in str(e)
            else:
                raise AssertionError('expected ValueError for {!r}'.format(text))
        try:
            cli.read_config(d.join('missing.conf'))
        except OSError as e:
            assert 'missing.conf' in str(e)
        else:
            raise AssertionError('expected OSError')


def test_parser_commands():
    p = cli.make_parser()
    args = p.parse_args(['oracle', '--N', '5', '--out', 'x.csv', '-v'])
    assert args.command == 'oracle'
    assert args.N == '5' and args.output_path == 'x.csv' and args.verbose
    assert set(ex.COMMANDS) == set(['snr', 'time', 'ratio-k1', 'ratio-nt', 'spike', 'oracle', 'beta'])


def test_main_writes_table():
    with Workdir() as d:
        out = d.join('snr.csv')
        code = cli.main([
            'snr', '--N', '10', '--n_t', '1,2', '--trials', '2', '--out', out])
        assert code == 0
        table = tables.load(out)
        assert table.experiment == ex.SNR_VS_N
        assert table.columns == tuple(ex.columns(ex.SNR_VS_N))
        assert [row['n_t'] for row in table.rows] == [1, 2]
        assert all(row['trials'] == 2 for row in table.rows)


def test_main_config_and_flags():
    with Workdir() as d:
        out = d.join('beta.json')
        conf = d.write('beta.conf', (
            'experiment = beta\nN = 10\nn_t = 2\nK1 = 1\nK2 = 1\ntrials = 5\n'
            'format = json\nout = {}\n'.format(out)))
        assert cli.main(['beta', '--config', conf, '--trials', '2']) == 0
        table = tables.load(out, 'json')
        assert len(table) == 1 and table.rows[0]['trials'] == 2
        assert cli.main(['snr', '--config', conf]) == 1


def test_main_reproducible():
    with Workdir() as d:
        outs = [d.join('a.csv'), d.join('b.csv')]
        for out in outs:
            argv = [
                'ratio-k1', '--N', '10', '--n_t', '3', '--K1', '0,5',
                '--trials', '2', '--seed', '7', '--out', out]
            assert cli.main(argv) == 0
        a, b = [tables.load(out) for out in outs]
        keep = [c for c in a.columns if '_time_' not in c]
        assert [[r[c] for c in keep] for r in a.rows] == [
            [r[c] for c in keep] for r in b.rows]


def test_main_spike_esd():
    with Workdir() as d:
        esd = d.join('esd.csv')
        argv = [
            'spike', '--N', '20', '--n_t', '10', '--K1', '0.5,3', '--trials', '2',
            '--bins', '5', '--out', d.join('spike.csv'), '--esd', esd]
        assert cli.main(argv) == 0
        for i in range(2):
            path = d.join('esd_{}.csv'.format(i))
            with io.open(path, 'r', encoding='utf-8') as f:
                lines = f.read().splitlines()
            assert lines[0] == 'left,right,count,density'
            assert len(lines) == 6
            assert sum(int(line.split(',')[2]) for line in lines[1:]) == 20


def test_main_errors():
    with Workdir() as d:
        assert cli.main(['oracle', '--N', '9', '--out', d.join('x.csv')]) == 1
        assert cli.main(['snr', '--trials', '0']) == 1
        assert cli.main([
            'beta', '--N', '5', '--n_t', '1', '--trials', '1',
            '--out', os.path.join(d.path, 'nodir', 'x.csv')]) == 1
        assert not os.path.exists(d.join('x.csv'))


if __name__ == '__main__':
    import pytest
    sys.exit(pytest.main([__file__] + sys.argv[1:]))
