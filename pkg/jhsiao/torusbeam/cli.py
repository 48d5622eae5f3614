"""torus-beam command line.

    torus-beam <snr|time|ratio-k1|ratio-nt|spike|oracle|beta>
        [--config FILE] [--key value ...] [--out PATH] [--format csv|json]
        [--esd PATH] [-v]

Config files are line oriented:

    # comment
    N = 50, 100, 200
    n_t = 4
    K1 = inf
    trials = 20

Every ExperimentConfig field can be set in the file or overridden with
--<field> on the command line (lists comma separated).  --out and
--format are output_path and output_format.  Precedence is experiment
defaults, then the config file, then flags.
"""
from __future__ import print_function
__all__ = ['main', 'read_config', 'parse_value', 'make_parser']

import argparse
import io
import os
import sys

from . import experiments, tables

ALIASES = {'out': 'output_path', 'format': 'output_format'}


def parse_value(key, text):
    """Convert the text of a config value for field key."""
    text = text.strip()
    if key in experiments.LIST_FIELDS:
        conv = int if key in ('N', 'n_t') else float
        items = [item.strip() for item in text.split(',')]
        if not all(items):
            raise ValueError('empty item in {} = {!r}'.format(key, text))
        return [conv(item) for item in items]
    if key in experiments.INT_FIELDS:
        return int(text)
    if key in experiments.FLOAT_FIELDS:
        return float(text)
    if key == 'angle_user':
        return None if text.lower() in ('', 'none') else float(text)
    if key == 'mo_init':
        return None if text.lower() in ('', 'none', 'auto') else text
    return text


def read_config(path):
    """Parse a key = value file into a dict of converted fields."""
    try:
        with io.open(path, 'r', encoding='utf-8') as f:
            lines = f.read().splitlines()
    except (IOError, OSError) as e:
        raise OSError('could not read config {}: {}'.format(path, e))
    ret = {}
    for lineno, line in enumerate(lines, 1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            raise ValueError('{}:{}: expected key = value, got {!r}'.format(
                path, lineno, line))
        key, value = line.split('=', 1)
        key = key.strip()
        key = ALIASES.get(key, key)
        if key != 'experiment' and key not in experiments.FIELDS:
            raise ValueError('{}:{}: unknown key {!r}'.format(path, lineno, key))
        try:
            ret[key] = parse_value(key, value)
        except ValueError as e:
            raise ValueError('{}:{}: bad value for {}: {}'.format(
                path, lineno, key, e))
    return ret


def make_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', help='key = value config file')
    common.add_argument(
        '--out', dest='output_path', help='output path, - for stdout')
    common.add_argument(
        '--format', dest='output_format', choices=tables.FORMATS,
        help='output format')
    common.add_argument(
        '--esd', help='spike only: write the pooled eigenvalue histogram here')
    common.add_argument(
        '-v', '--verbose', action='store_true', help='progress on stderr')
    for field in experiments.FIELDS:
        if field in ALIASES.values():
            continue
        common.add_argument(
            '--' + field, dest=field, metavar='VALUE',
            help='override {}'.format(field))
    p = argparse.ArgumentParser(
        prog='torus-beam',
        description='RIS passive beamforming experiments on the N-torus')
    sub = p.add_subparsers(dest='command')
    sub.required = True
    for name, experiment in sorted(experiments.COMMANDS.items()):
        sub.add_parser(
            name, parents=[common], help='{} experiment'.format(experiment))
    return p


def _stderr(msg):
    print(msg, file=sys.stderr)


def _esd_paths(path, points):
    if len(points) == 1:
        return [path]
    stem, ext = os.path.splitext(path)
    return ['{}_{}{}'.format(stem, i, ext) for i in range(len(points))]


def main(argv=None):
    args = make_parser().parse_args(argv)
    try:
        fields = {}
        if args.config:
            fields.update(read_config(args.config))
        conf_exp = fields.pop('experiment', None)
        experiment = experiments.COMMANDS[args.command]
        if conf_exp is not None and experiments.COMMANDS.get(
                conf_exp, conf_exp).upper() != experiment:
            raise ValueError('config file is for {}, command is {}'.format(
                conf_exp, args.command))
        for field in experiments.FIELDS:
            value = getattr(args, field, None)
            if value is not None:
                fields[field] = parse_value(field, value)
        cfg = experiments.ExperimentConfig(experiment, **fields)
        log = _stderr if args.verbose else None
        table = experiments.run(cfg, log)
        tables.emit(table, cfg.output_path, cfg.output_format)
        if args.esd and table.histograms:
            points = list(table.histograms)
            for point, path in zip(points, _esd_paths(args.esd, points)):
                tables.emit_histogram(table.histograms[point], path)
    except (ValueError, OSError) as e:
        print('ERROR: {}'.format(e), file=sys.stderr)
        return 1
    return 0


if __name__ == '__main__':
    sys.exit(main())
