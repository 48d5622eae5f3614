"""Experiment runner.

Each experiment sweeps (N, n_t, K1, K2), draws `trials` channels per
sweep point, runs the solvers it needs and aggregates mean/std of the
per-trial metrics into a ResultTable.

    SNR_VS_N     RA and MO SNR against N for several ranks n_t
    TIME_VS_N    RA and MO wall time
    RATIO_VS_K1  RA/MO ratio against K1
    RATIO_VS_NT  RA/MO ratio against n_t
    SPIKE        leading eigenvalue of R/N against the predicted limit
    ORACLE       RA, MO and brute force on small N
    BETA         alignment beta against N, n_t, K1, K2

Trial seeds are seed XOR hash(sweep point, trial index), so every
trial is reproducible on its own and the result does not depend on
`jobs`.  Wall-time columns are the only values that change between
two runs of the same config.
"""
__all__ = [
    'ExperimentConfig', 'EXPERIMENTS', 'COMMANDS', 'run', 'trial_seed',
    'run_trial',
]

import hashlib
import itertools
import time

import numpy as np

from . import channel, metrics, solvers, spectral, tables

SNR_VS_N = 'SNR_VS_N'
TIME_VS_N = 'TIME_VS_N'
RATIO_VS_K1 = 'RATIO_VS_K1'
RATIO_VS_NT = 'RATIO_VS_NT'
SPIKE = 'SPIKE'
ORACLE = 'ORACLE'
BETA = 'BETA'
EXPERIMENTS = (SNR_VS_N, TIME_VS_N, RATIO_VS_K1, RATIO_VS_NT, SPIKE, ORACLE, BETA)

# cli subcommand -> experiment
COMMANDS = {
    'snr': SNR_VS_N,
    'time': TIME_VS_N,
    'ratio-k1': RATIO_VS_K1,
    'ratio-nt': RATIO_VS_NT,
    'spike': SPIKE,
    'oracle': ORACLE,
    'beta': BETA,
}

ORACLE_MAX_N = 8
# slack for the oracle ordering checks, relative to N lambda_1
ORACLE_TOL = 1e-9

COMMON = dict(
    N=[50, 100, 200, 500],
    n_t=[1, 4, 8, 16],
    K1=[1.0],
    K2=[1.0],
    trials=100,
    sigma2=1.0,
    seed=0,
    brute_levels=32,
    output_path='-',
    output_format=tables.CSV,
    angle_tx=0.3,
    angle_ris=0.7,
    angle_user=None,
    mo_init=None,
    mo_max_iters=1000,
    mo_grad_tol=1e-6,
    mo_restarts=0,
    bins=60,
    jobs=1,
)

DEFAULTS = {
    SNR_VS_N: {},
    TIME_VS_N: dict(trials=20),
    RATIO_VS_K1: dict(N=[200], n_t=[16], K1=[0.0, 1.0, 10.0, 50.0], K2=[0.0]),
    RATIO_VS_NT: dict(N=[200], n_t=[2, 4, 8, 16, 32], K1=[1.0], K2=[0.0]),
    SPIKE: dict(N=[1000], n_t=[500], K1=[0.5, 3.0], K2=[1e6], trials=10),
    ORACLE: dict(N=[6], n_t=[1, 3, 6], K1=[0.0], K2=[0.0], trials=20, mo_restarts=8),
    BETA: dict(N=[50, 100, 200, 400], n_t=[1, 4, 16], K1=[1.0], K2=[0.0, 1.0, 10.0]),
}

LIST_FIELDS = ('N', 'n_t', 'K1', 'K2')
INT_FIELDS = ('trials', 'seed', 'brute_levels', 'mo_max_iters', 'mo_restarts', 'bins', 'jobs')
FLOAT_FIELDS = ('sigma2', 'angle_tx', 'angle_ris', 'mo_grad_tol')
FIELDS = tuple(COMMON)


class ExperimentConfig(object):
    """Everything a run needs; unspecified fields take experiment defaults."""
    def __init__(self, experiment, **kwargs):
        experiment = COMMANDS.get(experiment, experiment)
        experiment = str(experiment).upper()
        if experiment not in EXPERIMENTS:
            raise ValueError('unknown experiment {}, expected one of {}'.format(
                experiment, EXPERIMENTS))
        unknown = set(kwargs).difference(FIELDS)
        if unknown:
            raise ValueError('unknown config keys: {}'.format(sorted(unknown)))
        fields = dict(COMMON)
        fields.update(DEFAULTS[experiment])
        fields.update((k, v) for k, v in kwargs.items() if v is not None)
        self.experiment = experiment
        for name in LIST_FIELDS:
            vals = fields[name]
            if not isinstance(vals, (list, tuple)):
                vals = [vals]
            conv = int if name in ('N', 'n_t') else float
            vals = [conv(v) for v in vals]
            if not vals:
                raise ValueError('{} sweep must not be empty'.format(name))
            setattr(self, name, vals)
        for name in INT_FIELDS:
            setattr(self, name, int(fields[name]))
        for name in FLOAT_FIELDS:
            setattr(self, name, float(fields[name]))
        self.angle_user = None if fields['angle_user'] is None else float(fields['angle_user'])
        self.output_path = str(fields['output_path'])
        self.output_format = tables.check_format(fields['output_format'])
        mo_init = fields['mo_init']
        if mo_init is None:
            mo_init = solvers.RANDOM if experiment == TIME_VS_N else solvers.RA_WARM
        self.mo_init = str(mo_init).upper()
        self._validate()

    def _validate(self):
        if self.trials < 1:
            raise ValueError('trials must be >= 1, got {}'.format(self.trials))
        if self.jobs < 1:
            raise ValueError('jobs must be >= 1, got {}'.format(self.jobs))
        if self.bins < 1:
            raise ValueError('bins must be >= 1, got {}'.format(self.bins))
        # RicianConfig and MOConfig do the remaining range checks
        for N, n_t, K1, K2 in self.points():
            channel.RicianConfig(n_t, N, K1, K2, self.sigma2, self.seed)
        self.mo_config()
        if self.experiment == ORACLE:
            if max(self.N) > ORACLE_MAX_N:
                raise ValueError('ORACLE needs N <= {}, got {}'.format(
                    ORACLE_MAX_N, max(self.N)))
            if self.brute_levels < 2:
                raise ValueError('brute_levels must be >= 2, got {}'.format(
                    self.brute_levels))
            need = self.brute_levels ** (max(self.N) - 1)
            if need > solvers.BRUTE_BUDGET:
                raise ValueError(
                    'brute force needs {}^{} = {} candidates, budget is {}'.format(
                        self.brute_levels, max(self.N) - 1, need,
                        solvers.BRUTE_BUDGET))

    def points(self):
        """Sweep points (N, n_t, K1, K2), N varying slowest."""
        return list(itertools.product(self.N, self.n_t, self.K1, self.K2))

    def mo_config(self):
        return solvers.MOConfig(
            max_iters=self.mo_max_iters, grad_tol=self.mo_grad_tol,
            init=self.mo_init, restarts=self.mo_restarts)

    def as_dict(self):
        ret = dict((name, getattr(self, name)) for name in FIELDS)
        ret['experiment'] = self.experiment
        return ret

    def __eq__(self, other):
        return isinstance(other, ExperimentConfig) and self.as_dict() == other.as_dict()

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        return 'ExperimentConfig({})'.format(', '.join(
            '{}={!r}'.format(k, v) for k, v in sorted(self.as_dict().items())))


def trial_seed(seed, point, trial):
    """seed XOR a 64 bit hash of (sweep point, trial index)."""
    key = repr(tuple(point) + (int(trial),)).encode('utf-8')
    h = int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), 'big')
    return (int(seed) ^ h) & channel.SEED_MASK


def run_trial(cfg, point, trial):
    """Run one realization; return its TrialRecord."""
    N, n_t, K1, K2 = point
    rc = channel.RicianConfig(
        n_t, N, K1, K2, cfg.sigma2, trial_seed(cfg.seed, point, trial))
    los = channel.make_los(n_t, N, cfg.angle_tx, cfg.angle_ris, cfg.angle_user)
    inst = channel.assemble(channel.sample_channel(rc, los))
    rec = metrics.TrialRecord(rc.snapshot())
    exp = cfg.experiment

    if exp == SPIKE:
        spec = spectral.eig_hermitian(inst.R)
        lam = spec.eigenvalues
        rec.lambda1_scaled = lam[0] / N
        rec.extra['lambda2_scaled'] = lam[1] / N if N > 1 else None
        rec.extra['spike'] = spectral.spike_prediction(K1, rc.c)
        rec.extra['edge'] = spectral.bulk_right_edge(K1, rc.c)
        keep = lam >= spectral.ZERO_EIG * lam[0]
        rec.extra['esd_values'] = lam[keep] / N
        return rec

    ra = solvers.relax(inst.R)
    rec.add(ra, cfg.sigma2)
    rec.extra['degenerate'] = ra.degenerate
    if exp == TIME_VS_N:
        rec.add(solvers.solve_mo(inst, cfg.mo_config(), rc.seed), cfg.sigma2)
        return rec

    spec = spectral.eig_hermitian(inst.R)
    rec.alpha = metrics.performance_alpha(spec, ra.w)
    rec.beta = metrics.alignment_beta(spec)
    rec.lambda1_scaled = spec.lambda1 / N
    if exp == BETA:
        return rec

    rec.add(solvers.solve_mo(inst, cfg.mo_config(), rc.seed), cfg.sigma2)
    if exp == ORACLE:
        rec.add(solvers.brute_force(inst, cfg.brute_levels), cfg.sigma2)
        bound = N * spec.lambda1
        rec.extra['bound'] = bound
        rec.extra['violation'] = (
            rec.objective(solvers.BRUTE)
            > rec.objective(solvers.MO) + ORACLE_TOL * bound
            or rec.objective(solvers.RA) > bound * (1 + ORACLE_TOL))
    return rec


def _solver(tag, key):
    def get(rec):
        entry = rec.solvers.get(tag)
        return None if entry is None else entry[key]
    return get


def _ratio(rec):
    if solvers.MO not in rec.solvers:
        return None
    return rec.objective(solvers.RA) / rec.objective(solvers.MO)


def _extra(key):
    return lambda rec: rec.extra.get(key)


SOLVER_METRICS = ('objective', 'snr', 'time', 'iterations')


def _metrics(experiment):
    """[(column prefix, extractor)] for an experiment."""
    ra = [('ra_' + m, _solver(solvers.RA, m)) for m in SOLVER_METRICS]
    mo = [('mo_' + m, _solver(solvers.MO, m)) for m in SOLVER_METRICS]
    ra_quality = [
        ('ra_alpha', lambda rec: rec.alpha),
        ('ra_beta', lambda rec: rec.beta),
        ('ra_ratio', _ratio)]
    lam1 = [('spec_lambda1', lambda rec: rec.lambda1_scaled)]
    if experiment in (SNR_VS_N, RATIO_VS_K1, RATIO_VS_NT):
        return ra + ra_quality + mo + lam1
    if experiment == TIME_VS_N:
        return [
            ('ra_time', _solver(solvers.RA, 'time')),
            ('ra_objective', _solver(solvers.RA, 'objective')),
            ('mo_time', _solver(solvers.MO, 'time')),
            ('mo_objective', _solver(solvers.MO, 'objective')),
            ('mo_iterations', _solver(solvers.MO, 'iterations')),
            ('ra_ratio', _ratio)]
    if experiment == SPIKE:
        return lam1 + [
            ('spec_lambda2', _extra('lambda2_scaled')),
            ('spec_spike', _extra('spike')),
            ('spec_edge', _extra('edge'))]
    if experiment == ORACLE:
        return [
            ('ra_objective', _solver(solvers.RA, 'objective')),
            ('ra_ratio', _ratio),
            ('mo_objective', _solver(solvers.MO, 'objective')),
            ('mo_iterations', _solver(solvers.MO, 'iterations')),
            ('brute_objective', _solver(solvers.BRUTE, 'objective')),
            ('brute_time', _solver(solvers.BRUTE, 'time')),
            ('spec_bound', _extra('bound'))]
    return [
        ('ra_beta', lambda rec: rec.beta),
        ('ra_alpha', lambda rec: rec.alpha)] + lam1


def columns(experiment):
    cols = list(tables.BASE_COLUMNS)
    for prefix, _ in _metrics(experiment):
        cols.extend((prefix + '_mean', prefix + '_std'))
    if experiment == ORACLE:
        cols.append('oracle_violations')
    return cols


def aggregate(experiment, point, records):
    """One table row from the records of a sweep point."""
    N, n_t, K1, K2 = point
    row = dict(
        experiment=experiment, N=N, n_t=n_t, K1=K1, K2=K2, trials=len(records))
    for prefix, get in _metrics(experiment):
        vals = [get(rec) for rec in records]
        vals = [v for v in vals if v is not None]
        if vals:
            row[prefix + '_mean'] = float(np.mean(vals))
            row[prefix + '_std'] = float(np.std(vals))
        else:
            row[prefix + '_mean'] = row[prefix + '_std'] = None
    if experiment == ORACLE:
        row['oracle_violations'] = sum(
            1 for rec in records if rec.extra.get('violation'))
    return row


def _trials(cfg, point):
    if cfg.jobs == 1:
        return [run_trial(cfg, point, t) for t in range(cfg.trials)]
    from concurrent.futures import ProcessPoolExecutor
    with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
        return list(pool.map(
            run_trial, itertools.repeat(cfg), itertools.repeat(point),
            range(cfg.trials)))


def _silent(*args):
    pass


def run(cfg, log=None):
    """Run an experiment and return its ResultTable.

    log: callable taking one str, for progress and WARNING lines.
    """
    if log is None:
        log = _silent
    table = tables.ResultTable(cfg.experiment, columns(cfg.experiment))
    for point in cfg.points():
        start = time.perf_counter()
        records = _trials(cfg, point)
        table.records[point] = records
        table.rows.append(aggregate(cfg.experiment, point, records))
        log('{} N={} n_t={} K1={:g} K2={:g}: {} trials in {:.2f}s'.format(
            cfg.experiment, point[0], point[1], point[2], point[3],
            len(records), time.perf_counter() - start))
        degenerate = sum(1 for rec in records if rec.extra.get('degenerate'))
        if degenerate:
            log('WARNING: {} trial(s) at {} had a repeated leading eigenvalue'.format(
                degenerate, point))
        if cfg.experiment == ORACLE and table.rows[-1]['oracle_violations']:
            log('WARNING: oracle ordering violated in {} trial(s) at {}'.format(
                table.rows[-1]['oracle_violations'], point))
        if cfg.experiment == SPIKE:
            pooled = np.concatenate([rec.extra['esd_values'] for rec in records])
            table.histograms[point] = spectral.histogram(pooled, cfg.bins)
    return table
