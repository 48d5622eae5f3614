from __future__ import print_function
import math
import sys

import numpy as np

from jhsiao.torusbeam import channel as ch
from jhsiao.torusbeam import metrics
from jhsiao.torusbeam import solvers
from jhsiao.torusbeam import spectral


def realization(N, n_t, seed, K1=1.0, K2=1.0):
    cfg = ch.RicianConfig(n_t, N, K1, K2, seed=seed)
    return ch.sample_channel(cfg, ch.make_los(n_t, N, 0.3, 0.7))


def record(objectives, **config):
    snap = dict(N=4, n_t=2, K1=1.0, K2=1.0, seed=0)
    snap.update(config)
    return metrics.TrialRecord(snap, dict(
        (tag, dict(objective=val, snr=val, time=0.0, iterations=0))
        for tag, val in objectives.items()))


def test_snr():
    assert metrics.snr(0, 1) == 0
    assert metrics.snr(4, 2) == 2
    for args in ((-1, 1), (1, 0)):
        try:
            metrics.snr(*args)
        except ValueError:
            pass
        else:
            raise AssertionError('expected ValueError for {}'.format(args))


def test_snr_direct():
    rng = np.random.Generator(np.random.PCG64(3))
    for seed in range(10):
        c = realization(12, 3, seed)
        inst = ch.assemble(c)
        theta = rng.uniform(0, 2 * math.pi, 12)
        expect = solvers.evaluate(inst.R, theta) / 0.5
        assert abs(metrics.snr_direct(c, theta, 0.5) - expect) <= 1e-9 * expect


def test_component_energies():
    inst = ch.assemble(realization(10, 4, 1))
    spec = spectral.eig_hermitian(inst.R)
    w = np.exp(1j * np.linspace(0, 1, 10))
    parts = metrics.component_energies(spec, w)
    assert np.all(parts >= -1e-9 * spec.lambda1)
    total = solvers.evaluate(inst.R, np.linspace(0, 1, 10))
    assert abs(parts.sum() - total) <= 1e-9 * total


def test_alpha_examples():
    N = 6
    v = np.ones(N) / math.sqrt(N)
    spec = spectral.eig_hermitian(np.outer(v, v))
    assert abs(metrics.performance_alpha(spec, np.ones(N)) - 1) <= 1e-12
    v = np.array([math.sqrt(0.8), math.sqrt(0.2)])
    spec = spectral.eig_hermitian(np.outer(v, v))
    alpha = metrics.performance_alpha(spec, np.ones(2))
    assert abs(alpha - 0.9) <= 1e-12
    try:
        metrics.performance_alpha(spectral.eig_hermitian(np.zeros((2, 2))), np.ones(2))
    except ValueError:
        pass
    else:
        raise AssertionError('expected ValueError for lambda_1 = 0')


def test_beta_examples():
    v = np.ones(5) / math.sqrt(5)
    assert abs(metrics.alignment_beta(spectral.eig_hermitian(np.outer(v, v))) - 1) <= 1e-12
    spec = spectral.eig_hermitian(np.diag([1.0, 0.0]))
    assert abs(metrics.alignment_beta(spec) - 1 / math.sqrt(2)) <= 1e-12


def test_alpha_beta_relations():
    for seed in range(10):
        inst = ch.assemble(realization(16, 1, seed))
        spec = spectral.eig_hermitian(inst.R)
        ra = solvers.solve_ra(spec, inst.R)
        alpha = metrics.performance_alpha(spec, ra.w)
        beta = metrics.alignment_beta(spec)
        assert abs(alpha - beta ** 2) <= 1e-9
    for seed in range(10):
        inst = ch.assemble(realization(16, 6, seed))
        spec = spectral.eig_hermitian(inst.R)
        ra = solvers.solve_ra(spec, inst.R)
        alpha = metrics.performance_alpha(spec, ra.w)
        beta = metrics.alignment_beta(spec)
        assert 0 < beta <= 1 + 1e-12
        assert beta ** 2 - 1e-9 <= alpha <= 1 + 1e-9


def test_beta_falls_with_rank():
    def mean_beta(n_t):
        vals = []
        for seed in range(30):
            inst = ch.assemble(realization(64, n_t, seed))
            vals.append(metrics.alignment_beta(spectral.eig_hermitian(inst.R)))
        return np.mean(vals)
    assert mean_beta(1) > mean_beta(32)


def test_beta_rises_with_K2():
    def mean_beta(K2):
        vals = []
        for seed in range(200):
            inst = ch.assemble(realization(200, 4, seed, K1=1.0, K2=K2))
            vals.append(metrics.alignment_beta(spectral.eig_hermitian(inst.R)))
        return np.mean(vals)
    assert mean_beta(10.0) > mean_beta(0.0)


def test_ratio():
    rec = record({solvers.RA: 3.0, solvers.MO: 3.0})
    assert metrics.ratio_ra_mo([rec]) == 1.0
    recs = [
        record({solvers.RA: 1.0, solvers.MO: 2.0}, seed=1),
        record({solvers.RA: 3.0, solvers.MO: 4.0}, seed=2)]
    assert abs(metrics.ratio_ra_mo(recs) - 0.625) <= 1e-15


def test_ratio_rejects():
    for recs in (
            [],
            [record({solvers.RA: 1.0, solvers.MO: 0.0})],
            [record({solvers.RA: 1.0, solvers.MO: 1.0}),
             record({solvers.RA: 1.0, solvers.MO: 1.0}, N=8)]):
        try:
            metrics.ratio_ra_mo(recs)
        except ValueError:
            pass
        else:
            raise AssertionError('expected ValueError for {}'.format(recs))


def test_ratio_rank_one():
    recs = []
    for seed in range(10):
        c = realization(20, 1, seed)
        inst = ch.assemble(c)
        rec = metrics.TrialRecord(c.cfg.snapshot())
        rec.add(solvers.relax(inst.R), 1.0)
        rec.add(solvers.solve_mo(inst), 1.0)
        recs.append(rec)
    assert abs(metrics.ratio_ra_mo(recs) - 1) <= 1e-6


def test_record_add():
    inst = ch.assemble(realization(8, 2, 0))
    rec = metrics.TrialRecord(dict(N=8, n_t=2, K1=1.0, K2=1.0, seed=0))
    sol = solvers.relax(inst.R)
    rec.add(sol, 2.0)
    assert rec.objective(solvers.RA) == sol.objective
    assert rec.solvers[solvers.RA]['snr'] == sol.objective / 2
    assert rec.solvers[solvers.RA]['iterations'] == 0


if __name__ == '__main__':
    import pytest
    sys.exit(pytest.main([__file__] + sys.argv[1:]))
