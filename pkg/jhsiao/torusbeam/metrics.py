"""Quality metrics: SNR, RA performance ratio alpha, alignment beta.

alpha = w^H R w / (N lambda_1): RA value against the Rayleigh quotient
bound reached by sqrt(N) v1.
beta = sum_i |v1_i| / sqrt(N): cosine of the angle between the RA
solution and sqrt(N) v1.  On rank-one spectra alpha = beta^2.
"""
__all__ = [
    'TrialRecord', 'snr', 'snr_direct', 'component_energies',
    'performance_alpha', 'alignment_beta', 'ratio_ra_mo',
]

import math

import numpy as np

from .solvers import RA, MO

SHARED = ('N', 'n_t', 'K1', 'K2')


class TrialRecord(object):
    """Everything measured on one channel realization.

    config: dict snapshot (N, n_t, K1, K2, seed)
    solvers: {tag: {'objective', 'snr', 'time', 'iterations'}}
    alpha, beta: RA metrics (None when not measured)
    lambda1_scaled: leading eigenvalue of R/N
    extra: other per-trial values (lambda2_scaled, bound, ...)
    """
    def __init__(
            self, config, solvers=None, alpha=None, beta=None,
            lambda1_scaled=None, extra=None):
        self.config = config
        self.solvers = solvers if solvers is not None else {}
        self.alpha = alpha
        self.beta = beta
        self.lambda1_scaled = lambda1_scaled
        self.extra = extra if extra is not None else {}

    def add(self, solution, sigma2):
        """Record a PhaseSolution under its solver tag."""
        self.solvers[solution.solver_tag] = dict(
            objective=solution.objective,
            snr=snr(max(solution.objective, 0.0), sigma2),
            time=solution.wall_time,
            iterations=solution.iterations)

    def objective(self, tag):
        return self.solvers[tag]['objective']


def snr(objective, sigma2):
    """Received SNR w^H R w / sigma^2."""
    if objective < 0:
        raise ValueError('objective must be >= 0, got {}'.format(objective))
    if not sigma2 > 0:
        raise ValueError('sigma2 must be positive, got {}'.format(sigma2))
    return objective / float(sigma2)


def snr_direct(ch, theta, sigma2):
    """SNR straight from the channel: |h2^T Theta H1|^2 / sigma^2.

    Theta = diag(exp(-j theta)) is the reflection that gives
    h2^T Theta H1 = w^H Phi for w = exp(j theta).
    """
    theta = np.asarray(theta, dtype=float)
    gain = ch.h2 * np.exp(-1j * theta)
    y = gain.dot(ch.H1)
    return float(np.vdot(y, y).real) / float(sigma2)


def component_energies(spec, w):
    """lambda_i |v_i^H w|^2 for every eigen-component.

    Their sum is w^H R w; the first term is what RA maximizes exactly.
    """
    proj = spec.eigenvectors.conj().T.dot(np.asarray(w, dtype=complex))
    return spec.eigenvalues * np.abs(proj) ** 2


def performance_alpha(spec, w_ra):
    """RA value over the Rayleigh quotient bound N lambda_1."""
    lam1 = spec.eigenvalues[0]
    if not lam1 > 0:
        raise ValueError('alpha undefined for lambda_1 = {}'.format(lam1))
    N = spec.eigenvalues.size
    return float(component_energies(spec, w_ra).sum() / (N * lam1))


def alignment_beta(spec):
    """Cosine between the RA solution and sqrt(N) v1."""
    a = spec.amplitudes1
    return float(a.sum() / math.sqrt(a.size))


def ratio_ra_mo(records):
    """Mean RA/MO objective ratio over records."""
    if not records:
        raise ValueError('ratio_ra_mo needs at least one record')
    point = [records[0].config[k] for k in SHARED]
    ratios = []
    for rec in records:
        if [rec.config[k] for k in SHARED] != point:
            raise ValueError('records mix configs: {} vs {}'.format(
                dict(zip(SHARED, point)), rec.config))
        ra = rec.objective(RA)
        mo = rec.objective(MO)
        if not mo > 0:
            raise ValueError('MO objective must be positive, got {}'.format(mo))
        ratios.append(ra / mo)
    return float(np.mean(ratios))
