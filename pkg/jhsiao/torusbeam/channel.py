"""Rician cascaded channels for a RIS-assisted MISO link.

BS (n_t antennas) -> RIS (N units) -> single antenna user.  The direct
BS -> user path is assumed blocked.

    H1 = sqrt(K1/(K1+1)) M1 + sqrt(1/(K1+1)) H1w    (N x n_t)
    h2 = sqrt(K2/(K2+1)) m2 + sqrt(1/(K2+1)) h2w    (N)

M1 is a rank-one LoS matrix with tr(M1 M1^H) = n_t, m2 has unit modulus
entries.  H1w, h2w are i.i.d. CN(0, 1).  K = inf means pure LoS.

The quadratic form is built from

    Phi = diag(h2) H1
    R = Phi Phi^H

Draw order is part of the contract: one standard_normal((N, n_t, 2))
for H1w (row-major, real/imag interleaved per entry), then
standard_normal((N, 2)) for h2w.  Both are always drawn, even when a K
is infinite, so the stream position never depends on K.
"""
__all__ = [
    'RicianConfig', 'LoSComponents', 'ChannelRealization',
    'ProblemInstance', 'steering', 'make_los', 'sample_channel', 'assemble',
    'mixing_weights',
]

import math

import numpy as np
import scipy.linalg

SEED_MASK = (1 << 64) - 1


class RicianConfig(object):
    """Ensemble parameters for one channel draw."""
    def __init__(self, n_t, N, K1=0.0, K2=0.0, sigma2=1.0, seed=0):
        """Initialize and validate.

        n_t: number of BS antennas (>= 1)
        N: number of RIS units (>= 1)
        K1: Rician factor BS -> RIS, >= 0, may be inf
        K2: Rician factor RIS -> user, >= 0, may be inf
        sigma2: noise power, > 0
        seed: unsigned 64 bit generator seed
        """
        n_t = int(n_t)
        N = int(N)
        K1 = float(K1)
        K2 = float(K2)
        sigma2 = float(sigma2)
        seed = int(seed)
        if n_t < 1:
            raise ValueError('n_t must be >= 1, got {}'.format(n_t))
        if N < 1:
            raise ValueError('N must be >= 1, got {}'.format(N))
        for name, K in (('K1', K1), ('K2', K2)):
            if math.isnan(K) or K < 0:
                raise ValueError('{} must be >= 0, got {}'.format(name, K))
        if not sigma2 > 0 or math.isinf(sigma2):
            raise ValueError('sigma2 must be positive, got {}'.format(sigma2))
        if seed < 0 or seed > SEED_MASK:
            raise ValueError('seed must fit in 64 unsigned bits, got {}'.format(seed))
        self.n_t = n_t
        self.N = N
        self.K1 = K1
        self.K2 = K2
        self.sigma2 = sigma2
        self.seed = seed

    @property
    def c(self):
        """Aspect ratio N/n_t."""
        return self.N / float(self.n_t)

    def replace(self, **kwargs):
        """Return a copy with some fields changed."""
        fields = dict(
            n_t=self.n_t, N=self.N, K1=self.K1, K2=self.K2,
            sigma2=self.sigma2, seed=self.seed)
        fields.update(kwargs)
        return RicianConfig(**fields)

    def snapshot(self):
        return dict(
            N=self.N, n_t=self.n_t, K1=self.K1, K2=self.K2, seed=self.seed)

    def __repr__(self):
        return 'RicianConfig(n_t={}, N={}, K1={}, K2={}, sigma2={}, seed={})'.format(
            self.n_t, self.N, self.K1, self.K2, self.sigma2, self.seed)


class LoSComponents(object):
    """Deterministic LoS parts: M1 (N x n_t, rank one), m2 (N)."""
    def __init__(self, M1, m2):
        M1 = np.asarray(M1, dtype=complex)
        m2 = np.asarray(m2, dtype=complex)
        if M1.ndim != 2 or m2.ndim != 1 or M1.shape[0] != m2.shape[0]:
            raise ValueError(
                'LoS shape mismatch: M1 {} and m2 {}'.format(M1.shape, m2.shape))
        self.M1 = M1
        self.m2 = m2

    @property
    def N(self):
        return self.M1.shape[0]

    @property
    def n_t(self):
        return self.M1.shape[1]


class ChannelRealization(object):
    """One sampled (H1, h2) pair with the LoS parts and config used."""
    def __init__(self, H1, h2, los, cfg):
        self.H1 = H1
        self.h2 = h2
        self.los = los
        self.cfg = cfg


class ProblemInstance(object):
    """The quadratic form w^H R w, R = Phi Phi^H."""
    def __init__(self, Phi, R=None):
        """Initialize from the factor Phi (N x n_t).

        R is computed when not given.  It is symmetrized so it is
        Hermitian to the last bit.
        """
        Phi = np.asarray(Phi, dtype=complex)
        if Phi.ndim == 1:
            Phi = Phi[:, None]
        if Phi.ndim != 2:
            raise ValueError('Phi must be 2d, got shape {}'.format(Phi.shape))
        if R is None:
            R = Phi.dot(Phi.conj().T)
        else:
            R = np.asarray(R, dtype=complex)
            if R.shape != (Phi.shape[0],) * 2:
                raise ValueError(
                    'R shape {} does not match Phi {}'.format(R.shape, Phi.shape))
        self.Phi = Phi
        self.R = (R + R.conj().T) / 2

    @classmethod
    def from_matrix(cls, R):
        """Build an instance from a Hermitian PSD matrix.

        Phi is recovered as V sqrt(lambda) over the nonzero spectrum.
        """
        R = np.asarray(R, dtype=complex)
        lam, V = scipy.linalg.eigh((R + R.conj().T) / 2)
        top = max(lam[-1], 0.0)
        keep = lam > 1e-12 * top if top > 0 else lam > 0
        if not keep.any():
            keep[-1] = True
        Phi = V[:, keep] * np.sqrt(np.clip(lam[keep], 0, None))
        return cls(Phi, R)

    @property
    def N(self):
        return self.R.shape[0]

    @property
    def n_t(self):
        return self.Phi.shape[1]


def steering(n, angle):
    """Half-wavelength ULA steering vector exp(j pi k sin(angle))."""
    return np.exp(1j * np.pi * np.arange(n) * math.sin(angle))


def make_los(n_t, N, angle_tx, angle_ris, angle_user=None):
    """Return LoSComponents built from ULA steering vectors.

    M1 = a_r a_t^H / sqrt(N) so that tr(M1 M1^H) = n_t and rank(M1) = 1.
    m2 = a_r' where a_r' uses angle_user (defaults to angle_ris).
    """
    n_t = int(n_t)
    N = int(N)
    if n_t < 1 or N < 1:
        raise ValueError('n_t and N must be >= 1, got {}, {}'.format(n_t, N))
    if angle_user is None:
        angle_user = angle_ris
    a_r = steering(N, angle_ris)
    a_t = steering(n_t, angle_tx)
    M1 = np.outer(a_r, a_t.conj()) / math.sqrt(N)
    m2 = steering(N, angle_user)
    return LoSComponents(M1, m2)


def mixing_weights(K):
    """Return (los, scatter) amplitude weights for Rician factor K."""
    if math.isinf(K):
        return 1.0, 0.0
    return math.sqrt(K / (K + 1.0)), math.sqrt(1.0 / (K + 1.0))


def _mix(K, los, scatter):
    if math.isinf(K):
        return los.copy()
    a, b = mixing_weights(K)
    return a * los + b * scatter


def complex_normal(rng, shape):
    """CN(0, 1) samples, (x + jy)/sqrt(2), x and y interleaved last."""
    xy = rng.standard_normal(tuple(shape) + (2,))
    return (xy[..., 0] + 1j * xy[..., 1]) / math.sqrt(2)


def sample_channel(cfg, los):
    """Draw one ChannelRealization.

    Identical (cfg, los) gives bit-identical output.
    """
    if los.M1.shape != (cfg.N, cfg.n_t):
        raise ValueError(
            'LoS M1 shape {} does not match config (N={}, n_t={})'.format(
                los.M1.shape, cfg.N, cfg.n_t))
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    H1w = complex_normal(rng, (cfg.N, cfg.n_t))
    h2w = complex_normal(rng, (cfg.N,))
    H1 = _mix(cfg.K1, los.M1, H1w)
    h2 = _mix(cfg.K2, los.m2, h2w)
    return ChannelRealization(H1, h2, los, cfg)


def assemble(ch):
    """Return the ProblemInstance Phi = diag(h2) H1, R = Phi Phi^H."""
    Phi = ch.h2[:, None] * ch.H1
    return ProblemInstance(Phi)
