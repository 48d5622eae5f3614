"""Spectral tools for R = Phi Phi^H.

Eigen-decomposition with canonical eigenvector phases, empirical
spectral distributions, and the large-system predictions for the
leading eigenvalue of R/N when N/n_t -> c:

    spike:  1/c + 1/K1                    if K1 > sqrt(c)
            (1+sqrt(c))^2 / (c (K1+1))    otherwise
    edge:   (1+sqrt(c))^2 / (c (K1+1))    right edge of the bulk

The predictions assume K2 -> inf; use a large finite K2 when sampling.
"""
__all__ = [
    'Spectrum', 'Histogram', 'eig_hermitian', 'leading_eigenpair',
    'spike_prediction', 'bulk_right_edge', 'histogram', 'esd', 'rank',
    'ZERO_EIG', 'HERMITIAN_TOL',
]

import math

import numpy as np
import scipy.linalg
import scipy.sparse.linalg

# eigenvalues below ZERO_EIG * lambda_1 are structural zeros
ZERO_EIG = 1e-9
HERMITIAN_TOL = 1e-12
# amplitudes at or below this are treated as exact zeros (phase undefined)
ZERO_AMP = 1e-13
# leading_eigenpair switches from dense eigh to Lanczos above this size
DENSE_MAX = 64
TWO_PI = 2 * math.pi


class Spectrum(object):
    """Descending eigenvalues and matching orthonormal eigenvectors.

    eigenvalues: (N,) real, descending
    eigenvectors: (N, N) complex, column i pairs with eigenvalue i
    amplitudes1: |v1|
    phases1: arg(v1) in [0, 2pi)
    degenerate: lambda_1 has multiplicity > 1 within ZERO_EIG relative
    """
    def __init__(self, eigenvalues, eigenvectors):
        self.eigenvalues = eigenvalues
        self.eigenvectors = eigenvectors
        v1 = eigenvectors[:, 0]
        self.amplitudes1 = np.abs(v1)
        self.phases1 = phases(v1)
        lam = eigenvalues
        self.degenerate = _is_degenerate(
            lam[0], lam[1] if lam.size > 1 else None)

    @property
    def N(self):
        return self.eigenvalues.size

    @property
    def lambda1(self):
        return float(self.eigenvalues[0])

    @property
    def v1(self):
        return self.eigenvectors[:, 0]

    def reconstruct(self):
        """Return sum_i lambda_i v_i v_i^H."""
        V = self.eigenvectors
        return (V * self.eigenvalues).dot(V.conj().T)


class Histogram(object):
    """Binned eigenvalues.

    bin_edges: (bins+1,), counts: (bins,) ints, normalized_density:
    counts / (total * width), integrating to 1 when total > 0.
    """
    def __init__(self, bin_edges, counts):
        self.bin_edges = bin_edges
        self.counts = counts
        total = counts.sum()
        widths = np.diff(bin_edges)
        if total:
            self.normalized_density = counts / (float(total) * widths)
        else:
            self.normalized_density = np.zeros(counts.shape, dtype=float)

    @property
    def total(self):
        return int(self.counts.sum())


def _is_degenerate(lam1, lam2):
    if lam2 is None or lam1 <= 0:
        return False
    return lam1 - lam2 <= ZERO_EIG * lam1


def phases(v):
    """Entrywise phase in [0, 2pi); zero-amplitude entries get 0."""
    theta = np.mod(np.angle(v), TWO_PI)
    # mod can round tiny negative angles up to exactly 2pi
    theta[theta >= TWO_PI] = 0.0
    theta[np.abs(v) <= ZERO_AMP] = 0.0
    return theta


def canonicalize(V):
    """Rotate each column so its largest entry is real nonnegative.

    Near-ties (within 1e-9 relative) go to the lowest index so that
    equal-magnitude vectors still canonicalize deterministically.
    """
    V = np.array(V, dtype=complex, copy=True)
    mags = np.abs(V)
    for i in range(V.shape[1]):
        col = mags[:, i]
        top = col.max()
        if top == 0:
            continue
        idx = int(np.argmax(col >= top * (1 - 1e-9)))
        pivot = V[idx, i]
        V[:, i] *= pivot.conjugate() / abs(pivot)
        # exact zero imaginary part at the pivot
        V[idx, i] = abs(pivot)
    return V


def _check_hermitian(R, tol):
    R = np.asarray(R, dtype=complex)
    if R.ndim != 2 or R.shape[0] != R.shape[1]:
        raise ValueError('R must be square, got shape {}'.format(R.shape))
    scale = np.abs(R).max() if R.size else 0.0
    skew = np.abs(R - R.conj().T).max() if R.size else 0.0
    if skew > tol * scale:
        raise ValueError(
            'R is not Hermitian: max|R - R^H| = {:.3e} > {:.1e} * max|R| = {:.3e}'.format(
                skew, tol, tol * scale))
    return (R + R.conj().T) / 2


def eig_hermitian(R, tol=HERMITIAN_TOL):
    """Return the Spectrum of Hermitian R.

    Eigenvalues are sorted descending.  Eigenvector phases are
    canonicalized (see canonicalize()).  Raises ValueError when
    max|R - R^H| > tol * max|R|.
    """
    R = _check_hermitian(R, tol)
    lam, V = scipy.linalg.eigh(R)
    lam = lam[::-1].copy()
    V = canonicalize(V[:, ::-1])
    return Spectrum(lam, V)


def _start_vector(N):
    rng = np.random.Generator(np.random.PCG64(N))
    return rng.standard_normal(N) + 1j * rng.standard_normal(N)


def leading_eigenpair(R, tol=HERMITIAN_TOL):
    """Return (lambda_1, v_1, degenerate) without the full spectrum.

    Above DENSE_MAX rows the top two eigenpairs come from Lanczos
    (scipy.sparse.linalg.eigsh) started from a fixed vector; the cost
    does not depend on the rank of R.  A single Lanczos run can miss an
    exact repeat of lambda_1, so degenerate is only reliable on the
    dense path.  Small matrices, and any Lanczos run that fails to
    converge, use the dense index-subset eigh.
    """
    R = _check_hermitian(R, tol)
    N = R.shape[0]
    lam = None
    if N > DENSE_MAX:
        try:
            lam, V = scipy.sparse.linalg.eigsh(
                R, k=2, which='LA', v0=_start_vector(N))
        except scipy.sparse.linalg.ArpackError:
            lam = None
    if lam is None:
        lo = max(N - 2, 0)
        lam, V = scipy.linalg.eigh(R, subset_by_index=[lo, N - 1])
    order = np.argsort(lam)
    lam, V = lam[order], V[:, order]
    v1 = canonicalize(V[:, -1:])[:, 0]
    lam2 = lam[-2] if lam.size > 1 else None
    return float(lam[-1]), v1, _is_degenerate(lam[-1], lam2)


def rank(spec, tol=ZERO_EIG):
    """Number of eigenvalues above tol * lambda_1."""
    lam1 = spec.eigenvalues[0]
    if lam1 <= 0:
        return 0
    return int((spec.eigenvalues > tol * lam1).sum())


def spike_prediction(K1, c):
    """Limit of the leading eigenvalue of R/N.

    1/c + 1/K1 above the threshold K1 > sqrt(c), otherwise the bulk
    right edge.
    """
    K1 = float(K1)
    c = float(c)
    if not c > 0:
        raise ValueError('c must be positive, got {}'.format(c))
    if K1 < 0:
        raise ValueError('K1 must be >= 0, got {}'.format(K1))
    if K1 > math.sqrt(c):
        return 1.0 / c + 1.0 / K1
    return bulk_right_edge(K1, c)


def bulk_right_edge(K1, c):
    """Right edge (1+sqrt(c))^2 / (c (K1+1)) of the scaled bulk."""
    K1 = float(K1)
    c = float(c)
    if not c > 0:
        raise ValueError('c must be positive, got {}'.format(c))
    if K1 < 0:
        raise ValueError('K1 must be >= 0, got {}'.format(K1))
    if math.isinf(K1):
        return 0.0
    return (1 + math.sqrt(c)) ** 2 / (c * (K1 + 1))


def histogram(values, bins):
    """Histogram of values with bins equal-width bins over their range."""
    bins = int(bins)
    if bins < 1:
        raise ValueError('bins must be >= 1, got {}'.format(bins))
    values = np.asarray(values, dtype=float)
    counts, edges = np.histogram(values, bins=bins)
    return Histogram(edges, counts)


def esd(spec, scale=1.0, bins=60, drop_zeros=True):
    """Empirical spectral distribution of eigenvalues/scale.

    drop_zeros removes eigenvalues below ZERO_EIG * lambda_1; R has
    N - n_t structural zeros that would otherwise swamp the bulk.
    """
    if not scale > 0:
        raise ValueError('scale must be positive, got {}'.format(scale))
    lam = spec.eigenvalues
    if drop_zeros:
        lam = lam[lam >= ZERO_EIG * lam[0]] if lam[0] > 0 else lam[:0]
    return histogram(lam / scale, bins)
