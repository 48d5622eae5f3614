"""Solvers for max w^H R w subject to |w_i| = 1.

RA: relaxation algorithm.  Relax the torus to the sphere w^H w = N,
    take the maximizer sqrt(N) v1 and project it back by keeping only
    the entrywise phases.  Exact when R is rank one.
MO: Riemannian gradient ascent on the torus with Armijo backtracking.
BRUTE: exhaustive search over an L-level phase grid with theta_1 = 0
    (a common phase shift does not change the objective).

All solvers return a PhaseSolution.
"""
__all__ = [
    'PhaseSolution', 'MOConfig', 'RA', 'MO', 'BRUTE',
    'RA_WARM', 'RANDOM', 'ONES',
    'evaluate', 'evaluate_cosine_form', 'project', 'solve_ra', 'relax',
    'solve_mo', 'brute_force', 'BRUTE_BUDGET',
]

import math
import time

import numpy as np

from . import spectral

RA = 'RA'
MO = 'MO'
BRUTE = 'BRUTE'

RA_WARM = 'RA_WARM'
RANDOM = 'RANDOM'
ONES = 'ONES'
INITS = (RA_WARM, RANDOM, ONES)

BRUTE_BUDGET = 10 ** 8
# relative margin a brute-force candidate must win by to replace the incumbent
BRUTE_TIE = 1e-12
# imaginary residue allowed in w^H R w
IMAG_TOL = 1e-10


class PhaseSolution(object):
    """A point on the torus and how it was found.

    theta: (N,) phases in [0, 2pi)
    w: exp(j theta)
    objective: w^H R w
    solver_tag: RA, MO or BRUTE
    wall_time: seconds spent in the solve
    iterations: iterations (MO), candidates scanned (BRUTE), 0 (RA)
    degenerate: RA only, lambda_1 was repeated
    stalled: MO only, line search failed before the gradient tolerance
    history: MO only, objective after each accepted step (starting value first)
    """
    def __init__(
            self, theta, objective, solver_tag, wall_time=0.0, iterations=0,
            degenerate=False, stalled=False, history=None):
        self.theta = theta
        self.w = np.exp(1j * theta)
        self.objective = objective
        self.solver_tag = solver_tag
        self.wall_time = wall_time
        self.iterations = iterations
        self.degenerate = degenerate
        self.stalled = stalled
        self.history = history

    def __repr__(self):
        return 'PhaseSolution({}, objective={:.9g}, iterations={}, wall_time={:.3g})'.format(
            self.solver_tag, self.objective, self.iterations, self.wall_time)


class MOConfig(object):
    """Riemannian ascent settings."""
    def __init__(
            self, max_iters=1000, grad_tol=1e-6, armijo_beta=0.5,
            armijo_sigma=1e-4, init=RA_WARM, restarts=0):
        """Initialize and validate.

        max_iters: iteration cap per start
        grad_tol: stop when |grad| <= grad_tol * N * mean(diag(R))
        armijo_beta: backtracking factor in (0, 1)
        armijo_sigma: sufficient increase constant in (0, 1)
        init: RA_WARM, RANDOM or ONES
        restarts: extra random starts, best result kept
        """
        if int(max_iters) < 1:
            raise ValueError('max_iters must be >= 1, got {}'.format(max_iters))
        if not grad_tol > 0:
            raise ValueError('grad_tol must be positive, got {}'.format(grad_tol))
        for name, val in (('armijo_beta', armijo_beta), ('armijo_sigma', armijo_sigma)):
            if not 0 < val < 1:
                raise ValueError('{} must be in (0, 1), got {}'.format(name, val))
        init = str(init).upper()
        if init not in INITS:
            raise ValueError('init must be one of {}, got {}'.format(INITS, init))
        if int(restarts) < 0:
            raise ValueError('restarts must be >= 0, got {}'.format(restarts))
        self.max_iters = int(max_iters)
        self.grad_tol = float(grad_tol)
        self.armijo_beta = float(armijo_beta)
        self.armijo_sigma = float(armijo_sigma)
        self.init = init
        self.restarts = int(restarts)


def _as_theta(R, theta):
    R = np.asarray(R)
    theta = np.asarray(theta, dtype=float)
    if R.ndim != 2 or R.shape[0] != R.shape[1]:
        raise ValueError('R must be square, got shape {}'.format(R.shape))
    if theta.shape != (R.shape[0],):
        raise ValueError(
            'theta shape {} does not match R {}'.format(theta.shape, R.shape))
    return R, theta


def _quad(R, w):
    val = np.vdot(w, R.dot(w))
    if abs(val.imag) > IMAG_TOL * max(abs(val), 1.0):
        raise ValueError(
            'w^H R w has imaginary part {:.3e}; R is not Hermitian'.format(val.imag))
    return float(val.real)


def evaluate(R, theta):
    """Return w^H R w for w = exp(j theta)."""
    R, theta = _as_theta(R, theta)
    return _quad(R, np.exp(1j * theta))


def evaluate_cosine_form(R, theta):
    """w^H R w as sum_k r_kk + sum_{i<j} 2|r_ij| cos(theta_i - theta_j - phi_ij).

    Only phase differences enter, which is why a common shift of theta
    never changes the objective.
    """
    R, theta = _as_theta(R, theta)
    i, j = np.triu_indices(R.shape[0], 1)
    r = R[i, j]
    diff = theta[i] - theta[j] - np.angle(r)
    return float(np.real(np.trace(R)) + 2 * np.sum(np.abs(r) * np.cos(diff)))


def project(v):
    """Project a vector onto the torus; return its phases.

    Zero-amplitude entries have no phase; they get 0.
    """
    return spectral.phases(np.asarray(v, dtype=complex))


def solve_ra(spec, R=None):
    """Relaxation algorithm on a precomputed Spectrum.

    theta = arg(v1).  The objective comes from R when given, otherwise
    from the spectrum itself (sum_i lambda_i |v_i^H w|^2).
    """
    start = time.perf_counter()
    theta = spec.phases1.copy()
    w = np.exp(1j * theta)
    if R is None:
        proj = spec.eigenvectors.conj().T.dot(w)
        objective = float(np.dot(spec.eigenvalues, np.abs(proj) ** 2))
    else:
        objective = _quad(np.asarray(R), w)
    elapsed = time.perf_counter() - start
    return PhaseSolution(
        theta, objective, RA, wall_time=elapsed, degenerate=spec.degenerate)


def relax(R):
    """Relaxation algorithm end to end: leading eigenpair then projection.

    wall_time includes the eigen-decomposition, which is the whole
    cost of the method.
    """
    start = time.perf_counter()
    lam1, v1, degenerate = spectral.leading_eigenpair(R)
    theta = project(v1)
    elapsed = time.perf_counter() - start
    objective = _quad(np.asarray(R), np.exp(1j * theta))
    return PhaseSolution(
        theta, objective, RA, wall_time=elapsed, degenerate=degenerate)


def _ascend(R, w, cfg, gtol, step0):
    """Armijo ascent from w.  Return (w, history, iterations, stalled)."""
    Rw = R.dot(w)
    f = float(np.vdot(w, Rw).real)
    history = [f]
    step = step0
    beta = cfg.armijo_beta
    sigma = cfg.armijo_sigma
    min_step = step0 * 1e-20
    stalled = False
    it = 0
    while it < cfg.max_iters:
        g = 2 * Rw
        rgrad = g - (g * w.conj()).real * w
        gnorm2 = float(np.vdot(rgrad, rgrad).real)
        if not np.isfinite(gnorm2):
            raise FloatingPointError(
                'non-finite Riemannian gradient at iteration {}'.format(it))
        if math.sqrt(gnorm2) <= gtol:
            break
        step /= beta
        while True:
            cand = w + step * rgrad
            mags = np.abs(cand)
            # a zero entry has no retraction; shrink the step instead
            if mags.min() > 0:
                cand = cand / mags
                Rc = R.dot(cand)
                fc = float(np.vdot(cand, Rc).real)
                if fc >= f + sigma * step * gnorm2:
                    break
            step *= beta
            if step < min_step:
                stalled = True
                break
        if stalled:
            break
        w, Rw, f = cand, Rc, fc
        history.append(f)
        it += 1
    return w, history, it, stalled


def solve_mo(inst, cfg=None, seed=0):
    """Riemannian gradient ascent on the torus.

    Euclidean gradient g = 2 R w, Riemannian gradient
    g - Re(g * conj(w)) * w, retraction by entrywise normalization,
    Armijo backtracking.  Stops when the gradient norm is at most
    grad_tol * N * mean(diag(R)) or after max_iters.  The objective
    never decreases along the path.

    inst: ProblemInstance (or anything with an R attribute)
    cfg: MOConfig
    seed: seeds the RANDOM init and the restarts
    """
    if cfg is None:
        cfg = MOConfig()
    R = np.asarray(inst.R, dtype=complex)
    N = R.shape[0]
    lam_bar = float(np.real(np.trace(R))) / N
    gtol = cfg.grad_tol * N * lam_bar
    # row-sum norm bounds lambda_1, so the first trial step is conservative
    scale = float(np.abs(R).sum(axis=1).max())
    step0 = 1.0 / (2 * scale) if scale > 0 else 1.0
    rng = np.random.Generator(np.random.PCG64(seed))

    starts = []
    if cfg.init == RA_WARM:
        starts.append(relax(R).w)
    elif cfg.init == ONES:
        starts.append(np.ones(N, dtype=complex))
    else:
        starts.append(np.exp(1j * rng.uniform(0, 2 * math.pi, N)))
    for _ in range(cfg.restarts):
        starts.append(np.exp(1j * rng.uniform(0, 2 * math.pi, N)))

    start = time.perf_counter()
    best = None
    total = 0
    for w0 in starts:
        w, history, it, stalled = _ascend(R, w0, cfg, gtol, step0)
        total += it
        if best is None or history[-1] > best[1][-1]:
            best = (w, history, stalled)
    elapsed = time.perf_counter() - start
    w, history, stalled = best
    theta = project(w)
    return PhaseSolution(
        theta, _quad(R, np.exp(1j * theta)), MO, wall_time=elapsed,
        iterations=total, stalled=stalled, history=history)


def _grid(levels, ndigits, start, stop):
    """Digits (lexicographic order) of grid indices start..stop-1."""
    if ndigits == 0:
        return np.zeros((stop - start, 0), dtype=np.int64)
    idx = np.arange(start, stop, dtype=np.int64)
    return np.stack(np.unravel_index(idx, (levels,) * ndigits), axis=1)


def brute_force(inst, levels, budget=BRUTE_BUDGET, block=1 << 20):
    """Exhaustive search over theta in {0, 2pi/L, ...}^N with theta_1 = 0.

    Candidates are scanned in lexicographic order; the first candidate
    within BRUTE_TIE of the maximum is returned.  Uses the factor Phi:
    w^H R w = |Phi^H w|^2, and splits the free phases into a head and a
    tail so |a + b|^2 = |a|^2 + |b|^2 + 2 Re(a^H b) needs one matrix
    product per head block.

    inst: ProblemInstance
    levels: L >= 2
    budget: maximum allowed L^(N-1)
    block: approximate number of candidates per product
    """
    levels = int(levels)
    if levels < 2:
        raise ValueError('levels must be >= 2, got {}'.format(levels))
    R = np.asarray(inst.R, dtype=complex)
    Phi = np.asarray(inst.Phi, dtype=complex)
    N = R.shape[0]
    free = N - 1
    required = levels ** free
    if required > budget:
        raise ValueError(
            'brute force needs {}^{} = {} candidates, budget is {}'.format(
                levels, free, required, budget))

    start = time.perf_counter()
    # tail holds at most ~2^15 candidates
    ntail = 0
    while ntail < free and levels ** (ntail + 1) <= (1 << 15):
        ntail += 1
    if free and not ntail:
        ntail = 1
    nhead = free - ntail
    unit = np.exp(2j * math.pi * np.arange(levels) / levels)
    Phic = Phi.conj()

    tail_digits = _grid(levels, ntail, 0, levels ** ntail)
    Wt = unit[tail_digits]
    St = Wt.dot(Phic[N - ntail:]) if ntail else np.zeros((1, Phi.shape[1]), complex)
    Et = np.sum(np.abs(St) ** 2, axis=1)

    nheads = levels ** nhead
    hblock = max(1, block // St.shape[0])
    best_val = -np.inf
    best = None
    for lo in range(0, nheads, hblock):
        hi = min(lo + hblock, nheads)
        head_digits = _grid(levels, nhead, lo, hi)
        Wh = unit[head_digits]
        # theta_1 pinned to 0, w_1 = 1
        Sh = Phic[0] + Wh.dot(Phic[1:1 + nhead])
        Eh = np.sum(np.abs(Sh) ** 2, axis=1)
        vals = Eh[:, None] + Et[None, :] + 2 * np.real(Sh.conj().dot(St.T))
        top = vals.max()
        if best is None or top > best_val + BRUTE_TIE * abs(best_val):
            flat = int(np.argmax(vals.ravel() >= top - BRUTE_TIE * abs(top)))
            h, t = divmod(flat, vals.shape[1])
            best_val = top
            best = (head_digits[h], tail_digits[t])
    digits = np.concatenate(([0], best[0], best[1])).astype(float)
    theta = digits * (2 * math.pi / levels)
    elapsed = time.perf_counter() - start
    return PhaseSolution(
        theta, evaluate(R, theta), BRUTE, wall_time=elapsed, iterations=required)
