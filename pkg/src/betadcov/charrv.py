"""Gaussian-projection route to beta-distance covariance.

Definition-5 style estimator: for K independent standard normal
direction pairs (xi, eta), the conditional covariance of
exp(i r xi.X) and exp(i s eta.Y) over the empirical law is integrated
against the singular weight r^(-1-beta) s^(-1-beta) on (0, inf)^2 and
averaged over draws. Works in any finite dimension; this is the
paper-free route to multivariate inputs that the one-dimensional
quadrature module cannot serve.

The per-draw integral is not evaluated on a two-dimensional grid.
Expanding |phi_XY - phi_X phi_Y|^2 and integrating each exponential
factor separately reduces the draw to the same three-term pairwise
contraction used by the exact module, applied to one-dimensional
kernel matrices

    P_kl = integral w(r) exp(i r (xi.x_k - xi.x_l)) dr

which depend on a single scalar gap per pair and are read off two
precomputed tables (cosine and sine transforms of the quadrature
weight). The contraction is invariant under adding a constant to P,
so the tables store the regularized, well-conditioned transforms.
"""

import math

import numpy as np
from scipy.spatial.distance import cdist

from .charfn import DomainError, QuadConfig, log_panel_grid, scale_const
from .exact import DcovEstimate, _d1_contract


def char_rv(points, weights, xi, r):
    """Conditional characteristic value E(exp(i r xi.X)) over a discrete law.

    points is an (n, d) coordinate array with a probability (or 1/n)
    weight vector; xi a single projection direction. The modulus of
    the result never exceeds 1.
    """
    if r == 0.0:
        return complex(1.0)
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    w = np.asarray(weights, dtype=float)
    proj = pts @ np.asarray(xi, dtype=float)
    return complex(np.sum(w * np.exp(1j * r * proj)))


def lambda_fn(points, weights, u):
    """Alternating cycle of four Gaussian-kernel expectations.

    Computes E exp(-u |X1-X2|^2) - E exp(-u |X2-X3|^2)
    + E exp(-u |X3-X4|^2) - E exp(-u |X4-X1|^2) over independent
    copies of the law. Each of the four expectations is the same
    double sum, so the value is identically zero for any exchangeable
    input; the function exists to state that identity. |result| <= 4.
    """
    if u <= 0:
        raise ValueError("u must be positive")
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    w = np.asarray(weights, dtype=float)
    d2 = cdist(pts, pts) ** 2
    kernel = np.exp(-u * d2)
    e12 = float(w @ kernel @ w)
    e23 = float(w @ kernel @ w)
    e34 = float(w @ kernel @ w)
    e41 = float(w @ kernel @ w)
    return e12 - e23 + e34 - e41


def mean_sq_char_gap(joint, r, s):
    """Gaussian-averaged squared gap E |Phi_XY - Phi_X Phi_Y|^2, exactly.

    Averaging exp(i xi.v) over a standard normal direction gives
    exp(-|v|^2 / 2), so the expectation over (xi, eta) collapses to the
    pairwise contraction of two Gaussian kernel matrices with scale
    parameters r^2/2 and s^2/2. Finite-support joints only.
    """
    dx2 = cdist(joint.x_atoms, joint.x_atoms) ** 2
    dy2 = cdist(joint.y_atoms, joint.y_atoms) ** 2
    gx = np.exp(-(r * r / 2.0) * dx2)
    gy = np.exp(-(s * s / 2.0) * dy2)
    return _d1_contract(gx, gy, joint.probs)


def mean_sq_char_gap_mc(joint, r, s, draws, seed):
    """Monte Carlo counterpart of mean_sq_char_gap.

    Samples standard normal directions, evaluates the characteristic
    values exactly over the discrete law, and averages the squared
    modulus of the gap. Returns (mean, stderr).
    """
    rng = np.random.default_rng(seed)
    x = joint.x_atoms
    y = joint.y_atoms
    w = joint.probs
    vals = np.empty(draws)
    for i in range(draws):
        xi = rng.standard_normal(x.shape[1])
        eta = rng.standard_normal(y.shape[1])
        ph_x = np.exp(1j * r * (x @ xi))
        ph_y = np.exp(1j * s * (y @ eta))
        joint_cf = np.sum(w * ph_x * ph_y)
        gap = joint_cf - np.sum(w * ph_x) * np.sum(w * ph_y)
        vals[i] = abs(gap) ** 2
    return float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(draws))


def _collapse(x, y):
    """Merge duplicate (x, y) rows into weighted atoms."""
    stacked = np.hstack([x, y])
    uniq, counts = np.unique(stacked, axis=0, return_counts=True)
    w = counts / counts.sum()
    return uniq[:, : x.shape[1]], uniq[:, x.shape[1]:], w


def _kernel_tables(r, wr, tmax, delta_max):
    """Cosine/sine transforms of the quadrature weight on a gap table.

    Returns (delta_grid, four table columns): regularized cosine
    transform integral w(r) (1 - cos(r d)) dr and sine transform
    integral w(r) sin(r d) dr, each for the full grid and for the
    r <= tmax/2 half grid used by the tail extrapolation.
    """
    if delta_max <= 0:
        delta_max = 1.0
    deltas = np.concatenate([[0.0],
                             np.geomspace(delta_max * 1e-9, delta_max, 4096)])
    phase = np.outer(deltas, r)
    cosm = 1.0 - np.cos(phase)
    sinm = np.sin(phase)
    half = wr * (r <= tmax / 2.0)
    return deltas, (cosm @ wr, sinm @ wr, cosm @ half, sinm @ half)


def _gap_kernel(proj, deltas, ctab, stab):
    """Hermitian kernel matrix from one projection via table lookup."""
    gap = proj[:, None] - proj[None, :]
    a = np.abs(gap)
    c = np.interp(a, deltas, ctab)
    s = np.interp(a, deltas, stab)
    return -c + 1j * np.sign(gap) * s


def _d1_contract_c(p, q, w):
    """Complex-kernel version of the pairwise contraction (real part)."""
    pw = p @ w
    qw = q @ w
    term1 = np.sum(w[:, None] * w[None, :] * (p * q))
    term2 = (w @ pw) * (w @ qw)
    term3 = np.sum(w * (pw * qw))
    return float((term1 + term2 - 2.0 * term3).real)


def dcov_charrv_mc(sample, draws=2000, seed=None, q=None):
    """Monte Carlo beta-distance covariance via Gaussian projections.

    Requires Euclidean parts and beta in (0, 2). Each draw projects
    both sides onto fresh standard normal directions and computes the
    weighted characteristic-gap integral exactly over the empirical
    law; value and stderr are the mean and standard error over draws.
    Deterministic for a fixed (seed, draws) pair.
    """
    if sample.x_spec.kind != "euclidean" or sample.y_spec.kind != "euclidean":
        raise ValueError("Gaussian projection route needs Euclidean parts")
    beta = sample.beta
    if not 0 < beta < 2:
        raise DomainError("beta must lie in (0, 2), got %g" % beta)
    if draws < 2:
        raise ValueError("need at least 2 draws for a standard error")
    if seed is None:
        raise ValueError("seed is required (no silent nondeterminism)")
    if q is None:
        q = QuadConfig(eps=1e-5, tmax=1e2, panels_per_decade=6,
                       points_per_panel=12)

    x, y, w = _collapse(sample.x, sample.y)
    streams = [np.random.default_rng(s)
               for s in np.random.SeedSequence(seed).spawn(draws)]
    xis = np.stack([rg.standard_normal(x.shape[1]) for rg in streams])
    etas = np.stack([rg.standard_normal(y.shape[1]) for rg in streams])
    px = x @ xis.T     # atom x draw projections
    py = y @ etas.T

    span = max(float(px.max() - px.min()), float(py.max() - py.min()))
    r, wr_raw = log_panel_grid(q, freq=span)
    wr = wr_raw * r ** (-1.0 - beta)
    deltas, (c_full, s_full, c_half, s_half) = _kernel_tables(
        r, wr, q.tmax, span)

    f = 1.0 / (2.0 ** beta - 1.0)
    vals = np.empty(draws)
    for i in range(draws):
        p_full = _gap_kernel(px[:, i], deltas, c_full, s_full)
        p_half = _gap_kernel(px[:, i], deltas, c_half, s_half)
        q_full = _gap_kernel(py[:, i], deltas, c_full, s_full)
        q_half = _gap_kernel(py[:, i], deltas, c_half, s_half)
        v_ff = _d1_contract_c(p_full, q_full, w)
        v_hf = _d1_contract_c(p_half, q_full, w)
        v_fh = _d1_contract_c(p_full, q_half, w)
        v_hh = _d1_contract_c(p_half, q_half, w)
        tail = (2.0 * v_ff - v_hf - v_fh) * f \
            + (v_ff - v_hf - v_fh + v_hh) * f * f
        vals[i] = v_ff + tail

    c2 = scale_const(beta) ** 2
    value = c2 * float(vals.mean())
    stderr = c2 * float(vals.std(ddof=1) / math.sqrt(draws))
    aux = {"draws": draws, "grid_nodes": int(r.size), "atoms": int(w.size)}
    return DcovEstimate(value=value, method="charrv", beta=beta,
                        n=sample.n, stderr=stderr, aux=aux)


def h_trunc(x, m, beta):
    """Regularizing kernel x^(b/2) + M^(b/2) - (x+M)^(b/2) on x >= 0.

    Nonnegative, bounded by x^(b/2), and nondecreasing in M with limit
    x^(b/2) as M grows (for 0 < beta < 2).
    """
    if m <= 0:
        raise ValueError("M must be positive")
    if not 0 < beta < 2:
        raise DomainError("beta must lie in (0, 2), got %g" % beta)
    x = np.asarray(x, dtype=float)
    e = beta / 2.0
    return x ** e + m ** e - (x + m) ** e


def dcov_hm(sample, m):
    """Truncated-kernel distance covariance over the empirical law.

    Replaces the beta-powered distance by h_trunc of the squared
    distance and evaluates the quarter-mean of the product of the two
    alternating four-point sums, which reduces to the same pairwise
    contraction as the untruncated estimator. Nondecreasing in M and
    converging to dcov_plugin_d1 as M grows.
    """
    if sample.x_spec.kind != "euclidean" or sample.y_spec.kind != "euclidean":
        raise ValueError("truncated kernel route needs Euclidean parts")
    beta = sample.beta
    a = h_trunc(cdist(sample.x, sample.x) ** 2, m, beta)
    b = h_trunc(cdist(sample.y, sample.y) ** 2, m, beta)
    w = np.full(sample.n, 1.0 / sample.n)
    value = _d1_contract(a, b, w)
    return DcovEstimate(value=value, method="hm", beta=beta, n=sample.n,
                        aux={"M": float(m)})
