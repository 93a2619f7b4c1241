"""The non-cyclic companion problems and their simplex minimization.

For a nonnegative vector x = (x_{1-N}, ..., x_0) summing to 1 and a
price p > 0, two objectives are evaluated:

* the windowed form T(x, p)  = sum_{i<=-1} x_i / m_i + x_0 / p, where
  m_i is the largest average over forward windows of length at most |i|;
* the chain form   Tc(x, p)  = sum_{i<=-1} x_i / x_{i+1} + x_0 / p,
  with the convention that a zero prefix contributes nothing.

The chain form dominates the windowed form pointwise, and both share
the same simplex minimum, attained on a trailing support whose entries
are nonincreasing except possibly the leftmost one and whose last entry
is at least p.  The minimum over the simplex at p = 1/n equals the
infimum of the cyclic maximal-average sum over n-tuples, which is what
makes this module the computational workhorse of the package.

Minimization runs per support size in log coordinates (the ratio terms
become exponentials of differences, and the normalization constraint
drops out by scale invariance), multi-started from geometric profiles,
then polished by a damped Newton solve of the first-order system in
extended precision.  An independent nested grid search over the simplex
serves as a cross-check oracle at small N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy import optimize as _sciopt

from .errors import ConsistencyViolation, InadmissiblePair, NonConvergence

LD = np.longdouble


# ---------------------------------------------------------------------------
# Objective evaluation


def t_chain(x: Sequence, p) -> float:
    """Chain sum: consecutive-ratio terms plus the boundary payment x_0/p.

    Zero entries may only appear as a prefix of zeros; a positive entry
    followed by a zero makes the pair inadmissible.  Works on floats,
    Fractions, or numpy scalars alike.
    """
    if p <= 0:
        raise ValueError("p must be positive")
    n = len(x)
    total = 0 * x[-1]
    for i in range(n - 1):
        if x[i] == 0:
            continue
        if x[i + 1] == 0:
            raise InadmissiblePair(f"positive entry at {i} followed by zero")
        total += x[i] / x[i + 1]
    return total + x[-1] / p


def t_noncyclic(x: Sequence, p) -> float:
    """Windowed sum: denominators are maximal forward averages.

    The window at slot i extends at most to the final entry (length
    capped by the distance to the right end), so the vector is treated
    as a finite segment, not a periodic one.
    """
    if p <= 0:
        raise ValueError("p must be positive")
    n = len(x)
    prefix = [0 * x[-1]]
    for v in x:
        prefix.append(prefix[-1] + v)
    total = 0 * x[-1]
    for i in range(n - 1):
        if x[i] == 0:
            continue
        best = None
        for r in range(1, n - i):
            avg = (prefix[i + 1 + r] - prefix[i + 1]) / r
            if best is None or avg > best:
                best = avg
        if best == 0:
            raise InadmissiblePair(f"positive entry at {i} with zero forward window")
        total += x[i] / best
    return total + x[-1] / p


def chain_gradient(x: np.ndarray, p: float) -> np.ndarray:
    """Gradient of the chain sum at a strictly positive vector."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("gradient requires a strictly positive vector")
    n = len(x)
    g = np.zeros(n)
    g[:-1] += 1.0 / x[1:]
    g[-1] += 1.0 / p
    g[1:] -= x[:-1] / x[1:] ** 2
    return g


def chain_gradient_fd(x: np.ndarray, p: float, rel_step: float = 1e-6) -> np.ndarray:
    """Central-difference gradient with per-component relative steps.

    Steps scale with each coordinate, which keeps the difference quotient
    meaningful when entries span many orders of magnitude.  Differences
    run in extended precision: near a constrained minimizer the objective
    moves by ~|g| * h against a background value many orders larger, and
    double precision would lose most of the quotient to cancellation.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("finite differences require a strictly positive vector")
    x = x.astype(LD)
    pld = LD(p)
    g = np.zeros(len(x), dtype=LD)
    for j in range(len(x)):
        h = LD(rel_step) * x[j]
        xp = x.copy()
        xm = x.copy()
        xp[j] += h
        xm[j] -= h
        g[j] = (_value_ld(xp, pld) - _value_ld(xm, pld)) / (xp[j] - xm[j])
    return g.astype(float)


def gradient_agreement(x: np.ndarray, p: float, rel_step: float = 1e-6) -> float:
    """Normalized mismatch between analytic and differenced gradients."""
    g = chain_gradient(x, p)
    g_fd = chain_gradient_fd(x, p, rel_step)
    return float(np.linalg.norm(g_fd - g) / max(np.linalg.norm(g), 1.0))


def support_entries(x: np.ndarray) -> np.ndarray:
    """Trailing positive block of a vector whose zeros form a prefix."""
    x = np.asarray(x, dtype=float)
    nz = np.nonzero(x)[0]
    if len(nz) == 0:
        raise ValueError("vector is identically zero")
    lead = nz[0]
    if np.any(x[lead:] <= 0):
        raise ValueError("zeros occur inside the support")
    return x[lead:]


def projected_residual(x: np.ndarray, p: float) -> float:
    """Norm of the support gradient projected tangent to the sum constraint.

    Evaluated in extended precision: near the optimum the gradient
    components agree to many digits, and the cancellation would otherwise
    swamp the result for small p.
    """
    s = support_entries(x).astype(LD)
    if len(s) == 1:
        return 0.0
    g = _grad_ld(s, LD(p))
    g = g - g.mean()
    return float(np.sqrt((g * g).sum()))


# ---------------------------------------------------------------------------
# Extended-precision internals (support coordinates, all entries positive)


def _value_ld(x: np.ndarray, p) -> np.longdouble:
    return (x[:-1] / x[1:]).sum() + x[-1] / p


def _grad_ld(x: np.ndarray, p) -> np.ndarray:
    g = np.zeros(len(x), dtype=LD)
    g[:-1] += 1 / x[1:]
    g[-1] += 1 / p
    g[1:] -= x[:-1] / x[1:] ** 2
    return g


def _hess_ld(x: np.ndarray) -> np.ndarray:
    k = len(x)
    h = np.zeros((k, k), dtype=LD)
    for j in range(1, k):
        h[j, j] += 2 * x[j - 1] / x[j] ** 3
        h[j - 1, j] -= 1 / x[j] ** 2
        h[j, j - 1] -= 1 / x[j] ** 2
    return h


def _solve_ld(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Gaussian elimination with partial pivoting in longdouble."""
    a = a.copy()
    b = b.copy()
    m = len(b)
    for col in range(m):
        piv = col + int(np.argmax(np.abs(a[col:, col])))
        if a[piv, col] == 0:
            raise np.linalg.LinAlgError("singular system")
        if piv != col:
            a[[col, piv]] = a[[piv, col]]
            b[[col, piv]] = b[[piv, col]]
        inv = 1 / a[col, col]
        for row in range(col + 1, m):
            f = a[row, col] * inv
            if f != 0:
                a[row, col:] -= f * a[col, col:]
                b[row] -= f * b[col]
    out = np.zeros(m, dtype=LD)
    for row in range(m - 1, -1, -1):
        out[row] = (b[row] - (a[row, row + 1 :] * out[row + 1 :]).sum()) / a[row, row]
    return out


def _newton_polish(x0: np.ndarray, p: float, max_iter: int) -> tuple[np.ndarray, float]:
    """Damped Newton on the first-order system over the support.

    Unknowns are the support entries plus the multiplier of the sum
    constraint.  Returns the iterate with the smallest projected
    residual seen.
    """
    k = len(x0)
    pld = LD(p)
    x = x0.astype(LD)
    x = x / x.sum()
    if k == 1:
        return x, 0.0

    def residual(v):
        g = _grad_ld(v, pld)
        g = g - g.mean()
        return float(np.sqrt((g * g).sum()))

    best_x = x.copy()
    best_res = residual(x)
    lam = _grad_ld(x, pld).mean()
    for _ in range(max_iter):
        g = _grad_ld(x, pld)
        f = np.zeros(k + 1, dtype=LD)
        f[:k] = g - lam
        f[k] = x.sum() - 1
        jac = np.zeros((k + 1, k + 1), dtype=LD)
        jac[:k, :k] = _hess_ld(x)
        jac[:k, k] = -1
        jac[k, :k] = 1
        try:
            delta = _solve_ld(jac, -f)
        except np.linalg.LinAlgError:
            break
        dx = delta[:k]
        # fraction-to-boundary damping keeps all entries positive
        alpha = LD(1)
        neg = dx < 0
        if neg.any():
            alpha = min(alpha, LD(0.95) * (-x[neg] / dx[neg]).min())
        if alpha <= 0:
            break
        x_new = x + alpha * dx
        lam_new = lam + alpha * delta[k]
        res_new = residual(x_new)
        x, lam = x_new, lam_new
        if res_new < best_res:
            best_res = res_new
            best_x = x.copy()
        elif res_new > 10 * best_res:
            break
        if best_res == 0:
            break
    best_x = best_x / best_x.sum()
    return best_x, residual(best_x)


# ---------------------------------------------------------------------------
# Per-support-size solves in log coordinates


def _log_objective(u: np.ndarray, p: float) -> tuple[float, np.ndarray]:
    """Value and gradient in log coordinates, last coordinate gauged to 0.

    With y = exp(u), the objective is sum of exp(u_j - u_{j+1}) plus
    1 / (p * sum(y)); it is scale-free, so fixing the last coordinate
    loses nothing.  Evaluated through log-sum-exp so stray line-search
    points cannot overflow the normalization term.
    """
    full = np.append(u, 0.0)
    top = full.max()
    # wild line-search points can overflow the ratio terms; the resulting
    # inf/nan values are rejected by the caller, not worth a warning
    with np.errstate(over="ignore", invalid="ignore"):
        ratios = np.exp(full[:-1] - full[1:])
        z_log = top + math.log(np.exp(full - top).sum())
        boundary = math.exp(-math.log(p) - z_log)
        value = ratios.sum() + boundary
        grad_full = np.zeros(len(full))
        grad_full[:-1] += ratios
        grad_full[1:] -= ratios
        grad_full -= np.exp(full - z_log) * boundary
    return value, grad_full[:-1]


def _start_from_profile(profile: np.ndarray) -> np.ndarray:
    """Log coordinates (gauge: last entry 0) from a positive profile."""
    u = np.log(profile)
    return (u - u[-1])[:-1]


def _adapt_profile(w: np.ndarray, k: int) -> np.ndarray:
    """Stretch or trim a positive support profile to length k."""
    s = len(w)
    if s == k:
        prof = w
    elif s > k:
        prof = w[s - k :]
    else:
        ratio = w[0] / w[1] if s >= 2 and w[1] > 0 else math.e
        ratio = min(max(ratio, 1.05), 20.0)
        front = [w[0] * ratio ** (k - s - j) for j in range(k - s)]
        prof = np.concatenate([front, w])
    return prof / prof.sum()


@dataclass
class OptimizerConfig:
    """Tolerances and search strategy for the simplex minimization."""

    stationarity_tol: float = 1e-10
    value_rtol: float = 1e-12
    max_iterations: int = 500
    support_patience: int = 3
    start_ratios: tuple[float, ...] = (0.25, 1.0 / math.e, 0.45)
    include_uniform_start: bool = True
    max_newton: int = 40
    warm_start: Optional[np.ndarray] = None


@dataclass
class ReducedSolution:
    """Outcome of a simplex minimization of the chain sum."""

    N: int
    p: float
    value: float
    minimizer: np.ndarray
    support: int
    stationarity_residual: float
    oracle_gap: Optional[float] = None
    consistency_gap: Optional[float] = None
    converged: bool = True

    def support_entries(self) -> np.ndarray:
        return self.minimizer[self.N - self.support :]

    def to_dict(self) -> dict:
        return {
            "n": self.N,
            "p": self.p,
            "value": self.value,
            "support": self.support,
            "minimizer": [float(v) for v in self.minimizer],
            "residual": self.stationarity_residual,
            "oracle_gap": self.oracle_gap,
        }


@dataclass
class _Candidate:
    k: int
    x: np.ndarray  # support entries, longdouble, sum 1
    value: float
    residual: float
    converged: bool


def _solve_support(k: int, p: float, starts: list[np.ndarray], cfg: OptimizerConfig) -> _Candidate:
    if k == 1:
        return _Candidate(1, np.ones(1, dtype=LD), 1.0 / p, 0.0, True)
    best_u = None
    best_val = math.inf
    for u0 in starts:
        res = _sciopt.minimize(
            _log_objective,
            u0,
            args=(p,),
            jac=True,
            method="BFGS",
            options={"maxiter": cfg.max_iterations, "gtol": 1e-12},
        )
        if np.isfinite(res.fun) and res.fun < best_val:
            best_val = float(res.fun)
            best_u = res.x
    if best_u is None:  # all starts blew up; fall back to the first profile
        best_u = starts[0]
    full = np.append(best_u, 0.0)
    y = np.exp(full - full.max())
    x = y / y.sum()
    x_ld, residual = _newton_polish(x, p, cfg.max_newton)
    value = float(_value_ld(x_ld, LD(p)))
    return _Candidate(k, x_ld, value, residual, residual <= cfg.stationarity_tol)


def _starts_for(k: int, cfg: OptimizerConfig, extra_profiles: list[np.ndarray]) -> list[np.ndarray]:
    starts = []
    for q in cfg.start_ratios:
        prof = q ** np.arange(k, dtype=float)
        starts.append(_start_from_profile(prof / prof.sum()))
    if cfg.include_uniform_start:
        starts.append(np.zeros(k - 1))
    for w in extra_profiles:
        if w is not None and len(w) > 0:
            starts.append(_start_from_profile(_adapt_profile(np.asarray(w, dtype=float), k)))
    return starts


def minimize_chain(N: int, p: float, cfg: OptimizerConfig | None = None) -> ReducedSolution:
    """Minimize the chain sum over the N-simplex at price p.

    Support sizes are enumerated from 1 up to min(N, ceil(1/p)), the
    bound past which enlarging the simplex cannot help; enumeration
    stops early once several consecutive sizes fail to improve.  Raises
    NonConvergence (carrying the best iterate) only if the best value
    found belongs to a solve that missed the stationarity tolerance.
    """
    if N < 1:
        raise ValueError("N must be a positive integer")
    if not (p > 0) or not math.isfinite(p):
        raise ValueError("p must be positive and finite")
    cfg = cfg or OptimizerConfig()
    kmax = min(N, max(1, math.ceil(1.0 / p)))

    warm = None
    if cfg.warm_start is not None:
        warm = support_entries(np.asarray(cfg.warm_start, dtype=float))

    best: _Candidate | None = None
    best_conv: _Candidate | None = None
    prev_x: np.ndarray | None = None
    patience = 0
    for k in range(1, kmax + 1):
        extras = [w for w in (warm, prev_x) if w is not None]
        cand = _solve_support(k, p, _starts_for(k, cfg, extras), cfg)
        prev_x = np.asarray(cand.x, dtype=float)
        improved = (
            best is None
            or cand.value < best.value - abs(best.value) * 0.1 * cfg.value_rtol
        )
        if best is None or cand.value < best.value:
            best = cand
        if cand.converged and (best_conv is None or cand.value < best_conv.value):
            best_conv = cand
        patience = 0 if improved else patience + 1
        if patience >= cfg.support_patience:
            break

    def _to_solution(c: _Candidate, converged: bool) -> ReducedSolution:
        minimizer = np.zeros(N)
        minimizer[N - c.k :] = np.asarray(c.x, dtype=float)
        minimizer[N - c.k :] /= minimizer[N - c.k :].sum()
        value = float(t_chain(minimizer[N - c.k :], p))
        return ReducedSolution(
            N=N,
            p=p,
            value=value,
            minimizer=minimizer,
            support=c.k,
            stationarity_residual=c.residual,
            converged=converged,
        )

    assert best is not None
    slack = abs(best.value) * cfg.value_rtol + 1e-15
    if best_conv is not None and best_conv.value <= best.value + slack:
        return _to_solution(best_conv, True)
    raise NonConvergence(
        f"no support size reached stationarity {cfg.stationarity_tol:g} "
        f"at the best value {best.value:.12g}",
        best=_to_solution(best, False),
    )


def minimize_noncyclic(N: int, p: float, cfg: OptimizerConfig | None = None) -> ReducedSolution:
    """Minimize the windowed sum; solved through the chain form.

    At the chain minimizer the forward-window denominators collapse to
    the immediate successors, so the two objectives must agree there;
    the observed discrepancy is recorded and a violation raised when it
    exceeds 1e-9 relative.
    """
    sol = minimize_chain(N, p, cfg)
    windowed = t_noncyclic(sol.minimizer, p)
    gap = abs(windowed - sol.value) / max(abs(sol.value), 1.0)
    if gap > 1e-9:
        raise ConsistencyViolation(
            f"windowed value {windowed!r} and chain value {sol.value!r} "
            f"disagree (relative gap {gap:.3e})"
        )
    return ReducedSolution(
        N=N,
        p=p,
        value=float(windowed),
        minimizer=sol.minimizer,
        support=sol.support,
        stationarity_residual=sol.stationarity_residual,
        consistency_gap=float(gap),
        converged=sol.converged,
    )


# ---------------------------------------------------------------------------
# Grid-search oracles


def _chain_values(X: np.ndarray, p: float) -> np.ndarray:
    """Vectorized chain sum over rows of X; inadmissible rows get +inf."""
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = X[:, :-1] / X[:, 1:]
    terms = np.where(X[:, :-1] == 0, 0.0, ratios)
    return terms.sum(axis=1) + X[:, -1] / p


def _compositions(total: int, parts: int) -> np.ndarray:
    """All nonnegative integer vectors of given length summing to total."""
    if parts == 1:
        return np.array([[total]], dtype=np.int64)
    rows = []
    for first in range(total + 1):
        rest = _compositions(total - first, parts - 1)
        block = np.empty((len(rest), parts), dtype=np.int64)
        block[:, 0] = first
        block[:, 1:] = rest
        rows.append(block)
    return np.vstack(rows)


def _refine_box(center: np.ndarray, width: float, per_dim: int, evaluate) -> tuple[np.ndarray, float, float]:
    """One local grid pass over the simplex around ``center``.

    The first N-1 coordinates range over a clipped box; the last is the
    slack.  Returns the new incumbent, its value, and the cell width.
    """
    n = len(center)
    axes = []
    cell = 0.0
    for j in range(n - 1):
        lo = max(center[j] - width, 0.0)
        hi = min(center[j] + width, 1.0)
        axes.append(np.linspace(lo, hi, per_dim))
        cell = max(cell, (hi - lo) / max(per_dim - 1, 1))
    grids = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=1)
    slack = 1.0 - pts.sum(axis=1)
    keep = slack >= -1e-12
    pts = pts[keep]
    slack = np.clip(slack[keep], 0.0, None)
    X = np.column_stack([pts, slack])
    vals = evaluate(X)
    idx = int(np.argmin(vals))
    return X[idx], float(vals[idx]), cell


def _per_dim_budget(n_free: int, budget: int = 200_000) -> int:
    if n_free <= 0:
        return 1
    m = int(budget ** (1.0 / n_free))
    return max(9, min(m, 61))


def brute_force_oracle(N: int, p: float, grid_steps: int, refinements: int = 3) -> float:
    """Nested uniform grid search for the chain minimum over the simplex.

    Independent of the log-coordinate optimizer; cost grows like
    grid_steps^(N-1), so this is a small-N verification tool.
    """
    if N < 1:
        raise ValueError("N must be positive")
    if N > 6:
        raise ValueError("grid oracle supports N <= 6")
    if N == 1:
        return 1.0 / p
    comp = _compositions(grid_steps, N)
    X = comp.astype(float) / grid_steps
    vals = _chain_values(X, p)
    idx = int(np.argmin(vals))
    center, best = X[idx], float(vals[idx])
    width = 2.0 / grid_steps
    per_dim = _per_dim_budget(N - 1)
    for _ in range(refinements):
        cand, val, cell = _refine_box(center, width, per_dim, lambda Y: _chain_values(Y, p))
        if val < best:
            best, center = val, cand
        width = 2.0 * cell
    return best


def max_sum_values(X: np.ndarray) -> np.ndarray:
    """Vectorized maximal-average sum over rows of X (periodic n-tuples)."""
    m_rows, n = X.shape
    doubled = np.concatenate([X, X], axis=1)
    prefix = np.zeros((m_rows, 2 * n + 1))
    np.cumsum(doubled, axis=1, out=prefix[:, 1:])
    total = np.zeros(m_rows)
    for j in range(n):
        m_best = np.full(m_rows, -np.inf)
        for r in range(1, n + 1):
            avg = (prefix[:, j + 1 + r] - prefix[:, j + 1]) / r
            np.maximum(m_best, avg, out=m_best)
        total += X[:, j] / m_best
    return total


def cyclic_bruteforce(n: int, grid_steps: int, refinements: int = 2) -> float:
    """Grid lower-envelope search for the cyclic maximal-average minimum.

    Enumerates simplex grid points with the largest coordinate first
    (each rotation orbit contributes one such representative), then
    refines locally.  Returns the best value found, an upper bound on
    the true infimum.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n > 4:
        raise ValueError("cyclic grid search supports n <= 4")
    if n == 1:
        return 1.0
    comp = _compositions(grid_steps, n)
    keep = comp[:, 0] == comp.max(axis=1)
    X = comp[keep].astype(float) / grid_steps
    vals = max_sum_values(X)
    idx = int(np.argmin(vals))
    center, best = X[idx], float(vals[idx])
    width = 2.0 / grid_steps
    per_dim = _per_dim_budget(n - 1)
    for _ in range(refinements):
        cand, val, cell = _refine_box(center, width, per_dim, max_sum_values)
        if val < best:
            best, center = val, cand
        width = 2.0 * cell
    return best
