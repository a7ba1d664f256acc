"""Binary soft-margin SVM trained with sequential minimal optimization.

Each iteration picks the first index as the one in the "can move up" set
with the largest ``-E`` (``E_i = f(x_i) - y_i``) and the second from the
"can move down" set by the largest guaranteed objective gain (second-order
working-set selection). The gap between the largest ``-E`` upward and the
smallest downward is the largest KKT violation, so training stops when it
drops to ``smo_tolerance``; the bias is then centred in the gap, which
leaves every example within ``smo_tolerance / 2`` of its KKT condition.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from ..errors import NoConvergenceWarning, SingleLabel

SV_THRESHOLD = 1e-8
_PRECOMPUTE_LIMIT = 4000
_BOUND_EPS = 1e-12


@dataclass(frozen=True)
class SvmParams:
    kernel: str = "linear"
    C: float = 1.0
    gamma: float | None = None
    smo_tolerance: float = 1e-3
    max_passes: int = 500     # iteration budget, in multiples of the training-set size

    def __post_init__(self):
        if self.kernel not in ("linear", "rbf"):
            raise ValueError(f"unknown kernel {self.kernel!r}")
        if not self.C > 0:
            raise ValueError("C must be positive")
        if self.kernel == "rbf" and not (self.gamma and self.gamma > 0):
            raise ValueError("rbf kernel needs gamma > 0")


def kernel_matrix(A: np.ndarray, B: np.ndarray, kernel: str, gamma: float | None = None) -> np.ndarray:
    A = np.atleast_2d(A)
    B = np.atleast_2d(B)
    dots = A @ B.T
    if kernel == "linear":
        return dots
    sq = (A ** 2).sum(1)[:, None] + (B ** 2).sum(1)[None, :] - 2.0 * dots
    return np.exp(-gamma * np.maximum(sq, 0.0))


class _Gram:
    """Kernel rows on demand; fully precomputed for modest sample counts."""

    def __init__(self, X, kernel, gamma):
        self.X, self.kernel, self.gamma = X, kernel, gamma
        self.full = kernel_matrix(X, X, kernel, gamma) if len(X) <= _PRECOMPUTE_LIMIT else None
        if self.full is not None:
            self.diag = np.diag(self.full).copy()
        else:
            self.diag = np.ones(len(X)) if kernel == "rbf" else (X ** 2).sum(1)
        self._rows: dict[int, np.ndarray] = {}

    def row(self, i: int) -> np.ndarray:
        if self.full is not None:
            return self.full[i]
        r = self._rows.get(i)
        if r is None:
            if len(self._rows) > 2048:
                self._rows.clear()
            r = self._rows[i] = kernel_matrix(self.X[i:i + 1], self.X, self.kernel, self.gamma)[0]
        return r


@dataclass(eq=False)
class BinaryModel:
    kernel: str
    gamma: float | None
    support_vectors: np.ndarray
    dual_coef: np.ndarray          # alpha_i * y_i for each support vector
    bias: float
    converged: bool = True
    iterations: int = 0
    alpha: np.ndarray | None = field(default=None, repr=False)   # full multiplier vector, training only

    def decision_function(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if len(self.dual_coef) == 0:
            return np.full(len(X), self.bias)
        return kernel_matrix(X, self.support_vectors, self.kernel, self.gamma) @ self.dual_coef + self.bias


def _pair_update(i, j, alpha, y, Cv, E, Ki, Kj):
    """Analytic optimum of the dual over (alpha_i, alpha_j); returns the two deltas."""
    ai, aj, yi, yj = alpha[i], alpha[j], y[i], y[j]
    if yi != yj:
        L, H = max(0.0, aj - ai), min(Cv[j], Cv[i] + aj - ai)
    else:
        L, H = max(0.0, ai + aj - Cv[i]), min(Cv[j], ai + aj)
    if H <= L:
        return 0.0, 0.0
    kii, kjj, kij = Ki[i], Kj[j], Ki[j]
    eta = kii + kjj - 2.0 * kij
    if eta > 1e-12:
        aj_new = min(max(aj + yj * (E[i] - E[j]) / eta, L), H)
    else:
        # flat curvature: the objective is linear along the segment, take the better end
        def gain(aj_try):
            dj = aj_try - aj
            di = -yi * yj * dj
            return (-di * yi * E[i] - dj * yj * E[j]
                    - 0.5 * (kii * di * di + 2 * yi * yj * kij * di * dj + kjj * dj * dj))
        aj_new = L if gain(L) >= gain(H) else H
    ai_new = min(max(ai + yi * yj * (aj - aj_new), 0.0), Cv[i])
    return ai_new - ai, aj_new - aj


def train_pair_smo(X, y, params: SvmParams = SvmParams(), C=None) -> BinaryModel:
    """Fit a binary SVM; ``y`` must hold both -1 and +1.

    ``C`` optionally gives a per-example box bound (class weighting); it
    defaults to ``params.C`` for every example.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if not (np.any(y == 1) and np.any(y == -1)) or not np.all(np.abs(y) == 1):
        raise SingleLabel("binary SVM training needs labels -1 and +1, both present")
    n = len(y)
    Cv = np.full(n, float(params.C)) if C is None else np.asarray(C, dtype=np.float64)
    gram = _Gram(X, params.kernel, params.gamma)
    tol = params.smo_tolerance
    pos = y > 0

    alpha = np.zeros(n)
    E = -y.copy()      # f(x) - y with the bias left out until the end
    budget = max(1, params.max_passes) * n
    converged = False
    it = 0
    while it < budget:
        below = alpha < Cv
        above = alpha > 0
        up = (pos & below) | (~pos & above)
        low = (~pos & below) | (pos & above)
        score = -E
        if not (up.any() and low.any()):
            converged = True
            break
        i = int(np.argmax(np.where(up, score, -np.inf)))
        m_up = score[i]
        m_low = np.where(low, score, np.inf).min()
        if m_up - m_low <= tol:
            converged = True
            break
        Ki = gram.row(i)
        # second-order choice of j: largest guaranteed decrease b^2 / a
        b_it = m_up - score
        a_it = Ki[i] + gram.diag - 2.0 * Ki
        a_it = np.where(a_it > 0, a_it, 1e-12)
        cand = low & (b_it > 0)
        j = int(np.argmax(np.where(cand, b_it * b_it / a_it, -np.inf)))
        Kj = gram.row(j)
        di, dj = _pair_update(i, j, alpha, y, Cv, E, Ki, Kj)
        if di == 0.0 and dj == 0.0:
            break
        for k, d in ((i, di), (j, dj)):
            a = alpha[k] + d
            if a < _BOUND_EPS * Cv[k]:
                a = 0.0
            elif a > Cv[k] * (1.0 - _BOUND_EPS):
                a = Cv[k]
            d = a - alpha[k]
            alpha[k] = a
            E += y[k] * d * (Ki if k == i else Kj)
        it += 1

    up = (pos & (alpha < Cv)) | (~pos & (alpha > 0))
    low = (~pos & (alpha < Cv)) | (pos & (alpha > 0))
    score = -E
    hi = score[up].max() if up.any() else score[low].min()
    lo = score[low].min() if low.any() else hi
    b = 0.5 * (hi + lo)
    if not converged:
        warnings.warn(f"SMO stopped after {it} updates with gap {hi - lo:.3g} > {tol}",
                      NoConvergenceWarning)
    sv = alpha > SV_THRESHOLD
    return BinaryModel(params.kernel, params.gamma, X[sv].copy(), (alpha * y)[sv], float(b),
                       converged, it, alpha)


def dual_objective(alpha, X, y, kernel: str = "linear", gamma: float | None = None) -> float:
    """W(alpha) = sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j K_ij."""
    ay = np.asarray(alpha) * np.asarray(y)
    X = np.asarray(X, dtype=np.float64)
    K = kernel_matrix(X, X, kernel, gamma)
    return float(np.sum(alpha) - 0.5 * ay @ K @ ay)
