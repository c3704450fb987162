"""HSIC and the normalized conditional dependence score."""

from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .gram import GramMatrix, center_gram
from ..utils.exceptions import NumericalError
from ..utils.logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class DependenceScore:
    value: float
    n: int
    epsilon: float = 0.0

    def __post_init__(self):
        if not np.isfinite(self.value):
            raise NumericalError(f"dependence score is not finite: {self.value}",
                                 {'n': self.n, 'epsilon': self.epsilon})
        object.__setattr__(self, 'value', float(self.value))

    def __float__(self) -> float:
        return self.value


def _check_same_size(*grams: GramMatrix) -> int:
    sizes = {g.n for g in grams}
    if len(sizes) != 1:
        raise ValueError(f"Gram matrices differ in size: {sorted(sizes)}")
    n = sizes.pop()
    if n < 2:
        raise ValueError(f"need at least 2 samples, got {n}")
    return n


def _trace_product(a: np.ndarray, b: np.ndarray) -> float:
    """trace(a @ b) without forming the product."""
    return float(np.sum(a * b.T))


def hsic_biased(K: GramMatrix, L: GramMatrix) -> DependenceScore:
    """Biased HSIC: trace(Kc Lc) / (n - 1)^2."""
    n = _check_same_size(K, L)
    value = _trace_product(center_gram(K).values, center_gram(L).values) / (n - 1) ** 2
    return DependenceScore(value, n)


def hsic_unbiased(K: GramMatrix, L: GramMatrix) -> DependenceScore:
    """Unbiased U-statistic HSIC estimator (diagnostic; needs n >= 4)."""
    n = _check_same_size(K, L)
    if n < 4:
        raise ValueError(f"unbiased HSIC needs at least 4 samples, got {n}")
    k = K.values.copy()
    l = L.values.copy()
    np.fill_diagonal(k, 0.0)
    np.fill_diagonal(l, 0.0)
    term1 = _trace_product(k, l)
    term2 = k.sum() * l.sum() / ((n - 1) * (n - 2))
    term3 = 2.0 * float(k.sum(axis=0) @ l.sum(axis=1)) / (n - 2)
    return DependenceScore((term1 + term2 - term3) / (n * (n - 3)), n)


def regularized_operator(M: GramMatrix, epsilon: float) -> np.ndarray:
    """R = Mc (Mc + n eps I)^-1 via a Cholesky solve.

    Mc and (Mc + n eps I) commute, so the solve (Mc + n eps I)^-1 Mc gives
    the same symmetric matrix.
    """
    mc = center_gram(M).values
    n = mc.shape[0]
    system = mc + n * epsilon * np.eye(n)
    try:
        factor = linalg.cho_factor(system, lower=True, check_finite=True)
    except linalg.LinAlgError as e:
        raise NumericalError(
            f"regularized Gram matrix is not positive definite (epsilon={epsilon} too small?): {e}",
            {'n': n, 'epsilon': epsilon},
        )
    r = linalg.cho_solve(factor, mc, check_finite=False)
    return 0.5 * (r + r.T)


def conditional_dependence(Gx: GramMatrix, Gz: GramMatrix, Gy: GramMatrix,
                           epsilon: float = 1e-3) -> DependenceScore:
    """Conditional dependence of X and Z given Y.

    value = tr(Rx Rz) - 2 tr(Rx Rz Ry) + tr(Rx Ry Rz Ry), with
    R_M = Mc (Mc + n eps I)^-1 for each centered Gram matrix.
    """
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    n = _check_same_size(Gx, Gz, Gy)

    rx = regularized_operator(Gx, epsilon)
    rz = regularized_operator(Gz, epsilon)
    ry = regularized_operator(Gy, epsilon)

    rx_rz = rx @ rz
    rx_ry = rx @ ry
    rz_ry = rz @ ry
    value = (
        np.trace(rx_rz)
        - 2.0 * _trace_product(rx_rz, ry)
        + _trace_product(rx_ry, rz_ry)
    )
    logger.debug(f"Conditional dependence n={n} epsilon={epsilon}: {value:.6g}")
    return DependenceScore(value, n, epsilon)


def permutation_pvalue(K: GramMatrix, L: GramMatrix, n_permutations: int,
                       rng: np.random.Generator) -> float:
    """Fraction of label shuffles whose HSIC reaches the observed value."""
    observed = hsic_biased(K, L).value
    kc = center_gram(K).values
    lc = center_gram(L).values
    n = K.n
    exceed = 0
    for _ in range(n_permutations):
        perm = rng.permutation(n)
        if _trace_product(kc, lc[np.ix_(perm, perm)]) / (n - 1) ** 2 >= observed:
            exceed += 1
    return (exceed + 1) / (n_permutations + 1)
