"""Fourier-truncation oracle: independent numeric route to every kernel.

Operators are discretized on the Laurent modes -M..M: multiplication
operators become Toeplitz-structured matrices of Fourier coefficients
(sampled by DFT, never through the exact engine), the Hardy projections
become index masks, and kernels come out of an SVD with a relative cutoff.
Truncation tails of rational symbols decay geometrically with the pole
distance to the circle, which is what makes the desk-scale orders work.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import IllSeparatedKernelWarning, PoleTooCloseError, UnboundedSymbolError
from .kernels import H2MINUS, H2PLUS, KernelSpace
from .rational import Polynomial, RationalFunction, SymbolPair

DEFAULT_ORDER = 64
DEFAULT_CUTOFF = 1e-8
MAX_ORDER = 1024
GAP_THRESHOLD = 1e2
TAIL_TOL = 1e-9


class LaurentVector:
    """Coefficients on the modes -M..M of a truncated Fourier series."""

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs, order: int):
        coeffs = np.asarray(coeffs, dtype=complex)
        if coeffs.shape != (2 * order + 1,):
            raise ValueError("coefficient length must be 2*order+1")
        self.coeffs = coeffs
        self.order = order

    def mode(self, k: int) -> complex:
        return complex(self.coeffs[self.order + k])

    def plus(self) -> "LaurentVector":
        out = self.coeffs.copy()
        out[: self.order] = 0.0
        return LaurentVector(out, self.order)

    def minus(self) -> "LaurentVector":
        out = self.coeffs.copy()
        out[self.order:] = 0.0
        return LaurentVector(out, self.order)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))


@dataclass(frozen=True)
class LaurentMatrix:
    """Dense operator on LaurentVector coefficients, with provenance."""

    data: np.ndarray
    order: int
    provenance: str
    tail: float = 0.0


def _coeff_table(f: RationalFunction, halfwidth: int, tol: float = None):
    """Coefficients -halfwidth..halfwidth of f by DFT on 2*halfwidth samples."""
    if not f.is_bounded_on_circle(tol):
        raise UnboundedSymbolError("symbol has a pole on the circle")
    n = max(2 * halfwidth, 8)
    z = np.exp(2j * np.pi * np.arange(n) / n)
    spectrum = np.fft.fft(f(z)) / n
    ks = np.arange(-halfwidth, halfwidth + 1)
    return spectrum[np.mod(ks, n)]


def fourier_coefficients(f: RationalFunction, order: int, tol: float = None):
    """Coefficients -2M..2M of f by DFT on 4M circle samples.

    Returns (coeffs, tail) where tail is the relative magnitude of the edge
    coefficients, a proxy for the geometric truncation error.
    """
    coeffs = _coeff_table(f, 2 * order, tol)
    scale = np.max(np.abs(coeffs))
    tail = 0.0
    if scale > 0 and order >= 2:
        edge = np.concatenate([coeffs[:4], coeffs[-4:]])
        tail = float(np.max(np.abs(edge)) / scale)
    return coeffs, tail


def symbol_to_matrix(f: RationalFunction, order: int, tol: float = None,
                     row_order: int = None) -> LaurentMatrix:
    """Multiplication by f from the modes -M..M into the modes -R..R,
    R = row_order (default M): entry (j,k) = fhat(j-k).

    The square truncation is the Toeplitz-structured operator block; null
    space extraction uses a taller range (row_order = 2M) so that products
    escaping the window stay visible instead of minting spurious kernels.
    """
    row_order = order if row_order is None else row_order
    coeffs = _coeff_table(f, row_order + order, tol)
    scale = np.max(np.abs(coeffs))
    tail = float(np.max(np.abs(
        np.concatenate([coeffs[:4], coeffs[-4:]])
    )) / scale) if scale > 0 else 0.0
    rows = np.arange(-row_order, row_order + 1)
    cols = np.arange(-order, order + 1)
    data = coeffs[row_order + order + np.subtract.outer(rows, cols)]
    return LaurentMatrix(data, order, f"multiplication({f!r})", tail)


def projection_mask(order: int, sign: str) -> np.ndarray:
    idx = np.arange(-order, order + 1)
    return (idx >= 0).astype(float) if sign == "+" else (idx < 0).astype(float)


def paired_matrix(pair: SymbolPair, order: int, tol: float = None,
                  row_order: int = None) -> LaurentMatrix:
    """Truncation of a*P+ + b*P- on the Laurent modes."""
    ta = symbol_to_matrix(pair.a, order, tol, row_order)
    tb = symbol_to_matrix(pair.b, order, tol, row_order)
    data = ta.data * projection_mask(order, "+")[None, :] + tb.data * projection_mask(
        order, "-"
    )[None, :]
    return LaurentMatrix(data, order, "paired(a,b)", max(ta.tail, tb.tail))


def toeplitz_matrix(g: RationalFunction, order: int, tol: float = None,
                    row_order: int = None) -> np.ndarray:
    """Compression P+ M_g P+ from the analytic modes 0..M into 0..R."""
    row_order = order if row_order is None else row_order
    coeffs = _coeff_table(g, row_order + order, tol)
    rows = np.arange(row_order + 1)
    cols = np.arange(order + 1)
    return coeffs[row_order + order + np.subtract.outer(rows, cols)]


def hankel_matrix(f: RationalFunction, order: int, tol: float = None) -> np.ndarray:
    """Hankel operator P- M_f restricted to H2+: rows are the modes -1..-M,
    columns the modes 0..M; entry (j,k) = fhat(-(j+1)-k)."""
    coeffs = _coeff_table(f, 2 * order, tol)
    rows = np.arange(1, order + 1)
    cols = np.arange(order + 1)
    return coeffs[2 * order - np.add.outer(rows, cols)]


@dataclass(frozen=True)
class NullSpace:
    basis: np.ndarray  # columns, orthonormal
    dim: int
    gap: float
    singular_values: np.ndarray


def numeric_kernel(matrix, cutoff: float = DEFAULT_CUTOFF,
                   zero_floor: float = 1e-12) -> NullSpace:
    """Null space by SVD: directions with sigma < cutoff * sigma_max.

    The spectral gap (smallest kept sigma over largest discarded) is the
    confidence figure; below 1e2 an ill-separated-kernel warning is issued.
    A matrix whose largest singular value is below zero_floor counts as the
    zero operator (a relative cutoff is meaningless there).
    """
    data = matrix.data if isinstance(matrix, LaurentMatrix) else np.asarray(matrix)
    if data.size == 0:
        return NullSpace(np.zeros((data.shape[1], 0)), 0, np.inf, np.zeros(0))
    _, s, vh = np.linalg.svd(data)
    smax = s[0] if s.size else 0.0
    if smax <= zero_floor:
        basis = np.eye(data.shape[1], dtype=complex)
        return NullSpace(basis, data.shape[1], np.inf, s)
    keep = s >= cutoff * smax
    rank = int(np.sum(keep))
    dim = data.shape[1] - rank
    basis = vh[rank:].conj().T
    discarded = s[~keep]
    if dim == 0:
        gap = float(s[-1] / (cutoff * smax))
    elif discarded.size == 0:
        gap = np.inf
    else:
        gap = float(s[rank - 1] / discarded[0]) if rank else np.inf
    if np.isfinite(gap) and gap < GAP_THRESHOLD:
        warnings.warn(
            f"ill-separated kernel: spectral gap {gap:.3g} below {GAP_THRESHOLD:g}",
            IllSeparatedKernelWarning,
            stacklevel=2,
        )
    return NullSpace(basis, dim, gap, s)


@dataclass(frozen=True)
class SubspaceComparison:
    angle: float
    matched: bool
    dim_left: int
    dim_right: int


def subspace_angle(u: np.ndarray, v: np.ndarray) -> SubspaceComparison:
    """Largest principal angle between equal-dimensional orthonormal spans;
    a dimension mismatch is reported as pi/2 with the matched flag down."""
    du, dv = u.shape[1], v.shape[1]
    if du != dv:
        return SubspaceComparison(np.pi / 2, False, du, dv)
    if du == 0:
        return SubspaceComparison(0.0, True, 0, 0)
    sigma = np.linalg.svd(u.conj().T @ v, compute_uv=False)
    angle = float(np.arccos(np.clip(np.min(sigma), -1.0, 1.0)))
    return SubspaceComparison(angle, True, du, dv)


def containment_residual(u: np.ndarray, v: np.ndarray) -> float:
    """Worst column norm of v outside span(u) (u orthonormal)."""
    if v.shape[1] == 0:
        return 0.0
    resid = v - u @ (u.conj().T @ v)
    return float(np.max(np.linalg.norm(resid, axis=0)))


def _sample_basis(functions, order):
    """DFT coefficients (window -M..M) for each function, plus the relative
    out-of-window tail measured at 8M sampling resolution."""
    n = 8 * order
    z = np.exp(2j * np.pi * np.arange(n) / n)
    ks = np.arange(-order, order + 1)
    outside = np.ones(n, dtype=bool)
    outside[np.mod(ks, n)] = False
    cols = []
    worst_tail = 0.0
    for f in functions:
        spectrum = np.fft.fft(f(z)) / n
        window = spectrum[np.mod(ks, n)]
        total = float(np.linalg.norm(spectrum))
        tail = float(np.linalg.norm(spectrum[outside])) / max(total, 1e-300)
        worst_tail = max(worst_tail, tail)
        cols.append(window)
    return np.stack(cols, axis=1), worst_tail


def evaluate_kernelspace(space: KernelSpace, order: int, *, tail_tol: float = TAIL_TOL,
                         max_order: int = MAX_ORDER):
    """Orthonormal coefficient-space basis of an exact kernel space.

    The basis functions u z^j are sampled on the Fourier grid and expanded;
    the truncation order is doubled until the out-of-window tail drops below
    tail_tol (pole-distance bound), so the returned order may exceed the
    request.  Returns (basis, order_used).
    """
    m = int(order)
    if space.is_zero:
        return np.zeros((2 * m + 1, 0), dtype=complex), m
    functions = space.basis()
    while True:
        cols, tail = _sample_basis(functions, m)
        if tail <= tail_tol:
            break
        if 2 * m > max_order:
            raise PoleTooCloseError(
                f"tail {tail:.2e} still above {tail_tol:g} at order {m}; "
                "multiplier pole too close to the circle"
            )
        m *= 2
    q, _ = np.linalg.qr(cols)
    return q, m


def plus_block(basis: np.ndarray, order: int) -> np.ndarray:
    """Restrict a (2M+1)-mode basis to the analytic modes 0..M and
    re-orthonormalize (used against the Toeplitz compression)."""
    block = basis[order:, :]
    if block.shape[1] == 0:
        return block
    q, _ = np.linalg.qr(block)
    return q


def decay_order(functions, start: int, tail_tol: float = TAIL_TOL,
                cap: int = MAX_ORDER) -> int:
    """Order at which every listed rational's coefficient tail is below
    tail_tol, predicted from pole distances to the circle."""
    rho = 0.0
    for f in functions:
        ps = f.poles()
        for p in ps:
            m = abs(p)
            rho = max(rho, m if m < 1.0 else 1.0 / m)
    m = int(start)
    while rho > 0.0 and m < cap and rho**m / max(1.0 - rho, 1e-6) > tail_tol:
        m *= 2
    return m


def model_space_basis(b, order: int) -> np.ndarray:
    """Orthonormal coefficient basis of the model space of a finite Blaschke
    product, from the raw functions z^j / prod(1 - conj(lam) z).

    The Gram matrix is computed by 64*deg-point circle quadrature and the
    raw coefficient columns are whitened through its Cholesky factor.
    """
    deg = b.degree
    if deg == 0:
        return np.zeros((2 * order + 1, 0), dtype=complex)
    den = Polynomial.one()
    for lam in b.zeros:
        den = den * Polynomial([1.0, -np.conj(lam)])
    u = RationalFunction(Polynomial.one(), den)
    zr = RationalFunction.z()
    functions = []
    f = u
    for _ in range(deg):
        functions.append(f)
        f = f * zr
    nq = max(64 * deg, 64)
    zq = np.exp(2j * np.pi * np.arange(nq) / nq)
    values = np.stack([g(zq) for g in functions], axis=1)
    gram = values.conj().T @ values / nq
    chol = np.linalg.cholesky(gram)
    cols, _ = _sample_basis(functions, order)
    return cols @ np.linalg.inv(chol).conj().T


@dataclass(frozen=True)
class AttoMatrix:
    """ATTO matrix in orthonormal model-space bases: shape deg(alpha) x deg(theta)."""

    data: np.ndarray
    theta_basis: np.ndarray
    alpha_basis: np.ndarray
    order: int


def atto_matrix(sym, order: int, tol: float = None) -> AttoMatrix:
    """Compression of multiplication by phi from K_theta to K_alpha."""
    phi = symbol_to_matrix(sym.phi, order, tol)
    e_theta = model_space_basis(sym.theta, order)
    e_alpha = model_space_basis(sym.alpha, order)
    data = e_alpha.conj().T @ phi.data @ e_theta
    return AttoMatrix(data, e_theta, e_alpha, order)
