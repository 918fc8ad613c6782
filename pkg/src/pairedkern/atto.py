"""Asymmetric truncated Toeplitz operators with corona-pair symbols.

The symbol has the shape  phi = conj(theta) * A1m/B1m - alpha * A2p/B2p,
with (A2p, B2p) a corona pair on the analytic side and (A1m, B1m) one on the
conjugate-analytic side.  Once the auxiliary intersection space is proved
trivial, the kernel of the operator K_theta -> K_alpha has the closed form
B2p * ker+ S_{conj(theta) B2p, -B1m}, independent of alpha and of both
numerators.
"""

from __future__ import annotations

import enum

import numpy as np

from .errors import (
    DegenerateSymbolError,
    TrivialityNotEstablishedError,
    UnboundedSymbolError,
)
from .factorization import BlaschkeProduct
from .kernels import KernelSpace, paired_kernel_plus
from .rational import (
    TAU_CIRCLE,
    Polynomial,
    RationalFunction,
    SymbolPair,
    poly_gcd,
    winding_number,
)


class Triviality(enum.Enum):
    PROVED_TRIVIAL = "proved_trivial"
    INCONCLUSIVE = "inconclusive"


def corona_check(f1: RationalFunction, f2: RationalFunction, side: str = "analytic",
                 tol: float = None) -> bool:
    """Corona-pair test: no common zero in the relevant closed disk.

    For rational functions the corona infimum condition reduces, by
    continuity up to the boundary, to the absence of common zeros in the
    closed unit disk (analytic side) or its reflection (conjugate side).
    """
    tol = TAU_CIRCLE if tol is None else tol
    if side == "conjugate":
        return corona_check(f1.conj_reflect(), f2.conj_reflect(), "analytic", tol)
    if side != "analytic":
        raise ValueError(f"unknown side {side!r}")
    for name, f in (("f1", f1), ("f2", f2)):
        if f.is_zero:
            continue
        ps = f.poles()
        if ps.size and np.min(np.abs(ps)) <= 1.0 + tol:
            raise ValueError(f"{name} has a pole inside the closed disk")
    if f1.is_zero and f2.is_zero:
        return False
    if f1.is_zero or f2.is_zero:
        g = f2 if f1.is_zero else f1
        zs = g.zeros()
        return not (zs.size and np.min(np.abs(zs)) <= 1.0 + tol)
    z1 = [z for z in f1.zeros() if abs(z) <= 1.0 + tol]
    z2 = [z for z in f2.zeros() if abs(z) <= 1.0 + tol]
    for a in z1:
        for c in z2:
            if abs(a - c) <= 1e-7 * max(1.0, abs(a)):
                return False
    return True


class AttoSymbol:
    """Validated symbol data for A^{theta,alpha}_phi on K_theta -> K_alpha.

    Carries the two corona pairs; for finite-rank symbols also the
    normalized decomposition (Q1, Q2, E, D1p, D2m) where E holds the circle
    zeros, D1p the exterior zeros and D2m the disk zeros.
    """

    __slots__ = (
        "theta", "alpha", "a1m", "b1m", "a2p", "b2p",
        "e_poly", "d1p", "d2m", "q1", "q2", "points", "_phi",
    )

    def __init__(self, theta: BlaschkeProduct, alpha: BlaschkeProduct,
                 a1m, b1m, a2p, b2p, *, finite_rank=None, tol: float = None):
        tol = TAU_CIRCLE if tol is None else tol
        a1m, b1m, a2p, b2p = (_as_rf(x) for x in (a1m, b1m, a2p, b2p))
        if theta.degree < 1 or alpha.degree < 1:
            raise ValueError("theta and alpha must be non-constant inner functions")
        if b1m.is_zero or b2p.is_zero:
            raise DegenerateSymbolError("corona denominators must be nonzero")
        _require_conjugate_analytic("A1m", a1m, tol)
        _require_conjugate_analytic("B1m", b1m, tol)
        _require_analytic("A2p", a2p, tol)
        _require_analytic("B2p", b2p, tol)
        if not corona_check(a2p, b2p, "analytic", tol):
            raise ValueError("(A2p, B2p) is not a corona pair on the analytic side")
        if not corona_check(a1m, b1m, "conjugate", tol):
            raise ValueError("(A1m, B1m) is not a corona pair on the conjugate side")
        phi = theta.conj_reflect() * (a1m / b1m) - alpha.as_rational() * (a2p / b2p)
        if not phi.is_bounded_on_circle(tol):
            raise UnboundedSymbolError(
                "assembled symbol has a pole on the circle: the circle-zero "
                "factors fail to cancel"
            )
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "a1m", a1m)
        object.__setattr__(self, "b1m", b1m)
        object.__setattr__(self, "a2p", a2p)
        object.__setattr__(self, "b2p", b2p)
        object.__setattr__(self, "_phi", phi)
        fr = finite_rank or {}
        for key in ("e_poly", "d1p", "d2m", "q1", "q2", "points"):
            object.__setattr__(self, key, fr.get(key))

    def __setattr__(self, name, value):
        raise AttributeError("AttoSymbol is immutable")

    @property
    def phi(self) -> RationalFunction:
        """The assembled L-infinity symbol."""
        return self._phi

    @property
    def is_finite_rank(self) -> bool:
        return self.e_poly is not None

    def __repr__(self):
        return (
            f"AttoSymbol(theta deg {self.theta.degree}, alpha deg "
            f"{self.alpha.degree}, finite_rank={self.is_finite_rank})"
        )


def _as_rf(x) -> RationalFunction:
    return x if isinstance(x, RationalFunction) else RationalFunction(x)


def _require_analytic(name, f, tol):
    if f.is_zero:
        return
    ps = f.poles()
    if ps.size and np.min(np.abs(ps)) <= 1.0 + tol:
        raise ValueError(f"{name} must be pole-free on the closed disk")


def _require_conjugate_analytic(name, f, tol):
    if f.is_zero:
        return
    ps = f.poles()
    if ps.size and np.max(np.abs(ps)) >= 1.0 - tol:
        raise ValueError(f"{name} must have all poles in the open disk")
    if f.value_at_infinity() is None:
        raise ValueError(f"{name} must be bounded at infinity")


def s_triviality_threshold(sym: AttoSymbol, tol: float = None) -> int:
    """Least deg(alpha) for which the sufficient criteria certify S = {0}.

    Equals the inner degree the reduced B1m/B2p pair leaves behind (the
    shared circle factor cancels, a denominator z-power carries its degree).
    """
    tol = TAU_CIRCLE if tol is None else tol
    ratio = sym.b1m / sym.b2p
    return max(0, -winding_number(ratio, tol))


def s_trivial_check(sym: AttoSymbol, tol: float = None) -> Triviality:
    """Sufficient test for triviality of the auxiliary space S.

    Certifies S = {0} when ker+ S_{alpha*B1m, B2p} = {0}; for finite
    Blaschke data this is decided exactly and coincides with the
    dim K_alpha >= dim K_I1 + dim K_I2 degree criterion.  The criteria are
    sufficient, not necessary, hence the inconclusive outcome.
    """
    tol = TAU_CIRCLE if tol is None else tol
    if sym.alpha.degree >= s_triviality_threshold(sym, tol):
        return Triviality.PROVED_TRIVIAL
    pair = SymbolPair(sym.alpha.as_rational() * sym.b1m, sym.b2p)
    if paired_kernel_plus(pair, tol).is_zero:
        return Triviality.PROVED_TRIVIAL
    return Triviality.INCONCLUSIVE


def atto_kernel_closed_form(sym: AttoSymbol, tol: float = None) -> KernelSpace:
    """ker A^{theta,alpha}_phi = B2p * ker+ S_{conj(theta) B2p, -B1m}.

    Valid once S is proved trivial; then the result depends neither on alpha
    nor on the numerators A1m, A2p.  Refuses with a diagnostic otherwise.
    """
    tol = TAU_CIRCLE if tol is None else tol
    if s_trivial_check(sym, tol) is not Triviality.PROVED_TRIVIAL:
        raise TrivialityNotEstablishedError(
            "triviality of the auxiliary space is not established: "
            f"deg(alpha) = {sym.alpha.degree} is below the certified "
            f"threshold {s_triviality_threshold(sym, tol)} and the kernel "
            "criterion is nonzero; the closed form does not apply"
        )
    core = paired_kernel_plus(
        SymbolPair(sym.theta.conj_reflect() * sym.b2p, -sym.b1m), tol
    )
    return core.scaled(sym.b2p)


def rational_taylor(f: RationalFunction, t: complex, order: int) -> Polynomial:
    """Taylor polynomial of f at t, truncated below degree `order`.

    Computed by shifting numerator and denominator to w = z - t and doing a
    power-series division; returned as a polynomial in z.
    """
    if order <= 0:
        return Polynomial.zero()
    ns = f.num.shifted(t).coeffs
    ds = f.den.shifted(t).coeffs
    if abs(ds[0]) < 1e-13 * max(np.max(np.abs(ds)), 1.0):
        raise ZeroDivisionError(f"{t:.6g} is a pole; Taylor expansion undefined")
    c = np.zeros(order, dtype=complex)
    for k in range(order):
        s = ns[k] if k < len(ns) else 0.0
        for i in range(k):
            if k - i < len(ds):
                s -= c[i] * ds[k - i]
        c[k] = s / ds[0]
    out = Polynomial.zero()
    power = Polynomial.one()
    step = Polynomial([-t, 1.0])
    for k in range(order):
        out = out + power * c[k]
        power = power * step
    return out


def _deflated_difference(f: RationalFunction, taylor: Polynomial, t: complex,
                         n: int) -> RationalFunction:
    """(taylor - f) / (z - t)^n by synthetic deflation (no root finding)."""
    w = taylor * f.den - f.num
    quot, residual = w.deflate(t, n)
    if residual > 1e-8:
        raise ArithmeticError(
            f"Taylor cancellation residual {residual:.2e} at t = {t:.6g}; "
            "wrong expansion order"
        )
    return RationalFunction._from_sum(quot, f.poles())


def build_finite_rank_symbol(theta: BlaschkeProduct, alpha: BlaschkeProduct,
                             r_plus: RationalFunction, r_minus: RationalFunction,
                             points, tol: float = None) -> AttoSymbol:
    """Assemble the finite-rank symbol from circle-point data.

    phi = conj(theta) R+ - alpha R- plus, for each circle point t of order n,
    the bounded pole term whose numerator pairs conj(theta) and alpha with
    each other's Taylor polynomials of order n-1 at t.  Emits the normalized
    (Q1, Q2, E, D1p, D2m) decomposition with its degree-bound invariants.
    """
    tol = TAU_CIRCLE if tol is None else tol
    r_plus, r_minus = _as_rf(r_plus), _as_rf(r_minus)
    pts = []
    for t, n in points:
        t, n = complex(t), int(n)
        if abs(abs(t) - 1.0) > tol:
            raise ValueError(f"point {t:.6g} is not on the unit circle")
        if n < 1:
            raise ValueError("pole order must be at least 1")
        pts.append((t, n))
    for i, (t, _) in enumerate(pts):
        for s, _ in pts[i + 1:]:
            if abs(t - s) < 1e-7:
                raise ValueError("circle points must be distinct")
    _validate_r_plus(r_plus, tol)
    _validate_r_minus(r_minus, tol)
    if not pts and r_plus.is_zero and r_minus.is_zero:
        raise DegenerateSymbolError("empty finite-rank data gives the zero symbol")

    theta_bar = theta.conj_reflect()
    alpha_rat = alpha.as_rational()
    phi = theta_bar * r_plus - alpha_rat * r_minus
    taylors = []
    for t, n in pts:
        p_alpha = rational_taylor(alpha_rat, t, n)
        p_theta_bar = rational_taylor(theta_bar, t, n)
        taylors.append((p_alpha, p_theta_bar))
        phi = phi + theta_bar * _deflated_difference(alpha_rat, p_alpha, t, n)
        phi = phi - alpha_rat * _deflated_difference(theta_bar, p_theta_bar, t, n)
    _check_bounded_by_sampling(phi, pts, tol)

    # normalized decomposition
    e_poly = Polynomial.one()
    for t, n in pts:
        e_poly = e_poly * Polynomial([-t, 1.0]) ** n
    n0 = sum(n for _, n in pts)
    d1p, s_plus = r_plus.den, r_plus.num
    d2m, s_minus = r_minus.den, r_minus.num
    n1, n2 = d1p.degree, d2m.degree
    q1 = s_plus * e_poly
    q2 = s_minus * e_poly
    for (t, n), (p_alpha, p_theta_bar) in zip(pts, taylors):
        e_j, _ = e_poly.deflate(t, n)
        q1 = q1 + d1p * p_alpha * e_j
        q2 = q2 + d2m * p_theta_bar * e_j
    if q1.degree >= n0 + n1 or q2.degree >= n0 + n2:
        raise ArithmeticError("finite-rank degree bounds violated")
    if poly_gcd(q1, e_poly * d1p).degree > 0 or poly_gcd(q2, e_poly * d2m).degree > 0:
        raise ArithmeticError("numerators share zeros with their denominators")
    # keep the circle roots (and their multiplicities) exact: build the
    # corona denominators from their known factors, never from coefficients
    e_roots = [t for t, n in pts for _ in range(n)]
    origin = [0.0] * (n0 + n1)
    b1m = RationalFunction.from_factors(
        1.0, e_roots + list(r_plus.poles()), origin, cancel=False
    )
    b2p = RationalFunction.from_factors(
        1.0, e_roots + list(r_minus.poles()), (), cancel=False
    )
    sym = AttoSymbol(
        theta, alpha,
        RationalFunction._from_sum(q1, origin),
        b1m,
        RationalFunction._from_sum(q2, ()),
        b2p,
        finite_rank={
            "e_poly": e_poly, "d1p": d1p, "d2m": d2m,
            "q1": q1, "q2": q2, "points": tuple(pts),
        },
        tol=tol,
    )
    if not sym.phi.isclose(phi, 1e-7):
        raise ArithmeticError("normalized decomposition disagrees with assembly")
    return sym


def _validate_r_plus(f, tol):
    if f.is_zero:
        return
    ps = f.poles()
    if ps.size and np.min(np.abs(ps)) <= 1.0 + tol:
        raise ValueError("R+ must be pole-free on the closed disk")
    if f.value_at_infinity() != 0:
        raise ValueError("R+ must vanish at infinity")


def _validate_r_minus(f, tol):
    if f.is_zero:
        return
    ps = f.poles()
    if ps.size and np.max(np.abs(ps)) >= 1.0 - tol:
        raise ValueError("R- must have all poles in the open disk")
    if f.value_at_infinity() != 0:
        raise ValueError("R- must vanish at infinity")


def _check_bounded_by_sampling(phi: RationalFunction, pts, tol):
    """Sup-sample |phi| on the circle with refinement next to each pole
    point; blow-up there signals wrong Taylor data."""
    base = np.exp(2j * np.pi * np.arange(1024) / 1024)
    samples = [base]
    for t, _ in pts:
        offsets = np.concatenate([np.logspace(-8, -2, 25), -np.logspace(-8, -2, 25)])
        samples.append(t * np.exp(1j * offsets))
    zs = np.concatenate(samples)
    vals = np.abs(phi(zs))
    reference = np.median(np.abs(phi(base))) + 1.0
    if not np.all(np.isfinite(vals)) or np.max(vals) > 1e6 * reference:
        raise UnboundedSymbolError(
            "assembled symbol blows up near a circle point: wrong Taylor data"
        )
