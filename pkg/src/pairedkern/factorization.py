"""Zero classification, inner-outer splits and Wiener-Hopf factorization.

Elementary Blaschke factors are fixed as (z - lam)/(1 - conj(lam) z) with no
unimodular prefactor; all unimodular constants are carried explicitly so
factorizations come out in a reproducible canonical form.  The Wiener-Hopf
minus factor is normalized to 1 at infinity.
"""

from __future__ import annotations

import numpy as np

from .errors import CircleVanishingError, CircleZeroOuterError
from .rational import (
    TAU_CIRCLE,
    TAU_ROOT,
    Polynomial,
    RationalFunction,
    _sort_complex,
    match_roots,
    poly_roots,
)


class BlaschkeProduct:
    """Finite Blaschke product: zeros in the open disk plus a unimodular
    constant.  Degree equals the number of zeros, which is also the model
    space dimension."""

    __slots__ = ("zeros", "constant")

    def __init__(self, zeros=(), constant: complex = 1.0, tol: float = None):
        tol = TAU_CIRCLE if tol is None else tol
        zs = _sort_complex(np.asarray(list(zeros), dtype=complex))
        if zs.size and np.max(np.abs(zs)) >= 1.0 - tol:
            bad = zs[np.argmax(np.abs(zs))]
            raise ValueError(f"Blaschke zero {bad:.6g} outside open disk")
        c = complex(constant)
        if abs(abs(c) - 1.0) > 1e-10:
            raise ValueError(f"constant {c:.6g} is not unimodular")
        object.__setattr__(self, "zeros", zs)
        object.__setattr__(self, "constant", c)
        self.zeros.setflags(write=False)

    def __setattr__(self, name, value):
        raise AttributeError("BlaschkeProduct is immutable")

    @property
    def degree(self) -> int:
        return len(self.zeros)

    @property
    def is_constant(self) -> bool:
        return self.degree == 0

    def as_rational(self) -> RationalFunction:
        # (z-lam)/(1-conj(lam) z) = -1/conj(lam) * (z-lam)/(z-1/conj(lam))
        const = complex(self.constant)
        poles = []
        for lam in self.zeros:
            if lam != 0:
                const /= -np.conj(lam)
                poles.append(1.0 / np.conj(lam))
        return RationalFunction.from_factors(const, self.zeros, poles, cancel=False)

    def __call__(self, z):
        return self.as_rational()(z)

    def __mul__(self, other: "BlaschkeProduct") -> "BlaschkeProduct":
        return BlaschkeProduct(
            np.concatenate([self.zeros, other.zeros]),
            self.constant * other.constant,
        )

    def without(self, k: int) -> "BlaschkeProduct":
        """Drop the first k zeros (canonical order); constant kept."""
        return BlaschkeProduct(self.zeros[k:], self.constant)

    def divides(self, other: "BlaschkeProduct", tol: float = TAU_ROOT) -> bool:
        _, left_only, _ = match_roots(self.zeros, other.zeros, tol)
        return left_only.size == 0

    def conj_reflect(self) -> RationalFunction:
        return self.as_rational().conj_reflect()

    def __eq__(self, other):
        if not isinstance(other, BlaschkeProduct):
            return NotImplemented
        return (
            self.degree == other.degree
            and np.allclose(self.zeros, other.zeros)
            and abs(self.constant - other.constant) < 1e-12
        )

    def __hash__(self):
        return hash((self.zeros.tobytes(), self.constant))

    def __repr__(self):
        zs = ", ".join(f"{z:.4g}" for z in self.zeros)
        return f"BlaschkeProduct([{zs}], constant={self.constant:.4g})"


def blaschke_from_rational(f: RationalFunction, tol: float = None) -> BlaschkeProduct:
    """Recognize a rational inner function.

    Checks that all zeros are in the open disk and the denominator is the
    conjugate-reflected numerator up to a unimodular constant.
    """
    tol = TAU_CIRCLE if tol is None else tol
    if f.is_zero:
        raise ValueError("zero function is not inner")
    zs = f.zeros()
    if zs.size and np.max(np.abs(zs)) >= 1.0 - tol:
        raise ValueError("inner rational function must have all zeros in the disk")
    candidate = BlaschkeProduct(zs, 1.0, tol=tol)
    ratio = f / candidate.as_rational()
    if not ratio.is_constant:
        raise ValueError("not inner: denominator is not the reflected numerator")
    c = complex(ratio.num.coeffs[0])
    if abs(abs(c) - 1.0) > 1e-8:
        raise ValueError(f"not inner: |constant| = {abs(c):.6g} != 1")
    return BlaschkeProduct(zs, c / abs(c), tol=tol)


def classify_points(points, tol: float = None):
    """Partition points by |r| < 1-tol, | |r|-1 | <= tol, |r| > 1+tol."""
    tol = TAU_CIRCLE if tol is None else tol
    roots = np.asarray(points, dtype=complex)
    if roots.size == 0:
        z = np.zeros(0, dtype=complex)
        return z, z.copy(), z.copy()
    mod = np.abs(roots)
    on = np.abs(mod - 1.0) <= tol
    inside = (~on) & (mod < 1.0)
    outside = (~on) & (mod > 1.0)
    return roots[inside], roots[on], roots[outside]


def classify_zeros(p: Polynomial, tol: float = None):
    """Partition the roots of p relative to the circle.

    Returns (inside, on_circle, outside) as sorted arrays; their union is
    poly_roots(p).
    """
    if p.degree <= 0:
        z = np.zeros(0, dtype=complex)
        return z, z.copy(), z.copy()
    return classify_points(poly_roots(p), tol)


def inner_outer(p: Polynomial, tol: float = None):
    """Split a polynomial into a Blaschke inner part and an invertible outer.

    p = inner * outer on the circle; the outer part is zero-free on the
    closed disk, hence invertible in H-infinity.  Zeros on the circle are
    refused (the outer part would not be invertible); extract those first.
    """
    tol = TAU_CIRCLE if tol is None else tol
    if p.is_zero:
        raise CircleZeroOuterError("inner-outer split of the zero polynomial")
    inside, on, outside = classify_zeros(p, tol)
    if on.size:
        raise CircleZeroOuterError(
            f"circle zero near {on[0]:.6g}: no invertible outer part"
        )
    inner = BlaschkeProduct(inside, 1.0, tol=tol)
    # outer = p / inner: the disk zeros flip to their reflections
    const = complex(p.leading)
    outer_zeros = list(outside)
    for lam in inside:
        if lam != 0:
            const *= -np.conj(lam)
            outer_zeros.append(1.0 / np.conj(lam))
    return inner, RationalFunction.from_factors(const, outer_zeros, cancel=False)


class WienerHopfFactors:
    """g = g_minus * z^kappa * g_plus with g_minus (and its inverse)
    analytic off the closed disk including infinity, g_plus (and its inverse)
    analytic on the closed disk, and g_minus(inf) = 1."""

    __slots__ = ("g_minus", "kappa", "g_plus")

    def __init__(self, g_minus: RationalFunction, kappa: int, g_plus: RationalFunction):
        object.__setattr__(self, "g_minus", g_minus)
        object.__setattr__(self, "kappa", int(kappa))
        object.__setattr__(self, "g_plus", g_plus)

    def __setattr__(self, name, value):
        raise AttributeError("WienerHopfFactors is immutable")

    def product(self) -> RationalFunction:
        zpow = (
            RationalFunction.from_factors(1.0, [0.0] * self.kappa)
            if self.kappa >= 0
            else RationalFunction.from_factors(1.0, (), [0.0] * (-self.kappa))
        )
        return self.g_minus * zpow * self.g_plus

    def __repr__(self):
        return (
            f"WienerHopfFactors(g_minus={self.g_minus!r}, kappa={self.kappa}, "
            f"g_plus={self.g_plus!r})"
        )


def wiener_hopf(g: RationalFunction, tol: float = None) -> WienerHopfFactors:
    """Wiener-Hopf factorization of a rational symbol with no zeros or poles
    on the circle.  kappa equals the winding number.

    Disk zeros and poles move to g_minus (balanced by z powers so that
    g_minus(inf) = 1), the exterior ones to g_plus; the factor roots are the
    symbol's own, never recomputed.
    """
    tol = TAU_CIRCLE if tol is None else tol
    if g.is_zero:
        raise CircleVanishingError("zero symbol is not WH-factorable")
    z_in, z_on, z_out = classify_points(g.zeros(), tol)
    p_in, p_on, p_out = classify_points(g.poles(), tol)
    if z_on.size or p_on.size:
        raise CircleVanishingError(
            "symbol has a zero or pole on the circle: not WH-factorable"
        )
    kappa = len(z_in) - len(p_in)
    gm_zeros, gm_poles = list(z_in), list(p_in)
    if kappa >= 0:
        gm_poles.extend([0.0] * kappa)
    else:
        gm_zeros.extend([0.0] * (-kappa))
    # the z-power balance can meet a genuine zero/pole at the origin; cancel
    g_minus = RationalFunction.from_factors(1.0, gm_zeros, gm_poles)
    g_plus = RationalFunction.from_factors(g.constant, z_out, p_out, cancel=False)
    return WienerHopfFactors(g_minus, kappa, g_plus)
