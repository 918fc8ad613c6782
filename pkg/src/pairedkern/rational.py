"""Exact arithmetic for complex polynomials and rational functions on the
unit circle.

"Exact" here is structural: a rational function carries its constant, zero
multiset and pole multiset, and every multiplicative operation (products,
quotients, conjugate reflection, powers) transforms those roots directly,
with no coefficient round-trips.  Root finding happens only where a
polynomial first enters the system, and after genuine additions, whose zeros
are recovered lazily.  Coefficients live in double-precision complex floats,
which is ample at desk-scale degrees; polynomial gcds pair roots within
``TAU_ROOT`` rather than running Euclidean remainder chains, the stabler
choice for clustered roots.  All values are immutable after construction and
every operation is a pure function.
"""

from __future__ import annotations

import numbers

import numpy as np

from .errors import (
    CircleVanishingError,
    DegenerateSymbolError,
    UnboundedSymbolError,
    ZeroPolynomialError,
)

# Default decision band around |z| = 1; overridable per call.
TAU_CIRCLE = 1e-9
# Pairing tolerance for root-matching gcds and cancellations.
TAU_ROOT = 1e-7
# Relative residual |p(r)|/max|coeff| accepted from the companion-matrix solver.
ROOT_RESIDUAL = 1e-9

_TRIM = 1e-12


def _trim(coeffs):
    arr = np.atleast_1d(np.asarray(coeffs, dtype=complex)).ravel()
    if arr.size == 0:
        return np.zeros(1, dtype=complex)
    scale = np.max(np.abs(arr))
    if scale == 0.0:
        return np.zeros(1, dtype=complex)
    keep = np.nonzero(np.abs(arr) > _TRIM * scale)[0]
    if keep.size == 0:
        return np.zeros(1, dtype=complex)
    return arr[: keep[-1] + 1].copy()


class Polynomial:
    """Complex polynomial, coefficients ascending in powers of z."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        arr = _trim(coeffs)
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    @staticmethod
    def zero() -> "Polynomial":
        return Polynomial([0.0])

    @staticmethod
    def one() -> "Polynomial":
        return Polynomial([1.0])

    @staticmethod
    def monomial(n: int, coeff: complex = 1.0) -> "Polynomial":
        c = np.zeros(n + 1, dtype=complex)
        c[n] = coeff
        return Polynomial(c)

    @staticmethod
    def from_roots(roots, leading: complex = 1.0) -> "Polynomial":
        roots = np.asarray(list(roots), dtype=complex)
        if roots.size == 0:
            return Polynomial([leading])
        return Polynomial(leading * np.polynomial.polynomial.polyfromroots(roots))

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        if self.is_zero:
            return -1
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == 0

    @property
    def leading(self) -> complex:
        return complex(self.coeffs[-1])

    def __call__(self, z):
        return np.polynomial.polynomial.polyval(z, self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.coeffs.shape == other.coeffs.shape and bool(
            np.array_equal(self.coeffs, other.coeffs)
        )

    def __hash__(self):
        return hash(self.coeffs.tobytes())

    def isclose(self, other: "Polynomial", tol: float = 1e-8) -> bool:
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        a = np.pad(a, (0, n - len(a)))
        b = np.pad(b, (0, n - len(b)))
        scale = max(np.max(np.abs(a)), np.max(np.abs(b)), 1.0)
        return bool(np.max(np.abs(a - b)) <= tol * scale)

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = np.pad(self.coeffs, (0, n - len(self.coeffs)))
        b = np.pad(other.coeffs, (0, n - len(other.coeffs)))
        return Polynomial(a + b)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(-self.coeffs)

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, numbers.Number):
            return Polynomial(self.coeffs * complex(other))
        if isinstance(other, Polynomial):
            if self.is_zero or other.is_zero:
                return Polynomial.zero()
            return Polynomial(np.convolve(self.coeffs, other.coeffs))
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative polynomial power")
        out = Polynomial.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def divmod(self, other: "Polynomial"):
        """Quotient and remainder; coefficients stay in float precision."""
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = np.array(self.coeffs, dtype=complex)
        dq = len(self.coeffs) - len(other.coeffs)
        if dq < 0:
            return Polynomial.zero(), self
        quot = np.zeros(dq + 1, dtype=complex)
        d = other.coeffs
        for k in range(dq, -1, -1):
            c = rem[k + len(d) - 1] / d[-1]
            quot[k] = c
            rem[k : k + len(d)] -= c * d
        return Polynomial(quot), Polynomial(rem)

    def deflate(self, root: complex, multiplicity: int = 1):
        """Synthetic division by (z-root)^multiplicity.

        Returns (quotient, worst relative remainder); no root finding, so it
        stays stable for clustered circle roots.
        """
        coeffs = np.array(self.coeffs, dtype=complex)
        worst = 0.0
        scale = max(np.max(np.abs(coeffs)), 1.0)
        for _ in range(multiplicity):
            out = np.zeros(max(len(coeffs) - 1, 1), dtype=complex)
            acc = 0.0 + 0.0j
            for k in range(len(coeffs) - 1, 0, -1):
                acc = coeffs[k] + root * acc
                out[k - 1] = acc
            rem = coeffs[0] + root * acc
            worst = max(worst, abs(rem) / scale)
            coeffs = out
        return Polynomial(coeffs), worst

    def derivative(self) -> "Polynomial":
        if self.degree <= 0:
            return Polynomial.zero()
        k = np.arange(1, len(self.coeffs))
        return Polynomial(self.coeffs[1:] * k)

    def shifted(self, t: complex) -> "Polynomial":
        """Coefficients of p(w + t) in w, by repeated synthetic division."""
        work = np.array(self.coeffs, dtype=complex)
        out = []
        while True:
            if len(work) == 1:
                out.append(work[0])
                break
            quot = np.zeros(len(work) - 1, dtype=complex)
            acc = 0.0 + 0.0j
            for k in range(len(work) - 1, 0, -1):
                acc = work[k] + t * acc
                quot[k - 1] = acc
            out.append(work[0] + t * acc)
            work = quot
        return Polynomial(out)

    def conj_reflected(self) -> "Polynomial":
        """z^deg * conj(p(1/conj(z))): roots reflect across the circle."""
        return Polynomial(np.conj(self.coeffs)[::-1])

    def monic(self) -> "Polynomial":
        if self.is_zero:
            return self
        return Polynomial(self.coeffs / self.leading)

    def __repr__(self):
        return f"Polynomial({poly_str(self)})"


def _as_poly(x) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    if isinstance(x, numbers.Number):
        return Polynomial([complex(x)])
    raise TypeError(f"cannot coerce {type(x).__name__} to Polynomial")


def poly_roots(p: Polynomial) -> np.ndarray:
    """All roots of p (with multiplicity), by companion-matrix eigenvalues.

    One Newton polish step is applied where it helps; results are accepted
    only when the relative residual stays under ``ROOT_RESIDUAL``.
    """
    if p.is_zero:
        raise ZeroPolynomialError("roots of the zero polynomial")
    if p.degree == 0:
        return np.zeros(0, dtype=complex)
    roots = np.polynomial.polynomial.polyroots(p.coeffs)
    dp = p.derivative()
    dv = dp(roots)
    ok = np.abs(dv) > 0
    newton = roots.copy()
    newton[ok] = roots[ok] - p(roots[ok]) / dv[ok]
    better = np.abs(p(newton)) < np.abs(p(roots))
    roots[better] = newton[better]
    scale = np.max(np.abs(p.coeffs))
    residual = np.max(np.abs(p(roots))) / scale if len(roots) else 0.0
    if residual > ROOT_RESIDUAL * max(1.0, np.max(np.abs(roots)) ** p.degree):
        raise ArithmeticError(
            f"root residual {residual:.3e} exceeds acceptance threshold"
        )
    return _sort_complex(roots)


def _sort_complex(values) -> np.ndarray:
    arr = np.asarray(values, dtype=complex)
    order = np.lexsort((arr.imag, arr.real))
    return arr[order]


def match_roots(left, right, tol: float = TAU_ROOT):
    """Greedy multiset pairing of two root lists within tol.

    Returns (pairs, left_only, right_only) where pairs holds the averaged
    matched locations.
    """
    left = list(np.asarray(left, dtype=complex))
    right = list(np.asarray(right, dtype=complex))
    pairs = []
    unmatched_left = []
    for r in left:
        if not right:
            unmatched_left.append(r)
            continue
        dist = [abs(r - s) for s in right]
        j = int(np.argmin(dist))
        if dist[j] <= tol * max(1.0, abs(r)):
            pairs.append((r + right.pop(j)) / 2.0)
            continue
        unmatched_left.append(r)
    return (
        np.asarray(pairs, dtype=complex),
        np.asarray(unmatched_left, dtype=complex),
        np.asarray(right, dtype=complex),
    )


def poly_gcd(p: Polynomial, q: Polynomial, tol: float = TAU_ROOT) -> Polynomial:
    """Monic gcd by root matching (constant 1 when coprime)."""
    if p.is_zero:
        return q.monic()
    if q.is_zero:
        return p.monic()
    if p.degree == 0 or q.degree == 0:
        return Polynomial.one()
    common, _, _ = match_roots(poly_roots(p), poly_roots(q), tol)
    if common.size == 0:
        return Polynomial.one()
    return Polynomial.from_roots(common)


def _cancel_factors(zeros, poles, tol: float = TAU_ROOT):
    """Drop zero/pole pairs closer than tol (they cancel)."""
    zeros = list(np.asarray(zeros, dtype=complex))
    poles = list(np.asarray(poles, dtype=complex))
    kept_zeros = []
    for z in zeros:
        hit = None
        for j, p in enumerate(poles):
            if abs(z - p) <= tol * max(1.0, abs(z)):
                hit = j
                break
        if hit is None:
            kept_zeros.append(z)
        else:
            poles.pop(hit)
    return _sort_complex(kept_zeros), _sort_complex(poles)


class RationalFunction:
    """Quotient of coprime polynomials with a monic denominator.

    The factored form (constant, zeros, poles) is the primary state and the
    canonical normalization: the denominator is the monic product over the
    poles, all constants fold into the numerator.  Sums keep their numerator
    in coefficient form and recover zeros lazily, so assembling symbols never
    forces ill-conditioned high-degree root finding.
    """

    __slots__ = ("_const", "_zeros", "_poles", "_numc")

    def __init__(self, num, den=None):
        num = _as_poly(num)
        den = Polynomial.one() if den is None else _as_poly(den)
        if den.is_zero:
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero:
            self._install(0.0, (), (), None)
            return
        zeros = poly_roots(num) if num.degree > 0 else np.zeros(0, complex)
        poles = poly_roots(den) if den.degree > 0 else np.zeros(0, complex)
        zeros, poles = _cancel_factors(zeros, poles)
        self._install(num.leading / den.leading, zeros, poles, None)

    def _install(self, const, zeros, poles, numc):
        object.__setattr__(self, "_const", complex(const) if const is not None else None)
        object.__setattr__(
            self, "_zeros",
            None if zeros is None else tuple(np.asarray(zeros, dtype=complex)),
        )
        object.__setattr__(self, "_poles", tuple(np.asarray(poles, dtype=complex)))
        object.__setattr__(self, "_numc", numc)

    def __setattr__(self, name, value):
        raise AttributeError("RationalFunction is immutable")

    @classmethod
    def from_factors(cls, const, zeros=(), poles=(), cancel: bool = True
                     ) -> "RationalFunction":
        """Build from the factored form const * prod(z-zero) / prod(z-pole)."""
        self = object.__new__(cls)
        const = complex(const)
        if const == 0.0:
            self._install(0.0, (), (), None)
            return self
        zeros = _sort_complex(zeros)
        poles = _sort_complex(poles)
        if cancel:
            zeros, poles = _cancel_factors(zeros, poles)
        self._install(const, zeros, poles, None)
        return self

    @classmethod
    def _from_sum(cls, numc: Polynomial, poles) -> "RationalFunction":
        """Internal: numerator in coefficient form over known poles; poles
        where the numerator vanishes are cancelled by synthetic deflation."""
        self = object.__new__(cls)
        if numc.is_zero:
            self._install(0.0, (), (), None)
            return self
        kept = []
        for p in _sort_complex(poles):
            scale = max(1.0, abs(p)) ** max(numc.degree, 1)
            if abs(complex(numc(p))) <= 1e-10 * scale * np.max(np.abs(numc.coeffs)):
                deflated, residual = numc.deflate(p, 1)
                if residual <= 1e-8:
                    numc = deflated
                    continue
            kept.append(p)
        if numc.degree == 0:
            self._install(numc.leading, (), tuple(kept), None)
            return self
        self._install(None, None, tuple(_sort_complex(kept)), numc)
        return self

    def _force_zeros(self):
        if self._zeros is None:
            zeros = (
                poly_roots(self._numc) if self._numc.degree > 0
                else np.zeros(0, complex)
            )
            object.__setattr__(self, "_zeros", tuple(zeros))
            object.__setattr__(self, "_const", self._numc.leading)

    # -- views -------------------------------------------------------------

    @property
    def num(self) -> Polynomial:
        if self._numc is not None:
            return self._numc
        if self._const == 0.0:
            return Polynomial.zero()
        p = Polynomial.from_roots(self._zeros, leading=self._const)
        object.__setattr__(self, "_numc", p)
        return p

    @property
    def den(self) -> Polynomial:
        return Polynomial.from_roots(self._poles)

    def zeros(self) -> np.ndarray:
        self._force_zeros()
        return np.asarray(self._zeros, dtype=complex)

    def poles(self) -> np.ndarray:
        return np.asarray(self._poles, dtype=complex)

    @property
    def is_zero(self) -> bool:
        if self._numc is not None:
            return self._numc.is_zero
        return self._const == 0.0

    @property
    def is_constant(self) -> bool:
        if self.is_zero:
            return True
        if self._numc is not None:
            return self._numc.degree == 0 and not self._poles
        return not self._zeros and not self._poles

    @property
    def constant(self) -> complex:
        """Leading coefficient of the numerator (den is monic)."""
        self._force_zeros()
        return self._const

    def degree_at_infinity(self) -> int:
        """deg(num) - deg(den): growth order at infinity."""
        n = self._numc.degree if self._numc is not None else len(self._zeros)
        return n - len(self._poles)

    def value_at_infinity(self):
        """Limit at infinity: 0, a finite constant, or None for a pole."""
        if self.is_zero:
            return 0j
        d = self.degree_at_infinity()
        if d < 0:
            return 0j
        if d == 0:
            return self.constant if self._numc is None else (
                self._numc.leading
            )
        return None

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        if self._numc is not None:
            out = np.asarray(self._numc(z), dtype=complex).copy()
        else:
            out = np.full(z.shape, self._const, dtype=complex)
            for zero in self._zeros:
                out *= z - zero
        for pole in self._poles:
            out = out / (z - pole)
        return out if out.shape else complex(out)

    # -- comparisons -------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def isclose(self, other: "RationalFunction", tol: float = 1e-8) -> bool:
        # cross-multiplied comparison is scale-free
        return (self.num * other.den).isclose(other.num * self.den, tol)

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        other = _as_rational(other)
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        # common denominator over the pole-multiset lcm, so shared poles are
        # not artificially doubled (their cancellation order stays genuine)
        shared, left_only, right_only = match_roots(self._poles, other._poles)
        numc = (
            self.num * Polynomial.from_roots(right_only)
            + other.num * Polynomial.from_roots(left_only)
        )
        poles = list(shared) + list(left_only) + list(right_only)
        return RationalFunction._from_sum(numc, poles)

    __radd__ = __add__

    def __neg__(self):
        if self._numc is not None and self._zeros is None:
            return RationalFunction._from_sum(-self._numc, self._poles)
        return RationalFunction.from_factors(
            -self.constant, self._zeros, self._poles, cancel=False
        )

    def __sub__(self, other):
        return self + (-_as_rational(other))

    def __rsub__(self, other):
        return _as_rational(other) + (-self)

    def __mul__(self, other):
        other = _as_rational(other)
        if self.is_zero or other.is_zero:
            return RationalFunction.from_factors(0.0)
        return RationalFunction.from_factors(
            self.constant * other.constant,
            list(self.zeros()) + list(other.zeros()),
            list(self._poles) + list(other._poles),
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_rational(other)
        if other.is_zero:
            raise ZeroDivisionError("division by the zero rational function")
        if self.is_zero:
            return RationalFunction.from_factors(0.0)
        return RationalFunction.from_factors(
            self.constant / other.constant,
            list(self.zeros()) + list(other._poles),
            list(self._poles) + list(other.zeros()),
        )

    def __rtruediv__(self, other):
        return _as_rational(other) / self

    def __pow__(self, n: int):
        if self.is_zero:
            if n <= 0:
                raise ZeroDivisionError("zero to a nonpositive power")
            return self
        zeros, poles = (self.zeros(), self._poles) if n >= 0 else (self._poles, self.zeros())
        k = abs(n)
        return RationalFunction.from_factors(
            self.constant**n, list(zeros) * k, list(poles) * k, cancel=False
        )

    @staticmethod
    def z() -> "RationalFunction":
        return RationalFunction.from_factors(1.0, [0.0])

    @staticmethod
    def const(c) -> "RationalFunction":
        return RationalFunction.from_factors(complex(c))

    def conj_reflect(self) -> "RationalFunction":
        return conj_reflect(self)

    def is_bounded_on_circle(self, tol: float = None) -> bool:
        """L-infinity membership: no poles within tol of the circle."""
        tol = TAU_CIRCLE if tol is None else tol
        ps = self.poles()
        return bool(np.all(np.abs(np.abs(ps) - 1.0) > tol)) if ps.size else True

    def __repr__(self):
        den = self.den
        if den.degree == 0:
            return f"RationalFunction({poly_str(self.num)})"
        return f"RationalFunction(({poly_str(self.num)}) / ({poly_str(den)}))"


def _as_rational(x) -> RationalFunction:
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, Polynomial):
        return RationalFunction(x)
    if isinstance(x, numbers.Number):
        return RationalFunction.from_factors(complex(x))
    raise TypeError(f"cannot coerce {type(x).__name__} to RationalFunction")


def rational_cancel(f: RationalFunction) -> RationalFunction:
    """Re-normalize: coprime num/den, monic denominator (idempotent)."""
    if f.is_zero:
        return RationalFunction.from_factors(0.0)
    return RationalFunction.from_factors(f.constant, f.zeros(), f.poles())


def conj_reflect(f: RationalFunction) -> RationalFunction:
    """The rational function z -> conj(f(1/conj(z))).

    On the circle this agrees pointwise with conj(f); it is an involution
    and multiplicative.  Roots transform exactly: nonzero roots reflect to
    1/conj(root), roots at the origin trade places with a z power.
    """
    if f.is_zero:
        return RationalFunction.from_factors(0.0)
    zeros, poles = f.zeros(), f.poles()
    const = np.conj(f.constant)
    new_zeros, new_poles = [], []
    for zed in zeros:
        if zed != 0:
            const *= -np.conj(zed)
            new_zeros.append(1.0 / np.conj(zed))
    for pole in poles:
        if pole != 0:
            const /= -np.conj(pole)
            new_poles.append(1.0 / np.conj(pole))
    balance = len(poles) - len(zeros)
    if balance > 0:
        new_zeros.extend([0.0] * balance)
    elif balance < 0:
        new_poles.extend([0.0] * (-balance))
    return RationalFunction.from_factors(const, new_zeros, new_poles)


def winding_number(f: RationalFunction, tol: float = None) -> int:
    """Index of f along the circle: (zeros in the disk) - (poles in the disk).

    Requires f zero- and pole-free on the circle (within tol).
    """
    tol = TAU_CIRCLE if tol is None else tol
    if f.is_zero:
        raise CircleVanishingError("winding number of the zero function")
    zs, ps = f.zeros(), f.poles()
    for r in np.concatenate([zs, ps]):
        if abs(abs(r) - 1.0) <= tol:
            raise CircleVanishingError(
                f"symbol vanishes on circle near {r:.6g}; winding undefined"
            )
    return int(np.sum(np.abs(zs) < 1.0)) - int(np.sum(np.abs(ps) < 1.0))


class SymbolPair:
    """Symbol pair (a, b) for the paired operator a*P+ + b*P-.

    Standing assumptions: both members are rational, essentially bounded
    (no poles on the circle) and not identically zero.  The pair is
    degenerate when a and b agree as rational functions.
    """

    __slots__ = ("a", "b")

    def __init__(self, a, b, tol: float = None):
        a, b = _as_rational(a), _as_rational(b)
        if a.is_zero or b.is_zero:
            raise DegenerateSymbolError("symbol pair members must be nonzero")
        for name, f in (("a", a), ("b", b)):
            if not f.is_bounded_on_circle(tol):
                raise UnboundedSymbolError(f"symbol {name} has a pole on the circle")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def __setattr__(self, name, value):
        raise AttributeError("SymbolPair is immutable")

    @property
    def is_degenerate(self) -> bool:
        return self.a.isclose(self.b)

    def ratio(self) -> RationalFunction:
        """a/b in lowest terms (the reduced pair lives in its factors)."""
        return self.a / self.b

    def __repr__(self):
        return f"SymbolPair(a={self.a!r}, b={self.b!r})"


def _fmt_complex(c: complex) -> str:
    re, im = c.real, c.imag
    if abs(im) <= 1e-12 * max(1.0, abs(re)):
        return f"{re:g}"
    if abs(re) <= 1e-12 * max(1.0, abs(im)):
        return f"{im:g}i"
    sign = "+" if im >= 0 else "-"
    return f"({re:g}{sign}{abs(im):g}i)"


def poly_str(p: Polynomial, var: str = "z") -> str:
    """Human-readable polynomial, highest power first."""
    if p.is_zero:
        return "0"
    terms = []
    for k in range(p.degree, -1, -1):
        c = p.coeffs[k]
        if abs(c) <= 1e-14 * max(np.max(np.abs(p.coeffs)), 1.0):
            continue
        cs = _fmt_complex(c)
        if k == 0:
            terms.append(cs)
        else:
            zs = var if k == 1 else f"{var}^{k}"
            terms.append(zs if cs == "1" else f"-{zs}" if cs == "-1" else f"{cs}*{zs}")
    out = " + ".join(terms) if terms else "0"
    return out.replace("+ -", "- ")
