"""Exact kernels of Toeplitz and paired operators in canonical form.

Every computed kernel is a space u * P_{<d}: a rational multiplier times the
polynomials of degree below d.  The zero space is encoded as (u = 1, d = 0).
Spaces are scale-invariant, so the canonical form keeps both numerator and
denominator of u monic; equality of spaces is then decidable by coefficient
comparison.
"""

from __future__ import annotations

import enum

import numpy as np

from .errors import (
    AmbientMismatchError,
    BothSidedCircleZerosError,
    DegenerateSymbolError,
    NotInKernelError,
    UnboundedSymbolError,
)
from .factorization import BlaschkeProduct, classify_points, wiener_hopf
from .rational import (
    TAU_CIRCLE,
    TAU_ROOT,
    Polynomial,
    RationalFunction,
    SymbolPair,
    conj_reflect,
)

H2PLUS = "H2+"
H2MINUS = "H2-"
L2 = "L2"  # full (unprojected) paired kernels; never serialized


class Inclusion(enum.Enum):
    SUBSET_STRICT = "subset_strict"
    EQUAL = "equal"
    SUPERSET_STRICT = "superset_strict"
    INCOMPARABLE = "incomparable"


class KernelSpace:
    """Canonical kernel space u * P_{<dim} inside the ambient H2+, H2- or L2."""

    __slots__ = ("multiplier", "dim", "ambient")

    def __init__(self, multiplier, dim: int, ambient: str = H2PLUS):
        if ambient not in (H2PLUS, H2MINUS, L2):
            raise ValueError(f"unknown ambient {ambient!r}")
        dim = int(dim)
        if dim < 0:
            raise ValueError("negative kernel dimension")
        if dim == 0:
            multiplier = RationalFunction.const(1.0)
        else:
            if not isinstance(multiplier, RationalFunction):
                multiplier = RationalFunction(multiplier)
            if multiplier.is_zero:
                raise ValueError("zero multiplier with positive dimension")
            # canonical form: monic over monic, i.e. unit constant
            multiplier = RationalFunction.from_factors(
                1.0, multiplier.zeros(), multiplier.poles(), cancel=False
            )
            _check_ambient(multiplier, dim, ambient)
        object.__setattr__(self, "multiplier", multiplier)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "ambient", ambient)

    def __setattr__(self, name, value):
        raise AttributeError("KernelSpace is immutable")

    @staticmethod
    def zero(ambient: str = H2PLUS) -> "KernelSpace":
        return KernelSpace(RationalFunction.const(1.0), 0, ambient)

    @property
    def is_zero(self) -> bool:
        return self.dim == 0

    def basis(self):
        """The raw basis u, u*z, ..., u*z^(dim-1)."""
        z = RationalFunction.z()
        out = []
        f = self.multiplier
        for _ in range(self.dim):
            out.append(f)
            f = f * z
        return out

    def contains(self, f: RationalFunction, tol: float = TAU_ROOT) -> bool:
        """Canonical-form membership: f/u is a polynomial of degree < dim."""
        if f.is_zero:
            return True
        if self.dim == 0:
            return False
        q = f / self.multiplier
        return q.poles().size == 0 and len(q.zeros()) < self.dim

    def scaled(self, g: RationalFunction, ambient: str = None) -> "KernelSpace":
        """The space g * (this space), re-canonicalized."""
        if self.dim == 0:
            return KernelSpace.zero(self.ambient if ambient is None else ambient)
        return KernelSpace(
            self.multiplier * g, self.dim, self.ambient if ambient is None else ambient
        )

    def equals(self, other: "KernelSpace", tol: float = 1e-8) -> bool:
        if self.ambient != other.ambient or self.dim != other.dim:
            return False
        if self.dim == 0:
            return True
        return self.multiplier.num.isclose(
            other.multiplier.num, tol
        ) and self.multiplier.den.isclose(other.multiplier.den, tol)

    def __eq__(self, other):
        if not isinstance(other, KernelSpace):
            return NotImplemented
        return self.equals(other)

    def __hash__(self):
        return hash((self.ambient, self.dim))

    def __repr__(self):
        if self.is_zero:
            return f"KernelSpace(zero, ambient={self.ambient})"
        return (
            f"KernelSpace({self.multiplier!r} * P_<{self.dim}, "
            f"ambient={self.ambient})"
        )


def _check_ambient(u: RationalFunction, dim: int, ambient: str):
    poles = u.poles()
    mod = np.abs(poles) if poles.size else np.zeros(0)
    if ambient == H2PLUS:
        if poles.size and np.min(mod) <= 1.0 + TAU_CIRCLE:
            raise ValueError(
                f"H2+ multiplier has a pole at {poles[np.argmin(mod)]:.6g} "
                "inside or on the circle"
            )
    elif ambient == H2MINUS:
        if poles.size and np.max(mod) >= 1.0 - TAU_CIRCLE:
            raise ValueError("H2- multiplier has a pole outside the open disk")
        if u.degree_at_infinity() + dim - 1 >= 0:
            raise ValueError("H2- element fails to vanish at infinity")
    else:  # L2: only circle poles are forbidden
        if poles.size and np.any(np.abs(mod - 1.0) <= TAU_CIRCLE):
            raise ValueError("L2 multiplier has a pole on the circle")


def toeplitz_kernel(g: RationalFunction, tol: float = None) -> KernelSpace:
    """Kernel of the Toeplitz operator with rational symbol g in L-infinity.

    Circle zeros of the numerator are each traded for a factor z (which does
    not change the kernel); the Wiener-Hopf index kappa then decides: the
    kernel is zero for kappa >= 0 and (1/g_plus) * P_{<-kappa} otherwise.
    """
    tol = TAU_CIRCLE if tol is None else tol
    if not isinstance(g, RationalFunction):
        g = RationalFunction(g)
    if g.is_zero:
        raise DegenerateSymbolError("Toeplitz symbol is identically zero")
    if not g.is_bounded_on_circle(tol):
        raise UnboundedSymbolError("Toeplitz symbol has a pole on the circle")
    n_in, n_on, n_out = classify_points(g.zeros(), tol)
    if n_on.size:
        zeros = list(n_in) + list(n_out) + [0.0] * len(n_on)
        g = RationalFunction.from_factors(g.constant, zeros, g.poles())
    factors = wiener_hopf(g, tol)
    if factors.kappa >= 0:
        return KernelSpace.zero(H2PLUS)
    return KernelSpace(1.0 / factors.g_plus, -factors.kappa, H2PLUS)


def _circle_count(points, tol: float) -> int:
    return len(classify_points(points, tol)[1])


def _plus_from_ratio(ratio: RationalFunction, tol: float) -> KernelSpace:
    """ker+ S for a pair already reduced to the coprime ratio A/B.

    Cancelling common factors and clearing denominators leaves the projected
    kernel unchanged, so only the reduced ratio matters.  If B is free of
    circle zeros the kernel is the Toeplitz kernel of A/B.  Otherwise, when A
    is circle-zero free, the kernel is pulled back through the conjugation
    and M bijections from the reflected pair.  When both sides carry circle
    zeros the paper's reduction hypotheses genuinely fail and the exact
    engine declines.
    """
    if _circle_count(ratio.poles(), tol) == 0:
        return toeplitz_kernel(ratio, tol)
    if _circle_count(ratio.zeros(), tol) == 0:
        reflected = conj_reflect(1.0 / ratio)
        inner = _plus_from_ratio(reflected, tol)
        if inner.is_zero:
            return KernelSpace.zero(H2PLUS)
        # ker- S_{A,B} = zbar * conj(ker+ S_{B̄,Ā}); then invert M_{-A/B}
        u_minus = inner.multiplier.conj_reflect() / RationalFunction.from_factors(
            1.0, [0.0] * inner.dim
        )
        u_plus = (1.0 / ratio) * u_minus
        return KernelSpace(u_plus, inner.dim, H2PLUS)
    raise BothSidedCircleZerosError(
        "both reduced symbols vanish on the circle: exact engine unsupported, "
        "use the numeric oracle"
    )


def paired_kernel_plus(pair: SymbolPair, tol: float = None) -> KernelSpace:
    """Projected paired kernel ker+ S_{a,b} = P+ ker(a P+ + b P-)."""
    tol = TAU_CIRCLE if tol is None else tol
    return _plus_from_ratio(pair.ratio(), tol)


def paired_kernel_minus(pair: SymbolPair, tol: float = None) -> KernelSpace:
    """Projected paired kernel ker- S_{a,b}, a subspace of H2-.

    Computed as zbar * conj(ker+ of the swapped-and-conjugated pair); the M
    bijection provides the independent second route (see map_M).
    """
    tol = TAU_CIRCLE if tol is None else tol
    reflected_ratio = conj_reflect(1.0 / pair.ratio())
    inner = _plus_from_ratio(reflected_ratio, tol)
    if inner.is_zero:
        return KernelSpace.zero(H2MINUS)
    u = inner.multiplier.conj_reflect() / RationalFunction.from_factors(
        1.0, [0.0] * inner.dim
    )
    return KernelSpace(u, inner.dim, H2MINUS)


def paired_kernel_full(pair: SymbolPair, tol: float = None) -> KernelSpace:
    """The unprojected ker S_{a,b} as a multiplier space in L2.

    P+ restricted to ker S is the bijection phi -> (b/(b-a)) phi, so the full
    kernel is ((b-a)/b) * ker+ S_{a,b}.  Used by the numeric oracle, whose
    truncated operator sees the full kernel.
    """
    plus = paired_kernel_plus(pair, tol)
    if plus.is_zero or pair.is_degenerate:
        return KernelSpace.zero(L2)
    w = (pair.b - pair.a) / pair.b
    return KernelSpace(plus.multiplier * w, plus.dim, L2)


def map_M(pair: SymbolPair, element: RationalFunction, tol: float = None):
    """The bijection ker+ S_{a,b} -> ker- S_{a,b}, phi -> -(a/b) phi."""
    if not isinstance(element, RationalFunction):
        element = RationalFunction(element)
    plus = paired_kernel_plus(pair, tol)
    if not plus.contains(element):
        raise NotInKernelError("element is not in ker+ of the pair")
    return -(pair.a / pair.b) * element


def _is_subspace(left: KernelSpace, right: KernelSpace) -> bool:
    if left.dim == 0:
        return True
    if right.dim == 0:
        return False
    q = left.multiplier / right.multiplier
    return q.poles().size == 0 and len(q.zeros()) + left.dim <= right.dim


def kernel_include(left: KernelSpace, right: KernelSpace) -> Inclusion:
    """Decide u1 P_{<d1} vs u2 P_{<d2}: containment holds iff u1/u2 reduces
    to a polynomial p with deg p + d1 <= d2."""
    if left.ambient != right.ambient:
        raise AmbientMismatchError(
            f"cannot compare {left.ambient} space with {right.ambient} space"
        )
    fwd = _is_subspace(left, right)
    bwd = _is_subspace(right, left)
    if fwd and bwd:
        return Inclusion.EQUAL
    if fwd:
        return Inclusion.SUBSET_STRICT
    if bwd:
        return Inclusion.SUPERSET_STRICT
    return Inclusion.INCOMPARABLE


def blaschke_dim_formula(pair: SymbolPair, b: BlaschkeProduct, tol: float = None) -> int:
    """Dimension of ker+ S_{aB,b} predicted from dim ker+ S_{a,b} = d and
    deg B = k: max(0, d - k)."""
    d = paired_kernel_plus(pair, tol).dim
    return max(0, d - b.degree)


def multiply_pair_a(pair: SymbolPair, factor: RationalFunction) -> SymbolPair:
    """The pair (a*factor, b); factors multiplying both sides cancel anyway."""
    return SymbolPair(pair.a * factor, pair.b)


def basis_completion(pair: SymbolPair, b: BlaschkeProduct, tol: float = None):
    """Split ker+ S_{a,b} as ker+ S_{aB,b} plus one witness per Blaschke zero.

    Peeling the zeros of B one at a time gives a strictly increasing chain of
    kernels; each witness lives in the step's kernel but not the previous
    one, and is scaled to take the value 1 at the peeled zero.  Requires
    dim ker+ S_{a,b} > deg B.
    """
    tol = TAU_CIRCLE if tol is None else tol
    k = b.degree
    if k == 0:
        raise ValueError("Blaschke factor must be non-constant")
    top = paired_kernel_plus(pair, tol)
    if top.dim <= k:
        raise ValueError(
            f"need dim ker+ S_(a,b) = {top.dim} > deg B = {k} for a completion"
        )
    chain = []
    for i in range(k + 1):
        reduced = b.without(i)
        if reduced.degree == 0:
            chain.append(top)
        else:
            chain.append(
                paired_kernel_plus(multiply_pair_a(pair, reduced.as_rational()), tol)
            )
    core = chain[0]
    witnesses = []
    for i in range(1, k + 1):
        lam = complex(b.zeros[i - 1])
        big, small = chain[i], chain[i - 1]
        witness = _pick_witness(big, small, lam)
        witnesses.append(witness)
    return core, witnesses


def _pick_witness(big: KernelSpace, small: KernelSpace, lam: complex):
    candidates = [Polynomial.monomial(j) for j in range(big.dim)]
    candidates += [
        Polynomial.monomial(j) + Polynomial.one() for j in range(1, big.dim)
    ]
    for q in candidates:
        f = big.multiplier * RationalFunction(q)
        if small.contains(f):
            continue
        value = complex(f(lam))
        if abs(value) < 1e-12:
            continue
        return f * (1.0 / value)
    raise RuntimeError("no witness found; kernel chain is inconsistent")


def intersect_inner(space: KernelSpace, theta: BlaschkeProduct) -> KernelSpace:
    """K intersected with theta*H2+, by divisibility bookkeeping on the
    multiplier: the polynomial part must vanish at each Blaschke zero to the
    multiplicity not already provided by u."""
    if space.ambient != H2PLUS:
        raise AmbientMismatchError("intersect_inner expects an H2+ space")
    if space.is_zero or theta.degree == 0:
        return space
    extra = []
    remaining = list(space.multiplier.zeros())
    for mu in theta.zeros:
        covered = False
        for j, r in enumerate(remaining):
            if abs(r - mu) <= TAU_ROOT * max(1.0, abs(mu)):
                remaining.pop(j)
                covered = True
                break
        if not covered:
            extra.append(mu)
    if space.dim <= len(extra):
        return KernelSpace.zero(H2PLUS)
    lifted = RationalFunction.from_factors(
        1.0, list(space.multiplier.zeros()) + extra,
        space.multiplier.poles(), cancel=False,
    )
    return KernelSpace(lifted, space.dim - len(extra), H2PLUS)
