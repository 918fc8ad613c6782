"""Randomized verification suites tying the exact engine to the oracle.

Instance generation keeps pole-to-circle distances at 0.2 or more (Blaschke
zeros and disk roots inside radius 0.8, exterior roots in [1.25, 3], circle
zeros exactly unimodular), which is inside the oracle's accuracy envelope.
Every suite is driven by a seeded generator, so a report is reproducible
bit-for-bit modulo its timing field.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .atto import atto_kernel_closed_form, build_finite_rank_symbol, corona_check
from .factorization import BlaschkeProduct, classify_zeros
from .kernels import (
    Inclusion,
    blaschke_dim_formula,
    kernel_include,
    multiply_pair_a,
    paired_kernel_full,
    paired_kernel_plus,
    toeplitz_kernel,
)
from .oracle import (
    DEFAULT_CUTOFF,
    DEFAULT_ORDER,
    atto_matrix,
    decay_order,
    evaluate_kernelspace,
    hankel_matrix,
    numeric_kernel,
    paired_matrix,
    plus_block,
    subspace_angle,
    toeplitz_matrix,
)
from .rational import (
    Polynomial,
    RationalFunction,
    SymbolPair,
    conj_reflect,
    winding_number,
)

ANGLE_TOL = 1e-6
HANKEL_RESIDUAL_TOL = 1e-7


@dataclass(frozen=True)
class OracleComparison:
    """Exact kernel next to its numeric estimate."""

    exact_dim: int
    numeric_dim: int
    angle: float
    gap: float
    order_used: int

    @property
    def agrees(self) -> bool:
        return self.exact_dim == self.numeric_dim and self.angle < ANGLE_TOL


def compare_toeplitz(g: RationalFunction, order: int = DEFAULT_ORDER,
                     cutoff: float = DEFAULT_CUTOFF) -> OracleComparison:
    """Exact ker T_g against the null space of the Toeplitz compression."""
    space = toeplitz_kernel(g)
    start = decay_order([g, space.multiplier], order)
    basis, m = evaluate_kernelspace(space, start)
    nulls = numeric_kernel(toeplitz_matrix(g, m, row_order=2 * m), cutoff)
    cmp = subspace_angle(plus_block(basis, m), nulls.basis)
    return OracleComparison(cmp.dim_left, cmp.dim_right, cmp.angle, nulls.gap, m)


def compare_paired(pair: SymbolPair, order: int = DEFAULT_ORDER,
                   cutoff: float = DEFAULT_CUTOFF) -> OracleComparison:
    """Exact full ker S_{a,b} against the truncated operator's null space."""
    space = paired_kernel_full(pair)
    start = decay_order([pair.a, pair.b, space.multiplier], order)
    basis, m = evaluate_kernelspace(space, start)
    nulls = numeric_kernel(paired_matrix(pair, m, row_order=2 * m), cutoff)
    cmp = subspace_angle(basis, nulls.basis)
    return OracleComparison(cmp.dim_left, cmp.dim_right, cmp.angle, nulls.gap, m)


def compare_atto(sym, order: int = DEFAULT_ORDER,
                 cutoff: float = DEFAULT_CUTOFF) -> OracleComparison:
    """Closed-form ATTO kernel against the model-space matrix null space."""
    space = atto_kernel_closed_form(sym)
    start = decay_order(
        [sym.phi, space.multiplier, _model_den(sym.theta), _model_den(sym.alpha)],
        order,
    )
    basis, m = evaluate_kernelspace(space, start)
    am = atto_matrix(sym, m)
    nulls = numeric_kernel(am.data, cutoff)
    cmp = subspace_angle(basis, am.theta_basis @ nulls.basis)
    return OracleComparison(cmp.dim_left, cmp.dim_right, cmp.angle, nulls.gap, m)


@dataclass
class VerificationReport:
    suite: str
    seed: int
    trials: int
    passes: int = 0
    failures: list = field(default_factory=list)
    worst: float = 0.0
    notes: dict = field(default_factory=dict)
    elapsed_seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, index: int, ok: bool, detail: str, instance: str):
        if ok:
            self.passes += 1
        else:
            self.failures.append(
                {"trial": index, "detail": detail, "instance": instance}
            )

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "trials": self.trials,
            "passes": self.passes,
            "failures": self.failures,
            "worst": self.worst,
            "notes": self.notes,
            "elapsed_seconds": self.elapsed_seconds,
        }


class InstanceGenerator:
    """Seeded random instances for the verification suites."""

    def __init__(self, rng: np.random.Generator):
        self.rng = rng

    def _annulus(self, lo: float, hi: float, n: int) -> np.ndarray:
        radius = self.rng.uniform(lo, hi, n)
        angle = self.rng.uniform(0.0, 2 * np.pi, n)
        return radius * np.exp(1j * angle)

    def disk_points(self, n: int) -> np.ndarray:
        return self._annulus(0.0, 0.8, n)

    def outside_points(self, n: int) -> np.ndarray:
        return self._annulus(1.25, 3.0, n)

    def circle_points(self, n: int) -> np.ndarray:
        return np.exp(1j * self.rng.uniform(0.0, 2 * np.pi, n))

    def blaschke(self, degree: int) -> BlaschkeProduct:
        return BlaschkeProduct(self.disk_points(degree))

    def polynomial(self, n_in: int = 0, n_out: int = 0, n_circle: int = 0) -> Polynomial:
        roots = np.concatenate(
            [self.disk_points(n_in), self.outside_points(n_out), self.circle_points(n_circle)]
        )
        return Polynomial.from_roots(roots)

    def coefficients(self, n: int) -> Polynomial:
        c = self.rng.normal(size=n) + 1j * self.rng.normal(size=n)
        return Polynomial(c)

    def toeplitz_symbol(self, allow_circle: bool = False) -> RationalFunction:
        num = self.polynomial(
            int(self.rng.integers(0, 4)),
            int(self.rng.integers(0, 3)),
            int(self.rng.integers(0, 3)) if allow_circle else 0,
        )
        den = self.polynomial(int(self.rng.integers(0, 4)), int(self.rng.integers(0, 3)))
        return RationalFunction(num, den)

    def symbol_pair(self, d_min: int = 0, d_max: int = 8,
                    circle_prob: float = 0.4) -> SymbolPair:
        """Pair whose projected kernel dimension is (about) a random target;
        circle zeros, when drawn, go on the b side only."""
        target = int(self.rng.integers(d_min, d_max + 1))
        n_a_in = int(self.rng.integers(0, 2))
        a = self.polynomial(n_a_in, int(self.rng.integers(0, 3)))
        n_circle = (
            int(self.rng.integers(1, 3)) if self.rng.random() < circle_prob else 0
        )
        b = self.polynomial(target + n_a_in, int(self.rng.integers(0, 3)), n_circle)
        a_rat = RationalFunction(a)
        if self.rng.random() < 0.3:
            a_rat = a_rat / RationalFunction(Polynomial.monomial(int(self.rng.integers(1, 3))))
        return SymbolPair(a_rat, RationalFunction(b))

    def corona_pair(self):
        """Analytic corona pair (A2p, B2p); B2p keeps off-circle zeros so the
        Hankel symbol stays bounded."""
        n_inner = int(self.rng.integers(0, 4))
        n_outer = int(self.rng.integers(0, 3))
        b2p = self.polynomial(n_inner, n_outer)
        while True:
            a2p = self.polynomial(int(self.rng.integers(0, 3)), int(self.rng.integers(0, 2)))
            if corona_check(RationalFunction(a2p), RationalFunction(b2p)):
                return RationalFunction(a2p), RationalFunction(b2p), n_inner

    def finite_rank_data(self, max_points: int = 2, max_order: int = 2,
                         max_den: int = 2):
        theta = self.blaschke(int(self.rng.integers(1, 6)))
        n_pts = int(self.rng.integers(1, max_points + 1))
        while True:
            ts = self.circle_points(n_pts)
            if n_pts == 1 or np.min(np.abs(np.subtract.outer(ts, ts))
                                    + np.eye(n_pts)) > 0.1:
                break
        points = [(complex(t), int(self.rng.integers(1, max_order + 1))) for t in ts]
        n1 = int(self.rng.integers(0, max_den + 1))
        n2 = int(self.rng.integers(0, max_den + 1))
        r_plus = RationalFunction(Polynomial.zero()) if n1 == 0 else RationalFunction(
            self.coefficients(n1), Polynomial.from_roots(self.outside_points(n1))
        )
        r_minus = RationalFunction(Polynomial.zero()) if n2 == 0 else RationalFunction(
            self.coefficients(n2), Polynomial.from_roots(self.disk_points(n2))
        )
        return theta, points, r_plus, r_minus, n1, n2


def _model_den(b: BlaschkeProduct) -> RationalFunction:
    den = Polynomial.one()
    for lam in b.zeros:
        den = den * Polynomial([1.0, -np.conj(lam)])
    return RationalFunction(Polynomial.one(), den)


def _run(report: VerificationReport, trial_fn, trials: int):
    start = time.perf_counter()
    for i in range(trials):
        ok, detail, instance, worst = trial_fn(i)
        report.record(i, ok, detail, instance)
        if worst is not None:
            report.worst = max(report.worst, worst)
    report.elapsed_seconds = time.perf_counter() - start
    return report


def suite_dims(trials: int, seed: int, order: int = DEFAULT_ORDER,
               cutoff: float = DEFAULT_CUTOFF) -> VerificationReport:
    """dim ker+ S_{aB,b} = max(0, d - k) for finite Blaschke B."""
    gen = InstanceGenerator(np.random.default_rng(seed))
    report = VerificationReport("dims", seed, trials)

    def trial(i):
        pair = gen.symbol_pair(0, 8)
        blaschke = gen.blaschke(int(gen.rng.integers(1, 9)))
        d = paired_kernel_plus(pair).dim
        predicted = blaschke_dim_formula(pair, blaschke)
        actual = paired_kernel_plus(
            multiply_pair_a(pair, blaschke.as_rational())
        ).dim
        ok = actual == predicted == max(0, d - blaschke.degree)
        return ok, f"d={d} k={blaschke.degree} predicted={predicted} actual={actual}", \
            repr(pair), float(abs(actual - predicted))

    return _run(report, trial, trials)


def suite_coburn(trials: int, seed: int, order: int = DEFAULT_ORDER,
                 cutoff: float = DEFAULT_CUTOFF) -> VerificationReport:
    """dim ker T_g = max(0,-kappa), dim ker T_gbar = max(0,kappa), product 0."""
    gen = InstanceGenerator(np.random.default_rng(seed))
    report = VerificationReport("coburn", seed, trials)

    def trial(i):
        g = gen.toeplitz_symbol(allow_circle=False)
        kappa = winding_number(g)
        fwd = toeplitz_kernel(g).dim
        bwd = toeplitz_kernel(conj_reflect(g)).dim
        ok = (
            fwd == max(0, -kappa)
            and bwd == max(0, kappa)
            and fwd * bwd == 0
        )
        return ok, f"kappa={kappa} dims=({fwd},{bwd})", repr(g), None

    return _run(report, trial, trials)


def suite_oracle(trials: int, seed: int, order: int = DEFAULT_ORDER,
                 cutoff: float = DEFAULT_CUTOFF) -> VerificationReport:
    """Exact kernels match numeric null spaces to principal angle 1e-6."""
    gen = InstanceGenerator(np.random.default_rng(seed))
    report = VerificationReport("oracle", seed, trials)

    def trial(i):
        if i % 2 == 0:
            g = gen.toeplitz_symbol(allow_circle=True)
            cmp = compare_toeplitz(g, order, cutoff)
            inst = f"toeplitz {g!r}"
        else:
            pair = gen.symbol_pair(1, 6)
            cmp = compare_paired(pair, order, cutoff)
            inst = f"paired {pair!r}"
        detail = (
            f"dim_exact={cmp.exact_dim} dim_numeric={cmp.numeric_dim} "
            f"angle={cmp.angle:.2e}"
        )
        return cmp.agrees, detail, inst, cmp.angle

    return _run(report, trial, trials)


def suite_inclusions(trials: int, seed: int, order: int = DEFAULT_ORDER,
                     cutoff: float = DEFAULT_CUTOFF) -> VerificationReport:
    """Strict inclusion chains under inner multipliers on the a side."""
    gen = InstanceGenerator(np.random.default_rng(seed))
    report = VerificationReport("inclusions", seed, trials)

    def trial(i):
        while True:
            pair = gen.symbol_pair(3, 6)
            if paired_kernel_plus(pair).dim >= 3:
                break
        deg = int(gen.rng.integers(2, 5))
        theta = gen.blaschke(deg)
        k1 = int(gen.rng.integers(1, deg))
        theta1 = BlaschkeProduct(theta.zeros[:k1])
        s_mid = paired_kernel_plus(pair)
        s_th = paired_kernel_plus(multiply_pair_a(pair, theta.as_rational()))
        s_th1 = paired_kernel_plus(multiply_pair_a(pair, theta1.as_rational()))
        s_co1 = paired_kernel_plus(multiply_pair_a(pair, theta1.conj_reflect()))
        s_co = paired_kernel_plus(multiply_pair_a(pair, theta.conj_reflect()))
        links = [
            ("aT<aT1", s_th, s_th1),
            ("aT1<a", s_th1, s_mid),
            ("a<aC1", s_mid, s_co1),
            ("aC1<aC", s_co1, s_co),
            ("TaT<T1aT1", s_th.scaled(theta.as_rational()),
             s_th1.scaled(theta1.as_rational())),
            ("T1aT1<a", s_th1.scaled(theta1.as_rational()), s_mid),
        ]
        bad = []
        for name, left, right in links:
            if left.is_zero:
                continue
            verdict = kernel_include(left, right)
            if verdict is not Inclusion.SUBSET_STRICT:
                bad.append(f"{name}:{verdict.value}")
        ok = not bad
        detail = "all strict" if ok else "; ".join(bad)
        return ok, detail, f"{pair!r} theta={theta!r} theta1={theta1!r}", None

    return _run(report, trial, trials)


def suite_near_invariance(trials: int, seed: int, order: int = DEFAULT_ORDER,
                          cutoff: float = DEFAULT_CUTOFF) -> VerificationReport:
    """f in K with f(0) = 0 implies f/z in K, for freshly computed kernels."""
    gen = InstanceGenerator(np.random.default_rng(seed))
    report = VerificationReport("near-invariance", seed, trials)
    z = RationalFunction.z()

    def trial(i):
        if i % 2 == 0:
            space = toeplitz_kernel(gen.toeplitz_symbol(allow_circle=True))
            inst = "toeplitz kernel"
        else:
            space = paired_kernel_plus(gen.symbol_pair(1, 6))
            inst = "paired kernel"
        checked = 0
        for e in space.basis():
            if abs(complex(e(0.0))) < 1e-10:
                checked += 1
                if not space.contains(e / z):
                    return False, "f(0)=0 but f/z not in kernel", inst, None
        return True, f"{checked} vanishing elements checked", inst, None

    return _run(report, trial, trials)


def suite_atto_alpha(trials: int, seed: int, order: int = DEFAULT_ORDER,
                     cutoff: float = DEFAULT_CUTOFF) -> VerificationReport:
    """Closed-form ATTO kernels: identical across alpha, equal to the
    E*D2m*D1p * ker T_{conj(theta) z^N} formula, and matching the numeric
    null space."""
    gen = InstanceGenerator(np.random.default_rng(seed))
    report = VerificationReport("atto-alpha", seed, trials)

    def trial(i):
        theta, points, r_plus, r_minus, n1, n2 = gen.finite_rank_data()
        n0 = sum(n for _, n in points)
        bound = n0 + n1 + n2
        kernels = []
        worst = 0.0
        for m in range(bound, bound + 4):
            alpha = gen.blaschke(max(m, 1))
            sym = build_finite_rank_symbol(theta, alpha, r_plus, r_minus, points)
            space = atto_kernel_closed_form(sym)
            kernels.append(space)
            cmp = compare_atto(sym, order, cutoff)
            worst = max(worst, cmp.angle)
            if not cmp.agrees:
                return False, (
                    f"numeric mismatch at deg(alpha)={alpha.degree}: "
                    f"dims ({cmp.exact_dim},{cmp.numeric_dim}) angle {cmp.angle:.2e}"
                ), f"theta={theta!r} points={points!r}", worst
        same = all(k.equals(kernels[0]) for k in kernels[1:])
        formula = toeplitz_kernel(
            theta.conj_reflect() * RationalFunction(Polynomial.monomial(bound))
        ).scaled(
            RationalFunction(sym.e_poly * sym.d2m * sym.d1p)
        )
        ok = same and kernels[0].equals(formula)
        detail = f"dim={kernels[0].dim} alpha-sweep identical={same} " \
                 f"formula match={kernels[0].equals(formula)} worst angle={worst:.2e}"
        return ok, detail, f"theta={theta!r} points={points!r} N=({n0},{n1},{n2})", worst

    return _run(report, trial, trials)


def suite_hankel_corona(trials: int, seed: int, order: int = DEFAULT_ORDER,
                        cutoff: float = DEFAULT_CUTOFF) -> VerificationReport:
    """ker H_{A2p/B2p} = B2p H2+ within the truncation: the Hankel matrix
    annihilates the shifted basis and its null dimension is M+1 minus the
    inner degree of B2p."""
    gen = InstanceGenerator(np.random.default_rng(seed))
    report = VerificationReport("hankel-corona", seed, trials)

    def trial(i):
        a2p, b2p, _ = gen.corona_pair()
        inner_deg = len(classify_zeros(b2p.num)[0])
        f = a2p / b2p
        h = hankel_matrix(f, order)
        smax = np.linalg.norm(h, 2)
        b_coeffs = (b2p.num.coeffs / b2p.num.leading)
        worst = 0.0
        deg_b = b2p.num.degree
        for k in range(order - deg_b + 1):
            v = np.zeros(order + 1, dtype=complex)
            v[k : k + deg_b + 1] = b_coeffs
            worst = max(
                worst,
                float(np.linalg.norm(h @ v) / (np.linalg.norm(v) * max(smax, 1.0))),
            )
        nulls = numeric_kernel(h, cutoff)
        expected = order + 1 - inner_deg
        ok = worst < HANKEL_RESIDUAL_TOL and nulls.dim == expected
        detail = (
            f"residual={worst:.2e} dim={nulls.dim} expected={expected} "
            f"gap={nulls.gap:.2e}"
        )
        return ok, detail, f"A2p={a2p!r} B2p={b2p!r}", worst

    return _run(report, trial, trials)


SUITES = {
    "dims": suite_dims,
    "oracle": suite_oracle,
    "coburn": suite_coburn,
    "inclusions": suite_inclusions,
    "near-invariance": suite_near_invariance,
    "atto-alpha": suite_atto_alpha,
    "hankel-corona": suite_hankel_corona,
}


def run_suite(name: str, trials: int, seed: int, order: int = DEFAULT_ORDER,
              cutoff: float = DEFAULT_CUTOFF) -> VerificationReport:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return SUITES[name](trials, seed, order=order, cutoff=cutoff)
