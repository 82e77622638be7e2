"""The two real branch expansions of w*e^w around the critical point.

``v`` and ``u`` are the two solutions of ``x * e^{1-x} = e^{-z^2/2}``
meeting at 1, with odd-part generator ``K = (v - u)/2``; ``c`` drives the
companion branch pair written in the ``mu = x + ...`` normalization.  Both
coefficient families come with an independent reversion oracle so the
recurrences never certify themselves.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

from .exact import ONE, Rational, bernoulli, double_factorial, factorial, rational
from .report import compare_series, passed, start_clock
from .series import ASCENDING, DESCENDING, GradedSeries, coth

_PAD = 8

_lock = threading.Lock()
_b_table: list = []
_c_table: list = []


@dataclass(frozen=True)
class BranchCoeffs:
    """1-indexed coefficient family ``b`` or ``c``."""

    family: str
    values: tuple

    def __getitem__(self, index: int):
        if index < 1 or index > len(self.values):
            raise IndexError(f"{self.family}-coefficient index {index} out of range")
        return self.values[index - 1]

    def __len__(self):
        return len(self.values)


def _fill_b(order: int) -> None:
    # (n+1) b_n = b_{n-1} - sum_{k=2}^{n-1} k b_k b_{n+1-k},  b_1 = 1, b_2 = 1/3
    t = _b_table
    if not t:
        t.extend([ONE, Rational(1, 3)])
    while len(t) < order:
        n = len(t) + 1
        acc = t[n - 2]
        for k in range(2, n):
            acc -= k * t[k - 1] * t[n - k]
        t.append(acc / (n + 1))


def _fill_c(order: int) -> None:
    # (n+1) c_n = 2 + sum_{j=2}^{n-1} c_j (1 - j c_{n-j+1}),  c_1 = 1, c_2 = 2/3
    t = _c_table
    if not t:
        t.extend([ONE, Rational(2, 3)])
    while len(t) < order:
        n = len(t) + 1
        acc = rational(2)
        for j in range(2, n):
            acc += t[j - 1] * (1 - j * t[n - j])
        t.append(acc / (n + 1))


def coeffs_b(order: int) -> BranchCoeffs:
    with _lock:
        _fill_b(order)
        vals = tuple(_b_table[:order])
    return BranchCoeffs("b", vals)


def coeffs_c(order: int) -> BranchCoeffs:
    with _lock:
        _fill_c(order)
        vals = tuple(_c_table[:order])
    return BranchCoeffs("c", vals)


def oracle_b(order: int) -> BranchCoeffs:
    """b by reversion of z = sqrt(2s - 2 log(1+s)), independent of the recurrence."""
    s = GradedSeries.identity(ASCENDING, prec=order + 2)
    chi = (2 * s - 2 * (s + 1).log()).sqrt()
    v_minus_1 = chi.revert()
    return BranchCoeffs("b", tuple(v_minus_1.coefficient(i) for i in range(1, order + 1)))


def oracle_c(order: int) -> BranchCoeffs:
    """c by matching sqrt(2 - 2(1+mu)e^-mu) against sqrt(2 - 2(1-x)e^x)."""
    x = GradedSeries.identity(ASCENDING, prec=order + 2)
    psi = (1 + x) * (-x).exp()  # (1+mu) e^-mu in the mu variable
    a = (2 * (1 - psi)).sqrt()
    r = (1 - x) * x.exp()
    b = (2 * (1 - r)).sqrt()
    mu = a.revert().compose(b)
    return BranchCoeffs("c", tuple(mu.coefficient(i) for i in range(1, order + 1)))


def series_v(order: int) -> GradedSeries:
    bs = coeffs_b(order)
    return GradedSeries(
        ASCENDING, {0: ONE, **{i: bs[i] for i in range(1, order + 1)}}, prec=order + 1
    )


def series_u(order: int) -> GradedSeries:
    bs = coeffs_b(order)
    return GradedSeries(
        ASCENDING,
        {0: ONE, **{i: (-1) ** i * bs[i] for i in range(1, order + 1)}},
        prec=order + 1,
    )


def series_K(order: int) -> GradedSeries:
    """K = (v - u)/2 = sum b_{2i+1} z^{2i+1}; the odd part of the branch pair."""
    bs = coeffs_b(order)
    return GradedSeries(
        ASCENDING,
        {i: bs[i] for i in range(1, order + 1, 2)},
        prec=order + 1,
    )


def series_w0(order: int) -> GradedSeries:
    """Principal-branch Taylor series: coefficient of z^n is (-n)^(n-1)/n!."""
    return GradedSeries(
        ASCENDING,
        {n: Rational((-n) ** (n - 1), factorial(n)) for n in range(1, order + 1)},
        prec=order + 1,
    )


def w0_by_reversion(order: int) -> GradedSeries:
    t = GradedSeries.identity(ASCENDING, prec=order + 1)
    return (t * t.exp()).revert()


def stirling_coeffs(count: int) -> list:
    """Asymptotic-expansion coefficients (2i+1)!! * b_{2i+1}, i = 0..count-1."""
    bs = coeffs_b(2 * count + 1)
    return [double_factorial(2 * i + 1) * bs[2 * i + 1] for i in range(count)]


# --- verifiers ---------------------------------------------------------------


def verify_b_family(order: int = 40, values=None) -> "VerificationReport":
    """Recurrence vs reversion oracle, the defining ODE, and the closed form."""
    t0 = start_clock()
    bs = values if values is not None else coeffs_b(order).values
    rec = GradedSeries(ASCENDING, {i + 1: c for i, c in enumerate(bs)}, prec=order + 1)
    orc = GradedSeries(
        ASCENDING, {i: c for i, c in enumerate(oracle_b(order).values, start=1)}, prec=order + 1
    )
    rep = compare_series("v-ode", order, rec, orc, range(1, order + 1), t0)
    if rep.status != "PASS":
        return rep

    v = GradedSeries(ASCENDING, {0: ONE, **{i + 1: c for i, c in enumerate(bs)}}, prec=order + 1)
    z = GradedSeries.identity(ASCENDING)
    lhs = v.derivative() * (v - 1)
    rhs = z * v
    rep = compare_series("v-ode", order, lhs, rhs, range(0, order), t0)
    if rep.status != "PASS":
        return rep

    # v e^{1-v} = e^{-z^2/2}, both sides divided by e
    lhs = v * (-(v - 1)).exp()
    rhs = GradedSeries.monomial(2, Rational(-1, 2), ASCENDING, prec=order + 1).exp()
    return compare_series("v-ode", order, lhs, rhs, range(0, order + 1), t0)


def verify_c_family(order: int = 40, values=None) -> "VerificationReport":
    """Recurrence vs reversion oracle plus (1+mu)e^-mu = (1-x)e^x."""
    t0 = start_clock()
    cs = values if values is not None else coeffs_c(order).values
    rec = GradedSeries(ASCENDING, {i + 1: c for i, c in enumerate(cs)}, prec=order + 1)
    orc = GradedSeries(
        ASCENDING, {i: c for i, c in enumerate(oracle_c(order).values, start=1)}, prec=order + 1
    )
    rep = compare_series("karamata", order, rec, orc, range(1, order + 1), t0)
    if rep.status != "PASS":
        return rep

    x = GradedSeries.identity(ASCENDING, prec=order + 1)
    mu = GradedSeries(ASCENDING, {i + 1: c for i, c in enumerate(cs)}, prec=order + 1)
    lhs = (1 + mu) * (-mu).exp()
    rhs = (1 - x) * x.exp()
    return compare_series("karamata", order, lhs, rhs, range(0, order + 1), t0)


def verify_K_functional(order: int = 40, K=None) -> "VerificationReport":
    """e^{-z^2/2} = K e^{1 - K coth K} csch K, both sides divided by e."""
    t0 = start_clock()
    work = order + _PAD
    KK = K if K is not None else series_K(work)
    sinh_K = (KK.exp() - (-KK).exp()) / 2
    cosh_K = (KK.exp() + (-KK).exp()) / 2
    csch_K = sinh_K.reciprocal()
    k_coth_k = KK * cosh_K * csch_K
    rhs = KK * (1 - k_coth_k).exp() * csch_K
    lhs = GradedSeries.monomial(2, Rational(-1, 2), ASCENDING, prec=work + 1).exp()
    return compare_series("k-functional", order, lhs, rhs, range(0, order + 1), t0)


def verify_K_integral(order: int = 40, K=None) -> "VerificationReport":
    """K^2 coth K - K = sum b_{2i+1}/(2i+3) z^{2i+3}."""
    t0 = start_clock()
    work = order + _PAD
    KK = K if K is not None else series_K(work)
    lhs = KK * KK * coth(KK) - KK
    bs = coeffs_b(work)
    rhs = GradedSeries(
        ASCENDING,
        {2 * i + 3: bs[2 * i + 1] / (2 * i + 3) for i in range(0, (work - 3) // 2 + 1)},
        prec=work + 1,
    )
    return compare_series("k-integral", order, lhs, rhs, range(0, order + 1), t0)


def verify_w0(order: int = 40, w0=None) -> "VerificationReport":
    """Taylor coefficients vs reversion of t e^t, and W0 e^{W0} = z."""
    t0 = start_clock()
    taylor = w0 if w0 is not None else series_w0(order)
    rep = compare_series(
        "w0-reversion", order, taylor, w0_by_reversion(order), range(1, order + 1), t0
    )
    if rep.status != "PASS":
        return rep
    lhs = taylor * taylor.exp()
    rhs = GradedSeries.identity(ASCENDING, prec=order + 1)
    return compare_series("w0-reversion", order, lhs, rhs, range(1, order + 1), t0)
