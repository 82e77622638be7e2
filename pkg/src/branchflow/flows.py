"""Derivation flows exp(sign * sum g_k z^{p(k)} d/dz) and the named series they move.

A coefficient list with an exponent law p (p(k) <= 0, strictly decreasing)
defines a derivation D whose exponential acts on descending Laurent series.
Applying exp(D) to z gives the flow image of the identity; because each
application of D strictly lowers the leading exponent, every coefficient of
the image is a finite sum and the triangular structure lets the generator be
solved back from any target of the form z + lower order.
"""

from __future__ import annotations

import random
import threading
from dataclasses import dataclass, replace

from .branches import coeffs_b, coeffs_c, series_K
from .exact import ONE, Rational, ZERO, bernoulli, factorial, rational
from .report import compare_series, passed, start_clock
from .series import (
    ASCENDING,
    DESCENDING,
    GradedSeries,
    LeadingTermError,
    SeriesError,
    TruncationError,
    coth,
)

LAW_STANDARD = "standard"  # p(k) = 1 - k
LAW_EVEN = "even"  # p(m) = 1 - 2m

_MARGIN = 10

# RLock: builders are allowed to call other cached constructors
_cache_lock = threading.RLock()
_series_cache: dict = {}


def _law_fn(law):
    if law == LAW_STANDARD:
        return lambda k: 1 - k
    if law == LAW_EVEN:
        return lambda m: 1 - 2 * m
    if callable(law):
        return law
    raise SeriesError(f"unknown exponent law {law!r}")


@dataclass(frozen=True)
class FlowCoeffs:
    """Generator coefficients g_1, g_2, ... for D = sign * sum g_k z^{p(k)} d/dz."""

    values: tuple
    law: object = LAW_STANDARD
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise SeriesError("flow sign must be +1 or -1")

    def __getitem__(self, index: int):
        if index < 1 or index > len(self.values):
            raise IndexError(f"flow coefficient index {index} out of range")
        return self.values[index - 1]

    def __len__(self):
        return len(self.values)

    def exponent(self, k: int) -> int:
        return _law_fn(self.law)(k)

    def with_sign(self, sign: int) -> "FlowCoeffs":
        return replace(self, sign=sign)

    def generator(self) -> GradedSeries:
        """sign * sum g_k z^{p(k)} as a series whose prec marks the untracked tail."""
        p = _law_fn(self.law)
        exps = [p(k) for k in range(1, len(self.values) + 2)]
        for here, nxt in zip(exps, exps[1:]):
            if here > 0:
                raise SeriesError("exponent law must not raise the order")
            if nxt >= here:
                raise SeriesError("exponent law must be strictly decreasing")
        coeffs = {p(k): self.sign * rational(g) for k, g in enumerate(self.values, start=1)}
        return GradedSeries(DESCENDING, coeffs, prec=exps[-1])


def _exp_flow(generator: GradedSeries, target: GradedSeries) -> GradedSeries:
    if generator.prec is None and target.prec is None:
        raise TruncationError("flow of an exact target needs a truncated generator")
    acc = target
    term = target
    n = 1
    while not term.is_zero():
        term = (generator * term.derivative()) / n
        acc = acc + term
        # clamp to the reachable window; the leading exponent of the terms
        # strictly decreases, so this is what makes the loop finite
        if term.wprec is None or term.wprec > acc.wprec:
            term = term.truncate(acc.prec)
        n += 1
    return acc


def flow_apply(coeffs: FlowCoeffs, target: GradedSeries) -> GradedSeries:
    """exp(D) target, exact to the depth the generator and target windows support."""
    if target.direction != DESCENDING:
        raise SeriesError("flows act on descending series")
    return _exp_flow(coeffs.generator(), target)


def flow_solve(target: GradedSeries, count=None, law=LAW_STANDARD, sign=1) -> FlowCoeffs:
    """Solve exp(sign * sum g_k z^{p(k)} d/dz) z = target for the g_k.

    Coefficient k is read off at exponent p(k): everything else contributing
    there involves only g_1 .. g_{k-1}, so the system is triangular.
    """
    if target.direction != DESCENDING:
        raise SeriesError("flows act on descending series")
    if target.lead != 1 or target.lead_coeff != ONE:
        raise LeadingTermError("flow target must start with z itself")
    p = _law_fn(law)
    if count is None:
        if target.prec is None:
            raise TruncationError("coefficient count must be given for an exact target")
        count = 0
        while p(count + 1) > target.prec:
            count += 1
    vals: list = []
    prev = 1
    for k in range(1, count + 1):
        pk = p(k)
        if pk > 0 or pk >= prev:
            raise SeriesError("exponent law must lower the order strictly")
        prev = pk
        tk = target.coefficient(pk)
        if vals:
            gen = GradedSeries(
                DESCENDING, {p(j): sign * g for j, g in enumerate(vals, start=1)}
            )
            known = _exp_flow(gen, GradedSeries.identity(DESCENDING, prec=pk - 1))
            ak = known.coefficient(pk)
        else:
            ak = ZERO
        vals.append(sign * (tk - ak))
    return FlowCoeffs(tuple(vals), law, sign)


# --- named series -------------------------------------------------------------


def _windowed(series: GradedSeries, order: int) -> GradedSeries:
    step = 1 if series.direction == ASCENDING else -1
    prec = series.lead + step * (order + 1)
    if series.prec is not None and series.prec == prec:
        return series
    # truncate raises if the series is shallower than the requested window
    return series.truncate(prec)


def _cached_series(name: str, order: int, build) -> GradedSeries:
    with _cache_lock:
        have = _series_cache.get(name)
        if have is None or have[0] < order:
            have = (order, build(order))
            _series_cache[name] = have
    return _windowed(have[1], order)


def series_f(order: int) -> GradedSeries:
    """f = (-2 log(1-w) - 2w)^(-1/2) with w = 1/(1+z); starts z + 2/3 - z^{-1}/12."""

    def build(n):
        m = n + _MARGIN
        one_plus_z = GradedSeries(DESCENDING, {1: ONE, 0: ONE}, prec=-m - 4)
        w = one_plus_z.reciprocal()
        g = -2 * (1 - w).log() - 2 * w
        return g.pow(Rational(-1, 2))

    return _cached_series("f", order, build)


def series_theta(order: int) -> GradedSeries:
    """theta = (3 sum b_{2k+1}/(2k+3) z^{-2k-3})^(-1/3); starts z - z^{-1}/180."""

    def build(n):
        m = n + _MARGIN
        bs = coeffs_b(m + 3)
        inner = GradedSeries(
            DESCENDING,
            {-(2 * k + 3): 3 * bs[2 * k + 1] / (2 * k + 3) for k in range(0, (m + 1) // 2)},
            prec=-m - 4,
        )
        return inner.pow(Rational(-1, 3))

    return _cached_series("theta", order, build)


def _phi(prec: int) -> GradedSeries:
    # e^t sinh(t)/t - 1 = (e^{2t} - 1)/(2t) - 1 = t + (2/3)t^2 + (1/3)t^3 + ...
    t = GradedSeries.identity(ASCENDING, prec=prec)
    return ((2 * t).exp() - 1).shift(-1) / 2 - 1


def series_h(order: int) -> GradedSeries:
    """h = (3z^{-2} coth(z^{-1}) - 3z^{-1})^(-1/3); starts z + z^{-1}/45."""

    def build(n):
        m = n + _MARGIN
        t = GradedSeries.identity(ASCENDING, prec=m + 4)
        u = 3 * t * t * coth(t) - 3 * t
        return u.pow(Rational(-1, 3)).invert_variable()

    return _cached_series("h", order, build)


def series_y(order: int) -> GradedSeries:
    """y with 1/y = psi(1/z), psi the inverse of e^t sinh(t)/t - 1."""
    return _y_inverse(order + 1).reciprocal()


def _y_inverse(order: int) -> GradedSeries:
    def build(n):
        m = n + _MARGIN
        psi = _phi(m + 4).revert()
        z_inv = GradedSeries.monomial(-1, ONE, DESCENDING, prec=-m - 4)
        return psi.compose(z_inv)

    return _cached_series("y-inverse", order, build)


def series_f_plus_1(order: int) -> GradedSeries:
    """1/(z e^{1/z} sinh(1/z) - 1); starts z - 2/3 + z^{-1}/9."""

    def build(n):
        m = n + _MARGIN
        z_inv = GradedSeries.monomial(-1, ONE, DESCENDING, prec=-m - 4)
        return _phi(m + 4).compose(z_inv).reciprocal()

    return _cached_series("f-plus-1", order, build)


def series_f_plus_2(order: int) -> GradedSeries:
    def build(n):
        return series_h(n + 2).revert()

    return _cached_series("f-plus-2", order, build)


def series_f_plus(order: int) -> GradedSeries:
    """f_+ = f_+1 composed with f_+2; starts z - 2/3 + (4/45)z^{-1}."""

    def build(n):
        return series_f_plus_1(n + 2).compose(series_f_plus_2(n + 2))

    return _cached_series("f-plus", order, build)


def series_h_y_fplus(order: int):
    return (
        series_h(order),
        series_y(order),
        series_f_plus_1(order),
        series_f_plus_2(order),
        series_f_plus(order),
    )


def series_F(order: int) -> GradedSeries:
    """F = x + (1/2) sum_{n>=2} c_n x^n, ascending."""
    cs = coeffs_c(order)
    coeffs = {1: ONE}
    coeffs.update({n: cs[n] / 2 for n in range(2, order + 1)})
    return GradedSeries(ASCENDING, coeffs, prec=order + 1)


def series_H(order: int) -> GradedSeries:
    """H = (3F^2 coth F - 3F)^(-1/3), ascending Laurent with lead x^{-1}."""

    def build(n):
        m = n + _MARGIN
        F = series_F(m + 4)
        u = 3 * F * F * coth(F) - 3 * F
        return u.pow(Rational(-1, 3))

    return _cached_series("H", order, build)


def series_E(order: int, H=None) -> GradedSeries:
    """E = 1 + sqrt(x^2 + 4/(3H^3)), ascending from 1; equals 1 + mu."""
    m = order + _MARGIN
    HH = H if H is not None else series_H(m)
    x_sq = GradedSeries.monomial(2, ONE, ASCENDING, prec=m)
    mu = (x_sq + Rational(4, 3) * HH ** -3).pow(Rational(1, 2))
    return 1 + mu


def series_F_H_E(order: int):
    return series_F(order), series_H(order), _windowed(series_E(order), order)


def series_mu(order: int) -> GradedSeries:
    """mu = x + sum_{n>=2} c_n x^n from the coefficient recurrence."""
    cs = coeffs_c(order)
    return GradedSeries(
        ASCENDING, {n: cs[n] for n in range(1, order + 1)}, prec=order + 1
    )


# --- verifiers ----------------------------------------------------------------


def verify_prop_hy(order: int = 40, h=None) -> "VerificationReport":
    """h(y(z)) = theta(f(z))."""
    t0 = start_clock()
    m = order + 4
    hh = h if h is not None else series_h(m)
    lhs = hh.compose(series_y(m))
    rhs = series_theta(m).compose(series_f(m))
    return compare_series("prop-hy", order, lhs, rhs, range(1, -order, -1), t0)


def verify_lemma_yk(order: int = 40, K=None) -> "VerificationReport":
    """1/y = K(1/f), with 1/f the multiplicative reciprocal."""
    t0 = start_clock()
    m = order + 4
    KK = K if K is not None else series_K(m + 2)
    lhs = _y_inverse(m)
    rhs = KK.compose(series_f(m).reciprocal())
    return compare_series("lemma-yk", order, lhs, rhs, range(-1, -order - 1, -1), t0)


def verify_iden(order: int = 40, e=None, ahat=None) -> "VerificationReport":
    """The headline identity: the backward flow of f_+ and the forward flow of
    theta(f) both reproduce the compositional inverse of f_+."""
    t0 = start_clock()
    fplus = series_f_plus(order)
    a_hat = ahat if ahat is not None else flow_solve(fplus, count=order)
    theta_f = series_theta(order).compose(series_f(order))
    e_fam = e if e is not None else flow_solve(theta_f, count=order)
    z = GradedSeries.identity(DESCENDING)
    lhs = flow_apply(a_hat.with_sign(-1), z)
    rhs = flow_apply(e_fam.with_sign(1), z)
    window = range(1, -order, -1)
    rep = compare_series("iden", order, lhs, rhs, window, t0)
    if rep.status != "PASS":
        return rep
    return compare_series("iden", order, lhs, fplus.revert(), window, t0)


def verify_fplus_functional(order: int = 40, H=None) -> "VerificationReport":
    """f_+ and E satisfy the branch-pair equation (1-x)e^x = (1+mu)e^{-mu}.

    Checked in the z variable with x~ = 1/(1+f_+), mu~ = sqrt(x~^2 + (4/3)z^{-3}),
    then in the x variable with E = 1 + sqrt(x^2 + 4/(3H^3)), and finally E - 1
    is matched against the mu coefficient family itself.
    """
    t0 = start_clock()
    m = order + 6
    fplus = series_f_plus(m)
    x_t = (1 + fplus).reciprocal()
    z_cubed = GradedSeries.monomial(-3, Rational(4, 3), DESCENDING, prec=fplus.prec)
    mu_t = (x_t * x_t + z_cubed).pow(Rational(1, 2))
    lhs = (1 - x_t) * x_t.exp()
    rhs = (1 + mu_t) * (-mu_t).exp()
    rep = compare_series(
        "fplus-functional", order, lhs, rhs, range(0, -order - 1, -1), t0
    )
    if rep.status != "PASS":
        return rep

    E = series_E(order, H=H)
    x = GradedSeries.identity(ASCENDING, prec=order + 1)
    lhs = (1 - x) * x.exp()
    rhs = E * (1 - E).exp()
    rep = compare_series("fplus-functional", order, lhs, rhs, range(0, order + 1), t0)
    if rep.status != "PASS":
        return rep
    return compare_series(
        "fplus-functional", order, E - 1, series_mu(order), range(1, order + 1), t0
    )


def verify_flow_laws(order: int = 40, seed: int = 0, a=None) -> "VerificationReport":
    """Round trip, automorphism law, composition law, inverse law, closed form."""
    t0 = start_clock()
    name = "flow-laws"
    f = series_f(order)
    a_fam = a if a is not None else flow_solve(f, count=order)
    z = GradedSeries.identity(DESCENDING)

    # round trip: applying the solved generator reproduces the target
    rep = compare_series(name, order, flow_apply(a_fam, z), f, range(1, -order, -1), t0)
    if rep.status != "PASS":
        return rep

    # automorphism law: exp(D) g = g(exp(D) z) for any series g
    depth = order - 2
    flowed_z = flow_apply(a_fam, z)
    samples = [
        series_theta(order),
        f,
        series_K(order + 2).compose(
            GradedSeries.monomial(-1, ONE, DESCENDING, prec=-order - 2)
        ),
    ]
    for g in samples:
        lhs = flow_apply(a_fam, g)
        rhs = g.compose(flowed_z)
        window = range(g.lead, g.lead - depth - 1, -1)
        rep = compare_series(name, order, lhs, rhs, window, t0)
        if rep.status != "PASS":
            return rep

    # composition law: exp(A) exp(-L) z = theta(f) with A from f, L from theta
    l_fam = flow_solve(series_theta(order), count=order // 2, law=LAW_EVEN, sign=-1)
    inner = flow_apply(l_fam, z)
    lhs = flow_apply(a_fam, inner)
    rhs = series_theta(order).compose(f)
    rep = compare_series(name, order, lhs, rhs, range(1, -depth, -1), t0)
    if rep.status != "PASS":
        return rep

    # inverse law: the sign-flipped flow is the compositional inverse
    rng = random.Random(seed)
    c = FlowCoeffs(
        tuple(Rational(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(6))
    )
    plus = flow_apply(c, z)
    minus = flow_apply(c.with_sign(-1), z)
    rep = compare_series(name, order, minus, plus.revert(), range(1, -4, -1), t0)
    if rep.status != "PASS":
        return rep

    # closed form: {a_2 = a} integrates to sqrt(z^2 + 2a); the explicit zero
    # tail widens the generator window so the flow is exact to depth
    for a_val in (rational(1), rational(-2), Rational(3, 5)):
        fc = FlowCoeffs((ZERO, a_val) + (ZERO,) * order)
        flowed = flow_apply(fc, GradedSeries.identity(DESCENDING, prec=-order))
        closed = GradedSeries(DESCENDING, {2: ONE, 0: 2 * a_val}, prec=-order).pow(
            Rational(1, 2)
        )
        rep = compare_series(name, order, flowed, closed, range(1, -order + 2, -1), t0)
        if rep.status != "PASS":
            return rep
        back = flow_apply(fc.with_sign(-1), GradedSeries.identity(DESCENDING, prec=-order))
        closed_inv = GradedSeries(DESCENDING, {2: ONE, 0: -2 * a_val}, prec=-order).pow(
            Rational(1, 2)
        )
        rep = compare_series(name, order, back, closed_inv, range(1, -order + 2, -1), t0)
        if rep.status != "PASS":
            return rep
    return passed(name, order, t0)


def verify_nz_identity(order: int = 41, bernoulli_fn=None) -> "VerificationReport":
    """sum_{k>=2} 2^{2k} B_{2k}/(2k)! z^{-2k-1} = z^{-2} coth(1/z) - 1/z - z^{-3}/3."""
    t0 = start_clock()
    bfn = bernoulli_fn if bernoulli_fn is not None else bernoulli
    lhs = GradedSeries(
        DESCENDING,
        {
            -(2 * k + 1): (2 ** (2 * k)) * bfn(2 * k) / factorial(2 * k)
            for k in range(2, (order - 1) // 2 + 1)
        },
        prec=-order - 1,
    )
    t = GradedSeries.identity(ASCENDING, prec=order + 2)
    rhs = (t * t * coth(t) - t - t ** 3 / 3).invert_variable()
    return compare_series(
        "nz-bernoulli", order, lhs, rhs, range(-1, -order - 1, -1), t0
    )
