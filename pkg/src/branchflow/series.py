"""Truncated formal Laurent series over exact rationals.

A :class:`GradedSeries` carries a truncation *direction*: ascending series
are expansions toward ``z -> 0`` (every exponent below ``prec`` is exact),
descending series are expansions toward ``z -> infinity`` (every exponent
above ``prec`` is exact).  ``prec`` is the first unknown exponent in the
truncation direction; ``prec=None`` means the series is exact to all orders
(a Laurent polynomial).

Every operation computes the depth that is actually provable for its result
from the depths of its inputs, so a coefficient read through
:meth:`GradedSeries.coefficient` is either exact or an error -- never a
silently wrong tail value.

Internally order bookkeeping uses ``w = exponent`` for ascending and
``w = -exponent`` for descending series, which makes the two directions
share one code path: terms get *smaller* as ``w`` grows, and the unknown
region is always ``w >= wprec``.
"""

from __future__ import annotations

from .exact import ONE, ZERO, Rational, rational, rational_str

ASCENDING = "ascending"
DESCENDING = "descending"


class SeriesError(ValueError):
    """Base class for series precondition violations."""


class DirectionMismatchError(SeriesError):
    """Arithmetic between series of different truncation directions."""


class LeadingTermError(SeriesError):
    """Operation requires a leading-term shape the argument does not have."""


class SubstitutionError(SeriesError):
    """Composition would not converge order by order."""


class TruncationError(SeriesError):
    """Operation needs a finite truncation window it was not given."""


class PoleError(SeriesError):
    """Antiderivative of a series with a z^-1 term."""


def _coerce(value):
    if isinstance(value, float):
        raise TypeError("float coefficients are not exact; pass int, str, or Rational")
    return rational(value)


class GradedSeries:
    __slots__ = ("direction", "coeffs", "prec")

    def __init__(self, direction, coeffs=None, prec=None):
        if direction not in (ASCENDING, DESCENDING):
            raise SeriesError(f"unknown direction {direction!r}")
        if prec is not None:
            prec = int(prec)
        clean = {}
        if coeffs:
            for e, c in coeffs.items():
                c = _coerce(c)
                if c == 0:
                    continue
                e = int(e)
                if prec is not None:
                    inside = e < prec if direction == ASCENDING else e > prec
                    if not inside:
                        raise SeriesError(
                            f"coefficient at z^{e} lies outside the known window (prec={prec})"
                        )
                clean[e] = c
        self.direction = direction
        self.coeffs = clean
        self.prec = prec

    # --- constructors -------------------------------------------------

    @classmethod
    def zero(cls, direction, prec=None):
        return cls(direction, {}, prec)

    @classmethod
    def constant(cls, value, direction, prec=None):
        return cls(direction, {0: value}, prec)

    @classmethod
    def monomial(cls, exponent, coeff=1, direction=ASCENDING, prec=None):
        return cls(direction, {exponent: coeff}, prec)

    @classmethod
    def identity(cls, direction, prec=None):
        return cls(direction, {1: 1}, prec)

    @classmethod
    def _from_w(cls, direction, wcoeffs, wprec):
        sign = 1 if direction == ASCENDING else -1
        prec = None if wprec is None else sign * wprec
        return cls(direction, {sign * w: c for w, c in wcoeffs.items()}, prec)

    # --- window bookkeeping (w-space) ---------------------------------

    def _w(self, e):
        return e if self.direction == ASCENDING else -e

    @property
    def wprec(self):
        if self.prec is None:
            return None
        return self.prec if self.direction == ASCENDING else -self.prec

    @property
    def wlead(self):
        if not self.coeffs:
            return None
        return min(map(self._w, self.coeffs))

    @property
    def lead(self):
        w = self.wlead
        if w is None:
            return None
        return w if self.direction == ASCENDING else -w

    @property
    def lead_coeff(self):
        e = self.lead
        return None if e is None else self.coeffs[e]

    @property
    def depth(self):
        """Tracked orders beyond the leading term (None if exact)."""
        if self.prec is None:
            return None
        base = self.wlead if self.coeffs else 0
        return self.wprec - base - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def known(self, exponent) -> bool:
        wp = self.wprec
        return wp is None or self._w(exponent) < wp

    def coefficient(self, exponent):
        if not self.known(exponent):
            raise TruncationError(
                f"coefficient at z^{exponent} is beyond the known window (prec={self.prec})"
            )
        return self.coeffs.get(exponent, ZERO)

    def support(self):
        return sorted(self.coeffs, key=self._w)

    def truncate(self, prec):
        wp = prec if self.direction == ASCENDING else -prec
        return self._truncate_w(wp)

    def _truncate_w(self, wp):
        if wp is None:
            return self
        cur = self.wprec
        if cur is not None and wp > cur:
            raise TruncationError(
                f"cannot widen window: requested w<{wp} but only w<{cur} is known"
            )
        if cur is not None and wp == cur:
            return self
        kept = {e: c for e, c in self.coeffs.items() if self._w(e) < wp}
        return GradedSeries._from_w(self.direction, {self._w(e): c for e, c in kept.items()}, wp)

    # --- comparison / display -----------------------------------------

    def __eq__(self, other):
        if not isinstance(other, GradedSeries):
            return NotImplemented
        return (
            self.direction == other.direction
            and self.prec == other.prec
            and self.coeffs == other.coeffs
        )

    __hash__ = None

    def __repr__(self):
        terms = []
        for e in self.support()[:10]:
            c = self.coeffs[e]
            if e == 0:
                terms.append(rational_str(c))
            else:
                terms.append(f"{rational_str(c)}*z^{e}")
        if len(self.coeffs) > 10:
            terms.append("...")
        body = " + ".join(terms) if terms else "0"
        tail = "" if self.prec is None else f" + O(z^{self.prec})"
        return f"<{self.direction} {body}{tail}>"

    # --- ring operations ------------------------------------------------

    def _check_direction(self, other):
        if self.direction != other.direction:
            raise DirectionMismatchError(
                f"cannot combine {self.direction} and {other.direction} series"
            )

    def _add_scalar(self, value):
        value = _coerce(value)
        if value == 0:
            return self
        wp = self.wprec
        if wp is not None and wp <= 0:
            raise TruncationError("constant term lies beyond the known window")
        out = dict(self.coeffs)
        s = out.get(0, ZERO) + value
        if s == 0:
            out.pop(0, None)
        else:
            out[0] = s
        return GradedSeries(self.direction, out, self.prec)

    def __add__(self, other):
        if not isinstance(other, GradedSeries):
            return self._add_scalar(other)
        self._check_direction(other)
        wa, wb = self.wprec, other.wprec
        if wa is None:
            wp = wb
        elif wb is None:
            wp = wa
        else:
            wp = min(wa, wb)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            s = out.get(e, ZERO) + c
            if s == 0:
                out.pop(e, None)
            else:
                out[e] = s
        if wp is not None:
            out = {e: c for e, c in out.items() if self._w(e) < wp}
        return GradedSeries._from_w(self.direction, {self._w(e): c for e, c in out.items()}, wp)

    __radd__ = __add__

    def __neg__(self):
        return GradedSeries(self.direction, {e: -c for e, c in self.coeffs.items()}, self.prec)

    def __sub__(self, other):
        return self + (-other if isinstance(other, GradedSeries) else -_coerce(other))

    def __rsub__(self, other):
        return (-self)._add_scalar(other)

    def _scale(self, value):
        value = _coerce(value)
        if value == 0:
            # an exact zero factor annihilates the unknown tail as well
            return GradedSeries.zero(self.direction)
        return GradedSeries(
            self.direction, {e: c * value for e, c in self.coeffs.items()}, self.prec
        )

    def __mul__(self, other):
        if not isinstance(other, GradedSeries):
            return self._scale(other)
        self._check_direction(other)
        if (self.prec is None and not self.coeffs) or (other.prec is None and not other.coeffs):
            return GradedSeries.zero(self.direction)
        wpa, wpb = self.wprec, other.wprec
        # a lead stand-in of wprec for a window of zeros keeps the rule sound
        wla = self.wlead if self.coeffs else wpa
        wlb = other.wlead if other.coeffs else wpb
        cands = []
        if wpa is not None:
            cands.append(wpa + wlb)
        if wpb is not None:
            cands.append(wpb + wla)
        wp = min(cands) if cands else None
        out = {}
        for ea, ca in self.coeffs.items():
            wea = self._w(ea)
            for eb, cb in other.coeffs.items():
                w = wea + other._w(eb)
                if wp is not None and w >= wp:
                    continue
                v = ca * cb
                if w in out:
                    out[w] += v
                else:
                    out[w] = v
        out = {w: c for w, c in out.items() if c != 0}
        return GradedSeries._from_w(self.direction, out, wp)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, GradedSeries):
            return self * other.reciprocal()
        other = _coerce(other)
        if other == 0:
            raise ZeroDivisionError("series divided by zero scalar")
        return self._scale(ONE / other)

    def shift(self, delta):
        """Multiply by z**delta (exact)."""
        delta = int(delta)
        if delta == 0:
            return self
        prec = None if self.prec is None else self.prec + delta
        return GradedSeries(
            self.direction, {e + delta: c for e, c in self.coeffs.items()}, prec
        )

    def invert_variable(self):
        """Substitute z -> 1/z, flipping the truncation direction."""
        direction = DESCENDING if self.direction == ASCENDING else ASCENDING
        prec = None if self.prec is None else -self.prec
        return GradedSeries(direction, {-e: c for e, c in self.coeffs.items()}, prec)

    # --- multiplicative structure ---------------------------------------

    def reciprocal(self):
        if not self.coeffs:
            raise LeadingTermError("reciprocal of a series with no known leading term")
        wp = self.wprec
        if wp is None:
            raise TruncationError("reciprocal does not terminate on exact input; truncate() first")
        L = self.wlead
        cl = self.coeffs[self.lead]
        # relative form 1 + s with s supported on w >= 1
        rel = {self._w(e) - L: c for e, c in self.coeffs.items()}
        depth = wp - L
        inv = {0: ONE / cl}
        for s in range(1, depth):
            acc = ZERO
            for u, cu in rel.items():
                if 0 < u <= s:
                    rv = inv.get(s - u)
                    if rv is not None:
                        acc += cu * rv
            if acc != 0:
                inv[s] = -acc / cl
        return GradedSeries._from_w(
            self.direction, {s - L: c for s, c in inv.items()}, wp - 2 * L
        )

    def __pow__(self, n):
        if not isinstance(n, int):
            return self.pow(n)
        if n == 0:
            return GradedSeries.constant(1, self.direction)
        if n < 0:
            return self.reciprocal() ** (-n)
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def pow(self, exponent):
        """Raise to a rational power; needs unit leading coefficient."""
        r = rational(exponent)
        if r.denominator == 1:
            return self ** int(r)
        if not self.coeffs:
            raise LeadingTermError("rational power of a series with no known leading term")
        wp = self.wprec
        if wp is None:
            raise TruncationError("rational power needs a finite window; truncate() first")
        e0 = self.lead
        if self.coeffs[e0] != 1:
            raise LeadingTermError(
                f"rational power requires unit leading coefficient, got {rational_str(self.coeffs[e0])}"
            )
        shift_exp = r * e0
        if shift_exp.denominator != 1:
            raise LeadingTermError(
                f"exponent {r} * leading exponent {e0} is not an integer"
            )
        s = self.shift(-e0) - 1
        out = GradedSeries.constant(1, self.direction)
        if not s.is_zero():
            rel_wp = wp - self.wlead
            term = GradedSeries.constant(1, self.direction)
            k = 0
            wls = s.wlead
            while (k + 1) * wls < rel_wp:
                term = term * s * ((r - k) / (k + 1))
                out = out + term
                k += 1
        out = out._truncate_w(wp - self.wlead)
        return out.shift(int(shift_exp))

    def sqrt(self):
        return self.pow(Rational(1, 2))

    # --- transcendental maps ---------------------------------------------

    def exp(self):
        if not self.coeffs:
            if self.prec is None:
                return GradedSeries.constant(1, self.direction)
            return GradedSeries.constant(1, self.direction)._truncate_w(self.wprec)
        wl = self.wlead
        if wl < 1:
            raise LeadingTermError(
                "exp requires every term to lower the order strictly (no constant term)"
            )
        wp = self.wprec
        if wp is None:
            raise TruncationError("exp does not terminate on exact input; truncate() first")
        total = self._add_scalar(1)
        term = self
        n = 1
        while (n + 1) * wl < wp:
            n += 1
            term = term * self * Rational(1, n)
            total = total + term
        return total

    def log(self):
        if self.coeffs.get(0) != 1 or (self.coeffs and self.wlead != 0):
            raise LeadingTermError("log requires leading term exactly 1")
        wp = self.wprec
        s = self._add_scalar(-1)
        if s.is_zero():
            return GradedSeries.zero(self.direction, self.prec)
        if wp is None:
            raise TruncationError("log does not terminate on exact input; truncate() first")
        wl = s.wlead
        total = s
        power = s
        k = 1
        while (k + 1) * wl < wp:
            k += 1
            power = power * s
            total = total + power * Rational((-1) ** (k + 1), k)
        return total

    # --- calculus ---------------------------------------------------------

    def derivative(self):
        out = {}
        for e, c in self.coeffs.items():
            if e != 0:
                out[e - 1] = c * e
        prec = None if self.prec is None else self.prec - 1
        return GradedSeries(self.direction, out, prec)

    def antiderivative(self):
        """Termwise antiderivative with integration constant 0."""
        if not self.known(-1):
            raise TruncationError("window does not cover z^-1; cannot certify integrability")
        if self.coeffs.get(-1):
            raise PoleError("antiderivative of a series with a z^-1 term")
        out = {e + 1: c / (e + 1) for e, c in self.coeffs.items()}
        prec = None if self.prec is None else self.prec + 1
        return GradedSeries(self.direction, out, prec)

    # --- substitution ------------------------------------------------------

    def compose(self, inner):
        """Substitute ``inner`` for the variable of this series.

        Convergent shapes:
          * ascending outer, ascending inner with lead exponent >= 1;
          * ascending outer, descending inner with lead exponent <= -1;
          * descending outer, descending inner of shape z*(1 + lower orders).
        Negative outer exponents are evaluated through ``inner.reciprocal()``.
        """
        outer = self
        if not isinstance(inner, GradedSeries):
            raise TypeError("compose expects a GradedSeries inner argument")
        m = inner.lead
        if m is None:
            raise SubstitutionError("inner series has no known leading term")
        if outer.direction == ASCENDING:
            if inner.direction == ASCENDING:
                if m < 1:
                    raise SubstitutionError(
                        f"ascending substitution needs inner lead exponent >= 1, got z^{m}"
                        + (" (constant term present)" if m == 0 else "")
                    )
            else:
                if m > -1:
                    raise SubstitutionError(
                        f"descending inner must vanish at infinity (lead exponent <= -1), got z^{m}"
                    )
            rdir = inner.direction
        else:
            if inner.direction != DESCENDING or m != 1 or inner.lead_coeff != 1:
                raise SubstitutionError(
                    "descending outer requires a descending inner of shape z*(1 + lower orders)"
                )
            rdir = DESCENDING

        if outer.prec is None:
            wcap = None
        elif outer.direction == ASCENDING:
            wcap = inner.wlead * outer.prec
        else:
            wcap = outer.wprec

        if not outer.coeffs:
            return GradedSeries._from_w(rdir, {}, wcap)

        ks = sorted(outer.coeffs)
        kmin, kmax = ks[0], ks[-1]
        acc = GradedSeries.constant(outer.coeffs[kmax], rdir)
        for k in range(kmax - 1, kmin - 1, -1):
            acc = acc * inner
            c = outer.coeffs.get(k)
            if c is not None:
                acc = acc._add_scalar(c)
        if kmin:
            acc = acc * inner ** kmin
        if wcap is not None and (acc.wprec is None or wcap < acc.wprec):
            acc = acc._truncate_w(wcap)
        return acc

    def revert(self):
        """Compositional inverse.

        Ascending input must look like ``c1*z + ...`` with ``c1 != 0``;
        descending input must look like ``z + c0 + c1/z + ...``.  Newton
        iteration on ``g(h) = z``; the result window matches the input's.
        """
        g = self
        wp = g.wprec
        if wp is None:
            raise TruncationError("reversion needs a finite window; truncate() first")
        ident = GradedSeries.identity(g.direction)
        if g.direction == ASCENDING:
            if g.lead != 1:
                raise LeadingTermError("ascending reversion needs shape c1*z + higher with c1 != 0")
            h = GradedSeries.monomial(1, ONE / g.lead_coeff, ASCENDING, prec=g.prec)
        else:
            if g.lead != 1 or g.lead_coeff != 1:
                raise LeadingTermError("descending reversion needs shape z*(1 + lower orders)")
            h = GradedSeries(DESCENDING, {1: ONE, 0: -g.coeffs.get(0, ZERO)}, prec=g.prec)
        def resize(s, w):
            # pad with declared zeros when widening; Newton corrects them anyway
            cur = s.wprec
            if cur is not None and cur >= w:
                return s._truncate_w(w)
            return GradedSeries._from_w(s.direction, {s._w(e): c for e, c in s.coeffs.items()}, w)

        gprime = g.derivative()
        last = None
        window = min(wp, 4)
        for _ in range(4 + 2 * max(wp, 2).bit_length() + wp):
            gw = g._truncate_w(window) if window < wp else g
            hw = resize(h, window)
            err = gw.compose(hw) - ident
            if err.is_zero():
                if window >= wp:
                    return hw._truncate_w(err.wprec if err.wprec is not None else wp)
                window = min(wp, 2 * window)
                continue
            progress = err.wlead
            if last is not None and progress <= last:
                raise SeriesError("reversion stalled; input window may be inconsistent")
            last = progress
            gpw = gprime if gprime.wprec is not None and gprime.wprec <= window else gprime._truncate_w(window)
            h = hw - err * gpw.compose(hw).reciprocal()
        raise SeriesError("reversion failed to converge")


# --- hyperbolic maps -------------------------------------------------------


def sinh(g):
    e = g.exp()
    return (e - g.__neg__().exp()) / 2


def cosh(g):
    e = g.exp()
    return (e + g.__neg__().exp()) / 2


def coth(g):
    return cosh(g) * sinh(g).reciprocal()


def csch(g):
    return sinh(g).reciprocal()


_HYPERBOLIC = {"sinh": sinh, "cosh": cosh, "coth": coth, "csch": csch}


def hyperbolic(g, kind):
    try:
        fn = _HYPERBOLIC[kind]
    except KeyError:
        raise SeriesError(f"unknown hyperbolic kind {kind!r}") from None
    return fn(g)
