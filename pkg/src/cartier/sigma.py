"""Frobenius lifts sigma, determined by t^sigma = t^p * v with v a unit."""

from .errors import ConfigError
from .series import PadicSeries, RationalSeries


class FrobLift:
    """A lift of Frobenius acting on coefficients.

    Scalars (elements of Z_p) are fixed; series in t are composed with
    t^sigma.  kind is one of 'identity', 'tp', 'explicit', 'excellent'.
    """

    __slots__ = ("kind", "ctx", "tsigma", "vsigma", "D")

    def __init__(self, kind, ctx=None, tsigma=None, vsigma=None, D=None):
        self.kind = kind
        self.ctx = ctx
        self.tsigma = tsigma
        self.vsigma = vsigma
        self.D = D

    @classmethod
    def identity(cls):
        return cls("identity")

    @classmethod
    def tp(cls, ctx, D):
        ts = PadicSeries(ctx, [0] * ctx.p + [1], D)
        v = PadicSeries.one(ctx, D)
        return cls("tp", ctx, ts, v, D)

    @classmethod
    def explicit(cls, ctx, v, D, kind="explicit"):
        """t^sigma = t^p * v(t) for a given unit series v = 1 mod p."""
        v = v.truncate(D)
        if v.coeffs[0] % ctx.p != 1 and (v.coeffs[0] - 1) % ctx.p != 0:
            raise ConfigError("v(0) must be 1 mod p for a Frobenius lift")
        ts = v.shift(ctx.p)
        return cls(kind, ctx, ts, v, D)

    @classmethod
    def from_tsigma(cls, ctx, tsigma, kind="excellent"):
        v = tsigma.shift_div(ctx.p)
        return cls(kind, ctx, tsigma, v, tsigma.D)

    def on_series(self, s):
        """Apply sigma to an element of Z_p[[t]]."""
        if self.kind == "identity":
            return s
        if not isinstance(s, PadicSeries):
            raise ConfigError("sigma acts on PadicSeries coefficients")
        self.ctx.same(s.ctx)
        if self.kind == "tp":
            p = self.ctx.p
            out = [0] * (s.D + 1)
            for i, c in enumerate(s.coeffs):
                if i * p > s.D:
                    break
                out[i * p] = c
            return PadicSeries(self.ctx, out)
        return s.compose(self.tsigma)

    def on_coeff(self, c):
        if isinstance(c, PadicSeries):
            return self.on_series(c)
        if isinstance(c, RationalSeries):
            raise ConfigError("reduce coefficients mod p^N before applying sigma")
        return c  # scalars are fixed

    def on_poly(self, f):
        if self.kind == "identity":
            return f
        return f.map_coefficients(self.on_coeff)

    def theta_ratio(self):
        """theta(t^sigma)/t^sigma as a PadicSeries (equals p + theta(v)/v)."""
        return self.vsigma.theta() * self.vsigma.invert() + self.ctx.p
