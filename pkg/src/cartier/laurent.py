"""Sparse Laurent polynomials in n variables.

Coefficients may be ints, Fractions, PadicInt, RationalSeries or
PadicSeries; all that is required is ring arithmetic through operators
and falsiness of zero.  Zero coefficients are dropped eagerly.
"""

from fractions import Fraction

from .errors import ConfigError, DomainError


class LaurentPoly:
    """Finite map exponent tuple -> coefficient."""

    __slots__ = ("n", "terms")

    def __init__(self, n, terms=None):
        self.n = n
        self.terms = {}
        if terms:
            for u, c in terms.items() if isinstance(terms, dict) else terms:
                u = tuple(u)
                if len(u) != self.n:
                    raise ConfigError("exponent %r has wrong dimension" % (u,))
                if c:
                    prev = self.terms.get(u)
                    s = c if prev is None else prev + c
                    if s:
                        self.terms[u] = s
                    elif prev is not None:
                        del self.terms[u]

    @classmethod
    def zero(cls, n):
        return cls(n)

    @classmethod
    def one(cls, n, one=1):
        return cls(n, {(0,) * n: one})

    @classmethod
    def monomial(cls, u, c=1):
        return cls(len(u), {tuple(u): c})

    def support(self):
        return sorted(self.terms)

    def coeff(self, u, default=0):
        return self.terms.get(tuple(u), default)

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if self.n != other.n or set(self.terms) != set(other.terms):
            return False
        return all(self.terms[u] == other.terms[u] for u in self.terms)

    def __repr__(self):
        items = ", ".join(
            "%r: %r" % (u, c) for u, c in sorted(self.terms.items())[:6]
        )
        return "LaurentPoly(n=%d, {%s}%s)" % (
            self.n,
            items,
            ", ..." if len(self.terms) > 6 else "",
        )

    def __add__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if self.n != other.n:
            raise ConfigError("dimension mismatch")
        out = dict(self.terms)
        for u, c in other.terms.items():
            s = out.get(u)
            s = c if s is None else s + c
            if s:
                out[u] = s
            elif u in out:
                del out[u]
        p = LaurentPoly(self.n)
        p.terms = out
        return p

    def __neg__(self):
        p = LaurentPoly(self.n)
        p.terms = {u: -c for u, c in self.terms.items()}
        return p

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, LaurentPoly):
            if self.n != other.n:
                raise ConfigError("dimension mismatch")
            a, b = self.terms, other.terms
            if len(a) > len(b):
                a, b = b, a
            out = {}
            for u, cu in a.items():
                for v, cv in b.items():
                    w = tuple(ui + vi for ui, vi in zip(u, v))
                    c = cu * cv
                    s = out.get(w)
                    s = c if s is None else s + c
                    if s:
                        out[w] = s
                    elif w in out:
                        del out[w]
            p = LaurentPoly(self.n)
            p.terms = out
            return p
        # scalar
        out = {}
        for u, c in self.terms.items():
            s = c * other
            if s:
                out[u] = s
        p = LaurentPoly(self.n)
        p.terms = out
        return p

    __rmul__ = __mul__

    def map_coefficients(self, fn):
        out = {}
        for u, c in self.terms.items():
            s = fn(c)
            if s:
                out[u] = s
        p = LaurentPoly(self.n)
        p.terms = out
        return p

    def scale_exponents(self, k):
        """Substitute x -> x^k."""
        p = LaurentPoly(self.n)
        p.terms = {tuple(k * e for e in u): c for u, c in self.terms.items()}
        return p

    def theta_x(self, i):
        """x_i d/dx_i."""
        out = {}
        for u, c in self.terms.items():
            s = c * u[i]
            if s:
                out[u] = s
        p = LaurentPoly(self.n)
        p.terms = out
        return p

    def constant_term(self, default=0):
        return self.terms.get((0,) * self.n, default)

    def to_text(self):
        lines = []
        for u in sorted(self.terms):
            lines.append("%s : %s" % (",".join(str(e) for e in u), self.terms[u]))
        return "\n".join(lines)

    @classmethod
    def from_text(cls, text, n=None):
        terms = []
        for line in text.strip().splitlines():
            if not line.strip():
                continue
            exps, coeff = line.split(":")
            u = tuple(int(e) for e in exps.strip().split(","))
            if n is None:
                n = len(u)
            terms.append((u, Fraction(coeff.strip())))
        if n is None:
            raise ConfigError("empty polynomial literal")
        out = []
        for u, c in terms:
            out.append((u, int(c) if c.denominator == 1 else c))
        return cls(n, out)


def poly_pow(f, e):
    """f^e by binary exponentiation on sparse maps."""
    if e < 0:
        raise DomainError("negative exponent")
    result = LaurentPoly.one(f.n)
    base = f
    while e:
        if e & 1:
            result = result * base
        e >>= 1
        if e:
            base = base * base
    return result


def cartier_poly(A, p):
    """Keep terms whose exponents are all divisible by p, dividing them by p."""
    out = LaurentPoly(A.n)
    out.terms = {
        tuple(e // p for e in u): c
        for u, c in A.terms.items()
        if all(e % p == 0 for e in u)
    }
    return out
