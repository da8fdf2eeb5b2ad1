"""Level-k Hasse-Witt matrices, normalized determinants and extended bases."""

import json
from itertools import permutations

from .errors import (
    ConfigError,
    DomainError,
    ReductionError,
    TheoremViolation,
)
from .laurent import LaurentPoly, cartier_poly, poly_pow
from .padic import PadicInt
from .polytope import lattice_points, newton_polytope
from .series import PadicSeries


def F_k_polynomial(f, lift, k, ctx):
    """F^(k) = f^{p-k} sum_{r<k} (f^sigma(x^p) - f^p)^r f^sigma(x^p)^{k-r-1}."""
    p = ctx.p
    if k >= p:
        raise DomainError("F^(k) requires k < p")
    fs = lift.on_poly(f)
    fsp = fs.scale_exponents(p)
    fp = poly_pow(f, p)
    P = fsp - fp
    acc = LaurentPoly.zero(f.n)
    Pr = LaurentPoly.one(f.n)
    for r in range(k):
        term = Pr * poly_pow(fsp, k - r - 1)
        acc = acc + term
        if r < k - 1:
            Pr = Pr * P
    return poly_pow(f, p - k) * acc


class HasseWittMatrix:
    __slots__ = ("level", "prime", "precision", "basis", "entries", "L_k", "hw")

    def __init__(self, level, prime, precision, basis, entries, L_k, hw):
        self.level = level
        self.prime = prime
        self.precision = precision
        self.basis = basis
        self.entries = entries
        self.L_k = L_k
        self.hw = hw

    def size(self):
        return len(self.entries)

    def to_json(self):
        def render(c):
            if isinstance(c, PadicSeries):
                return c.coeffs
            if isinstance(c, PadicInt):
                return c.residue
            return str(c)

        obj = {
            "level": self.level,
            "prime": self.prime,
            "precision": self.precision,
            "basis": [list(map(str, b)) if isinstance(b, tuple) else str(b) for b in self.basis],
            "entries": [[render(c) for c in row] for row in self.entries],
            "L_k": self.L_k,
            "hw_det": render(self.hw),
        }
        return json.dumps(obj, sort_keys=True)


def _det(entries):
    """Determinant by signed permutation expansion (sizes here are <= 5)."""
    m = len(entries)
    if m == 1:
        return entries[0][0]
    total = None
    for perm in permutations(range(m)):
        inv = 0
        for i in range(m):
            for j in range(i + 1, m):
                if perm[i] > perm[j]:
                    inv += 1
        prod = entries[0][perm[0]]
        for i in range(1, m):
            prod = prod * entries[i][perm[i]]
        if inv % 2:
            prod = -prod
        total = prod if total is None else total + prod
    return total


def _solve_linear(M, rhs):
    """Solve M x = rhs over a ring with unit pivots (Gaussian elimination)."""
    m = len(M)
    A = [row[:] + [rhs[i]] for i, row in enumerate(M)]
    for col in range(m):
        piv = None
        for r in range(col, m):
            c = A[r][col]
            if isinstance(c, (PadicInt, PadicSeries)):
                ok = c.is_unit() if isinstance(c, PadicInt) else (c.coeffs[0] % c.ctx.p != 0)
            else:
                ok = bool(c)
            if ok:
                piv = r
                break
        if piv is None:
            raise ConfigError("basis coordinate matrix is not invertible")
        A[col], A[piv] = A[piv], A[col]
        pinv = A[col][col].invert() if hasattr(A[col][col], "invert") else 1 / A[col][col]
        A[col] = [x * pinv for x in A[col]]
        for r in range(m):
            if r != col and A[r][col]:
                fac = A[r][col]
                A[r] = [x - fac * y for x, y in zip(A[r], A[col])]
    return [A[i][m] for i in range(m)]


def _point_levels(P, k, region):
    by_level = {}
    pts_k = lattice_points(P, k, region)
    counts = []
    seen = set()
    for lev in range(1, k + 1):
        pts = lattice_points(P, lev, region)
        counts.append(len(pts))
        for u in pts:
            if u not in seen:
                seen.add(u)
                by_level[u] = lev
    missing = [u for u in pts_k if u not in by_level]
    if missing:
        raise ConfigError("region levels are not nested at %r" % (missing[0],))
    ordered = sorted(pts_k, key=lambda u: (by_level[u], u))
    return ordered, by_level, counts


def hasse_witt_matrix(f, lift, k, region, basis, ctx, polytope=None, scale=None):
    """Matrix of the Cartier operator on the level-k part.

    Entry (i, j) is the coefficient of b_j^sigma in Phi(b_i * F^(k)).
    basis: 'monomial' for x^u, u in (k mu), level-major order; or an explicit
    list of LaurentPoly spanning the same coordinate space.
    scale: optional exponent scaling (unused hook for callers).
    """
    p = ctx.p
    P = polytope or newton_polytope(f)
    points, by_level, counts = _point_levels(P, k, region)
    m_k = counts[-1]
    L_k = sum(m_k - counts[l - 1] for l in range(1, k))
    if basis == "monomial":
        basis_polys = [LaurentPoly.monomial(u, _ring_one(f)) for u in points]
        labels = list(points)
    else:
        basis_polys = list(basis)
        if len(basis_polys) != len(points):
            raise ConfigError("basis size %d != level size %d" % (len(basis_polys), len(points)))
        labels = ["b%d" % i for i in range(len(basis_polys))]
    Fk = F_k_polynomial(f, lift, k, ctx)
    sig_basis = [lift.on_poly(b) for b in basis_polys]
    monomial = basis == "monomial"
    point_set = set(points)
    if not monomial:
        # coordinate matrix: rows indexed by points, columns by basis elements
        M = [[sb.coeff(u, 0) for sb in sig_basis] for u in points]
    entries = []
    for bi in basis_polys:
        img = cartier_poly(bi * Fk, p)
        extra = [u for u in img.terms if u not in point_set]
        if extra:
            raise TheoremViolation(
                "Cartier image supported outside the level-%d region at %r" % (k, extra[0])
            )
        vec = [img.coeff(u, 0) for u in points]
        if monomial:
            entries.append(vec)
        else:
            entries.append(_solve_linear(M, vec))
    entries = [[_promote(c, ctx) for c in row] for row in entries]
    det = _det(entries)
    try:
        hw = det.divide_exact_p(L_k)
    except ReductionError as exc:
        raise TheoremViolation("det HW^(%d) not divisible by p^%d: %s" % (k, L_k, exc))
    return HasseWittMatrix(k, p, ctx.N, labels, entries, L_k, hw)


def _ring_one(f):
    for c in f.terms.values():
        if isinstance(c, PadicSeries):
            return PadicSeries.one(c.ctx, c.D)
        if isinstance(c, PadicInt):
            return PadicInt(c.ctx, 1)
        return 1
    return 1


def _promote(c, ctx):
    if isinstance(c, (PadicInt, PadicSeries)):
        return c
    return PadicInt(ctx, c)


def extended_basis_division(A, f, b, k, region, polytope=None):
    """Euclidean division A = P f + Q with Supp(P) in (k-1)mu and
    Supp(Q) in (k mu) minus (b + (k-1)mu)."""
    P_delta = polytope or newton_polytope(f)
    b = tuple(b)
    fb = f.coeff(b)
    is_unit = fb.is_unit() if isinstance(fb, PadicInt) else bool(fb)
    if isinstance(fb, PadicSeries):
        is_unit = fb.coeffs[0] % fb.ctx.p != 0
    if not is_unit:
        raise DomainError("coefficient of x^b in f is not a unit")
    fb_inv = fb.invert() if hasattr(fb, "invert") else 1 / fb
    lower = set(lattice_points(P_delta, k - 1, region)) if k > 1 else set()
    shifted = {tuple(u[i] + b[i] for i in range(f.n)): u for u in lower}
    # process candidates in increasing grading order: eliminating x^{u+b}
    # only creates terms of strictly larger grade, so each shifted point is
    # handled at most once
    from .expansion import grading_functional

    gens = [tuple(v[i] - b[i] for i in range(f.n)) for v in P_delta.vertices if v != b]
    ell = grading_functional(gens, f.n)
    Q = A
    Pq = LaurentPoly.zero(f.n)
    max_iter = len(lower) + 1
    it = 0
    while True:
        candidates = [u for u in Q.terms if u in shifted]
        if not candidates:
            break
        it += 1
        if it > max_iter:
            raise RuntimeError("division loop exceeded the region size")
        pick = min(
            candidates, key=lambda u: (sum(l * e for l, e in zip(ell, u)), u)
        )
        c = Q.coeff(pick) * fb_inv
        mono = LaurentPoly.monomial(shifted[pick], c)
        Pq = Pq + mono
        Q = Q - mono * f
    return Pq, Q


def _in_cone(d, P_delta, b):
    """Is d in the cone C(Delta - b)?  Nonzero d only."""
    if not any(d):
        return True
    from itertools import combinations

    from .exactla import solve

    gens = [tuple(v[i] - b[i] for i in range(P_delta.n)) for v in P_delta.vertices if v != b]
    # small LP by enumeration of generator subsets

    for rsize in range(1, P_delta.n + 1):
        for sub in combinations(gens, rsize):
            rows = [[g[i] for g in sub] for i in range(P_delta.n)]
            sol = solve(rows, list(d))
            if sol is not None and all(x >= 0 for x in sol):
                # check consistency (solve returns one solution of the
                # possibly underdetermined system)
                ok = all(
                    sum(sub[j][i] * sol[j] for j in range(rsize)) == d[i]
                    for i in range(P_delta.n)
                )
                if ok:
                    return True
    return False


def cy_hasse_witt(g, alpha, gamma, lift, k, ctx, Dt, basis="omega"):
    """HW^(k) for the invariant crystal of f = 1 - t g(x), k in {1, 2}.

    basis 'omega': level-2 basis (f, t g) matching (1/f, theta(1/f)).
    basis 'unit':  level-2 basis (1, t g) matching (1/f^2, t g/f^2).
    """
    if k not in (1, 2):
        raise ConfigError("CY Hasse-Witt implemented for k in {1,2}")
    p = ctx.p
    if k >= p:
        raise DomainError("k < p required")
    n = g.n
    one = PadicSeries.one(ctx, Dt)
    t = PadicSeries.t(ctx, Dt)
    f = LaurentPoly.one(n, one) - g.map_coefficients(lambda c: t * c)
    P = newton_polytope(g.map_coefficients(lambda c: 1))
    verts = P.vertices
    v1 = verts[0]
    Fk = F_k_polynomial(f, lift, k, ctx)
    if k == 1:
        img = cartier_poly(Fk, p)
        _check_cy_support(img, verts, 1)
        entry = _promote(img.constant_term(0), ctx)
        if not isinstance(entry, PadicSeries):
            entry = PadicSeries.constant(ctx, entry.residue, Dt)
        return HasseWittMatrix(1, p, ctx.N, ["1"], [[entry]], 0, entry)
    tg = g.map_coefficients(lambda c: t * c)
    if basis == "omega":
        b1 = f
        labels = ["f", "t*g"]
    elif basis == "unit":
        b1 = LaurentPoly.one(n, one)
        labels = ["1", "t*g"]
    else:
        raise ConfigError("unknown CY basis %r" % (basis,))
    gamma_inv = PadicInt(ctx, gamma).invert().residue
    v_inv = lift.vsigma.invert()
    rows = []
    for bi in (b1, tg):
        img = cartier_poly(bi * Fk, p)
        _check_cy_support(img, verts, 2)
        C0 = _as_series(img.constant_term(0), ctx, Dt)
        Cv = _as_series(img.coeff(v1, 0), ctx, Dt)
        for w in verts[1:]:
            if _as_series(img.coeff(w, 0), ctx, Dt) != Cv:
                raise TheoremViolation("vertex coefficients are not symmetric")
        c1 = Cv.shift_div(p) * v_inv * gamma_inv
        c0 = C0 - Cv * alpha * gamma_inv
        if basis == "omega":
            # the image decomposes over (1/(f^sigma)^2, t^sigma g/(f^sigma)^2);
            # since 1/(f^sigma)^2 = 1/f^sigma + t^sigma g/(f^sigma)^2, the
            # coordinates in (1/f^sigma, t^sigma g/(f^sigma)^2) are (c0, c0+c1)
            rows.append([c0, c0 + c1])
        else:
            rows.append([c0, c1])
    det = _det(rows)
    L_k = 1
    try:
        hw = det.divide_exact_p(L_k)
    except ReductionError as exc:
        raise TheoremViolation("det HW^(2) not divisible by p: %s" % exc)
    return HasseWittMatrix(2, p, ctx.N, labels, rows, L_k, hw)


def _as_series(c, ctx, Dt):
    if isinstance(c, PadicSeries):
        return c
    if isinstance(c, PadicInt):
        return PadicSeries.constant(ctx, c.residue, Dt)
    return PadicSeries.constant(ctx, c, Dt)


def _check_cy_support(img, verts, k):
    allowed = {tuple(0 for _ in verts[0])} | set(verts)
    for u in img.terms:
        if u not in allowed:
            raise TheoremViolation(
                "level-%d Cartier image supported at non-basis point %r" % (k, u)
            )
