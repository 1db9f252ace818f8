"""Exact integer linear algebra on row lattices.

Everything here works over Z with plain Python ints (no overflow, no
floating point).  A "lattice" is the Z-span of a list of integer row
vectors; the canonical form used throughout is the row-style Hermite
normal form: pivots positive, entries above each pivot reduced into
[0, pivot), zero rows dropped, rows ordered by pivot column.  That form
is unique per lattice, so lattice equality is list equality.

A few routines also track the unimodular row transform, which is what
lets callers mirror row operations onto attached data (group-element
tails, solution coefficients).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Iterable, Sequence

Row = tuple[int, ...]


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) >= 0 and a*x + b*y = g."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def transpose(rows: Sequence[Sequence[int]], ncols: int | None = None) -> list[Row]:
    if not rows:
        return [() for _ in range(ncols)] if ncols else []
    return [tuple(r[j] for r in rows) for j in range(len(rows[0]))]


def _pivot_col(v: Sequence[int], ncols: int) -> int | None:
    for j in range(ncols):
        if v[j]:
            return j
    return None


def _hnf_core(rows: Iterable[Sequence[int]], ncols: int) -> tuple[list[list[int]], list[list[int]]]:
    """Echelonize with unimodular row ops only.

    Returns (pivot_rows, zero_rows); rows may be longer than ncols, the
    extra columns ride along untouched by pivot logic (transform
    tracking).  pivot_rows come back fully reduced (HNF on the first
    ncols columns) and sorted by pivot column.
    """
    pivots: dict[int, list[int]] = {}
    zeros: list[list[int]] = []
    for orig in rows:
        v = list(orig)
        j = _pivot_col(v, ncols)
        installed = False
        while j is not None:
            r = pivots.get(j)
            if r is None:
                if v[j] < 0:
                    v = [-t for t in v]
                pivots[j] = v
                installed = True
                j = None
            else:
                p, w = r[j], v[j]
                g, x, y = xgcd(p, w)
                # (r, v) -> (x r + y v, (p/g) v - (w/g) r): det = 1
                comb = [x * ra + y * va for ra, va in zip(r, v)]
                v = [(p // g) * va - (w // g) * ra for ra, va in zip(r, v)]
                pivots[j] = comb
                j = _pivot_col(v, ncols)
        if not installed and any(v):
            zeros.append(v)
    cols = sorted(pivots)
    # back-reduce entries above each pivot into [0, pivot)
    for i, j in enumerate(cols):
        for j2 in cols[i + 1:]:
            r2 = pivots[j2]
            q = pivots[j][j2] // r2[j2]
            if q:
                pivots[j] = [a - q * b for a, b in zip(pivots[j], r2)]
    return [pivots[j] for j in cols], zeros


def hnf(rows: Sequence[Sequence[int]]) -> list[Row]:
    """Hermite normal form of the row lattice (unique canonical basis)."""
    rows = [r for r in rows if any(r)]
    if not rows:
        return []
    piv, _ = _hnf_core(rows, len(rows[0]))
    return [tuple(r) for r in piv]


def hnf_with_transform(
    rows: Sequence[Sequence[int]],
) -> tuple[list[Row], list[Row], list[Row]]:
    """Return (H, U, K): H = HNF, U[i] . rows = H[i], K = left-kernel basis.

    The stacked matrix [U; K] is unimodular, so K is a complete basis of
    {x : x . rows = 0}.
    """
    rows = list(rows)
    if not rows:
        return [], [], []
    n = len(rows[0])
    k = len(rows)
    aug = [list(r) + [1 if i == t else 0 for t in range(k)] for i, r in enumerate(rows)]
    piv, zeros = _hnf_core(aug, n)
    H = [tuple(r[:n]) for r in piv]
    U = [tuple(r[n:]) for r in piv]
    K = [tuple(z[n:]) for z in zeros if any(z[n:])]
    return H, U, K


def row_reduce(hnf_rows: Sequence[Row], v: Sequence[int]) -> tuple[Row, list[int]]:
    """Reduce v modulo an HNF lattice into the fundamental domain.

    Returns (residue, quotients); residue is the canonical coset
    representative (pivot coordinates land in [0, pivot)), and
    v = residue + sum(q_i * hnf_rows[i]).
    """
    v = list(v)
    quots = []
    for r in hnf_rows:
        j = _pivot_col(r, len(r))
        q = v[j] // r[j]
        quots.append(q)
        if q:
            v = [a - q * b for a, b in zip(v, r)]
    return tuple(v), quots


def in_rowspan(rows: Sequence[Sequence[int]], v: Sequence[int]) -> bool:
    res, _ = row_reduce(hnf(rows), v)
    return not any(res)


def solve_in_rowspace(rows: Sequence[Sequence[int]], v: Sequence[int]) -> Row | None:
    """Integer coefficients c with c . rows = v, or None if v is outside."""
    rows = list(rows)
    if not any(v):
        return tuple(0 for _ in rows)
    if not rows:
        return None
    H, U, _ = hnf_with_transform(rows)
    res, quots = row_reduce(H, v)
    if any(res):
        return None
    coeffs = [0] * len(rows)
    for q, u in zip(quots, U):
        if q:
            coeffs = [c + q * ui for c, ui in zip(coeffs, u)]
    return tuple(coeffs)


def left_kernel(rows: Sequence[Sequence[int]]) -> list[Row]:
    """Basis of {x : x . rows = 0}."""
    rows = list(rows)
    if not rows:
        return []
    _, _, K = hnf_with_transform(rows)
    return hnf(K)


def kernel_right(rows: Sequence[Sequence[int]], ncols: int | None = None) -> list[Row]:
    """Basis of {x : rows . x = 0} as row vectors of length ncols."""
    rows = list(rows)
    if not rows:
        if ncols is None:
            raise ValueError("ncols required for empty matrix")
        return [tuple(1 if i == j else 0 for j in range(ncols)) for i in range(ncols)]
    return left_kernel(transpose(rows))


def solve_linear(
    a_rows: Sequence[Sequence[int]], b: Sequence[int]
) -> tuple[Row, list[Row]] | None:
    """Solve A x = b over Z: returns (x0, kernel_basis) or None.

    A is given by rows; the full solution set is x0 + span(kernel_basis).
    """
    a_rows = list(a_rows)
    ncols = len(a_rows[0]) if a_rows else len(b)
    if not a_rows:
        return (tuple(0 for _ in range(ncols)),
                kernel_right([], ncols)) if not any(b) else None
    x0 = solve_in_rowspace(transpose(a_rows), b)
    if x0 is None:
        return None
    return x0, kernel_right(a_rows, ncols)


def saturate(rows: Sequence[Sequence[int]]) -> list[Row]:
    """Saturation (Q-span intersected with Z^n) of the row lattice."""
    rows = [r for r in rows if any(r)]
    if not rows:
        return []
    n = len(rows[0])
    k = kernel_right(rows, n)
    return kernel_right(k, n)


def lattice_intersect(
    a_rows: Sequence[Sequence[int]], b_rows: Sequence[Sequence[int]]
) -> list[Row]:
    a_rows, b_rows = list(a_rows), list(b_rows)
    if not a_rows or not b_rows:
        return []
    stacked = a_rows + b_rows
    meet = []
    for kr in left_kernel(stacked):
        u = kr[: len(a_rows)]
        vec = [0] * len(a_rows[0])
        for c, row in zip(u, a_rows):
            if c:
                vec = [t + c * rt for t, rt in zip(vec, row)]
        if any(vec):
            meet.append(tuple(vec))
    return hnf(meet)


def same_lattice(a_rows: Sequence[Sequence[int]], b_rows: Sequence[Sequence[int]]) -> bool:
    return hnf(a_rows) == hnf(b_rows)


def lattice_index(sup_rows: Sequence[Sequence[int]], sub_rows: Sequence[Sequence[int]]) -> int | None:
    """Index [sup : sub] for nested row lattices; None when infinite.

    Assumes sub is contained in sup (not rechecked here).
    """
    hs = hnf(sup_rows)
    hb = hnf(sub_rows)
    if len(hs) != len(hb):
        return None
    num = den = 1
    for r in hb:
        num *= r[_pivot_col(r, len(r))]
    for r in hs:
        den *= r[_pivot_col(r, len(r))]
    if num % den:
        return None
    return num // den


def binom(n: int, k: int) -> int:
    """Binomial coefficient for any integer n (k >= 0), e.g. binom(-2, 2) = 3."""
    if k < 0:
        return 0
    num = 1
    for i in range(k):
        num *= n - i
    return num // math.factorial(k)


class NewtonPoly:
    """Exact model of a polynomial map Z^p -> Z^m in the binomial basis.

    f(x) = sum over multi-indices alpha of D_alpha * prod binom(x_i, alpha_i)
    with integer finite-difference coefficients D_alpha.  Exact whenever the
    source function is a polynomial of per-variable degree <= deg, which
    callers must guarantee; fit_newton verifies on extra probe points.
    """

    def __init__(self, p: int, m: int, deg: int, diffs: dict[tuple[int, ...], Row]):
        self.p = p
        self.m = m
        self.deg = deg
        self.diffs = diffs

    def __call__(self, x: Sequence[int]) -> Row:
        out = [0] * self.m
        for alpha, d in self.diffs.items():
            w = 1
            for xi, ai in zip(x, alpha):
                if ai:
                    w *= binom(xi, ai)
                    if not w:
                        break
            if w:
                for t in range(self.m):
                    out[t] += w * d[t]
        return tuple(out)

    def const(self) -> Row:
        return self.diffs.get(tuple(0 for _ in range(self.p)), tuple(0 for _ in range(self.m)))

    def linear_rows(self) -> list[Row]:
        """D_{e_i} per variable: f(x) == const + sum x_i * row_i modulo the
        span of the higher coefficients (all binomial weights are integers)."""
        rows = []
        for i in range(self.p):
            alpha = tuple(1 if t == i else 0 for t in range(self.p))
            rows.append(self.diffs.get(alpha, tuple(0 for _ in range(self.m))))
        return rows

    def higher_diffs(self) -> list[Row]:
        return [d for alpha, d in self.diffs.items() if sum(alpha) >= 2]


def fit_newton(f: Callable[[Row], Sequence[int]], p: int, deg: int,
               verify_points: Iterable[Row] = ()) -> NewtonPoly:
    """Finite-difference fit of a polynomial map on the grid {0..deg}^p."""
    if p == 0:
        val = tuple(f(()))
        model = NewtonPoly(0, len(val), deg, {(): val})
        return model
    grid = {}
    for pt in _box(p, deg):
        grid[pt] = tuple(f(pt))
    m = len(next(iter(grid.values())))
    diffs = {}
    for alpha in _box(p, deg):
        acc = [0] * m
        for beta in _sub_multi(alpha):
            sign = (-1) ** (sum(alpha) - sum(beta))
            w = 1
            for ai, bi in zip(alpha, beta):
                w *= math.comb(ai, bi)
            val = grid[beta]
            for t in range(m):
                acc[t] += sign * w * val[t]
        if any(acc):
            diffs[alpha] = tuple(acc)
    model = NewtonPoly(p, m, deg, diffs)
    for v in verify_points:
        if model(v) != tuple(f(v)):
            raise ValueError("function is not polynomial of the declared degree")
    return model


def _box(p: int, deg: int):
    ranges = [range(deg + 1)] * p
    out = [()]
    for r in ranges:
        out = [pt + (v,) for pt in out for v in r]
    return out


def _sub_multi(alpha):
    out = [()]
    for a in alpha:
        out = [pt + (v,) for pt in out for v in range(a + 1)]
    return out


class QuadMap:
    """Exact polynomial map Z^n -> Z^m of total degree <= 2.

    Coefficients may be half-integers (Fractions) while values on Z^n
    stay integral, e.g. v*(v-1)/2.
    """

    def __init__(self, n: int, const: list[Fraction], lin: list[list[Fraction]],
                 quad: list[list[list[Fraction]]]):
        self.n = n
        self.const = const
        self.lin = lin
        self.quad = quad  # per output coord: symmetric n x n

    @property
    def m(self) -> int:
        return len(self.const)

    def __call__(self, v: Sequence[int]) -> Row:
        out = []
        for c, l, q in zip(self.const, self.lin, self.quad):
            s = c
            for i, vi in enumerate(v):
                if vi:
                    s += l[i] * vi
                    for j, vj in enumerate(v):
                        if vj:
                            s += q[i][j] * vi * vj
            if s.denominator != 1:
                raise ValueError("quadratic model produced a non-integer value")
            out.append(int(s))
        return tuple(out)

    def linear_part_matrix(self) -> list[list[Fraction]]:
        return self.lin

    def quad_vanishes(self) -> bool:
        return all(all(all(x == 0 for x in row) for row in q) for q in self.quad)


def fit_quadratic(f: Callable[[Row], Sequence[int]], n: int,
                  check_vectors: Iterable[Row] = ()) -> QuadMap:
    """Interpolate a degree-<=2 integer-valued map from 1 + 2n + C(n,2) probes.

    Raises ValueError if any supplied check vector disagrees with the
    fitted model (callers pass extra probes to guard against the source
    not actually being quadratic).
    """
    zero = tuple(0 for _ in range(n))
    f0 = tuple(f(zero))
    m = len(f0)
    const = [Fraction(x) for x in f0]
    lin = [[Fraction(0)] * n for _ in range(m)]
    quad = [[[Fraction(0)] * n for _ in range(n)] for _ in range(m)]
    e = [tuple(1 if t == i else 0 for t in range(n)) for i in range(n)]
    fe = [tuple(f(e[i])) for i in range(n)]
    for i in range(n):
        f2 = f(tuple(2 * t for t in e[i]))
        for k in range(m):
            a = fe[i][k] - f0[k]          # l_i + q_ii
            b = f2[k] - f0[k]             # 2 l_i + 4 q_ii
            qii = Fraction(b - 2 * a, 2)
            quad[k][i][i] = qii
            lin[k][i] = Fraction(a) - qii
    for i in range(n):
        for j in range(i + 1, n):
            fij = f(tuple(x + y for x, y in zip(e[i], e[j])))
            for k in range(m):
                cross = (Fraction(fij[k] - f0[k]) - lin[k][i] - lin[k][j]
                         - quad[k][i][i] - quad[k][j][j])
                quad[k][i][j] = quad[k][j][i] = cross / 2
    model = QuadMap(n, const, lin, quad)
    for v in check_vectors:
        if model(v) != tuple(f(v)):
            raise ValueError("map is not quadratic: check vector disagrees")
    return model
