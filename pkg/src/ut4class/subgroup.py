"""Finitely generated subgroups in canonical form.

A subgroup is stored by layers: ``gens1`` are generators whose
first-superdiagonal coordinates (a, d, f) form a Hermite-normal-form
basis of the level-1 lattice, ``gens2`` generate the intersection with
the derived subgroup modulo the centre ((b, e) rows again in HNF), and
``c0`` generates the intersection with the centre.  Tails are reduced
into fixed fundamental domains, so equal subgroups have equal canonical
data; structural equality of ``Subgroup`` values is subgroup equality.

All computations are exact.  The few operations whose general case
needs a search (certain intersections and centralizers of pathological
inputs) mark their result with a flag instead of guessing; every
classification-facing call stays on the exact paths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct
from typing import Callable, Iterable, Sequence

from . import intlin
from .core import (
    IDENTITY,
    Elt,
    commutator,
    compose,
    conjugate,
    depth,
    elt,
    inverse,
    power,
)


def _first_nz(v) -> int | None:
    for j, x in enumerate(v):
        if x:
            return j
    return None


def _combo(coeffs: Sequence[int], rows: Sequence[Sequence[int]]) -> tuple[int, ...]:
    n = len(rows[0])
    out = [0] * n
    for c, r in zip(coeffs, rows):
        if c:
            out = [a + c * b for a, b in zip(out, r)]
    return tuple(out)


def _divisors(n: int) -> list[int]:
    n = abs(n)
    out = []
    i = 1
    while i * i <= n:
        if n % i == 0:
            out.append(i)
            if i != n // i:
                out.append(n // i)
        i += 1
    return sorted(out)


@dataclass(frozen=True)
class Subgroup:
    gens1: tuple[Elt, ...]
    gens2: tuple[Elt, ...]
    c0: int
    flags: tuple[str, ...] = ()

    @property
    def level1_rows(self) -> list[tuple[int, int, int]]:
        return [(t.a, t.d, t.f) for t in self.gens1]

    @property
    def level2_rows(self) -> list[tuple[int, int]]:
        return [(s.b, s.e) for s in self.gens2]

    @property
    def gamma1_rows(self) -> list[tuple[int, int, int]]:
        """Basis of the derived-subgroup intersection as a lattice in (b, e, c)."""
        rows = [(s.b, s.e, s.c) for s in self.gens2]
        if self.c0:
            rows.append((0, 0, self.c0))
        return rows

    def generators(self) -> list[Elt]:
        gens = list(self.gens1) + list(self.gens2)
        if self.c0:
            gens.append(elt(c=self.c0))
        return gens

    def rank_signature(self) -> tuple[int, int, int]:
        return (len(self.gens1), len(self.gens2), 1 if self.c0 else 0)

    def hirsch_length(self) -> int:
        return sum(self.rank_signature())

    def summary(self) -> dict:
        return {
            "level1": [list(t) for t in self.gens1],
            "level2": [list(s) for s in self.gens2],
            "center": self.c0,
            "rank_signature": list(self.rank_signature()),
            "flags": list(self.flags),
        }


class _Builder:
    def __init__(self) -> None:
        self.p1: dict[int, tuple[list[int], Elt]] = {}
        self.p2: dict[int, tuple[list[int], Elt]] = {}
        self.c0 = 0

    def add(self, g: Elt) -> None:
        d = depth(g)
        if d == 0:
            left = self._reduce_insert(self.p1, [g.a, g.d, g.f], g)
            if left is None:
                return
            g, d = left, depth(left)
        if d == 1:
            left = self._reduce_insert(self.p2, [g.b, g.e], g)
            if left is None:
                return
            g = left
        if g.c:
            self.c0 = math.gcd(self.c0, abs(g.c))

    def _reduce_insert(self, pivots, v: list[int], tail: Elt) -> Elt | None:
        """Echelon insertion with the row ops mirrored on group elements."""
        j = _first_nz(v)
        while j is not None:
            cur = pivots.get(j)
            if cur is None:
                if v[j] < 0:
                    v = [-t for t in v]
                    tail = inverse(tail)
                pivots[j] = (v, tail)
                return None
            r, t = cur
            p, w = r[j], v[j]
            g_, x, y = intlin.xgcd(p, w)
            comb_vec = [x * ra + y * va for ra, va in zip(r, v)]
            comb_tail = compose(power(t, x), power(tail, y))
            new_vec = [(p // g_) * va - (w // g_) * ra for ra, va in zip(r, v)]
            new_tail = compose(power(tail, p // g_), power(t, -(w // g_)))
            pivots[j] = (comb_vec, comb_tail)
            v, tail = new_vec, new_tail
            j = _first_nz(v)
        return tail

    def _contains_low(self, x: Elt) -> bool:
        g = x
        for j in sorted(self.p2):
            r, t = self.p2[j]
            w = (g.b, g.e)[j]
            if w:
                if w % r[j]:
                    return False
                g = compose(power(t, -(w // r[j])), g)
        if g.b or g.e:
            return False
        return g.c % self.c0 == 0 if self.c0 else g.c == 0

    def close(self) -> None:
        while True:
            pend = []
            tails1 = [t for _, t in (self.p1[j] for j in sorted(self.p1))]
            for i in range(len(tails1)):
                for j in range(i + 1, len(tails1)):
                    c = commutator(tails1[i], tails1[j])
                    if c != IDENTITY and not self._contains_low(c):
                        pend.append(c)
            for j in sorted(self.p1):
                t = self.p1[j][1]
                for j2 in sorted(self.p2):
                    s = self.p2[j2][1]
                    c = commutator(t, s)  # central
                    if c.c and (self.c0 == 0 or c.c % self.c0):
                        pend.append(c)
            if not pend:
                return
            for g in pend:
                self.add(g)

    def finish(self, flags: Iterable[str] = ()) -> Subgroup:
        cols2 = sorted(self.p2)
        for i, j in enumerate(cols2):
            for j2 in cols2[i + 1:]:
                r2, t2 = self.p2[j2]
                r, t = self.p2[j]
                q = r[j2] // r2[j2]
                if q:
                    self.p2[j] = (
                        [a - q * b for a, b in zip(r, r2)],
                        compose(t, power(t2, -q)),
                    )
        if self.c0:
            for j in cols2:
                r, t = self.p2[j]
                q = t.c // self.c0
                if q:
                    self.p2[j] = (r, compose(t, elt(c=-q * self.c0)))
        cols1 = sorted(self.p1)
        for i, j in enumerate(cols1):
            for j2 in cols1[i + 1:]:
                r2, t2 = self.p1[j2]
                r, t = self.p1[j]
                q = r[j2] // r2[j2]
                if q:
                    self.p1[j] = (
                        [a - q * b for a, b in zip(r, r2)],
                        compose(t, power(t2, -q)),
                    )
        # canonical coset tails: (b, e) into the level-2 fundamental domain,
        # then the corner modulo c0
        for j in cols1:
            r, t = self.p1[j]
            for j2 in cols2:
                w, s = self.p2[j2]
                piv = _first_nz(w)
                q = (t.b, t.e)[piv] // w[piv]
                if q:
                    t = compose(t, power(s, -q))
            if self.c0:
                q = t.c // self.c0
                if q:
                    t = compose(t, elt(c=-q * self.c0))
            self.p1[j] = (r, t)
        gens1 = tuple(self.p1[j][1] for j in cols1)
        gens2 = tuple(self.p2[j][1] for j in cols2)
        return Subgroup(gens1, gens2, self.c0, tuple(sorted(set(flags))))


def subgroup(generators: Iterable[Elt], flags: Iterable[str] = ()) -> Subgroup:
    """Canonical form of the subgroup generated by the given elements."""
    b = _Builder()
    for g in generators:
        b.add(Elt(*g))
    b.close()
    return b.finish(flags)


def contains(h: Subgroup, g: Elt) -> bool:
    v = (g.a, g.d, g.f)
    for t in h.gens1:
        r = (t.a, t.d, t.f)
        j = _first_nz(r)
        if v[j]:
            if v[j] % r[j]:
                return False
            g = compose(power(t, -(v[j] // r[j])), g)
            v = (g.a, g.d, g.f)
    if any(v):
        return False
    for s in h.gens2:
        r = (s.b, s.e)
        j = _first_nz(r)
        w = (g.b, g.e)[j]
        if w:
            if w % r[j]:
                return False
            g = compose(power(s, -(w // r[j])), g)
    if g.b or g.e:
        return False
    return g.c % h.c0 == 0 if h.c0 else g.c == 0


def member_exponents(
    h: Subgroup, g: Elt
) -> tuple[list[int], list[int], int] | None:
    """Coordinates of g along the canonical generators, or None if g is
    outside h.  g == prod(gens1^q1) * prod(gens2^q2) * elt(c=c0)^qc."""
    q1 = []
    v = (g.a, g.d, g.f)
    for t in h.gens1:
        r = (t.a, t.d, t.f)
        j = _first_nz(r)
        q = 0
        if v[j]:
            if v[j] % r[j]:
                return None
            q = v[j] // r[j]
            g = compose(power(t, -q), g)
            v = (g.a, g.d, g.f)
        q1.append(q)
    if any(v):
        return None
    q2 = []
    for s in h.gens2:
        r = (s.b, s.e)
        j = _first_nz(r)
        w = (g.b, g.e)[j]
        q = 0
        if w:
            if w % r[j]:
                return None
            q = w // r[j]
            g = compose(power(s, -q), g)
        q2.append(q)
    if g.b or g.e:
        return None
    if h.c0:
        if g.c % h.c0:
            return None
        return q1, q2, g.c // h.c0
    return (q1, q2, 0) if g.c == 0 else None


def derived_subgroup(h: Subgroup) -> Subgroup:
    """Canonical form of the commutator subgroup [h, h]."""
    gens = h.generators()
    pairs = []
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            c = commutator(gens[i], gens[j])
            if c != IDENTITY:
                pairs.append(c)
    # normal closure needs the conjugation corrections, which in this
    # group are central triple commutators
    triples = [commutator(c, g) for c in pairs for g in gens]
    return subgroup(pairs + [t for t in triples if t != IDENTITY],
                    flags=h.flags)


def coset_rep(h: Subgroup, g: Elt) -> Elt:
    """Canonical representative of the right coset H*g."""
    for t in h.gens1:
        r = (t.a, t.d, t.f)
        j = _first_nz(r)
        q = (g.a, g.d, g.f)[j] // r[j]
        if q:
            g = compose(power(t, -q), g)
    for s in h.gens2:
        r = (s.b, s.e)
        j = _first_nz(r)
        q = (g.b, g.e)[j] // r[j]
        if q:
            g = compose(power(s, -q), g)
    if h.c0:
        q = g.c // h.c0
        if q:
            g = compose(elt(c=-q * h.c0), g)
    return g


def level1_preimage(h: Subgroup, v: Sequence[int]) -> Elt:
    """The canonical element of H whose (a, d, f) coordinates equal v."""
    g = IDENTITY
    v = list(v)
    for t in h.gens1:
        r = (t.a, t.d, t.f)
        j = _first_nz(r)
        if v[j]:
            if v[j] % r[j]:
                raise ValueError("vector outside the level-1 lattice")
            q = v[j] // r[j]
            g = compose(g, power(t, q))
            v = [a - q * b for a, b in zip(v, r)]
    if any(v):
        raise ValueError("vector outside the level-1 lattice")
    return g


def conjugate_subgroup(h: Subgroup, g: Elt) -> Subgroup:
    """Canonical form of g H g^-1."""
    return subgroup([conjugate(t, g) for t in h.generators()], flags=h.flags)


def index_in(sub: Subgroup, sup: Subgroup) -> int | float:
    """Index [sup : sub]; math.inf when infinite; ValueError if not contained."""
    for t in sub.generators():
        if not contains(sup, t):
            raise ValueError("first subgroup is not contained in the second")
    if sub.rank_signature() != sup.rank_signature():
        return math.inf
    i1 = intlin.lattice_index(sup.level1_rows, sub.level1_rows)
    i2 = intlin.lattice_index(sup.gamma1_rows, sub.gamma1_rows)
    if i1 is None or i2 is None:
        return math.inf
    return i1 * i2


def transversal(h: Subgroup, k: Subgroup, max_size: int = 200000) -> list[Elt]:
    """Representatives of the right cosets of h inside k (finite index)."""
    idx = index_in(h, k)
    if idx == math.inf:
        raise ValueError("infinite index")
    if idx > max_size:
        raise ValueError("index too large to enumerate")
    reps1 = [IDENTITY]
    if k.gens1:
        t_rows = [intlin.solve_in_rowspace(k.level1_rows, r) for r in h.level1_rows]
        thnf = intlin.hnf(t_rows)
        pivots = [r[_first_nz(r)] for r in thnf]
        reps1 = []
        for x in iproduct(*[range(p) for p in pivots]):
            res, _ = intlin.row_reduce(thnf, x)
            if tuple(x) != res:
                continue
            v = _combo(x, k.level1_rows)
            reps1.append(level1_preimage(k, v))
    repsg = [IDENTITY]
    if k.gamma1_rows:
        u_rows = [intlin.solve_in_rowspace(k.gamma1_rows, r) for r in h.gamma1_rows]
        uhnf = intlin.hnf(u_rows)
        pivots = [r[_first_nz(r)] for r in uhnf]
        repsg = []
        for y in iproduct(*[range(p) for p in pivots]):
            res, _ = intlin.row_reduce(uhnf, y)
            if tuple(y) != res:
                continue
            w = _combo(y, k.gamma1_rows)
            repsg.append(elt(b=w[0], e=w[1], c=w[2]))
    out = [compose(r1, rg) for r1 in reps1 for rg in repsg]
    assert len(out) == idx
    return out


# --- level sets of polynomial maps that are promised to be subgroups ---

def _verify_pts(p: int) -> list[tuple[int, ...]]:
    base = [-1, 4, -3, 5]
    pts = {tuple(-1 for _ in range(p)), tuple(-2 for _ in range(p))}
    for shift in range(3):
        pts.add(tuple(base[(i + shift) % len(base)] for i in range(p)))
    return sorted(pts)


def subgroup_level_set(
    fn: Callable[[tuple[int, ...]], Sequence[int]],
    p: int,
    lam_rows: Sequence[Sequence[int]],
    m: int,
    search_radius: int = 5,
) -> tuple[list[tuple[int, ...]], bool]:
    """Basis of S = {x in Z^p : fn(x) in lattice(lam_rows)}.

    fn must be a polynomial map of total degree <= 3 and S must be a
    subgroup of Z^p (callers guarantee both; the promise is what makes
    the exact tiers complete).  Returns (basis_rows, exact).
    """
    if p == 0:
        return [], True
    lam = intlin.hnf([r for r in lam_rows if any(r)])

    def member(vec) -> bool:
        if not lam:
            return not any(vec)
        res, _ = intlin.row_reduce(lam, vec)
        return not any(res)

    model = intlin.fit_newton(fn, p, 3, verify_points=_verify_pts(p))
    assert member(model.const()), "level-set promise violated at 0"
    if all(member(d) for d in model.higher_diffs()):
        # fn is additive modulo the lattice: a plain congruence system
        lin = model.linear_rows()
        mat = [
            tuple(lin[i][t] for i in range(p)) + tuple(row[t] for row in lam)
            for t in range(m)
        ]
        kern = intlin.kernel_right(mat, p + len(lam))
        return intlin.hnf([kr[:p] for kr in kern]), True
    if p == 1:
        return _line_level_set(fn, model, lam, m, member), True
    found = []
    for x in iproduct(range(-search_radius, search_radius + 1), repeat=p):
        if member(fn(x)):
            found.append(x)
    basis = intlin.hnf(found)
    full = basis == [tuple(1 if i == j else 0 for j in range(p)) for i in range(p)]
    return basis, full


def _line_level_set(fn, model, lam, m, member) -> list[tuple[int, ...]]:
    d = [
        model.diffs.get((i,), tuple(0 for _ in range(m)))
        for i in range(4)
    ]
    sat = intlin.saturate(lam) if lam else []
    wrows = intlin.kernel_right(sat, m) if sat else intlin.kernel_right([], m)
    polys = []
    for w in wrows:
        c = [sum(dv * wv for dv, wv in zip(d[i], w)) for i in range(4)]
        assert c[0] == 0
        if any(c[1:]):
            polys.append(c)
    if not polys:
        # free directions all vanish; the zero set is a divisor of 6 * torsion
        mt = intlin.lattice_index(sat, lam) if lam else 1
        mt = mt or 1
        for k in _divisors(6 * mt):
            if member(fn((k,))):
                return [(k,)]
        return []
    # nonzero k roots of 6*g(k)/k for the first constraining polynomial
    c = polys[0]
    aa = c[3]
    bb = 3 * c[2] - 3 * c[3]
    cc = 6 * c[1] - 3 * c[2] + 2 * c[3]
    roots = []
    if aa == 0:
        if bb != 0 and (-cc) % bb == 0:
            roots.append(-cc // bb)
    else:
        disc = bb * bb - 4 * aa * cc
        if disc >= 0:
            s = math.isqrt(disc)
            if s * s == disc:
                for num in (-bb + s, -bb - s):
                    if num % (2 * aa) == 0:
                        roots.append(num // (2 * aa))
    for k in sorted({r for r in roots if r >= 1}):
        ok = all(
            sum(q[i] * intlin.binom(k, i) for i in range(4)) == 0 for q in polys
        )
        if ok and member(fn((k,))):
            return [(k,)]
    return []


# --- intersection ---

def intersect(h: Subgroup, k: Subgroup) -> Subgroup:
    """Canonical form of the intersection of two subgroups."""
    lam_h = h.gamma1_rows
    lam_k = k.gamma1_rows
    lam_i = intlin.lattice_intersect(lam_h, lam_k)
    gens: list[Elt] = [elt(b=r[0], e=r[1], c=r[2]) for r in lam_i]
    flags = set(h.flags) | set(k.flags)
    m_rows = intlin.lattice_intersect(h.level1_rows, k.level1_rows)
    if m_rows:
        p = len(m_rows)
        sigma = intlin.hnf(list(lam_h) + list(lam_k))

        def delta(x: tuple[int, ...]) -> tuple[int, int, int]:
            v = _combo(x, m_rows)
            d = compose(inverse(level1_preimage(k, v)), level1_preimage(h, v))
            return (d.b, d.e, d.c)

        pi_be = intlin.hnf([r[:2] for r in sigma])
        s1, ex1 = subgroup_level_set(lambda x: delta(x)[:2], p, pi_be, 2)
        if not ex1:
            flags.add("intersection_search_bounded")
        coeff_rows: list[tuple[int, ...]] = []
        if s1:
            if sigma and intlin.in_rowspan(sigma, (0, 0, 1)):
                coeff_rows = list(s1)
            else:
                s2, ex2 = subgroup_level_set(
                    lambda y: delta(_combo(y, s1)), len(s1), sigma, 3
                )
                if not ex2:
                    flags.add("intersection_search_bounded")
                coeff_rows = [_combo(y, s1) for y in s2]
        stack = list(lam_k) + list(lam_h)
        for x in coeff_rows:
            v = _combo(x, m_rows)
            dvec = delta(x)
            sol = intlin.solve_in_rowspace(stack, dvec)
            assert sol is not None
            uh = [0, 0, 0]
            for cz, row in zip(sol[len(lam_k):], lam_h):
                if cz:
                    uh = [a - cz * b for a, b in zip(uh, row)]
            w = compose(level1_preimage(h, v), elt(b=uh[0], e=uh[1], c=uh[2]))
            assert contains(h, w) and contains(k, w)
            gens.append(w)
    return subgroup(gens, flags=flags)


# --- centralizer ---

def centralizer(h: Subgroup) -> Subgroup:
    """Canonical form of the centralizer of h in the whole group."""
    t1 = list(h.gens1)
    rows = []
    for t in t1:
        rows.append((t.d, -t.a, 0))
        rows.append((0, t.f, -t.d))
    for s in h.gens2:
        rows.append((s.e, 0, -s.b))
    vbasis = intlin.kernel_right([r for r in rows if any(r)], 3)
    flags = set(h.flags)
    gens: list[Elt] = [elt(c=1)]
    arows = [(-t.f, t.a) for t in t1]
    for b_, e_ in intlin.kernel_right([r for r in arows if any(r)], 2):
        gens.append(elt(b=b_, e=e_))
    if vbasis:
        if t1:
            def psi(y: tuple[int, ...]) -> tuple[int, ...]:
                v = _combo(y, vbasis)
                u = elt(a=v[0], d=v[1], f=v[2])
                return tuple(commutator(u, t).c for t in t1)

            lam_rows = [tuple(-t.f for t in t1), tuple(t.a for t in t1)]
            sv, exact = subgroup_level_set(psi, len(vbasis), lam_rows, len(t1))
            if not exact:
                flags.add("centralizer_search_bounded")
            for y in sv:
                v = _combo(y, vbasis)
                got = intlin.solve_linear(arows, psi(y))
                assert got is not None
                be = got[0]
                gens.append(compose(elt(a=v[0], d=v[1], f=v[2]),
                                    elt(b=be[0], e=be[1])))
        else:
            for v in vbasis:
                gens.append(elt(a=v[0], d=v[1], f=v[2]))
    res = subgroup(gens, flags=flags)
    for t in h.generators():
        for g in res.generators():
            assert commutator(g, t) == IDENTITY
    return res


# --- isolator ---

def _order_mod(x: Sequence[int], rows: Sequence[Sequence[int]], bound: int) -> int:
    for k in _divisors(bound):
        if intlin.in_rowspan(rows, tuple(k * t for t in x)):
            return k
    raise AssertionError("order must divide the lattice index")


def isolator(h: Subgroup, enum_cap: int = 200000) -> Subgroup:
    """Canonical form of the set of elements with a positive power in h.

    For this group the set is a subgroup; the computation is exact (the
    flag ``isolator_enumeration_capped`` marks the one escape hatch, hit
    only when the saturation index exceeds ``enum_cap``).
    """
    flags = set(h.flags)
    gens = list(h.generators())
    l2 = h.level2_rows
    if h.c0:
        gens.append(elt(c=1))
        for w in intlin.saturate(l2):
            gens.append(elt(b=w[0], e=w[1]))
    else:
        sat2 = intlin.saturate(l2)
        if sat2:
            idx = intlin.lattice_index(sat2, l2)
            phis = []
            for w in sat2:
                kw = _order_mod(w, l2, idx)
                coeffs = intlin.solve_in_rowspace(l2, tuple(kw * t for t in w))
                s = IDENTITY
                for cz, g2 in zip(coeffs, h.gens2):
                    s = compose(s, power(g2, cz))
                phis.append(Fraction(s.c, kw))
            den = 1
            for ph in phis:
                den = den * ph.denominator // math.gcd(den, ph.denominator)
            mat = [tuple(int(ph * den) for ph in phis) + (den,)]
            kern = intlin.kernel_right(mat, len(phis) + 1)
            for kr in kern:
                x = kr[: len(phis)]
                if not any(x):
                    continue
                be = _combo(x, sat2)
                cval = sum(xi * ph for xi, ph in zip(x, phis))
                assert cval.denominator == 1
                gens.append(elt(b=be[0], e=be[1], c=int(cval)))
    l1 = h.level1_rows
    if l1:
        sat1 = intlin.saturate(l1)
        t_rows = [intlin.solve_in_rowspace(sat1, r) for r in l1]
        thnf = intlin.hnf(t_rows)
        pivots = [r[_first_nz(r)] for r in thnf]
        index1 = math.prod(pivots)
        if index1 > enum_cap:
            flags.add("isolator_enumeration_capped")
        elif index1 > 1:
            satbe = intlin.saturate(l2)
            idx2 = intlin.lattice_index(satbe, l2) if l2 else 1
            bound = (idx2 or 1) * max(h.c0, 1)
            lam_h = h.gamma1_rows
            for x in iproduct(*[range(p) for p in pivots]):
                if not any(x):
                    continue
                res, _ = intlin.row_reduce(thnf, x)
                if tuple(x) != res:
                    continue
                v = _combo(x, sat1)
                k0 = _order_mod(x, thnf, index1)
                w = _root_witness(h, v, k0, bound, lam_h)
                if w is not None:
                    gens.append(w)
    return subgroup(gens, flags=flags)


def _root_witness(h: Subgroup, v, k0: int, bound: int, lam_h) -> Elt | None:
    """Element with level-1 part v and a power in h, if one exists."""
    u = elt(a=v[0], d=v[1], f=v[2])
    for d in _divisors(bound):
        j = k0 * d
        tj = level1_preimage(h, tuple(j * t for t in v))

        def resid(s3) -> tuple[int, int, int]:
            g = compose(u, elt(b=s3[0], e=s3[1], c=s3[2]))
            r = compose(inverse(tj), power(g, j))
            return (r.b, r.e, r.c)

        r0 = resid((0, 0, 0))
        cols = []
        for i in range(3):
            ei = tuple(1 if t == i else 0 for t in range(3))
            cols.append(tuple(a - b for a, b in zip(resid(ei), r0)))
        chk = resid((1, 1, 1))
        assert chk == tuple(a + sum(c[t] for c in cols)
                            for t, a in enumerate(r0))
        sys_rows = [
            tuple(cols[i][t] for i in range(3)) + tuple(row[t] for row in lam_h)
            for t in range(3)
        ]
        got = intlin.solve_linear(sys_rows, tuple(-a for a in r0))
        if got is None:
            continue
        s3 = got[0][:3]
        w = compose(u, elt(b=s3[0], e=s3[1], c=s3[2]))
        assert contains(h, power(w, j))
        return w
    return None
