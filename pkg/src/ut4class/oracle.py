"""Brute-force cross-checks for the classification machinery.

Everything here recomputes from first principles: ball enumeration of the
group, the two stabilizer-type sets attached to a subgroup or a pair, the
exact endomorphism dimension for finite-index subgroups, and sweep
verification of the tabulated action formulas against direct conjugation.
Nothing in this module trusts a tabulated closed form.
"""

import itertools
from dataclasses import dataclass

import numpy as np

from . import cases, intlin
from .cases import NoSubsetError
from .characters import Character, UnitValue, conjugate_character, evaluate
from .core import Elt, compose, conjugate, elt, inverse, power
from .subgroup import (
    Subgroup,
    conjugate_subgroup,
    contains,
    coset_rep,
    intersect,
    subgroup,
    transversal,
)

_WHOLE_GROUP = subgroup([elt(a=1), elt(d=1), elt(f=1),
                         elt(b=1), elt(e=1), elt(c=1)])


@dataclass(frozen=True)
class Ball:
    """All group elements with every coordinate bounded by the radius."""

    radius: int

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("radius must be non-negative")

    def __len__(self) -> int:
        return (2 * self.radius + 1) ** 6

    def __iter__(self):
        rng = range(-self.radius, self.radius + 1)
        for t in itertools.product(rng, repeat=6):
            yield Elt(*t)

    def __contains__(self, g: Elt) -> bool:
        return all(abs(x) <= self.radius for x in g)


@dataclass(frozen=True)
class SWitness:
    """A ball element passing a stabilizer-set membership test."""

    g: Elt
    kind: str  # "in_S_of_H" or "in_S_of_H_chi"
    intersection: Subgroup
    character_check: tuple = ()

    def to_json(self) -> dict:
        return {
            "g": list(self.g),
            "kind": self.kind,
            "intersection": self.intersection.summary(),
            "character_check": [dict(c) for c in self.character_check],
        }


def _power_solutions(x: UnitValue, y: UnitValue):
    """Solutions n of x * y**n == 1.

    Returns None (no solution), the string "all", or a pair (n0, q): the
    solutions are n0 + q*Z, with q == 0 pinning the single value n0.
    """
    if y.is_one:
        return "all" if x.is_one else None
    m = y.value_order()
    if m is not None:
        # y is a primitive m-th root of unity; x must be pure torsion and
        # the congruence n * num(y) = -num(x) (mod m) pins n modulo m
        if any(e for _, e in x.exps):
            return None
        t = -x.torsion * m
        if t.denominator != 1:
            return None
        p = int(y.torsion * m) % m
        _, pinv, _ = intlin.xgcd(p, m)
        n0 = (int(t) * pinv) % m
        return (n0, m) if (x * y ** n0).is_one else None
    # infinite order: matching any nonzero exponent of y pins n uniquely
    xe = dict(x.exps)
    n = None
    for s, ye in y.exps:
        if not ye:
            continue
        cand = -xe.get(s, 0) / ye
        if cand.denominator != 1:
            return None
        if n is None:
            n = int(cand)
        elif n != int(cand):
            return None
    if n is None or not (x * y ** n).is_one:
        return None
    return (n, 0)


def _level1_sublattice(H: Subgroup, A: int, D: int, F: int):
    """Coefficient rows (over the level-1 generators) of the directions
    whose conjugation shift stays inside the level-2 lattice."""
    V = [(r.a, r.d, r.f) for r in H.gens1]
    if not V:
        return [], True
    rows = [[A * v[1] - v[0] * D, D * v[2] - v[1] * F] for v in V]
    l2 = [[s.b, s.e] for s in H.gens2]
    kern = intlin.left_kernel(rows + l2)
    coeffs = [k[:len(V)] for k in kern]
    coeffs = [c for c in intlin.hnf(coeffs) if any(c)]
    return coeffs, len(coeffs) == len(V)


def _chi_class_data(H: Subgroup, chi: Character, g0: Elt, coeffs):
    """Per-class agreement data: None when the level-2 gate fails, else a
    list of (row coefficients in the grid form, solution set)."""
    lam = chi.val_c
    for s in H.gens2:
        delta = compose(conjugate(s, g0), inverse(s))
        if not evaluate(chi, delta).is_one:
            return None
    out = []
    for c in coeffs:
        k = None
        for ci, h in zip(c, H.gens1):
            if ci:
                term = power(h, ci)
                k = term if k is None else compose(k, term)
        if k is None:
            continue
        delta = compose(conjugate(k, g0), inverse(k))
        rho = evaluate(chi, delta)
        sol = _power_solutions(rho, lam)
        if sol is None:
            return None
        out.append(((k.f, -k.a), sol))
    return out


def _grid_mask(rows, radius: int):
    """Boolean (B, E) grid for the combined membership conditions."""
    n = 2 * radius + 1
    axis = np.arange(-radius, radius + 1, dtype=np.int64)
    mask = np.ones((n, n), dtype=bool)
    for (cb, ce), sol in rows:
        if sol == "all":
            continue
        grid = cb * axis[:, None] + ce * axis[None, :]
        n0, q = sol
        mask &= (grid == n0) if q == 0 else ((grid - n0) % q == 0)
        if not mask.any():
            break
    return mask


def _character_record(chi: Character, g: Elt, dom: Subgroup) -> tuple:
    out = []
    for x in dom.generators():
        lhs = evaluate(chi, x)
        rhs = evaluate(chi, conjugate(x, inverse(g)))
        out.append({"generator": list(x), "value": str(lhs),
                    "conjugated": str(rhs),
                    "equal": (lhs / rhs).is_one})
    return tuple(out)


def _slow_witness(H: Subgroup, chi, g: Elt):
    dom = intersect(conjugate_subgroup(H, g), H)
    if dom.rank_signature() != H.rank_signature():
        return None
    if chi is None:
        return SWitness(g, "in_S_of_H", dom)
    rec = _character_record(chi, g, dom)
    if not all(r["equal"] for r in rec):
        return None
    return SWitness(g, "in_S_of_H_chi", dom, rec)


def _s_ball(H: Subgroup, chi, radius: int, outside_only: bool,
            limit: int | None, with_records: bool):
    out: list[SWitness] = []
    if H.c0 != 1:
        # without the full centre the conjugate subgroup is not constant
        # on central-coordinate classes, so fall back to direct checks
        for g in Ball(radius):
            w = _slow_witness(H, chi, g)
            if w is not None and not (outside_only and contains(H, g)):
                out.append(w)
                if limit is not None and len(out) >= limit:
                    return out
        return out
    rng = range(-radius, radius + 1)
    cs = list(rng)
    for A, D, F in itertools.product(rng, repeat=3):
        g0 = elt(a=A, d=D, f=F)
        coeffs, full = _level1_sublattice(H, A, D, F)
        if not full:
            continue
        if chi is None:
            rows = None
        else:
            rows = _chi_class_data(H, chi, g0, coeffs)
            if rows is None:
                continue
        dom = None
        if rows is None:
            mask = np.ones((len(cs), len(cs)), dtype=bool)
        else:
            mask = _grid_mask(rows, radius)
            if not mask.any():
                continue
        for bi, ei in np.argwhere(mask):
            B = bi - radius
            E = ei - radius
            for c in cs:
                g = Elt(A, D, F, int(B), int(E), c)
                if outside_only and contains(H, g):
                    continue
                if dom is None:
                    dom = intersect(conjugate_subgroup(H, g0), H)
                rec = ()
                if chi is not None and with_records:
                    rec = _character_record(chi, g, dom)
                kind = "in_S_of_H" if chi is None else "in_S_of_H_chi"
                out.append(SWitness(g, kind, dom, rec))
                if limit is not None and len(out) >= limit:
                    return out
    return out


def s_set_ball(H: Subgroup, r: int) -> list[SWitness]:
    """Ball elements whose conjugate subgroup meets the subgroup in full
    rank; contains every ball element of the subgroup itself."""
    return _s_ball(H, None, r, outside_only=False, limit=None,
                   with_records=False)


def s_chi_ball(H: Subgroup, chi: Character, r: int) -> list[SWitness]:
    """The subset of s_set_ball where the character agrees with its
    conjugate on the intersection; equals the subgroup's own ball exactly
    for pairs inducing irreducibly."""
    return _s_ball(H, chi, r, outside_only=False, limit=None,
                   with_records=True)


def s_chi_outside(H: Subgroup, chi: Character, r: int,
                  limit: int | None = None) -> list[SWitness]:
    """Stabilizer-set witnesses outside the subgroup itself.

    An empty result at radius r certifies the ball portion of the
    irreducibility criterion; any entry is a concrete violation.
    """
    return _s_ball(H, chi, r, outside_only=True, limit=limit,
                   with_records=True)


def endo_dimension_finite(H: Subgroup, chi: Character) -> int:
    """Endomorphism algebra dimension of the induced representation, for a
    finite-index subgroup: the number of double cosets inside the
    stabilizer set, by full coset enumeration."""
    if H.rank_signature() != (3, 2, 1):
        raise ValueError("infinite index")
    reps = transversal(H, _WHOLE_GROUP)
    tags = {}
    for t in reps:
        tags[tuple(coset_rep(H, t))] = t
    in_s = set()
    for key, t in tags.items():
        dom = intersect(conjugate_subgroup(H, t), H)
        ok = all((evaluate(chi, x) /
                  evaluate(chi, conjugate(x, inverse(t)))).is_one
                 for x in dom.generators())
        if ok:
            in_s.add(key)
    gens = list(H.generators())
    gens += [inverse(h) for h in gens]
    seen = set()
    orbits = 0
    for key in in_s:
        if key in seen:
            continue
        orbits += 1
        frontier = [tags[key]]
        seen.add(key)
        while frontier:
            t = frontier.pop()
            for h in gens:
                nk = tuple(coset_rep(H, compose(t, h)))
                if nk not in seen:
                    if nk not in in_s:
                        raise RuntimeError(
                            "internal inconsistency: the stabilizer set is "
                            "not a union of double cosets")
                    seen.add(nk)
                    frontier.append(tags[nk])
    return orbits


def _closed(rep: dict, bucket: str, key: tuple, params, extra: dict):
    """Aggregate repeated findings under a stable key with a count."""
    store = rep.setdefault("_agg", {}).setdefault(bucket, {})
    if key not in store:
        entry = dict(extra)
        entry["example_params"] = list(params)
        entry["count"] = 0
        store[key] = entry
    store[key]["count"] += 1


def verify_case(ranks, parameter_box, limit: int | None = None) -> dict:
    """Sweep every admissible tuple in the box and compare each tabulated
    formula with a first-principles computation.

    Exact mismatches go to "discrepancies"; displayed variants that differ
    from the computed action but are recorded as readings go to
    "alternate_readings"; tuples without a valid sample go to "notes".
    With a limit, tuples are taken with an even stride across the box.
    """
    ranks = tuple(ranks)
    report: dict = {"case": list(ranks), "params_checked": 0,
                    "discrepancies": [], "alternate_readings": [],
                    "notes": []}
    todo = cases.enumerate_params(ranks, parameter_box)
    if limit is not None and len(todo) > limit:
        total = len(todo)
        stride = total // limit
        todo = todo[::stride][:limit]
        report["notes"].append({
            "note": "strided sweep", "checked": len(todo), "of": total})
    for p in todo:
        report["params_checked"] += 1
        ss = cases.subset_of(ranks, p)
        sub = cases.build_subgroup(ranks, p)
        gens = cases.defining_generators(ranks, p)
        ngens = cases.normalizer_generators(ranks, ss, p)
        for gi, u in enumerate(ngens):
            m = conjugate_subgroup(sub, u)
            if (m.gens1, m.gens2, m.c0) != (sub.gens1, sub.gens2, sub.c0):
                _closed(report, "discrepancies", (ss, "normalize", gi), p,
                        {"subset": ss, "kind": "generator fails to normalize",
                         "generator": gi})
        samples = [c for c in cases.character_samples(ranks, ss, p)
                   if c.is_valid()][:2]
        if not samples:
            _closed(report, "notes", (ss, "no-sample"), p,
                    {"subset": ss, "note": "no valid character sample"})
            continue
        for chi in samples:
            v = cases.case_values(ranks, p, chi)
            for gi, u in enumerate(ngens):
                cc = conjugate_character(chi, u)
                computed = [evaluate(cc, h) for h in gens]
                tab = cases.tabulated_action(ranks, ss, p, gi, v)
                if tab is not None and not all(
                        (x / y).is_one for x, y in zip(computed, tab)):
                    _closed(report, "discrepancies", (ss, "action", gi), p,
                            {"subset": ss, "kind": "tabulated action",
                             "generator": gi})
                var = cases.printed_action_variant(ranks, ss, p, gi, v)
                if var is not None:
                    note, vals = var
                    if not all((x / y).is_one
                               for x, y in zip(computed, vals)):
                        _closed(report, "alternate_readings",
                                (ss, "action", gi, note), p,
                                {"subset": ss, "generator": gi, "note": note})
            for name, elem, exact_f, printed_f in cases.relation_checks(
                    ranks, ss, p):
                lhs = evaluate(chi, elem)
                if not (lhs / exact_f(v)).is_one:
                    _closed(report, "discrepancies", (ss, "relation", name),
                            p, {"subset": ss, "kind": "relation identity",
                                "name": name})
                if printed_f is not None and not (
                        exact_f(v) / printed_f(v)).is_one:
                    _closed(report, "alternate_readings",
                            (ss, "relation", name), p,
                            {"subset": ss, "relation": name,
                             "note": "printed identity differs from the "
                                     "exact decomposition"})
    agg = report.pop("_agg", {})
    for bucket, store in agg.items():
        report[bucket].extend(store[k] for k in sorted(store))
    return report
