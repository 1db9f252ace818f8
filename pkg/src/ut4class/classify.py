"""Classification of weight pairs up to conjugation.

The entry points take an arbitrary finitely generated subgroup containing
the full centre (plus a character for the finer queries) and produce:

  * ``normal_form``: the conjugation-canonical parameter tuple of the
    subgroup together with an explicit conjugator realizing it,
  * ``param_set_of``: the admissible subset the tuple belongs to,
  * ``is_irreducible``: the full classification record for a pair,
  * ``stratum``: the unique stratum row an irreducible pair sits on,
  * ``normalizer_action``: the normalizer generators with their verified
    multiplier formulas,
  * ``equivalent``: conjugacy of two pairs with an explicit certificate,
  * ``f_equivalents``: finite root/residue replacement companions.

All arithmetic is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import cases, intlin
from .cases import NoSubsetError
from .characters import (
    Character,
    ONE,
    UnitValue,
    character,
    conjugate_character,
    evaluate,
)
from .core import Elt, IDENTITY, compose, conjugate, elt, inverse, power
from .subgroup import (
    Subgroup,
    conjugate_subgroup,
    contains,
    intersect,
    isolator,
    subgroup,
    transversal,
)

# every rank pair realized by some subgroup, and the sub-list that can
# carry an irreducible finite-weight character
ALL_RANK_PAIRS = ((0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2),
                  (2, 0), (2, 1), (2, 2), (3, 2))
FEASIBLE_RANK_PAIRS = cases.RANK_PAIRS

WHOLE_GROUP = subgroup([elt(a=1), elt(d=1), elt(f=1), elt(b=1), elt(e=1),
                        elt(c=1)])


def feasible_ranks() -> dict:
    """Census of rank pairs and the ones admitting irreducible pairs."""
    return {
        "all_signatures": [list(r) for r in ALL_RANK_PAIRS],
        "weight_feasible": [list(r) for r in FEASIBLE_RANK_PAIRS],
    }


class CaseStructureError(ValueError):
    """Subgroup has feasible ranks but sits outside the parametrized
    families (raised with the message "violates case structure")."""


@dataclass(frozen=True)
class NormalForm:
    ranks: tuple[int, int]
    params: tuple[int, ...]
    conjugator: Elt
    sub: Subgroup          # the canonical subgroup build(ranks, params)

    def to_json(self) -> dict:
        return {
            "ranks": list(self.ranks),
            "params": list(self.params),
            "conjugator": list(self.conjugator),
        }


def _same_subgroup(x: Subgroup, y: Subgroup) -> bool:
    return (x.gens1, x.gens2, x.c0) == (y.gens1, y.gens2, y.c0)


def _require_feasible(sub: Subgroup) -> tuple[int, int]:
    if sub.c0 != 1:
        raise ValueError("infeasible ranks: the subgroup does not contain "
                         "the full centre")
    r1, r2, _ = sub.rank_signature()
    if (r1, r2) not in FEASIBLE_RANK_PAIRS:
        raise ValueError(f"infeasible ranks: ({r1}, {r2}) admits no "
                         "irreducible finite-weight pair")
    return (r1, r2)


def _residues(sub: Subgroup) -> list[tuple[int, int]]:
    return [(g.b, g.e) for g in sub.gens1]


def _canonical_residues(sub: Subgroup):
    """Reduce the level-2 residues modulo conjugation and the level-2
    lattice; returns (canonical residues, conjugator element)."""
    rows1 = sub.level1_rows
    k = len(rows1)
    shift_basis: list[list[int]] = []
    for unit in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
        av, dv, fv = unit
        vec: list[int] = []
        for (va, vd, vf) in rows1:
            vec.extend([av * vd - va * dv, dv * vf - vd * fv])
        shift_basis.append(vec)
    for i in range(k):
        for row in sub.level2_rows:
            vec = [0] * (2 * k)
            vec[2 * i], vec[2 * i + 1] = row[0], row[1]
            shift_basis.append(vec)
    flat = [x for r in _residues(sub) for x in r]
    nonzero = [r for r in shift_basis if any(r)]
    if nonzero:
        hh = intlin.hnf(nonzero)
        canon, _ = intlin.row_reduce(hh, flat)
    else:
        canon = list(flat)
    delta = [x - y for x, y in zip(flat, canon)]
    if any(delta):
        coeff = intlin.solve_in_rowspace(shift_basis, delta)
        if coeff is None:
            raise AssertionError("residue reduction left its own lattice")
        g = elt(a=-coeff[0], d=-coeff[1], f=-coeff[2])
    else:
        g = IDENTITY
    canon_pairs = [(canon[2 * i], canon[2 * i + 1]) for i in range(k)]
    return canon_pairs, g


def _lattice_matches(sub: Subgroup, want_rows: list[tuple[int, int]]) -> bool:
    have = [tuple(r) for r in sub.level2_rows]
    want = [tuple(r) for r in intlin.hnf([list(r) for r in want_rows])]
    return have == want


def normal_form(sub: Subgroup) -> NormalForm:
    """Canonical parameters of a subgroup, with the conjugator realizing
    them: conjugating the input by the conjugator yields exactly the
    canonical subgroup of the returned parameters.
    """
    ranks = _require_feasible(sub)
    canon, g = _canonical_residues(sub)
    moved = conjugate_subgroup(sub, g)
    params = _match_shape(ranks, moved, canon)
    built = cases.build_subgroup(ranks, params)
    if not _same_subgroup(built, moved):
        raise AssertionError("normal form replay failed: the canonical "
                             "subgroup does not match the conjugated input")
    return NormalForm(ranks, tuple(params), g, built)


def _match_shape(ranks, moved: Subgroup, canon) -> tuple[int, ...]:
    """Read the parameter tuple off a residue-canonical subgroup; raises
    CaseStructureError when the lattice shape is not the parametrized one."""
    rows1 = [tuple(r) for r in moved.level1_rows]
    if ranks == (1, 1):
        (a, d, f), (b, e) = rows1[0], canon[0]
        if (a, f) == (0, 0):
            raise CaseStructureError(
                "violates case structure: the level-1 direction has no "
                "corner component")
        n = math.gcd(abs(a), abs(f))
        a1, f1 = a // n, f // n
        if not _lattice_matches(moved, [(a1, f1)]):
            raise CaseStructureError(
                "violates case structure: the level-2 lattice is not the "
                "primitive corner direction")
        if d == 0 and f == 0:
            return (a, 0, 0, 1, e)
        if a == 0 and d == 0:
            return (0, 0, f, b, 1)
        return (a, d, f, b, e)
    if ranks == (2, 0):
        if _pivot_cols(rows1) != (0, 2):
            raise CaseStructureError(
                "violates case structure: the level-1 pivots are not the "
                "two outer axes")
        (a, x, y), (_, q, f1) = rows1
        if x or y or q:
            raise CaseStructureError(
                "violates case structure: the two level-1 directions are "
                "not the pure outer axes")
        (b, e), (b1, e1) = canon
        return (a, b, e, f1, b1, e1)
    if ranks == (2, 1):
        if _pivot_cols(rows1) != (0, 1):
            raise CaseStructureError(
                "violates case structure: the level-1 lattice does not "
                "have the two leading axes as pivots")
        (a, x, y), (_, d1, z) = rows1
        if x or y or z:
            raise CaseStructureError(
                "violates case structure: the level-1 rows are not the "
                "pure leading axes")
        if not _lattice_matches(moved, [(1, 0)]):
            raise CaseStructureError(
                "violates case structure: the level-2 lattice is not the "
                "first coordinate axis")
        (_, e), (_, e1) = canon
        return (a, e, d1, e1)
    if ranks == (1, 2):
        (a, d, f) = rows1[0]
        l2 = moved.level2_rows
        if l2[0][1] != 0:
            raise CaseStructureError(
                "violates case structure: the level-2 lattice is not "
                "split along the coordinate axes")
        b1, e1 = l2[0][0], l2[1][1]
        (b, e) = canon[0]
        return (a, d, f, b, e, b1, e1)
    if ranks == (2, 2):
        l2 = moved.level2_rows
        if l2[0][1] != 0:
            raise CaseStructureError(
                "violates case structure: the level-2 lattice is not "
                "split along the coordinate axes")
        b2, e2 = l2[0][0], l2[1][1]
        piv = _pivot_cols(rows1)
        if piv == (0, 1):
            (a, x, f), (_, d1, f1) = rows1
            if x:
                raise CaseStructureError(
                    "violates case structure: the leading level-1 row has "
                    "a diagonal-gap component")
            (b, e), (b1, e1) = canon
            return (a, f, b, e, d1, f1, b1, e1, b2, e2)
        if piv == (0, 2):
            (a, x, y), (_, _, f1) = rows1
            if x or y:
                raise CaseStructureError(
                    "violates case structure: the leading level-1 row is "
                    "not a pure axis")
            (b, e), (b1, e1) = canon
            return (a, 0, b, e, 0, f1, b1, e1, b2, e2)
        if piv == (1, 2):
            (_, d1, z), (_, _, f) = rows1
            if z:
                raise CaseStructureError(
                    "violates case structure: the middle level-1 row has "
                    "a trailing component")
            (b1, e1), (b, e) = canon
            return (0, f, b, e, d1, 0, b1, e1, b2, e2)
        raise CaseStructureError(
            "violates case structure: unrecognized level-1 pivot pattern")
    # (3, 2)
    l2 = moved.level2_rows
    if l2[0][1] != 0:
        raise CaseStructureError(
            "violates case structure: the level-2 lattice is not split "
            "along the coordinate axes")
    b3, e3 = l2[0][0], l2[1][1]
    (a, x, y), (_, d1, z), (_, _, f2) = rows1
    if x or y or z:
        raise CaseStructureError(
            "violates case structure: the level-1 lattice is not "
            "diagonal")
    (b, e), (b1, e1), (b2, e2) = canon
    return (a, b, e, d1, b1, e1, f2, b2, e2, b3, e3)


def _pivot_cols(rows) -> tuple[int, ...]:
    cols = []
    for r in rows:
        for j, x in enumerate(r):
            if x:
                cols.append(j)
                break
    return tuple(cols)


def param_set_of(sub_or_ranks, params=None) -> str:
    """Admissible subset of a subgroup, a precomputed normal form, or an
    explicit (ranks, params) pair; raises NoSubsetError naming the
    violated clause."""
    if params is not None:
        return cases.subset_of(tuple(sub_or_ranks), tuple(params))
    nf = (sub_or_ranks if isinstance(sub_or_ranks, NormalForm)
          else normal_form(sub_or_ranks))
    return cases.subset_of(nf.ranks, nf.params)


def transport_character(nf: NormalForm, chi: Character) -> Character:
    """Move a character on the original subgroup to the canonical one."""
    moved = conjugate_character(chi, inverse(nf.conjugator))
    if not _same_subgroup(moved.sub, nf.sub):
        raise AssertionError("character transport missed the canonical "
                             "subgroup")
    return character(nf.sub, moved.vals1, moved.vals2, moved.val_c)


@dataclass(frozen=True)
class ClassificationResult:
    ranks: tuple[int, int]
    subset: str | None
    params: tuple[int, ...]
    conjugator: Elt
    irreducible: bool
    certificate: dict = field(compare=False)

    def to_json(self) -> dict:
        return {
            "ranks": list(self.ranks),
            "subset": self.subset,
            "params": list(self.params),
            "conjugator": list(self.conjugator),
            "irreducible": self.irreducible,
            "certificate": self.certificate,
        }


def is_irreducible(sub: Subgroup, chi: Character) -> ClassificationResult:
    """Decide irreducibility of the induced representation of a pair."""
    nf = normal_form(sub)
    try:
        subset = cases.subset_of(nf.ranks, nf.params)
    except NoSubsetError as err:
        return ClassificationResult(
            nf.ranks, None, nf.params, nf.conjugator, False,
            {"reason": str(err)})
    chi2 = transport_character(nf, chi)
    cert: dict = {"values": {k: str(v) for k, v in
                             cases.case_values(nf.ranks, nf.params, chi2).items()}}
    if nf.ranks == (3, 2):
        ok, conds = _scan_32(nf, chi2)
        cert["minimality_conditions"] = cases.validity(
            nf.ranks, subset, nf.params, chi2)[1]
        cert["double_coset_scan"] = conds
    else:
        ok, conds = cases.validity(nf.ranks, subset, nf.params, chi2)
        cert["conditions"] = conds
    return ClassificationResult(nf.ranks, subset, nf.params, nf.conjugator,
                                bool(ok), cert)


def _scan_32(nf: NormalForm, chi: Character):
    """Exact double-coset agreement scan for the finite-index case."""
    sub = nf.sub
    a, b, e, d1, b1, e1, f2, b2, e2, b3, e3 = nf.params
    index = abs(a * d1 * f2 * b3 * e3)
    reps = transversal(sub, WHOLE_GROUP)
    agreeing = 0
    witness = None
    for t in reps:
        if contains(sub, t):
            continue
        dom = intersect(sub, conjugate_subgroup(sub, inverse(t)))
        if all((evaluate(chi, x) / evaluate(chi, conjugate(x, t))).is_one
               for x in dom.generators()):
            agreeing += 1
            if witness is None:
                witness = t
    ok = agreeing == 0
    conds = {"index": index, "cosets_checked": len(reps),
             "agreeing_nontrivial_cosets": agreeing}
    if witness is not None:
        conds["agreement_witness"] = list(witness)
    return ok, conds


def stratum(sub: Subgroup, chi: Character) -> StratumResult:
    """The unique stratum row carrying an irreducible pair."""
    res = is_irreducible(sub, chi)
    if not res.irreducible:
        raise ValueError("the pair is not irreducible; strata parametrize "
                         "irreducible pairs only")
    nf = normal_form(sub)
    chi2 = transport_character(nf, chi)
    v = cases.case_values(nf.ranks, nf.params, chi2)
    rows = cases.strata_table(nf.ranks, res.subset, nf.params, v)
    matched = [r for r, m in rows if m]
    if len(matched) != 1:
        raise RuntimeError(
            f"no matching row: internal inconsistency, {len(matched)} rows "
            "matched an irreducible pair")
    return StratumResult(nf.ranks, res.subset, nf.params, matched[0],
                         len(rows))


@dataclass(frozen=True)
class StratumResult:
    ranks: tuple[int, int]
    subset: str
    params: tuple[int, ...]
    row: cases.StratumRow
    table_size: int

    def to_json(self) -> dict:
        out = self.row.to_json()
        out.update({"ranks": list(self.ranks), "subset": self.subset,
                    "params": list(self.params),
                    "table_size": self.table_size})
        return out


def normalizer_action(sub: Subgroup, chi: Character) -> dict:
    """Normalizer generators of the canonical subgroup with the values of
    the conjugated character on the defining generators; tabulated closed
    forms are cross-checked against the first-principles computation."""
    nf = normal_form(sub)
    subset = cases.subset_of(nf.ranks, nf.params)
    chi2 = transport_character(nf, chi)
    v = cases.case_values(nf.ranks, nf.params, chi2)
    gens = cases.defining_generators(nf.ranks, nf.params)
    out = {"ranks": list(nf.ranks), "subset": subset,
           "params": list(nf.params), "generators": []}
    for gi, g in enumerate(cases.normalizer_generators(nf.ranks, subset,
                                                       nf.params)):
        cc = conjugate_character(chi2, g)
        computed = [evaluate(cc, h) for h in gens]
        rec = {"generator": list(g),
               "values": {name: str(x) for name, x in
                          zip(cases.COORD_NAMES[nf.ranks], computed)}}
        tab = cases.tabulated_action(nf.ranks, subset, nf.params, gi, v)
        if tab is not None:
            agree = all((x / y).is_one for x, y in zip(computed, tab))
            if not agree:
                raise RuntimeError(
                    "internal inconsistency: tabulated normalizer action "
                    "disagrees with the computed conjugation")
            rec["tabulated"] = True
        variant = cases.printed_action_variant(nf.ranks, subset, nf.params,
                                               gi, v)
        if variant is not None:
            note, vals = variant
            rec["displayed_variant"] = {
                "note": note,
                "matches_computed": all((x / y).is_one
                                        for x, y in zip(computed, vals)),
            }
        out["generators"].append(rec)
    return out


# ---------------------------------------------------------------------------
# conjugacy of pairs


def _solve_power(x: UnitValue, y: UnitValue):
    """Exact solve of x == y**n over the integers; None when no n works."""
    from fractions import Fraction
    if y.is_one:
        return 0 if x.is_one else None
    ymap = dict(y.exps)
    xmap = dict(x.exps)
    n = None
    for sym, ey in y.exps:
        if ey == 0:
            continue
        cand = xmap.get(sym, Fraction(0)) / ey
        if cand.denominator != 1:
            return None
        if n is not None and cand != n:
            return None
        n = cand
    if any(ex and sym not in ymap for sym, ex in x.exps):
        return None
    if n is not None:
        n = int(n)
        return n if (x / y ** n).is_one else None
    # y is pure torsion; scan one period
    m = y.value_order()
    if m is None:
        return None
    for k in range(m):
        if (x / y ** k).is_one:
            return k
    return None


def _normalizer_level1_lattice(sub: Subgroup) -> list[tuple[int, int, int]]:
    """Basis of the (a, d, f)-lattice of elements normalizing the subgroup.

    An element normalizes exactly when conjugation shifts every level-1
    generator's coset tail into the level-2 lattice; that is a linear
    condition on its level-1 coordinates, and the tail coordinates are
    free.
    """
    rows1 = sub.level1_rows
    k = len(rows1)
    stacked: list[list[int]] = []
    for av, dv, fv in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
        vec: list[int] = []
        for (va, vd, vf) in rows1:
            vec.extend([av * vd - va * dv, dv * vf - vd * fv])
        stacked.append(vec)
    for i in range(k):
        for row in sub.level2_rows:
            vec = [0] * (2 * k)
            vec[2 * i], vec[2 * i + 1] = row[0], row[1]
            stacked.append(vec)
    proj = [kr[:3] for kr in intlin.left_kernel(stacked)]
    return [tuple(r) for r in intlin.hnf(proj)]


def _values_of(ranks, params, chi: Character) -> dict:
    gens = cases.defining_generators(ranks, params)
    out = {name: evaluate(chi, h)
           for name, h in zip(cases.COORD_NAMES[ranks], gens)}
    out["lambda"] = evaluate(chi, elt(c=1))
    return out


def _monomial_solve(factors: list[dict], target: dict):
    """Integer exponents x with prod(factors[i]**x[i]) == target, slotwise.

    factors[i] maps slot name to a UnitValue; target likewise.  Exact over
    the value group: symbol exponents give linear equations, torsion parts
    give one congruence per slot.  Returns the exponent list or None.
    """
    from fractions import Fraction
    slots = sorted(target)
    syms: list = []
    for fac in factors + [target]:
        for val in fac.values():
            for s, _ in val.exps:
                if s not in syms:
                    syms.append(s)
    denoms = [1]
    for fac in factors + [target]:
        for val in fac.values():
            denoms.append(val.torsion.denominator)
            denoms.extend(e.denominator for _, e in val.exps)
    scale = 1
    for d in denoms:
        scale = scale * d // math.gcd(scale, d)
    ncols = len(slots) * (len(syms) + 1)

    def encode(fac: dict) -> list[int]:
        row = []
        for name in slots:
            val = fac.get(name, ONE)
            em = dict(val.exps)
            row.extend(int(scale * em.get(s, Fraction(0))) for s in syms)
            row.append(int(scale * val.torsion))
        return row

    rows = [encode(f) for f in factors]
    for j, name in enumerate(slots):
        aux = [0] * ncols
        aux[j * (len(syms) + 1) + len(syms)] = scale
        rows.append(aux)
    sol = intlin.solve_in_rowspace(rows, encode(target))
    if sol is None:
        return None
    return list(sol[:len(factors)])


def equivalent(sub1: Subgroup, chi1: Character, sub2: Subgroup,
               chi2: Character, radius: int = 5) -> dict:
    """Conjugacy test for two pairs.

    status is "equivalent" (with a certificate conjugator) or "not
    equivalent (proved)" (an exact invariant or the exact normalizer-orbit
    solve separates the pairs).  The solve over the full normalizer is
    exact, so the reserved bounded-search status "not equivalent within
    radius" does not occur; radius is accepted for interface stability.
    """
    del radius
    nf1, nf2 = normal_form(sub1), normal_form(sub2)
    if nf1.ranks != nf2.ranks:
        return {"status": "not equivalent (proved)",
                "invariant": "rank signatures differ"}
    if nf1.params != nf2.params:
        return {"status": "not equivalent (proved)",
                "invariant": "canonical parameters differ"}
    ranks, params = nf1.ranks, nf1.params
    K = nf1.sub
    v1 = cases.case_values(ranks, params, transport_character(nf1, chi1))
    v2 = cases.case_values(ranks, params, transport_character(nf2, chi2))
    if not (v1["lambda"] / v2["lambda"]).is_one:
        return {"status": "not equivalent (proved)",
                "invariant": "central values differ"}
    lam = v1["lambda"]
    names = cases.COORD_NAMES[ranks]
    level2_names = [n for n in names if n in ("z", "w")]
    level1_names = [n for n in names if n not in ("z", "w")]
    basis = _normalizer_level1_lattice(K)

    # phase 1: conjugation multiplies a level-2 generator's value by the
    # central value raised to the pairing exponent, so the level-2 ratios
    # must be central powers hit by the pairing map on the normalizer
    deltas = []
    for name, s in zip(names, cases.defining_generators(ranks, params)):
        if name in ("z", "w"):
            n = _solve_power(v1[name] / v2[name], lam)
            if n is None:
                return {"status": "not equivalent (proved)",
                        "invariant": f"the {name} values do not differ by "
                        "a power of the central value"}
            deltas.append((n, s))
    pairing_rows = [[u[0] * s.e - u[2] * s.b for _, s in deltas]
                    for u in basis]
    torsion_order = lam.value_order()
    aug = list(pairing_rows)
    if torsion_order is not None:
        for j in range(len(deltas)):
            unit = [0] * len(deltas)
            unit[j] = torsion_order
            aug.append(unit)
    if deltas:
        coeff = intlin.solve_in_rowspace(aug, [n for n, _ in deltas])
        if coeff is None:
            return {"status": "not equivalent (proved)",
                    "invariant": "the level-2 value ratios are outside the "
                    "pairing image of the normalizer"}
        uvec = [0, 0, 0]
        for c, u in zip(coeff[:len(basis)], basis):
            uvec = [x + c * y for x, y in zip(uvec, u)]
        u_a = elt(a=uvec[0], d=uvec[1], f=uvec[2])
    else:
        u_a = IDENTITY
    chi_mid = conjugate_character(
        cases.character_from_values(ranks, params, v2), u_a)
    v2m = _values_of(ranks, params, chi_mid)
    for name in level2_names:
        if not (v2m[name] / v1[name]).is_one:
            raise RuntimeError("internal inconsistency: the pairing solve "
                               "did not align the level-2 values")

    # phase 2: normalizer elements with trivial pairing form a group whose
    # action on the level-1 values is by fixed multipliers, so membership
    # is an exact monomial solve over the generator multipliers
    if deltas:
        kernel = [kr[:len(basis)] for kr in intlin.left_kernel(aug)]
    else:
        kernel = [tuple(1 if i == j else 0 for j in range(len(basis)))
                  for i in range(len(basis))]
    gens_b = []
    for kv in intlin.hnf(kernel):
        uvec = [0, 0, 0]
        for c, u in zip(kv, basis):
            uvec = [x + c * y for x, y in zip(uvec, u)]
        if any(uvec):
            gens_b.append(elt(a=uvec[0], d=uvec[1], f=uvec[2]))
    gens_b.extend([elt(b=1), elt(e=1)])
    chi_m = cases.character_from_values(ranks, params, v2m)
    defining = cases.defining_generators(ranks, params)
    factors = []
    for g in gens_b:
        cc = conjugate_character(chi_m, g)
        fac = {}
        for name, h in zip(names, defining):
            ratio = evaluate(cc, h) / v2m[name]
            if name in ("z", "w"):
                if not ratio.is_one:
                    raise RuntimeError("internal inconsistency: a trivial-"
                                       "pairing move shifted a level-2 value")
            else:
                fac[name] = ratio
        factors.append(fac)
    target = {name: v1[name] / v2m[name] for name in level1_names}
    exps = _monomial_solve(factors, target)
    if exps is None:
        return {"status": "not equivalent (proved)",
                "invariant": "the level-1 value ratios are outside the "
                "multiplier image of the normalizer"}
    u_b = IDENTITY
    for g, n in zip(gens_b, exps):
        u_b = compose(u_b, power(g, n))
    w = compose(u_a, u_b)
    total = compose(inverse(nf2.conjugator), compose(w, nf1.conjugator))
    moved = conjugate_subgroup(sub1, total)
    if not _same_subgroup(moved, sub2):
        raise RuntimeError("internal inconsistency: certificate conjugator "
                           "fails to move the first subgroup onto the second")
    cc = conjugate_character(chi1, inverse(total))
    if not all((evaluate(cc, h) / evaluate(chi2, h)).is_one
               for h in sub2.generators()):
        raise RuntimeError("internal inconsistency: certificate conjugator "
                           "fails to transport the character")
    return {"status": "equivalent", "conjugator": list(total)}


# ---------------------------------------------------------------------------
# finite companion moves


def f_equivalents(sub: Subgroup, chi: Character, limit: int = 20) -> dict:
    """Root/residue replacement companions of a pair.

    The companion relation is reconstructed from worked instances rather
    than a standalone definition, so every output is flagged accordingly;
    cases without such instances return an empty list.
    """
    nf = normal_form(sub)
    subset = cases.subset_of(nf.ranks, nf.params)
    out = {"flag": "F-equivalence (inferred definition)", "companions": []}
    if nf.ranks in ((1, 1), (2, 0)) or (nf.ranks, subset) == ((1, 2), "A"):
        return out
    chi0 = transport_character(nf, chi)
    vals = cases.case_values(nf.ranks, nf.params, chi0)
    iso0 = isolator(nf.sub)
    for p2, vals2, note in cases.f_move_candidates(nf.ranks, subset,
                                                   nf.params, vals):
        if len(out["companions"]) >= limit:
            break
        try:
            ss2 = cases.subset_of(nf.ranks, p2)
        except NoSubsetError:
            continue
        try:
            chi2 = cases.character_from_values(nf.ranks, p2, vals2)
        except (ValueError, AssertionError):
            continue
        if not chi2.is_valid():
            continue
        sub2 = chi2.sub
        if not _same_subgroup(isolator(sub2), iso0):
            continue
        ok2 = cases.validity(nf.ranks, ss2, p2, chi2)[0]
        if ok2 is None:
            ok2 = _scan_32(NormalForm(nf.ranks, p2, IDENTITY, sub2), chi2)[0]
        if not ok2:
            continue
        meet = intersect(nf.sub, sub2)
        if not all((evaluate(chi0, x) / evaluate(chi2, x)).is_one
                   for x in meet.generators()):
            continue
        out["companions"].append({
            "params": list(p2),
            "subset": ss2,
            "values": {k: str(x) for k, x in vals2.items()},
            "note": note,
        })
    return out


def is_isolated(sub: Subgroup) -> bool:
    """Whether the subgroup equals its own isolator."""
    return _same_subgroup(isolator(sub), sub)
