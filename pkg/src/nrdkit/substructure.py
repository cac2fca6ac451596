"""Projection-compact substructure maps between conditional predicates.

A certificate is a map sigma from the ambient tuples of a source pair
P1 | Q1 into the ambient tuples of a target pair P2 | Q2 such that

  (1) sigma preserves membership: P1 -> P2 and Q1 \\ P1 -> Q2 \\ P2;
  (2) output coordinate j depends only on the source coordinates in I_j,
      for a declared index family (I_1, ..., I_r2).

Existence for a fixed family is decided two independent ways: a direct
backtracking search over per-class coordinate values, and a CNF encoding
handed to the bundled SAT solver.  search_families runs the direct search
as a fast prefilter and confirms every hit through the SAT route.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from itertools import combinations, product

from .predicates import ConditionalPredicate, IndexFamily, PredicateError
from .sat import CnfFormula, solve


class SubstructureError(ValueError):
    pass


@dataclass
class SubstructureCertificate:
    source: ConditionalPredicate
    target: ConditionalPredicate
    family: IndexFamily
    sigma: dict  # source ambient tuple -> target ambient tuple

    def to_dict(self):
        return {"source": self.source.to_dict(),
                "target": self.target.to_dict(),
                "family": self.family.to_list(),
                "sigma": [[list(k), list(v)] for k, v in sorted(self.sigma.items())]}

    @classmethod
    def from_dict(cls, d):
        src = ConditionalPredicate.from_dict(d["source"])
        tgt = ConditionalPredicate.from_dict(d["target"])
        fam = IndexFamily.from_list(src.arity, d["family"])
        sigma = {tuple(k): tuple(v) for k, v in d["sigma"]}
        return cls(src, tgt, fam, sigma)

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, s):
        return cls.from_dict(json.loads(s))


def verify_certificate(cert: SubstructureCertificate):
    """Check conditions (1) and (2) directly; returns (ok, problems)."""
    src, tgt, fam = cert.source, cert.target, cert.family
    problems = []
    if fam.source_arity != src.arity:
        problems.append("index family arity does not match source")
    if len(fam.sets) != tgt.arity:
        problems.append("index family length does not match target arity")
    q1 = list(src.ambient.tuples)
    if set(cert.sigma) != set(q1):
        problems.append("sigma must be defined on exactly the source ambient tuples")
        return False, problems
    p1 = set(src.base.tuples)
    p2 = set(tgt.base.tuples)
    q2 = set(tgt.ambient.tuples)
    for q in q1:
        t = cert.sigma[q]
        if t not in q2:
            problems.append(f"sigma({q}) = {t} outside the target ambient")
        elif (q in p1) != (t in p2):
            problems.append(f"sigma({q}) = {t} breaks membership preservation")
    for j, I in enumerate(fam.sets):
        idx = [i - 1 for i in I]
        by_class = {}
        for q in q1:
            key = tuple(q[i] for i in idx)
            val = cert.sigma[q][j]
            if by_class.setdefault(key, val) != val:
                problems.append(
                    f"output coordinate {j + 1} depends on more than I_{j + 1}")
                break
    return not problems, problems


def _determines(q1, sigma, j, I):
    """Does the projection to I determine output coordinate j of sigma?"""
    idx = [i - 1 for i in I]
    seen = {}
    for q in q1:
        key = tuple(q[i] for i in idx)
        val = sigma[q][j]
        if seen.setdefault(key, val) != val:
            return False
    return True


def dependency_analysis(cert: SubstructureCertificate):
    """All minimal input-coordinate subsets each output factors through.

    Returns one list per output coordinate; a subset I is minimal when the
    projection to I determines sigma's j-th output but no proper subset does.
    Note that on a restricted ambient domain a coordinate can admit several
    incomparable minimal subsets.
    """
    src = cert.source
    r1 = src.arity
    q1 = list(src.ambient.tuples)
    subsets = [()] + [s for k in range(1, r1 + 1)
                      for s in combinations(range(1, r1 + 1), k)]
    out = []
    for j in range(cert.target.arity):
        good = {I for I in subsets if _determines(q1, cert.sigma, j, I)}
        minimal = [I for I in good
                   if not any(tuple(s for s in I if s != i) in good for i in I)]
        out.append(sorted(minimal, key=lambda I: (len(I), I)))
    return out


def family_supports(deps, family: IndexFamily) -> bool:
    """Does each declared index set contain a minimal determining subset?"""
    return all(any(set(m) <= set(I) for m in mins)
               for mins, I in zip(deps, family.sets))


# --- CNF encoding -----------------------------------------------------


def encode(source: ConditionalPredicate, target: ConditionalPredicate,
           family: IndexFamily):
    """CNF whose models are exactly the valid sigma maps for this family.

    Variables: x[q,j,d] "output coordinate j of sigma(q) is d", and
    y[q,t] "sigma(q) = t" for target ambient tuples t.
    """
    if family.source_arity != source.arity or len(family.sets) != target.arity:
        raise SubstructureError("family shape does not fit source/target")
    q1 = list(source.ambient.tuples)
    t2 = list(target.ambient.tuples)
    p1 = set(source.base.tuples)
    p2 = set(target.base.tuples)
    r2, d2 = target.arity, target.domain_size
    f = CnfFormula()
    x = {}
    for q in q1:
        for j in range(r2):
            for d in range(d2):
                x[q, j, d] = f.new_var(f"x q={q} j={j + 1} d={d}")
    y = {}
    for q in q1:
        for t in t2:
            y[q, t] = f.new_var(f"y q={q} t={t}")
    # exactly one value per output coordinate
    for q in q1:
        for j in range(r2):
            f.add_clause([x[q, j, d] for d in range(d2)])
            for d, e in combinations(range(d2), 2):
                f.add_clause([-x[q, j, d], -x[q, j, e]])
    # coordinate j may only read the source coordinates in I_j
    for j, I in enumerate(family.sets):
        idx = [i - 1 for i in I]
        classes = {}
        for q in q1:
            classes.setdefault(tuple(q[i] for i in idx), []).append(q)
        for members in classes.values():
            rep = members[0]
            for q in members[1:]:
                for d in range(d2):
                    f.add_clause([-x[rep, j, d], x[q, j, d]])
                    f.add_clause([x[rep, j, d], -x[q, j, d]])
    # y[q,t] pins the output tuple, and membership must be preserved
    for q in q1:
        for t in t2:
            if (q in p1) != (t in p2):
                f.add_clause([-y[q, t]])
                continue
            for j in range(r2):
                f.add_clause([-y[q, t], x[q, j, t[j]]])
        f.add_clause([y[q, t] for t in t2])
    return f, x, y


def decode(model, source: ConditionalPredicate, target: ConditionalPredicate,
           family: IndexFamily, y) -> SubstructureCertificate:
    sigma = {}
    for q in source.ambient.tuples:
        chosen = [t for t in target.ambient.tuples if model[y[q, t]]]
        if len(chosen) != 1:
            raise SubstructureError(f"model selects {len(chosen)} images for {q}")
        sigma[q] = chosen[0]
    return SubstructureCertificate(source, target, family, sigma)


def find_substructure(source: ConditionalPredicate, target: ConditionalPredicate,
                      family: IndexFamily, conflict_budget=None):
    """SAT route: encode, solve, decode, verify.  None when no map exists."""
    f, _, y = encode(source, target, family)
    model = solve(f, conflict_budget)
    if model is None:
        return None
    cert = decode(model, source, target, family, y)
    ok, problems = verify_certificate(cert)
    if not ok:
        raise SubstructureError(f"decoded certificate failed verification: {problems}")
    return cert


# --- direct search ----------------------------------------------------


def direct_search(source: ConditionalPredicate, target: ConditionalPredicate,
                  family: IndexFamily):
    """Backtracking over images sigma(q), propagating per-class coordinate
    values through tuple bitmasks.  Complete for the given family."""
    q1 = list(source.ambient.tuples)
    t2 = list(target.ambient.tuples)
    p1 = set(source.base.tuples)
    p2 = set(target.base.tuples)
    r2 = target.arity
    full = (1 << len(t2)) - 1
    # mask of target tuples with coordinate j equal to d
    coord_mask = [{} for _ in range(r2)]
    for ti, t in enumerate(t2):
        for j in range(r2):
            coord_mask[j][t[j]] = coord_mask[j].get(t[j], 0) | (1 << ti)
    member_mask = {True: 0, False: 0}
    for ti, t in enumerate(t2):
        member_mask[t in p2] |= 1 << ti
    cls = []  # per q: tuple of class ids, one per output coordinate
    class_ids = [{} for _ in range(r2)]
    for q in q1:
        row = []
        for j, I in enumerate(family.sets):
            key = tuple(q[i - 1] for i in I)
            row.append(class_ids[j].setdefault(key, len(class_ids[j])))
        cls.append(tuple(row))
    peers = [[[] for _ in range(len(class_ids[j]))] for j in range(r2)]
    for qi, row in enumerate(cls):
        for j, c in enumerate(row):
            peers[j][c].append(qi)

    masks = [member_mask[q in p1] for q in q1]
    if any(m == 0 for m in masks):
        return None
    values = [[None] * len(class_ids[j]) for j in range(r2)]
    assigned = [None] * len(q1)

    def pick():
        best, best_n = -1, None
        for qi, m in enumerate(masks):
            if assigned[qi] is None:
                n = m.bit_count()
                if best_n is None or n < best_n:
                    best, best_n = qi, n
        return best

    def backtrack(done):
        if done == len(q1):
            return True
        qi = pick()
        m = masks[qi]
        while m:
            low = m & -m
            m ^= low
            ti = low.bit_length() - 1
            t = t2[ti]
            undo = []
            ok = True
            assigned[qi] = t
            for j in range(r2):
                c = cls[qi][j]
                if values[j][c] is None:
                    values[j][c] = t[j]
                    undo.append((j, c))
                    cm = coord_mask[j][t[j]]
                    for pj in peers[j][c]:
                        new = masks[pj] & cm
                        if new != masks[pj]:
                            undo.append((pj, masks[pj], None))
                            masks[pj] = new
                            if new == 0 and assigned[pj] is None:
                                ok = False
                                break
                    if not ok:
                        break
            if ok and backtrack(done + 1):
                return True
            assigned[qi] = None
            for u in reversed(undo):
                if len(u) == 2:
                    values[u[0]][u[1]] = None
                else:
                    masks[u[0]] = u[1]
        return False

    if backtrack(0):
        sigma = {q: assigned[qi] for qi, q in enumerate(q1)}
        return SubstructureCertificate(source, target, family, sigma)
    return None


@dataclass
class FamilySearchResult:
    certificates: list
    families_tried: int
    exhausted: bool


def search_families(source: ConditionalPredicate, target: ConditionalPredicate,
                    sizes=None, max_results=1, max_families=None,
                    time_budget=None, confirm_with_sat=True):
    """Enumerate index families and report those admitting a substructure map.

    Families are products of subsets of the source coordinates, one subset
    per target coordinate.  With sizes=(s_1, ..., s_r2) only subsets of those
    exact sizes are tried; by default, uniform-size strata are scanned from
    largest proper size downwards, then all mixed-size families.  The direct
    backtracking search filters each family; positives are re-derived through
    the SAT encoding before being reported.
    """
    r1, r2 = source.arity, target.arity
    subsets = [()] + [s for k in range(1, r1 + 1)
                      for s in combinations(range(1, r1 + 1), k)]
    by_size = {}
    for s in subsets:
        by_size.setdefault(len(s), []).append(s)

    def families():
        if sizes is not None:
            if len(sizes) != r2:
                raise SubstructureError("sizes must give one entry per target coordinate")
            yield from product(*(by_size.get(s, []) for s in sizes))
            return
        for s in range(r1 - 1, -1, -1):
            yield from product(by_size[s], repeat=r2)
        for fam in product(subsets, repeat=r2):
            if len(set(len(I) for I in fam)) > 1:
                yield fam

    start = time.monotonic()
    found = []
    tried = 0
    exhausted = True
    for sets in families():
        if max_families is not None and tried >= max_families:
            exhausted = False
            break
        if time_budget is not None and time.monotonic() - start > time_budget:
            exhausted = False
            break
        tried += 1
        fam = IndexFamily(r1, sets)
        cert = direct_search(source, target, fam)
        if cert is None:
            continue
        if confirm_with_sat:
            sat_cert = find_substructure(source, target, fam)
            if sat_cert is None:
                raise SubstructureError(
                    f"direct search and SAT disagree on family {fam.to_list()}")
            cert = sat_cert
        ok, problems = verify_certificate(cert)
        if not ok:
            raise SubstructureError(f"search produced a bad certificate: {problems}")
        found.append(cert)
        if len(found) >= max_results:
            exhausted = False
            break
    return FamilySearchResult(found, tried, exhausted)
