"""Adjoint trace invariants and the quartic trace-identity classification.

Provides exact quartic traces Tr(ad ad ad ad), the identities they satisfy
(dual-basis contraction, dihedral symmetry, the commutator trace relation,
and the polarized quartic identity), and the resulting classification of
simple algebras where Tr(ad_a^4) is proportional to Tr(ad_a^2)^2 for all a.

For classical types the quartic trace is also checked against the defining
representation: Tr(ad_a^4) = c4 * Tr(a^4) + c22 * (Tr(a^2))^2 with exact
series-dependent coefficients.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .liealg import Element, LieAlgebra, UsageError, simple_lie_algebra
from .report import Report


class SamplingError(RuntimeError):
    """All sampled elements were degenerate; signals a bug, not bad luck."""


# admissible types for the quartic proportionality identity
ADMISSIBLE = {("A", 1), ("A", 2), ("D", 4), ("E", 6), ("E", 7), ("E", 8),
              ("F", 4), ("G", 2)}


def expected_alpha(dim: int) -> Fraction:
    """5 / (2 (2 + dim)), the proportionality constant on admissible types."""
    return Fraction(5, 2 * (2 + dim))


# --- exact matrix helpers (lists of rows, int or Fraction entries) ----------

def mat_mul(a: List[List], b: List[List]) -> List[List]:
    n = len(b[0])
    out = []
    for row in a:
        acc = [0] * n
        for k, v in enumerate(row):
            if v:
                bk = b[k]
                acc = [x + v * y for x, y in zip(acc, bk)]
        out.append(acc)
    return out


def mat_sub(a: List[List], b: List[List]) -> List[List]:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_comm(a: List[List], b: List[List]) -> List[List]:
    return mat_sub(mat_mul(a, b), mat_mul(b, a))


def trace_mul(a: List[List], b: List[List]):
    """Tr(a b) without forming the product."""
    total = 0
    for i, row in enumerate(a):
        total += sum(v * b[k][i] for k, v in enumerate(row) if v)
    return total


def trace(a: List[List]):
    return sum(a[i][i] for i in range(len(a)))


# --- quartic traces ----------------------------------------------------------

DIHEDRAL = (
    (0, 1, 2, 3), (1, 2, 3, 0), (2, 3, 0, 1), (3, 0, 1, 2),
    (0, 3, 2, 1), (3, 2, 1, 0), (2, 1, 0, 3), (1, 0, 3, 2),
)


def quartic_trace(L: LieAlgebra, a: Element, b: Element, c: Element, d: Element):
    """Tr(ad_a ad_b ad_c ad_d), exact and multilinear."""
    m1 = mat_mul(L.ad_matrix(a), L.ad_matrix(b))
    m2 = mat_mul(L.ad_matrix(c), L.ad_matrix(d))
    return trace_mul(m1, m2)


class QuarticForm:
    """Cache of quartic traces on basis 4-tuples.

    Keys are canonicalized with the dihedral symmetry (cyclic rotations and
    reversal leave the trace invariant), so at most one of the 8 equivalent
    tuples is ever computed.
    """

    def __init__(self, algebra: LieAlgebra):
        self.algebra = algebra
        self._ad = [algebra.ad_matrix(algebra.basis_element(i))
                    for i in range(algebra.dim)]
        self.cache: Dict[Tuple[int, int, int, int], object] = {}

    def basis_trace(self, i: int, j: int, k: int, l: int):
        key = min(tuple((i, j, k, l)[p] for p in perm) for perm in DIHEDRAL)
        if key not in self.cache:
            p, q, r, s = key
            m1 = mat_mul(self._ad[p], self._ad[q])
            m2 = mat_mul(self._ad[r], self._ad[s])
            self.cache[key] = trace_mul(m1, m2)
        return self.cache[key]


# --- identity checks ---------------------------------------------------------

def _as_list(x) -> list:
    return list(x)


def check_contract_identity(L: LieAlgebra, a: Element, b: Element,
                            c: Element) -> Report:
    """Dual-basis contraction: sum_i [[c,[b,e_i]],[a,e^i]] against the
    quartic-trace expansion -sum_i Tr(ad_a ad_b ad_c ad_{e_i}) e^i."""
    n = L.dim
    lhs = [0] * n
    for i in range(n):
        t = L.bracket(c, L.bracket(b, L.basis_element(i)))
        u = L.bracket(a, L.dual_element(i))
        for k, v in enumerate(L.bracket(t, u)):
            lhs[k] += v
    m = mat_mul(mat_mul(L.ad_matrix(a), L.ad_matrix(b)), L.ad_matrix(c))
    rhs = [0] * n
    for i in range(n):
        tr = 0
        for (col, row, coeff) in L.ad_entries[i]:
            tr += m[col][row] * coeff
        if tr:
            dual = L.dual_element(i)
            for k, v in enumerate(dual):
                if v:
                    rhs[k] -= tr * v
    ok = all(x == y for x, y in zip(lhs, rhs))
    ce = None if ok else {"lhs": [str(x) for x in lhs], "rhs": [str(x) for x in rhs]}
    return Report(check="contract_identity", algebra=L.name, passed=ok,
                  first_counterexample=ce)


def check_dihedral(L: LieAlgebra, a1: Element, a2: Element, a3: Element,
                   a4: Element) -> Report:
    tup = (a1, a2, a3, a4)
    base = quartic_trace(L, *tup)
    for perm in DIHEDRAL[1:]:
        val = quartic_trace(L, *(tup[p] for p in perm))
        if val != base:
            return Report(check="dihedral_symmetry", algebra=L.name, passed=False,
                          first_counterexample={"perm": perm, "base": str(base),
                                                "value": str(val)})
    return Report(check="dihedral_symmetry", algebra=L.name, passed=True)


def check_commutator_identity(L: LieAlgebra, a: Element, b: Element,
                              c: Element, d: Element) -> Report:
    """2 Tr([A,D][B,C]) + Tr([A,B][C,D]) against the quartic combination
    4(Tr(ABCD)+Tr(ACDB)+Tr(ADBC)) - 6(Tr(ABCD)+Tr(BACD)), A = ad_a etc."""
    A, B, C, D = (L.ad_matrix(x) for x in (a, b, c, d))
    lhs = 2 * trace_mul(mat_comm(A, D), mat_comm(B, C)) \
        + trace_mul(mat_comm(A, B), mat_comm(C, D))
    ab, cd = mat_mul(A, B), mat_mul(C, D)
    t_abcd = trace_mul(ab, cd)
    t_acdb = trace_mul(mat_mul(A, C), mat_mul(D, B))
    t_adbc = trace_mul(mat_mul(A, D), mat_mul(B, C))
    t_bacd = trace_mul(mat_mul(B, A), cd)
    rhs = 4 * (t_abcd + t_acdb + t_adbc) - 6 * (t_abcd + t_bacd)
    ok = lhs == rhs
    ce = None if ok else {"lhs": str(lhs), "rhs": str(rhs)}
    return Report(check="commutator_trace_identity", algebra=L.name, passed=ok,
                  first_counterexample=ce)


def check_polarized(L: LieAlgebra, a: Element, b: Element, c: Element,
                    d: Element, alpha: Fraction) -> Report:
    """Polarized quartic identity: the symmetrized quartic trace equals
    alpha times the matching symmetric sum of pairing products."""
    A, B, C, D = (L.ad_matrix(x) for x in (a, b, c, d))
    lhs = trace_mul(mat_mul(A, B), mat_mul(C, D)) \
        + trace_mul(mat_mul(A, C), mat_mul(D, B)) \
        + trace_mul(mat_mul(A, D), mat_mul(B, C))
    t = (trace_mul(A, B) * trace_mul(C, D)
         + trace_mul(A, C) * trace_mul(D, B)
         + trace_mul(A, D) * trace_mul(B, C))
    rhs = alpha * t
    ok = lhs == rhs
    ce = None if ok else {"alpha": str(alpha), "lhs": str(lhs), "rhs": str(rhs)}
    return Report(check="polarized_quartic", algebra=L.name, passed=ok,
                  first_counterexample=ce)


# --- sampling ----------------------------------------------------------------

def random_element(L: LieAlgebra, rng: random.Random) -> Element:
    """Nonzero element with integer coefficients in [-3, 3]."""
    while True:
        coeffs = [rng.randint(-3, 3) for _ in range(L.dim)]
        if any(coeffs):
            return tuple(coeffs)


def element_rng(master_seed, L: LieAlgebra, check: str) -> random.Random:
    """Deterministic per-(seed, algebra, check) stream."""
    return random.Random(f"{master_seed}:{L.name}:{check}")


def quartic_alpha(L: LieAlgebra, samples: int = 24,
                  master_seed=0) -> Optional[Fraction]:
    """The exact ratio Tr(ad_a^4) / (Tr(ad_a^2))^2 if it is constant over the
    sample AND the polarized identity holds on sampled 4-tuples, else None."""
    if samples < 20:
        raise UsageError("quartic_alpha needs at least 20 samples")
    rng = element_rng(master_seed, L, "quartic_alpha")
    alpha: Optional[Fraction] = None
    usable = 0
    for _ in range(samples):
        a = random_element(L, rng)
        m = L.ad_matrix(a)
        t2 = trace_mul(m, m)
        if t2 == 0:
            continue
        usable += 1
        m2 = mat_mul(m, m)
        t4 = trace_mul(m2, m2)
        ratio = Fraction(t4, t2 * t2)
        if alpha is None:
            alpha = ratio
        elif ratio != alpha:
            return None
    if usable == 0:
        raise SamplingError(f"all sampled elements of {L.name} had zero quadratic trace")
    for _ in range(10):
        tup = [random_element(L, rng) for _ in range(4)]
        if not check_polarized(L, *tup, alpha).passed:
            return None
    return alpha


def find_polarized_counterexample(L: LieAlgebra, alpha: Fraction,
                                  master_seed=0, attempts: int = 50
                                  ) -> Optional[Tuple[Element, ...]]:
    """A 4-tuple witnessing failure of the polarized identity, if one is found."""
    rng = element_rng(master_seed, L, f"polarized_counterexample:{alpha}")
    for _ in range(attempts):
        tup = tuple(random_element(L, rng) for _ in range(4))
        if not check_polarized(L, *tup, alpha).passed:
            return tup
    return None


def footnote_witness_trace(L: LieAlgebra):
    """Tr(ad_{[e,f]} ad_e ad_f) for the highest-root sl2 triple; nonzero in
    every simple algebra, which is what makes the non-symmetric quartic
    combination independent."""
    e, h, f = L.highest_root_triple()
    m = mat_mul(L.ad_matrix(h), L.ad_matrix(e))
    return trace_mul(m, L.ad_matrix(f))


# --- classification ----------------------------------------------------------

def classification_types(max_rank: int = 4, enable_e78: bool = False
                         ) -> List[Tuple[str, int]]:
    """Type list scanned by classify: classical series up to max_rank (the D
    series one rank further, so a non-degenerate D appears next to D4) plus
    the exceptional types."""
    types: List[Tuple[str, int]] = []
    types += [("A", r) for r in range(1, max_rank + 1)]
    types += [("B", r) for r in range(2, max_rank + 1)]
    types += [("C", r) for r in range(3, max_rank + 1)]
    types += [("D", r) for r in range(4, max_rank + 2)]
    types += [("G", 2), ("F", 4), ("E", 6)]
    if enable_e78:
        types += [("E", 7), ("E", 8)]
    return types


def classify(max_rank: int = 4, enable_e78: bool = False, samples: int = 24,
             master_seed=0) -> List[Tuple[str, bool, Optional[Fraction]]]:
    """(name, satisfies quartic proportionality, alpha) for each scanned type."""
    out = []
    for series, rank in classification_types(max_rank, enable_e78):
        L = simple_lie_algebra(series, rank)
        alpha = quartic_alpha(L, samples=samples, master_seed=master_seed)
        out.append((f"{series}{rank}", alpha is not None, alpha))
    return out


def trace_identity_suite(L: LieAlgebra, samples: int = 100, master_seed=0) -> List[Report]:
    """The four trace-identity batches on seeded random tuples.

    The polarized batch adapts to the algebra: when a constant alpha exists
    it must hold on every sampled tuple; otherwise every candidate ratio
    observed in the sample stream must admit an explicit counterexample.
    """
    reports: List[Report] = []

    def batch(name: str, runner) -> None:
        rng = element_rng(master_seed, L, name)
        first = None
        for k in range(samples):
            rep = runner(rng)
            if not rep.passed:
                first = {"sample_index": k, **(rep.first_counterexample or {})}
                break
        reports.append(Report(check=name, algebra=L.name, passed=first is None,
                              samples=samples, seed=master_seed,
                              first_counterexample=first))

    batch("contract_identity",
          lambda rng: check_contract_identity(
              L, *(random_element(L, rng) for _ in range(3))))
    batch("dihedral_symmetry",
          lambda rng: check_dihedral(
              L, *(random_element(L, rng) for _ in range(4))))
    batch("commutator_trace_identity",
          lambda rng: check_commutator_identity(
              L, *(random_element(L, rng) for _ in range(4))))

    alpha = quartic_alpha(L, samples=24, master_seed=master_seed)
    if alpha is not None:
        batch("polarized_quartic",
              lambda rng: check_polarized(
                  L, *(random_element(L, rng) for _ in range(4)), alpha))
        reports[-1].details["alpha"] = str(alpha)
    else:
        rng = element_rng(master_seed, L, "polarized_candidates")
        candidates = set()
        guard = 0
        while len(candidates) < 3 and guard < 200:
            guard += 1
            a = random_element(L, rng)
            m = L.ad_matrix(a)
            t2 = trace_mul(m, m)
            if t2:
                m2 = mat_mul(m, m)
                candidates.add(Fraction(trace_mul(m2, m2), t2 * t2))
        missing = [str(alpha_c) for alpha_c in sorted(candidates)
                   if find_polarized_counterexample(L, alpha_c,
                                                    master_seed=master_seed) is None]
        reports.append(Report(
            check="polarized_quartic", algebra=L.name, passed=not missing,
            samples=samples, seed=master_seed,
            first_counterexample=(
                None if not missing
                else {"candidates_without_counterexample": missing}),
            details={"alpha": None, "candidates": [str(c) for c in sorted(candidates)]}))
    return reports


# --- classical defining representations --------------------------------------

CLASSICAL_TABLE = {
    # series -> (coefficient of Tr(a^4), coefficient of (Tr(a^2))^2), as
    # functions of the rank
    "A": lambda n: (2 * (n + 1), 6),
    "B": lambda n: (2 * n - 7, 3),
    "C": lambda n: (2 * (n + 4), 3),
    "D": lambda n: (2 * (n - 4), 3),
}


def _unit_matrix(size: int, entries) -> List[List]:
    m = [[0] * size for _ in range(size)]
    for (i, j, v) in entries:
        m[i][j] += v
    return m


def _simple_generator_matrices(series: str, rank: int
                               ) -> Tuple[int, List[List[List]], List[List[List]]]:
    """(size, raising, lowering) matrices of the defining representation for
    the simple roots, in the same Bourbaki ordering the root systems use."""
    n = rank
    if series == "A":
        size = n + 1
        es = [_unit_matrix(size, [(i, i + 1, 1)]) for i in range(n)]
        fs = [_unit_matrix(size, [(i + 1, i, 1)]) for i in range(n)]
    elif series == "B":
        size = 2 * n + 1
        es = [_unit_matrix(size, [(i, i + 1, 1), (2 * n - 1 - i, 2 * n - i, -1)])
              for i in range(n - 1)]
        es.append(_unit_matrix(size, [(n - 1, n, 1), (n, n + 1, -1)]))
        fs = [_unit_matrix(size, [(i + 1, i, 1), (2 * n - i, 2 * n - 1 - i, -1)])
              for i in range(n - 1)]
        fs.append(_unit_matrix(size, [(n, n - 1, 1), (n + 1, n, -1)]))
    elif series == "C":
        size = 2 * n
        es = [_unit_matrix(size, [(i, i + 1, 1), (n + i + 1, n + i, -1)])
              for i in range(n - 1)]
        es.append(_unit_matrix(size, [(n - 1, 2 * n - 1, 1)]))
        fs = [_unit_matrix(size, [(i + 1, i, 1), (n + i, n + i + 1, -1)])
              for i in range(n - 1)]
        fs.append(_unit_matrix(size, [(2 * n - 1, n - 1, 1)]))
    elif series == "D":
        size = 2 * n
        es = [_unit_matrix(size, [(i, i + 1, 1), (2 * n - 2 - i, 2 * n - 1 - i, -1)])
              for i in range(n - 1)]
        es.append(_unit_matrix(size, [(n - 2, n, 1), (n - 1, n + 1, -1)]))
        fs = [_unit_matrix(size, [(i + 1, i, 1), (2 * n - 1 - i, 2 * n - 2 - i, -1)])
              for i in range(n - 1)]
        fs.append(_unit_matrix(size, [(n, n - 2, 1), (n + 1, n - 1, -1)]))
    else:
        raise UsageError(f"no defining representation for exceptional type {series}{rank}")
    return size, es, fs


class DefiningRep:
    """Defining-representation matrices for every Chevalley basis element of
    a classical algebra, verified to be a Lie algebra homomorphism."""

    def __init__(self, L: LieAlgebra):
        if L.series not in CLASSICAL_TABLE:
            raise UsageError(f"classical table unsupported for {L.name}")
        self.algebra = L
        size, es, fs = _simple_generator_matrices(L.series, L.rank)
        self.size = size
        rank = L.rank
        rs = L.root_system
        npos = len(rs.positive_roots)
        mats: List[Optional[List[List]]] = [None] * L.dim

        pos_index = {r: k for k, r in enumerate(rs.positive_roots)}

        # normalize lowering generators so [h, e] = 2e with h = [e, f];
        # simple root i sits at position pos_index[unit_i], not at i
        for i in range(rank):
            h = mat_comm(es[i], fs[i])
            he = mat_comm(h, es[i])
            c = None
            for r in range(size):
                for s in range(size):
                    if es[i][r][s]:
                        c = Fraction(he[r][s], es[i][r][s])
                        break
                if c is not None:
                    break
            if c is None or c == 0:
                raise UsageError(f"degenerate simple generator {i} for {L.name}")
            if c != 2:
                fs[i] = [[v * 2 / c for v in row] for row in fs[i]]
                h = mat_comm(es[i], fs[i])
            k = pos_index[rs.simple_roots[i]]
            mats[L.pos_root_index(k)] = es[i]
            mats[L.neg_root_index(k)] = fs[i]
            mats[i] = h
        for k, gamma in enumerate(rs.positive_roots):
            if sum(gamma) == 1:
                continue
            a_idx = next(a for a in range(k)
                         if tuple(g - r for g, r in
                                  zip(gamma, rs.positive_roots[a])) in pos_index)
            b_idx = pos_index[tuple(g - r for g, r in
                                    zip(gamma, rs.positive_roots[a_idx]))]
            ia, ib, ig = (L.pos_root_index(x) for x in (a_idx, b_idx, k))
            nconst = L.f[(ia, ib)][ig]
            mats[ig] = [[Fraction(v, nconst) for v in row]
                        for row in mat_comm(mats[ia], mats[ib])]
            ja, jb, jg = (L.neg_root_index(x) for x in (a_idx, b_idx, k))
            mats[jg] = [[Fraction(v, -nconst) for v in row]
                        for row in mat_comm(mats[ja], mats[jb])]

        self.matrices = mats
        self._verify()

    def _verify(self) -> None:
        L = self.algebra
        for i in range(L.dim):
            for j in range(L.dim):
                expect = [[0] * self.size for _ in range(self.size)]
                for k, c in L.bracket_basis(i, j).items():
                    mk = self.matrices[k]
                    for r in range(self.size):
                        for s in range(self.size):
                            if mk[r][s]:
                                expect[r][s] += c * mk[r][s]
                got = mat_comm(self.matrices[i], self.matrices[j])
                if any(got[r][s] != expect[r][s] for r in range(self.size)
                       for s in range(self.size)):
                    raise UsageError(
                        f"defining representation of {L.name} is not a "
                        f"homomorphism at basis pair ({i},{j})")

    def matrix(self, x: Element) -> List[List]:
        out = [[0] * self.size for _ in range(self.size)]
        for i, xi in enumerate(x):
            if xi:
                mi = self.matrices[i]
                for r in range(self.size):
                    row = mi[r]
                    orow = out[r]
                    for s, v in enumerate(row):
                        if v:
                            orow[s] += xi * v
        return out


def check_classical_table(L: LieAlgebra, a: Element,
                          rep: Optional[DefiningRep] = None) -> Report:
    """One classical row: Tr(ad_a^4) = c4 Tr(a^4) + c22 (Tr(a^2))^2."""
    if L.series not in CLASSICAL_TABLE:
        raise UsageError(f"classical table unsupported for {L.name}")
    c4, c22 = CLASSICAL_TABLE[L.series](L.rank)
    rep = rep or DefiningRep(L)
    m = L.ad_matrix(a)
    m2 = mat_mul(m, m)
    lhs = trace_mul(m2, m2)
    p = rep.matrix(a)
    p2 = mat_mul(p, p)
    t2 = trace(p2)
    t4 = trace_mul(p2, p2)
    rhs = c4 * t4 + c22 * t2 * t2
    ok = lhs == rhs
    ce = None if ok else {"lhs": str(lhs), "rhs": str(rhs),
                          "c4": c4, "c22": c22}
    return Report(check="classical_trace_table", algebra=L.name, passed=ok,
                  first_counterexample=ce)
