"""Finite-dimensional simple Lie algebras over exact rationals.

Builds the full Chevalley basis of any simple type (A through G) from root
data alone: positive roots are enumerated by height induction from the
normalized Gram matrix of simple roots, structure constants come from the
extraspecial-pair sign convention, and the bi-invariant pairing

    (a, b) = Tr(ad_a ad_b) / (2 h)

is computed from adjoint traces, where h is the dual Coxeter number.  Simple
root lengths are normalized so the highest root theta has (theta, theta) = 2,
which makes h a positive integer; this is asserted during construction along
with the structure-constant Jacobi identity on all basis triples.

Everything is exact: structure constants are ints, pairings are Fractions.
No floating point is used anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

Coeffs = Tuple[int, ...]
Element = Tuple  # length-dim tuple of ints / Fractions


class ConfigurationError(ValueError):
    """Invalid (series, rank) request or malformed input file."""


class ConstructionError(RuntimeError):
    """Internal inconsistency detected while building an algebra."""


class UsageError(ValueError):
    """Operands do not fit the algebra (e.g. dimension mismatch)."""


VALID_RANKS = {
    "A": lambda r: r >= 1,
    "B": lambda r: r >= 2,
    "C": lambda r: r >= 3,
    "D": lambda r: r >= 4,
    "E": lambda r: r in (6, 7, 8),
    "F": lambda r: r == 4,
    "G": lambda r: r == 2,
}


def _gram_matrix(series: str, rank: int) -> List[List[Fraction]]:
    """Gram matrix of simple roots, normalized to (theta, theta) = 2."""
    one = Fraction(1)
    half = Fraction(1, 2)
    if series == "A":
        norms = [2 * one] * rank
        edges = {(i, i + 1): -one for i in range(rank - 1)}
    elif series == "B":
        norms = [2 * one] * (rank - 1) + [one]
        edges = {(i, i + 1): -one for i in range(rank - 1)}
    elif series == "C":
        norms = [one] * (rank - 1) + [2 * one]
        edges = {(i, i + 1): -half for i in range(rank - 2)}
        edges[(rank - 2, rank - 1)] = -one
    elif series == "D":
        norms = [2 * one] * rank
        edges = {(i, i + 1): -one for i in range(rank - 2)}
        edges[(rank - 3, rank - 1)] = -one
    elif series == "E":
        norms = [2 * one] * rank
        pairs = [(0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)]
        edges = {p: -one for p in pairs if p[0] < rank and p[1] < rank}
    elif series == "F":
        norms = [2 * one, 2 * one, one, one]
        edges = {(0, 1): -one, (1, 2): -one, (2, 3): -half}
    else:  # G
        norms = [Fraction(2, 3), 2 * one]
        edges = {(0, 1): -one}
    gram = [[Fraction(0)] * rank for _ in range(rank)]
    for i in range(rank):
        gram[i][i] = norms[i]
    for (i, j), v in edges.items():
        gram[i][j] = v
        gram[j][i] = v
    return gram


@dataclass(frozen=True)
class RootSystem:
    series: str
    rank: int
    gram: Tuple[Tuple[Fraction, ...], ...]
    simple_roots: Tuple[Coeffs, ...]
    positive_roots: Tuple[Coeffs, ...]  # ordered by (height, lexicographic)
    cartan_matrix: Tuple[Tuple[int, ...], ...]

    def norm2(self, root: Coeffs) -> Fraction:
        return self.inner(root, root)

    def inner(self, a: Coeffs, b: Coeffs) -> Fraction:
        g = self.gram
        total = Fraction(0)
        for i, ai in enumerate(a):
            if ai:
                row = g[i]
                total += ai * sum(row[j] * bj for j, bj in enumerate(b) if bj)
        return total

    def cartan_pairing(self, root: Coeffs, i: int) -> int:
        """2 (root, alpha_i) / (alpha_i, alpha_i), always an integer."""
        v = 2 * self.inner(root, self.simple_roots[i]) / self.gram[i][i]
        if v.denominator != 1:
            raise ConstructionError(f"non-integral Cartan pairing {v}")
        return int(v)

    @property
    def highest_root(self) -> Coeffs:
        return self.positive_roots[-1]


def build_root_system(series: str, rank: int) -> RootSystem:
    """Enumerate the positive roots and Cartan matrix of a simple type."""
    series = series.upper()
    if series not in VALID_RANKS or not isinstance(rank, int) or not VALID_RANKS[series](rank):
        raise ConfigurationError(f"invalid simple type {series}{rank}")
    gram = _gram_matrix(series, rank)
    simple = [tuple(1 if j == i else 0 for j in range(rank)) for i in range(rank)]

    interim = RootSystem(series, rank, tuple(map(tuple, gram)), tuple(simple), (), ())
    roots = set(simple)
    by_height = [list(simple)]
    while by_height[-1]:
        nxt = []
        for gamma in by_height[-1]:
            for i in range(rank):
                cand = tuple(c + (1 if j == i else 0) for j, c in enumerate(gamma))
                if cand in roots:
                    continue
                # root-string condition: gamma + alpha_i is a root iff
                # p - <gamma, alpha_i^vee> >= 1, with p the depth of the string.
                p = 0
                down = gamma
                while True:
                    down = tuple(c - (1 if j == i else 0) for j, c in enumerate(down))
                    if any(c < 0 for c in down) or not (down in roots or all(c == 0 for c in down)):
                        break
                    if all(c == 0 for c in down):
                        break  # reached zero: alpha_i itself ends the string
                    p += 1
                if p - interim.cartan_pairing(gamma, i) >= 1:
                    roots.add(cand)
                    nxt.append(cand)
        by_height.append(nxt)

    positive = sorted(roots, key=lambda t: (sum(t), t))
    heights = [sum(t) for t in positive]
    if heights.count(max(heights)) != 1:
        raise ConstructionError("highest root is not unique")

    cartan = []
    for i in range(rank):
        row = []
        for j in range(rank):
            v = 2 * interim.inner(simple[i], simple[j]) / gram[j][j]
            if v.denominator != 1:
                raise ConstructionError("non-integral Cartan matrix")
            row.append(int(v))
        cartan.append(tuple(row))

    rs = RootSystem(series, rank, tuple(map(tuple, gram)), tuple(simple),
                    tuple(positive), tuple(cartan))
    n2 = rs.norm2(rs.highest_root)
    if n2 != 2:
        raise ConstructionError(f"highest-root norm {n2} != 2: bad normalization")
    return rs


def _vadd(a: Coeffs, b: Coeffs) -> Coeffs:
    return tuple(x + y for x, y in zip(a, b))


def _vsub(a: Coeffs, b: Coeffs) -> Coeffs:
    return tuple(x - y for x, y in zip(a, b))


def _vneg(a: Coeffs) -> Coeffs:
    return tuple(-x for x in a)


class _ChevalleyConstants:
    """Structure constants N(alpha, beta) with extraspecial-pair signs.

    Positive-positive constants are built by height induction; constants with
    negative arguments reduce to those through antisymmetry, negation and the
    three-term trace relation for triples summing to zero.
    """

    def __init__(self, rs: RootSystem):
        self.rs = rs
        self.pos_index = {r: k for k, r in enumerate(rs.positive_roots)}
        self.npp: Dict[Tuple[int, int], int] = {}
        self._build()

    def _is_root(self, t: Coeffs) -> bool:
        return t in self.pos_index or _vneg(t) in self.pos_index

    def _p_value(self, alpha: Coeffs, beta: Coeffs) -> int:
        p = 0
        cur = _vsub(beta, alpha)
        while self._is_root(cur):
            p += 1
            cur = _vsub(cur, alpha)
        return p

    def _build(self) -> None:
        rs = self.rs
        for g_idx, gamma in enumerate(rs.positive_roots):
            if sum(gamma) == 1:
                continue
            pairs = []
            for a_idx in range(g_idx):
                rest = _vsub(gamma, rs.positive_roots[a_idx])
                b_idx = self.pos_index.get(rest)
                if b_idx is not None:
                    pairs.append((a_idx, b_idx))
            if not pairs:
                raise ConstructionError(f"root {gamma} has no decomposition")
            pairs.sort()
            a_star, b_star = pairs[0]  # extraspecial: minimal first component
            alpha = rs.positive_roots[a_star]
            beta = rs.positive_roots[b_star]
            n0 = self._p_value(alpha, beta) + 1
            self.npp[(a_star, b_star)] = n0
            self.npp[(b_star, a_star)] = -n0
            gnorm = rs.norm2(gamma)
            for xi_idx, eta_idx in pairs[1:]:
                if (xi_idx, eta_idx) in self.npp:
                    continue
                xi = rs.positive_roots[xi_idx]
                eta = rs.positive_roots[eta_idx]
                # four-term relation for alpha + beta - xi - eta = 0
                total = Fraction(0)
                d1 = _vsub(beta, xi)
                if self._is_root(d1):
                    total += Fraction(self.n(beta, _vneg(xi)) * self.n(alpha, _vneg(eta)),
                                      1) / rs.norm2(d1)
                d2 = _vsub(alpha, xi)
                if self._is_root(d2):
                    total += Fraction(self.n(_vneg(xi), alpha) * self.n(beta, _vneg(eta)),
                                      1) / rs.norm2(d2)
                val = gnorm * total / n0
                if val.denominator != 1:
                    raise ConstructionError("non-integral structure constant")
                nv = int(val)
                if abs(nv) != self._p_value(xi, eta) + 1:
                    raise ConstructionError(
                        f"structure constant {nv} violates root-string bound")
                self.npp[(xi_idx, eta_idx)] = nv
                self.npp[(eta_idx, xi_idx)] = -nv

    def n(self, r: Coeffs, s: Coeffs) -> int:
        """N(r, s) for arbitrary (signed) roots; 0 if r+s is not a root."""
        t = _vadd(r, s)
        if all(c == 0 for c in t) or not self._is_root(t):
            return 0
        r_pos = r in self.pos_index
        s_pos = s in self.pos_index
        if r_pos and s_pos:
            return self.npp[(self.pos_index[r], self.pos_index[s])]
        if not r_pos and not s_pos:
            return -self.npp[(self.pos_index[_vneg(r)], self.pos_index[_vneg(s)])]
        if not r_pos:
            return -self.n(s, r)
        # r positive, s negative
        rs = self.rs
        if t in self.pos_index:
            val = -rs.norm2(t) / rs.norm2(r) * self.npp[
                (self.pos_index[_vneg(s)], self.pos_index[t])]
        else:
            val = -rs.norm2(t) / rs.norm2(s) * self.npp[
                (self.pos_index[r], self.pos_index[_vneg(t)])]
        if val.denominator != 1:
            raise ConstructionError("non-integral mixed structure constant")
        return int(val)


@dataclass
class LieAlgebra:
    """Simple Lie algebra in a Chevalley basis with exact invariant pairing.

    Basis order: Cartan generators h_1..h_rank, then root vectors for the
    positive roots in height order, then the corresponding negative ones.
    Immutable after construction.
    """

    root_system: RootSystem
    dim: int
    basis_labels: Tuple[str, ...]
    f: Dict[Tuple[int, int], Dict[int, int]]
    pairing: List[List[Fraction]]
    pairing_inv: List[List[Fraction]]
    h_dual_coxeter: int
    ad_entries: List[Tuple[Tuple[int, int, int], ...]] = field(repr=False, default=None)

    @property
    def series(self) -> str:
        return self.root_system.series

    @property
    def rank(self) -> int:
        return self.root_system.rank

    @property
    def name(self) -> str:
        return f"{self.series}{self.rank}"

    def zero(self) -> Element:
        return (0,) * self.dim

    def basis_element(self, i: int) -> Element:
        return tuple(1 if j == i else 0 for j in range(self.dim))

    def element(self, coeffs: Sequence) -> Element:
        if len(coeffs) != self.dim:
            raise UsageError(f"expected {self.dim} coefficients, got {len(coeffs)}")
        return tuple(coeffs)

    def pos_root_index(self, k: int) -> int:
        return self.rank + k

    def neg_root_index(self, k: int) -> int:
        return self.rank + len(self.root_system.positive_roots) + k

    def bracket_basis(self, i: int, j: int) -> Dict[int, int]:
        return self.f.get((i, j), {})

    def bracket(self, x: Element, y: Element) -> Element:
        if len(x) != self.dim or len(y) != self.dim:
            raise UsageError("dimension mismatch in bracket")
        acc = [0] * self.dim
        f = self.f
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                if not yj:
                    continue
                fij = f.get((i, j))
                if fij:
                    c = xi * yj
                    for k, v in fij.items():
                        acc[k] += c * v
        return tuple(acc)

    def ad_matrix(self, x: Element) -> List[List]:
        """Matrix of [x, -] in the basis; column j is bracket(x, e_j)."""
        if len(x) != self.dim:
            raise UsageError("dimension mismatch in ad_matrix")
        n = self.dim
        mat = [[0] * n for _ in range(n)]
        for i, xi in enumerate(x):
            if not xi:
                continue
            for (m, k, c) in self.ad_entries[i]:
                mat[k][m] += xi * c
        return mat

    def pair(self, a: Element, b: Element) -> Fraction:
        if len(a) != self.dim or len(b) != self.dim:
            raise UsageError("dimension mismatch in pairing")
        total = Fraction(0)
        for i, ai in enumerate(a):
            if ai:
                row = self.pairing[i]
                total += ai * sum(row[j] * bj for j, bj in enumerate(b) if bj)
        return total

    def dual_element(self, i: int) -> Element:
        """e^i with (e_j, e^i) = delta_ij; the i-th row of pairing_inv."""
        return tuple(self.pairing_inv[i])

    def dual_basis(self) -> List[Tuple[Element, Element]]:
        return [(self.basis_element(i), self.dual_element(i)) for i in range(self.dim)]

    def coroot_element(self, root: Coeffs) -> Element:
        """h_alpha = alpha^vee expressed in the Cartan part of the basis."""
        rs = self.root_system
        n2 = rs.norm2(root)
        coeffs = [0] * self.dim
        for i, k in enumerate(root):
            if k:
                c = k * rs.gram[i][i] / n2
                if c.denominator != 1:
                    raise ConstructionError("non-integral coroot")
                coeffs[i] = int(c)
        return tuple(coeffs)

    def highest_root_triple(self) -> Tuple[Element, Element, Element]:
        """(e, h, f) for the sl2 spanned by the highest-root vectors."""
        k = len(self.root_system.positive_roots) - 1
        e = self.basis_element(self.pos_root_index(k))
        fneg = self.basis_element(self.neg_root_index(k))
        h = self.bracket(e, fneg)
        return e, h, fneg


def _jacobi_check(dim: int, f: Dict[Tuple[int, int], Dict[int, int]]) -> None:
    """Exact structure-constant Jacobi identity on all basis triples."""
    empty: Dict[int, int] = {}
    for i in range(dim):
        for j in range(i + 1, dim):
            fij = f.get((i, j), empty)
            for k in range(j + 1, dim):
                acc: Dict[int, int] = {}
                for m, c in fij.items():
                    for l, v in f.get((m, k), empty).items():
                        acc[l] = acc.get(l, 0) + c * v
                for m, c in f.get((j, k), empty).items():
                    for l, v in f.get((m, i), empty).items():
                        acc[l] = acc.get(l, 0) + c * v
                for m, c in f.get((k, i), empty).items():
                    for l, v in f.get((m, j), empty).items():
                        acc[l] = acc.get(l, 0) + c * v
                if any(acc.values()):
                    raise ConstructionError(
                        f"Jacobi identity fails on basis triple ({i},{j},{k})")


def _build_f(rs: RootSystem) -> Dict[Tuple[int, int], Dict[int, int]]:
    rank = rs.rank
    pos = rs.positive_roots
    npos = len(pos)
    dim = rank + 2 * npos
    const = _ChevalleyConstants(rs)

    signed: List[Optional[Coeffs]] = [None] * dim
    index_of: Dict[Coeffs, int] = {}
    for k, r in enumerate(pos):
        signed[rank + k] = r
        signed[rank + npos + k] = _vneg(r)
        index_of[r] = rank + k
        index_of[_vneg(r)] = rank + npos + k

    f: Dict[Tuple[int, int], Dict[int, int]] = {}

    def put(i: int, j: int, comp: Dict[int, int]) -> None:
        comp = {k: v for k, v in comp.items() if v}
        if comp:
            f[(i, j)] = comp

    # Cartan against root vectors
    for i in range(rank):
        for idx in range(rank, dim):
            root = signed[idx]
            c = 2 * rs.inner(root, rs.simple_roots[i]) / rs.gram[i][i]
            if c.denominator != 1:
                raise ConstructionError("non-integral Cartan action")
            c = int(c)
            if c:
                put(i, idx, {idx: c})
                put(idx, i, {idx: -c})

    # root vectors against each other
    for ia in range(rank, dim):
        ra = signed[ia]
        for ib in range(rank, dim):
            if ia == ib:
                continue
            rb = signed[ib]
            tot = _vadd(ra, rb)
            if all(c == 0 for c in tot):
                if ra in const.pos_index:
                    h = {}
                    n2 = rs.norm2(ra)
                    for i, k in enumerate(ra):
                        if k:
                            v = k * rs.gram[i][i] / n2
                            if v.denominator != 1:
                                raise ConstructionError("non-integral coroot")
                            h[i] = int(v)
                    put(ia, ib, h)
                    put(ib, ia, {i: -v for i, v in h.items()})
            elif const._is_root(tot):
                n = const.n(ra, rb)
                if n:
                    put(ia, ib, {index_of[tot]: n})
    return f


def _killing_matrix(dim: int, f, ad_entries) -> List[List[int]]:
    kf = [[0] * dim for _ in range(dim)]
    empty: Dict[int, int] = {}
    for i in range(dim):
        for j in range(i, dim):
            # Tr(ad_i ad_j) = sum over entries (ad_i)_{km} (ad_j)_{mk}
            total = 0
            for (m, k, c) in ad_entries[i]:
                total += c * f.get((j, k), empty).get(m, 0)
            kf[i][j] = total
            kf[j][i] = total
    return kf


def _invert_exact(matrix: List[List[Fraction]]) -> List[List[Fraction]]:
    """Exact inverse via connected-component partition + Gauss-Jordan.

    The invariant pairing is block diagonal up to permutation (Cartan block
    plus opposite-root 2x2 pairs), so components stay tiny.
    """
    n = len(matrix)
    # union-find over the nonzero pattern
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i in range(n):
        for j in range(n):
            if matrix[i][j] != 0:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    comps: Dict[int, List[int]] = {}
    for i in range(n):
        comps.setdefault(find(i), []).append(i)

    inv = [[Fraction(0)] * n for _ in range(n)]
    for idxs in comps.values():
        m = len(idxs)
        a = [[Fraction(matrix[idxs[r]][idxs[c]]) for c in range(m)] for r in range(m)]
        b = [[Fraction(1) if r == c else Fraction(0) for c in range(m)] for r in range(m)]
        for col in range(m):
            piv = next((r for r in range(col, m) if a[r][col] != 0), None)
            if piv is None:
                raise ConstructionError("singular pairing matrix")
            a[col], a[piv] = a[piv], a[col]
            b[col], b[piv] = b[piv], b[col]
            d = a[col][col]
            a[col] = [x / d for x in a[col]]
            b[col] = [x / d for x in b[col]]
            for r in range(m):
                if r != col and a[r][col] != 0:
                    factor = a[r][col]
                    a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
                    b[r] = [x - factor * y for x, y in zip(b[r], b[col])]
        for r in range(m):
            for c in range(m):
                inv[idxs[r]][idxs[c]] = b[r][c]
    return inv


def _verify_inverse(matrix, inv) -> None:
    n = len(matrix)
    for i in range(n):
        row = matrix[i]
        nz = [(j, v) for j, v in enumerate(row) if v != 0]
        for k in range(n):
            total = sum(v * inv[j][k] for j, v in nz)
            if total != (1 if i == k else 0):
                raise ConstructionError("pairing inverse verification failed")


def _verify_pairing_blocks(L: LieAlgebra) -> None:
    """Check the trace pairing against closed-form root-data values.

    In the normalization (theta, theta) = 2 the pairing must satisfy
    (h_i, h_j) = 4 (a_i, a_j) / ((a_i, a_i)(a_j, a_j)), (x_a, x_{-a}) =
    2 / (a, a), and vanish on all other basis pairs.  Failure means the
    dual Coxeter normalization is off.
    """
    rs = L.root_system
    rank, npos = rs.rank, len(rs.positive_roots)
    for i in range(rank):
        for j in range(rank):
            expect = 4 * rs.inner(rs.simple_roots[i], rs.simple_roots[j]) / (
                rs.gram[i][i] * rs.gram[j][j])
            if L.pairing[i][j] != expect:
                raise ConstructionError("Cartan pairing block mismatch")
        if any(L.pairing[i][rank + k] != 0 for k in range(2 * npos)):
            raise ConstructionError("Cartan/root pairing block not zero")
    for k, root in enumerate(rs.positive_roots):
        expect = 2 / rs.norm2(root)
        for idx in range(rank, L.dim):
            v = L.pairing[rank + k][idx]
            want = expect if idx == rank + npos + k else 0
            if v != want:
                raise ConstructionError("root pairing block mismatch")


def chevalley_basis(rs: RootSystem) -> LieAlgebra:
    """Construct the algebra with integer structure constants and verify it."""
    rank = rs.rank
    npos = len(rs.positive_roots)
    dim = rank + 2 * npos
    f = _build_f(rs)
    _jacobi_check(dim, f)

    entry_lists: List[List[Tuple[int, int, int]]] = [[] for _ in range(dim)]
    for (a, b), comp in f.items():
        lst = entry_lists[a]
        for k, c in comp.items():
            lst.append((b, k, c))
    ad_entries = [tuple(lst) for lst in entry_lists]

    killing = _killing_matrix(dim, f, ad_entries)

    # dual Coxeter number from the highest-root coroot: (t, t) = 2 in the
    # target normalization, so Tr(ad_t ad_t) = 2h * 2.
    theta = rs.highest_root
    ctheta = {}
    n2 = rs.norm2(theta)
    for i, k in enumerate(theta):
        if k:
            v = k * rs.gram[i][i] / n2
            ctheta[i] = v
    kval = sum(ci * cj * killing[i][j] for i, ci in ctheta.items()
               for j, cj in ctheta.items())
    hdc = Fraction(kval, 4)
    if hdc.denominator != 1 or hdc <= 0:
        raise ConstructionError(f"dual Coxeter number {hdc} is not a positive integer")
    hdc = int(hdc)

    pairing = [[Fraction(killing[i][j], 2 * hdc) for j in range(dim)] for i in range(dim)]

    labels = tuple([f"h{i + 1}" for i in range(rank)]
                   + [f"e{k}" for k in range(npos)]
                   + [f"f{k}" for k in range(npos)])

    pairing_inv = _invert_exact(pairing)
    _verify_inverse(pairing, pairing_inv)

    L = LieAlgebra(root_system=rs, dim=dim, basis_labels=labels, f=f,
                   pairing=pairing, pairing_inv=pairing_inv,
                   h_dual_coxeter=hdc, ad_entries=ad_entries)
    _verify_pairing_blocks(L)
    return L


_ALGEBRA_CACHE: Dict[Tuple[str, int], LieAlgebra] = {}


def simple_lie_algebra(series: str, rank: int) -> LieAlgebra:
    """Build (and memoize) the simple algebra of the given type."""
    key = (series.upper(), rank)
    if key not in _ALGEBRA_CACHE:
        _ALGEBRA_CACHE[key] = chevalley_basis(build_root_system(*key))
    return _ALGEBRA_CACHE[key]


def dual_coxeter(L: LieAlgebra) -> int:
    return L.h_dual_coxeter


# ---------------------------------------------------------------------------
# structure-constant cache files
#
# Format: header line "dim rank h_dual_coxeter", then one line "i j k p/q"
# per nonzero constant (0-based indices, exact rational, sorted by (i,j,k)).

def save_structure_constants(L: LieAlgebra, path: str) -> None:
    lines = [f"{L.dim} {L.rank} {L.h_dual_coxeter}"]
    for (i, j) in sorted(L.f):
        comp = L.f[(i, j)]
        for k in sorted(comp):
            lines.append(f"{i} {j} {k} {Fraction(comp[k])}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_structure_constants(path: str) -> Tuple[int, int, int,
                                                 Dict[Tuple[int, int], Dict[int, Fraction]]]:
    """Parse a cache file; returns (dim, rank, h_dual_coxeter, f)."""
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines:
        raise ConfigurationError(f"empty structure-constant file {path}")
    head = lines[0].split()
    if len(head) != 3:
        raise ConfigurationError("malformed header in structure-constant file")
    dim, rank, hdc = (int(x) for x in head)
    f: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 4:
            raise ConfigurationError(f"malformed line {ln!r}")
        i, j, k = int(parts[0]), int(parts[1]), int(parts[2])
        val = Fraction(parts[3])
        if not (0 <= i < dim and 0 <= j < dim and 0 <= k < dim):
            raise ConfigurationError(f"index out of range in line {ln!r}")
        f.setdefault((i, j), {})[k] = val
    return dim, rank, hdc, f


def algebra_from_cache(series: str, rank: int, path: str) -> LieAlgebra:
    """Rebuild an algebra from a cache file, skipping the constant derivation.

    The root system is re-enumerated (cheap); structure constants come from
    the file and the stored dual Coxeter number is cross-checked against the
    one recomputed from adjoint traces.
    """
    rs = build_root_system(series, rank)
    dim, rank_in, hdc_in, f_raw = load_structure_constants(path)
    npos = len(rs.positive_roots)
    if dim != rank + 2 * npos or rank_in != rank:
        raise ConfigurationError(
            f"cache file {path} does not match type {series}{rank}")
    f: Dict[Tuple[int, int], Dict[int, int]] = {}
    for key, comp in f_raw.items():
        out = {}
        for k, v in comp.items():
            if v.denominator != 1:
                raise ConfigurationError("non-integral cached structure constant")
            out[k] = int(v)
        f[key] = out

    entry_lists: List[List[Tuple[int, int, int]]] = [[] for _ in range(dim)]
    for (a, b), comp in f.items():
        lst = entry_lists[a]
        for k, c in comp.items():
            lst.append((b, k, c))
    ad_entries = [tuple(lst) for lst in entry_lists]

    killing = _killing_matrix(dim, f, ad_entries)
    theta = rs.highest_root
    n2 = rs.norm2(theta)
    ctheta = {i: k * rs.gram[i][i] / n2 for i, k in enumerate(theta) if k}
    kval = sum(ci * cj * killing[i][j] for i, ci in ctheta.items()
               for j, cj in ctheta.items())
    hdc = Fraction(kval, 4)
    if hdc.denominator != 1 or int(hdc) != hdc_in:
        raise ConfigurationError(
            f"cached dual Coxeter number {hdc_in} disagrees with traces ({hdc})")
    hdc = int(hdc)
    pairing = [[Fraction(killing[i][j], 2 * hdc) for j in range(dim)]
               for i in range(dim)]
    pairing_inv = _invert_exact(pairing)
    _verify_inverse(pairing, pairing_inv)
    labels = tuple([f"h{i + 1}" for i in range(rank)]
                   + [f"e{k}" for k in range(npos)]
                   + [f"f{k}" for k in range(npos)])
    L = LieAlgebra(root_system=rs, dim=dim, basis_labels=labels, f=f,
                   pairing=pairing, pairing_inv=pairing_inv,
                   h_dual_coxeter=hdc, ad_entries=ad_entries)
    _verify_pairing_blocks(L)
    return L


def verify_cached_algebra(L: LieAlgebra, path: str) -> bool:
    """True iff the file round-trips bit-exactly against L."""
    import io
    buf = io.StringIO()
    lines = [f"{L.dim} {L.rank} {L.h_dual_coxeter}"]
    for (i, j) in sorted(L.f):
        comp = L.f[(i, j)]
        for k in sorted(comp):
            lines.append(f"{i} {j} {k} {Fraction(comp[k])}")
    with open(path) as fh:
        return fh.read() == "\n".join(lines) + "\n"
