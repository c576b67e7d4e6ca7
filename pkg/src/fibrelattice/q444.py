"""The lattices Q, Q(2), Q' and Q'' on the T_{4,4,4} graph, the isometries sigma_i and flips.

All lattices share one rational coordinate space keyed to the ten vertices of
T_{4,4,4}, listed in the printed layout::

    index  0      1      2      3       4      5      6      7      8      9
    vertex end_2  d2_2   d1_2   centre  d1_1   d2_1   end_1  d1_3   d2_3   end_3

Arm 1 points up, arm 2 left and arm 3 right.  ``dk_i`` sits at distance k from
the centre on arm i.  Vertices at odd distance (d1 and end) are hollow.

The pairing ``dot`` is the one of Q; Q(2) and Q' use twice that form.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence

import sympy
from sympy.matrices.normalforms import hermite_normal_form, smith_normal_form

N = 10
CENTRE = 3
ARMS = {1: (4, 5, 6), 2: (2, 1, 0), 3: (7, 8, 9)}  # (d1, d2, end) per arm
EDGES = ((0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (3, 7), (7, 8), (8, 9))
HOLLOW = tuple(i for i in range(N) if i in {a[0] for a in ARMS.values()} | {a[2] for a in ARMS.values()})
FILLED = tuple(i for i in range(N) if i not in HOLLOW)
STYLES = "".join("c" if i in HOLLOW else "b" for i in range(N))

Vec = tuple  # ten Fractions


def vec(xs: Iterable) -> Vec:
    out = tuple(Fraction(x) for x in xs)
    if len(out) != N:
        raise ValueError(f"expected {N} coordinates")
    return out


def unit(i: int) -> Vec:
    return tuple(Fraction(1 if j == i else 0) for j in range(N))


ZERO = vec([0] * N)


def vadd(*vs: Vec) -> Vec:
    return tuple(sum(xs, Fraction(0)) for xs in zip(*vs))


def vsub(a: Vec, b: Vec) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def vscale(k, a: Vec) -> Vec:
    k = Fraction(k)
    return tuple(k * x for x in a)


@lru_cache(maxsize=None)
def gram_q() -> tuple:
    g = [[0] * N for _ in range(N)]
    for i in range(N):
        g[i][i] = -2
    for a, b in EDGES:
        g[a][b] = g[b][a] = 1
    return tuple(tuple(r) for r in g)


_NEIGHBOURS = tuple(tuple(j for a, b in EDGES for i2, j in ((a, b), (b, a)) if i2 == i) for i in range(N))


def dot(a: Vec, b: Vec) -> Fraction:
    total = Fraction(0)
    for i, x in enumerate(a):
        if x:
            y = -2 * b[i]
            for j in _NEIGHBOURS[i]:
                y += b[j]
            total += x * y
    return total


def sq(a: Vec) -> Fraction:
    return dot(a, a)


# -- lattices -----------------------------------------------------------------

_INVERSES: dict = {}


@dataclass(frozen=True)
class LatticeModel:
    name: str
    basis: tuple  # ambient coordinate vectors
    form_scale: int  # multiple of the Q pairing used on this lattice
    labels: tuple = ()

    def pair(self, a: Vec, b: Vec) -> Fraction:
        return self.form_scale * dot(a, b)

    @property
    def gram(self) -> tuple:
        return tuple(tuple(self.pair(a, b) for b in self.basis) for a in self.basis)

    def _inverse(self) -> tuple:
        inv = _INVERSES.get(self.basis)
        if inv is None:
            B = sympy.Matrix([[sympy.Rational(c.numerator, c.denominator) for c in b] for b in self.basis]).T
            if B.shape[0] != B.shape[1] or B.det() == 0:
                raise ValueError(f"{self.name}: basis is not a basis of the ambient space")
            Bi = B.inv()
            inv = tuple(tuple(Fraction(int(Bi[r, c].p), int(Bi[r, c].q)) for c in range(N)) for r in range(N))
            _INVERSES[self.basis] = inv
        return inv

    def coordinates(self, x: Vec) -> tuple:
        """Coefficients of ``x`` in the basis."""
        inv = self._inverse()
        nz = [(c, v) for c, v in enumerate(x) if v]
        return tuple(sum((inv[r][c] * v for c, v in nz), Fraction(0)) for r in range(N))

    def contains(self, x: Vec) -> bool:
        return all(v.denominator == 1 for v in self.coordinates(x))

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for row in self.gram for v in row)


def discriminant(L: LatticeModel) -> int:
    det = sympy.Matrix([[sympy.Rational(v.numerator, v.denominator) for v in row] for row in L.gram]).det()
    if det == 0:
        raise ValueError(f"{L.name} is degenerate")
    if not det.is_integer:
        raise ValueError(f"{L.name} has non-integral discriminant {det}")
    return int(det)


def _hnf_basis(generators: Sequence[Vec], denom: int) -> tuple:
    """A basis of the Z-span of ``generators`` (all in (1/denom) Z^N)."""
    rows = [[int(x * denom) for x in g] for g in generators]
    for r, g in zip(rows, generators):
        if any(Fraction(x, denom) != y for x, y in zip(r, g)):
            raise ValueError("generator not in (1/denom) Z^N")
    H = hermite_normal_form(sympy.Matrix(rows).T)
    return tuple(vec(Fraction(int(H[i, j]), denom) for i in range(N)) for j in range(H.shape[1]))


# -- named vectors -----------------------------------------------------------------


C444 = vec([0, 1, 1, 2, 1, 1, 0, 1, 1, 0])


def _f_from(config: Sequence[Vec], i: int) -> Vec:
    """f_i: 1 along arm i and the centre, 1/2, 0, -1/2 along the other two arms."""
    out = vscale(1, config[CENTRE])
    for arm, (a1, a2, a3) in ARMS.items():
        if arm == i:
            coeffs = (1, 1, 1)
        else:
            coeffs = (Fraction(1, 2), 0, Fraction(-1, 2))
        for idx, c in zip((a1, a2, a3), coeffs):
            out = vadd(out, vscale(c, config[idx]))
    return out


def _e7_cycle_from(config: Sequence[Vec], i: int) -> Vec:
    """Kodaira-Neron cycle of the E~7 inside the configuration avoiding end_i and d2_i."""
    j, k = [a for a in (1, 2, 3) if a != i]
    parts = [vscale(4, config[CENTRE]), vscale(2, config[ARMS[i][0]])]
    for a in (j, k):
        d1, d2, end = ARMS[a]
        parts += [vscale(3, config[d1]), vscale(2, config[d2]), config[end]]
    return vadd(*parts)


def _e6_cycle_from(config: Sequence[Vec]) -> Vec:
    parts = [vscale(3, config[CENTRE])]
    for d1, d2, _end in ARMS.values():
        parts += [vscale(2, config[d1]), config[d2]]
    return vadd(*parts)


@dataclass(frozen=True)
class NamedVectors:
    C: Vec
    f: dict  # i -> f_i
    e: Vec
    v: dict  # i -> v_i
    e7: dict  # i -> e_i


@dataclass(frozen=True)
class TConfiguration:
    vectors: tuple  # ten ambient vectors in vertex order

    def end(self, i: int) -> Vec:
        return self.vectors[ARMS[i][2]]

    def with_end(self, i: int, x: Vec) -> "TConfiguration":
        vs = list(self.vectors)
        vs[ARMS[i][2]] = x
        return TConfiguration(tuple(vs))

    def f(self, i: int) -> Vec:
        return _f_from(self.vectors, i)

    def e(self) -> Vec:
        return _e6_cycle_from(self.vectors)

    def e7(self, i: int) -> Vec:
        return _e7_cycle_from(self.vectors, i)

    def key(self) -> tuple:
        return tuple(self.vectors)

    def ends_key(self) -> tuple:
        return tuple(self.end(i) for i in (1, 2, 3))


STANDARD = TConfiguration(tuple(unit(i) for i in range(N)))


@dataclass(frozen=True)
class Tower:
    Q: LatticeModel
    Q2: LatticeModel
    Qp: LatticeModel
    Qpp: LatticeModel
    named: NamedVectors
    standard: TConfiguration


@lru_cache(maxsize=None)
def build_tower() -> Tower:
    units = tuple(unit(i) for i in range(N))
    labels = ("end_2", "d2_2", "d1_2", "centre", "d1_1", "d2_1", "end_1", "d1_3", "d2_3", "end_3")
    Q = LatticeModel("Q444", units, 1, labels)
    Q2 = LatticeModel("Q444(2)", units, 2, labels)
    qp_basis = tuple(vscale(Fraction(1, 2), u) if i in HOLLOW else u for i, u in enumerate(units))
    Qp = LatticeModel("Q'444", qp_basis, 2, labels)
    f = {i: _f_from(units, i) for i in (1, 2, 3)}
    e = vadd(f[1], f[2], f[3])
    v = {i: units[ARMS[i][2]] for i in (1, 2, 3)}
    e7 = {i: _e7_cycle_from(units, i) for i in (1, 2, 3)}
    gens = list(units) + [vscale(Fraction(1, 2), e7[i]) for i in (1, 2, 3)]
    Qpp = LatticeModel("Q''444", _hnf_basis(gens, 2), 1)
    named = NamedVectors(C444, f, e, v, e7)
    return Tower(Q, Q2, Qp, Qpp, named, STANDARD)


def in_qpp(x: Vec) -> bool:
    return build_tower().Qpp.contains(x)


def divisible_by_two_in_qp(x: Vec) -> bool:
    """x/2 lies in Q': even at filled vertices, integral at hollow ones."""
    for i, c in enumerate(x):
        if i in HOLLOW:
            if c.denominator != 1:
                return False
        elif c.denominator != 1 or c.numerator % 2:
            return False
    return True


# -- maximality of Q' ---------------------------------------------------------------


@dataclass
class MaximalityReport:
    splitting_ok: bool
    h2_gram: tuple
    c_projection: tuple
    dual_group_order: int
    parity_values: dict  # "u/2", "v/2", "(u+v)/2" -> x^2 + C.x
    basis_parity_ok: bool
    steps: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (self.splitting_ok and self.basis_parity_ok and self.dual_group_order == 4
                and all(val % 2 for val in self.parity_values.values()))


def verify_maximality() -> MaximalityReport:
    """Split Q' as Z(-1)^8 + H(2), list the overlattices, and test x^2 = C.x mod 2 on each."""
    T = build_tower()
    Qp = T.Qp
    p = Qp.pair
    steps = []

    def split(xs: Sequence[Vec], b: Vec) -> list:
        if p(b, b) != -1:
            raise ValueError("splitting needs a vector of square -1")
        return [vadd(x, vscale(p(x, b), b)) for x in xs]

    basis = list(Qp.basis)
    minus_one = [basis[i] for i in HOLLOW]
    rest = [basis[i] for i in FILLED]  # d2_2, centre, d2_1, d2_3
    C = C444
    for b in minus_one:
        rest = split(rest, b)
        C = split([C], b)[0]
    g4 = [[p(a, b) for b in rest] for a in rest]
    centre = rest[1]
    d4_ok = p(centre, centre) == -1 and all(g4[i][i] == -2 for i in (0, 2, 3)) \
        and all(g4[1][i] == 1 for i in (0, 2, 3)) and g4[0][2] == g4[0][3] == g4[2][3] == 0
    steps.append(("D4 after removing hollow vertices", d4_ok))
    minus_one.append(centre)
    arms = split([rest[0], rest[2], rest[3]], centre)
    C = split([C], centre)[0]
    a2_ok = all(p(a, a) == -1 for a in arms) and all(p(a, b) == 1 for a in arms for b in arms if a is not b)
    steps.append(("three square -1 vectors with pairwise product 1", a2_ok))
    a = arms[0]
    minus_one.append(a)
    u, v = split(arms[1:], a)
    C = split([C], a)[0]
    h2 = ((p(u, u), p(u, v)), (p(v, u), p(v, v)))
    # C projected to span(u, v): solve C = x u + y v + (part orthogonal to u, v)
    det = h2[0][0] * h2[1][1] - h2[0][1] * h2[1][0]
    cu, cv = p(C, u), p(C, v)
    x = (cu * h2[1][1] - cv * h2[0][1]) / det
    y = (cv * h2[0][0] - cu * h2[1][0]) / det
    orth = all(p(m1, m2) == (-1 if m1 is m2 else 0) for m1 in minus_one for m2 in minus_one)
    cross = all(p(m, w) == 0 for m in minus_one for w in (u, v))
    splitting_ok = d4_ok and a2_ok and h2 == ((0, 2), (2, 0)) and orth and cross and len(minus_one) == 8
    steps.append(("Z(-1)^8 + H(2)", splitting_ok))
    # the change of basis is unimodular, so the dual quotient is that of H(2)
    dual_order = abs(det)
    half = Fraction(1, 2)
    cands = {"u/2": vscale(half, u), "v/2": vscale(half, v), "(u+v)/2": vscale(half, vadd(u, v))}
    parity = {k: int(p(w, w) + p(C444, w)) for k, w in cands.items()}
    basis_ok = all((p(b, b) - p(C444, b)) % 2 == 0 for b in Qp.basis)
    return MaximalityReport(splitting_ok, h2, (x, y), int(dual_order), parity, basis_ok, steps)


def dual_group_order_snf(L: LatticeModel) -> int:
    """Order of L^dual / L via the Smith normal form of the Gram matrix."""
    G = sympy.Matrix([[int(v) for v in row] for row in L.gram])
    S = smith_normal_form(G)
    out = 1
    for i in range(min(S.shape)):
        out *= abs(int(S[i, i]))
    return out


# -- isometries and words -------------------------------------------------------


@lru_cache(maxsize=None)
def sigma(i: int) -> tuple:
    """Matrix of sigma_i on ambient coordinates: v_i -> e_i - v_i, other vertices fixed."""
    if i not in (1, 2, 3):
        raise ValueError("sigma index must be 1, 2 or 3")
    T = build_tower()
    col_img = vsub(T.named.e7[i], T.named.v[i])
    end = ARMS[i][2]
    M = [[Fraction(1 if r == c else 0) for c in range(N)] for r in range(N)]
    for r in range(N):
        M[r][end] = col_img[r]
    return tuple(tuple(row) for row in M)


IDENTITY = tuple(tuple(Fraction(1 if r == c else 0) for c in range(N)) for r in range(N))


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> tuple:
    return tuple(tuple(sum((A[r][k] * B[k][c] for k in range(N)), Fraction(0)) for c in range(N)) for r in range(N))


def matvec(A: Sequence[Sequence], x: Vec) -> Vec:
    return tuple(sum((A[r][k] * x[k] for k in range(N)), Fraction(0)) for r in range(N))


def word_matrix(word: Sequence[int]) -> tuple:
    M = IDENTITY
    for i in word:
        M = matmul(M, sigma(i))
    return M


def sigma_apply(i: int, x: Vec) -> Vec:
    """sigma_i(x) without forming the matrix: only the end_i coordinate moves."""
    c = x[ARMS[i][2]]
    if not c:
        return x
    col = sigma(i)
    end = ARMS[i][2]
    return tuple(x[r] + c * (col[r][end] - (1 if r == end else 0)) for r in range(N))


def apply_word(word: Sequence[int], x):
    """sigma_{i1} sigma_{i2} ... sigma_{in} applied to a vector or a configuration."""
    if isinstance(x, TConfiguration):
        return TConfiguration(tuple(apply_word(word, y) for y in x.vectors))
    for i in reversed(tuple(word)):
        x = sigma_apply(i, x)
    return x


def is_isometry(M: Sequence[Sequence]) -> bool:
    g = gram_q()
    for a in range(N):
        for b in range(N):
            val = sum(M[r][a] * g[r][s] * M[s][b] for r in range(N) for s in range(N) if M[r][a] and M[s][b])
            if val != g[a][b]:
                return False
    return True


def coxeter_relations_hold() -> dict:
    """sigma_i^2 = 1 and (sigma_i sigma_j)^3 = 1 for i != j, as matrix identities."""
    out = {}
    for i in (1, 2, 3):
        out[f"s{i}^2"] = word_matrix([i, i]) == IDENTITY
    for i, j in ((1, 2), (1, 3), (2, 3)):
        out[f"(s{i}s{j})^3"] = word_matrix([i, j] * 3) == IDENTITY
        out[f"(s{i}s{j})^2 != 1"] = word_matrix([i, j] * 2) != IDENTITY
    return out


# -- configurations and flips ----------------------------------------------------


def is_configuration(T: TConfiguration) -> bool:
    vs = T.vectors
    g = gram_q()
    for a in range(N):
        for b in range(a, N):
            if dot(vs[a], vs[b]) != g[a][b]:
                return False
    return True


def extends_standard_t333(T: TConfiguration) -> bool:
    ends = {a[2] for a in ARMS.values()}
    return all(T.vectors[i] == unit(i) for i in range(N) if i not in ends)


def is_realisable(T: TConfiguration) -> bool:
    if not extends_standard_t333(T) or not is_configuration(T):
        return False
    if not all(in_qpp(T.end(i)) for i in (1, 2, 3)):
        return False
    odd = [a[0] for a in ARMS.values()] + [a[2] for a in ARMS.values()]
    return all(divisible_by_two_in_qp(T.vectors[i]) for i in odd)


def flip(T: TConfiguration, arm: int, check: bool = True) -> TConfiguration:
    """Replace the end of ``arm`` by e' - end, e' the E~7 cycle of T avoiding that end."""
    if arm not in (1, 2, 3):
        raise ValueError("arm must be 1, 2 or 3")
    if check and not is_realisable(T):
        raise ValueError("flip needs a realisable configuration")
    return T.with_end(arm, vsub(T.e7(arm), T.end(arm)))


def candidate_set() -> set:
    nv = build_tower().named
    return {vadd(nv.e, nv.f[i]) for i in (1, 2, 3)} | {vsub(nv.e, nv.f[i]) for i in (1, 2, 3)}


def is_one_realisable(T: TConfiguration) -> Optional[int]:
    nv = build_tower().named
    target = {vadd(nv.e, nv.f[1]), vsub(nv.e, nv.f[1])}
    e = T.e()
    for i in (1, 2, 3):
        fi = T.f(i)
        if {vadd(e, fi), vsub(e, fi)} == target:
            return i
    return None


def is_one_realisable_vector(x: Vec, arm: int) -> bool:
    nv = build_tower().named
    for idx in range(N):
        if idx == ARMS[arm][2]:
            continue
        if idx in {a[2] for a in ARMS.values()}:
            continue
        want = 1 if idx == ARMS[arm][1] else 0
        if dot(x, unit(idx)) != want:
            return False
    vals = sorted((dot(x, vadd(nv.e, nv.f[1])), dot(x, vsub(nv.e, nv.f[1]))))
    return vals == [0, 2]


def two_realisable_arm(x: Vec) -> Optional[int]:
    """The j for which x.(e - f_j) = 2 while the other two vanish, else None."""
    nv = build_tower().named
    vals = [dot(x, vsub(nv.e, nv.f[j])) for j in (1, 2, 3)]
    if sorted(vals) == [0, 0, 2]:
        return vals.index(2) + 1
    return None


# -- candidates and extensions --------------------------------------------------------


def f_combination(a, b, c) -> Vec:
    nv = build_tower().named
    return vadd(vscale(a, nv.f[1]), vscale(b, nv.f[2]), vscale(c, nv.f[3]))


def orthogonal_complement_of_t333() -> tuple:
    """A Z-basis (in ambient coordinates) of the vectors of Q'' orthogonal to T_{3,3,3}."""
    T = build_tower()
    ends = {a[2] for a in ARMS.values()}
    t333 = [unit(i) for i in range(N) if i not in ends]
    B = T.Qpp.basis
    M = sympy.Matrix([[sympy.Rational(dot(b, t).numerator, dot(b, t).denominator) for b in B] for t in t333])
    kernel = M.nullspace()
    rows = []
    for k in kernel:
        den = sympy.ilcm(*[sympy.fraction(x)[1] for x in k])
        rows.append([int(x * den) for x in k])
    sat = _saturate(sympy.Matrix(rows))
    out = []
    for r in range(sat.shape[0]):
        coeffs = [int(sat[r, c]) for c in range(sat.shape[1])]
        out.append(vadd(*[vscale(k, b) for k, b in zip(coeffs, B)]))
    return tuple(out)


def _saturate(H: sympy.Matrix) -> sympy.Matrix:
    """Rows spanning (rowspace of H tensor Q) intersected with Z^n."""
    K = H.nullspace()
    if not K:
        return sympy.eye(H.shape[1])
    den = [sympy.ilcm(*[sympy.fraction(x)[1] for x in k]) for k in K]
    A = sympy.Matrix([[int(x * dn) for x in k] for k, dn in zip(K, den)])
    # the row space of H is the kernel of A, since H has full row rank
    return _integral_kernel(A)


def _integral_kernel(A: sympy.Matrix) -> sympy.Matrix:
    """Basis rows of {x in Z^n : A x = 0} via column-style HNF of [A; I]."""
    m, n = A.shape
    # unimodular column operations on [A; I] bring A to echelon form
    rows = [list(map(int, r)) for r in A.col_join(sympy.eye(n)).T.tolist()]
    pivot_row = 0
    for col in range(m):
        # gcd elimination on coordinate ``col`` among rows[pivot_row:]
        while True:
            nz = [r for r in range(pivot_row, n) if rows[r][col] != 0]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda r: abs(rows[r][col]))
            piv = nz[0]
            for r in nz[1:]:
                q = rows[r][col] // rows[piv][col]
                rows[r] = [a - q * b for a, b in zip(rows[r], rows[piv])]
        nz = [r for r in range(pivot_row, n) if rows[r][col] != 0]
        if nz:
            r = nz[0]
            rows[pivot_row], rows[r] = rows[r], rows[pivot_row]
            pivot_row += 1
    kernel_rows = [r[m:] for r in rows[pivot_row:]]
    return sympy.Matrix(kernel_rows)


def candidate_vectors(box: int = 4) -> set:
    """Vectors of T_{3,3,3}-perp with square -2 and product 0 or 2 with each v_i."""
    nv = build_tower().named
    out = set()
    rng = range(-box, box + 1)
    for a in rng:
        for b in rng:
            for c in rng:
                x = f_combination(a, b, c)
                if sq(x) != -2:
                    continue
                if all(dot(x, nv.v[i]) in (0, 2) for i in (1, 2, 3)):
                    out.add(x)
    return out


@dataclass
class ExtensionResult:
    F: tuple
    vector: Vec
    forms_t334: bool
    realisable: bool
    F_even: bool


def extends_t333_in_arm(x: Vec, arm: int) -> bool:
    """x has square -2, lies in Q'' and pairs with T_{3,3,3} exactly as the end of ``arm``."""
    if sq(x) != -2 or not in_qpp(x):
        return False
    ends = {a[2] for a in ARMS.values()}
    g = gram_q()
    end = ARMS[arm][2]
    return all(dot(x, unit(i)) == g[end][i] for i in range(N) if i not in ends)


def t333_extension(F: Sequence[int], arm: int = 1) -> ExtensionResult:
    """v + f - (f^2/2) e with f the representative of F (mod Ze) orthogonal to v = v_arm."""
    nv = build_tower().named
    v = nv.v[arm]
    Fv = f_combination(*F)
    f = vsub(Fv, vscale(dot(v, Fv), nv.e))  # v.e = 1
    x = vsub(vadd(v, f), vscale(sq(f) / 2, nv.e))
    ok = extends_t333_in_arm(x, arm)
    a, b, c = F
    even = (a - b) % 2 == 0 and (b - c) % 2 == 0
    return ExtensionResult(tuple(F), x, ok, ok and divisible_by_two_in_qp(x), even)


@dataclass
class TorsorReport:
    samples: list

    @property
    def ok(self) -> bool:
        return all(r.forms_t334 and r.realisable == r.F_even for r in self.samples)


def t333_extension_torsor_check(sample_size: int = 100, seed: int = 0, spread: int = 5) -> TorsorReport:
    rng = random.Random(seed)
    out = []
    for k in range(sample_size):
        F = tuple(rng.randint(-spread, spread) for _ in range(3))
        out.append(t333_extension(F, arm=1 + k % 3))
    return TorsorReport(out)


# -- the flip table -----------------------------------------------------------------


def mod_e_equal(x: Vec, y: Vec) -> bool:
    """Whether x - y is an integer multiple of e."""
    e = build_tower().named.e
    diff = vsub(x, y)
    k = None
    for a, b in zip(diff, e):
        if b == 0:
            if a != 0:
                return False
            continue
        r = a / b
        if k is None:
            k = r
        elif r != k:
            return False
    return k is None or k.denominator == 1


T_WORD = (3, 1, 2)
FLIP_COLUMNS = ("t^2n", "t^2n+1", "t^2n s3", "t^2n+1 s3", "t^2n s3 s1", "t^2n+1 s3 s1")


def flip_column_word(column: str, n: int) -> tuple:
    power = 2 * n + (1 if "+1" in column else 0)
    tail = ()
    if "s3 s1" in column:
        tail = (3, 1)
    elif "s3" in column:
        tail = (3,)
    return T_WORD * power + tail


def flip_table_expected(n: int) -> dict:
    """The printed entries gamma(v_i) - v_i mod Ze, keyed by (column, i)."""
    nv = build_tower().named
    f2, f3 = nv.f[2], nv.f[3]

    def D(k):
        return vscale(2 * k, vsub(f2, f3))

    p2 = vscale(2, f2)
    m3 = vscale(-2, f3)
    return {
        ("t^2n", 1): D(n), ("t^2n", 2): D(n), ("t^2n", 3): D(n),
        ("t^2n+1", 1): vadd(D(n), p2), ("t^2n+1", 2): vadd(D(n), m3), ("t^2n+1", 3): vadd(D(n), m3),
        ("t^2n s3", 1): D(n), ("t^2n s3", 2): D(n), ("t^2n s3", 3): vadd(D(n), m3),
        ("t^2n+1 s3", 1): vadd(D(n), p2), ("t^2n+1 s3", 2): vadd(D(n), m3), ("t^2n+1 s3", 3): D(n + 1),
        ("t^2n s3 s1", 1): vadd(D(n), p2), ("t^2n s3 s1", 2): D(n), ("t^2n s3 s1", 3): vadd(D(n), m3),
        ("t^2n+1 s3 s1", 1): D(n + 1), ("t^2n+1 s3 s1", 2): vadd(D(n), m3), ("t^2n+1 s3 s1", 3): D(n + 1),
    }


def flip_table_check(ns: Iterable[int] = (0, 1, 2)) -> dict:
    """For every displayed entry: does gamma(v_i) - v_i agree with it modulo Ze?"""
    nv = build_tower().named
    out = {}
    for n in ns:
        expected = flip_table_expected(n)
        for col in FLIP_COLUMNS:
            M = word_matrix(flip_column_word(col, n))
            for i in (1, 2, 3):
                got = vsub(matvec(M, nv.v[i]), nv.v[i])
                out[(n, col, i)] = mod_e_equal(got, expected[(col, i)])
    return out


# -- the affine Coxeter group of type A~2, as an independent model ----------------


def affine_permutation_ball(radius: int) -> list:
    """Ball sizes of the Cayley graph of the affine symmetric group on 3 letters.

    Elements are windows [f(1), f(2), f(3)] of bijections f of Z with
    f(i+3) = f(i) + 3; generators swap adjacent positions (s_0 wraps around).
    """
    start = (1, 2, 3)

    def step(w, g):
        a, b, c = w
        if g == 1:
            return (b, a, c)
        if g == 2:
            return (a, c, b)
        return (c - 3, b, a + 3)

    seen = {start: 0}
    frontier = [start]
    sizes = [1]
    for r in range(1, radius + 1):
        nxt = []
        for w in frontier:
            for g in (0, 1, 2):
                x = step(w, g)
                if x not in seen:
                    seen[x] = r
                    nxt.append(x)
        frontier = nxt
        sizes.append(len(seen))
    return sizes


def gamma_ball(radius: int) -> list:
    """Ball sizes of Gamma = <sigma_1, sigma_2, sigma_3> by BFS on matrices."""
    seen = {IDENTITY}
    frontier = [IDENTITY]
    sizes = [1]
    for _ in range(radius):
        nxt = []
        for M in frontier:
            for i in (1, 2, 3):
                X = matmul(M, sigma(i))
                if X not in seen:
                    seen.add(X)
                    nxt.append(X)
        frontier = nxt
        sizes.append(len(seen))
    return sizes


def flip_sequence(word: Sequence[int], start: TConfiguration = STANDARD) -> TConfiguration:
    T = start
    for arm in word:
        T = flip(T, arm)
    return T


def iterating_flips_check(n_words: int = 200, max_len: int = 8, seed: int = 0) -> list:
    """Words for which flipping in sequence disagrees with the word acting on the standard configuration."""
    rng = random.Random(seed)
    bad = []
    for _ in range(n_words):
        word = tuple(rng.choice((1, 2, 3)) for _ in range(rng.randint(0, max_len)))
        if flip_sequence(word) != apply_word(word, STANDARD):
            bad.append(word)
    return bad
