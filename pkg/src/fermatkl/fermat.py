"""Cusp combinatorics of the Fermat-curve groups.

The level-N Fermat group is the kernel of the exponent-sum map
(level 2 group) -> (Z/N)^2 on the free generators g1, g2.  It is normal
in PSL(2, Z) of index 6N^2 with 3N cusps of common width 2N.  This
module provides the representative system, cusp classification with an
explicit witness matrix, coset representatives and the dictionary
between cusps and the ramification points of the degree-N^2 Belyi map
of the Fermat curve x^N + y^N = 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import pi

from .sl2 import (
    CUSP_INF,
    CUSP_ONE,
    CUSP_ZERO,
    Cusp,
    GammaWord,
    Mat2Z,
    GEN1,
    GEN2,
    word_from_syllables,
    word_to_matrix,
)


@dataclass(frozen=True)
class GroupId:
    """One of PSL(2,Z) itself, the level-2 group, or a Fermat group."""

    kind: str  # "gamma1" | "gamma2" | "gamma_n"
    n: int = 1

    def __post_init__(self):
        if self.kind not in ("gamma1", "gamma2", "gamma_n"):
            raise ValueError(f"unknown group kind {self.kind!r}")
        if self.n < 1:
            raise ValueError("level must be >= 1")

    @property
    def index(self) -> int:
        """Index in PSL(2, Z)."""
        if self.kind == "gamma1":
            return 1
        if self.kind == "gamma2":
            return 6
        return 6 * self.n * self.n

    @property
    def width(self) -> int:
        """Common cusp width."""
        if self.kind == "gamma1":
            return 1
        if self.kind == "gamma2":
            return 2
        return 2 * self.n

    @property
    def volume(self) -> float:
        """Hyperbolic volume pi * index / 3."""
        return pi * self.index / 3.0

    def __str__(self):
        if self.kind == "gamma_n":
            return f"Gamma_{self.n}"
        return "Gamma(1)" if self.kind == "gamma1" else "Gamma(2)"


GAMMA1 = GroupId("gamma1")
GAMMA2 = GroupId("gamma2")


def gamma_n(n: int) -> GroupId:
    return GroupId("gamma_n", n)


@dataclass(frozen=True)
class VolumeData:
    index: int
    vol: float
    residue: float

    @classmethod
    def of(cls, group: GroupId) -> "VolumeData":
        idx = group.index
        vol = pi * idx / 3.0
        return cls(index=idx, vol=vol, residue=1.0 / vol)


KIND_A = "A"  # over 0 under the Belyi map
KIND_B = "B"  # over 1
KIND_C = "C"  # over infinity

_BASE_OF_KIND = {KIND_A: CUSP_ZERO, KIND_B: CUSP_ONE, KIND_C: CUSP_INF}


@dataclass(frozen=True)
class RamPoint:
    """Ramification point of the Belyi map, with symbolic coordinates.

    Kind A is (0 : zeta^j : 1), kind B is (zeta^j : 0 : 1) and kind C is
    (eps * zeta^j : 1 : 0), where zeta = e^(2 pi i / n) and
    eps = e^(pi i / n).  Only the exponent data is stored.
    """

    n: int
    kind: str
    j: int

    def __post_init__(self):
        if not 0 <= self.j < self.n:
            raise ValueError("index out of range")

    @property
    def beta_image(self) -> Cusp:
        return _BASE_OF_KIND[self.kind]

    def coords(self) -> str:
        z = f"zeta^{self.j}" if self.j else "1"
        if self.kind == KIND_A:
            return f"(0 : {z} : 1)"
        if self.kind == KIND_B:
            return f"({z} : 0 : 1)"
        e = f"eps*zeta^{self.j}" if self.j else "eps"
        return f"({e} : 1 : 0)"


@dataclass(frozen=True)
class FermatCusp:
    """A cusp of the level-n Fermat group.

    ``rep`` is the representative from the standard system
    S_0 = {0, 2, ..., 2n-2}, S_1 = {1, 3, ..., 2n-1},
    S_inf = {1/2, ..., 1/(2n-2), inf}; ``kind``/``index`` identify the
    matching ramification point.
    """

    n: int
    kind: str
    index: int
    rep: Cusp

    def __str__(self):
        return f"{self.rep}"


def _rep_of_class(base: Cusp, t: int, n: int) -> Cusp:
    """Standard representative for invariant t at the given base cusp."""
    t %= n
    if base == CUSP_ZERO:
        return Cusp(2 * t, 1)
    if base == CUSP_ONE:
        return Cusp(2 * t + 1, 1)
    return CUSP_INF if t == 0 else Cusp(1, 2 * t)


def _kind_index_of(base: Cusp, t: int, n: int) -> tuple[str, int]:
    """Ramification kind/index for class invariant t.

    Correspondence 2n-2j <-> A_j, 2n-2j+1 <-> B_j, 1/(2n-2j) <-> C_j,
    anchored at 0 <-> (0:1:1), 1 <-> (1:0:1), inf <-> (eps:1:0); each
    family reduces to index (n - t) mod n in the class invariant t.
    """
    t %= n
    return {CUSP_ZERO: KIND_A, CUSP_ONE: KIND_B, CUSP_INF: KIND_C}[base], (n - t) % n


def _fermat_cusp(base: Cusp, t: int, n: int) -> FermatCusp:
    kind, j = _kind_index_of(base, t, n)
    return FermatCusp(n=n, kind=kind, index=j, rep=_rep_of_class(base, t, n))


@lru_cache(maxsize=None)
def cusp_reps(n: int) -> tuple[FermatCusp, ...]:
    """The 3n cusps in the standard order S_0, S_1, S_inf.

    The last element of S_inf is stored as the cusp at infinity
    (1/(2n) is equivalent to it via g2^n).
    """
    if n < 1:
        raise ValueError("level must be >= 1")
    out = [_fermat_cusp(CUSP_ZERO, t, n) for t in range(n)]
    out += [_fermat_cusp(CUSP_ONE, t, n) for t in range(n)]
    out += [_fermat_cusp(CUSP_INF, t, n) for t in range(1, n)]
    out.append(_fermat_cusp(CUSP_INF, 0, n))
    return tuple(out)


def ramification_point(fc: FermatCusp) -> RamPoint:
    return RamPoint(n=fc.n, kind=fc.kind, j=fc.index)


def fermat_cusp_of_ram(n: int, kind: str, j: int) -> FermatCusp:
    """Inverse of ramification_point."""
    j %= n
    base = {KIND_A: CUSP_ZERO, KIND_B: CUSP_ONE, KIND_C: CUSP_INF}[kind]
    return _fermat_cusp(base, (n - j) % n, n)


@lru_cache(maxsize=None)
def coset_reps(n: int) -> tuple[Mat2Z, ...]:
    """The n^2 matrices g1^a g2^b, (a, b) lexicographic."""
    out = []
    for a in range(n):
        left = GEN1 ** a
        for b in range(n):
            out.append(left * GEN2 ** b)
    return tuple(out)


def cusp_width(group: GroupId, c: Cusp) -> int:
    """1 for the full modular group, 2 at level 2, 2n for the Fermat
    groups; independent of the cusp."""
    return group.width


def gamma2_base(c: Cusp) -> Cusp:
    """Level-2 class of a cusp by parity of the reduced pair."""
    podd, qodd = c.p & 1, c.q & 1
    if podd and qodd:
        return CUSP_ONE
    if podd:
        return CUSP_INF
    return CUSP_ZERO


def _cusp_reduction_steps(c: Cusp) -> tuple[Cusp, list[tuple[int, int]]]:
    """Euclidean reduction of a cusp to its level-2 base.

    Returns (base, steps) where applying g_gen^e for the listed steps in
    order maps c to base.
    """
    p, q = c.p, c.q
    steps: list[tuple[int, int]] = []
    while True:
        if q == 0 or p == 0:
            break
        ap, aq = abs(p), abs(q)
        if ap == aq:
            # coprime, so (p, q) = (+-1, +-1)
            if p * q > 0:
                break
            # (-1 : 1) -> (1 : 1) via g1
            steps.append((1, 1))
            p += 2 * q
            break
        if ap > aq:
            e = -_round_half_down(p, 2 * q)
            steps.append((1, e))
            p += 2 * e * q
        else:
            e = -_round_half_down(q, 2 * p)
            steps.append((2, e))
            q += 2 * e * p
    return Cusp(p, q), steps


def _round_half_down(num: int, den: int) -> int:
    if den < 0:
        num, den = -num, -den
    quot, rem = divmod(num, den)
    if 2 * rem > den:
        quot += 1
    return quot


def gamma_n_class(p: int, q: int, n: int) -> tuple[Cusp, int]:
    """Fast classifier: level-2 base and the mod-n class invariant of the
    cusp (p : q).

    The invariant is r1, r1+r2, r2 (mod n) of any level-2 matrix mapping
    the base to the cusp, for bases 0, 1, infinity respectively.
    """
    r1 = r2 = 0
    while True:
        if q == 0 or p == 0:
            break
        ap, aq = abs(p), abs(q)
        if ap == aq:
            if p * q > 0:
                break
            r1 -= 1
            p += 2 * q
            break
        if ap > aq:
            e = -_round_half_down(p, 2 * q)
            r1 -= e
            p += 2 * e * q
        else:
            e = -_round_half_down(q, 2 * p)
            r2 -= e
            q += 2 * e * p
    if q == 0:
        return CUSP_INF, r2 % n
    if p == 0:
        return CUSP_ZERO, r1 % n
    return CUSP_ONE, (r1 + r2) % n


# Stabilizer generator words of the three base cusps in the level-2 group.
_STAB_WORD = {
    CUSP_ZERO: ((2, 1),),            # g2 fixes 0
    CUSP_ONE: ((2, 1), (1, -1)),     # g2 g1^-1 fixes 1
    CUSP_INF: ((1, 1),),             # g1 fixes inf
}


def classify_cusp(c: Cusp, n: int) -> tuple[FermatCusp, Mat2Z]:
    """Class of a cusp in the level-n Fermat group, with witness.

    Returns (fc, w) where fc is the standard representative data and w
    is an element of the Fermat group with w(fc.rep) = c.
    """
    if n < 1:
        raise ValueError("level must be >= 1")
    base, steps = _cusp_reduction_steps(c)
    # rho = g_{s1}^{-e1} ... g_{sm}^{-em} maps base to c.
    rho_syl = [(g, -e) for g, e in steps]
    rho = word_from_syllables(rho_syl)
    r1, r2 = rho.r1, rho.r2
    if base == CUSP_ZERO:
        t_inv, comp = r1 % n, r2
        std_syl, std_gen = [(1, t_inv)], 1
    elif base == CUSP_ONE:
        t_inv, comp = (r1 + r2) % n, r2
        std_syl, std_gen = [(1, t_inv)], 1
    else:
        t_inv, comp = r2 % n, r1
        std_syl, std_gen = [(2, t_inv)], 2
    fc = _fermat_cusp(base, t_inv, n)
    # Witness w = rho * stab^t * std^-1 with t chosen to kill the free
    # exponent sum mod n.
    t_fix = (-comp) % n
    stab = list(_STAB_WORD[base]) * t_fix
    inv_std = [(std_gen, -t_inv)]
    w_word = word_from_syllables(list(rho.syllables) + stab + inv_std)
    return fc, word_to_matrix(w_word)


def classify_cusp_word(c: Cusp, n: int) -> tuple[FermatCusp, GammaWord]:
    """Like classify_cusp but returning the witness as a word."""
    base, steps = _cusp_reduction_steps(c)
    rho = word_from_syllables([(g, -e) for g, e in steps])
    r1, r2 = rho.r1, rho.r2
    if base == CUSP_ZERO:
        t_inv, comp, std_gen = r1 % n, r2, 1
    elif base == CUSP_ONE:
        t_inv, comp, std_gen = (r1 + r2) % n, r2, 1
    else:
        t_inv, comp, std_gen = r2 % n, r1, 2
    fc = _fermat_cusp(base, t_inv, n)
    t_fix = (-comp) % n
    stab = list(_STAB_WORD[base]) * t_fix
    w_word = word_from_syllables(
        list(rho.syllables) + stab + [(std_gen, -t_inv)]
    )
    return fc, w_word


def classify_rep_index(p: int, q: int, n: int) -> int:
    """Index of the class of (p : q) in the cusp_reps(n) ordering."""
    base, t = gamma_n_class(p, q, n)
    if base == CUSP_ZERO:
        return t
    if base == CUSP_ONE:
        return n + t
    # S_inf block: reps 1/2 ... 1/(2n-2) then inf (t = 0) last.
    return 2 * n + (t - 1 if t else n - 1)


def _word_power(pair: tuple[tuple[int, int], ...], e: int) -> list[tuple[int, int]]:
    """Syllables of (word given by pair)^e, e of either sign."""
    if e >= 0:
        return list(pair) * e
    inv = [(g, -x) for g, x in reversed(pair)]
    return inv * (-e)


def equivalence_witnesses(n: int):
    """Explicit witness words for the five cusp-equivalence families
    used when extending scattering constants to arbitrary cusp pairs,
    as (word, source, target) triples.

    j runs over even and k over odd values in 1..2n; every word lies in
    the level-n group and maps its source cusp to its target.
    """
    g2g1inv = ((2, 1), (1, -1))
    g1g2inv = ((1, 1), (2, -1))
    out = []
    for l in range(2, 2 * n + 1, 2):  # -l ~ 2n-l via g1^n
        out.append((word_from_syllables([(1, n)]), Cusp(-l, 1), Cusp(2 * n - l, 1)))
    for j in range(2, 2 * n + 1, 2):  # -1/j ~ 1/(2n-j) via g2^n
        out.append((word_from_syllables([(2, n)]), Cusp(-1, j), Cusp(1, 2 * n - j)))
    for k in range(1, 2 * n, 2):  # -1/k ~ 2n-k
        w = word_from_syllables(
            [(1, (2 * n - k - 1) // 2)]
            + _word_power(g1g2inv, (k - 1) // 2)
            + [(1, 1), (2, (k - 1) // 2)]
        )
        out.append((w, Cusp(-1, k), Cusp(2 * n - k, 1)))
    for j in range(2, 2 * n + 1, 2):  # (j-1)/j ~ 1/j
        w = word_from_syllables(
            [(2, j // 2), (1, (2 * n - j) // 2)] + _word_power(g1g2inv, j // 2)
        )
        out.append((w, Cusp(j - 1, j), Cusp(1, j)))
    for k in range(1, 2 * n, 2):  # (k-1)/k ~ 2n-k+1
        w = word_from_syllables(
            [(1, (2 * n - k + 1) // 2), (2, (k - 1) // 2)]
            + _word_power(g2g1inv, (1 - k) // 2)
        )
        out.append((w, Cusp(k - 1, k), Cusp(2 * n - k + 1, 1)))
    return out
