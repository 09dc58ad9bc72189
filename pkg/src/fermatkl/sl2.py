"""Exact arithmetic in PSL(2, Z).

Moebius actions on the upper half plane and on P^1(Q), cusp scaling
matrices, and the free-group word calculus for the level-2 principal
congruence subgroup generated by

    g1 = [1 2; 0 1]     g2 = [1 0; 2 1].

Matrices are identified with their negatives throughout (elements of
PSL rather than SL), so every Mat2Z is kept in a canonical sign form.
All integer arithmetic is arbitrary precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd


class NotInGamma2(ValueError):
    """Raised when a matrix is not an element of the level-2 group."""


@dataclass(frozen=True)
class Mat2Z:
    """Integer 2x2 matrix of determinant 1, canonical up to sign.

    The sign convention: the first nonzero entry in the order (c, a)
    is positive, so M and -M normalize to the same value.
    """

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        a, b, c, d = self.a, self.b, self.c, self.d
        if a * d - b * c != 1:
            raise ValueError(f"determinant must be 1, got {a * d - b * c}")
        if c < 0 or (c == 0 and a < 0):
            a, b, c, d = -a, -b, -c, -d
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    def __mul__(self, other: "Mat2Z") -> "Mat2Z":
        return Mat2Z(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "Mat2Z":
        return Mat2Z(self.d, -self.b, -self.c, self.a)

    def __pow__(self, n: int) -> "Mat2Z":
        if n < 0:
            return self.inverse() ** (-n)
        result = IDENTITY
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def __str__(self):
        return f"[{self.a} {self.b}; {self.c} {self.d}]"


IDENTITY = Mat2Z(1, 0, 0, 1)
GEN1 = Mat2Z(1, 2, 0, 1)
GEN2 = Mat2Z(1, 0, 2, 1)
T = Mat2Z(1, 1, 0, 1)
S = Mat2Z(0, -1, 1, 0)


@dataclass(frozen=True)
class Cusp:
    """Reduced projective pair (p : q) over Z, a point of P^1(Q).

    Canonical form: gcd(p, q) = 1 and q > 0, or (q, p) = (0, 1) for the
    cusp at infinity.
    """

    p: int
    q: int

    def __post_init__(self):
        p, q = self.p, self.q
        if p == 0 and q == 0:
            raise ValueError("(0 : 0) is not a point of P^1(Q)")
        g = gcd(p, q)
        p, q = p // g, q // g
        if q < 0 or (q == 0 and p < 0):
            p, q = -p, -q
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @property
    def is_infinity(self) -> bool:
        return self.q == 0

    def __str__(self):
        if self.q == 0:
            return "inf"
        if self.q == 1:
            return str(self.p)
        return f"{self.p}/{self.q}"


CUSP_ZERO = Cusp(0, 1)
CUSP_ONE = Cusp(1, 1)
CUSP_INF = Cusp(1, 0)


def mobius_apply(m: Mat2Z, c: Cusp) -> Cusp:
    """Action of PSL(2, Z) on P^1(Q): (p : q) -> (ap + bq : cp + dq)."""
    return Cusp(m.a * c.p + m.b * c.q, m.c * c.p + m.d * c.q)


def mobius_point(m: Mat2Z, z: complex) -> complex:
    """Fractional linear action on the upper half plane."""
    if z.imag <= 0:
        raise ValueError("point must lie in the upper half plane")
    return (m.a * z + m.b) / (m.c * z + m.d)


def cusp_scaling_matrix(c: Cusp) -> Mat2Z:
    """Deterministic g in PSL(2, Z) with g(inf) = c.

    The first column is (p, q); the second column is the extended-Euclid
    solution of p*d - b*q = 1 with minimal nonnegative d (d in [0, q)
    when q > 0).  The cusp at infinity maps to the identity.
    """
    if c.is_infinity:
        return IDENTITY
    p, q = c.p, c.q
    # Solve p*d - b*q = 1.
    d0, b0 = _ext_gcd_pair(p, q)
    # General solution (b0 + t*p, d0 + t*q); pick d in [0, q).
    t = -(d0 // q)
    d = d0 + t * q
    b = b0 + t * p
    return Mat2Z(p, b, q, d)


def _ext_gcd_pair(p: int, q: int) -> tuple[int, int]:
    """Return (d, b) with p*d - b*q = 1 for coprime p, q."""
    # Extended Euclid for p*x + q*y = 1, then d = x, b = -y.
    old_r, r = p, q
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        quot = old_r // r
        old_r, r = r, old_r - quot * r
        old_x, x = x, old_x - quot * x
        old_y, y = y, old_y - quot * y
    if old_r == -1:
        old_x, old_y = -old_x, -old_y
    return old_x, -old_y


def is_in_gamma2(m: Mat2Z) -> bool:
    """Level-2 principal congruence test: a, d odd and b, c even."""
    return (m.a & 1) == 1 and (m.d & 1) == 1 and (m.b & 1) == 0 and (m.c & 1) == 0


@dataclass(frozen=True)
class GammaWord:
    """Reduced word in the free generators g1, g2 of the level-2 group.

    ``syllables`` is a tuple of (generator id in {1, 2}, nonzero exponent)
    with adjacent syllables carrying distinct ids.  ``r1`` and ``r2`` are
    the exponent sums over the two generators.
    """

    syllables: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prev = 0
        for gen, exp in self.syllables:
            if gen not in (1, 2):
                raise ValueError(f"bad generator id {gen}")
            if exp == 0:
                raise ValueError("zero exponent in reduced word")
            if gen == prev:
                raise ValueError("word is not reduced")
            prev = gen

    @property
    def r1(self) -> int:
        return sum(e for g, e in self.syllables if g == 1)

    @property
    def r2(self) -> int:
        return sum(e for g, e in self.syllables if g == 2)

    def __len__(self):
        return sum(abs(e) for _, e in self.syllables)

    def inverse(self) -> "GammaWord":
        return GammaWord(tuple((g, -e) for g, e in reversed(self.syllables)))

    def __str__(self):
        if not self.syllables:
            return "e"
        return " ".join(f"g{g}^{e}" if e != 1 else f"g{g}" for g, e in self.syllables)


def word_from_syllables(raw: list[tuple[int, int]]) -> GammaWord:
    """Reduce a raw syllable list (merge adjacent ids, drop zeros)."""
    out: list[tuple[int, int]] = []
    for gen, exp in raw:
        if exp == 0:
            continue
        if out and out[-1][0] == gen:
            merged = out[-1][1] + exp
            out.pop()
            if merged:
                out.append((gen, merged))
        else:
            out.append((gen, exp))
    return GammaWord(tuple(out))


def word_concat(w1: GammaWord, w2: GammaWord) -> GammaWord:
    return word_from_syllables(list(w1.syllables) + list(w2.syllables))


def word_to_matrix(w: GammaWord) -> Mat2Z:
    m = IDENTITY
    for gen, exp in w.syllables:
        m = m * ((GEN1 if gen == 1 else GEN2) ** exp)
    return m


def exponent_sums(w: GammaWord) -> tuple[int, int]:
    return (w.r1, w.r2)


def _best_shift(u: int, v: int, c: int, d: int) -> tuple[int, int]:
    """k minimizing |u - 2kc| + |v - 2kd| over integers, with the norm."""
    cands = {0}
    if c:
        k0 = _round_div(u, 2 * c)
        cands.update((k0 - 1, k0, k0 + 1))
    if d:
        k0 = _round_div(v, 2 * d)
        cands.update((k0 - 1, k0, k0 + 1))
    best_k, best_n = 0, abs(u) + abs(v)
    for k in cands:
        n = abs(u - 2 * k * c) + abs(v - 2 * k * d)
        if n < best_n or (n == best_n and abs(k) < abs(best_k)):
            best_k, best_n = k, n
    return best_k, best_n


def _round_div(num: int, den: int) -> int:
    """Nearest integer to num/den (den != 0), half rounded toward zero."""
    if den < 0:
        num, den = -num, -den
    q, r = divmod(num, den)
    if 2 * r > den:
        q += 1
    return q


def _reduce_entries(a: int, b: int, c: int, d: int, collect: bool):
    """Shared word-reduction loop on raw entries.

    Peels generator powers from the left while the 1-norm strictly
    decreases.  Returns the syllable list when ``collect`` is true,
    otherwise the exponent sums (r1, r2).  Raises NotInGamma2 when the
    entries do not describe a reduced word (reachable only on invalid
    input).
    """
    if (a & 1) == 0 or (d & 1) == 0 or (b & 1) or (c & 1):
        raise NotInGamma2(f"[{a} {b}; {c} {d}] is not in the level-2 group")
    syll: list[tuple[int, int]] = []
    r1 = r2 = 0
    while True:
        if c == 0:
            if a < 0:
                a, b = -a, -b
            # a = d = 1 and b even: the word tail g1^(b/2).
            k = b // 2
            if k:
                if collect:
                    syll.append((1, k))
                r1 += k
            break
        if b == 0:
            if a < 0:
                c, d = -c, -d
            k = c // 2
            if k:
                if collect:
                    syll.append((2, k))
                r2 += k
            break
        size = abs(a) + abs(b) + abs(c) + abs(d)
        k1, n1 = _best_shift(a, b, c, d)
        k2, n2 = _best_shift(c, d, a, b)
        top = abs(a) + abs(b)
        bot = abs(c) + abs(d)
        new1 = n1 + bot
        new2 = n2 + top
        if new1 < size and (new1 <= new2 or k2 == 0) and k1 != 0:
            # M = g1^k1 * M'; peel from the left.
            if collect:
                syll.append((1, k1))
            r1 += k1
            a, b = a - 2 * k1 * c, b - 2 * k1 * d
        elif new2 < size and k2 != 0:
            if collect:
                syll.append((2, k2))
            r2 += k2
            c, d = c - 2 * k2 * a, d - 2 * k2 * b
        else:
            raise NotInGamma2(f"word reduction stalled at [{a} {b}; {c} {d}]")
    if collect:
        return syll
    return r1, r2


def decompose_gamma2(m: Mat2Z) -> GammaWord:
    """Unique reduced word w with eval(w) = m up to sign.

    Continued-fraction style ping-pong reduction; deterministic because
    the peeled exponent is the greedy minimizer of the row 1-norm.
    """
    if not is_in_gamma2(m):
        raise NotInGamma2(f"{m} is not in the level-2 group")
    syll = _reduce_entries(m.a, m.b, m.c, m.d, collect=True)
    return word_from_syllables(syll)


def gamma2_exponent_sums(a: int, b: int, c: int, d: int):
    """Exponent sums (r1, r2) for raw entries, or None if not level 2.

    Fast path used by the Fourier-coefficient enumeration; avoids
    constructing Mat2Z/GammaWord objects.
    """
    if (a & 1) == 0 or (d & 1) == 0 or (b & 1) or (c & 1):
        return None
    return _reduce_entries(a, b, c, d, collect=False)


def is_in_gamma_n(m: Mat2Z, n: int) -> bool:
    """Membership in the Fermat-curve group: level 2 with both exponent
    sums divisible by n."""
    if n < 1:
        raise ValueError("level must be a positive integer")
    if not is_in_gamma2(m):
        return False
    r1, r2 = _reduce_entries(m.a, m.b, m.c, m.d, collect=False)
    return r1 % n == 0 and r2 % n == 0
