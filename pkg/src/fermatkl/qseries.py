"""Truncated q-expansions with fractional exponents.

Series live on the exponent lattice (1/D)Z with an explicit truncation
order; arithmetic never claims coefficients beyond what the operands
determine.  Coefficients are exact rationals whenever the algebra
allows it; an attached radical prefactor 2^a * e^(i pi b) (a, b
rational) keeps N-th roots exact up to a single scalar, which is what
makes identities like x^N + y^N = 1 hold to machine zero.

The module also provides the concrete level-2 forms (theta^2, the
hauptmodul lambda fixing the three cusps, the weight-2 forms G_j) and
the level-N modular functions x = lambda^(1/N), y = (1-lambda)^(1/N)
together with the weight-2 forms attached to the cusps of the Fermat
groups, their slash transformation table, and Petersson norms.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .sl2 import Mat2Z, decompose_gamma2


class OrderTooSmall(ValueError):
    """Requested truncation cannot resolve the leading term."""


class NonDivisibleLeadingExponent(ValueError):
    """Root requested without the implied denominator extension."""


class ZeroSeries(ValueError):
    """Operation undefined on the identically-truncated-to-zero series."""


class ConvergenceRegion(ValueError):
    """Evaluation point too close to the real axis for a useful bound."""


def _is_exact(v) -> bool:
    return isinstance(v, (Fraction, int))


def _to_complex(v) -> complex:
    return complex(v)


@dataclass(frozen=True)
class QExpansion:
    """Truncated Laurent-type series sum c_k q^(k/denom).

    ``coeffs`` maps exponent numerators to coefficients (Fraction or
    complex); ``order`` bounds the known exponents: terms with exponent
    > order are unknown, terms absent with exponent <= order are zero.
    ``pref2``/``prefh`` encode a global scalar 2^pref2 * e^(i pi prefh).
    """

    denom: int
    coeffs: dict
    order: Fraction
    pref2: Fraction = Fraction(0)
    prefh: Fraction = Fraction(0)

    def __post_init__(self):
        if self.denom < 1:
            raise ValueError("denominator must be positive")
        object.__setattr__(self, "order", Fraction(self.order))
        object.__setattr__(self, "pref2", Fraction(self.pref2))
        object.__setattr__(self, "prefh", Fraction(self.prefh) % 2)
        cleaned = {}
        bound = self.order * self.denom
        for k, v in self.coeffs.items():
            if v == 0 or k > bound:
                continue
            cleaned[k] = Fraction(v) if isinstance(v, int) else v
        object.__setattr__(self, "coeffs", cleaned)
        self._fold()

    # -- scalar prefactor -------------------------------------------------

    def _fold(self):
        """Fold the prefactor into the coefficients when it is rational."""
        if self.pref2 == 0 and self.prefh == 0:
            return
        if self.pref2.denominator == 1 and self.prefh.denominator == 1:
            scale = Fraction(2) ** self.pref2 * (-1) ** (self.prefh % 2)
            new = {k: scale * v if _is_exact(v) else complex(scale) * v
                   for k, v in self.coeffs.items()}
            object.__setattr__(self, "coeffs", new)
            object.__setattr__(self, "pref2", Fraction(0))
            object.__setattr__(self, "prefh", Fraction(0))

    @property
    def prefactor(self) -> complex:
        return 2.0 ** float(self.pref2) * cmath.exp(1j * math.pi * float(self.prefh))

    @property
    def exact(self) -> bool:
        return all(_is_exact(v) for v in self.coeffs.values())

    def materialized(self) -> "QExpansion":
        """Same series with the prefactor folded in as complex floats."""
        if self.pref2 == 0 and self.prefh == 0:
            return self
        p = self.prefactor
        return QExpansion(self.denom, {k: p * _to_complex(v) for k, v in self.coeffs.items()},
                          self.order)

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> tuple[Fraction, complex]:
        """(exponent, coefficient) of the lowest-order term."""
        if not self.coeffs:
            raise ZeroSeries("series has no retained terms")
        k = min(self.coeffs)
        c = self.coeffs[k]
        return Fraction(k, self.denom), self.prefactor * _to_complex(c)

    def leading_exact(self):
        k = min(self.coeffs)
        return k, self.coeffs[k]

    def coefficient(self, exponent) -> complex:
        """Coefficient of q^exponent (0 for absent retained exponents)."""
        e = Fraction(exponent)
        num = e * self.denom
        if num.denominator != 1:
            return 0j
        if e > self.order:
            raise OrderTooSmall(f"coefficient of q^{e} beyond truncation {self.order}")
        v = self.coeffs.get(int(num), 0)
        return self.prefactor * _to_complex(v)

    def with_denom(self, new_denom: int) -> "QExpansion":
        if new_denom % self.denom:
            raise ValueError("denominator must be a multiple")
        f = new_denom // self.denom
        if f == 1:
            return self
        return QExpansion(new_denom, {k * f: v for k, v in self.coeffs.items()},
                          self.order, self.pref2, self.prefh)

    def truncate(self, order) -> "QExpansion":
        order = Fraction(order)
        if order >= self.order:
            return self
        bound = order * self.denom
        return QExpansion(self.denom, {k: v for k, v in self.coeffs.items() if k <= bound},
                          order, self.pref2, self.prefh)

    def rotate_halfturns(self, h) -> "QExpansion":
        """Multiply by e^(i pi h) exactly, as a prefactor phase shift."""
        return QExpansion(self.denom, dict(self.coeffs), self.order,
                          self.pref2, self.prefh + Fraction(h))

    # -- ring operations ---------------------------------------------------

    def _aligned(self, other: "QExpansion"):
        d = self.denom * other.denom // gcd(self.denom, other.denom)
        return self.with_denom(d), other.with_denom(d)

    def __neg__(self):
        return QExpansion(self.denom, {k: -v for k, v in self.coeffs.items()},
                          self.order, self.pref2, self.prefh)

    def __add__(self, other):
        if isinstance(other, (int, Fraction, float, complex)):
            other = constant(other, self.denom, self.order)
        f, g = self._aligned(other)
        order = min(f.order, g.order)
        if (f.pref2, f.prefh) != (g.pref2, g.prefh):
            f, g = f.materialized(), g.materialized()
        out = dict(f.coeffs)
        for k, v in g.coeffs.items():
            cur = out.get(k)
            if cur is None:
                out[k] = v
            else:
                if _is_exact(cur) != _is_exact(v):
                    cur, v = _to_complex(cur), _to_complex(v)
                out[k] = cur + v
        return QExpansion(f.denom, out, order, f.pref2, f.prefh)

    def __radd__(self, other):
        return self.__add__(other)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, float, complex)):
            other = constant(other, self.denom, self.order)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, scalar) -> "QExpansion":
        if scalar == 0:
            return QExpansion(self.denom, {}, self.order)
        if _is_exact(scalar):
            return QExpansion(self.denom, {k: scalar * v if _is_exact(v) else complex(scalar) * v
                                           for k, v in self.coeffs.items()},
                              self.order, self.pref2, self.prefh)
        p = self.prefactor
        return QExpansion(self.denom,
                          {k: (scalar * p) * _to_complex(v) for k, v in self.coeffs.items()},
                          self.order)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, float, complex)):
            return self.scale(other)
        f, g = self._aligned(other)
        if f.is_zero() or g.is_zero():
            return QExpansion(f.denom, {}, min(f.order, g.order))
        ef = min(f.coeffs)
        eg = min(g.coeffs)
        bound_num = min(f.order * f.denom + eg, g.order * g.denom + ef)
        order = Fraction(bound_num, f.denom)
        fk = sorted(f.coeffs.items())
        gk = sorted(g.coeffs.items())
        out: dict = {}
        for k1, v1 in fk:
            if k1 + eg > bound_num:
                break
            exact1 = _is_exact(v1)
            for k2, v2 in gk:
                k = k1 + k2
                if k > bound_num:
                    break
                term = v1 * v2 if exact1 == _is_exact(v2) else _to_complex(v1) * _to_complex(v2)
                cur = out.get(k)
                if cur is None:
                    out[k] = term
                elif _is_exact(cur) == _is_exact(term):
                    out[k] = cur + term
                else:
                    out[k] = _to_complex(cur) + _to_complex(term)
        return QExpansion(f.denom, out, order,
                          f.pref2 + g.pref2, f.prefh + g.prefh)

    def __rmul__(self, other):
        return self.scale(other)

    def inverse(self) -> "QExpansion":
        """Multiplicative inverse as a truncated Laurent series."""
        if self.is_zero():
            raise ZeroSeries("cannot invert the zero series")
        e0 = min(self.coeffs)
        c0 = self.coeffs[e0]
        rel_bound = math.floor(self.order * self.denom) - e0
        # h = f / (c0 q^(e0/D)) - 1, dense in relative units
        h = [c0 * 0] * (rel_bound + 1)
        for k, v in self.coeffs.items():
            h[k - e0] = v / c0
        h[0] -= 1
        inv = [c0 * 0] * (rel_bound + 1)
        inv[0] = h[0] * 0 + 1
        for m in range(1, rel_bound + 1):
            acc = inv[0] * 0
            for j in range(1, m + 1):
                if h[j]:
                    acc += h[j] * inv[m - j]
            inv[m] = -acc
        coeffs = {}
        for m, v in enumerate(inv):
            if v != 0:
                coeffs[m - e0] = v / c0
        order = Fraction(rel_bound - e0, self.denom)
        return QExpansion(self.denom, coeffs, order, -self.pref2, -self.prefh)

    def __pow__(self, n: int) -> "QExpansion":
        if not isinstance(n, int):
            raise TypeError("only integer powers are supported")
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return constant(1, self.denom, self.order)
        result = self
        for _ in range(n - 1):
            result = result * self
        return result

    def nth_root(self, n: int, branch: int = 0, extend_denom: bool = True) -> "QExpansion":
        """Series g with g^n = self up to the inherited order.

        The leading coefficient of g is the principal n-th root of the
        leading coefficient, rotated by exp(2 pi i branch / n).  The
        exponent lattice is refined to denom * n.
        """
        if n < 1:
            raise ValueError("root index must be >= 1")
        if self.is_zero():
            raise ZeroSeries("cannot take a root of the zero series")
        e0 = min(self.coeffs)
        if not extend_denom and e0 % n:
            raise NonDivisibleLeadingExponent(
                f"leading exponent {e0}/{self.denom} not divisible by {n}")
        c0 = self.coeffs[e0]
        rel_bound = math.floor(self.order * self.denom) - e0
        exact_in = self.exact
        # normalized series 1 + h with h = f/(c0 q^(e0/D)) - 1
        h = [c0 * 0] * (rel_bound + 1)
        for k, v in self.coeffs.items():
            h[k - e0] = v / c0
        h[0] -= 1
        logh = _series_log1p(h)
        u = _series_exp([x / n for x in logh])
        # scalar: (pref * c0)^(1/n) * e^(2 pi i branch / n)
        pref2, prefh = self.pref2, self.prefh
        root_extra = Fraction(2 * branch, n)
        if exact_in and _is_root_friendly(c0):
            a, hp = _as_radical(c0)
            pref2n = (pref2 + a) / n
            prefhn = (prefh + hp) / n + root_extra
            scale = None
        else:
            c_full = self.prefactor * _to_complex(c0)
            r, phi = abs(c_full), cmath.phase(c_full)
            scale = (r ** (1.0 / n)) * cmath.exp(1j * (phi / n + 2 * math.pi * branch / n))
            pref2n = Fraction(0)
            prefhn = Fraction(0)
        D2 = self.denom * n
        coeffs = {}
        for m, v in enumerate(u):
            if v == 0:
                continue
            key = e0 + m * n
            coeffs[key] = v if scale is None else scale * _to_complex(v)
        order = Fraction(e0, D2) + Fraction(rel_bound, self.denom)
        return QExpansion(D2, coeffs, order, pref2n, prefhn)

    # -- evaluation ----------------------------------------------------------

    def evaluate(self, z: complex, y_min: float | None = None) -> tuple[complex, float]:
        """(value, tail_bound) of the series at a point of the upper
        half plane.

        The tail bound is geometric: the largest retained coefficient
        magnitude near the truncation edge with an empirical growth
        ratio, against |q^(1/D)| = exp(-2 pi Im z / D).
        """
        y = z.imag
        if y <= 0:
            raise ConvergenceRegion("evaluation requires Im z > 0")
        if y_min is not None and y < y_min:
            raise ConvergenceRegion(f"Im z = {y} below the requested minimum {y_min}")
        w = cmath.exp(2j * math.pi * z / self.denom)
        r = abs(w)
        p = self.prefactor
        val = 0j
        mags: list[tuple[int, float]] = []
        for k in sorted(self.coeffs):
            c = _to_complex(self.coeffs[k])
            val += c * w ** k
            mags.append((k, abs(c)))
        val *= p
        if not mags:
            return 0j, 0.0
        k_edge = math.floor(self.order * self.denom)
        window = max(4, self.denom)
        m_all = max(a for _, a in mags)
        hi = [a for k, a in mags if k > k_edge - window]
        lo = [a for k, a in mags if k_edge - 2 * window < k <= k_edge - window]
        m_hi = max(hi, default=0.0)
        m_lo = max(lo, default=0.0)
        # per-unit growth from the two edge windows; dust windows do not count
        growth = 1.0
        floor_mag = 1e-12 * m_all
        if m_hi > floor_mag and m_lo > floor_mag and m_hi > m_lo:
            growth = (m_hi / m_lo) ** (1.0 / window)
        gr = growth * r
        if gr >= 0.98:
            raise ConvergenceRegion(
                f"geometric tail ratio {gr:.3f} too close to 1 at Im z = {y}")
        anchor = m_hi if m_hi > floor_mag else m_all
        tail = abs(p) * anchor * (r ** (k_edge + 1)) * growth / (1.0 - gr)
        return val, tail

    # -- output ----------------------------------------------------------------

    def dump(self) -> str:
        """Text dump: one line per term, 'numerator/D<TAB>re<TAB>im'."""
        out = []
        p = self.prefactor
        for k in sorted(self.coeffs):
            c = p * _to_complex(self.coeffs[k])
            out.append(f"{k}/{self.denom}\t{c.real!r}\t{c.imag!r}")
        return "\n".join(out)

    def max_abs_coeff_diff(self, other: "QExpansion") -> float:
        """Largest coefficient difference up to the shared order."""
        f, g = self._aligned(other)
        f, g = f.materialized(), g.materialized()
        bound = min(f.order, g.order) * f.denom
        keys = {k for k in f.coeffs if k <= bound} | {k for k in g.coeffs if k <= bound}
        return max((abs(f.coeffs.get(k, 0j) - g.coeffs.get(k, 0j)) for k in keys),
                   default=0.0)


def constant(value, denom: int = 1, order=Fraction(30)) -> QExpansion:
    return QExpansion(denom, {0: Fraction(value) if _is_exact(value) else complex(value)},
                      Fraction(order))


def _is_root_friendly(c: Fraction) -> bool:
    """True when |c| is a power of two (so the root stays radical-exact)."""
    num, den = abs(c.numerator), c.denominator
    return (num & (num - 1)) == 0 and (den & (den - 1)) == 0


def _as_radical(c: Fraction) -> tuple[Fraction, Fraction]:
    """c = 2^a * e^(i pi h) for c = +-2^k."""
    a = Fraction(abs(c.numerator).bit_length() - 1 - (c.denominator.bit_length() - 1))
    h = Fraction(0) if c > 0 else Fraction(1)
    return a, h


def _series_log1p(h: list) -> list:
    """log(1 + h) for a dense series with h[0] = 0."""
    M = len(h) - 1
    v = [h[0] * 0] * (M + 1)
    for m in range(1, M + 1):
        acc = m * h[m]
        for j in range(1, m):
            if h[j]:
                acc -= (m - j) * v[m - j] * h[j]
        v[m] = acc / m
    return v


def _series_exp(v: list) -> list:
    """exp(v) for a dense series with v[0] = 0."""
    M = len(v) - 1
    u = [v[0] * 0] * (M + 1)
    u[0] = u[0] + 1
    for m in range(1, M + 1):
        acc = u[0] * 0
        for j in range(1, m + 1):
            if v[j]:
                acc += j * v[j] * u[m - j]
        u[m] = acc / m
    return u


# ---------------------------------------------------------------------------
# concrete forms
# ---------------------------------------------------------------------------

KINDS = ("A", "B", "C")


@dataclass(frozen=True)
class FormLabel:
    """Identifier for the built-in expansions.

    name in {theta2, lambda, one_minus_lambda, g0, g1, ginf, x, y, f};
    x, y, f carry a level n; f additionally a kind A/B/C and an index j.
    """

    name: str
    n: int = 1
    kind: str = ""
    j: int = 0

    def __post_init__(self):
        if self.name not in ("theta2", "lambda", "one_minus_lambda",
                             "g0", "g1", "ginf", "x", "y", "f"):
            raise ValueError(f"unknown form label {self.name!r}")
        if self.name in ("x", "y", "f") and self.n < 1:
            raise ValueError("level must be >= 1")
        if self.name == "f":
            if self.kind not in KINDS:
                raise ValueError("f labels need kind A, B or C")
            if not 0 <= self.j < self.n:
                raise ValueError("f index out of range")

    @property
    def weight(self) -> int:
        return 2 if self.name in ("theta2", "g0", "g1", "ginf", "f") else 0

    @property
    def level_denom(self) -> int:
        return 2 * self.n if self.name in ("x", "y", "f") else 2

    def __str__(self):
        if self.name == "f":
            return f"f[{self.kind}{self.j},n={self.n}]"
        if self.name in ("x", "y"):
            return f"{self.name}[n={self.n}]"
        return self.name


def _binomial_factor(denom: int, step: int, sign: int, power: int, bound: int) -> QExpansion:
    """(1 + sign q^(step/denom))^power truncated at exponent bound/denom."""
    coeffs = {0: Fraction(1)}
    c = Fraction(1)
    j = 0
    while (j + 1) * step <= bound:
        j += 1
        c = c * Fraction(power - j + 1, j) * sign
        coeffs[j * step] = c
    return QExpansion(denom, coeffs, Fraction(bound, denom))


@lru_cache(maxsize=None)
def theta2_series(order) -> QExpansion:
    """theta^2 = prod (1-q^n)^4 (1+q^(n-1/2))^8, weight 2, level 2."""
    order = Fraction(order)
    bound = math.floor(order * 2)
    out = constant(1, 2, order)
    n = 1
    while 2 * n - 1 <= bound:
        out = out * _binomial_factor(2, 2 * n, -1, 4, bound)
        out = out * _binomial_factor(2, 2 * n - 1, +1, 8, bound)
        n += 1
    return out.truncate(order)


@lru_cache(maxsize=None)
def lambda_series(order) -> QExpansion:
    """The hauptmodul fixing the cusps 0, 1, inf: -(1/16) q^(-1/2) times
    the printed eta-type product; simple zero at 0, simple pole at inf."""
    order = Fraction(order)
    rel_bound = math.floor((order + Fraction(1, 2)) * 2)
    prod = constant(1, 2, Fraction(rel_bound, 2))
    n = 1
    while 2 * n - 1 <= rel_bound:
        prod = prod * _binomial_factor(2, 2 * n - 1, -1, 8, rel_bound)
        prod = prod * _binomial_factor(2, 2 * n, +1, -8, rel_bound)
        n += 1
    shifted = QExpansion(2, {k - 1: Fraction(-1, 16) * v for k, v in prod.coeffs.items()},
                         order)
    return shifted


@lru_cache(maxsize=None)
def one_minus_lambda_series(order) -> QExpansion:
    order = Fraction(order)
    rel_bound = math.floor((order + Fraction(1, 2)) * 2)
    prod = constant(1, 2, Fraction(rel_bound, 2))
    n = 1
    while 2 * n - 1 <= rel_bound:
        prod = prod * _binomial_factor(2, 2 * n - 1, +1, 8, rel_bound)
        prod = prod * _binomial_factor(2, 2 * n, +1, -8, rel_bound)
        n += 1
    return QExpansion(2, {k - 1: Fraction(1, 16) * v for k, v in prod.coeffs.items()},
                      order)


@lru_cache(maxsize=None)
def x_series(n: int, order) -> QExpansion:
    """x = lambda^(1/n), principal branch; leading coefficient
    eps/16^(1/n) at q^(-1/2)."""
    lam = lambda_series(Fraction(order) + 1)
    return lam.nth_root(n, 0).truncate(Fraction(order))


@lru_cache(maxsize=None)
def y_series(n: int, order) -> QExpansion:
    """y = (1-lambda)^(1/n), principal branch."""
    oml = one_minus_lambda_series(Fraction(order) + 1)
    return oml.nth_root(n, 0).truncate(Fraction(order))


def zeta_power(n: int, j: int) -> complex:
    """e^(2 pi i j / n)."""
    return cmath.exp(2j * math.pi * (j % n) / n)


def eps_root(n: int) -> complex:
    """e^(pi i / n)."""
    return cmath.exp(1j * math.pi / n)


@lru_cache(maxsize=None)
def f_series(kind: str, j: int, n: int, order) -> QExpansion:
    """Weight-2 form vanishing only at the cusp of the given
    ramification kind/index, to order N^2 in the local parameter."""
    order = Fraction(order)
    work = order + 2
    x = x_series(n, work)
    y = y_series(n, work)
    yinv = y.inverse()
    if kind == "A":
        base = 1 - yinv.scale(zeta_power(n, j)) if j else 1 - yinv
    elif kind == "B":
        base = (x - (zeta_power(n, j) if j else 1)) * yinv
    elif kind == "C":
        # x and eps zeta^j y share the radical magnitude; for j = 0 the
        # phases agree too and the difference stays exact.
        rotated = y.rotate_halfturns(Fraction(1, n) + Fraction(2 * j, n))
        base = (x - rotated) * yinv
    else:
        raise ValueError(f"unknown kind {kind!r}")
    f = (base ** n) * theta2_series(work).with_denom(2 * n)
    return f.truncate(order)


@lru_cache(maxsize=None)
def g_series(cusp_name: str, order) -> QExpansion:
    """The weight-2 level-2 forms with a single cusp zero:
    g0 = lambda/(1-lambda) theta^2, g1 = theta^2, ginf = theta^2/(1-lambda)."""
    order = Fraction(order)
    work = order + 2
    th = theta2_series(work)
    if cusp_name == "g1":
        return th.truncate(order)
    omlinv = one_minus_lambda_series(work).inverse()
    if cusp_name == "ginf":
        return (th * omlinv).truncate(order)
    if cusp_name == "g0":
        return (lambda_series(work) * omlinv * th).truncate(order)
    raise ValueError(f"unknown g label {cusp_name!r}")


def expansion(label: FormLabel, order) -> QExpansion:
    """Truncated expansion at the cusp at infinity for a form label."""
    order = Fraction(order)
    lead = _leading_exponent(label)
    if order < lead:
        raise OrderTooSmall(
            f"order {order} cannot resolve the leading exponent {lead} of {label}")
    if label.name == "theta2":
        return theta2_series(order)
    if label.name == "lambda":
        return lambda_series(order)
    if label.name == "one_minus_lambda":
        return one_minus_lambda_series(order)
    if label.name in ("g0", "g1", "ginf"):
        return g_series(label.name, order)
    if label.name == "x":
        return x_series(label.n, order)
    if label.name == "y":
        return y_series(label.n, order)
    return f_series(label.kind, label.j, label.n, order)


def _leading_exponent(label: FormLabel) -> Fraction:
    if label.name in ("lambda", "one_minus_lambda", "x", "y"):
        return Fraction(-1, 2)
    if label.name == "ginf":
        return Fraction(1, 2)
    if label.name == "f" and label.kind == "C" and label.j == 0:
        return Fraction(label.n, 2)
    return Fraction(0)


def nth_root(f: QExpansion, n: int, branch: int = 0) -> QExpansion:
    """Module-level alias for QExpansion.nth_root."""
    return f.nth_root(n, branch)


def evaluate(f: QExpansion, z: complex, y_min: float | None = None):
    return f.evaluate(z, y_min)


def petersson_norm_sq(value: complex, z: complex, weight: int) -> float:
    """|f(z)|^2 Im(z)^k."""
    if z.imag <= 0:
        raise ValueError("Petersson norm needs Im z > 0")
    return abs(value) ** 2 * z.imag ** weight


# ---------------------------------------------------------------------------
# slash action
# ---------------------------------------------------------------------------

DEFAULT_ORDER = Fraction(26)


def _slash_shift(label: FormLabel, r1: int, r2: int) -> tuple[FormLabel, complex]:
    """Transformation of a label under a level-2 word with exponent sums
    (r1, r2): returns (new label, scalar multiplier).

    Table: x -> zeta^-1 x under both generators, y -> zeta^-1 y under g1
    and y -> y under g2; theta^2 and the g-forms are invariant; the
    f-forms permute within their kind."""
    n = label.n
    if label.name == "x":
        return label, zeta_power(n, -(r1 + r2))
    if label.name == "y":
        return label, zeta_power(n, -r1)
    if label.name == "f":
        if label.kind == "A":
            shift = r1
        elif label.kind == "B":
            shift = r1 + r2
        else:
            shift = r2
        return FormLabel("f", n, label.kind, (label.j + shift) % n), 1.0 + 0j
    return label, 1.0 + 0j


def slash2_value(label: FormLabel, gamma: Mat2Z, z: complex,
                 order=DEFAULT_ORDER) -> complex:
    """Value of (f |_k gamma)(z) for gamma in the level-2 group, via the
    transformation table (exact in the multiplier, evaluated at z)."""
    word = decompose_gamma2(gamma)
    new_label, mult = _slash_shift(label, word.r1, word.r2)
    val, _ = expansion(new_label, Fraction(order)).evaluate(z)
    return mult * val


def slash2_value_direct(label: FormLabel, gamma: Mat2Z, z: complex,
                        order=DEFAULT_ORDER) -> complex:
    """Same value computed as (cz+d)^(-k) f(gamma z) by direct series
    evaluation at the transformed point.  Needs Im(gamma z) moderate."""
    w = (gamma.a * z + gamma.b) / (gamma.c * z + gamma.d)
    val, _ = expansion(label, Fraction(order)).evaluate(w)
    k = label.weight
    return val * (gamma.c * z + gamma.d) ** (-k)


def coset_product_value(kind: str, j: int, n: int, z: complex,
                        order=DEFAULT_ORDER) -> complex:
    """Product of f[kind,j] |_2 gamma over the n^2 coset representatives
    g1^a g2^b, assembled from the transformation table."""
    values = {}
    for l in range(n):
        values[l], _ = f_series(kind, l, n, Fraction(order)).evaluate(z)
    out = 1.0 + 0j
    for a in range(n):
        for b in range(n):
            if kind == "A":
                shift = a
            elif kind == "B":
                shift = a + b
            else:
                shift = b
            out *= values[(j + shift) % n]
    return out


def coset_product_closed_form(kind: str, n: int, z: complex,
                              order=DEFAULT_ORDER) -> complex:
    """The closed forms (-1)^(N^2) theta^(2N^2) (lambda/(1-lambda))^(N^2),
    (-1)^(N^2) theta^(2N^2), theta^(2N^2) (1-lambda)^(-N^2), evaluated
    from the level-2 expansions."""
    order = Fraction(order)
    th, _ = theta2_series(order).evaluate(z)
    lam, _ = lambda_series(order).evaluate(z)
    oml, _ = one_minus_lambda_series(order).evaluate(z)
    n2 = n * n
    sign = (-1.0) ** (n2 % 2)
    if kind == "A":
        return sign * th ** n2 * (lam / oml) ** n2
    if kind == "B":
        return sign * th ** n2
    return th ** n2 / oml ** n2
