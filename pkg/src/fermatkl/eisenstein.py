"""Numerical Eisenstein series.

Three computation paths that the verification layer plays against each
other:

* direct lattice-point summation over coprime pairs (c, d) bucketed by
  the cusp class of (d : c),
* Fourier coefficients phi_{jk,m}(s) by constructive enumeration of the
  double-coset admissible pairs, and
* the regularized value at s = 1 assembled from closed-form scattering
  constants plus the m != 0 coefficients.

For the Fermat groups the admissible pairs are enumerated as level-2
admissible pairs refined by the exponent-sum character: a level-2
candidate (c, d mod 2c) with word sums r lifts to d + 2c*t mod 2nc
exactly when t' v_j + t v_k = -r (mod n) is solvable, where v_j, v_k
are the exponent sums of the conjugated stabilizer generators.  When
the two base cusps differ the solution is unique; when they agree all
n lifts survive or none do, which is what makes the same-fiber Fourier
modes supported on multiples of n.
"""

from __future__ import annotations

import cmath
import math
import threading
from dataclasses import dataclass

import numpy as np

from . import scattering
from .fermat import (
    GAMMA2,
    FermatCusp,
    GroupId,
    classify_rep_index,
    cusp_reps,
    gamma2_base,
)
from .sl2 import (
    CUSP_INF,
    CUSP_ONE,
    CUSP_ZERO,
    Cusp,
    GEN1,
    Mat2Z,
    cusp_scaling_matrix,
    gamma2_exponent_sums,
)
from .special import DEFAULT_PRECISION, PrecisionConfig, bessel_k, gamma_fn, zeta


class DivergentRegion(ValueError):
    """Series evaluation requested outside Re s > 1."""


class TruncationUnsound(ValueError):
    """Tail estimate exceeds the requested tolerance."""


class MissingConstants(ValueError):
    """No closed-form scattering constants for the group."""


@dataclass(frozen=True)
class TruncationSpec:
    c_max: int = 500
    m_max: int = 10
    order: int = 26

    def __post_init__(self):
        if self.c_max < 1 or self.m_max < 1 or self.order < 1:
            raise ValueError("truncation parameters must be >= 1")


DEFAULT_TRUNCATION = TruncationSpec()


@dataclass(frozen=True)
class PhiTerm:
    group: GroupId
    cusp_j: Cusp
    cusp_k: Cusp
    m: int
    s: complex
    partial_sum: complex
    c_reached: int
    tail_estimate: float


def as_cusp(x) -> Cusp:
    if isinstance(x, FermatCusp):
        return x.rep
    if isinstance(x, Cusp):
        return x
    raise TypeError(f"expected a cusp, got {type(x)!r}")


def group_cusps(group: GroupId) -> tuple[Cusp, ...]:
    if group.kind == "gamma1":
        return (CUSP_INF,)
    if group.kind == "gamma2":
        return (CUSP_ZERO, CUSP_ONE, CUSP_INF)
    return tuple(fc.rep for fc in cusp_reps(group.n))


def classify_index(group: GroupId, p: int, q: int) -> int:
    """Index of the class of (p : q) in the group_cusps ordering."""
    if group.kind == "gamma1":
        return 0
    if group.kind == "gamma2":
        podd, qodd = p & 1, q & 1
        if podd and qodd:
            return 1
        return 2 if podd else 0
    return classify_rep_index(p, q, group.n)


def standard_rep(group: GroupId, c) -> Cusp:
    """Standard representative of the class of a cusp."""
    c = as_cusp(c)
    return group_cusps(group)[classify_index(group, c.p, c.q)]


# ---------------------------------------------------------------------------
# direct summation
# ---------------------------------------------------------------------------

_CLASS_CACHE: dict = {}
_CLASS_LOCK = threading.Lock()


def _class_table(group: GroupId, c: int):
    """Class buckets of d0 in [0, width*c) coprime to c, as int arrays.

    A pair (c, d) with bottom row (c, d) of gamma_j^-1 sigma belongs to
    the class of sigma^-1(S_j) = (-d : c); the sign matters between the
    subcusps of a Fermat group even though the level-2 parity classes
    cannot see it.
    """
    key = (group, c)
    hit = _CLASS_CACHE.get(key)
    if hit is not None:
        return hit
    P = group.width * c
    d = np.arange(P, dtype=np.int64)
    cop = d[np.gcd(d, c) == 1]
    if group.kind == "gamma1":
        table = [(0, cop)]
    elif group.kind == "gamma2":
        podd = (cop & 1).astype(bool)
        if c & 1:
            table = [(1, cop[podd]), (0, cop[~podd])]
        else:
            table = [(2, cop[podd])]
    else:
        n = group.n
        buckets: dict[int, list[int]] = {}
        for d0 in cop.tolist():
            idx = classify_rep_index(-d0, c, n)
            buckets.setdefault(idx, []).append(d0)
        table = [(idx, np.array(v, dtype=np.int64)) for idx, v in sorted(buckets.items())]
    with _CLASS_LOCK:
        _CLASS_CACHE[key] = table
    return table


def _power_terms(mod2: np.ndarray, s) -> np.ndarray:
    if isinstance(s, complex) and s.imag != 0:
        return np.exp(-s * np.log(mod2))
    return np.power(mod2, -float(complex(s).real))


def eisenstein_direct_all(group: GroupId, z: complex, s,
                          trunc: TruncationSpec = DEFAULT_TRUNCATION):
    """Raw class-bucketed sums over coprime pairs, without the width
    prefactor: bucket[j] = sum over (c,d) with (d:c) in class j of
    y^s / |cz+d|^(2s).  Returns (buckets, tail_estimate)."""
    sigma = complex(s).real
    if sigma <= 1:
        raise DivergentRegion("direct summation requires Re s > 1")
    x, y = z.real, z.imag
    if y <= 0:
        raise ValueError("z must lie in the upper half plane")
    cusps = group_cusps(group)
    vals = np.zeros(len(cusps), dtype=complex)
    ys = complex(y) ** s
    # the c = 0 pair (0, 1): cusp (1 : 0)
    vals[classify_index(group, 1, 0)] += ys
    m_cut = trunc.c_max * (abs(x) + y + 3.0)
    for c in range(1, trunc.c_max + 1):
        P = group.width * c
        cx = c * x
        cy2 = (c * y) ** 2
        t_lo = math.floor((-m_cut - cx) / P) - 1
        t_hi = math.ceil((m_cut - cx) / P) + 1
        t = np.arange(t_lo, t_hi + 1, dtype=np.int64) * P
        for idx, d0s in _class_table(group, c):
            if d0s.size == 0:
                continue
            w = cx + (d0s[None, :] + t[:, None]).astype(float)
            keep = np.abs(w) <= m_cut
            mod2 = w * w + cy2
            terms = _power_terms(mod2, s)
            vals[idx] += ys * np.where(keep, terms, 0.0).sum()
    # omitted-d strip plus c > c_max tail
    tail_d = trunc.c_max * 2.0 * y ** sigma * m_cut ** (1 - 2 * sigma) / (2 * sigma - 1)
    tail_c = 4.0 * y ** (1 - sigma) * trunc.c_max ** (2 - 2 * sigma) / (2 * sigma - 2)
    tail_c += 2.0 * (y * trunc.c_max) ** (-2 * sigma) * y ** sigma * trunc.c_max
    return vals, tail_d + tail_c


def eisenstein_direct(group: GroupId, j, z: complex, s,
                      trunc: TruncationSpec = DEFAULT_TRUNCATION):
    """E_j(z, s) = width^(-s) * sum over the class-j coprime pairs."""
    jc = as_cusp(j)
    vals, tail = eisenstein_direct_all(group, z, s, trunc)
    idx = classify_index(group, jc.p, jc.q)
    b = group.width
    pref = complex(b) ** (-s)
    return pref * vals[idx], abs(pref) * tail


# ---------------------------------------------------------------------------
# double-coset enumeration of Fourier coefficients
# ---------------------------------------------------------------------------

class _PhiData:
    """Per-pair cache: admissible d arrays (mod width*c) for c = 1.."""

    def __init__(self):
        self.c_done = 0
        self.items: list[np.ndarray] = []
        self.lock = threading.Lock()


_PHI_CACHE: dict = {}
_PHI_LOCK = threading.Lock()


def _kappa_sums(g: Mat2Z) -> tuple[int, int]:
    """Exponent sums of g T^2 g^(-1) (stabilizer generator of g(inf))."""
    k = g * GEN1 * g.inverse()
    r = gamma2_exponent_sums(k.a, k.b, k.c, k.d)
    if r is None:
        raise RuntimeError("conjugated stabilizer left the level-2 group")
    return r


def _phi_items(group: GroupId, j: Cusp, k: Cusp, c_max: int) -> list[np.ndarray]:
    """Admissible d (mod width*c) of the double coset for c = 1..c_max."""
    key = (group, j, k)
    with _PHI_LOCK:
        data = _PHI_CACHE.setdefault(key, _PhiData())
    with data.lock:
        return _phi_items_locked(data, group, j, k, c_max)


def _phi_items_locked(data: _PhiData, group: GroupId, j: Cusp, k: Cusp,
                      c_max: int) -> list[np.ndarray]:
    if data.c_done >= c_max:
        return data.items
    gj = cusp_scaling_matrix(j)
    gk = cusp_scaling_matrix(k)
    gj_inv = gj.inverse()
    gk_inv = gk.inverse()
    # parity target: M in gj^-1 Gamma(2) gk  <=>  M = gj^-1 gk mod 2
    pt = gj_inv * gk
    pa, pb, pc, pd = pt.a & 1, pt.b & 1, pt.c & 1, pt.d & 1
    n = group.n if group.kind == "gamma_n" else 1
    if group.kind == "gamma_n" and n > 1:
        vj = _kappa_sums(gj)
        vk = _kappa_sums(gk)
        same_base = gamma2_base(j) == gamma2_base(k)
        if not same_base:
            det = vj[0] * vk[1] - vj[1] * vk[0]
            det_inv = pow(det % n, -1, n)
    e, f, g_, h = gj.entries()
    ki11, ki12, ki21, ki22 = gk_inv.entries()
    items = data.items
    for c in range(data.c_done + 1, c_max + 1):
        if group.kind == "gamma1":
            d = np.arange(c, dtype=np.int64)
            items.append(d[np.gcd(d, c) == 1])
            continue
        if (c & 1) != pc:
            items.append(np.empty(0, dtype=np.int64))
            continue
        d0 = np.arange(pd, 2 * c, 2, dtype=np.int64)
        d0 = d0[np.gcd(d0, c) == 1]
        if group.kind == "gamma2" or n == 1:
            items.append(d0)
            continue
        out: list[int] = []
        period = 2 * n * c
        for dv in d0.tolist():
            a0 = pow(dv, -1, c) if c > 1 else 0
            matched = None
            for a in (a0, a0 + c):
                if (a & 1) != pa:
                    continue
                b = (a * dv - 1) // c
                if (b & 1) != pb:
                    continue
                matched = (a, b)
                break
            if matched is None:
                continue
            a, b = matched
            # rho = gj * M * gk^-1
            m11 = e * a + f * c
            m12 = e * b + f * dv
            m21 = g_ * a + h * c
            m22 = g_ * b + h * dv
            r11 = m11 * ki11 + m12 * ki21
            r12 = m11 * ki12 + m12 * ki22
            r21 = m21 * ki11 + m22 * ki21
            r22 = m21 * ki12 + m22 * ki22
            sums = gamma2_exponent_sums(r11, r12, r21, r22)
            if sums is None:
                continue
            r1, r2 = sums[0] % n, sums[1] % n
            if same_base:
                # solvable iff -r parallel to the stabilizer vector
                if (r1 * vj[1] - r2 * vj[0]) % n == 0:
                    out.extend((dv + 2 * c * t) % period for t in range(n))
            else:
                t = (-vj[1] * (-r1) + vj[0] * (-r2)) * det_inv % n
                out.append((dv + 2 * c * t) % period)
        items.append(np.array(sorted(out), dtype=np.int64))
    data.c_done = max(data.c_done, c_max)
    return items


def phi_coefficient(group: GroupId, j, k, m: int, s,
                    trunc: TruncationSpec = DEFAULT_TRUNCATION,
                    tol: float | None = None) -> PhiTerm:
    """phi_{jk,m}(s) truncated at c <= c_max, with a tail estimate.

    Sums exp(2 pi i m d/(width c)) / c^(2s) over the admissible residues
    of the double coset.  Requires Re s > 1, or s = 1 with m != 0 where
    the bounded inner sums give conditional convergence.
    """
    sigma = complex(s).real
    if sigma < 1 or (sigma == 1 and m == 0):
        raise DivergentRegion("phi requires Re s > 1, or s = 1 with m != 0")
    jc = standard_rep(group, j)
    kc = standard_rep(group, k)
    items = _phi_items(group, jc, kc, trunc.c_max)
    b = group.width
    total = 0j
    max_inner = 0.0
    for ci in range(trunc.c_max):
        arr = items[ci]
        if arr.size == 0:
            continue
        c = ci + 1
        if m == 0:
            inner = complex(arr.size)
        else:
            inner = complex(np.exp((2j * math.pi * m / (b * c)) * arr).sum())
        max_inner = max(max_inner, abs(inner))
        total += inner * complex(c) ** (-2 * s)
    if sigma > 1:
        tail = b * trunc.c_max ** (2 - 2 * sigma) / (2 * sigma - 2)
    else:
        # bounded inner sums: geometric-free 1/c^2 tail at the observed scale
        tail = max(max_inner, float(2 * b)) / trunc.c_max
    if tol is not None and sigma > 1 and tail > tol:
        raise TruncationUnsound(f"tail estimate {tail:.3e} exceeds tolerance {tol:.3e}")
    return PhiTerm(group, jc, kc, m, complex(s), total, trunc.c_max, tail)


def gamma2_phi0_closed_form(diag: bool, s, cfg: PrecisionConfig = DEFAULT_PRECISION) -> float:
    """Factored Dirichlet series of the level-2 zero modes:
    2/(2^(2s)-1) * zeta(2s-1)/zeta(2s) on the diagonal and
    (2^(2s)-2)/(2^(2s)-1) * zeta(2s-1)/zeta(2s) off it."""
    w = 2.0 * s
    num = zeta(w - 1.0, cfg) / zeta(w, cfg)
    if diag:
        return 2.0 / (2.0 ** w - 1.0) * num
    return (2.0 ** w - 2.0) / (2.0 ** w - 1.0) * num


def _divisors(m: int) -> list[int]:
    m = abs(m)
    out = []
    i = 1
    while i * i <= m:
        if m % i == 0:
            out.append(i)
            if i != m // i:
                out.append(m // i)
        i += 1
    return sorted(out)


def gamma2_phi_m_closed_form(pair_parity: tuple[int, int], m: int, s: float,
                             cfg: PrecisionConfig = DEFAULT_PRECISION) -> float:
    """Exact value of phi_{jk,m}(s) for the level-2 group, m != 0.

    pair_parity = (c, d) parities of the admissible pairs: (0, 1) for
    diagonal entries, (1, 0) and (1, 1) for the two off-diagonal types.
    Obtained by factoring the Ramanujan-sum Dirichlet series through the
    2-adic part of m.
    """
    if m == 0:
        raise ValueError("use gamma2_phi0_closed_form for m = 0")
    w = 2.0 * s
    zw = zeta(w, cfg)
    divs = _divisors(m)
    if pair_parity == (0, 1):
        d2 = sum(d ** (1.0 - w) for d in divs if d % 4 == 2)
        d4 = sum(d ** (1.0 - w) for d in divs if d % 4 == 0)
        return (-d2 / (1.0 - 2.0 ** -w) + 2.0 ** w * d4) / zw
    odd = sum(d ** (1.0 - w) for d in divs if d % 2 == 1)
    base = odd / (zw * (1.0 - 2.0 ** -w))
    if pair_parity == (1, 0):
        return base
    return base * (-1.0 if m % 2 else 1.0)


def _gamma2_pair_parity(j: Cusp, k: Cusp) -> tuple[int, int]:
    gj = cusp_scaling_matrix(standard_rep(GAMMA2, j))
    gk = cusp_scaling_matrix(standard_rep(GAMMA2, k))
    pt = gj.inverse() * gk
    return (pt.c & 1, pt.d & 1)


def phi_m1_exact(group: GroupId, j, k, m: int,
                 trunc: TruncationSpec = DEFAULT_TRUNCATION,
                 cfg: PrecisionConfig = DEFAULT_PRECISION) -> complex:
    """phi_{jk,m}(1) for m != 0: closed form where available (full
    modular group and level 2), else the truncated enumeration."""
    if group.kind == "gamma1":
        return complex(sum(1.0 / d for d in _divisors(m)) / zeta(2.0, cfg))
    if group.kind == "gamma2":
        return complex(gamma2_phi_m_closed_form(_gamma2_pair_parity(as_cusp(j), as_cusp(k)),
                                                m, 1.0, cfg))
    return phi_coefficient(group, j, k, m, 1.0, trunc).partial_sum


# ---------------------------------------------------------------------------
# Fourier assembly
# ---------------------------------------------------------------------------

def fourier_eval(group: GroupId, j, k, z: complex, s,
                 trunc: TruncationSpec = DEFAULT_TRUNCATION,
                 cfg: PrecisionConfig = DEFAULT_PRECISION) -> complex:
    """E_j(gamma_k(z), s) assembled from the Fourier expansion in the
    chart of the standard representative of k."""
    sigma = complex(s).real
    if sigma <= 1:
        raise DivergentRegion("Fourier evaluation requires Re s > 1")
    x, y = z.real, z.imag
    jc = standard_rep(group, j)
    kc = standard_rep(group, k)
    b = group.width
    val = 0j
    if jc == kc:
        val += (complex(y) / b) ** s
    gs = gamma_fn(complex(s), cfg)
    gs_half = gamma_fn(complex(s) - 0.5, cfg)
    phi0 = phi_coefficient(group, jc, kc, 0, s, trunc).partial_sum
    val += math.sqrt(math.pi) * gs_half / gs * phi0 * complex(y) ** (1 - s) \
        / (complex(b) ** s * b)
    for m in range(1, trunc.m_max + 1):
        arg = 2.0 * math.pi * m * y / b
        if arg > 700.0:
            break
        kb = bessel_k(complex(s) - 0.5, arg, cfg)
        coef = 2.0 * math.pi ** complex(s) * (m / b) ** (complex(s) - 0.5) / gs \
            * math.sqrt(y) * kb / (complex(b) ** s * b)
        for sign in (1, -1):
            phim = phi_coefficient(group, jc, kc, sign * m, s, trunc).partial_sum
            val += coef * phim * cmath.exp(2j * math.pi * sign * m * x / b)
    return val


def fourier_limit_eval(group: GroupId, j, k, z: complex,
                       trunc: TruncationSpec = DEFAULT_TRUNCATION,
                       cfg: PrecisionConfig = DEFAULT_PRECISION) -> complex:
    """4 pi * lim_(s->1) (E_j(gamma_k z, s) - 1/(vol (s-1))).

    Constant mode from the closed-form natural scattering constant, log
    term with coefficient 12/index on the 4 pi scale, oscillating modes
    pi/(b_j b_k) phi_{jk,m}(1) exp(-2 pi |m| y / b_k + 2 pi i m x / b_k).
    """
    x, y = z.real, z.imag
    if y <= 0:
        raise ValueError("z must lie in the upper half plane")
    jc = standard_rep(group, j)
    kc = standard_rep(group, k)
    if group.kind not in ("gamma1", "gamma2", "gamma_n"):
        raise MissingConstants(str(group))
    ct = scattering.natural_constant(group, jc, kc, cfg)
    b = group.width
    val = 4.0 * math.pi * (ct - (3.0 / (math.pi * group.index)) * math.log(y))
    if jc == kc:
        val += 4.0 * math.pi * y / b
    m_eff = min(trunc.m_max, math.ceil(b * 40.0 / (2.0 * math.pi * y)))
    acc = 0.0
    for m in range(1, m_eff + 1):
        decay = math.exp(-2.0 * math.pi * m * y / b)
        if decay < 1e-18:
            break
        phim = phi_m1_exact(group, jc, kc, m, trunc, cfg)
        acc += 2.0 * (phim * cmath.exp(2j * math.pi * m * x / b)).real * decay
    val += 4.0 * math.pi * (math.pi / (b * b)) * acc
    return complex(val)
