"""Executable cross-checks of the analytic identities.

Every check compares two independently computed sides and reports an
absolute residual against a pinned tolerance.  Checks never abort the
suite; failures are recorded in the report list.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import scattering
from .eisenstein import (
    DEFAULT_TRUNCATION,
    TruncationSpec,
    eisenstein_direct,
    eisenstein_direct_all,
    fourier_eval,
    fourier_limit_eval,
    _phi_items,
    classify_index,
    standard_rep,
)
from .fermat import (
    GAMMA2,
    FermatCusp,
    GroupId,
    cusp_reps,
    gamma2_base,
    gamma_n,
)
from .qseries import FormLabel, coset_product_value, expansion, petersson_norm_sq
from .sl2 import CUSP_INF, CUSP_ONE, CUSP_ZERO, Cusp, cusp_scaling_matrix, mobius_point
from .special import DEFAULT_PRECISION, PrecisionConfig

PROBE_GRID = (1j, 2j, 1 + 2j, 0.3 + 1.5j)


@dataclass(frozen=True)
class CheckReport:
    check_id: str
    parameters: dict
    residual: float
    tolerance: float
    passed: bool
    runtime_ms: int

    def to_json_dict(self, with_runtime: bool = True) -> dict:
        return {
            "check_id": self.check_id,
            "parameters": {k: str(v) for k, v in sorted(self.parameters.items())},
            "residual": self.residual,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "runtime_ms": self.runtime_ms if with_runtime else 0,
        }


def _report(check_id: str, params: dict, residual: float, tol: float,
            t_start: float) -> CheckReport:
    ms = int((time.perf_counter() - t_start) * 1000)
    return CheckReport(check_id, params, float(residual), float(tol),
                       bool(residual <= tol), ms)


_GLABEL = {0: "g0", 1: "g1", 2: "ginf"}


def check_klf_gamma2(j: Cusp, z: complex,
                     trunc: TruncationSpec = DEFAULT_TRUNCATION,
                     cfg: PrecisionConfig = DEFAULT_PRECISION,
                     tol: float = 1e-6) -> CheckReport:
    """Kronecker limit formula at level 2: regularized Eisenstein limit
    against -log ||G_j||^2 + klf_constant."""
    t0 = time.perf_counter()
    lhs = fourier_limit_eval(GAMMA2, j, CUSP_INF, z, trunc, cfg)
    idx = classify_index(GAMMA2, j.p, j.q)
    g = expansion(FormLabel(_GLABEL[idx]), Fraction(trunc.order))
    gv, _ = g.evaluate(z)
    rhs = -math.log(petersson_norm_sq(gv, z, 2)) + scattering.klf_constant(GAMMA2, cfg)
    return _report("klf_gamma2", {"j": j, "z": z}, abs(lhs - rhs), tol, t0)


def check_klf_fermat(n: int, fc: FermatCusp, z: complex,
                     trunc: TruncationSpec = DEFAULT_TRUNCATION,
                     cfg: PrecisionConfig = DEFAULT_PRECISION,
                     tol: float = 1e-4) -> CheckReport:
    """Kronecker limit formula for the level-n Fermat group at the
    infinity chart."""
    t0 = time.perf_counter()
    group = gamma_n(n)
    chart = cusp_reps(n)[-1].rep
    lhs = fourier_limit_eval(group, fc.rep, chart, z, trunc, cfg)
    lab = FormLabel("f", n, fc.kind, fc.index)
    fv, _ = expansion(lab, Fraction(trunc.order)).evaluate(z)
    rhs = -math.log(petersson_norm_sq(fv, z, 2)) / (n * n) \
        + scattering.klf_constant(group, cfg)
    return _report("klf_fermat", {"n": n, "cusp": fc.rep, "z": z},
                   abs(lhs - rhs), tol, t0)


def check_limitsum(n: int, fc: FermatCusp, z: complex,
                   trunc: TruncationSpec = DEFAULT_TRUNCATION,
                   cfg: PrecisionConfig = DEFAULT_PRECISION,
                   tol: float = 1e-5) -> CheckReport:
    """Coset-summed limit formula: the level-2 limit minus
    log(n)/vol(level 2), 4 pi scaled, against the coset product of form
    norms plus the shifted constant."""
    t0 = time.perf_counter()
    base = gamma2_base(fc.rep)
    lhs = fourier_limit_eval(GAMMA2, base, CUSP_INF, z, trunc, cfg).real \
        - 2.0 * math.log(n)
    prod = coset_product_value(fc.kind, fc.index, n, z, order=Fraction(trunc.order))
    log_norm_sum = math.log(abs(prod) ** 2 * z.imag ** (2 * n * n))
    zc = scattering.z_constant(cfg)
    rhs = -log_norm_sum / (n * n) \
        + 4.0 * (zc + math.log(2.0) / 6.0 - math.log(n) / 2.0)
    return _report("limitsum", {"n": n, "cusp": fc.rep, "z": z},
                   abs(lhs - rhs), tol, t0)


def check_sum_relation(n: int, k: Cusp, z: complex, s: float = 2.0,
                       trunc: TruncationSpec = DEFAULT_TRUNCATION,
                       tol: float = 1e-5) -> CheckReport:
    """Width-weighted subcusp sum of Fermat-group Eisenstein series
    against the level-2 series, relative residual."""
    t0 = time.perf_counter()
    group = gamma_n(n)
    base = gamma2_base(k)
    vals_n, _ = eisenstein_direct_all(group, z, s, trunc)
    vals_2, _ = eisenstein_direct_all(GAMMA2, z, s, trunc)
    reps = cusp_reps(n)
    b, w = 2 * n, 2
    # b^s E_j and w^s E_k; the direct buckets carry no width prefactor
    lhs = sum(b ** s * (b ** -s * vals_n[i])
              for i, fc in enumerate(reps) if gamma2_base(fc.rep) == base)
    rhs = w ** s * (w ** -s * vals_2[classify_index(GAMMA2, base.p, base.q)])
    res = abs(lhs - rhs) / abs(rhs)
    return _report("sum_relation", {"n": n, "k": k, "z": z, "s": s}, res, tol, t0)


def check_sumrs(n: int, c: int, m: int, j: Cusp, k: Cusp,
                tol: float = 1e-10) -> CheckReport:
    """Exact finite-sum identity for the inner Fourier sums: the
    width-normalized sum over the subcusps against the level-2 sum."""
    t0 = time.perf_counter()
    group = gamma_n(n)
    base_k = gamma2_base(k)
    lhs = 0j
    for l in cusp_reps(n):
        if gamma2_base(l.rep) != base_k:
            continue
        arr = _phi_items(group, j, l.rep, c)[c - 1]
        if arr.size:
            lhs += np.exp((2j * math.pi * m / (2 * c)) * arr).sum()
    lhs /= 2 * n
    arr2 = _phi_items(GAMMA2, j, base_k, c)[c - 1]
    rhs = (np.exp((2j * math.pi * m / (2 * c)) * arr2).sum() if arr2.size else 0j) / 2
    return _report("sumrs", {"n": n, "c": c, "m": m, "j": j, "k": k},
                   abs(lhs - rhs), tol, t0)


def check_scattering_consistency(n: int,
                                 cfg: PrecisionConfig = DEFAULT_PRECISION,
                                 tol: float = 1e-10) -> CheckReport:
    """Subcusp linear relations among the closed-form Fermat-group
    constants against the level-2 constants."""
    t0 = time.perf_counter()
    res = scattering.subcusp_relation_residual(n, cfg)
    if n == 1:
        m1 = scattering.scattering_matrix(1, cfg)
        g2 = scattering.gamma2_constants(cfg)
        res = max(res, max(abs(m1[i][j].normalized - g2[i][j].normalized)
                           for i in range(3) for j in range(3)))
    return _report("scattering_consistency", {"n": n}, res, tol, t0)


def check_cross_path(group: GroupId, j: Cusp, k: Cusp, z: complex, s: float = 2.0,
                     trunc: TruncationSpec = DEFAULT_TRUNCATION,
                     cfg: PrecisionConfig = DEFAULT_PRECISION,
                     tol: float = 1e-4) -> CheckReport:
    """Fourier expansion against direct summation in the k chart."""
    t0 = time.perf_counter()
    fe = fourier_eval(group, j, k, z, s, trunc, cfg)
    gk = cusp_scaling_matrix(standard_rep(group, k))
    de, _ = eisenstein_direct(group, j, mobius_point(gk, z), s, trunc)
    return _report("cross_path", {"group": group, "j": j, "k": k, "z": z, "s": s},
                   abs(fe - de), tol, t0)


def _suite_checks(level: str, ns: tuple[int, ...],
                  trunc: TruncationSpec, cfg: PrecisionConfig):
    """Deterministic declaration order of the suite's checks."""
    checks = []
    for n in (1, 2, 3, 4, 5):
        checks.append(("scattering_consistency", lambda n=n: check_scattering_consistency(n, cfg)))
    for n in [x for x in ns if x > 1]:
        for c in (1, 2, 3, 4):
            for m in (0, 1, 2):
                checks.append((
                    "sumrs",
                    lambda n=n, c=c, m=m: check_sumrs(n, c, m, CUSP_INF, CUSP_ZERO)))
    if level == "fast":
        return checks
    small = TruncationSpec(c_max=min(trunc.c_max, 400), m_max=trunc.m_max,
                           order=trunc.order)
    for j in (CUSP_ZERO, CUSP_ONE, CUSP_INF):
        for z in (2j, 1 + 2j):
            checks.append(("klf_gamma2",
                           lambda j=j, z=z: check_klf_gamma2(j, z, trunc, cfg)))
    for n in [x for x in ns if x > 1]:
        reps = cusp_reps(n)
        for fc in (reps[0], reps[n], reps[-1]):
            for z in (2j, 1 + 2j):
                checks.append(("klf_fermat",
                               lambda n=n, fc=fc, z=z: check_klf_fermat(n, fc, z, trunc, cfg)))
        checks.append(("limitsum",
                       lambda n=n, fc=reps[n]: check_limitsum(n, fc, 2j, trunc, cfg)))
        for k in (CUSP_ZERO, CUSP_INF):
            checks.append(("sum_relation",
                           lambda n=n, k=k: check_sum_relation(n, k, 1 + 2j, 2.0, small)))
        reps_n = cusp_reps(n)
        for (j, k) in ((reps_n[-1].rep, reps_n[-1].rep), (reps_n[0].rep, reps_n[-1].rep)):
            checks.append(("cross_path",
                           lambda n=n, j=j, k=k: check_cross_path(gamma_n(n), j, k, 1j, 2.0, small, cfg)))
    return checks


def run_suite(level: str = "fast",
              trunc: TruncationSpec = DEFAULT_TRUNCATION,
              cfg: PrecisionConfig = DEFAULT_PRECISION,
              ns: tuple[int, ...] = (1, 2),
              workers: int = 1) -> list[CheckReport]:
    """Run the named suite; reports are collected in declaration order
    regardless of the worker count.  Individual check failures never
    abort the suite."""
    if level not in ("fast", "full"):
        raise ValueError("suite level must be 'fast' or 'full'")
    checks = _suite_checks(level, tuple(ns), trunc, cfg)

    def run_one(item):
        name, fn = item
        try:
            return fn()
        except Exception as exc:  # recorded, never raised
            return CheckReport(name, {"error": repr(exc)}, math.inf, 0.0, False, 0)

    if workers <= 1:
        return [run_one(item) for item in checks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run_one, checks))
