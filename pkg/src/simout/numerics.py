"""Special functions and distribution functions used by the tests.

Everything here works on Python floats. The regularized incomplete beta is
evaluated with a modified Lentz continued fraction, switching to the
symmetric form above ``x = (a+1)/(a+b+2)``; the regularized incomplete gamma
uses its power series below ``x = s+1`` and a continued fraction above.
The t, F and chi-square functions are thin wrappers over those two, and
each also has an upper-tail (``_sf``) form that avoids ``1 - cdf``
cancellation when p-values are small.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import brentq

from .errors import DomainError, NoConvergence

__all__ = [
    "Tolerance",
    "DEFAULT_TOL",
    "normal_cdf",
    "normal_sf",
    "normal_pdf",
    "normal_quantile",
    "reg_incomplete_beta",
    "reg_incomplete_gamma",
    "reg_incomplete_gamma_upper",
    "student_t_cdf",
    "student_t_sf",
    "student_t_two_sided",
    "student_t_quantile",
    "f_cdf",
    "f_sf",
    "chi2_cdf",
    "chi2_sf",
]


@dataclass(frozen=True)
class Tolerance:
    rel_eps: float = 1e-12
    max_iter: int = 300

    def __post_init__(self):
        if not self.rel_eps > 0:
            raise DomainError(f"rel_eps must be positive, got {self.rel_eps}")
        if self.max_iter < 1:
            raise DomainError(f"max_iter must be >= 1, got {self.max_iter}")


DEFAULT_TOL = Tolerance()

_TINY = 1e-300
_SQRT2 = math.sqrt(2.0)
_SQRT2PI = math.sqrt(2.0 * math.pi)


def _check_real(name: str, x: float) -> float:
    x = float(x)
    if math.isnan(x):
        raise DomainError(f"{name} is NaN")
    return x


# -- normal ----------------------------------------------------------------

def normal_cdf(x: float) -> float:
    x = _check_real("x", x)
    return 0.5 * math.erfc(-x / _SQRT2)


def normal_sf(x: float) -> float:
    x = _check_real("x", x)
    return 0.5 * math.erfc(x / _SQRT2)


def normal_pdf(x: float) -> float:
    return math.exp(-0.5 * x * x) / _SQRT2PI


# Acklam's rational approximation, relative error ~1.15e-9 before refinement.
_A = (-3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
      1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00)
_B = (-5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
      6.680131188771972e01, -1.328068155288572e01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
      -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
      3.754408661907416e00)
_P_LOW = 0.02425


def _acklam(p: float) -> float:
    if p < _P_LOW:
        q = math.sqrt(-2.0 * math.log(p))
        num = ((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]
        den = (((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0
        return num / den
    q = p - 0.5
    r = q * q
    num = (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q
    den = ((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0
    return num / den


def normal_quantile(p: float) -> float:
    """Inverse standard normal CDF for ``0 < p < 1``.

    Rational approximation followed by one Halley step on :func:`normal_cdf`.
    The upper half is mirrored from the lower half, so the result is exactly
    antisymmetric whenever ``1 - p`` is exact.
    """
    p = _check_real("p", p)
    if not 0.0 < p < 1.0:
        raise DomainError(f"normal_quantile needs 0 < p < 1, got {p}")
    if p > 0.5:
        return -normal_quantile(1.0 - p)
    if p == 0.5:
        return 0.0
    x = _acklam(p)
    dens = normal_pdf(x)
    if dens == 0.0:
        return x
    u = (normal_cdf(x) - p) / dens
    return x - u / (1.0 + 0.5 * x * u)


# -- incomplete beta / gamma -----------------------------------------------

def _beta_cf(a: float, b: float, x: float, tol: Tolerance) -> float:
    """Continued fraction for I_x(a, b), modified Lentz."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, tol.max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) <= tol.rel_eps:
            return h
    raise NoConvergence(f"incomplete beta continued fraction: a={a}, b={b}, x={x}", max_iter=tol.max_iter)


def reg_incomplete_beta(a: float, b: float, x: float, tol: Tolerance = DEFAULT_TOL) -> float:
    """Regularized incomplete beta function I_x(a, b)."""
    a, b, x = _check_real("a", a), _check_real("b", b), _check_real("x", x)
    if a <= 0 or b <= 0:
        raise DomainError(f"incomplete beta needs a, b > 0, got a={a}, b={b}")
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"incomplete beta needs 0 <= x <= 1, got {x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    log_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                 + a * math.log(x) + b * math.log1p(-x))
    if x < (a + 1.0) / (a + b + 2.0):
        val = math.exp(log_front) * _beta_cf(a, b, x, tol) / a
    else:
        val = 1.0 - math.exp(log_front) * _beta_cf(b, a, 1.0 - x, tol) / b
    return min(max(val, 0.0), 1.0)


def _gamma_series(s: float, x: float, tol: Tolerance) -> float:
    term = 1.0 / s
    total = term
    ap = s
    for _ in range(tol.max_iter):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * tol.rel_eps:
            return total * math.exp(-x + s * math.log(x) - math.lgamma(s))
    raise NoConvergence(f"incomplete gamma series: s={s}, x={x}", max_iter=tol.max_iter)


def _gamma_cf(s: float, x: float, tol: Tolerance) -> float:
    b = x + 1.0 - s
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, tol.max_iter + 1):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) <= tol.rel_eps:
            return math.exp(-x + s * math.log(x) - math.lgamma(s)) * h
    raise NoConvergence(f"incomplete gamma continued fraction: s={s}, x={x}", max_iter=tol.max_iter)


def _check_gamma_args(s: float, x: float) -> tuple[float, float]:
    s, x = _check_real("s", s), _check_real("x", x)
    if s <= 0:
        raise DomainError(f"incomplete gamma needs s > 0, got {s}")
    if x < 0:
        raise DomainError(f"incomplete gamma needs x >= 0, got {x}")
    return s, x


def reg_incomplete_gamma(s: float, x: float, tol: Tolerance = DEFAULT_TOL) -> float:
    """Regularized lower incomplete gamma P(s, x)."""
    s, x = _check_gamma_args(s, x)
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return 1.0
    if x < s + 1.0:
        return min(_gamma_series(s, x, tol), 1.0)
    return min(max(1.0 - _gamma_cf(s, x, tol), 0.0), 1.0)


def reg_incomplete_gamma_upper(s: float, x: float, tol: Tolerance = DEFAULT_TOL) -> float:
    """Regularized upper incomplete gamma Q(s, x) = 1 - P(s, x)."""
    s, x = _check_gamma_args(s, x)
    if x == 0.0:
        return 1.0
    if math.isinf(x):
        return 0.0
    if x < s + 1.0:
        return min(max(1.0 - _gamma_series(s, x, tol), 0.0), 1.0)
    return min(_gamma_cf(s, x, tol), 1.0)


# -- t, F, chi-square -------------------------------------------------------

def _check_dof(name: str, v: float) -> float:
    v = _check_real(name, v)
    if not v > 0:
        raise DomainError(f"{name} must be positive, got {v}")
    return v


def _t_split(t: float, nu: float, tol: Tolerance) -> tuple[float, float]:
    """(P(|T| >= |t|), P(|T| < |t|)), each from its well-conditioned side.

    For small t the argument nu / (nu + t^2) rounds to within an ulp of 1
    and the tail form loses digits, so the central probability is
    evaluated directly as I_{t^2/(nu+t^2)}(1/2, nu/2).
    """
    if math.isinf(t):
        return 0.0, 1.0
    t2 = t * t
    if t2 < nu:
        central = reg_incomplete_beta(0.5, 0.5 * nu, t2 / (nu + t2), tol)
        return 1.0 - central, central
    tail = reg_incomplete_beta(0.5 * nu, 0.5, nu / (nu + t2), tol)
    return tail, 1.0 - tail


def _t_tail2(t: float, nu: float, tol: Tolerance) -> float:
    """P(|T| >= |t|)."""
    return _t_split(t, nu, tol)[0]


def student_t_cdf(t: float, nu: float, tol: Tolerance = DEFAULT_TOL) -> float:
    t = _check_real("t", t)
    nu = _check_dof("nu", nu)
    tail, central = _t_split(t, nu, tol)
    return 0.5 + 0.5 * central if t > 0 else 0.5 * tail


def student_t_sf(t: float, nu: float, tol: Tolerance = DEFAULT_TOL) -> float:
    t = _check_real("t", t)
    nu = _check_dof("nu", nu)
    tail, central = _t_split(t, nu, tol)
    return 0.5 * tail if t > 0 else 0.5 + 0.5 * central


def student_t_two_sided(t: float, nu: float, tol: Tolerance = DEFAULT_TOL) -> float:
    """Two-sided p-value P(|T| >= |t|)."""
    return _t_tail2(_check_real("t", t), _check_dof("nu", nu), tol)


def student_t_quantile(p: float, nu: float, tol: Tolerance = DEFAULT_TOL) -> float:
    """Inverse of :func:`student_t_cdf` by bracketed root finding (Brent)."""
    p = _check_real("p", p)
    nu = _check_dof("nu", nu)
    if not 0.0 < p < 1.0:
        raise DomainError(f"student_t_quantile needs 0 < p < 1, got {p}")
    if p == 0.5:
        return 0.0
    if p < 0.5:
        return -student_t_quantile(1.0 - p, nu, tol)
    target = 1.0 - p  # exact for p >= 0.5

    def f(t):
        return 0.5 * _t_tail2(t, nu, tol) - target

    hi = max(1.0, 2.0 * abs(normal_quantile(p)))
    while f(hi) > 0:
        hi *= 2.0
        if hi > 1e300:
            raise NoConvergence(f"could not bracket t quantile p={p}, nu={nu}")
    return brentq(f, 0.0, hi, xtol=1e-14, rtol=4 * 2.0**-52, maxiter=500)


def f_cdf(x: float, d1: float, d2: float, tol: Tolerance = DEFAULT_TOL) -> float:
    x = _check_real("x", x)
    d1, d2 = _check_dof("d1", d1), _check_dof("d2", d2)
    if x < 0:
        raise DomainError(f"f_cdf needs x >= 0, got {x}")
    if math.isinf(x):
        return 1.0
    return reg_incomplete_beta(0.5 * d1, 0.5 * d2, d1 * x / (d1 * x + d2), tol)


def f_sf(x: float, d1: float, d2: float, tol: Tolerance = DEFAULT_TOL) -> float:
    x = _check_real("x", x)
    d1, d2 = _check_dof("d1", d1), _check_dof("d2", d2)
    if x < 0:
        raise DomainError(f"f_sf needs x >= 0, got {x}")
    if math.isinf(x):
        return 0.0
    return reg_incomplete_beta(0.5 * d2, 0.5 * d1, d2 / (d2 + d1 * x), tol)


def chi2_cdf(x: float, k: float, tol: Tolerance = DEFAULT_TOL) -> float:
    x = _check_real("x", x)
    k = _check_dof("k", k)
    if x < 0:
        raise DomainError(f"chi2_cdf needs x >= 0, got {x}")
    return reg_incomplete_gamma(0.5 * k, 0.5 * x, tol)


def chi2_sf(x: float, k: float, tol: Tolerance = DEFAULT_TOL) -> float:
    x = _check_real("x", x)
    k = _check_dof("k", k)
    if x < 0:
        raise DomainError(f"chi2_sf needs x >= 0, got {x}")
    return reg_incomplete_gamma_upper(0.5 * k, 0.5 * x, tol)
