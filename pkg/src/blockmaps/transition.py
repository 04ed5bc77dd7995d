"""Phase-transition diagnostics: singular points, offspring laws, critical
weights, and coefficient-asymptotics exponents.

All quantities reduce to three numbers per block family, computed once on
its algebraic curve Q(w, v) = 0:

  R   radius of convergence of the block series,
  a   = B(R)   (finite: map block series have a 3/2-type singularity),
  b'  = B'(R)  (also finite).

At a 3/2 singularity the curve point (R, a) is singular (both partials of
Q vanish).  R is found by following the crest v*(w) solving Q_v = 0 and
bisecting the residual Q(w, v*(w)), which has a triple zero at R; then
B'(R) = -Q_wv/Q_vv at (R, a).  Everything else is closed-form arithmetic:

  EQ1, H-exponent d:  Phi(X) = 1 + u B(X^d)
      subcritical:  yhat = R^(1/d), E = u d R b'/(1+u a), rho = R/(1+u a)^d
  scheme 8:           Phi(X) = 1/(1 - u T3(X^2))
      subcritical:  E = 2 u R t3'/(1 - u t3), rho = R (1 - u t3)^2
  supercritical: tilt at the branch point Phi(tau) = tau Phi'(tau).

A coefficient-ratio estimate from the actual weighted series provides an
independent cross-check of rho.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

from . import curves, schemes
from .poly import Poly, partial

DEFAULT_PREC_BITS = 128
_INTERNAL_PREC = 320          # crest accuracy ~ 2^(-prec/3)
REGIME_TOL = 1e-6             # |E-1| tolerance for regime classification
SEED_ORDER = 192              # block series order used for seeding/ratios


class SingularSolveError(RuntimeError):
    pass


# ------------------------------------------------------- curve evaluation


def _peval(Q: Poly, w, v):
    s = mp.mpf(0)
    for (i, j), c in Q.items():
        s += c * w**i * v**j
    return s


def _newton_root(Q: Poly, Qv: Poly, w, v0, maxit: int = 140):
    """Track the root of Q(w, .) = 0 from seed v0 (damped Newton)."""
    v = mp.mpf(v0)
    cap = (1 + abs(v)) / 4
    for _ in range(maxit):
        fp = _peval(Qv, w, v)
        if fp == 0:
            raise SingularSolveError("zero derivative while tracking root")
        dv = _peval(Q, w, v) / fp
        if abs(dv) > cap:
            dv = cap * mp.sign(dv)
        v -= dv
        if abs(dv) < mp.mpf(2) ** (-mp.mp.prec + 8) * (1 + abs(v)):
            return v
    raise SingularSolveError("root tracking did not converge")


def _series_eval(coeffs, w):
    s = mp.mpf(0)
    p = mp.mpf(1)
    for c in coeffs:
        s += c * p
        p *= w
    return s


def ratio_radius(coeffs, powers=(1, 2, 3, 4)) -> mp.mpf:
    """Radius estimate by Richardson-extrapolated coefficient ratios.

    Consecutive nonzero coefficients only; corrections are assumed to be
    整-power in 1/n unless other powers are passed.
    """
    nz = [n for n in range(1, len(coeffs)) if coeffs[n] != 0]
    if len(nz) < 3 * (len(powers) + 2):
        raise SingularSolveError("not enough nonzero coefficients for ratios")
    stride = nz[-1] - nz[-2]
    nodes = []
    vals = []
    need = len(powers) + 1
    pick = [len(nz) - 1 - i * max(1, len(nz) // (3 * need)) for i in range(need)]
    for idx in pick:
        n2 = nz[idx]
        n1 = n2 - stride
        if n1 not in nz and coeffs[n1] == 0:
            raise SingularSolveError("irregular support for ratio estimate")
        nodes.append(n2)
        vals.append((mp.mpf(coeffs[n1]) / coeffs[n2]) ** (mp.mpf(1) / stride))
    return _richardson(nodes, vals, powers)


def _richardson(nodes, vals, powers):
    k = len(powers)
    A = mp.matrix(k + 1, k + 1)
    b = mp.matrix(k + 1, 1)
    for i in range(k + 1):
        A[i, 0] = 1
        for j, p in enumerate(powers):
            p = Fraction(p)
            A[i, j + 1] = mp.mpf(nodes[i]) ** (-mp.mpf(p.numerator) / p.denominator)
        b[i] = vals[i]
    return mp.lu_solve(A, b)[0]


# ------------------------------------------------- singular curve data

_lock = threading.Lock()
_singular_cache: dict = {}


@dataclass(frozen=True)
class CurveSingularity:
    """Branch-point data of a block family's counting series."""

    family: str
    R: mp.mpf
    value: mp.mpf       # B(R)
    deriv: mp.mpf       # B'(R)
    ratio_R: mp.mpf     # independent coefficient-ratio estimate of R


def family_singularity(family: str, prec: int = _INTERNAL_PREC) -> CurveSingularity:
    key = (family, prec)
    with _lock:
        if key in _singular_cache:
            return _singular_cache[key]
    Q = curves.family_curve(family)
    coeffs = schemes.family_series_int(family, SEED_ORDER)
    with mp.workprec(prec):
        Qw = partial(Q, 0)
        Qv = partial(Q, 1)
        Qvv = partial(Qv, 1)
        Qwv = partial(Qw, 1)
        r_ratio = ratio_radius(coeffs)
        w_seed = r_ratio * mp.mpf("0.97")
        v_crest = _newton_root(Qv, Qvv, w_seed, _series_eval(coeffs, w_seed))

        def g(w, vprev):
            v = _newton_root(Qv, Qvv, w, vprev)
            return _peval(Q, w, v), v

        lo, vlo = w_seed, v_crest
        glo, vlo = g(lo, vlo)
        hi, vhi = lo, vlo
        step = r_ratio / 200
        for _ in range(40):
            hi2 = hi + step
            ghi, vhi2 = g(hi2, vhi)
            if ghi * glo <= 0:
                lo, hi, vlo = hi, hi2, vhi
                break
            hi, vhi = hi2, vhi2
            lo, glo, vlo = hi2, ghi, vhi2
        else:
            raise SingularSolveError(
                f"no crest sign change for family {family!r}")
        glo, v = g(lo, vlo)
        for _ in range(int(prec * 0.45) + 40):
            mid = (lo + hi) / 2
            gm, v = g(mid, v)
            if gm * glo <= 0:
                hi = mid
            else:
                lo, glo = mid, gm
        R = (lo + hi) / 2
        a = _newton_root(Qv, Qvv, R, v)
        bp = -_peval(Qwv, R, a) / _peval(Qvv, R, a)
        if abs(r_ratio - R) / R > mp.mpf("1e-3"):
            raise SingularSolveError(
                f"ratio and curve radius disagree for {family!r}: "
                f"{mp.nstr(r_ratio, 12)} vs {mp.nstr(R, 12)}")
        out = CurveSingularity(family, R, a, bp, r_ratio)
    with _lock:
        _singular_cache[key] = out
    return out


class BlockCurveEval:
    """Evaluate B(w) and B'(w) on the curve strictly inside the radius."""

    def __init__(self, family: str):
        self.Q = curves.family_curve(family)
        self.Qw = partial(self.Q, 0)
        self.Qv = partial(self.Q, 1)
        self.coeffs = schemes.family_series_int(family, SEED_ORDER)
        self.sing = family_singularity(family)

    def value_deriv(self, w, seed=None):
        if seed is None:
            frac = w / self.sing.R
            seed = (_series_eval(self.coeffs, w) if frac < mp.mpf("0.9")
                    else self.sing.value)
        v = _newton_root(self.Q, self.Qv, w, seed)
        vp = -_peval(self.Qw, w, v) / _peval(self.Qv, w, v)
        return v, vp


# ------------------------------------------------------ transition point


@dataclass(frozen=True)
class TransitionPoint:
    scheme_id: int
    u: Fraction
    rho: mp.mpf
    y: mp.mpf              # published convention: M(rho(u), u)
    mean: mp.mpf           # E(u), offspring expectation
    regime: str            # subcritical | critical | supercritical
    yhat: mp.mpf           # Lagrangian evaluation point M_hat(rho_hat)
    rho_ratio_estimate: mp.mpf | None = None


def _branch_point(scheme: schemes.SchemeSpec, u, ev: BlockCurveEval):
    """Solve Phi(tau) = tau Phi'(tau) in the block variable w = tau^stride."""
    R = ev.sing.R
    d = scheme.h_exponent
    eq2 = scheme.equation_form == "EQ2"

    def h(w, seed):
        v, vp = ev.value_deriv(w, seed)
        if eq2:
            return 1 - u * v - 2 * u * w * vp, v
        return 1 + u * v - u * d * w * vp, v

    lo = R * mp.mpf("0.02")
    hlo, vlo = h(lo, None)
    if hlo <= 0:
        raise SingularSolveError("branch point too close to the origin")
    w, v = lo, vlo
    step = R / 64
    hit = None
    while True:
        w2 = w + step
        if w2 >= R:
            raise SingularSolveError("no branch point below the radius "
                                     "(not supercritical)")
        h2, v2 = h(w2, v)
        if h2 < 0:
            hit = (w, w2)
            break
        w, v = w2, v2
    lo_w, hi_w = hit
    for _ in range(mp.mp.prec + 10):
        mid = (lo_w + hi_w) / 2
        hm, v = h(mid, v)
        if hm < 0:
            hi_w = mid
        else:
            lo_w = mid
    w = (lo_w + hi_w) / 2
    val, vp = ev.value_deriv(w, v)
    return w, val, vp


def singular_point(scheme, u, N: int = 512, prec_bits: int = DEFAULT_PREC_BITS,
                   cross_check: bool = True) -> TransitionPoint:
    """Compute (rho(u), M(rho,u), E(u), regime) for one scheme and weight.

    The curve route is primary; when cross_check is set, rho is also
    estimated from N coefficients of the weighted series by accelerated
    ratios and the two must agree.
    """
    scheme = scheme if isinstance(scheme, schemes.SchemeSpec) else schemes.load_scheme(scheme)
    u = Fraction(u)
    if u <= 0:
        raise ValueError("block weight u must be positive")
    eq2 = scheme.equation_form == "EQ2"
    d = scheme.h_exponent
    power = scheme.size_power
    with mp.workprec(max(prec_bits, _INTERNAL_PREC)):
        sing = family_singularity(scheme.block_family)
        R, a, bp = sing.R, sing.value, sing.deriv
        uu = mp.mpf(u.numerator) / u.denominator
        if eq2:
            denom = 1 - uu * a
            E_boundary = 2 * uu * R * bp / denom if denom > 0 else mp.inf
        else:
            E_boundary = uu * d * R * bp / (1 + uu * a)
        if E_boundary <= 1 + REGIME_TOL:
            w, val, vp = R, a, bp
            E = E_boundary
        else:
            ev = BlockCurveEval(scheme.block_family)
            w, val, vp = _branch_point(scheme, uu, ev)
            if eq2:
                E = 2 * uu * w * vp / (1 - uu * val)
            else:
                E = uu * d * w * vp / (1 + uu * val)
        if eq2:
            phi = 1 / (1 - uu * val)
            rho = w * (1 - uu * val) ** 2
            y = uu * val / (1 - uu * val)
        else:
            phi = 1 + uu * val
            rho = w / phi**power
            y = uu * val
        yhat = w ** (mp.mpf(1) / power) if power > 1 else w
        y = y + scheme.y_offset_rho * rho
        if abs(E - 1) <= REGIME_TOL:
            regime = "critical" if E_boundary <= 1 + REGIME_TOL else "supercritical"
        elif E < 1:
            regime = "subcritical"
        else:
            regime = "supercritical"
        ratio_est = None
        if cross_check:
            ints, q = curves.weighted_series_int(
                schemes.weighted_curve(scheme), u, N)
            powers = ((Fraction(1, 3), Fraction(2, 3), 1, Fraction(4, 3))
                      if regime == "critical" else (1, 2, 3, 4))
            ratio_est = ratio_radius(ints, powers) * q
            tol = mp.mpf("1e-3") if regime == "critical" else mp.mpf("1e-4")
            if abs(ratio_est - rho) / rho > tol:
                raise SingularSolveError(
                    f"scheme {scheme.id} u={u}: ratio rho estimate "
                    f"{mp.nstr(ratio_est, 10)} disagrees with curve value "
                    f"{mp.nstr(rho, 10)}")
        return TransitionPoint(
            scheme_id=scheme.id, u=u,
            rho=+rho, y=+y, mean=+E, regime=regime, yhat=+yhat,
            rho_ratio_estimate=+ratio_est if ratio_est is not None else None,
        )


def find_critical_u(scheme, tol: float = 1e-10,
                    prec_bits: int = DEFAULT_PREC_BITS):
    """Locate u_C with E(u_C) = 1 by bisection on the boundary mean.

    Returns (u_c, residual) as mpmath floats.
    """
    scheme = scheme if isinstance(scheme, schemes.SchemeSpec) else schemes.load_scheme(scheme)
    eq2 = scheme.equation_form == "EQ2"
    d = scheme.h_exponent
    with mp.workprec(max(prec_bits, _INTERNAL_PREC)):
        sing = family_singularity(scheme.block_family)
        R, a, bp = sing.R, sing.value, sing.deriv

        def E(u):
            if eq2:
                denom = 1 - u * a
                return 2 * u * R * bp / denom if denom > 0 else mp.inf
            return u * d * R * bp / (1 + u * a)

        lo, hi = mp.mpf("1e-9"), mp.mpf(1)
        while E(hi) < 1:
            hi *= 2
            if hi > 1e9:
                raise SingularSolveError("no critical point found; "
                                         "widen the bracket")
        for _ in range(max(prec_bits, 200)):
            mid = (lo + hi) / 2
            if E(mid) < 1:
                lo = mid
            else:
                hi = mid
            if hi - lo < tol * lo / 4:
                break
        uc = (lo + hi) / 2
        return +uc, +abs(E(uc) - 1)


# --------------------------------------------------------- offspring law


@dataclass
class OffspringLaw:
    scheme_id: int
    u: Fraction
    y: float                    # Lagrangian tilt point yhat
    probs: list                 # mu(k), k = 0..K_max, float
    tail_mass: float
    support_stride: int
    mean: float                 # analytic E(u)
    regime: str
    tail_coeff: float | None = None   # mu(k) ~ tail_coeff * k^(-5/2)
    tail_exponent: float = 2.5

    @property
    def k_max(self) -> int:
        return len(self.probs) - 1

    def empirical_mean(self) -> float:
        return float(sum(k * p for k, p in enumerate(self.probs)))


def offspring_law(scheme, u, N: int = 512,
                  prec_bits: int = DEFAULT_PREC_BITS,
                  tail_threshold: float = 1e-12) -> OffspringLaw:
    """The node-degree law mu^u(k) = [X^k]Phi(X,u) y^k / Phi(y,u), tabulated
    to k <= N.

    In the condensation regimes the tail is a power law; a fitted
    C k^(-5/2) model is attached for diagnostics and DP tail accounting.
    The tabulated mass must reach 1 - tail_threshold unless the regime is
    heavy-tailed, in which case the fitted model covers the remainder.
    """
    scheme = scheme if isinstance(scheme, schemes.SchemeSpec) else schemes.load_scheme(scheme)
    u = Fraction(u)
    tp = singular_point(scheme, u, cross_check=False, prec_bits=prec_bits)
    d = scheme.h_exponent
    eq2 = scheme.equation_form == "EQ2"
    stride = 2 if eq2 else d
    with mp.workprec(max(prec_bits, 160)):
        uu = mp.mpf(u.numerator) / u.denominator
        w = tp.yhat ** scheme.size_power  # block-variable evaluation point
        # Phi(yhat) = yhat / rho_hat, exactly (M_hat = z Phi(M_hat) at z=rho_hat)
        phi_val = tp.yhat / tp.rho ** (mp.mpf(1) / scheme.size_power)
        if eq2:
            t3 = schemes.family_series_int(scheme.block_family, N // 2 + 1)
            # mu(k) = q_k(u) yhat^k / Phi with the tilt baked into r_k
            wpow = [mp.mpf(1)]
            for _ in range(N // 2 + 1):
                wpow.append(wpow[-1] * w)
            probs = [mp.mpf(0)] * (N + 1)
            r = [mp.mpf(0)] * (N + 1)
            r[0] = mp.mpf(1)
            for k in range(2, N + 1, 2):
                s = mp.mpf(0)
                for i in range(1, k // 2 + 1):
                    if t3[i]:
                        s += t3[i] * wpow[i] * r[k - 2 * i]
                r[k] = uu * s
            for k in range(N + 1):
                probs[k] = r[k] / phi_val
        else:
            b = schemes.family_series_int(scheme.block_family, N // d)
            probs = [mp.mpf(0)] * (N + 1)
            probs[0] = 1 / phi_val
            wk = mp.mpf(1)
            for k in range(1, len(b)):
                wk *= w
                if d * k <= N and b[k]:
                    probs[d * k] = uu * b[k] * wk / phi_val
        total = mp.fsum(probs)
        tail = 1 - total
        fprobs = [float(p) for p in probs]
        # fit mu(k) ~ C k^{-5/2} on the last decade of nonzero entries
        nz = [k for k in range(1, N + 1) if fprobs[k] > 0]
        C = None
        if len(nz) > 10:
            window = [k for k in nz if k >= nz[-1] // 2]
            vals = [fprobs[k] * k**2.5 for k in window]
            C = float(sum(vals) / len(vals))
        if tail > tail_threshold and tp.regime == "supercritical":
            raise SingularSolveError(
                f"supercritical tail mass {float(tail):.2e} above threshold; "
                f"increase N")
    return OffspringLaw(
        scheme_id=scheme.id, u=u, y=float(tp.yhat), probs=fprobs,
        tail_mass=float(tail), support_stride=stride, mean=float(tp.mean),
        regime=tp.regime, tail_coeff=C,
    )


# ------------------------------------------------------ exponent fitting


@dataclass(frozen=True)
class ExponentFit:
    scheme_id: int
    u: Fraction
    alpha_estimate: float
    alpha_stderr: float
    n_range: tuple
    regime: str


def exponent_estimate(scheme, u, N: int = 2048,
                      prec_bits: int = DEFAULT_PREC_BITS) -> ExponentFit:
    """Estimate alpha in [z^n]M(z,u) ~ c n^(-alpha) rho^(-n).

    Log second differences of the exact coefficients cancel rho; Richardson
    extrapolation removes the correction series, whose powers are n^(-1/3)
    at the critical point and n^(-1) otherwise. The stderr reports the
    spread between the two deepest extrapolants.
    """
    scheme = scheme if isinstance(scheme, schemes.SchemeSpec) else schemes.load_scheme(scheme)
    u = Fraction(u)
    tp = singular_point(scheme, u, cross_check=False, prec_bits=prec_bits)
    ints, _q = curves.weighted_series_int(schemes.weighted_curve(scheme), u, N)
    stride_nz = [n for n in range(1, N + 1) if ints[n] != 0]
    if len(stride_nz) < N // 2:
        raise SingularSolveError("sparse support; subsample by stride")
    with mp.workprec(max(prec_bits, 160)):
        nodes = [N - 1, (7 * N) // 8, (3 * N) // 4, (5 * N) // 8,
                 N // 2, (3 * N) // 8, N // 4]
        vals = []
        for n in nodes:
            la = [mp.log(mp.mpf(ints[m])) for m in (n - 1, n, n + 1)]
            d2a = la[2] - 2 * la[1] + la[0]
            d2n = mp.log(n + 1) - 2 * mp.log(n) + mp.log(n - 1)
            vals.append(d2a / d2n)
        if tp.regime == "critical":
            powers = [Fraction(j, 3) for j in range(1, 6)]
        else:
            powers = [1, 2, 3, 4, 5]
        full = _richardson(nodes[: len(powers) + 1], vals[: len(powers) + 1], powers)
        shallow = _richardson(nodes[: len(powers)], vals[: len(powers)],
                              powers[:-1])
        alpha = float(-full)
        stderr = float(abs(full - shallow)) + 1e-12
    return ExponentFit(
        scheme_id=scheme.id, u=u, alpha_estimate=alpha, alpha_stderr=stderr,
        n_range=(N // 4, N), regime=tp.regime,
    )
