"""Formal group laws: additive, multiplicative, and elliptic.

An elliptic curve in long Weierstrass form is completed at the origin in
the parameter t = -x/y, w = -1/y.  The standard fixed-point recursion

    w = t^3 + a1*t*w + a2*t^2*w + a3*w^2 + a4*t*w^2 + a6*w^3

gives w(t); the chord construction through (t1, w(t1)), (t2, w(t2)) gives
the group law F(t1, t2); the normalized invariant differential
dx/(2y + a1*x + a3) expanded in t and integrated gives the formal
logarithm, whose reversion is the exponential.  The law is computed
lazily (the character solver only consumes the logarithm).

Point counts over F_p are exhaustive (one quadratic per x), giving the
trace a_p used by the crystalline cross-checks.
"""

import math
from dataclasses import dataclass
from functools import cached_property

from .context import Context
from .padic import PadicRational
from .series import TruncatedSeries
from .errors import BadReduction, ArithJetError

ADDITIVE = "additive"
MULTIPLICATIVE = "multiplicative"
ELLIPTIC = "elliptic"
KERNEL = "kernel"


def parse_curve(spec: str) -> tuple[int, int, int, int, int]:
    """Parse "a4,a6" (short form) or "a1,a2,a3,a4,a6"."""
    parts = [s.strip() for s in spec.split(",")]
    try:
        nums = [int(s) for s in parts]
    except ValueError as e:
        raise ArithJetError(f"curve spec {spec!r} must be integers") from e
    if len(nums) == 2:
        return (0, 0, 0, nums[0], nums[1])
    if len(nums) == 5:
        return tuple(nums)
    raise ArithJetError("curve spec needs 2 (a4,a6) or 5 (a1,..,a6) integers")


@dataclass(frozen=True)
class WeierstrassCurve:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over Z_p, good reduction."""

    a1: int
    a2: int
    a3: int
    a4: int
    a6: int
    ctx: Context

    def __post_init__(self):
        if self.discriminant % self.ctx.p == 0:
            raise BadReduction(
                f"discriminant {self.discriminant} vanishes mod {self.ctx.p}")

    @property
    def b_invariants(self) -> tuple[int, int, int, int]:
        a1, a2, a3, a4, a6 = self.a1, self.a2, self.a3, self.a4, self.a6
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return b2, b4, b6, b8

    @property
    def discriminant(self) -> int:
        b2, b4, b6, b8 = self.b_invariants
        return -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    @property
    def is_short(self) -> bool:
        return self.a1 == self.a2 == self.a3 == 0

    def label(self) -> str:
        if self.is_short:
            return f"{self.a4},{self.a6}"
        return f"{self.a1},{self.a2},{self.a3},{self.a4},{self.a6}"

    @classmethod
    def from_string(cls, spec: str, ctx: Context) -> "WeierstrassCurve":
        return cls(*parse_curve(spec), ctx=ctx)


@dataclass(frozen=True)
class CurveInvariants:
    a_p: int
    point_count: int
    ordinary: bool


def count_points_ap(E: WeierstrassCurve) -> CurveInvariants:
    """Exhaustive point count of E(F_p) including infinity.

    Completing the square (p odd) reduces each fiber to one Legendre
    symbol: #roots of Y^2 = (a1 x + a3)^2 + 4 f(x).
    """
    p = E.ctx.p
    if p > 10 ** 5:
        raise ArithJetError("brute-force counting capped at p <= 10^5")
    squares = {(y * y) % p for y in range(p)}
    count = 1  # point at infinity
    for x in range(p):
        f = (x * x * x + E.a2 * x * x + E.a4 * x + E.a6) % p
        d = ((E.a1 * x + E.a3) ** 2 + 4 * f) % p
        if d == 0:
            count += 1
        elif d in squares:
            count += 2
    a_p = p + 1 - count
    if a_p * a_p > 4 * p:
        raise ArithJetError(f"Hasse bound violated: a_p = {a_p}")
    return CurveInvariants(a_p=a_p, point_count=count, ordinary=a_p % p != 0)


class FormalGroupLaw:
    """One-dimensional formal group law with its logarithm.

    kind in {additive, multiplicative, elliptic, kernel}.  ``law`` is
    F(t1, t2) truncated at total degree M; ``log`` satisfies
    log(F(t1,t2)) = log(t1) + log(t2) with linear coefficient 1; ``exp``
    is its reversion (computed on demand).
    """

    def __init__(self, ctx: Context, kind: str, law_builder, log: TruncatedSeries,
                 curve: WeierstrassCurve | None = None):
        self.ctx = ctx
        self.kind = kind
        self._law_builder = law_builder
        self.log = log
        self.curve = curve

    @cached_property
    def law(self) -> TruncatedSeries:
        return self._law_builder()

    @cached_property
    def exp(self) -> TruncatedSeries:
        return self.log.reversion()

    def log_effective_precision(self):
        return self.log.effective_precision()

    # -- constructors -----------------------------------------------------

    @classmethod
    def additive(cls, ctx: Context) -> "FormalGroupLaw":
        t = TruncatedSeries.variable(ctx, ("t",), "t")

        def build():
            t1 = TruncatedSeries.variable(ctx, ("t1", "t2"), "t1")
            t2 = TruncatedSeries.variable(ctx, ("t1", "t2"), "t2")
            return t1 + t2

        return cls(ctx, ADDITIVE, build, log=t)

    @classmethod
    def multiplicative(cls, ctx: Context) -> "FormalGroupLaw":
        log = TruncatedSeries(ctx, ("t",), {
            (k,): PadicRational.from_int(ctx, (-1) ** (k + 1))
            / PadicRational.from_int(ctx, k)
            for k in range(1, ctx.M + 1)
        })

        def build():
            t1 = TruncatedSeries.variable(ctx, ("t1", "t2"), "t1")
            t2 = TruncatedSeries.variable(ctx, ("t1", "t2"), "t2")
            return t1 + t2 + t1 * t2

        return cls(ctx, MULTIPLICATIVE, build, log=log)

    @classmethod
    def from_curve(cls, E: WeierstrassCurve) -> "FormalGroupLaw":
        return formal_group_from_curve(E)

    @classmethod
    def from_kernel_law(cls, ctx: Context, law: TruncatedSeries,
                        log: TruncatedSeries) -> "FormalGroupLaw":
        return cls(ctx, KERNEL, lambda: law, log=log)


def _w_coefficients(E: WeierstrassCurve, deg: int,
                    mod: int | None = None) -> tuple[list[int], list[int]]:
    """Coefficients of w(t) = t^3(1 + ...) and of w(t)^2 (mod `mod` when
    given), via the coefficient recurrence of

        w = t^3 + a1 t w + a2 t^2 w + a3 w^2 + a4 t w^2 + a6 w^3.

    [t^k] of w^2 and w^3 only involves w_j with j <= k-3, so each step is
    closed.  Fast enough for the deep Frobenius tower (O(deg^2) int ops;
    pass mod to keep the integers machine-sized at large degree).
    """
    w = [0] * (deg + 1)
    w2 = [0] * (deg + 1)
    w3 = [0] * (deg + 1)
    if deg >= 3:
        w[3] = 1
    for k in range(4, deg + 1):
        a = sum(w[i] * w[k - i] for i in range(3, k - 2))
        b = sum(w2[i] * w[k - i] for i in range(6, k - 2))
        c = (E.a1 * w[k - 1] + E.a2 * w[k - 2] + E.a3 * a
             + E.a4 * w2[k - 1] + E.a6 * b)
        if mod is not None:
            a %= mod
            b %= mod
            c %= mod
        w2[k], w3[k], w[k] = a, b, c
    return w, w2


def _w_series(E: WeierstrassCurve, deg: int) -> TruncatedSeries:
    """w(t) to total degree deg."""
    ctx = E.ctx.with_degree(deg)
    coeffs, _ = _w_coefficients(E, deg)
    return TruncatedSeries(ctx, ("t",),
                           {(k,): c for k, c in enumerate(coeffs) if c})


def elliptic_log_coefficients(E: WeierstrassCurve, deg: int,
                              digits: int | None = None) -> list[PadicRational]:
    """[b_1, ..., b_deg]: coefficients of the formal logarithm, by exact
    integer recurrences (fast enough for the deep Frobenius tower).

    log' = P = (w - t w') / (w (-2 + a1 t + a3 w)); both sides of the
    fraction are divisible by t^3 and the shifted denominator has unit
    constant term -2, so P comes out of a division recurrence mod
    p^digits, and b_j = P_(j-1)/j.
    """
    ctx = E.ctx
    if digits is None:
        j, t = 0, 1
        while t < deg:
            t *= ctx.p
            j += 1
        digits = ctx.N + j
    mod = ctx.pk(digits)
    w, w2 = _w_coefficients(E, deg + 3, mod=mod)
    # numerator (w - t w')/t^3: coefficient (1-j) w_j at t^j, shifted by 3
    num = [((-2 - k) * w[k + 3]) % mod for k in range(deg + 1)]
    # denominator w(-2 + a1 t + a3 w)/t^3
    den = [(-2 * w[k + 3] + E.a1 * w[k + 2] + E.a3 * w2[k + 3]) % mod
           for k in range(deg + 1)]
    inv0 = pow(den[0], -1, mod)
    P = [0] * (deg + 1)
    for k in range(deg + 1):
        acc = num[k] - sum(P[i] * den[k - i] for i in range(k) if den[k - i])
        P[k] = acc * inv0 % mod
    out = []
    for j in range(1, deg + 1):
        raw = P[j - 1] % mod
        if raw == 0:
            out.append(PadicRational.zero(ctx, digits))
            continue
        c = PadicRational.from_int(ctx, raw)
        c = PadicRational(ctx, c.unit, c.val, digits - c.val)
        out.append(c / PadicRational.from_int(ctx, j, rel=digits))
    return out


def _shift_down(f: TruncatedSeries, k: int) -> TruncatedSeries:
    """Divide a univariate series by t^k (all exponents must be >= k)."""
    coeffs = {}
    for (e,), c in f.coeffs.items():
        if e < k:
            if c.is_zero():
                continue
            raise ArithJetError("series not divisible by t^k")
        coeffs[(e - k,)] = c
    return TruncatedSeries(f.ctx, f.vars, coeffs, f.absprec)


def formal_group_from_curve(E: WeierstrassCurve) -> FormalGroupLaw:
    """Formal group of E at the origin; log from the invariant differential."""
    ctx = E.ctx
    if ctx.M < 4:
        raise ArithJetError("elliptic formal group needs M >= 4")
    pad_ctx = ctx.with_degree(ctx.M + 4)
    w = _w_series(E, ctx.M + 4)
    wq = _shift_down(w, 3)  # w/t^3, unit constant term

    # normalized invariant differential: P(t) dt with
    # P = (w - t w') / (w * (-2 + a1 t + a3 w)) = (-2 wq - t wq')/(wq*(-2 + a1 t + a3 t^3 wq))
    t = TruncatedSeries.variable(pad_ctx, ("t",), "t")
    twq_prime = t * wq.derivative()
    num = wq.scale(-2) - twq_prime
    den = wq * (TruncatedSeries.const(pad_ctx, ("t",), -2) + t.scale(E.a1)
                + (t ** 3) * wq.scale(E.a3))
    P = num * den.inverse()
    log_padded = P.integrate()
    log = TruncatedSeries(ctx, ("t",),
                          {e: c for e, c in log_padded.coeffs.items()},
                          log_padded.absprec)

    def build_law() -> TruncatedSeries:
        v = ("t1", "t2")
        t1 = TruncatedSeries.variable(ctx, v, "t1")
        t2 = TruncatedSeries.variable(ctx, v, "t2")
        # divided-difference slope of the chord, exact (no division):
        # lambda = sum_k A_k * sum_{i+j=k-1} t1^i t2^j
        lam = TruncatedSeries.zero(ctx, v)
        pows1 = [TruncatedSeries.const(ctx, v, 1), t1]
        pows2 = [TruncatedSeries.const(ctx, v, 1), t2]
        top = max(e for (e,) in w.coeffs)
        for k in range(2, top):
            pows1.append(pows1[-1] * t1)
            pows2.append(pows2[-1] * t2)
        for (k,), A in sorted(w.coeffs.items()):
            if k == 0 or k - 1 > ctx.M:
                continue
            dd = TruncatedSeries.zero(ctx, v)
            for i in range(k):
                if i <= ctx.M and k - 1 - i <= ctx.M:
                    dd = dd + pows1[i] * pows2[k - 1 - i]
            lam = lam + dd.scale(A)
        w1 = w.compose([t1])
        nu = w1 - lam * t1
        c3 = (TruncatedSeries.const(ctx, v, 1) + lam.scale(E.a2)
              + (lam * lam).scale(E.a4) + (lam ** 3).scale(E.a6))
        c2 = (lam.scale(E.a1) + nu.scale(E.a2) + (lam * lam).scale(E.a3)
              + (lam * nu).scale(2 * E.a4) + (lam * lam * nu).scale(3 * E.a6))
        t3 = -t1 - t2 - c2 * c3.inverse()
        if E.a1 == 0 and E.a3 == 0:
            return -t3
        # inversion series i(t) = -t * (1 - a1 t - a3 w(t))^(-1)
        ts = TruncatedSeries.variable(ctx, ("t",), "t")
        wt = TruncatedSeries(ctx, ("t",), dict(w.coeffs), w.absprec)
        inv_series = (-ts) * (TruncatedSeries.const(ctx, ("t",), 1)
                              - ts.scale(E.a1) - wt.scale(E.a3)).inverse()
        return inv_series.compose([t3])

    return FormalGroupLaw(ctx, ELLIPTIC, build_law, log=log, curve=E)


def formal_log_exp(F: FormalGroupLaw) -> tuple[TruncatedSeries, TruncatedSeries]:
    """(log, exp) of a formal group law."""
    return F.log, F.exp


def multiplication_by(F: FormalGroupLaw, m: int) -> TruncatedSeries:
    """[m](t), the multiplication-by-m series of the law."""
    if m < 1:
        raise ArithJetError("m >= 1 required")
    t = TruncatedSeries.variable(F.ctx, ("t",), "t")
    acc = t
    for _ in range(m - 1):
        acc = F.law.compose([acc, t])
    return acc
