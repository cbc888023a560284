"""Truncated multivariate power series over Q_p.

A TruncatedSeries stores a sparse map from exponent tuples (total degree
<= ctx.M) to PadicRational coefficients.  Absent monomials are zero up to
the series-level ambient precision ``absprec`` (None meaning exactly
zero); coefficients that cancel to an O(p^w) zero with w below the
ambient are kept so no precision claim is ever overstated.

Supported operations: ring arithmetic, scalar multiplication, p-power
shifts, composition (recursive Horner), reversion of a univariate series,
substitution of zero for variables, numeric evaluation, derivative and
termwise integration of univariate series, and residual-valuation
comparison for budgeted identity checks.
"""

from .context import Context
from .padic import PadicRational, PadicScalar
from .errors import (
    VariableMismatch, NonzeroConstantTerm, NonUnitLinearCoefficient,
    DivisionByZero, ArithJetError,
)

_INF = float("inf")


def _minp(a, b):
    """min of two absolute precisions where None means infinite."""
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _addp(a, k):
    return None if a is None else a + k


class TruncatedSeries:
    __slots__ = ("ctx", "vars", "coeffs", "absprec")

    def __init__(self, ctx: Context, variables, coeffs=None, absprec=None):
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "vars", tuple(variables))
        cleaned = {}
        if coeffs:
            for e, c in coeffs.items():
                if sum(e) > ctx.M:
                    continue
                if isinstance(c, int):
                    if c == 0:
                        continue
                    c = PadicRational.from_int(ctx, c)
                elif isinstance(c, PadicScalar):
                    c = c.to_rational()
                if c.is_zero() and (absprec is None or c.val >= absprec):
                    continue
                cleaned[tuple(e)] = c
        object.__setattr__(self, "coeffs", cleaned)
        object.__setattr__(self, "absprec", absprec)

    def __setattr__(self, *a):
        raise AttributeError("TruncatedSeries is immutable")

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, ctx, variables, absprec=None):
        return cls(ctx, variables, {}, absprec)

    @classmethod
    def const(cls, ctx, variables, c):
        z = tuple(0 for _ in variables)
        return cls(ctx, variables, {z: c})

    @classmethod
    def variable(cls, ctx, variables, name):
        variables = tuple(variables)
        e = [0] * len(variables)
        e[variables.index(name)] = 1
        return cls(ctx, variables, {tuple(e): 1})

    @classmethod
    def from_exact_poly(cls, ctx, poly, variables=None):
        variables = poly.vars if variables is None else tuple(variables)
        if variables == poly.vars:
            return cls(ctx, variables, dict(poly.terms))
        idx = [variables.index(v) for v in poly.vars]
        coeffs = {}
        for e, c in poly.terms.items():
            ee = [0] * len(variables)
            for j, k in zip(idx, e):
                ee[j] = k
            coeffs[tuple(ee)] = c
        return cls(ctx, variables, coeffs)

    # -- queries ---------------------------------------------------------

    def get(self, expt) -> PadicRational:
        expt = tuple(expt)
        c = self.coeffs.get(expt)
        if c is not None:
            return c
        if self.absprec is None:
            return PadicRational.zero(self.ctx, 10 ** 9)
        return PadicRational.zero(self.ctx, self.absprec)

    def constant_term(self) -> PadicRational:
        return self.get(tuple(0 for _ in self.vars))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs.values())

    def min_degree(self):
        return min((sum(e) for e, c in self.coeffs.items() if not c.is_zero()),
                   default=_INF)

    def min_valuation(self):
        """Minimum coefficient valuation (absprec bounds for zero entries)."""
        vals = [c.val for c in self.coeffs.values()]
        if self.absprec is not None:
            vals.append(self.absprec)
        return min(vals, default=_INF)

    def is_integral(self) -> bool:
        return all(c.val >= 0 for c in self.coeffs.values() if not c.is_zero())

    def effective_precision(self):
        """Minimum absolute precision over tracked coefficients."""
        precs = [c.absprec for c in self.coeffs.values()]
        if self.absprec is not None:
            precs.append(self.absprec)
        return min(precs, default=None)

    def monomials(self):
        return self.coeffs.keys()

    # -- arithmetic ------------------------------------------------------

    def _chk(self, other):
        if self.vars != other.vars:
            raise VariableMismatch(f"{self.vars} vs {other.vars}")
        if self.ctx is not other.ctx and (self.ctx.p, self.ctx.N, self.ctx.M) != \
                (other.ctx.p, other.ctx.N, other.ctx.M):
            raise VariableMismatch("series built over different contexts")

    def _coerce(self, other):
        if isinstance(other, (int, PadicScalar, PadicRational)):
            return TruncatedSeries.const(self.ctx, self.vars, other)
        if isinstance(other, TruncatedSeries):
            self._chk(other)
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        absp = _minp(self.absprec, o.absprec)
        coeffs = dict(self.coeffs)
        for e, c in o.coeffs.items():
            prev = coeffs.get(e)
            coeffs[e] = c if prev is None else prev + c
        return TruncatedSeries(self.ctx, self.vars, coeffs, absp)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(self.ctx, self.vars,
                               {e: -c for e, c in self.coeffs.items()}, self.absprec)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "TruncatedSeries":
        """Multiply by a scalar."""
        if isinstance(c, int):
            c = PadicRational.from_int(self.ctx, c)
        elif isinstance(c, PadicScalar):
            c = c.to_rational()
        if c.is_zero():
            mv = self.min_valuation()
            absp = None if mv is _INF else c.val + mv
            return TruncatedSeries.zero(self.ctx, self.vars, absp)
        return TruncatedSeries(self.ctx, self.vars,
                               {e: v * c for e, v in self.coeffs.items()},
                               _addp(self.absprec, c.val))

    def shift(self, k: int) -> "TruncatedSeries":
        """Multiply all coefficients by p^k (exact valuation shift)."""
        return TruncatedSeries(self.ctx, self.vars,
                               {e: c.shift(k) for e, c in self.coeffs.items()},
                               _addp(self.absprec, k))

    def __mul__(self, other, cap=None):
        if isinstance(other, (int, PadicScalar, PadicRational)):
            return self.scale(other)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        cap = self.ctx.M if cap is None else min(cap, self.ctx.M)
        mva, mvb = self.min_valuation(), o.min_valuation()
        t1 = None if (self.absprec is None or mvb is _INF) else self.absprec + mvb
        t2 = None if (o.absprec is None or mva is _INF) else o.absprec + mva
        absp = _minp(t1, t2)
        a = [(e, sum(e), c) for e, c in self.coeffs.items()]
        b = [(e, sum(e), c) for e, c in o.coeffs.items()]
        if len(a) > len(b):
            a, b = b, a
        out: dict = {}
        for e1, d1, c1 in a:
            room = cap - d1
            for e2, d2, c2 in b:
                if d2 > room:
                    continue
                e = tuple(x + y for x, y in zip(e1, e2))
                prod = c1 * c2
                prev = out.get(e)
                out[e] = prod if prev is None else prev + prod
        return TruncatedSeries(self.ctx, self.vars, out, absp)

    __rmul__ = __mul__

    def __pow__(self, n: int, cap=None):
        if n < 0:
            return self.inverse() ** (-n)
        cap = self.ctx.M if cap is None else min(cap, self.ctx.M)
        md = self.min_degree()
        if n == 0:
            return TruncatedSeries.const(self.ctx, self.vars, 1)
        if md is not _INF and md * n > cap:
            return TruncatedSeries.zero(self.ctx, self.vars,
                                        _addp(self.absprec, 0))
        r = None
        b = self
        k = n
        while k:
            if k & 1:
                r = b if r is None else r.__mul__(b, cap)
            k >>= 1
            if k:
                b = b.__mul__(b, cap)
        return r

    def inverse(self, cap=None) -> "TruncatedSeries":
        """Multiplicative inverse; constant term must be a p-adic unit."""
        c0 = self.constant_term()
        if c0.is_zero() or c0.val != 0:
            raise DivisionByZero("series inverse requires a unit constant term")
        cap = self.ctx.M if cap is None else min(cap, self.ctx.M)
        inv0 = c0.inverse()
        g = TruncatedSeries.const(self.ctx, self.vars, inv0)
        deg = 1
        while deg <= cap:
            deg *= 2
            # Newton: g <- g*(2 - f*g)
            fg = self.__mul__(g, min(deg, cap))
            two_minus = TruncatedSeries.const(self.ctx, self.vars, 2) - fg
            g = g.__mul__(two_minus, min(deg, cap))
        return g

    def truncate(self, deg: int) -> "TruncatedSeries":
        return TruncatedSeries(self.ctx, self.vars,
                               {e: c for e, c in self.coeffs.items() if sum(e) <= deg},
                               self.absprec)

    # -- structure maps ---------------------------------------------------

    def rename(self, variables) -> "TruncatedSeries":
        variables = tuple(variables)
        if len(variables) != len(self.vars):
            raise VariableMismatch("rename must preserve arity")
        return TruncatedSeries(self.ctx, variables, dict(self.coeffs), self.absprec)

    def extend(self, variables) -> "TruncatedSeries":
        """View on a larger variable tuple (old variables must all appear)."""
        variables = tuple(variables)
        idx = [variables.index(v) for v in self.vars]
        coeffs = {}
        for e, c in self.coeffs.items():
            ee = [0] * len(variables)
            for j, k in zip(idx, e):
                ee[j] = k
            coeffs[tuple(ee)] = c
        return TruncatedSeries(self.ctx, variables, coeffs, self.absprec)

    def set_zero(self, names) -> "TruncatedSeries":
        """Substitute 0 for the named variables and drop them."""
        names = set(names)
        keep = [i for i, v in enumerate(self.vars) if v not in names]
        kill = [i for i, v in enumerate(self.vars) if v in names]
        coeffs = {}
        for e, c in self.coeffs.items():
            if any(e[i] for i in kill):
                continue
            coeffs[tuple(e[i] for i in keep)] = c
        return TruncatedSeries(self.ctx, tuple(self.vars[i] for i in keep),
                               coeffs, self.absprec)

    def linear_coefficient(self, name) -> PadicRational:
        e = [0] * len(self.vars)
        e[self.vars.index(name)] = 1
        return self.get(tuple(e))

    def evaluate(self, values: dict) -> PadicRational:
        """Numeric evaluation; values map every variable to a PadicRational
        (topologically nilpotent for honest convergence mod p^N)."""
        total = PadicRational.zero(self.ctx, 10 ** 9 if self.absprec is None
                                   else self.absprec)
        for e, c in self.coeffs.items():
            term = c
            for name, k in zip(self.vars, e):
                if k:
                    term = term * (values[name] ** k)
            total = total + term
        return total

    # -- calculus (univariate) --------------------------------------------

    def _require_univariate(self):
        if len(self.vars) != 1:
            raise ArithJetError("operation requires a univariate series")

    def derivative(self) -> "TruncatedSeries":
        self._require_univariate()
        coeffs = {}
        for (k,), c in self.coeffs.items():
            if k >= 1:
                coeffs[(k - 1,)] = c * k
        return TruncatedSeries(self.ctx, self.vars, coeffs, self.absprec)

    def integrate(self) -> "TruncatedSeries":
        """Termwise antiderivative with zero constant term; divides the
        t^k coefficient of the integrand by k+1 (precision tracked)."""
        self._require_univariate()
        coeffs = {}
        for (k,), c in self.coeffs.items():
            coeffs[(k + 1,)] = c / PadicRational.from_int(self.ctx, k + 1)
        return TruncatedSeries(self.ctx, self.vars, coeffs, self.absprec)

    # -- composition -------------------------------------------------------

    def compose(self, args: list, cap=None) -> "TruncatedSeries":
        """Substitute args[i] for self.vars[i]; every argument must share
        one variable tuple and have zero constant term."""
        if len(args) != len(self.vars):
            raise VariableMismatch("one argument per variable required")
        tgt = args[0].vars
        for a in args:
            if a.vars != tgt:
                raise VariableMismatch("composition arguments on mixed variables")
            if not a.constant_term().is_zero():
                raise NonzeroConstantTerm("composition argument has constant term")
        tctx = args[0].ctx
        cap = tctx.M if cap is None else min(cap, tctx.M)
        out = self._compose_rec(list(range(len(self.vars))), args, tgt, tctx, cap)
        return out

    def _compose_rec(self, active, args, tgt, tctx, cap):
        zero = TruncatedSeries.zero(tctx, tgt, self.absprec)
        if not self.coeffs:
            return zero
        # find last variable actually used
        used = None
        for i in reversed(active):
            if any(e[i] for e in self.coeffs):
                used = i
                break
        if used is None:
            c = self.get(tuple(0 for _ in self.vars))
            return TruncatedSeries.const(tctx, tgt, c) + zero
        # group by exponent of var `used`
        groups: dict[int, dict] = {}
        for e, c in self.coeffs.items():
            k = e[used]
            ee = list(e)
            ee[used] = 0
            groups.setdefault(k, {})[tuple(ee)] = c
        arg = args[used]
        rest = [i for i in active if i != used]
        acc = None
        for k in sorted(groups, reverse=True):
            g = TruncatedSeries(self.ctx, self.vars, groups[k], self.absprec)
            gval = g._compose_rec(rest, args, tgt, tctx, cap)
            if acc is None:
                acc = gval
                prev_k = k
            else:
                step = arg.__pow__(prev_k - k, cap) if prev_k - k > 1 else arg
                acc = acc.__mul__(step, cap) + gval
                prev_k = k
        if prev_k > 0:
            step = arg.__pow__(prev_k, cap) if prev_k > 1 else arg
            acc = acc.__mul__(step, cap)
        return acc

    def reversion(self, var=None) -> "TruncatedSeries":
        """Compositional inverse g with self(g) = t mod degree M.

        Requires a univariate input u*t + O(t^2) with u a unit.
        """
        self._require_univariate()
        t = self.vars[0] if var is None else var
        if t != self.vars[0]:
            raise VariableMismatch(f"no variable {t!r}")
        if not self.constant_term().is_zero():
            raise NonUnitLinearCoefficient("reversion input has constant term")
        u = self.linear_coefficient(t)
        if u.is_zero() or u.val != 0:
            raise NonUnitLinearCoefficient("linear coefficient is not a unit")
        ctx = self.ctx
        uinv = u.inverse()
        g = {(1,): uinv}
        for k in range(2, ctx.M + 1):
            gser = TruncatedSeries(ctx, self.vars, g)
            fg = self.truncate(k).compose([gser], cap=k)
            ck = fg.get((k,))
            if not ck.is_zero():
                g[(k,)] = -(ck * uinv)
        return TruncatedSeries(ctx, self.vars, g)

    # -- comparison --------------------------------------------------------

    def residual_valuation(self, other=None):
        """Minimum valuation of (self - other) over all monomials; _INF when
        every tracked coefficient of the difference vanishes.  The check is
        meaningful modulo the difference's effective precision."""
        d = self if other is None else self - other
        vals = [c.val for c in d.coeffs.values() if not c.is_zero()]
        return min(vals, default=_INF)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return (self - o).is_zero()

    __hash__ = None

    def __repr__(self):
        if not self.coeffs:
            tail = "" if self.absprec is None else f" + O(p^{self.absprec})"
            return "0" + tail
        bits = []
        for e in sorted(self.coeffs, key=lambda e: (sum(e), e)):
            mono = "*".join(f"{v}^{k}" if k > 1 else v
                            for v, k in zip(self.vars, e) if k)
            c = self.coeffs[e]
            bits.append(f"({c})*{mono}" if mono else f"({c})")
        s = " + ".join(bits[:12])
        if len(bits) > 12:
            s += f" + ... [{len(bits)} terms]"
        return s


def series_arith(f: TruncatedSeries, g: TruncatedSeries, op: str) -> TruncatedSeries:
    """Spec-level dispatch: op in {"add", "mul"}."""
    if op == "add":
        return f + g
    if op == "mul":
        return f * g
    raise ArithJetError(f"unknown op {op!r}")
