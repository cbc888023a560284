"""p-typical Witt vectors of length n+1 over Z_p (q = p, phi = id on scalars).

The ghost map sends (a_0,...,a_n) to (w_0,...,w_n) with

    w_i = a_0^(p^i) + p*a_1^(p^(i-1)) + ... + p^i*a_i

and the ring structure is the unique one making the ghost map a natural
ring homomorphism.  Two evaluation backends are provided:

* universal structure polynomials S_i, P_i, Neg_i, Frob_i (derived once
  per (p, n) by the ghost recursion with exact integer divisions and
  verified symbolically), evaluated on components;

* the ghost-side oracle: lift components, combine ghost coordinates, and
  solve back through the recursion.  Over torsion-free coefficients the
  two agree exactly; over Z/p^N the ghost route pads working precision by
  n digits.

Also home to the p-derivation delta(x) = (x - x^p)/p and its axiom checks.
"""

from dataclasses import dataclass, field

from .context import Context
from .padic import PadicScalar, PadicRational
from .exactpoly import ExactPoly
from .errors import LengthMismatch, LengthTooShort, ArithJetError

STRUCT_LEVEL_CAP = 2  # coefficient explosion bound for universal polynomials


def witt_polynomial(p: int, i: int, names: tuple[str, ...]) -> ExactPoly:
    """Ghost polynomial w_i in the first i+1 of the given variables."""
    out = ExactPoly.const(names, 0)
    for j in range(i + 1):
        out = out + ExactPoly.variable(names, names[j]) ** (p ** (i - j)) * (p ** j)
    return out


def _ghost_solve(p: int, ghosts: list, power, div_exact):
    """Invert the ghost recursion: given ghost values g_0..g_n in a ring,
    return components z_0..z_n with w_i(z) = g_i.

    ``power(x, k)`` raises ring elements to integer powers, ``div_exact(x, i)``
    divides by p^i (exact over torsion-free rings, a valuation shift over
    Q_p-linear coefficients).
    """
    comps = []
    for i, g in enumerate(ghosts):
        acc = g
        for j, z in enumerate(comps):
            acc = acc - power(z, p ** (i - j)) * (p ** j)
        comps.append(div_exact(acc, i))
    return comps


@dataclass(frozen=True)
class StructurePolySet:
    """Universal polynomials for W_n: sum, product, negation, Frobenius."""

    p: int
    n: int
    S: tuple[ExactPoly, ...]
    P: tuple[ExactPoly, ...]
    Neg: tuple[ExactPoly, ...]
    Frob: tuple[ExactPoly, ...]
    vars_xy: tuple[str, ...] = field(repr=False, default=())
    vars_x: tuple[str, ...] = field(repr=False, default=())


_struct_cache: dict[tuple[int, int], StructurePolySet] = {}


def structure_polynomials(ctx: Context, n: int) -> StructurePolySet:
    """Derive and verify the universal Witt structure polynomials at level n."""
    if n > STRUCT_LEVEL_CAP:
        raise ArithJetError(f"structure polynomials capped at n <= {STRUCT_LEVEL_CAP}")
    key = (ctx.p, n)
    if key in _struct_cache:
        return _struct_cache[key]
    p = ctx.p
    xs = tuple(f"X{i}" for i in range(n + 1))
    ys = tuple(f"Y{i}" for i in range(n + 1))
    both = xs + ys

    def wx(i, names, pool):
        out = ExactPoly.const(pool, 0)
        for j in range(i + 1):
            out = out + ExactPoly.variable(pool, names[j]) ** (p ** (i - j)) * (p ** j)
        return out

    gx = [wx(i, xs, both) for i in range(n + 1)]
    gy = [wx(i, ys, both) for i in range(n + 1)]

    def solve(ghosts, pool):
        return _ghost_solve(
            p, ghosts,
            power=lambda z, k: z ** k,
            div_exact=lambda z, i: z.exact_div(p ** i) if i else z,
        )

    S = solve([a + b for a, b in zip(gx, gy)], both)
    P = solve([a * b for a, b in zip(gx, gy)], both)
    gX = [wx(i, xs, xs) for i in range(n + 1)]
    Neg = _ghost_solve(p, [-g for g in gX],
                       power=lambda z, k: z ** k,
                       div_exact=lambda z, i: z.exact_div(p ** i) if i else z)
    Frob = _ghost_solve(p, [gX[i + 1] for i in range(n)],
                        power=lambda z, k: z ** k,
                        div_exact=lambda z, i: z.exact_div(p ** i) if i else z)

    # ghost-compatibility identities, verified exactly before returning
    def w_of(comps, i, pool):
        out = ExactPoly.const(pool, 0)
        for j in range(i + 1):
            out = out + comps[j] ** (p ** (i - j)) * (p ** j)
        return out

    for i in range(n + 1):
        assert w_of(S, i, both) == gx[i] + gy[i], "S ghost identity failed"
        assert w_of(P, i, both) == gx[i] * gy[i], "P ghost identity failed"
        assert w_of(Neg, i, xs) == -gX[i], "Neg ghost identity failed"
    for i in range(n):
        assert w_of(Frob, i, xs) == gX[i + 1], "Frobenius ghost identity failed"

    out = StructurePolySet(p=p, n=n, S=tuple(S), P=tuple(P), Neg=tuple(Neg),
                           Frob=tuple(Frob), vars_xy=both, vars_x=xs)
    _struct_cache[key] = out
    return out


class WittVector:
    """Length-(n+1) Witt vector over ints, PadicScalar, ExactPoly or series.

    Textual format: [a0, a1, ..., an].
    """

    __slots__ = ("ctx", "components")

    def __init__(self, ctx: Context, components):
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "components", tuple(components))
        if len(self.components) < 1:
            raise LengthTooShort("Witt vector needs length >= 1")

    def __setattr__(self, *a):
        raise AttributeError("WittVector is immutable")

    def __len__(self):
        return len(self.components)

    @property
    def level(self) -> int:
        return len(self.components) - 1

    def __eq__(self, other):
        return (len(self) == len(other)
                and all(a == b for a, b in zip(self.components, other.components)))

    __hash__ = None

    def __repr__(self):
        return "[" + ", ".join(str(c) for c in self.components) + "]"

    def _chk(self, other):
        if len(self) != len(other):
            raise LengthMismatch(f"lengths {len(self)} vs {len(other)}")

    def ghost(self):
        """Ghost coordinates (w_0, ..., w_n)."""
        p = self.ctx.p
        out = []
        for i in range(len(self)):
            acc = None
            for j in range(i + 1):
                term = self.components[j] ** (p ** (i - j)) * (p ** j)
                acc = term if acc is None else acc + term
            out.append(acc)
        return tuple(out)

    # -- arithmetic via universal polynomials -----------------------------

    def _binary(self, other, which):
        self._chk(other)
        sp = structure_polynomials(self.ctx, self.level)
        env = {}
        for i, (a, b) in enumerate(zip(self.components, other.components)):
            env[f"X{i}"] = a
            env[f"Y{i}"] = b
        polys = sp.S if which == "add" else sp.P
        return WittVector(self.ctx, [q.substitute(env) for q in polys])

    def __add__(self, other):
        return self._binary(other, "add")

    def __mul__(self, other):
        return self._binary(other, "mul")

    def __neg__(self):
        sp = structure_polynomials(self.ctx, self.level)
        env = {f"X{i}": a for i, a in enumerate(self.components)}
        return WittVector(self.ctx, [q.substitute(env) for q in sp.Neg])

    def __sub__(self, other):
        return self + (-other)

    def frobenius(self) -> "WittVector":
        if len(self) < 2:
            raise LengthTooShort("Frobenius needs length >= 2")
        sp = structure_polynomials(self.ctx, self.level)
        env = {f"X{i}": a for i, a in enumerate(self.components)}
        return WittVector(self.ctx, [q.substitute(env) for q in sp.Frob])

    def truncate(self) -> "WittVector":
        if len(self) < 2:
            raise LengthTooShort("truncation needs length >= 2")
        return WittVector(self.ctx, self.components[:-1])

    def verschiebung(self) -> "WittVector":
        zero = self.components[0] * 0
        return WittVector(self.ctx, (zero,) + self.components)

    @classmethod
    def teichmuller(cls, ctx: Context, c, length: int) -> "WittVector":
        zero = c * 0
        return cls(ctx, (c,) + tuple(zero for _ in range(length - 1)))


def witt_arith(a: WittVector, b: WittVector, op: str) -> WittVector:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    raise ArithJetError(f"unknown op {op!r}")


def witt_operators(a: WittVector, which: str) -> WittVector:
    if which == "frobenius":
        return a.frobenius()
    if which == "truncate":
        return a.truncate()
    if which == "verschiebung":
        return a.verschiebung()
    raise ArithJetError(f"unknown operator {which!r}")


# -- ghost-side oracle over Z/p^N ----------------------------------------


def witt_arith_ghost_mod(ctx: Context, a: list[int], b: list[int], op: str,
                         prec: int | None = None) -> list[int]:
    """Oracle backend over Z/p^prec: lift, combine ghosts with n guard
    digits, solve components back with checked divisions."""
    if len(a) != len(b):
        raise LengthMismatch(f"lengths {len(a)} vs {len(b)}")
    n = len(a) - 1
    prec = ctx.N if prec is None else prec
    p = ctx.p
    work = ctx.pk(prec + n)

    def ghost(v):
        return [sum(p ** j * pow(v[j], p ** (i - j), work) for j in range(i + 1)) % work
                for i in range(n + 1)]

    ga, gb = ghost(a), ghost(b)
    if op == "add":
        g = [(x + y) % work for x, y in zip(ga, gb)]
    elif op == "mul":
        g = [(x * y) % work for x, y in zip(ga, gb)]
    elif op == "neg":
        g = [(-x) % work for x in ga]
    else:
        raise ArithJetError(f"unknown op {op!r}")
    comps: list[int] = []
    mod = work
    for i in range(n + 1):
        acc = g[i]
        for j in range(i):
            acc -= p ** j * pow(comps[j], p ** (i - j), work)
        acc %= work
        q, r = divmod(acc, p ** i)
        if r:
            raise ArithJetError("ghost recursion produced an inexact division")
        comps.append(q % ctx.pk(prec))
    return comps


# -- the p-derivation ------------------------------------------------------


def delta_map(x: PadicScalar, ctx: Context | None = None) -> PadicScalar:
    """delta(x) = (x - x^p)/p, the p-derivation attached to phi = p-power
    lift; result carries one digit less than the input."""
    ctx = x.ctx if ctx is None else ctx
    k = x.prec
    r = x.lift()
    num = r - pow(r, ctx.p, ctx.pk(k + 1))
    assert num % ctx.p == 0
    return PadicScalar(ctx, (num // ctx.p) % ctx.pk(k - 1), k - 1)


def delta_int(x: int, p: int) -> int:
    """Exact delta on integers: (x - x^p)/p."""
    return (x - x ** p) // p


def c_pi_int(x: int, y: int, p: int) -> int:
    """C_p(x, y) = (x^p + y^p - (x+y)^p)/p, exact over Z."""
    return (x ** p + y ** p - (x + y) ** p) // p


def c_pi(ctx: Context, x: PadicScalar, y: PadicScalar) -> PadicScalar:
    k = min(x.prec, y.prec)
    num = (pow(x.lift(), ctx.p, ctx.pk(k + 1)) + pow(y.lift(), ctx.p, ctx.pk(k + 1))
           - pow(x.lift() + y.lift(), ctx.p, ctx.pk(k + 1)))
    assert num % ctx.p == 0
    return PadicScalar(ctx, (num // ctx.p) % ctx.pk(k - 1), k - 1)


@dataclass
class DeltaAxiomReport:
    samples: int
    precision: int
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def check_delta_axioms(ctx: Context, samples: int = 500, seed: int = 0) -> DeltaAxiomReport:
    """Sample pairs (x, y) and check the delta-ring axioms at precision N-1:

    (i)   delta(0) = delta(1) = 0
    (ii)  delta(x+y) = delta(x) + delta(y) + C_p(x, y)
    (iii) delta(xy)  = x^p delta(y) + y^p delta(x) + p delta(x) delta(y)
    """
    import random
    rng = random.Random(seed)
    rep = DeltaAxiomReport(samples=samples, precision=ctx.N - 1)
    if not delta_map(PadicScalar(ctx, 0)).is_zero():
        rep.failures.append(("axiom-i", 0, 0))
    if not delta_map(PadicScalar(ctx, 1)).is_zero():
        rep.failures.append(("axiom-i", 1, 1))
    m = ctx.pk(ctx.N)
    for _ in range(samples):
        xv, yv = rng.randrange(m), rng.randrange(m)
        x, y = PadicScalar(ctx, xv), PadicScalar(ctx, yv)
        lhs = delta_map(x + y)
        rhs = delta_map(x) + delta_map(y) + c_pi(ctx, x, y)
        if lhs != rhs:
            rep.failures.append(("axiom-ii", xv, yv))
        lhs = delta_map(x * y)
        rhs = (x ** ctx.p) * delta_map(y) + (y ** ctx.p) * delta_map(x) \
            + delta_map(x) * delta_map(y) * ctx.p
        if lhs != rhs:
            rep.failures.append(("axiom-iii", xv, yv))
    return rep
