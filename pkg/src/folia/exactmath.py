"""Exact arithmetic substrate: sparse multivariate polynomials over Q,
reduced rational functions, and a fraction-free linear solver.

Coefficients are `fractions.Fraction` throughout; nothing here ever touches
floating point.  Variables are split into *geometric* variables (the
coordinates differential forms live in, at most 4) and *parameters*
(symbolic constants such as family coefficients, at most 4).  Degree,
grading and homogeneity always count geometric variables only; parameters
behave like scalars.

Monomials are exponent tuples over (geometric variables, then parameters),
ordered graded-lexicographically.  That order fixes printing and the
canonical representative of a rational function.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Iterable, Mapping, Sequence, Union

from .errors import ContextMismatch, ExactDivisionError, ParameterError

Rat = Fraction
Exponent = tuple[int, ...]
Scalar = Union[int, Fraction]

MAX_GEOMETRIC = 4
MAX_PARAMETERS = 4


@dataclass(frozen=True)
class VarCtx:
    """Variable context: ordered geometric variables plus parameters."""

    geometric: tuple[str, ...]
    parameters: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "geometric", tuple(self.geometric))
        object.__setattr__(self, "parameters", tuple(self.parameters))
        names = self.geometric + self.parameters
        if not self.geometric:
            raise ValueError("need at least one geometric variable")
        if len(self.geometric) > MAX_GEOMETRIC:
            raise ParameterError(f"at most {MAX_GEOMETRIC} geometric variables")
        if len(self.parameters) > MAX_PARAMETERS:
            raise ParameterError(f"at most {MAX_PARAMETERS} parameters")
        if len(set(names)) != len(names):
            raise ValueError(f"variable names must be distinct: {names}")

    @property
    def arity(self) -> int:
        return len(self.geometric)

    @property
    def nparams(self) -> int:
        return len(self.parameters)

    @property
    def total(self) -> int:
        return self.arity + self.nparams

    @property
    def names(self) -> tuple[str, ...]:
        return self.geometric + self.parameters

    def gens(self) -> tuple["Poly", ...]:
        return tuple(Poly.var(self, i) for i in range(self.arity))

    def param_gens(self) -> tuple["Poly", ...]:
        return tuple(Poly.var(self, self.arity + i) for i in range(self.nparams))


def _grlex_key(exp: Exponent) -> tuple:
    # graded lex: total degree first, then lexicographic on the tuple
    return (sum(exp), exp)


def _as_fraction(x: Scalar) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected int or Fraction, got {type(x).__name__}")


class Poly:
    """Sparse multivariate polynomial over Q.

    Terms map exponent tuples (length ``ctx.total``) to nonzero Fractions.
    Instances are immutable by convention; all arithmetic returns fresh
    objects, so values are safe to share across threads.
    """

    __slots__ = ("ctx", "terms", "_hash")

    def __init__(self, ctx: VarCtx, terms: Mapping[Exponent, Fraction]):
        self.ctx = ctx
        self.terms = {e: c for e, c in terms.items() if c != 0}
        self._hash: int | None = None

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, ctx: VarCtx) -> "Poly":
        return cls(ctx, {})

    @classmethod
    def const(cls, ctx: VarCtx, value: Scalar) -> "Poly":
        c = _as_fraction(value)
        if c == 0:
            return cls.zero(ctx)
        return cls(ctx, {(0,) * ctx.total: c})

    @classmethod
    def one(cls, ctx: VarCtx) -> "Poly":
        return cls.const(ctx, 1)

    @classmethod
    def var(cls, ctx: VarCtx, index: int) -> "Poly":
        if not 0 <= index < ctx.total:
            raise IndexError(f"variable index {index} out of range")
        exp = [0] * ctx.total
        exp[index] = 1
        return cls(ctx, {tuple(exp): Fraction(1)})

    @classmethod
    def named(cls, ctx: VarCtx, name: str) -> "Poly":
        return cls.var(ctx, ctx.names.index(name))

    @classmethod
    def monomial(cls, ctx: VarCtx, exp: Exponent, coeff: Scalar = 1) -> "Poly":
        c = _as_fraction(coeff)
        if len(exp) != ctx.total or any(e < 0 for e in exp):
            raise ValueError(f"bad exponent tuple {exp}")
        return cls(ctx, {tuple(exp): c}) if c else cls.zero(ctx)

    # -- basic queries ------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"not a constant: {self}")
        return next(iter(self.terms.values()), Fraction(0))

    def is_param_only(self) -> bool:
        """True when no geometric variable occurs."""
        n = self.ctx.arity
        return all(sum(e[:n]) == 0 for e in self.terms)

    def degree(self) -> int:
        """Total degree in the geometric variables (-1 for the zero poly)."""
        n = self.ctx.arity
        return max((sum(e[:n]) for e in self.terms), default=-1)

    def order(self) -> int:
        """Lowest geometric degree of a term (-1 for the zero poly)."""
        n = self.ctx.arity
        return min((sum(e[:n]) for e in self.terms), default=-1)

    def degree_in(self, index: int) -> int:
        return max((e[index] for e in self.terms), default=-1)

    def total_degree(self) -> int:
        """Total degree counting parameters too."""
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        n = self.ctx.arity
        degs = {sum(e[:n]) for e in self.terms}
        return len(degs) <= 1

    def homogeneous_components(self) -> dict[int, "Poly"]:
        """Split by geometric degree."""
        n = self.ctx.arity
        parts: dict[int, dict[Exponent, Fraction]] = {}
        for e, c in self.terms.items():
            parts.setdefault(sum(e[:n]), {})[e] = c
        return {d: Poly(self.ctx, t) for d, t in sorted(parts.items())}

    def component(self, deg: int) -> "Poly":
        n = self.ctx.arity
        return Poly(self.ctx, {e: c for e, c in self.terms.items() if sum(e[:n]) == deg})

    def truncate(self, deg: int) -> "Poly":
        """Drop terms of geometric degree > deg."""
        n = self.ctx.arity
        return Poly(self.ctx, {e: c for e, c in self.terms.items() if sum(e[:n]) <= deg})

    def coeff_of_geometric(self, geo_exp: Exponent) -> "Poly":
        """Coefficient of a geometric monomial, as a parameter-only Poly."""
        n = self.ctx.arity
        out: dict[Exponent, Fraction] = {}
        for e, c in self.terms.items():
            if e[:n] == tuple(geo_exp):
                out[(0,) * n + e[n:]] = c
        return Poly(self.ctx, out)

    def geometric_monomials(self) -> set[Exponent]:
        n = self.ctx.arity
        return {e[:n] for e in self.terms}

    # -- arithmetic ---------------------------------------------------

    def _check(self, other: "Poly") -> None:
        if self.ctx != other.ctx:
            raise ContextMismatch(f"{self.ctx} vs {other.ctx}")

    def _coerce(self, other) -> "Poly | None":
        if isinstance(other, Poly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(self.ctx, other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for e, c in o.terms.items():
            s = out.get(e, Fraction(0)) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Poly(self.ctx, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ctx, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, Fraction(0)) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return Poly(self.ctx, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial power must be a nonnegative integer")
        result = Poly.one(self.ctx)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _as_fraction(other)
            if c == 0:
                raise ZeroDivisionError("division of Poly by zero scalar")
            return Poly(self.ctx, {e: v / c for e, v in self.terms.items()})
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.ctx, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ctx == other.ctx and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ctx, tuple(sorted(self.terms.items()))))
        return self._hash

    # -- leading data and normalization --------------------------------

    def leading(self) -> tuple[Exponent, Fraction]:
        """Leading (exponent, coefficient) in graded lex order."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    def content(self) -> Fraction:
        """Rational content carrying the sign of the leading coefficient.

        Dividing by it leaves coprime integer coefficients with positive
        leading coefficient; content of 0 is 0.
        """
        if not self.terms:
            return Fraction(0)
        from math import gcd, lcm

        num = reduce(gcd, (abs(c.numerator) for c in self.terms.values()))
        den = reduce(lcm, (c.denominator for c in self.terms.values()))
        c = Fraction(num, den)
        return -c if self.leading()[1] < 0 else c

    def normalized(self) -> "Poly":
        """Content-normalized representative (primitive, positive leading)."""
        if not self.terms:
            return self
        return self / self.content()

    # -- calculus and substitution -------------------------------------

    def partial(self, index: int) -> "Poly":
        """Partial derivative with respect to a geometric variable."""
        if not 0 <= index < self.ctx.arity:
            raise IndexError("can only differentiate geometric variables")
        out: dict[Exponent, Fraction] = {}
        for e, c in self.terms.items():
            if e[index] == 0:
                continue
            d = list(e)
            d[index] -= 1
            out[tuple(d)] = c * e[index]
        return Poly(self.ctx, out)

    def subs(self, images: Mapping[int, "RatFn | Poly | Scalar"]) -> "RatFn":
        """Substitute geometric variables -> rational functions, exactly.

        Every geometric variable must be covered; parameters pass through.
        The composite is reduced.
        """
        n = self.ctx.arity
        if set(images.keys()) != set(range(n)):
            raise ValueError("substitution must cover exactly the geometric variables")
        vals: dict[int, RatFn] = {}
        target_ctx = None
        for i, img in images.items():
            r = RatFn.lift(img, None)
            vals[i] = r
            if target_ctx is None:
                target_ctx = r.ctx
            elif target_ctx != r.ctx:
                raise ContextMismatch("substitution images over different contexts")
        assert target_ctx is not None
        if self.ctx.parameters and target_ctx.parameters != self.ctx.parameters:
            raise ContextMismatch("parameters must pass through unchanged")
        acc = RatFn.zero(target_ctx)
        # power cache keeps repeated exponents cheap
        cache: dict[tuple[int, int], RatFn] = {}

        def power(i: int, k: int) -> RatFn:
            key = (i, k)
            if key not in cache:
                cache[key] = vals[i] ** k
            return cache[key]

        for e, c in self.terms.items():
            term = RatFn.const(target_ctx, c)
            for i in range(n):
                if e[i]:
                    term = term * power(i, e[i])
            for j, k in enumerate(e[n:]):
                if k:
                    pidx = target_ctx.arity + target_ctx.parameters.index(self.ctx.parameters[j])
                    term = term * RatFn.from_poly(Poly.var(target_ctx, pidx) ** k)
            acc = acc + term
        return acc

    def eval_rational(self, point: Sequence[Scalar]) -> "Poly":
        """Evaluate the geometric variables at a rational point.

        Returns a parameter-only Poly (a constant when there are none).
        """
        n = self.ctx.arity
        if len(point) != n:
            raise ValueError("point length must equal geometric arity")
        pt = [_as_fraction(v) for v in point]
        out: dict[Exponent, Fraction] = {}
        for e, c in self.terms.items():
            val = c
            for i in range(n):
                val *= pt[i] ** e[i]
            if val == 0:
                continue
            key = (0,) * n + e[n:]
            s = out.get(key, Fraction(0)) + val
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return Poly(self.ctx, out)

    # -- printing -------------------------------------------------------

    def __str__(self) -> str:
        return render_poly(self)

    def __repr__(self) -> str:
        return f"Poly({render_poly(self)})"


def _render_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def render_poly(p: Poly) -> str:
    """Canonical string, ascending graded-lex order, grammar-compatible."""
    if not p.terms:
        return "0"
    names = p.ctx.names
    chunks: list[str] = []
    # ascending degree; within a degree, earlier variables first
    for e in sorted(p.terms, key=lambda e: (sum(e), tuple(-k for k in e))):
        c = p.terms[e]
        factors = [f"{names[i]}^{k}" if k > 1 else names[i] for i, k in enumerate(e) if k]
        mag = abs(c)
        if not factors:
            body = _render_coeff(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([_render_coeff(mag)] + factors)
        chunks.append(("- " if c < 0 else "+ ") + body)
    first = chunks[0]
    out = ("-" + first[2:]) if first.startswith("- ") else first[2:]
    for ch in chunks[1:]:
        out += " " + ch
    return out


# -- gcd machinery ------------------------------------------------------


def exact_div(p: Poly, q: Poly) -> Poly:
    """Exact polynomial division p / q; raises if the remainder is nonzero."""
    if p.ctx != q.ctx:
        raise ContextMismatch("exact_div over different contexts")
    if q.is_zero():
        raise ZeroDivisionError("exact_div by zero polynomial")
    if q.is_constant():
        return p / q.constant_value()
    quot: dict[Exponent, Fraction] = {}
    rem = p
    qe, qc = q.leading()
    while rem.terms:
        re, rc = rem.leading()
        e = tuple(a - b for a, b in zip(re, qe))
        if any(x < 0 for x in e):
            raise ExactDivisionError(f"({p}) not divisible by ({q})")
        c = rc / qc
        quot[e] = quot.get(e, Fraction(0)) + c
        rem = rem - Poly.monomial(p.ctx, e, c) * q
    return Poly(p.ctx, quot)


def divides(q: Poly, p: Poly) -> bool:
    try:
        exact_div(p, q)
        return True
    except ExactDivisionError:
        return False


def _to_univariate(p: Poly, main: int) -> dict[int, Poly]:
    """View p as a univariate polynomial in variable `main` with Poly coefficients."""
    out: dict[int, dict[Exponent, Fraction]] = {}
    for e, c in p.terms.items():
        k = e[main]
        rest = list(e)
        rest[main] = 0
        out.setdefault(k, {})[tuple(rest)] = c
    return {k: Poly(p.ctx, t) for k, t in out.items()}


def _from_univariate(ctx: VarCtx, main: int, coeffs: Mapping[int, Poly]) -> Poly:
    out: dict[Exponent, Fraction] = {}
    for k, c in coeffs.items():
        for e, v in c.terms.items():
            ee = list(e)
            ee[main] += k
            out[tuple(ee)] = out.get(tuple(ee), Fraction(0)) + v
    return Poly(ctx, out)


def _poly_content_in(p: Poly, main: int, gcd_fn) -> Poly:
    """Content of p viewed in the main variable (gcd of its Poly coefficients)."""
    coeffs = list(_to_univariate(p, main).values())
    return reduce(gcd_fn, coeffs)


def _pseudo_rem(a: dict[int, Poly], b: dict[int, Poly], ctx: VarCtx) -> dict[int, Poly]:
    """Full pseudo-remainder prem(a, b) = lc(b)^(deg a - deg b + 1) * a mod b
    for univariate polynomials with Poly coefficients."""
    da, db = max(a), max(b)
    lb = b[db]
    r = dict(a)
    steps = 0
    for _ in range(da - db + 1):
        dr = max((k for k, v in r.items() if v), default=-1)
        if dr < db:
            break
        steps += 1
        lr = r[dr]
        new: dict[int, Poly] = {}
        for k, v in r.items():
            if k == dr:
                continue
            new[k] = v * lb
        for k, v in b.items():
            if k == db:
                continue
            kk = k + dr - db
            new[kk] = new.get(kk, Poly.zero(ctx)) - v * lr
        r = {k: v for k, v in new.items() if v}
        if not r:
            break
    # scale up to the full prem normalization required by the subresultant rules
    for _ in range(da - db + 1 - steps):
        r = {k: v * lb for k, v in r.items()}
    return r


def _strip_monomial(p: Poly) -> tuple[Exponent, Poly]:
    """Factor out the largest monomial dividing p."""
    mins = [min(e[i] for e in p.terms) for i in range(p.ctx.total)]
    if not any(mins):
        return tuple(mins), p
    stripped = Poly(p.ctx, {tuple(a - b for a, b in zip(e, mins)): c for e, c in p.terms.items()})
    return tuple(mins), stripped


def _univariate_gcd(p: Poly, q: Poly, var: int) -> Poly:
    """Monic Euclid over Q for polynomials in a single variable."""
    a = {e[var]: c for e, c in p.terms.items()}
    b = {e[var]: c for e, c in q.terms.items()}
    while b:
        da, db = max(a), max(b)
        if da < db:
            a, b = b, a
            continue
        lead = b[db]
        r = dict(a)
        while r and max(r) >= db:
            dr, lr = max(r), r[max(r)]
            for k, v in b.items():
                kk = k + dr - db
                s = r.get(kk, Fraction(0)) - v * lr / lead
                if s:
                    r[kk] = s
                else:
                    r.pop(kk, None)
        a, b = b, r
    exp = [0] * p.ctx.total
    out = Poly.zero(p.ctx)
    for k, c in a.items():
        e = list(exp)
        e[var] = k
        out = out + Poly.monomial(p.ctx, tuple(e), c)
    return out.normalized()


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """Greatest common divisor, content-normalized with positive leading
    coefficient; gcd(p, 0) is the normalization of p.

    Multivariate gcd by monomial stripping, content extraction and a
    fraction-free subresultant pseudo-remainder sequence on the variable of
    lowest degree; inputs in this artifact are tiny, so no modular methods.
    """
    if p.ctx != q.ctx:
        raise ContextMismatch("poly_gcd over different contexts")
    if p.is_zero():
        return q.normalized()
    if q.is_zero():
        return p.normalized()
    if p.is_constant() or q.is_constant():
        return Poly.one(p.ctx)
    mp, p0 = _strip_monomial(p)
    mq, q0 = _strip_monomial(q)
    common = tuple(min(a, b) for a, b in zip(mp, mq))
    mono = Poly.monomial(p.ctx, common, 1)
    used = [i for i in range(p.ctx.total) if p0.degree_in(i) > 0 or q0.degree_in(i) > 0]
    if not used:
        return mono.normalized()
    if len(used) == 1:
        return (_univariate_gcd(p0, q0, used[0]) * mono).normalized()
    main = min(used, key=lambda i: max(p0.degree_in(i), q0.degree_in(i)))

    cp = _poly_content_in(p0, main, poly_gcd)
    cq = _poly_content_in(q0, main, poly_gcd)
    cont = poly_gcd(cp, cq)
    a = _to_univariate(exact_div(p0, cp), main)
    b = _to_univariate(exact_div(q0, cq), main)
    if max(a) < max(b):
        a, b = b, a
    one = Poly.one(p.ctx)
    g, h = one, one
    while True:
        delta = max(a) - max(b)
        r = _pseudo_rem(a, b, p.ctx)
        if not r:
            last = _from_univariate(p.ctx, main, b)
            last = exact_div(last, _poly_content_in(last, main, poly_gcd))
            return (last * cont * mono).normalized()
        if max(r) == 0:
            return (cont * mono).normalized()
        denom = g * h**delta
        a, b = b, {k: exact_div(v, denom) for k, v in r.items()}
        g = a[max(a)]
        if delta == 0:
            h = h
        elif delta == 1:
            h = g
        else:
            h = exact_div(g**delta, h ** (delta - 1))


def poly_lcm(p: Poly, q: Poly) -> Poly:
    if p.is_zero() or q.is_zero():
        return Poly.zero(p.ctx)
    return exact_div(p * q, poly_gcd(p, q)).normalized()


# -- rational functions --------------------------------------------------


class RatFn:
    """Reduced rational function num/den over Q[vars].

    Canonical representative: gcd(num, den) is a unit and den is
    content-normalized with positive leading coefficient (so a polynomial
    has den == 1 and equality is structural).
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly, *, _reduced: bool = False):
        if num.ctx != den.ctx:
            raise ContextMismatch("num/den over different contexts")
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if not _reduced:
            if num.is_zero():
                den = Poly.one(num.ctx)
            else:
                g = poly_gcd(num, den)
                if not g.is_constant():
                    num, den = exact_div(num, g), exact_div(den, g)
                c = den.content()
                num, den = num / c, den / c
        self.num = num
        self.den = den

    # -- constructors ---------------------------------------------------

    @classmethod
    def from_poly(cls, p: Poly) -> "RatFn":
        return cls(p, Poly.one(p.ctx), _reduced=True)

    @classmethod
    def const(cls, ctx: VarCtx, value: Scalar) -> "RatFn":
        return cls.from_poly(Poly.const(ctx, value))

    @classmethod
    def zero(cls, ctx: VarCtx) -> "RatFn":
        return cls.from_poly(Poly.zero(ctx))

    @classmethod
    def one(cls, ctx: VarCtx) -> "RatFn":
        return cls.from_poly(Poly.one(ctx))

    @classmethod
    def lift(cls, x, ctx: VarCtx | None) -> "RatFn":
        """Coerce Poly / scalar / RatFn into RatFn (scalars need ctx)."""
        if isinstance(x, RatFn):
            return x
        if isinstance(x, Poly):
            return cls.from_poly(x)
        if isinstance(x, (int, Fraction)):
            if ctx is None:
                raise TypeError("context required to lift a scalar")
            return cls.const(ctx, x)
        raise TypeError(f"cannot lift {type(x).__name__} to RatFn")

    # -- queries ----------------------------------------------------------

    @property
    def ctx(self) -> VarCtx:
        return self.num.ctx

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den == Poly.one(self.ctx)

    def as_poly(self) -> Poly:
        if not self.is_polynomial():
            from .errors import NonPolynomialInput

            raise NonPolynomialInput(f"not a polynomial: {self}")
        return self.num

    def is_constant(self) -> bool:
        return self.is_polynomial() and self.num.is_constant()

    def constant_value(self) -> Fraction:
        return self.as_poly().constant_value()

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "RatFn | None":
        if isinstance(other, RatFn):
            if other.ctx != self.ctx:
                raise ContextMismatch("RatFn contexts differ")
            return other
        if isinstance(other, Poly):
            if other.ctx != self.ctx:
                raise ContextMismatch("RatFn/Poly contexts differ")
            return RatFn.from_poly(other)
        if isinstance(other, (int, Fraction)):
            return RatFn.const(self.ctx, other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RatFn(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFn(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RatFn(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RatFn(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise ValueError("RatFn power must be an integer")
        if n < 0:
            return RatFn.one(self.ctx) / (self ** (-n))
        return RatFn(self.num**n, self.den**n)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Poly)):
            o = self._coerce(other)
        elif isinstance(other, RatFn):
            o = other
        else:
            return NotImplemented
        return self.ctx == o.ctx and self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    # -- calculus -------------------------------------------------------------

    def partial(self, index: int) -> "RatFn":
        """Quotient-rule derivative with respect to a geometric variable."""
        u, v = self.num, self.den
        return RatFn(u.partial(index) * v - u * v.partial(index), v * v)

    def subs(self, images: Mapping[int, "RatFn | Poly | Scalar"]) -> "RatFn":
        top = self.num.subs(images)
        bot = self.den.subs(images)
        if bot.is_zero():
            raise ZeroDivisionError("substitution sends denominator to zero")
        return top / bot

    def __str__(self) -> str:
        if self.is_polynomial():
            return str(self.num)
        num = str(self.num)
        den = str(self.den)
        if len(self.num.terms) > 1:
            num = f"({num})"
        if len(self.den.terms) > 1:
            den = f"({den})"
        return f"{num}/{den}"

    def __repr__(self) -> str:
        return f"RatFn({self})"


# -- fraction-free linear solving ------------------------------------------


@dataclass
class LinSolution:
    """Affine solution set of a linear system over the fraction field of
    Q[parameters]: particular + kernel basis, with pivot exclusions.

    Exclusions are the non-constant pivot polynomials; the generic solution
    is invalid at parameter values where one of them vanishes.  An
    inconsistent system is marked, not raised.
    """

    consistent: bool
    particular: list[RatFn] | None
    kernel: list[list[RatFn]]
    exclusions: list[Poly] = field(default_factory=list)

    @property
    def basis(self) -> list[list[RatFn]]:
        return self.kernel


def _simplicity(p: Poly) -> tuple:
    # prefer constant pivots, then few terms, then low degree
    return (0 if p.is_constant() else 1, len(p.terms), p.total_degree())


def linear_solve(A: Sequence[Sequence[RatFn]], rhs: Sequence[RatFn]) -> LinSolution:
    """Solve A x = rhs exactly by fraction-free (Bareiss) elimination.

    Entries may involve parameters; pivots met along the way are divided
    out exactly, and the non-constant ones are reported as exclusions
    rather than silently dropped.
    """
    nrows = len(A)
    ncols = len(A[0]) if nrows else 0
    if any(len(row) != ncols for row in A):
        raise ValueError("matrix must be rectangular")
    if len(rhs) != nrows:
        raise ValueError("rhs length must match row count")
    if nrows == 0 or ncols == 0:
        ctx = rhs[0].ctx if rhs else (A[0][0].ctx if nrows else None)
        if ctx is None:
            raise ValueError("cannot infer context from an empty system")
        consistent = all(r.is_zero() for r in rhs)
        return LinSolution(consistent, [] if consistent else None, [], [])
    ctx = A[0][0].ctx

    # clear denominators row by row
    M: list[list[Poly]] = []
    for row, r in zip(A, rhs):
        entries = list(row) + [r]
        denoms = [e.den for e in entries]
        common = reduce(poly_lcm, denoms, Poly.one(ctx))
        M.append([(e * RatFn.from_poly(common)).as_poly() for e in entries])

    pivots: list[tuple[int, int, Poly]] = []  # (row, col, pivot poly)
    free_cols: list[int] = []
    prev = Poly.one(ctx)
    rank = 0
    for col in range(ncols):
        cand = [i for i in range(rank, nrows) if M[i][col]]
        if not cand:
            free_cols.append(col)
            continue
        piv_row = min(cand, key=lambda i: _simplicity(M[i][col]))
        if piv_row != rank:
            M[piv_row], M[rank] = M[rank], M[piv_row]
        piv = M[rank][col]
        for i in range(rank + 1, nrows):
            if not any(M[i][c] for c in range(col, ncols + 1)):
                continue
            head = M[i][col]
            for c in range(col + 1, ncols + 1):
                M[i][c] = exact_div(piv * M[i][c] - head * M[rank][c], prev)
            M[i][col] = Poly.zero(ctx)
        pivots.append((rank, col, piv))
        prev = piv
        rank += 1

    for i in range(rank, nrows):
        if M[i][ncols]:
            exclusions = _collect_exclusions(pivots)
            return LinSolution(False, None, [], exclusions)

    def back_substitute(free_values: Mapping[int, Fraction], hom: bool) -> list[RatFn]:
        x: list[RatFn] = [RatFn.zero(ctx) for _ in range(ncols)]
        for c, v in free_values.items():
            x[c] = RatFn.const(ctx, v)
        for row, col, piv in reversed(pivots):
            acc = RatFn.zero(ctx) if hom else RatFn.from_poly(M[row][ncols])
            for c in range(col + 1, ncols):
                if M[row][c]:
                    acc = acc - RatFn.from_poly(M[row][c]) * x[c]
            x[col] = acc / RatFn.from_poly(piv)
        return x

    particular = back_substitute({c: Fraction(0) for c in free_cols}, hom=False)
    kernel = [
        back_substitute({c: Fraction(1 if c == f else 0) for c in free_cols}, hom=True)
        for f in free_cols
    ]
    return LinSolution(True, particular, kernel, _collect_exclusions(pivots))


def _collect_exclusions(pivots: Iterable[tuple[int, int, Poly]]) -> list[Poly]:
    seen: list[Poly] = []
    for _, _, p in pivots:
        if p.is_constant():
            continue
        n = p.normalized()
        if n not in seen:
            seen.append(n)
    return seen
