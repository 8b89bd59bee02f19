"""Point blow-ups in dimensions 2 and 3: monomial chart maps, divisor
multiplicity, strict transform, divisor invariance, weighted substitutions,
and rational singular points on the exceptional divisor.

For a homogeneous integrable 1-form of degree nu the divisor multiplicity
of the pullback is nu+1 exactly when the form is dicritical and nu
otherwise; that dichotomy is the working test for divisor transversality.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from fractions import Fraction

from .errors import NonPolynomialInput
from .exactmath import Poly, RatFn, VarCtx, exact_div, poly_gcd
from .forms import KForm, PolyMap, pullback


@dataclass(frozen=True)
class BlowupChart:
    """One standard monomial chart of the blow-up of the origin."""

    map: PolyMap
    divisor_var: int


@dataclass
class StrictTransform:
    """Pullback divided by the maximal divisor power.

    divisor_invariant records whether the restriction of the residual form
    to the divisor is proportional to d(divisor variable); for dicritical
    homogeneous input it is false (the divisor is generically transverse).
    """

    m: int
    form: KForm
    divisor_invariant: bool
    chart: BlowupChart
    origin_singular: bool = True


def blowup_chart(dim: int, index: int, ctx: VarCtx | None = None) -> BlowupChart:
    """Standard chart `index` of the blow-up of the origin of C^dim."""
    if dim not in (2, 3):
        raise ValueError("blow-up supported in dimensions 2 and 3")
    if not 0 <= index < dim:
        raise ValueError(f"chart index must lie in 0..{dim - 1}")
    if ctx is None:
        ctx = VarCtx(tuple(f"x{i + 1}" for i in range(dim)))
    if ctx.arity != dim:
        raise ValueError("context arity must equal the blow-up dimension")
    gens = ctx.gens()
    t = gens[index]
    images = [t if i == index else t * gens[i] for i in range(dim)]
    return BlowupChart(PolyMap(ctx, ctx, images), index)


def _divisor_power(polys: list[Poly], var: int) -> int:
    """Largest k with x_var^k dividing every polynomial in the list."""
    k = None
    for p in polys:
        if p.is_zero():
            continue
        mk = min(e[var] for e in p.terms)
        k = mk if k is None else min(k, mk)
    return 0 if k is None else k


def strict_transform(omega: KForm, chart: BlowupChart) -> StrictTransform:
    """Pull back a polynomial 1-form along the chart and strip the maximal
    divisor power.  A form not vanishing at the origin is allowed but
    flagged (there is no singularity to blow up)."""
    if omega.degree != 1:
        raise ValueError("strict transform works on 1-forms")
    if not omega.is_polynomial():
        raise NonPolynomialInput("strict transform needs polynomial coefficients")
    pulled = pullback(omega, chart.map)
    polys = {idx: c.as_poly() for idx, c in pulled.coeffs.items()}
    dv = chart.divisor_var
    m = _divisor_power(list(polys.values()), dv)
    t = Poly.var(omega.ctx, dv) ** m if m else None
    residual = {
        idx: RatFn.from_poly(exact_div(p, t) if t is not None else p)
        for idx, p in polys.items()
    }
    form = KForm(omega.ctx, 1, residual)
    invariant = _divisor_invariant(form, dv)
    return StrictTransform(m, form, invariant, chart, omega.vanishes_at_origin())


def _divisor_invariant(form: KForm, dv: int) -> bool:
    """Divisor {x_dv = 0} is invariant iff the restriction of the form to it
    is proportional to dx_dv, i.e. every other coefficient dies there."""
    for (i,), c in form.coeffs.items():
        if i == dv:
            continue
        p = c.as_poly()
        restricted = Poly(
            p.ctx, {e: v for e, v in p.terms.items() if e[dv] == 0}
        )
        if not restricted.is_zero():
            return False
    return True


def weighted_substitute(
    omega: KForm, var: int, weight: int, base: int, new_name: str = "s"
) -> tuple[int, KForm]:
    """Monomial substitution x_var = s * x_base^weight; the new variable s
    replaces x_var.  Pulls back and strips the maximal power of x_base,
    returning (multiplicity, residual form)."""
    if omega.degree != 1 or not omega.is_polynomial():
        raise NonPolynomialInput("weighted substitution needs a polynomial 1-form")
    if weight < 1:
        raise ValueError("weight must be >= 1")
    if var == base:
        raise ValueError("substituted and ramification variables must differ")
    ctx = omega.ctx
    names = list(ctx.geometric)
    if new_name in names or new_name in ctx.parameters:
        raise ValueError(f"variable name {new_name!r} already taken")
    names[var] = new_name
    src = VarCtx(tuple(names), ctx.parameters)
    sgens = src.gens()
    images = [
        sgens[var] * sgens[base] ** weight if i == var else sgens[i] for i in range(ctx.arity)
    ]
    phi = PolyMap(src, ctx, images)
    pulled = pullback(omega, phi)
    polys = {idx: c.as_poly() for idx, c in pulled.coeffs.items()}
    m = _divisor_power(list(polys.values()), base)
    t = Poly.var(src, base) ** m if m else None
    residual = {
        idx: RatFn.from_poly(exact_div(p, t) if t is not None else p)
        for idx, p in polys.items()
    }
    return m, KForm(src, 1, residual)


@dataclass(frozen=True)
class DivisorPoint:
    coordinate: Fraction  # value of the free variable on the divisor
    multiplicity: int


@dataclass
class DivisorPoints:
    """Rational singular points on the exceptional divisor of a surface
    chart.  complete is False when irreducible factors of degree >= 2
    remain after rational-root extraction, so non-rational points may
    exist."""

    points: list[DivisorPoint]
    complete: bool
    divisor_singular: bool = False  # the whole divisor lies in the singular set


def divisor_singular_points(st: StrictTransform) -> DivisorPoints:
    """Zeros of the strict transform along the exceptional divisor, found by
    exact rational-root extraction of the restricted coefficient gcd."""
    form = st.form
    ctx = form.ctx
    if ctx.arity != 2:
        raise ValueError("divisor point search works on surface charts")
    dv = st.chart.divisor_var
    free = 1 - dv
    restrictions: list[Poly] = []
    for (i,), c in form.coeffs.items():
        p = c.as_poly()
        restrictions.append(Poly(ctx, {e: v for e, v in p.terms.items() if e[dv] == 0}))
    nonzero = [p for p in restrictions if not p.is_zero()]
    if not nonzero:
        return DivisorPoints([], True, divisor_singular=True)
    g = nonzero[0]
    for p in nonzero[1:]:
        g = poly_gcd(g, p)
    if any(sum(e[ctx.arity :]) for e in g.terms):
        raise NonPolynomialInput("parameters in divisor restriction; substitute first")
    coeffs = {e[free]: c for e, c in g.terms.items()}
    roots, complete = _rational_roots(coeffs)
    points = [DivisorPoint(r, mult) for r, mult in sorted(roots.items())]
    return DivisorPoints(points, complete)


def _rational_roots(coeffs: dict[int, Fraction]) -> tuple[dict[Fraction, int], bool]:
    """All rational roots (with multiplicity) of sum(c_k t^k); complete is
    False when a nonconstant rational-root-free factor remains."""
    from math import gcd, lcm

    poly = {k: Fraction(v) for k, v in coeffs.items() if v}
    roots: dict[Fraction, int] = {}
    if not poly:
        return roots, True
    low = min(poly)
    if low > 0:
        roots[Fraction(0)] = low
        poly = {k - low: v for k, v in poly.items()}

    def evaluate(p: dict[int, Fraction], r: Fraction) -> Fraction:
        return sum((c * r**k for k, c in p.items()), Fraction(0))

    def quotient(p: dict[int, Fraction], r: Fraction) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        carry = Fraction(0)
        for k in range(max(p), 0, -1):
            carry = p.get(k, Fraction(0)) + carry * r
            out[k - 1] = carry
        return {k: v for k, v in out.items() if v}

    while max(poly, default=0) > 0:
        den = reduce(lcm, (c.denominator for c in poly.values()), 1)
        ints = {k: int(c * den) for k, c in poly.items()}
        content = reduce(gcd, (abs(v) for v in ints.values()))
        a0 = abs(ints[0]) // content
        an = abs(ints[max(ints)]) // content
        found = None
        for p in _divisors_of(a0):
            for q in _divisors_of(an):
                if gcd(p, q) != 1:
                    continue
                for sign in (1, -1):
                    r = Fraction(sign * p, q)
                    if evaluate(poly, r) == 0:
                        found = r
                        break
                if found is not None:
                    break
            if found is not None:
                break
        if found is None:
            return roots, False
        roots[found] = roots.get(found, 0) + 1
        poly = quotient(poly, found)
    return roots, True


def _divisors_of(n: int) -> list[int]:
    n = abs(n)
    if n == 0:
        return [1]
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)
