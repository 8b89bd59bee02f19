"""Projective degree-2 foliation toolkit: homogenization/chart bridges,
the two nilpotent-point normal families and their multiplicity table,
the resonance set chi, the ten closed rational normal forms of the
degree-2 center catalogue, invariant curves, singular budgets, logarithmic
and transversely-affine identities.

Conventions for the two normal families at a nilpotent point with
invariant line x1 = 0 (gamma is the x2^2 coefficient of the dx1 quadratic
part, R the x2^2 coefficient of the rotational quadratic form q):

  Omega1: gamma = 0, R = 1   (one singular point on the line)
  Omega2: gamma = 1, R = 0   (two singular points on the line)

so theta = (x1 + A2 - q x2) dx1 + (B2 + q x1) dx2 with
A2 = alpha x1^2 + beta x1 x2 + gamma x2^2, B2 = x1(a x1 + b x2),
q = P x1^2 + Q x1 x2 + R x2^2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Sequence

from .errors import (
    DegreeConstraintError,
    DivisibilityError,
    NonHomogeneousInput,
    ParameterError,
    SingularityError,
)
from .exactmath import Poly, RatFn, Scalar, VarCtx, exact_div, poly_gcd, poly_lcm
from .forms import (
    KForm,
    PolyMap,
    exterior_derivative,
    is_dicritical,
    pullback,
    restrict,
    wedge,
)
from .germ import milnor_number

OMEGA1 = "Omega1"
OMEGA2 = "Omega2"


# -- homogeneous forms and charts ------------------------------------------------


@dataclass(frozen=True)
class HomogForm:
    """Validated homogeneous dicritical 1-form in 3 variables with coprime
    coefficients (codimension-2 singular set proxy)."""

    omega: KForm
    nu: int

    @staticmethod
    def make(omega: KForm) -> "HomogForm":
        if omega.degree != 1 or omega.ctx.arity != 3:
            raise ValueError("need a 1-form in 3 variables")
        if not omega.is_homogeneous():
            raise NonHomogeneousInput("not homogeneous")
        if not is_dicritical(omega):
            raise ValueError("form is not dicritical")
        polys = [c.as_poly() for c in omega.coeffs.values()]
        g = reduce(poly_gcd, polys)
        if not g.is_constant():
            raise ValueError(f"coefficients share the factor {g}; singular set too big")
        return HomogForm(omega, omega.homogeneous_degree())


def restrict_to_chart(h: HomogForm, chart: int) -> KForm:
    """Affine trace on the chart {x_chart = 1} (2-variable form)."""
    ctx = h.omega.ctx
    if not 0 <= chart < 3:
        raise ValueError("chart index must be 0, 1 or 2")
    keep = tuple(n for i, n in enumerate(ctx.geometric) if i != chart)
    flat = VarCtx(keep, ctx.parameters)
    return restrict(h.omega, {chart: 1}, flat)


def homogenize_affine(
    theta: KForm, nu: int, ctx3: VarCtx | None = None, chart: int | None = None
) -> HomogForm:
    """The unique homogeneous dicritical degree-nu form restricting to theta.

    theta must have the degree structure of a degree-(nu-1) plane foliation:
    coefficients of degree <= nu whose top parts are proportional to the
    rotational form (P_nu, Q_nu) = (-x2 q, x1 q).
    """
    if theta.degree != 1 or theta.ctx.arity != 2:
        raise ValueError("homogenization starts from a 1-form in 2 variables")
    polys = theta.polynomial_coeffs()
    P = polys.get((0,), Poly.zero(theta.ctx))
    Q = polys.get((1,), Poly.zero(theta.ctx))
    if max(P.degree(), Q.degree()) > nu:
        raise DegreeConstraintError(f"coefficients exceed degree {nu}")
    if ctx3 is None:
        taken = set(theta.ctx.geometric) | set(theta.ctx.parameters)
        fresh = next(n for n in ("x3", "x4", "x0", "z") if n not in taken)
        ctx3 = VarCtx(theta.ctx.geometric + (fresh,), theta.ctx.parameters)
        chart = 2
    if chart is None:
        chart = 2
    others = [i for i in range(3) if i != chart]

    def homogenize(p: Poly) -> Poly:
        out = {}
        for e, c in p.terms.items():
            geo = sum(e[:2])
            exp = [0, 0, 0]
            exp[others[0]] = e[0]
            exp[others[1]] = e[1]
            exp[chart] = nu - geo
            out[tuple(exp) + e[2:]] = c
        return Poly(ctx3, out)

    A = homogenize(P)
    B = homogenize(Q)
    g = ctx3.gens()
    radial_part = g[others[0]] * A + g[others[1]] * B
    try:
        C = -exact_div(radial_part, g[chart])
    except Exception as exc:
        raise DegreeConstraintError(
            "top parts are not proportional to the rotational form"
        ) from exc
    coeffs = {(others[0],): RatFn.from_poly(A), (others[1],): RatFn.from_poly(B), (chart,): RatFn.from_poly(C)}
    return HomogForm.make(KForm(ctx3, 1, coeffs))


# -- nilpotent-point normal families -----------------------------------------------


@dataclass
class NotInFamily:
    reason: str


@dataclass
class OmegaFamilyData:
    """Exact coefficient record of a normal-family member (values may be
    rational functions of declared parameters)."""

    family: str
    alpha: RatFn
    beta: RatFn
    a: RatFn
    b: RatFn
    P: RatFn
    Q: RatFn
    gamma: Fraction
    R: Fraction
    ctx: VarCtx

    def reconstruct(self) -> KForm:
        builder = omega1_form if self.family == OMEGA1 else omega2_form
        return builder(
            self.ctx, alpha=self.alpha, beta=self.beta, a=self.a, b=self.b, P=self.P, Q=self.Q
        )


def _family_form(ctx: VarCtx, gamma, R, alpha, beta, a, b, P, Q) -> KForm:
    if ctx.arity != 2:
        raise ValueError("family forms live in 2 variables")
    x1, x2 = (RatFn.from_poly(g) for g in ctx.gens()[:2])
    alpha, beta, a, b, P, Q, gamma, R = (
        RatFn.lift(v, ctx) for v in (alpha, beta, a, b, P, Q, gamma, R)
    )
    q = P * x1**2 + Q * x1 * x2 + R * x2**2
    F = x1 * (1 + alpha * x1 + beta * x2) + gamma * x2**2 - x2 * q
    G = x1 * (a * x1 + b * x2) + x1 * q
    return KForm(ctx, 1, {(0,): F, (1,): G})


def omega1_form(ctx: VarCtx, *, alpha=0, beta=0, a=0, b=0, P=0, Q=0) -> KForm:
    """Family with a single singular point on the invariant line (gamma=0, R=1)."""
    return _family_form(ctx, 0, 1, alpha, beta, a, b, P, Q)


def omega2_form(ctx: VarCtx, *, alpha=0, beta=0, a=0, b=0, P=0, Q=0) -> KForm:
    """Family with two singular points on the invariant line (gamma=1, R=0)."""
    return _family_form(ctx, 1, 0, alpha, beta, a, b, P, Q)


def family_extract(theta: KForm) -> OmegaFamilyData | NotInFamily:
    """Pattern-match a plane 1-form of degree <= 3 with nilpotent 1-jet
    against the two normal families.

    Only an overall unit and the diagonal scaling (x1, x2) -> (g x1, x2)
    are applied; inputs needing a genuine projective move are refused.
    """
    if theta.degree != 1 or theta.ctx.arity != 2:
        return NotInFamily("need a 1-form in 2 variables")
    if not theta.is_polynomial():
        return NotInFamily("coefficients are not polynomial")
    ctx = theta.ctx
    F = theta.coeff((0,)).as_poly()
    G = theta.coeff((1,)).as_poly()
    if max(F.degree(), G.degree()) > 3:
        return NotInFamily("degree exceeds 3")
    if not F.component(0).is_zero() or not G.component(0).is_zero():
        return NotInFamily("form does not vanish at the origin")
    f1, g1 = F.component(1), G.component(1)
    c_poly = f1.coeff_of_geometric((1, 0))
    if not g1.is_zero() or f1 != Poly.var(ctx, 0) * c_poly or c_poly.is_zero():
        return NotInFamily("1-jet is not of type x1 dx1")
    if not c_poly.is_constant():
        return NotInFamily("1-jet scaling depends on parameters")
    c = c_poly.constant_value()
    F, G = F / c, G / c

    # invariant-line test: x1 divides the dx2 coefficient
    x1 = Poly.var(ctx, 0)
    try:
        G1 = exact_div(G, x1)
    except Exception:
        return NotInFamily("the line x1 = 0 is not invariant (mu = 2)")

    F2, F3 = F.component(2), F.component(3)
    alpha = RatFn.from_poly(F2.coeff_of_geometric((2, 0)))
    beta = RatFn.from_poly(F2.coeff_of_geometric((1, 1)))
    gamma = RatFn.from_poly(F2.coeff_of_geometric((0, 2)))
    a = RatFn.from_poly(G1.coeff_of_geometric((1, 0)))
    b = RatFn.from_poly(G1.coeff_of_geometric((0, 1)))
    q = G1.component(2)
    P = RatFn.from_poly(q.coeff_of_geometric((2, 0)))
    Q = RatFn.from_poly(q.coeff_of_geometric((1, 1)))
    R = RatFn.from_poly(q.coeff_of_geometric((0, 2)))
    x2 = Poly.var(ctx, 1)
    if RatFn.from_poly(F3) != -RatFn.from_poly(x2 * q):
        return NotInFamily("cubic parts inconsistent with the family shape")

    if gamma.is_zero() and R.is_zero():
        return NotInFamily("the line x1 = 0 is entirely singular")
    if not gamma.is_zero() and not R.is_zero():
        return NotInFamily("needs a projective (non-diagonal) normalization")
    # diagonal scaling x1 -> s x1 with s = gamma (resp. R), unit 1/s^2
    if not gamma.is_zero():
        s = gamma
        fam, g_out, r_out = OMEGA2, Fraction(1), Fraction(0)
    else:
        s = R
        fam, g_out, r_out = OMEGA1, Fraction(0), Fraction(1)
    if not s.is_constant():
        raise ParameterError("family normalization scale depends on parameters")
    return OmegaFamilyData(
        family=fam,
        alpha=alpha * s,
        beta=beta,
        a=a,
        b=b / s,
        P=P * s,
        Q=Q,
        gamma=g_out,
        R=r_out,
        ctx=ctx,
    )


def mu_table(data: OmegaFamilyData) -> int:
    """Milnor number at the nilpotent point from the family coefficients."""

    def nonzero(v: RatFn, name: str) -> bool:
        if v.is_zero():
            return False
        if v.is_constant():
            return True
        raise ParameterError(f"cannot decide whether {name} vanishes; state it or substitute")

    if data.family == OMEGA2:
        if nonzero(data.b, "b"):
            return 3
        if nonzero(data.a, "a"):
            return 4
        if nonzero(data.Q, "Q"):
            return 5
        if nonzero(data.P, "P"):
            return 6
        raise ValueError("degenerate member: a=b=P=Q=0 has a non-isolated singularity")
    if data.family == OMEGA1:
        return 4 if nonzero(data.b, "b") else 5
    raise ValueError(f"unknown family {data.family}")


# -- the resonance set -------------------------------------------------------------


def chi_contains(r: Scalar) -> bool:
    """Membership in {(l-2)/(k-1) : l in N, k in N - {1}} =
    Q_{>0} union -N union {-1/n} union {-2/n}  (0 included)."""
    r = Fraction(r)
    if r >= 0:
        return True
    if r.denominator == 1:
        return True
    return r.numerator in (-1, -2)


# -- center catalogue (ten closed rational normal forms) ----------------------------


@dataclass
class DulacForm:
    kind: str
    eta: KForm
    omega: KForm
    components: dict[str, Poly]
    residues: tuple[Fraction, ...]
    affine_factor: Poly | None = None


_DULAC_SHAPES: dict[str, list[tuple[str, int]]] = {
    "a": [("q", 3)],
    "b": [("p1", 1), ("p2", 1), ("p3", 1)],
    "c": [("p1", 2), ("p2", 1)],
    "d": [("p1", 1), ("p2", 1), ("q", 1)],
    "e": [("p1", 1), ("p2", 1), ("q", 1)],
    "f": [("p", 1), ("q", 2)],
    "g": [("p", 1), ("q", 2)],
    "h": [("p", 1), ("q", 2)],
    "i": [("p", 2), ("q", 1)],
    "j": [("f", 2), ("g", 3)],
}

_DULAC_RESIDUES = {"a": 0, "b": 3, "c": 2, "d": 2, "e": 2, "f": 0, "g": 0, "h": 0, "i": 0, "j": 0}


def _dlog(p: Poly) -> KForm:
    return exterior_derivative(KForm.scalar(p.ctx, p)) / RatFn.from_poly(p)


def _d_of(r: RatFn, ctx: VarCtx) -> KForm:
    return exterior_derivative(KForm.scalar(ctx, r))


def dulac_build(kind: str, components: dict[str, Poly], residues: Sequence[Scalar] = ()) -> DulacForm:
    """Build one of the ten closed rational normal forms (a)-(j).

    Degree constraints are enforced exactly; residues must be nonzero.
    Type (j) requires 3 g df - 2 f dg to be divisible by an affine
    function, which is checked (and certified when rational).
    """
    kind = kind.lower()
    if kind not in _DULAC_SHAPES:
        raise ValueError(f"unknown catalogue type {kind!r}")
    shape = _DULAC_SHAPES[kind]
    missing = [n for n, _ in shape if n not in components]
    if missing:
        raise ValueError(f"type ({kind}) needs components {missing}")
    ctx = next(iter(components.values())).ctx
    if ctx.arity != 2:
        raise ValueError("catalogue forms live in 2 variables")
    for name, deg in shape:
        p = components[name]
        if p.degree() != deg:
            raise DegreeConstraintError(f"deg({name}) must be exactly {deg}, got {p.degree()}")
    lam = tuple(Fraction(r) for r in residues)
    if len(lam) != _DULAC_RESIDUES[kind]:
        raise ValueError(f"type ({kind}) needs {_DULAC_RESIDUES[kind]} residues")
    if any(l == 0 for l in lam):
        raise ValueError("residues must be nonzero")

    c = components
    affine_factor = None
    if kind == "a":
        eta = _d_of(RatFn.from_poly(c["q"]), ctx)
    elif kind == "b":
        eta = lam[0] * _dlog(c["p1"]) + lam[1] * _dlog(c["p2"]) + lam[2] * _dlog(c["p3"])
    elif kind == "c":
        eta = lam[0] * _dlog(c["p1"]) + lam[1] * _dlog(c["p2"])
    elif kind == "d":
        eta = lam[0] * _dlog(c["p1"]) + lam[1] * _dlog(c["p2"]) + _d_of(RatFn.from_poly(c["q"]), ctx)
    elif kind == "e":
        eta = (
            lam[0] * _dlog(c["p1"])
            + lam[1] * _dlog(c["p2"])
            + _d_of(RatFn(c["q"], c["p1"]), ctx)
        )
    elif kind == "f":
        eta = _dlog(c["p"]) + _d_of(RatFn(c["q"], c["p"] ** 2), ctx)
    elif kind == "g":
        eta = _dlog(c["p"]) + _d_of(RatFn(c["q"], c["p"]), ctx)
    elif kind in ("h", "i"):
        eta = _dlog(c["p"]) + _d_of(RatFn.from_poly(c["q"]), ctx)
    else:  # (j)
        f, g = c["f"], c["g"]
        tau = 3 * g * _d_of(RatFn.from_poly(f), ctx) - 2 * f * _d_of(RatFn.from_poly(g), ctx)
        affine_factor = _affine_divisor(tau)
        eta = 3 * _dlog(f) - 2 * _dlog(g)

    if not exterior_derivative(eta).is_zero():
        raise AssertionError("catalogue form failed the exact closedness check")
    omega = clear_denominators(eta)
    return DulacForm(kind, eta, omega, dict(c), lam, affine_factor)


def clear_denominators(eta: KForm) -> KForm:
    """Polynomial form defining the same foliation: multiply by the common
    denominator and remove the coefficient gcd and rational content."""
    ctx = eta.ctx
    common = Poly.one(ctx)
    for cf in eta.coeffs.values():
        common = poly_lcm(common, cf.den)
    polys = {idx: (cf * RatFn.from_poly(common)).as_poly() for idx, cf in eta.coeffs.items()}
    nonzero = [p for p in polys.values() if not p.is_zero()]
    if not nonzero:
        return KForm.zero(ctx, eta.degree)
    g = reduce(poly_gcd, nonzero)
    if not g.is_constant():
        polys = {idx: exact_div(p, g) for idx, p in polys.items()}
    from math import gcd, lcm

    contents = [p.content() for p in polys.values() if not p.is_zero()]
    scale = Fraction(
        reduce(gcd, (abs(c.numerator) for c in contents)),
        reduce(lcm, (c.denominator for c in contents)),
    )
    first = polys[min(k for k, p in polys.items() if not p.is_zero())]
    if first.leading()[1] < 0:
        scale = -scale
    polys = {idx: p / scale for idx, p in polys.items()}
    return KForm(ctx, eta.degree, {idx: RatFn.from_poly(p) for idx, p in polys.items()})


def _affine_divisor(tau: KForm) -> Poly | None:
    """An affine (degree-1) polynomial dividing all coefficients of tau.

    Rational factors are returned as certificates; a degenerate rational
    conic gcd certifies a conjugate pair of affine factors (returned as
    None).  Raises DivisibilityError when no affine factor exists or when
    none can be certified with rational arithmetic.
    """
    polys = [c.as_poly() for c in tau.coeffs.values() if c]
    if not polys:
        raise DivisibilityError("zero form has no well-defined affine factor")
    g = reduce(poly_gcd, polys).normalized()
    if g.is_constant():
        raise DivisibilityError("coefficients are coprime; no affine factor")
    lin = _rational_affine_factor(g)
    if lin is not None:
        return lin
    if g.degree() == 2 and _is_degenerate_conic(g):
        return None  # two conjugate affine factors over C
    raise DivisibilityError(
        "no rational affine factor found; divisibility over C undecided"
    )


def _is_degenerate_conic(g: Poly) -> bool:
    """Exact degeneracy test for an affine conic: the projectivized 3x3
    symmetric matrix is singular iff the conic splits into lines over C."""
    def cf(i: int, j: int) -> Fraction:
        return g.coeff_of_geometric((i, j)).constant_value()

    A, B, C = cf(2, 0), cf(1, 1), cf(0, 2)
    D, E, Fc = cf(1, 0), cf(0, 1), cf(0, 0)
    m = [
        [A, B / 2, D / 2],
        [B / 2, C, E / 2],
        [D / 2, E / 2, Fc],
    ]
    det = (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )
    return det == 0


def _rational_affine_factor(g: Poly) -> Poly | None:
    """Search for a rational affine factor u x1 + v x2 + w of g."""
    ctx = g.ctx
    if any(sum(e[2:]) for e in g.terms):
        raise ParameterError("affine-factor search needs parameter-free input")
    if g.degree() == 1:
        return g
    x1, x2 = ctx.gens()[:2]
    # coordinate-axis factors first
    if not _substitute_one(g, 0, Fraction(0)):
        return x1
    if not _substitute_one(g, 1, Fraction(0)):
        return x2
    candidates: list[Poly] = []
    # vertical lines x1 = c: common rational roots across two horizontal slices
    r0 = _univariate_rational_roots(g, axis=0, other_value=Fraction(0))
    r1 = _univariate_rational_roots(g, axis=0, other_value=Fraction(1))
    for cval in r0 & r1:
        candidates.append(x1 - cval)
    # non-vertical lines x2 = s x1 + t: t from g(0, .), s + t from g(1, .)
    t0 = _univariate_rational_roots(g, axis=1, other_value=Fraction(0))
    t1 = _univariate_rational_roots(g, axis=1, other_value=Fraction(1))
    for t in t0:
        for u in t1:
            candidates.append(x2 - (u - t) * x1 - t)
    for cand in candidates:
        try:
            exact_div(g, cand)
            return cand.normalized()
        except Exception:
            continue
    return None


def _substitute_one(g: Poly, index: int, value: Fraction) -> dict[int, Fraction]:
    """Substitute one geometric variable by a rational value; returns the
    exponent map of the surviving variable."""
    out: dict[int, Fraction] = {}
    for e, c in g.terms.items():
        k = e[index]
        keep = e[1 - index]
        v = c * value**k
        if v:
            s = out.get(keep, Fraction(0)) + v
            if s:
                out[keep] = s
            else:
                out.pop(keep, None)
    return {k: v for k, v in out.items() if v}


def _univariate_rational_roots(g: Poly, axis: int, other_value: Fraction) -> set[Fraction]:
    from .blowup import _rational_roots

    uni = _substitute_one(g, 1 - axis, other_value)
    if not uni:
        return set()
    roots, _ = _rational_roots(uni)
    return set(roots)


# -- invariant curves, budgets, identity checks ---------------------------------------


def invariant_curve_check(theta: KForm, C: Poly) -> bool:
    """True iff theta ^ dC = C * (2-form) exactly."""
    if C.is_zero():
        raise ValueError("curve polynomial must be nonzero")
    W = wedge(theta, exterior_derivative(KForm.scalar(theta.ctx, C)))
    for cf in W.coeffs.values():
        p = cf.as_poly()
        try:
            exact_div(p, C)
        except Exception:
            return False
    return True


@dataclass
class BudgetPoint:
    chart: int
    coords: tuple[Fraction, Fraction]
    mu: int


@dataclass
class SingularBudget:
    points: list[BudgetPoint]
    total: int
    expected: int
    satisfied: bool


def singular_budget_check(
    h: HomogForm, points: Sequence[tuple[int, Sequence[Scalar]]]
) -> SingularBudget:
    """Verify user-supplied singular points and compare the sum of their
    local Milnor numbers with nu^2 - nu + 1.  Points are (chart, (c1, c2));
    discovery is deliberately not attempted."""
    out: list[BudgetPoint] = []
    total = 0
    for chart, coords in points:
        theta = restrict_to_chart(h, chart)
        ctx = theta.ctx
        p = tuple(Fraction(c) for c in coords)
        gens = ctx.gens()
        shift = PolyMap(ctx, ctx, [gens[0] + p[0], gens[1] + p[1]])
        local = pullback(theta, shift)
        if not local.vanishes_at_origin():
            raise SingularityError(f"point {p} in chart {chart} is not singular")
        mu = milnor_number(local)
        if mu == "INFINITE":
            raise SingularityError(f"point {p} in chart {chart} is not isolated")
        out.append(BudgetPoint(chart, p, mu))
        total += mu
    expected = h.nu**2 - h.nu + 1
    return SingularBudget(out, total, expected, total == expected)


def transversely_affine_check(omega: KForm, omega1: KForm) -> bool:
    """True iff omega1 is closed and d(omega) = omega ^ omega1 exactly."""
    if omega.degree != 1 or omega1.degree != 1:
        raise ValueError("both arguments must be 1-forms")
    if not exterior_derivative(omega1).is_zero():
        return False
    return (exterior_derivative(omega) - wedge(omega, omega1)).is_zero()


def sl2_triplet_check(w0: KForm, w1: KForm, w2: KForm) -> bool:
    """d w0 = w0^w1, d w1 = w0^w2, d w2 = w1^w2, all exactly."""
    return (
        (exterior_derivative(w0) - wedge(w0, w1)).is_zero()
        and (exterior_derivative(w1) - wedge(w0, w2)).is_zero()
        and (exterior_derivative(w2) - wedge(w1, w2)).is_zero()
    )


def log_form_build(
    residues: Sequence["Scalar | Poly | RatFn"],
    fs: Sequence[Poly],
    H: Poly | None = None,
    ns: Sequence[int] | None = None,
) -> KForm:
    """Closed rational 1-form sum(lambda_i df_i/f_i) + d(H / prod f_i^n_i).

    The f_i must be nonzero and pairwise coprime (residues are otherwise
    ill-defined); closedness is verified exactly.
    """
    if not fs:
        raise ValueError("need at least one pole polynomial")
    ctx = fs[0].ctx
    if len(residues) != len(fs):
        raise ValueError("one residue per pole polynomial")
    for f in fs:
        if f.is_zero():
            raise ValueError("pole polynomials must be nonzero")
    for i in range(len(fs)):
        for j in range(i + 1, len(fs)):
            if not poly_gcd(fs[i], fs[j]).is_constant():
                raise DivisibilityError(
                    f"pole polynomials {i} and {j} are not coprime; residues ill-defined"
                )
    eta = KForm.zero(ctx, 1)
    for lam, f in zip(residues, fs):
        eta = eta + RatFn.lift(lam, ctx) * _dlog(f)
    if H is not None and not H.is_zero():
        ns = list(ns or [1] * len(fs))
        if len(ns) != len(fs):
            raise ValueError("one exponent per pole polynomial")
        den = Poly.one(ctx)
        for f, n in zip(fs, ns):
            den = den * f**n
        eta = eta + _d_of(RatFn(H, den), ctx)
    if not exterior_derivative(eta).is_zero():
        raise AssertionError("logarithmic form failed the exact closedness check")
    return eta
