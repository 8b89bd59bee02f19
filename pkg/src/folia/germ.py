"""Local analysis of 1-form germs at the origin: jet classification,
quadratic-rank cases for 3-variable unfoldings, Milnor numbers by the
axiomatic intersection-multiplicity recursion, the preparation normal form
x1 dx1 + (l1(f) + x1 l2(f)) df, unfolding arithmetic k(p+1) = mu+1, and
truncated order-by-order searches for first integrals and integrating
factors.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Sequence

from .errors import (
    JetInconsistency,
    NonPolynomialInput,
    ParameterError,
    SingularityError,
    TruncationError,
)
from .exactmath import Poly, RatFn, Scalar, VarCtx, exact_div, linear_solve, poly_gcd, poly_lcm
from .forms import (
    KForm,
    exterior_derivative,
    initial_part,
    is_dicritical,
    is_integrable,
    restrict,
    wedge,
)

INFINITE = "INFINITE"

DEFAULT_ORDER_CAP = 24


class JetTag(str, Enum):
    ZERO = "ZERO"
    NILPOTENT = "NILPOTENT"
    NON_NILPOTENT = "NON_NILPOTENT"


@dataclass(frozen=True)
class JetClass:
    tag: JetTag
    kupka: bool


class QuadRank(str, Enum):
    KUPKA = "KUPKA"
    RANK3 = "RANK3"
    RANK2 = "RANK2"
    RANK1 = "RANK1"


@dataclass(frozen=True)
class QuadCase:
    case: QuadRank
    q: Poly | None = None
    delta: Fraction | None = None


class Verdict(str, Enum):
    FIRST_INTEGRAL = "FIRST_INTEGRAL"
    INTEGRATING_FACTOR = "INTEGRATING_FACTOR"
    UNRESOLVED = "UNRESOLVED"


@dataclass(frozen=True)
class DeploymentOutcome:
    mu: int
    cases: tuple[tuple[int, int, Verdict], ...]  # (k, p, verdict), k(p+1) = mu+1


@dataclass
class GermReport:
    nu: int
    initial: KForm
    dicritical: bool
    jet: JetClass
    quad: QuadCase | None
    milnor: int | str | None  # INFINITE marker, None when not applicable


@dataclass(frozen=True)
class LorayData:
    """Data of the preparation normal form x1 dx1 + (l1(f) + x1 l2(f)) df.

    l1 and l2 are truncated univariate series given by coefficient lists
    (constant term first); trunc records the order through which they are
    trusted.  f must not involve x1 and must vanish at the origin.
    """

    f: Poly
    l1: tuple[Fraction, ...]
    l2: tuple[Fraction, ...]
    trunc: int

    @staticmethod
    def make(f: Poly, l1: Sequence[Scalar], l2: Sequence[Scalar], trunc: int | None = None):
        if f.degree_in(0) > 0:
            raise ValueError("f may not involve the first variable")
        if not f.eval_rational([0] * f.ctx.arity).is_zero():
            raise ValueError("f must vanish at the origin")
        c1 = tuple(Fraction(c) for c in l1)
        c2 = tuple(Fraction(c) for c in l2)
        if trunc is None:
            trunc = max(len(c1), len(c2)) - 1 if (c1 or c2) else 0
        return LorayData(f, c1, c2, trunc)


@dataclass(frozen=True)
class FactorStructure:
    """Divisor structure of an integrating factor: f = x1^k * g with
    g(0, x2) of order l (None when that restriction vanishes)."""

    k: int
    l: int | None


@dataclass
class SearchResult:
    """Solutions of a truncated graded congruence.

    Existence to the given order never certifies formal existence; when the
    truncated space is trivial, obstruction_degree is the first truncation
    order at which it already was.
    """

    order: int
    basis: list[Poly]
    exclusions: list[Poly]
    obstruction_degree: int | None
    certified_formal: bool = False
    factor_data: list[FactorStructure] | None = None


# -- jet classification -------------------------------------------------------


def _linear_matrix(omega: KForm) -> list[list[Poly]]:
    """Matrix of the linear part of the dual field -b d/dx1 + a d/dx2
    (2 variables), entries parameter-only polynomials."""
    ctx = omega.ctx
    a = omega.coeff((0,)).as_poly()
    b = omega.coeff((1,)).as_poly()
    comp = [-b.component(1), a.component(1)]
    return [[comp[i].partial(j).coeff_of_geometric((0,) * ctx.arity) for j in range(2)] for i in range(2)]


def one_jet_class(omega: KForm) -> JetClass:
    """Classify the 1-jet at the origin; kupka = (d omega (0) != 0).

    In 3 variables the tag is computed on the restriction to the last
    coordinate hyperplane (the unfolding slice); kupka uses the full form.
    Parameter coefficients are treated generically (nonzero as polynomials).
    """
    if omega.degree != 1:
        raise ValueError("jet classification needs a 1-form")
    if omega.ctx.arity > 3:
        raise ValueError("jet classification supports 2 or 3 variables")
    if not omega.is_polynomial():
        raise NonPolynomialInput("jet classification needs polynomial coefficients")
    ctx = omega.ctx
    kupka = not exterior_derivative(omega).map_coeffs(
        lambda c: RatFn.from_poly(c.as_poly().eval_rational([0] * ctx.arity))
    ).is_zero()
    if ctx.arity == 3:
        flat = VarCtx(ctx.geometric[:2], ctx.parameters)
        omega2 = restrict(omega, {2: 0}, flat)
    else:
        omega2 = omega
    if ctx.arity == 1:
        raise ValueError("jet classification needs at least 2 variables")
    m = _linear_matrix(omega2)
    if all(e.is_zero() for row in m for e in row):
        return JetClass(JetTag.ZERO, kupka)
    trace = m[0][0] + m[1][1]
    det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    if trace.is_zero() and det.is_zero():
        return JetClass(JetTag.NILPOTENT, kupka)
    return JetClass(JetTag.NON_NILPOTENT, kupka)


def _constant_two_form(omega2: KForm) -> dict:
    ctx = omega2.ctx
    out = {}
    for idx, c in omega2.coeffs.items():
        v = c.as_poly().eval_rational([0] * ctx.arity)
        if not v.is_zero():
            out[idx] = v
    return out


def prop24_case(omega: KForm) -> QuadCase:
    """Quadratic-rank trichotomy for an integrable 3-variable unfolding whose
    restriction to x3 = 0 has 1-jet of type x1 dx1.

    KUPKA when d(omega)(0) != 0 (then necessarily a multiple of dx1^dx3);
    otherwise the 1-jet is closed, equal to dq, and the case is the rank of
    the quadratic form q, with the shift delta reported for rank 1.
    """
    ctx = omega.ctx
    if omega.degree != 1 or ctx.arity != 3:
        raise ValueError("need a 1-form in 3 variables")
    if not omega.is_polynomial():
        raise NonPolynomialInput("polynomial coefficients required")
    if ctx.nparams:
        raise ParameterError("substitute parameters first")
    if not is_integrable(omega):
        raise ValueError("form is not integrable")
    flat = VarCtx(ctx.geometric[:2], ctx.parameters)
    omega0 = restrict(omega, {2: 0}, flat)
    a0 = omega0.coeff((0,)).as_poly().component(1)
    b0 = omega0.coeff((1,)).as_poly().component(1)
    x1_flat = Poly.var(flat, 0)
    scale = a0.coeff_of_geometric((1, 0)).constant_value() if a0 else Fraction(0)
    if scale == 0 or a0 != x1_flat * scale or not b0.is_zero():
        raise ValueError("restriction to x3=0 must have 1-jet of type x1 dx1")

    d0 = _constant_two_form(exterior_derivative(omega))
    if d0:
        if set(d0.keys()) != {(0, 2)}:
            raise JetInconsistency(
                "d(omega)(0) is neither zero nor a multiple of dx1^dx3"
            )
        return QuadCase(QuadRank.KUPKA)

    jet = KForm(
        ctx, 1, {idx: RatFn.from_poly(c.as_poly().component(1)) for idx, c in omega.coeffs.items()}
    )
    from .forms import VecField, interior_product

    q = interior_product(VecField.radial(ctx), jet).coeff(()).as_poly() / 2
    if exterior_derivative(KForm.scalar(ctx, q)) != jet:
        raise JetInconsistency("1-jet is not closed although d(omega)(0) = 0")
    q_norm = q / scale
    hess = [[q_norm.partial(i).partial(j).constant_value() for j in range(3)] for i in range(3)]
    rank = _matrix_rank(hess)
    if rank == 3:
        return QuadCase(QuadRank.RANK3, q)
    if rank == 2:
        return QuadCase(QuadRank.RANK2, q)
    delta = q_norm.coeff_of_geometric((1, 0, 1)).constant_value()
    return QuadCase(QuadRank.RANK1, q, delta)


def _matrix_rank(m: list[list[Fraction]]) -> int:
    mat = [row[:] for row in m]
    rank = 0
    rows, cols = len(mat), len(mat[0])
    for c in range(cols):
        piv = next((r for r in range(rank, rows) if mat[r][c] != 0), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        pv = mat[rank][c]
        for r in range(rank + 1, rows):
            f = mat[r][c] / pv
            for cc in range(c, cols):
                mat[r][cc] -= f * mat[rank][cc]
        rank += 1
    return rank


# -- intersection multiplicity -------------------------------------------------


def _origin_value(p: Poly) -> Fraction:
    return p.eval_rational([0] * p.ctx.arity).constant_value()


def _restrict_x2(p: Poly) -> dict[int, Fraction]:
    """p(x1, 0) as {exponent: coefficient}."""
    out: dict[int, Fraction] = {}
    for e, c in p.terms.items():
        if e[1] == 0:
            out[e[0]] = out.get(e[0], Fraction(0)) + c
    return {k: v for k, v in out.items() if v}


def intersection_multiplicity(a: Poly, b: Poly) -> int | str:
    """Local intersection multiplicity of the pair (a, b) at the origin.

    Axiomatic recursion: I is symmetric, I(a, b) = I(a, b + h a), splits off
    coordinate-axis factors via I(x2, b) = ord_{x1} b(x1, 0), and is zero
    off the common zero.  INFINITE exactly when a common factor vanishes at
    the origin.
    """
    if a.ctx != b.ctx or a.ctx.arity != 2:
        raise ValueError("intersection multiplicity works on 2-variable pairs")
    for p in (a, b):
        n = p.ctx.arity
        if any(sum(e[n:]) for e in p.terms):
            raise ParameterError("substitute parameters first")
    if a.is_zero() and b.is_zero():
        return INFINITE
    g = poly_gcd(a, b)
    if not g.is_constant() and _origin_value(g) == 0:
        return INFINITE
    return _fulton(a, b)


def _fulton(p: Poly, q: Poly) -> int:
    if _origin_value(p) != 0 or _origin_value(q) != 0:
        return 0
    x2 = Poly.var(p.ctx, 1)
    f = _restrict_x2(p)
    g = _restrict_x2(q)
    if not f:
        # p is divisible by x2; I(x2, q) = order of q(x1, 0) at x1 = 0
        if not g:
            raise AssertionError("both restrictions vanish on a finite pair")
        return min(g) + _fulton(exact_div(p, x2), q)
    if not g:
        return min(f) + _fulton(p, exact_div(q, x2))
    if max(f) > max(g):
        p, q, f, g = q, p, g, f
    # kill the leading x1 power of the larger restriction
    d = max(g) - max(f)
    factor = g[max(g)] / f[max(f)]
    x1 = Poly.var(p.ctx, 0)
    q2 = q - p * Poly.monomial(p.ctx, (d, 0) + (0,) * p.ctx.nparams, factor)
    return _fulton(p, q2)


def milnor_number(omega: KForm) -> int | str:
    """Milnor number of a 2-variable 1-form a dx1 + b dx2 at the origin."""
    if omega.degree != 1 or omega.ctx.arity != 2:
        raise ValueError("Milnor number is defined for 1-forms in 2 variables")
    if not omega.is_polynomial():
        raise NonPolynomialInput("polynomial coefficients required")
    a = omega.coeff((0,)).as_poly()
    b = omega.coeff((1,)).as_poly()
    return intersection_multiplicity(a, b)


# -- normal form and unfolding arithmetic ----------------------------------------


def loray_form(data: LorayData, upto: int | None = None) -> KForm:
    """Build x1 dx1 + (l1(f) + x1 l2(f)) df as an exact polynomial form.

    The output is a pullback of a plane form under (x1, f), hence exactly
    integrable.  When `upto` is given, the recorded truncation of l1, l2
    must reach it.
    """
    f = data.f
    ctx = f.ctx
    ordf = f.order()
    if upto is not None:
        reliable = (data.trunc + 1) * max(ordf, 1)
        if upto >= reliable:
            raise TruncationError(
                f"series truncation {data.trunc} only supports degrees < {reliable}"
            )
    powers: list[Poly] = [Poly.one(ctx)]
    for _ in range(max(len(data.l1), len(data.l2))):
        powers.append(powers[-1] * f)
    l1f = sum((powers[i] * c for i, c in enumerate(data.l1)), Poly.zero(ctx))
    l2f = sum((powers[i] * c for i, c in enumerate(data.l2)), Poly.zero(ctx))
    x1 = Poly.var(ctx, 0)
    df = exterior_derivative(KForm.scalar(ctx, f))
    return KForm.one_form(ctx, [x1] + [0] * (ctx.arity - 1)) + (l1f + x1 * l2f) * df


def deployment_outcomes(mu: int) -> DeploymentOutcome:
    """All splittings k(p+1) = mu+1 with k >= 2 and their verdicts.

    p = 0 forces a unit low-order series coefficient, hence a holomorphic
    first integral; p = 1 gives a non-nilpotent reduced jet and a formal
    integrating factor; p >= 2 depends on data the multiplicity alone does
    not determine and is reported unresolved.
    """
    if mu < 2:
        raise ValueError("multiplicity must be at least 2")
    cases = []
    for k in range(mu + 1, 1, -1):
        if (mu + 1) % k:
            continue
        p = (mu + 1) // k - 1
        if p == 0:
            verdict = Verdict.FIRST_INTEGRAL
        elif p == 1:
            verdict = Verdict.INTEGRATING_FACTOR
        else:
            verdict = Verdict.UNRESOLVED
        cases.append((k, p, verdict))
    return DeploymentOutcome(mu, tuple(cases))


# -- truncated searches ------------------------------------------------------------


def _geometric_monomials(ctx: VarCtx, lo: int, hi: int):
    n = ctx.arity
    for total in range(lo, hi + 1):
        for exp in _compositions(total, n):
            yield exp + (0,) * ctx.nparams


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _search(
    omega: KForm,
    N: int,
    column: Callable[[Poly], KForm],
    lowest: int,
    cap: int,
) -> tuple[list[Poly], list[Poly], int]:
    """Solve the homogeneous graded system for sum(c_m * m) over monomials of
    degree lowest..N, keeping 2-form constraint components of degree <= cap.
    Returns (basis, exclusions, dimension)."""
    ctx = omega.ctx
    monos = list(_geometric_monomials(ctx, lowest, N))
    columns = [column(Poly.monomial(ctx, m)) for m in monos]
    row_keys: set = set()
    col_data = []
    for form in columns:
        data = {}
        for idx, c in form.coeffs.items():
            poly = c.as_poly()
            for geo in poly.geometric_monomials():
                if sum(geo) > cap:
                    continue
                key = (idx, geo)
                data[key] = poly.coeff_of_geometric(geo)
                row_keys.add(key)
        col_data.append(data)
    rows = sorted(row_keys)
    zero = RatFn.zero(ctx)
    A = [
        [RatFn.from_poly(col[key]) if key in col else zero for col in col_data]
        for key in rows
    ]
    if not rows:
        # no constraints at all: everything solves
        basis = [Poly.monomial(ctx, m) for m in monos]
        return basis, [], len(basis)
    sol = linear_solve(A, [zero] * len(rows))
    basis = []
    for vec in sol.kernel:
        common = Poly.one(ctx)
        for v in vec:
            common = poly_lcm(common, v.den)
        elem = Poly.zero(ctx)
        for coeff, m in zip(vec, monos):
            num = (coeff * RatFn.from_poly(common)).as_poly()
            elem = elem + num * Poly.monomial(ctx, m)
        basis.append(elem)
    return basis, sol.exclusions, len(basis)


def _prepare_search(omega: KForm, N: int, cap: int) -> None:
    if omega.degree != 1:
        raise ValueError("searches need a 1-form")
    if not omega.is_polynomial():
        raise NonPolynomialInput("polynomial coefficients required")
    if omega.is_zero():
        raise ValueError("zero form")
    if omega.ctx.arity > 3:
        raise ValueError("searches support at most 3 variables")
    if omega.ctx.nparams > 1:
        raise ParameterError("at most one parameter in truncated searches")
    if N > cap:
        raise TruncationError(f"order {N} exceeds the configured cap {cap}")
    if N < 1:
        raise ValueError("order must be at least 1")


def first_integral_search(omega: KForm, N: int, cap: int = DEFAULT_ORDER_CAP) -> SearchResult:
    """Truncated series f (no constant term) with omega ^ df = 0 through the
    graded components determined by degree-N data."""
    _prepare_search(omega, N, cap)
    nu = omega.order()

    def column(m: Poly) -> KForm:
        return wedge(omega, exterior_derivative(KForm.scalar(omega.ctx, m)))

    basis, excl, dim = _search(omega, N, column, 1, nu + N - 1)
    obstruction = None
    if dim == 0:
        for d in range(1, N + 1):
            _, _, dd = _search(omega, d, column, 1, nu + d - 1)
            if dd == 0:
                obstruction = d
                break
    return SearchResult(N, basis, excl, obstruction)


def integrating_factor_search(
    omega: KForm, N: int, cap: int = DEFAULT_ORDER_CAP
) -> SearchResult:
    """Truncated series f with f d(omega) + omega ^ df = 0 through the graded
    components determined by degree-N data, with divisor structure."""
    _prepare_search(omega, N, cap)
    nu = omega.order()
    domega = exterior_derivative(omega)

    def column(m: Poly) -> KForm:
        return m * domega + wedge(omega, exterior_derivative(KForm.scalar(omega.ctx, m)))

    basis, excl, dim = _search(omega, N, column, 0, nu + N - 1)
    obstruction = None
    if dim == 0:
        for d in range(0, N + 1):
            _, _, dd = _search(omega, d, column, 0, nu + d - 1)
            if dd == 0:
                obstruction = d
                break
    factor_data = [_factor_structure(f) for f in basis] if omega.ctx.arity == 2 else None
    return SearchResult(N, basis, excl, obstruction, factor_data=factor_data)


def _factor_structure(f: Poly) -> FactorStructure:
    k = min((e[0] for e in f.terms), default=0)
    ctx = f.ctx
    g = exact_div(f, Poly.var(ctx, 0) ** k) if k else f
    # order in x2 of g(0, x2)
    restricted = [e[1] for e in g.terms if e[0] == 0]
    l = min(restricted) if restricted else None
    return FactorStructure(k, l)


def is_center_to_order(omega: KForm, N: int, cap: int = DEFAULT_ORDER_CAP):
    """Truncated center test: is there a truncated first integral with a
    nondegenerate quadratic jet?  Returns (bool, witness or None)."""
    if omega.ctx.arity != 2:
        raise ValueError("center test works in 2 variables")
    if omega.ctx.nparams:
        raise ParameterError("substitute parameters first")
    if not omega.vanishes_at_origin():
        raise SingularityError("center is undefined at a nonsingular point")
    result = first_integral_search(omega, max(N, 2), cap)

    def quad_matrix(f: Poly) -> list[list[Fraction]]:
        q = f.component(2)
        return [[q.partial(i).partial(j).constant_value() for j in range(2)] for i in range(2)]

    def det(m) -> Fraction:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]

    mats = [quad_matrix(f) for f in result.basis]
    for f, m in zip(result.basis, mats):
        if det(m) != 0:
            return True, f
    # determinant is a quadratic form on the span: polarize over pairs
    for (f1, m1), (f2, m2) in itertools.combinations(zip(result.basis, mats), 2):
        s = [[m1[i][j] + m2[i][j] for j in range(2)] for i in range(2)]
        if det(s) - det(m1) - det(m2) != 0:
            return True, f1 + f2
    return False, None


# -- aggregate report ---------------------------------------------------------------


def analyze_germ(omega: KForm) -> GermReport:
    """Full local classification record for a 1-form in 2 or 3 variables."""
    if omega.degree != 1:
        raise ValueError("analysis needs a 1-form")
    if omega.ctx.arity > 3:
        raise ValueError("analysis supports 2 or 3 variables")
    if not omega.is_polynomial():
        raise NonPolynomialInput("polynomial coefficients required")
    nu, init = initial_part(omega)
    jet = one_jet_class(omega)
    quad = None
    if omega.ctx.arity == 3 and omega.ctx.nparams == 0:
        try:
            quad = prop24_case(omega)
        except (ValueError, JetInconsistency):
            quad = None
    milnor: int | str | None = None
    if omega.ctx.arity == 2 and not _has_parameters(omega):
        milnor = milnor_number(omega)
    return GermReport(nu, init, is_dicritical(init), jet, quad, milnor)


def _has_parameters(omega: KForm) -> bool:
    n = omega.ctx.arity
    for c in omega.coeffs.values():
        for p in (c.num, c.den):
            if any(sum(e[n:]) for e in p.terms):
                return True
    return False
