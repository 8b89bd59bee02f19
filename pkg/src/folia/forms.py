"""Exterior calculus on polynomial/rational differential forms in <= 4
variables: wedge, exterior derivative, interior product, Lie derivative,
grading, initial part, dicriticity, integrability, pullback.

A k-form is stored antisymmetrically: coefficients are indexed by strictly
increasing tuples of geometric variable indices.  Coefficients are RatFn;
operations that only make sense for polynomial coefficients (initial part,
dicriticity test) reject proper fractions with a distinct error.  Grading
is by geometric degree; parameters ride along as scalars.
"""

from __future__ import annotations

from typing import Mapping, Sequence

from .errors import (
    ContextMismatch,
    NonHomogeneousInput,
    NonPolynomialInput,
    TopDegreeError,
)
from .exactmath import Poly, RatFn, Scalar, VarCtx

MAX_FORM_DEGREE = 3

Index = tuple[int, ...]


def _sort_index(idx: Sequence[int]) -> tuple[Index, int]:
    """Sort an index tuple, returning (sorted tuple, permutation sign).

    Sign 0 when an index repeats.
    """
    idx = tuple(idx)
    if len(set(idx)) != len(idx):
        return idx, 0
    sign = 1
    lst = list(idx)
    for i in range(len(lst)):
        for j in range(len(lst) - 1 - i):
            if lst[j] > lst[j + 1]:
                lst[j], lst[j + 1] = lst[j + 1], lst[j]
                sign = -sign
    return tuple(lst), sign


class KForm:
    """Differential k-form (k <= 3) with RatFn coefficients."""

    __slots__ = ("ctx", "degree", "coeffs")

    def __init__(self, ctx: VarCtx, degree: int, coeffs: Mapping[Index, RatFn]):
        if not 0 <= degree <= MAX_FORM_DEGREE:
            raise TopDegreeError(f"form degree {degree} outside 0..{MAX_FORM_DEGREE}")
        if degree > ctx.arity:
            raise TopDegreeError(f"{degree}-form needs arity >= {degree}, have {ctx.arity}")
        clean: dict[Index, RatFn] = {}
        for idx, c in coeffs.items():
            idx = tuple(idx)
            if len(idx) != degree or list(idx) != sorted(set(idx)):
                raise ValueError(f"index tuple {idx} not strictly increasing of length {degree}")
            if any(not 0 <= i < ctx.arity for i in idx):
                raise ValueError(f"index {idx} out of range for arity {ctx.arity}")
            if c.ctx != ctx:
                raise ContextMismatch("coefficient context differs from form context")
            if c:
                clean[idx] = c
        self.ctx = ctx
        self.degree = degree
        self.coeffs = clean

    # -- constructors ----------------------------------------------------

    @classmethod
    def scalar(cls, ctx: VarCtx, value: "RatFn | Poly | Scalar") -> "KForm":
        return cls(ctx, 0, {(): RatFn.lift(value, ctx)})

    @classmethod
    def zero(cls, ctx: VarCtx, degree: int = 1) -> "KForm":
        return cls(ctx, degree, {})

    @classmethod
    def one_form(cls, ctx: VarCtx, coeffs: Sequence["RatFn | Poly | Scalar"]) -> "KForm":
        if len(coeffs) != ctx.arity:
            raise ValueError("need one coefficient per geometric variable")
        return cls(ctx, 1, {(i,): RatFn.lift(c, ctx) for i, c in enumerate(coeffs)})

    @classmethod
    def dx(cls, ctx: VarCtx, index: int) -> "KForm":
        return cls(ctx, 1, {(index,): RatFn.one(ctx)})

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def coeff(self, idx: Sequence[int]) -> RatFn:
        return self.coeffs.get(tuple(idx), RatFn.zero(self.ctx))

    def is_polynomial(self) -> bool:
        return all(c.is_polynomial() for c in self.coeffs.values())

    def polynomial_coeffs(self) -> dict[Index, Poly]:
        if not self.is_polynomial():
            raise NonPolynomialInput("form has non-polynomial coefficients")
        return {idx: c.num for idx, c in self.coeffs.items()}

    def order(self) -> int:
        """Lowest geometric degree among (polynomial) coefficients."""
        polys = self.polynomial_coeffs()
        return min((p.order() for p in polys.values()), default=-1)

    def is_homogeneous(self) -> bool:
        polys = self.polynomial_coeffs()
        degs = set()
        for p in polys.values():
            degs |= {d for d in p.homogeneous_components()}
        return len(degs) <= 1

    def homogeneous_degree(self) -> int:
        if not self.is_homogeneous():
            raise NonHomogeneousInput(f"not homogeneous: {self}")
        return self.order()

    def vanishes_at_origin(self) -> bool:
        return all(
            c.num.eval_rational([0] * self.ctx.arity).is_zero() for c in self.coeffs.values()
        )

    def map_coeffs(self, fn) -> "KForm":
        return KForm(self.ctx, self.degree, {i: fn(c) for i, c in self.coeffs.items()})

    # -- linear structure ----------------------------------------------------

    def _check(self, other: "KForm") -> None:
        if self.ctx != other.ctx:
            raise ContextMismatch("forms over different contexts")
        if self.degree != other.degree:
            raise ValueError(f"degree mismatch: {self.degree} vs {other.degree}")

    def __add__(self, other: "KForm") -> "KForm":
        self._check(other)
        out = dict(self.coeffs)
        for idx, c in other.coeffs.items():
            out[idx] = out.get(idx, RatFn.zero(self.ctx)) + c
        return KForm(self.ctx, self.degree, out)

    def __neg__(self) -> "KForm":
        return self.map_coeffs(lambda c: -c)

    def __sub__(self, other: "KForm") -> "KForm":
        return self + (-other)

    def __mul__(self, other) -> "KForm":
        scalar = RatFn.lift(other, self.ctx)
        return self.map_coeffs(lambda c: c * scalar)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "KForm":
        scalar = RatFn.lift(other, self.ctx)
        return self.map_coeffs(lambda c: c / scalar)

    def __eq__(self, other):
        if not isinstance(other, KForm):
            return NotImplemented
        return (
            self.ctx == other.ctx and self.degree == other.degree and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.ctx, self.degree, tuple(sorted(self.coeffs.items()))))

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        if self.degree == 0:
            return str(self.coeffs[()])
        names = self.ctx.geometric
        parts = []
        for idx in sorted(self.coeffs):
            c = self.coeffs[idx]
            wedge = "^".join(f"d{names[i]}" for i in idx)
            cs = str(c)
            if len(c.num.terms) > 1 or not c.is_polynomial():
                cs = f"({cs})"
            parts.append(f"{cs}*{wedge}" if cs != "1" else wedge)
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"KForm({self})"


class VecField:
    """Polynomial/rational vector field, one component per geometric variable."""

    __slots__ = ("ctx", "components")

    def __init__(self, ctx: VarCtx, components: Sequence["RatFn | Poly | Scalar"]):
        if len(components) != ctx.arity:
            raise ValueError("need one component per geometric variable")
        self.ctx = ctx
        self.components = tuple(RatFn.lift(c, ctx) for c in components)

    @classmethod
    def radial(cls, ctx: VarCtx) -> "VecField":
        return cls(ctx, [Poly.var(ctx, i) for i in range(ctx.arity)])

    @classmethod
    def partial(cls, ctx: VarCtx, index: int) -> "VecField":
        return cls(ctx, [1 if i == index else 0 for i in range(ctx.arity)])

    def __str__(self) -> str:
        names = self.ctx.geometric
        return " + ".join(f"({c})*d/d{n}" for c, n in zip(self.components, names))


class PolyMap:
    """Map between geometric spaces given by one image per target variable.

    Parameters must agree between source and target contexts; they pass
    through unchanged.
    """

    __slots__ = ("source", "target", "images")

    def __init__(self, source: VarCtx, target: VarCtx, images: Sequence["RatFn | Poly | Scalar"]):
        if len(images) != target.arity:
            raise ValueError("need one image per target geometric variable")
        if source.parameters != target.parameters:
            raise ContextMismatch("parameters must pass through unchanged")
        self.source = source
        self.target = target
        self.images = tuple(RatFn.lift(c, source) for c in images)
        for im in self.images:
            if im.ctx != source:
                raise ContextMismatch("images must live over the source context")

    def compose(self, inner: "PolyMap") -> "PolyMap":
        """self o inner (inner first)."""
        if inner.target != self.source:
            raise ContextMismatch("composition contexts do not chain")
        sub = {i: inner.images[i] for i in range(inner.target.arity)}
        return PolyMap(inner.source, self.target, [im.subs(sub) for im in self.images])

    def __str__(self) -> str:
        return "(" + ", ".join(str(im) for im in self.images) + ")"


# -- operations --------------------------------------------------------------


def exterior_derivative(omega: KForm) -> KForm:
    """d(omega); quotient rule applied exactly on rational coefficients."""
    ctx = omega.ctx
    if omega.degree >= MAX_FORM_DEGREE or omega.degree >= ctx.arity:
        raise TopDegreeError(
            f"d of a {omega.degree}-form exceeds top degree in arity {ctx.arity}"
        )
    out: dict[Index, RatFn] = {}
    for idx, c in omega.coeffs.items():
        for i in range(ctx.arity):
            dc = c.partial(i)
            if not dc:
                continue
            new_idx, sign = _sort_index((i,) + idx)
            if sign == 0:
                continue
            term = dc if sign > 0 else -dc
            out[new_idx] = out.get(new_idx, RatFn.zero(ctx)) + term
    return KForm(ctx, omega.degree + 1, out)


def wedge(a: KForm, b: KForm) -> KForm:
    """Exterior product; graded anticommutative by construction."""
    if a.ctx != b.ctx:
        raise ContextMismatch("wedge over different contexts")
    deg = a.degree + b.degree
    if deg > a.ctx.arity or deg > MAX_FORM_DEGREE:
        raise TopDegreeError(f"wedge degree {deg} exceeds arity/top degree")
    ctx = a.ctx
    out: dict[Index, RatFn] = {}
    for ia, ca in a.coeffs.items():
        for ib, cb in b.coeffs.items():
            idx, sign = _sort_index(ia + ib)
            if sign == 0:
                continue
            term = ca * cb
            if sign < 0:
                term = -term
            out[idx] = out.get(idx, RatFn.zero(ctx)) + term
    return KForm(ctx, deg, out)


def interior_product(X: VecField, omega: KForm) -> KForm:
    """i_X(omega), degree k-1."""
    if X.ctx != omega.ctx:
        raise ContextMismatch("interior product over different contexts")
    if omega.degree == 0:
        raise ValueError("interior product needs a form of degree >= 1")
    ctx = omega.ctx
    out: dict[Index, RatFn] = {}
    for idx, c in omega.coeffs.items():
        for pos, i in enumerate(idx):
            comp = X.components[i]
            if not comp:
                continue
            rest = idx[:pos] + idx[pos + 1 :]
            term = comp * c
            if pos % 2:
                term = -term
            out[rest] = out.get(rest, RatFn.zero(ctx)) + term
    return KForm(ctx, omega.degree - 1, out)


def lie_derivative(X: VecField, omega: KForm) -> KForm:
    """Cartan formula: L_X = i_X d + d i_X."""
    if omega.degree == omega.ctx.arity:
        # d(omega) is identically zero one degree above the top
        a = KForm.zero(omega.ctx, omega.degree)
    else:
        a = interior_product(X, exterior_derivative(omega))
    if omega.degree == 0:
        return a
    return a + exterior_derivative(interior_product(X, omega))


def is_integrable(omega: KForm) -> bool:
    """Frobenius test: omega ^ d(omega) == 0, exactly."""
    if omega.degree != 1:
        raise ValueError("integrability is defined for 1-forms")
    if omega.ctx.arity <= 2:
        return True
    return wedge(omega, exterior_derivative(omega)).is_zero()


def initial_part(omega: KForm) -> tuple[int, KForm]:
    """Lowest-degree homogeneous part (nu, omega_nu) of a polynomial form."""
    polys = omega.polynomial_coeffs()
    if omega.is_zero():
        raise ValueError("zero form has no initial part")
    nu = min(p.order() for p in polys.values() if not p.is_zero())
    init = {idx: RatFn.from_poly(p.component(nu)) for idx, p in polys.items()}
    return nu, KForm(omega.ctx, omega.degree, init)


def is_dicritical(omega: KForm) -> bool:
    """True iff the homogeneous 1-form annihilates the radial field."""
    if omega.degree != 1:
        raise ValueError("dicriticity is defined for 1-forms")
    if not omega.is_homogeneous():
        raise NonHomogeneousInput("dicriticity needs a homogeneous form")
    return interior_product(VecField.radial(omega.ctx), omega).is_zero()


def pullback(omega: KForm, phi: PolyMap) -> KForm:
    """phi^*(omega); functorial and commutes with d."""
    if phi.target != omega.ctx:
        raise ContextMismatch("pullback: map target must match form context")
    src = phi.source
    sub = {i: phi.images[i] for i in range(phi.target.arity)}
    # differentials of the coordinate images, as 1-forms on the source
    d_images = [
        KForm(src, 1, {(j,): im.partial(j) for j in range(src.arity) if im.partial(j)})
        for im in phi.images
    ]
    result = KForm.zero(src, omega.degree)
    for idx, c in omega.coeffs.items():
        pulled = KForm.scalar(src, c.subs(sub))
        acc: KForm | None = None
        for i in idx:
            acc = d_images[i] if acc is None else wedge(acc, d_images[i])
        term = pulled if acc is None else wedge(pulled, acc)
        if term.degree != omega.degree:
            raise AssertionError("pullback degree bookkeeping broke")
        result = result + term
    return result


def restrict(omega: KForm, fixed: Mapping[int, Scalar], new_ctx: VarCtx) -> KForm:
    """Restrict a form to the affine slice {x_i = value} for i in `fixed`.

    Remaining geometric variables map, in order, onto `new_ctx`; the
    differentials of the fixed variables are killed.
    """
    keep = [i for i in range(omega.ctx.arity) if i not in fixed]
    if len(keep) != new_ctx.arity:
        raise ValueError("new context arity must match the kept variables")
    images: list[RatFn | Poly] = [None] * omega.ctx.arity  # type: ignore[list-item]
    for pos, i in enumerate(keep):
        images[i] = Poly.var(new_ctx, pos)
    for i, v in fixed.items():
        images[i] = Poly.const(new_ctx, v)
    phi = PolyMap(new_ctx, omega.ctx, images)
    return pullback(omega, phi)
