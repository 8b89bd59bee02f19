"""Blow-up charts, strict transforms, the multiplicity dichotomy, weighted
substitutions, and divisor point extraction."""

import random
from fractions import Fraction

import pytest

from folia.blowup import (
    blowup_chart,
    divisor_singular_points,
    strict_transform,
    weighted_substitute,
)
from folia.exactmath import Poly, RatFn
from folia.forms import KForm, PolyMap, is_dicritical, is_integrable, pullback
from folia.suites import conic_pencil_form, random_homogeneous_integrable


class TestCharts:
    def test_surface_chart(self, ctx2):
        x1, x2 = ctx2.gens()
        ch = blowup_chart(2, 0, ctx2)
        assert [im.as_poly() for im in ch.map.images] == [x1, x1 * x2]
        assert ch.divisor_var == 0

    def test_space_charts(self, ctx3):
        g = ctx3.gens()
        ch0 = blowup_chart(3, 0, ctx3)
        assert [im.as_poly() for im in ch0.map.images] == [g[0], g[0] * g[1], g[0] * g[2]]
        ch2 = blowup_chart(3, 2, ctx3)
        assert [im.as_poly() for im in ch2.map.images] == [g[2] * g[0], g[2] * g[1], g[2]]

    def test_bad_index(self):
        with pytest.raises(ValueError):
            blowup_chart(3, 3)
        with pytest.raises(ValueError):
            blowup_chart(4, 0)


class TestStrictTransform:
    def test_cone_two_jet(self, ctx3):
        # x3(x1 dx2 - x2 dx1): divisor multiplicity 3, residual x3 dx2
        g = ctx3.gens()
        w = KForm.one_form(ctx3, [-g[2] * g[1], g[2] * g[0], 0])
        st = strict_transform(w, blowup_chart(3, 0, ctx3))
        assert st.m == 3
        assert st.form == KForm.one_form(ctx3, [0, g[2], 0])
        assert not st.divisor_invariant

    def test_dicritical_cubic(self, ctx3):
        om3 = conic_pencil_form(ctx3)
        st = strict_transform(om3, blowup_chart(3, 2, ctx3))
        assert st.m == 4  # nu + 1 for a dicritical cubic

    def test_linear_nondicritical(self, ctx2):
        x1 = ctx2.gens()[0]
        st = strict_transform(KForm.one_form(ctx2, [x1, 0]), blowup_chart(2, 0, ctx2))
        assert st.m == 1
        assert st.form == KForm.dx(ctx2, 0)
        assert st.divisor_invariant

    def test_multiplicity_dichotomy_random(self):
        rng = random.Random(31)
        for i in range(30):
            dic = i % 2 == 0
            w = random_homogeneous_integrable(rng, dic)
            nu = w.homogeneous_degree()
            st = strict_transform(w, blowup_chart(3, rng.randrange(3), w.ctx))
            assert st.m == (nu + 1 if dic else nu)
            assert (st.m == nu + 1) == is_dicritical(w)

    def test_transform_keeps_integrability(self):
        rng = random.Random(32)
        for _ in range(6):
            w = random_homogeneous_integrable(rng, rng.random() < 0.5)
            st = strict_transform(w, blowup_chart(3, 0, w.ctx))
            assert is_integrable(st.form)

    def test_dicritical_divisor_not_invariant(self):
        rng = random.Random(33)
        for _ in range(6):
            w = random_homogeneous_integrable(rng, True)
            st = strict_transform(w, blowup_chart(3, rng.randrange(3), w.ctx))
            assert not st.divisor_invariant

    def test_chart_compatibility(self, ctx3):
        # transforms in two charts agree on the overlap: under the rational
        # transition T with E0 after T = E1, pulling back x1^m st0 yields
        # (y1 y2)^m T*st0 = y2^m st1, i.e. T*st0 = st1 / y1^m
        rng = random.Random(34)
        for _ in range(5):
            w = random_homogeneous_integrable(rng, rng.random() < 0.5)
            ctx = w.ctx
            g = ctx.gens()
            st0 = strict_transform(w, blowup_chart(3, 0, ctx))
            st1 = strict_transform(w, blowup_chart(3, 1, ctx))
            assert st0.m == st1.m
            y1 = RatFn.from_poly(g[0])
            T = PolyMap(ctx, ctx, [g[0] * g[1], 1 / y1, RatFn(g[2], g[0])])
            moved = pullback(st0.form, T)
            scale = RatFn(Poly.one(ctx), g[0] ** st0.m)
            assert moved == st1.form * scale

    def test_nonsingular_flagged(self, ctx2):
        x1 = ctx2.gens()[0]
        st = strict_transform(KForm.one_form(ctx2, [1 + x1, 0]), blowup_chart(2, 0, ctx2))
        assert not st.origin_singular


class TestWeightedSubstitute:
    def test_linear_weight_matches_blowup(self, ctx2):
        x1 = ctx2.gens()[0]
        m, res = weighted_substitute(KForm.one_form(ctx2, [x1, 0]), 0, 1, 1)
        s, x2 = res.ctx.gens()
        assert m == 1
        assert res == KForm.one_form(res.ctx, [s * x2, s**2])

    def test_dx1_weight_two(self, ctx2):
        # pullback x2^2 ds + 2 s x2 dx2 strips one power of x2
        m, res = weighted_substitute(KForm.dx(ctx2, 0), 0, 2, 1)
        s, x2 = res.ctx.gens()
        assert m == 1
        assert res == KForm.one_form(res.ctx, [x2, 2 * s])

    def test_unfolding_model_resonant_jet(self, ctx2):
        # x1 = s x2^3 on (x1 - x2^3)dx1 + x1 x2^2 dx2, then move to the
        # divisor point s = 2/3: the 1-jet is proportional to 6u dv - v du
        x1, x2 = ctx2.gens()
        theta = KForm.one_form(ctx2, [x1 - x2**3, x1 * x2**2])
        m, res = weighted_substitute(theta, 0, 3, 1)
        assert m == 5
        ctx = res.ctx
        s, v = ctx.gens()
        shift = PolyMap(ctx, ctx, [s + Fraction(2, 3), v])
        local = pullback(res, shift)
        jet = {idx: c.as_poly().component(1) for idx, c in local.coeffs.items()}
        # ds coefficient ~ -(1/3) v, dv coefficient ~ 2 u: ratio 6u dv - v du
        assert jet[(0,)] == Fraction(-1, 3) * v
        assert jet[(1,)] == 2 * s

    def test_nonmonomial_rejected(self, ctx2):
        with pytest.raises(ValueError):
            weighted_substitute(KForm.dx(ctx2, 0), 0, 0, 1)


class TestDivisorPoints:
    def test_no_rational_points_incomplete(self, ctx2):
        # x1 dx1 + x2 dx2: restriction factor 1 + t^2 has no rational roots
        x1, x2 = ctx2.gens()
        st = strict_transform(KForm.one_form(ctx2, [x1, x2]), blowup_chart(2, 0, ctx2))
        pts = divisor_singular_points(st)
        assert pts.points == [] and not pts.complete

    def test_single_origin_point(self, ctx2):
        x1, x2 = ctx2.gens()
        st = strict_transform(KForm.one_form(ctx2, [x2, x1]), blowup_chart(2, 0, ctx2))
        pts = divisor_singular_points(st)
        assert [(p.coordinate, p.multiplicity) for p in pts.points] == [(0, 1)]
        assert pts.complete

    def test_nowhere_singular_divisor(self, ctx2):
        x1 = ctx2.gens()[0]
        st = strict_transform(KForm.one_form(ctx2, [x1, 0]), blowup_chart(2, 0, ctx2))
        pts = divisor_singular_points(st)
        assert pts.points == [] and pts.complete

    def test_mixed_rational_roots(self, ctx2):
        # engineered restriction with roots t = 1 and t = -3/2
        x1, x2 = ctx2.gens()
        w = KForm.one_form(ctx2, [(x2 - x1) * (2 * x2 + 3 * x1), 0])
        st = strict_transform(w, blowup_chart(2, 0, ctx2))
        pts = divisor_singular_points(st)
        coords = sorted(p.coordinate for p in pts.points)
        assert Fraction(1) in coords and Fraction(-3, 2) in coords


class TestIteratedBlowup:
    def test_airy_two_step_resolution_points(self, ctx2):
        # the nilpotent mu=6 model resolves through two point blow-ups; the
        # second divisor carries three singular points: the corner (at the
        # other chart's origin) plus two more at t = 0 and t = -1
        from folia.suites import airy_affine_form

        theta = airy_affine_form(ctx2)
        st1 = strict_transform(theta, blowup_chart(2, 1, ctx2))
        first = divisor_singular_points(st1)
        assert [(p.coordinate, p.multiplicity) for p in first.points] == [(0, 2)]
        for chart in (0, 1):
            st2 = strict_transform(st1.form, blowup_chart(2, chart, ctx2))
            assert st2.m == 2
            pts = divisor_singular_points(st2)
            assert pts.complete
            assert sorted(p.coordinate for p in pts.points) == [-1, 0]
