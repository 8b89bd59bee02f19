"""Local analysis: jets, quadratic ranks, Milnor numbers (with an
independent resultant oracle), the preparation normal form, unfolding
arithmetic, truncated searches, and the center test."""

import random
from fractions import Fraction

import pytest
from folia.errors import (
    ParameterError,
    SingularityError,
    TruncationError,
)
from folia.exactmath import Poly, RatFn, VarCtx
from folia.forms import KForm, exterior_derivative as d, is_integrable, wedge
from oracles import sympy_resultant_mu

from folia.germ import (
    INFINITE,
    JetTag,
    LorayData,
    QuadRank,
    Verdict,
    analyze_germ,
    deployment_outcomes,
    first_integral_search,
    integrating_factor_search,
    intersection_multiplicity,
    is_center_to_order,
    loray_form,
    milnor_number,
    one_jet_class,
    prop24_case,
)


# -- jets ------------------------------------------------------------------------


class TestOneJet:
    def test_nilpotent(self, ctx2):
        x1 = ctx2.gens()[0]
        jc = one_jet_class(KForm.one_form(ctx2, [x1, 0]))
        assert jc.tag == JetTag.NILPOTENT and not jc.kupka

    def test_non_nilpotent(self, ctx2):
        x1, x2 = ctx2.gens()
        jc = one_jet_class(KForm.one_form(ctx2, [x2, x1]))
        assert jc.tag == JetTag.NON_NILPOTENT and not jc.kupka

    def test_kupka_bit_independent(self, ctx2):
        # x1 dx2: the dual-field matrix [[-1,0],[0,0]] is not nilpotent,
        # while d(omega)(0) = dx1^dx2 != 0, so both bits are recorded
        x1 = ctx2.gens()[0]
        jc = one_jet_class(KForm.one_form(ctx2, [Poly.zero(ctx2), x1]))
        assert jc.kupka and jc.tag == JetTag.NON_NILPOTENT

    def test_zero_jet(self, ctx2):
        x1, x2 = ctx2.gens()
        jc = one_jet_class(KForm.one_form(ctx2, [x2**2, x1 * x2]))
        assert jc.tag == JetTag.ZERO

    def test_three_variables_uses_slice(self, ctx3):
        g = ctx3.gens()
        w = KForm.one_form(ctx3, [g[0] + g[2], 0, g[0]])
        jc = one_jet_class(w)
        assert jc.tag == JetTag.NILPOTENT

    def test_arity_cap(self):
        ctx4 = VarCtx(("x1", "x2", "x3", "x4"))
        with pytest.raises(ValueError):
            one_jet_class(KForm.dx(ctx4, 0))


class TestProp24:
    def test_rank2(self, ctx3):
        g = ctx3.gens()
        w = KForm.one_form(ctx3, [g[0] + g[2], 0, g[0]])
        case = prop24_case(w)
        assert case.case == QuadRank.RANK2

    def test_rank3(self, ctx3):
        g = ctx3.gens()
        w = d(KForm.scalar(ctx3, g[0] ** 2 / 2 + g[2] * g[1] + g[2] ** 2))
        assert prop24_case(w).case == QuadRank.RANK3

    def test_rank1_with_shift(self, ctx3):
        g = ctx3.gens()
        u = g[0] + 2 * g[2]
        w = u * d(KForm.scalar(ctx3, u))
        case = prop24_case(w)
        assert case.case == QuadRank.RANK1 and case.delta == 2

    def test_kupka(self, ctx3):
        g = ctx3.gens()
        # x1 dx1 + x1 dx3 + x3 dx1 + x3 dx3 = (x1+x3)d(x1+x3) is rank 1;
        # add a Kupka twist instead: d(omega)(0) = dx1^dx3
        w = KForm.one_form(ctx3, [g[0], 0, g[0] + g[2]])
        assert is_integrable(w)
        assert prop24_case(w).case == QuadRank.KUPKA

    def test_restriction_precondition(self, ctx3):
        g = ctx3.gens()
        w = KForm.one_form(ctx3, [g[1], g[0], 0])
        with pytest.raises(ValueError):
            prop24_case(w)


# -- Milnor numbers ----------------------------------------------------------------


class TestMilnor:
    def test_unfolding_example(self, ctx2):
        x1, x2 = ctx2.gens()
        assert milnor_number(KForm.one_form(ctx2, [x1 - x2**3, x1 * x2**2])) == 5

    def test_closed_example(self, ctx2):
        x1, x2 = ctx2.gens()
        assert milnor_number(KForm.one_form(ctx2, [2 * x1 + x2**2, 2 * x1 * x2])) == 3

    def test_airy_example(self, ctx2):
        x1, x2 = ctx2.gens()
        assert milnor_number(KForm.one_form(ctx2, [x1 + x2**2 - x1**2 * x2, x1**3])) == 6

    def test_infinite(self, ctx2):
        x1 = ctx2.gens()[0]
        assert milnor_number(KForm.one_form(ctx2, [x1, 0])) == INFINITE
        assert milnor_number(KForm.one_form(ctx2, [x1, x1 * (1 + x1)])) == INFINITE

    def test_nonsingular_is_zero(self, ctx2):
        x1, x2 = ctx2.gens()
        assert milnor_number(KForm.one_form(ctx2, [1 + x1, x2])) == 0

    def test_parameters_rejected(self):
        ctx = VarCtx(("x1", "x2"), ("b",))
        x1 = ctx.gens()[0]
        b = ctx.param_gens()[0]
        with pytest.raises(ParameterError):
            milnor_number(KForm.one_form(ctx, [b * x1, x1]))

    def test_fulton_axioms_metamorphic(self, ctx2):
        rng = random.Random(21)
        x1, x2 = ctx2.gens()

        def rand_poly():
            return (
                rng.randint(-2, 2) * x1
                + rng.randint(-2, 2) * x2
                + rng.randint(-2, 2) * x1 * x2
                + rng.randint(-2, 2) * x1**2
                + rng.randint(-2, 2) * x2**2
                + rng.randint(-2, 2) * x2**3
            )

        done = 0
        while done < 12:
            a, b, h = rand_poly(), rand_poly(), rand_poly()
            ia = intersection_multiplicity(a, b)
            if ia == INFINITE:
                continue
            # symmetry and invariance under the shear b -> b + h a
            assert intersection_multiplicity(b, a) == ia
            assert intersection_multiplicity(a, b + h * a) == ia
            # additivity on products
            ic = intersection_multiplicity(a, h)
            if ic != INFINITE:
                assert intersection_multiplicity(a, b * h) == ia + ic
            done += 1

    def test_resultant_oracle_on_random_pairs(self, ctx2):
        rng = random.Random(22)
        x1, x2 = ctx2.gens()
        from folia.exactmath import poly_gcd

        done = 0
        while done < 30:
            def rand_poly():
                p = Poly.zero(ctx2)
                for i in range(5):
                    for j in range(5 - i):
                        if rng.random() < 0.4:
                            p = p + Poly.monomial(ctx2, (i, j), rng.randint(-3, 3))
                return p

            a, b = rand_poly(), rand_poly()
            if a.is_zero() or b.is_zero():
                continue
            # strip constants; require singular at 0 and a finite, coprime pair
            if a.component(0) or b.component(0):
                continue
            if not poly_gcd(a, b).is_constant():
                continue
            mine = intersection_multiplicity(a, b)
            if mine == INFINITE:
                continue
            oracle = sympy_resultant_mu(a, b, rng)
            if oracle is None:
                continue
            assert mine == oracle, f"{a} ; {b}: fulton {mine} vs resultant {oracle}"
            done += 1


# -- normal form and unfoldings -------------------------------------------------------


class TestLoray:
    def test_milnor_grid(self, ctx2):
        x2 = ctx2.gens()[1]
        for k in (2, 3, 4):
            for p in (0, 1, 2):
                l1 = [Fraction(0)] * p + [Fraction(1)]
                data = LorayData.make(x2**k, l1, [Fraction(2), Fraction(1)])
                w = loray_form(data)
                assert milnor_number(w) == k * (p + 1) - 1

    def test_integrable_in_three_variables(self):
        ctx = VarCtx(("x1", "x2", "x3"))
        g = ctx.gens()
        f = g[1] ** 2 + g[2] ** 3
        data = LorayData.make(f, [0, 1], [1])
        w = loray_form(data)
        assert is_integrable(w)

    def test_nonsingular_unit_l1(self, ctx2):
        x2 = ctx2.gens()[1]
        data = LorayData.make(x2, [1], [0])
        w = loray_form(data)
        assert not w.vanishes_at_origin()

    def test_truncation_guard(self, ctx2):
        x2 = ctx2.gens()[1]
        data = LorayData.make(x2**2, [0, 1], [0], trunc=1)
        with pytest.raises(TruncationError):
            loray_form(data, upto=10)

    def test_same_invariants_as_unfolding_example(self, ctx2):
        x1, x2 = ctx2.gens()
        model = loray_form(LorayData.make(x2**3, [0, 1], [0]))
        example = KForm.one_form(ctx2, [x1 - x2**3, x1 * x2**2])
        assert milnor_number(model) == milnor_number(example) == 5
        assert one_jet_class(model).tag == one_jet_class(example).tag == JetTag.NILPOTENT


class TestDeployment:
    def test_mu3(self):
        got = deployment_outcomes(3).cases
        assert got == ((4, 0, Verdict.FIRST_INTEGRAL), (2, 1, Verdict.INTEGRATING_FACTOR))

    def test_prime_case(self):
        assert deployment_outcomes(2).cases == ((3, 0, Verdict.FIRST_INTEGRAL),)
        assert deployment_outcomes(6).cases == ((7, 0, Verdict.FIRST_INTEGRAL),)

    def test_mu5_unresolved(self):
        got = deployment_outcomes(5).cases
        assert got == (
            (6, 0, Verdict.FIRST_INTEGRAL),
            (3, 1, Verdict.INTEGRATING_FACTOR),
            (2, 2, Verdict.UNRESOLVED),
        )

    def test_consistency_invariant(self):
        for mu in range(2, 12):
            for k, p, _ in deployment_outcomes(mu).cases:
                assert k >= 2 and k * (p + 1) == mu + 1

    def test_low_mu_rejected(self):
        with pytest.raises(ValueError):
            deployment_outcomes(1)


# -- truncated searches ---------------------------------------------------------------


class TestFirstIntegralSearch:
    def test_powers_of_the_integral(self, ctx2):
        x1, x2 = ctx2.gens()
        res = first_integral_search(KForm.one_form(ctx2, [x2, x1]), 4)
        assert any(f == x1 * x2 for f in res.basis)
        assert any(f == (x1 * x2) ** 2 for f in res.basis)

    def test_recovers_quadratic_integral(self, ctx2):
        x1, x2 = ctx2.gens()
        w = KForm.one_form(ctx2, [2 * x1 + x2**2, 2 * x1 * x2])
        res = first_integral_search(w, 3)
        assert x1**2 + x1 * x2**2 in res.basis

    def test_congruence_holds(self, ctx2):
        x1, x2 = ctx2.gens()
        w = KForm.one_form(ctx2, [x1 - x2**3, x1 * x2**2])
        res = first_integral_search(w, 6)
        nu = 1
        for f in res.basis:
            two = wedge(w, d(KForm.scalar(ctx2, f)))
            for c in two.coeffs.values():
                assert c.as_poly().truncate(nu + 6 - 1).is_zero()

    def test_linear_obstruction(self, ctx2):
        x1, x2 = ctx2.gens()
        w = KForm.one_form(ctx2, [-5 * x2, x1])
        res = first_integral_search(w, 2)
        assert res.basis == [] and res.obstruction_degree == 1

    def test_order_cap(self, ctx2):
        x1, x2 = ctx2.gens()
        with pytest.raises(TruncationError):
            first_integral_search(KForm.one_form(ctx2, [x2, x1]), 30)

    def test_parameter_limit(self):
        ctx = VarCtx(("x1", "x2"), ("a", "b"))
        x1 = ctx.gens()[0]
        with pytest.raises(ParameterError):
            first_integral_search(KForm.one_form(ctx, [x1, x1]), 3)


class TestIntegratingFactorSearch:
    def test_ramified_model_square_factor(self, ctx2):
        x1, x2 = ctx2.gens()
        theta3 = KForm.one_form(ctx2, [x1 + x2**2, -2 * x1 * x2])
        res = integrating_factor_search(theta3, 5)
        assert x1**2 in res.basis
        ks = [fs.k for fs in res.factor_data]
        assert 2 in ks

    def test_closed_form_constants(self, ctx2):
        x1, x2 = ctx2.gens()
        closed = KForm.one_form(ctx2, [2 * x1 + x2**2, 2 * x1 * x2])
        res = integrating_factor_search(closed, 3)
        assert any(f.is_constant() for f in res.basis)

    def test_forced_lemma_data(self, ctx2):
        from folia.degree2 import omega2_form

        b = Fraction(-3, 5)
        model = omega2_form(ctx2, b=b)
        res = integrating_factor_search(model, 6)
        lead = min(res.basis, key=lambda f: f.order())
        k = min(e[0] for e in lead.terms)
        assert k == 1
        # normalizing by the x1*x2^2 coefficient, the x1^2 coefficient is 2/(b+2)
        scale = lead.terms[(1, 2)]
        assert lead.terms[(2, 0)] / scale == 2 / (b + 2)

    def test_congruence_holds(self, ctx2):
        x1, x2 = ctx2.gens()
        theta3 = KForm.one_form(ctx2, [x1 + x2**2, -2 * x1 * x2])
        res = integrating_factor_search(theta3, 5)
        for f in res.basis:
            two = f * d(theta3) + wedge(theta3, d(KForm.scalar(ctx2, f)))
            for c in two.coeffs.values():
                assert c.as_poly().truncate(1 + 5 - 1).is_zero()

    def test_symbolic_parameter_search(self):
        ctx = VarCtx(("x1", "x2"), ("b",))
        from folia.degree2 import omega2_form

        b = RatFn.from_poly(ctx.param_gens()[0])
        model = omega2_form(ctx, b=b)
        res = integrating_factor_search(model, 4)
        assert res.basis
        # generic solutions substituted back satisfy the congruence
        # identically in the parameter, through the determined range
        for f in res.basis:
            two = f * d(model) + wedge(model, d(KForm.scalar(ctx, f)))
            for c in two.coeffs.values():
                assert c.as_poly().truncate(1 + 4 - 1).is_zero()


class TestCenter:
    def test_plain_center(self, ctx2):
        x1, x2 = ctx2.gens()
        ok, witness = is_center_to_order(KForm.one_form(ctx2, [x1, x2]), 4)
        assert ok and witness is not None
        q = witness.component(2)
        assert not q.is_zero()

    def test_resonant_not_center(self, ctx2):
        x1, x2 = ctx2.gens()
        ok, _ = is_center_to_order(KForm.one_form(ctx2, [-5 * x2, x1]), 2)
        assert not ok

    def test_pullback_center(self, ctx2):
        from folia.forms import PolyMap, pullback

        x1, x2 = ctx2.gens()
        w = KForm.one_form(ctx2, [x1, Poly.one(ctx2)])  # dx2 + x1 dx1, nonsingular
        sigma = PolyMap(ctx2, ctx2, [x2, x1 * x2])
        pulled = pullback(w, sigma)
        ok, witness = is_center_to_order(pulled, 3)
        assert ok

    def test_nonsingular_rejected(self, ctx2):
        x1 = ctx2.gens()[0]
        with pytest.raises(SingularityError):
            is_center_to_order(KForm.one_form(ctx2, [1 + x1, 0]), 2)


class TestAnalyze:
    def test_report_fields(self, ctx2):
        x1, x2 = ctx2.gens()
        rep = analyze_germ(KForm.one_form(ctx2, [x1 - x2**3, x1 * x2**2]))
        assert rep.nu == 1
        assert rep.jet.tag == JetTag.NILPOTENT and not rep.jet.kupka
        assert rep.milnor == 5 and not rep.dicritical

    def test_three_variable_report(self, ctx3):
        g = ctx3.gens()
        w = KForm.one_form(ctx3, [g[0] + g[2], 0, g[0]])
        rep = analyze_germ(w)
        assert rep.quad is not None and rep.quad.case == QuadRank.RANK2
        assert rep.milnor is None


class TestLorayUnfoldingSearch:
    def test_first_integral_found_at_order_k_plus_1(self, ctx2):
        # unit l1 (p = 0) forces a holomorphic first integral; the truncated
        # search sees it at order k+1
        x2 = ctx2.gens()[1]
        for k in (2, 3, 4):
            data = LorayData.make(x2**k, [1], [0])
            w = loray_form(data)
            res = first_integral_search(w, k + 1)
            assert res.basis, f"no truncated integral at order {k + 1} for k={k}"
