"""FastAPI service exposing the exact-arithmetic toolkit.

Every endpoint is stateless and pure: requests carry expressions as
canonical strings, responses carry exact rational strings.  Domain errors
(parse failures, violated mathematical preconditions) map to HTTP 400 with
a plain-text detail; mathematical negatives (a failed membership or budget
check) are ordinary 200 responses whose verdict field is false.
"""

from __future__ import annotations

from fractions import Fraction

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..degree2 import (
    HomogForm,
    NotInFamily,
    chi_contains,
    dulac_build,
    family_extract,
    mu_table,
    singular_budget_check,
)
from ..blowup import blowup_chart, divisor_singular_points, strict_transform
from ..errors import FoliaError
from ..germ import (
    analyze_germ,
    first_integral_search,
    integrating_factor_search,
    milnor_number,
)
from ..parsing import ParseError, parse_form, render_form, render_ratfn
from ..suites import SUITES, run_suite
from . import schemas as S

TOOL = "folia"

app = FastAPI(
    title="folia",
    version=__version__,
    description="Exact analysis of polynomial 1-form foliation germs: "
    "classification, Milnor numbers, blow-ups, series searches, and an "
    "identity verification corpus.",
)


def _fail(exc: Exception) -> HTTPException:
    return HTTPException(status_code=400, detail=str(exc))


def _rat_str(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _parse(form: str, params: list[str], min_arity: int = 2):
    try:
        return parse_form(form, params, min_arity=min_arity)
    except (ParseError, FoliaError, ValueError, ZeroDivisionError) as exc:
        raise _fail(exc)


def _parse_scalar_poly(text: str, params: list[str], ctx=None):
    w = parse_form(text, params, ctx=ctx)
    if w.degree != 0:
        raise ValueError(f"expected a scalar expression, got a 1-form: {text!r}")
    return w.coeff(()).as_poly()


@app.get("/health", response_model=S.HealthResponse)
def health() -> S.HealthResponse:
    return S.HealthResponse(status="ok", tool=TOOL, version=__version__)


@app.get("/suites", response_model=S.SuitesResponse)
def suites() -> S.SuitesResponse:
    return S.SuitesResponse(suites=sorted(SUITES) + ["all"])


@app.post("/analyze", response_model=S.AnalyzeResponse)
def analyze(req: S.FormRequest) -> S.AnalyzeResponse:
    omega = _parse(req.form, req.params)
    try:
        report = analyze_germ(omega)
    except (FoliaError, ValueError) as exc:
        raise _fail(exc)
    quad = None
    if report.quad is not None:
        quad = S.QuadInfo(
            case=report.quad.case.value,
            q=str(report.quad.q) if report.quad.q is not None else None,
            delta=_rat_str(report.quad.delta) if report.quad.delta is not None else None,
        )
    milnor = None
    if report.milnor is not None:
        milnor = str(report.milnor)
    return S.AnalyzeResponse(
        tool=TOOL,
        version=__version__,
        input=req,
        nu=report.nu,
        initial=render_form(report.initial),
        dicritical=report.dicritical,
        jet=S.JetInfo(tag=report.jet.tag.value, kupka=report.jet.kupka),
        quad=quad,
        milnor=milnor,
    )


@app.post("/milnor", response_model=S.MilnorResponse)
def milnor(req: S.FormRequest) -> S.MilnorResponse:
    omega = _parse(req.form, req.params)
    try:
        mu = milnor_number(omega)
    except (FoliaError, ValueError) as exc:
        raise _fail(exc)
    return S.MilnorResponse(tool=TOOL, version=__version__, input=req, milnor=str(mu))


@app.post("/blowup", response_model=S.BlowupResponse)
def blowup(req: S.BlowupRequest) -> S.BlowupResponse:
    omega = _parse(req.form, req.params, min_arity=req.dim)
    try:
        if omega.ctx.arity != req.dim:
            raise ValueError(
                f"form uses {omega.ctx.arity} variables but --dim is {req.dim}"
            )
        chart = blowup_chart(req.dim, req.chart, omega.ctx)
        st = strict_transform(omega, chart)
        points = complete = None
        if req.dim == 2:
            dp = divisor_singular_points(st)
            points = [
                S.DivisorPointInfo(coordinate=_rat_str(p.coordinate), multiplicity=p.multiplicity)
                for p in dp.points
            ]
            complete = dp.complete
    except (FoliaError, ValueError) as exc:
        raise _fail(exc)
    return S.BlowupResponse(
        tool=TOOL,
        version=__version__,
        input=req,
        m=st.m,
        form=render_form(st.form),
        divisor_invariant=st.divisor_invariant,
        origin_singular=st.origin_singular,
        divisor_points=points,
        divisor_points_complete=complete,
    )


def _run_search(req: S.SearchRequest, which: str) -> S.SearchResponse:
    omega = _parse(req.form, req.params)
    try:
        fn = first_integral_search if which == "integral" else integrating_factor_search
        res = fn(omega, req.order)
    except (FoliaError, ValueError) as exc:
        raise _fail(exc)
    factors = None
    if res.factor_data is not None:
        factors = [S.FactorInfo(k=f.k, l=f.l) for f in res.factor_data]
    return S.SearchResponse(
        tool=TOOL,
        version=__version__,
        input=req,
        order=res.order,
        basis=[str(p) for p in res.basis],
        exclusions=[str(p) for p in res.exclusions],
        obstruction_degree=res.obstruction_degree,
        certified_formal=res.certified_formal,
        factors=factors,
    )


@app.post("/search-integral", response_model=S.SearchResponse)
def search_integral(req: S.SearchRequest) -> S.SearchResponse:
    return _run_search(req, "integral")


@app.post("/search-factor", response_model=S.SearchResponse)
def search_factor(req: S.SearchRequest) -> S.SearchResponse:
    return _run_search(req, "factor")


def _family_payload(req: S.FormRequest):
    omega = _parse(req.form, req.params)
    try:
        data = family_extract(omega)
    except (FoliaError, ValueError) as exc:
        raise _fail(exc)
    if isinstance(data, NotInFamily):
        return data, None
    coeffs = S.FamilyCoefficients(
        alpha=render_ratfn(data.alpha),
        beta=render_ratfn(data.beta),
        a=render_ratfn(data.a),
        b=render_ratfn(data.b),
        P=render_ratfn(data.P),
        Q=render_ratfn(data.Q),
        gamma=_rat_str(data.gamma),
        R=_rat_str(data.R),
    )
    return data, coeffs


@app.post("/family", response_model=S.FamilyResponse)
def family(req: S.FormRequest) -> S.FamilyResponse:
    data, coeffs = _family_payload(req)
    if coeffs is None:
        return S.FamilyResponse(
            tool=TOOL, version=__version__, input=req, in_family=False, reason=data.reason
        )
    return S.FamilyResponse(
        tool=TOOL,
        version=__version__,
        input=req,
        in_family=True,
        family=data.family,
        coefficients=coeffs,
    )


@app.post("/mu-table", response_model=S.MuTableResponse)
def mu_table_endpoint(req: S.FormRequest) -> S.MuTableResponse:
    data, coeffs = _family_payload(req)
    if coeffs is None:
        return S.MuTableResponse(
            tool=TOOL, version=__version__, input=req, in_family=False, reason=data.reason
        )
    try:
        mu = mu_table(data)
    except (FoliaError, ValueError) as exc:
        raise _fail(exc)
    return S.MuTableResponse(
        tool=TOOL,
        version=__version__,
        input=req,
        in_family=True,
        family=data.family,
        coefficients=coeffs,
        mu=mu,
    )


@app.post("/chi", response_model=S.ChiResponse)
def chi(req: S.ChiRequest) -> S.ChiResponse:
    try:
        value = Fraction(req.value)
    except (ValueError, ZeroDivisionError) as exc:
        raise _fail(exc)
    return S.ChiResponse(
        tool=TOOL, version=__version__, value=_rat_str(value), member=chi_contains(value)
    )


@app.post("/dulac", response_model=S.DulacResponse)
def dulac(req: S.DulacRequest) -> S.DulacResponse:
    from ..parsing import infer_context

    try:
        joined = " ".join(req.components.values())
        ctx = infer_context(joined, req.params, min_arity=2)
        comps = {k: _parse_scalar_poly(v, req.params, ctx) for k, v in req.components.items()}
        built = dulac_build(req.type, comps, [Fraction(r) for r in req.residues])
    except (ParseError, FoliaError, ValueError, ZeroDivisionError) as exc:
        raise _fail(exc)
    return S.DulacResponse(
        tool=TOOL,
        version=__version__,
        input=req,
        eta=str(built.eta),
        omega=render_form(built.omega),
        closed=True,
        affine_factor=str(built.affine_factor) if built.affine_factor is not None else None,
    )


@app.post("/budget", response_model=S.BudgetResponse)
def budget(req: S.BudgetRequest) -> S.BudgetResponse:
    omega = _parse(req.form, req.params, min_arity=3)
    try:
        h = HomogForm.make(omega)
        pts = [(p.chart, tuple(Fraction(c) for c in p.coords)) for p in req.points]
        result = singular_budget_check(h, pts)
    except (FoliaError, ValueError, ZeroDivisionError) as exc:
        raise _fail(exc)
    return S.BudgetResponse(
        tool=TOOL,
        version=__version__,
        input=req,
        nu=h.nu,
        points=[
            S.BudgetPointInfo(chart=p.chart, coords=[_rat_str(c) for c in p.coords], mu=p.mu)
            for p in result.points
        ],
        total=result.total,
        expected=result.expected,
        satisfied=result.satisfied,
    )


@app.post("/verify-suite", response_model=S.VerifySuiteResponse)
def verify_suite(req: S.VerifySuiteRequest) -> S.VerifySuiteResponse:
    try:
        items = run_suite(req.name)
    except ValueError as exc:
        raise _fail(exc)
    infos = [S.SuiteItemInfo(id=i.id, passed=i.passed, detail=i.detail) for i in items]
    return S.VerifySuiteResponse(
        tool=TOOL,
        version=__version__,
        name=req.name,
        items=infos,
        passed=all(i.passed for i in infos),
    )
