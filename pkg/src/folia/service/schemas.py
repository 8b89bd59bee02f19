"""Pydantic request/response models for the HTTP service.

All numeric payloads are exact rational strings ("p/q", or "p" for
integers); no floating point crosses the wire.  Forms and polynomials
travel as canonical grammar-compatible strings.
"""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, Field


class FormRequest(BaseModel):
    form: str
    params: list[str] = Field(default_factory=list)


class JetInfo(BaseModel):
    tag: str
    kupka: bool


class QuadInfo(BaseModel):
    case: str
    q: Optional[str] = None
    delta: Optional[str] = None


class AnalyzeResponse(BaseModel):
    tool: str
    version: str
    input: FormRequest
    nu: int
    initial: str
    dicritical: bool
    jet: JetInfo
    quad: Optional[QuadInfo] = None
    milnor: Optional[str] = None


class MilnorResponse(BaseModel):
    tool: str
    version: str
    input: FormRequest
    milnor: str


class BlowupRequest(FormRequest):
    dim: int = 2
    chart: int = 0


class DivisorPointInfo(BaseModel):
    coordinate: str
    multiplicity: int


class BlowupResponse(BaseModel):
    tool: str
    version: str
    input: BlowupRequest
    m: int
    form: str
    divisor_invariant: bool
    origin_singular: bool
    divisor_points: Optional[list[DivisorPointInfo]] = None
    divisor_points_complete: Optional[bool] = None


class SearchRequest(FormRequest):
    order: int = 6


class FactorInfo(BaseModel):
    k: int
    l: Optional[int] = None


class SearchResponse(BaseModel):
    tool: str
    version: str
    input: SearchRequest
    order: int
    basis: list[str]
    exclusions: list[str]
    obstruction_degree: Optional[int] = None
    certified_formal: bool = False
    factors: Optional[list[FactorInfo]] = None


class FamilyCoefficients(BaseModel):
    alpha: str
    beta: str
    a: str
    b: str
    P: str
    Q: str
    gamma: str
    R: str


class FamilyResponse(BaseModel):
    tool: str
    version: str
    input: FormRequest
    in_family: bool
    reason: Optional[str] = None
    family: Optional[str] = None
    coefficients: Optional[FamilyCoefficients] = None


class MuTableResponse(FamilyResponse):
    mu: Optional[int] = None


class ChiRequest(BaseModel):
    value: str


class ChiResponse(BaseModel):
    tool: str
    version: str
    value: str
    member: bool


class DulacRequest(BaseModel):
    type: str
    components: dict[str, str]
    residues: list[str] = Field(default_factory=list)
    params: list[str] = Field(default_factory=list)


class DulacResponse(BaseModel):
    tool: str
    version: str
    input: DulacRequest
    eta: str
    omega: str
    closed: bool
    affine_factor: Optional[str] = None


class BudgetPointRequest(BaseModel):
    chart: int
    coords: list[str]


class BudgetRequest(FormRequest):
    points: list[BudgetPointRequest] = Field(default_factory=list)


class BudgetPointInfo(BaseModel):
    chart: int
    coords: list[str]
    mu: int


class BudgetResponse(BaseModel):
    tool: str
    version: str
    input: BudgetRequest
    nu: int
    points: list[BudgetPointInfo]
    total: int
    expected: int
    satisfied: bool


class VerifySuiteRequest(BaseModel):
    name: str = "all"


class SuiteItemInfo(BaseModel):
    id: str
    passed: bool
    detail: str = ""


class VerifySuiteResponse(BaseModel):
    tool: str
    version: str
    name: str
    items: list[SuiteItemInfo]
    passed: bool


class HealthResponse(BaseModel):
    status: str
    tool: str
    version: str


class SuitesResponse(BaseModel):
    suites: list[str]
