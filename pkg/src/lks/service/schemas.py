"""Pydantic request/response models for the service and the CLI.

State payloads follow the package JSON schemas: quaternions are
[s0, v1, v2, v3] arrays, LKS states use the field names (s, l, lambda, g,
gamma, S, L, Lambda, G, Gamma), angles are radians unless a request sets
``deg`` (which applies to orbital-element inputs only).
"""

from __future__ import annotations

from typing import Literal, Union

from pydantic import BaseModel, ConfigDict, Field

Chart = Literal["elements", "cartesian", "ks", "lks"]


class ElementsState(BaseModel):
    chart: Literal["elements"] = "elements"
    a: float
    e: float
    I: float
    omega_o: float
    Omega: float
    f: float


class CartesianState(BaseModel):
    chart: Literal["cartesian"] = "cartesian"
    x_star: float = 0.0
    x: list[float] = Field(min_length=3, max_length=3)
    X_star: float | None = None
    X: list[float] = Field(min_length=3, max_length=3)


class KSState(BaseModel):
    chart: Literal["ks"] = "ks"
    v_star: float
    v: list[float] = Field(min_length=4, max_length=4)
    V_star: float
    V: list[float] = Field(min_length=4, max_length=4)


class LKSStateModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    chart: Literal["lks"] = "lks"
    s: float = 0.0
    l: float = 0.0
    lam: float = Field(0.0, alias="lambda")
    g: float = 0.0
    gamma: float = 0.0
    S: float
    L: float
    Lam: float = Field(0.0, alias="Lambda")
    G: float = 0.0
    Gam: float = Field(0.0, alias="Gamma")


AnyState = Union[ElementsState, CartesianState, KSState, LKSStateModel]


class TransformRequest(BaseModel):
    state: AnyState = Field(discriminator="chart")
    to: Chart
    frame: str = "KS3"
    gauge: str = "sqrt8S"
    mu: float = 1.0
    deg: bool = False
    manifold_tol: float = 1e-9


class Residuals(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    Gam: float | None = Field(None, serialization_alias="Gamma")
    J: float | None = None
    M0: float | None = None


class TransformResponse(BaseModel):
    chart: Chart
    state: dict
    residuals: Residuals


class ClassifyRequest(BaseModel):
    state: LKSStateModel
    tol: float = 1e-8


class EdgeModel(BaseModel):
    case: str
    surviving_combination: str
    value: float


class ClassifyResponse(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    orbit_class: str = Field(serialization_alias="class")
    undetermined: list[str]
    edge: EdgeModel | None = None


class LKParamsModel(BaseModel):
    mu: float = 1.0
    mu_p: float = 1e-3
    a_p: float = 20.0
    S: float = 0.5
    L: float = 1.0
    G: float = 0.0
    n_p: float | None = None


class EquilibriaRequest(BaseModel):
    params: LKParamsModel


class EigenvalueModel(BaseModel):
    re: float
    im: float


class EquilibriumModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    lam: float | None = Field(serialization_alias="lambda")
    Lam: float = Field(serialization_alias="Lambda")
    family: str
    stability: str
    eigenvalues: list[EigenvalueModel] | None = None
    hamiltonian_extremum: str | None = None


class EquilibriaResponse(BaseModel):
    equilibria: list[EquilibriumModel]
    critical_lambda_action: float | None


class PortraitRequest(BaseModel):
    params: LKParamsModel
    n_lambda: int = Field(181, ge=2)
    n_Lambda: int = Field(91, ge=2)


class PortraitResponse(BaseModel):
    csv: str
    separatrix_levels: list[float]
    n_rows: int


class SecularPropagateRequest(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    params: LKParamsModel
    lam0: float = Field(alias="lambda0")
    Lam0: float = Field(alias="Lambda0")
    tau_span: float
    tol: float = 1e-12
    n_samples: int = Field(512, ge=2)


class SecularPropagateResponse(BaseModel):
    csv: str
    relative_drift: float


class ValidateRequest(BaseModel):
    params: LKParamsModel | None = None
    n_samples: int = Field(200, ge=1)
    n_nodes: int = 256
    seed: int = 0
    averaging_tol: float = 1e-10
    oracle_rel_tol: float = 0.1
    with_oracle: bool = True


class ValidateResponse(BaseModel):
    max_averaging_rel_err: float
    averaging_passed: bool
    oracle_drift_rel_err: float | None
    oracle_passed: bool | None
    passed: bool


class FibreRequest(BaseModel):
    state: AnyState = Field(discriminator="chart")
    n_samples: int = Field(256, ge=8)
    mu: float = 1.0
    gauge: str = "sqrt8S"
    deg: bool = False


class PlaneSummary(BaseModel):
    l: float
    g: float
    L: float
    G: float
    semi_major: float
    semi_minor: float


class FibreResponse(BaseModel):
    csv: str
    plane03: PlaneSummary
    plane12: PlaneSummary
    plane03_rotated: PlaneSummary
    plane12_rotated: PlaneSummary
    g_sum_change: float


class ErrorBody(BaseModel):
    type: str
    message: str
    undetermined: list[str] | None = None
    surviving: dict[str, float] | None = None


class ErrorResponse(BaseModel):
    error: ErrorBody
