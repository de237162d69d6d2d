"""Request/response models of the compute service.

The same models travel over HTTP (FastAPI endpoints) and in process
(the CLI's default dispatch), so both clients speak one schema.
"""

from __future__ import annotations

from typing import Literal, Optional, Union

from pydantic import BaseModel, Field

from ..config import (
    DEFAULT_DT,
    DEFAULT_FP_GRID,
    DEFAULT_HORIZON,
    DEFAULT_N_POINTS,
    DEFAULT_N_TRAJ,
    DEFAULT_PULLBACK_HORIZON,
    DEFAULT_SEED,
)

CouplingName = Literal["tent", "trig", "sine4"]


class ModelParams(BaseModel):
    alpha: float = Field(gt=0.0, description="dissipation rate")
    b: float = Field(description="shear")
    sigma: float = Field(ge=0.0, description="noise amplitude")


class LyapunovRequest(ModelParams):
    tol: float = Field(default=1e-7, gt=0.0, description="zero-classification band")


class LyapunovResponse(ModelParams):
    lambda1: float
    lambda2: float
    error: float
    method: str
    regime: str
    sigma0: float


class C0Response(BaseModel):
    c0: float
    tol: float


class BifurcationRequest(BaseModel):
    alphas: list[float] = Field(min_length=1)
    b: float


class CurvePoint(BaseModel):
    alpha: float
    sigma0: float


class BifurcationResponse(BaseModel):
    b: float
    points: list[CurvePoint]


class McSettings(BaseModel):
    T: float = Field(default=DEFAULT_HORIZON, gt=0.0)
    dt: float = Field(default=DEFAULT_DT, gt=0.0)
    n_traj: int = Field(default=DEFAULT_N_TRAJ, ge=2)
    seed: int = Field(default=DEFAULT_SEED, ge=0)
    coupling: CouplingName = "tent"


class SweepRequest(BaseModel):
    alphas: list[float] = Field(min_length=1)
    bs: list[float] = Field(min_length=1)
    sigmas: list[float] = Field(min_length=1)
    mode: Literal["analytic", "monte_carlo", "both"] = "analytic"
    seed: int = Field(default=DEFAULT_SEED, ge=0)
    T: float = Field(default=1000.0, gt=0.0)
    dt: float = Field(default=DEFAULT_DT, gt=0.0)
    n_traj: int = Field(default=DEFAULT_N_TRAJ, ge=2)
    coupling: CouplingName = "tent"


class SweepRowModel(BaseModel):
    alpha: float
    b: float
    sigma: float
    lambda1: Optional[float]
    lambda2: Optional[float]
    regime: str
    sigma0: Optional[float]
    method: str
    error: Union[float, str, None]


class SweepResponse(BaseModel):
    rows: list[SweepRowModel]


class SimulateRequest(ModelParams, McSettings):
    estimator: Literal["tangent", "angle", "both"] = "both"


class EstimateModel(BaseModel):
    value: float
    stderr: float
    n_samples: int
    horizon: float
    dt: float


class SimulateResponse(BaseModel):
    lambda1: Optional[EstimateModel] = None
    lambda_sum: Optional[EstimateModel] = None
    angle_average: Optional[EstimateModel] = None
    reference_lambda1: Optional[float] = None


class FpRequest(ModelParams):
    n: int = Field(default=DEFAULT_FP_GRID, ge=200)


class FpResponse(BaseModel):
    n: int
    flux: float
    lambda1: float
    phi: list[float]
    p: list[float]


class AttractorRequest(ModelParams):
    coupling: CouplingName = "tent"
    n_points: int = Field(default=DEFAULT_N_POINTS, ge=1)
    T: float = Field(default=DEFAULT_PULLBACK_HORIZON, gt=0.0)
    dt: float = Field(default=DEFAULT_DT, gt=0.0)
    seed: int = Field(default=DEFAULT_SEED, ge=0)


class AttractorResponse(BaseModel):
    final_diameter: float
    times: list[float]
    diameters: list[float]
    points: list[list[float]]


class ErrorPayload(BaseModel):
    error: str
    detail: str
