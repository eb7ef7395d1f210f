"""HTTP service exposing the entropy pipelines.

Thin FastAPI layer over the same functions the CLI calls.  Requests and
responses are plain pydantic models; no state is kept between calls apart
from an optional on-disk matrix cache configured at app creation.
"""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .cache import CacheStore
from .entanglement import fourier_spectrum
from .errors import (BudgetExceededError, ConfigError, SingularSplitError,
                     UnphysicalStateError)
from .fock import enumerate_full_basis
from .models import Model, ModelParams
from .pipeline import (build_hamiltonian, entropy_profile, oracle_profile,
                       oracle_quench, quench_series)
from .splitting import CutBC
from .states import decompose

_MODEL_NAMES = {
    "massless": Model.MASSLESS_FB,
    "massive": Model.MASSIVE_FB,
    "sine_gordon": Model.SINE_GORDON,
}


class ModelSpec(BaseModel):
    type: str = "massless"
    L: float = 1.0
    m: float = 0.0
    lam: float = Field(0.0, alias="lambda")
    M_soliton: float = 0.0

    model_config = {"populate_by_name": True}

    def to_params(self) -> ModelParams:
        if self.type not in _MODEL_NAMES:
            raise ConfigError(f"unknown model type {self.type!r}")
        return ModelParams(_MODEL_NAMES[self.type], L=self.L, m=self.m,
                           lam=self.lam, M_soliton=self.M_soliton)


class SpectrumRequest(BaseModel):
    model: ModelSpec = ModelSpec()
    s_F: int = 12


class SpectrumResponse(BaseModel):
    energies: list[float]


class ProfileRequest(BaseModel):
    model: ModelSpec = ModelSpec()
    s_F: int = 12
    cuts: list[float] | None = None
    cut_bc: str = "neumann"
    temperature: float | None = None
    alphas: list[float] = []
    negativity: bool = False
    budget: int = 64
    allow_incommensurate: bool = False


class ProfileRow(BaseModel):
    cut_fraction: float
    S_vN: float
    S_renyi: dict[float, float]
    mutual_info: float
    log_negativity: float
    iso_defect: float


class ProfileResponse(BaseModel):
    rows: list[ProfileRow]


class QuenchRequest(BaseModel):
    pre: ModelSpec
    post: ModelSpec
    s_F: int = 12
    cut: float = 0.5
    t_max: float = 1.0
    steps: int = 21
    cut_bc: str = "neumann"
    budget: int = 64
    allow_incommensurate: bool = False


class SeriesRow(BaseModel):
    t: float
    S_vN: float
    iso_defect: float


class SeriesResponse(BaseModel):
    rows: list[SeriesRow]


class OracleProfileRequest(BaseModel):
    m: float = 0.0
    cuts: list[float]
    K: int = 200
    L: float = 1.0
    temperature: float = 0.0
    alphas: list[float] = []


class OracleQuenchRequest(BaseModel):
    m0: float
    m: float
    cut: float = 0.5
    t_max: float = 1.0
    steps: int = 21
    K: int = 200
    L: float = 1.0
    T0: float = 0.0


class FourierRequest(BaseModel):
    series: list[tuple[float, float]]


class FourierRow(BaseModel):
    omega: float
    amplitude: float


class FourierResponse(BaseModel):
    rows: list[FourierRow]


def _profile_rows(records) -> ProfileResponse:
    return ProfileResponse(rows=[
        ProfileRow(cut_fraction=r.cut_position, S_vN=r.S_vN,
                   S_renyi=dict(r.S_renyi),
                   mutual_info=r.mutual_information,
                   log_negativity=r.log_negativity,
                   iso_defect=r.iso_defect)
        for r in records])


def create_app(cache_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="htent",
                  description="Entanglement entropy from truncated "
                              "Hamiltonians, with a free-field covariance "
                              "oracle for cross-checks.")
    cache = CacheStore(cache_dir) if cache_dir else None

    def guard(fn, *args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ConfigError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        except BudgetExceededError as exc:
            raise HTTPException(status_code=507, detail=str(exc))
        except (SingularSplitError, UnphysicalStateError,
                np.linalg.LinAlgError, ArithmeticError) as exc:
            raise HTTPException(status_code=500, detail=str(exc))

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/v1/spectrum", response_model=SpectrumResponse)
    def spectrum(req: SpectrumRequest) -> SpectrumResponse:
        def work():
            basis = enumerate_full_basis(req.s_F)
            dec = decompose(build_hamiltonian(basis, req.model.to_params()))
            return SpectrumResponse(energies=list(dec.eigenvalues))
        return guard(work)

    @app.post("/v1/entropy-profile", response_model=ProfileResponse)
    def profile(req: ProfileRequest) -> ProfileResponse:
        def work():
            cuts = req.cuts or [n / req.s_F for n in range(1, req.s_F)]
            recs = entropy_profile(
                req.model.to_params(), req.s_F, cuts, T=req.temperature,
                alphas=tuple(req.alphas), bc=CutBC(req.cut_bc),
                negativity=req.negativity, budget=req.budget, cache=cache,
                allow_incommensurate=req.allow_incommensurate)
            return _profile_rows(recs)
        return guard(work)

    @app.post("/v1/quench", response_model=SeriesResponse)
    def quench(req: QuenchRequest) -> SeriesResponse:
        def work():
            times = np.linspace(0.0, req.t_max, req.steps)
            series = quench_series(
                req.pre.to_params(), req.post.to_params(), req.s_F, req.cut,
                times, bc=CutBC(req.cut_bc), budget=req.budget, cache=cache,
                allow_incommensurate=req.allow_incommensurate)
            return SeriesResponse(rows=[
                SeriesRow(t=t, S_vN=s, iso_defect=d) for t, s, d in series])
        return guard(work)

    @app.post("/v1/oracle/entropy-profile", response_model=ProfileResponse)
    def oracle_prof(req: OracleProfileRequest) -> ProfileResponse:
        def work():
            recs = oracle_profile(req.m, req.cuts, K=req.K, L=req.L,
                                  T=req.temperature, alphas=tuple(req.alphas))
            return _profile_rows(recs)
        return guard(work)

    @app.post("/v1/oracle/quench", response_model=SeriesResponse)
    def oracle_q(req: OracleQuenchRequest) -> SeriesResponse:
        def work():
            times = np.linspace(0.0, req.t_max, req.steps)
            series = oracle_quench(req.m0, req.m, req.cut, times,
                                   K=req.K, L=req.L, T0=req.T0)
            return SeriesResponse(rows=[
                SeriesRow(t=t, S_vN=s, iso_defect=d) for t, s, d in series])
        return guard(work)

    @app.post("/v1/fourier", response_model=FourierResponse)
    def fourier(req: FourierRequest) -> FourierResponse:
        def work():
            spec = fourier_spectrum(req.series)
            return FourierResponse(rows=[
                FourierRow(omega=w, amplitude=a) for w, a in spec])
        return guard(work)

    return app
