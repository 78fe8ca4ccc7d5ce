from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

PointValue = Union[int, List[float]]

# ---------- INFORMES ----------


class AxiomOutcome(BaseModel):
    axiom: str
    passed: bool
    witness: Optional[Dict[str, Any]] = None
    samples: int = 0

    @model_validator(mode="after")
    def _witness_iff_failed(self):
        if self.passed == (self.witness is not None):
            raise ValueError("el testigo va presente si y solo si el axioma falla")
        return self


class NormAxiomReport(BaseModel):
    operation: str
    identity: float
    outcomes: List[AxiomOutcome]
    passed: bool


class CrispMetricReport(BaseModel):
    backend: str
    passed: bool
    outcomes: List[AxiomOutcome]
    triples_checked: int


class AxiomReport(BaseModel):
    construction: str
    tnorm: str
    tconorm: str
    outcomes: List[AxiomOutcome]
    passed: bool
    samples: int
    lambda_grid: List[float]
    large_lambda: float
    tol: float

    def failing(self) -> List[str]:
        return [o.axiom for o in self.outcomes if not o.passed]

    def outcome(self, axiom: str) -> AxiomOutcome:
        return next(o for o in self.outcomes if o.axiom == axiom)


class QuasiFamilyReport(BaseModel):
    passed: bool
    epsilons: List[float]
    eps_star: Dict[str, Optional[float]]
    identity_violations: List[Dict[str, Any]]
    triangle_violations: List[Dict[str, Any]]
    max_asymmetry: float
    triples: int


class TopologyReport(BaseModel):
    passed: bool
    checks: int
    forward_violations: List[Dict[str, Any]]
    backward_violations: List[Dict[str, Any]]


class BallOpenReport(BaseModel):
    passed: bool
    center: PointValue
    radius: float
    scale: float
    members_checked: int
    witnesses: List[Dict[str, Any]]
    members_without_witness: List[PointValue]


class ContractionWitness(BaseModel):
    a: PointValue
    b: PointValue
    lam: float
    ratio: float


class ContractionReport(BaseModel):
    k_G: float
    k_B: float
    k_Y: float
    k_overall: float
    is_nc: bool
    mode: Literal["full", "g_only"]
    witnesses: Dict[str, Optional[ContractionWitness]]
    pairs: int
    lambda_grid: List[float]

    @model_validator(mode="after")
    def _verdict(self):
        if self.is_nc != (self.k_overall < 1.0):
            raise ValueError("is_nc debe ser k_overall < 1")
        return self


class PowerRow(BaseModel):
    n: int
    measured: float
    bound: float
    passed: bool


class PowerReport(BaseModel):
    base_k: float
    tol: float
    rows: List[PowerRow]
    passed: bool


class BallPowerRow(BaseModel):
    n: int
    radius: float
    violations: int
    worst: float


class BallInvarianceReport(BaseModel):
    center: PointValue
    eps_level: float
    k: float
    r0: float
    radius: float
    members: int
    image_violations: List[Dict[str, Any]]
    power_rows: List[BallPowerRow]
    passed: bool


class TraceRow(BaseModel):
    iteration: int
    h_residual: float
    G: float
    B: float
    Y: float


class FixedPointResult(BaseModel):
    point: PointValue
    eps_level: float
    iterations: int
    converged: bool
    residual_trace: List[TraceRow]
    rate_estimate: Optional[float] = None
    final_residual: Optional[float] = None
    constants: Optional[Dict[str, float]] = None

    @model_validator(mode="after")
    def _trace_length(self):
        if len(self.residual_trace) != self.iterations:
            raise ValueError("residual_trace debe tener una fila por iteración")
        return self


class UniquenessRun(BaseModel):
    start: PointValue
    point: PointValue
    converged: bool
    iterations: int


class UniquenessReport(BaseModel):
    status: Literal["unique", "non_unique", "inconclusive"]
    runs: List[UniquenessRun]
    max_pairwise: Optional[float]
    threshold: float


class InvarianceRow(BaseModel):
    n: int
    move: float
    passed: bool


class CertificateReport(BaseModel):
    passed: bool
    ratio: Optional[float]
    k_expected: float
    tol: float
    ratio_fit_skipped: bool
    invariance: List[InvarianceRow]


# ---------- CONFIG DE EXPERIMENTO ----------


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class FiniteSpaceSpec(_Strict):
    backend: Literal["finite_table"]
    matrix: Optional[List[List[float]]] = None
    csv: Optional[Path] = None

    @model_validator(mode="after")
    def _one_source(self):
        if (self.matrix is None) == (self.csv is None):
            raise ValueError("finite_table necesita 'matrix' o 'csv' (uno de los dos)")
        return self


class EuclideanSpaceSpec(_Strict):
    backend: Literal["euclidean"]
    dimension: int = Field(ge=1)
    lower: List[float]
    upper: List[float]


class DiscreteSpaceSpec(_Strict):
    backend: Literal["discrete"]
    cardinality: int = Field(ge=1)


SpaceSpec = Union[FiniteSpaceSpec, EuclideanSpaceSpec, DiscreteSpaceSpec]


class NormPairSpec(_Strict):
    tnorm: Literal["min", "product", "lukasiewicz"] = "product"
    tconorm: Literal["max", "probsum", "boundedsum"] = "probsum"


class MetricSpec(_Strict):
    construction: Literal["induced", "table"] = "induced"
    csv: Optional[Path] = None

    @model_validator(mode="after")
    def _table_needs_csv(self):
        if self.construction == "table" and self.csv is None:
            raise ValueError("la construcción 'table' necesita 'csv'")
        return self


class MapConfig(_Strict):
    kind: Literal["affine", "table", "constant"]
    matrix: Optional[List[List[float]]] = None
    offset: Optional[List[float]] = None
    mapping: Optional[List[int]] = None
    target: Optional[PointValue] = None
    power: int = Field(default=1, ge=1)


class SamplingSpec(_Strict):
    samples: int = Field(default=1000, ge=1)
    lambda_grid: List[float] = Field(default_factory=lambda: [0.01, 0.1, 1.0, 10.0, 100.0])
    large_lambda: float = Field(default=1e8, gt=0)
    tol: float = Field(default=1e-6, ge=0)
    epsilons: List[float] = Field(default_factory=lambda: [0.1, 0.25, 0.5, 0.75, 0.9])

    @field_validator("lambda_grid")
    @classmethod
    def _positive_grid(cls, v):
        if not v or any(x <= 0 for x in v):
            raise ValueError("lambda_grid debe ser no vacía y positiva")
        return v

    @field_validator("epsilons")
    @classmethod
    def _eps_range(cls, v):
        if any(not 0 < e <= 1 for e in v):
            raise ValueError("cada epsilon debe estar en (0,1]")
        return v

    @model_validator(mode="after")
    def _large_lambda_covers_grid(self):
        if self.large_lambda < max(self.lambda_grid):
            raise ValueError(f"large_lambda={self.large_lambda} debe ser >= max(lambda_grid)")
        return self


class BallSpec(_Strict):
    center: PointValue
    eps: float = Field(gt=0, lt=1)
    lam: float = Field(gt=0)
    probes: int = Field(default=200, ge=1)


class QuasiSpec(_Strict):
    lambda_max: float = Field(default=1e6, gt=0)
    tol: float = Field(default=1e-6, gt=0)
    pairs: int = Field(default=200, ge=1)
    triples: int = Field(default=500, ge=1)
    ball: Optional[BallSpec] = None


class InvarianceSpec(_Strict):
    center: PointValue
    eps_level: float = Field(gt=0, lt=1)
    k: float = Field(gt=0, lt=1)
    radius: Optional[float] = Field(default=None, gt=0)
    n_cap: int = Field(default=3, ge=1)
    probes: int = Field(default=500, ge=1)


class ContractionSpec(_Strict):
    mode: Literal["full", "g_only"] = "full"
    n_max: int = Field(default=5, ge=2)
    tol: float = Field(default=1e-3, ge=0)
    invariance: Optional[InvarianceSpec] = None


class SolverSpec(_Strict):
    eps_level: float = Field(default=0.5, gt=0, lt=1)
    tol: float = Field(default=1e-8, gt=0)
    max_iters: int = Field(default=100, ge=1)
    lambda_report: float = Field(default=1.0, gt=0)
    acknowledge_non_nc: bool = False
    x0: PointValue
    starts: Optional[List[PointValue]] = None
    start_count: int = Field(default=10, ge=2)
    start_low: float = -50.0
    start_high: float = 50.0
    k_expected: Optional[float] = Field(default=None, gt=0, lt=1)
    certificate_tol: float = Field(default=0.02, gt=0)


class OutputSpec(_Strict):
    directory: Optional[Path] = None
    trace_format: Literal["json", "csv"] = "csv"


class ExperimentConfig(_Strict):
    seed: int = Field(ge=0)
    space: SpaceSpec = Field(discriminator="backend")
    norms: NormPairSpec = Field(default_factory=NormPairSpec)
    metric: MetricSpec = Field(default_factory=MetricSpec)
    map: Optional[MapConfig] = None
    sampling: SamplingSpec = Field(default_factory=SamplingSpec)
    quasi: QuasiSpec = Field(default_factory=QuasiSpec)
    contraction: ContractionSpec = Field(default_factory=ContractionSpec)
    solver: Optional[SolverSpec] = None
    output: OutputSpec = Field(default_factory=OutputSpec)
