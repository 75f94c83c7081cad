"""Circumscribed polygons, Dowker tables and the reports built from them."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Self

from pydantic import BaseModel, ConfigDict, model_validator

from ..errors import InsufficientTableError
from .geometry import DEFAULT_TOLERANCE, ConvexPolygon, Tolerance


class Strategy(str, Enum):
    """How a circumscribed polygon was found."""

    EXACT = "exact"  # flush DP plus one slack side over every edge
    DENSE = "dense"  # flush-only band refinement for dense approximations
    IDENTITY = "identity"  # n >= edge count, K itself


@dataclass
class CircumscribeResult:
    """A minimum-area convex n-gon circumscribed about a disk."""

    polygon: ConvexPolygon
    flush_edges: list[int | None]  # per side of the polygon: contained edge of K, or None
    slack_side_used: bool = False
    strategy: Strategy = Strategy.EXACT

    @property
    def n(self) -> int:
        return self.polygon.size

    @property
    def area_value(self) -> float:
        return self.polygon.area_value

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "area": self.area_value,
            "flush_edges": self.flush_edges,
            "slack_side_used": self.slack_side_used,
            "strategy": self.strategy.value,
        }


class DowkerTable(BaseModel):
    """The sequence ``n -> A_K(n)`` for one disk, ``n = n_min .. n_max``."""

    model_config = ConfigDict(frozen=True)

    disk_id: str
    n_min: int = 3
    n_max: int
    values: tuple[float, ...]
    disk_area: float
    tol: Tolerance = DEFAULT_TOLERANCE
    edge_count: int | None = None
    strategy: Strategy = Strategy.EXACT

    @model_validator(mode="after")
    def _consistent(self) -> Self:
        if self.n_min != 3:
            raise ValueError(f"tables start at n = 3, got n_min={self.n_min}")
        if len(self.values) != self.n_max - self.n_min + 1:
            raise ValueError(
                f"expected {self.n_max - self.n_min + 1} values for n = 3..{self.n_max}, "
                f"got {len(self.values)}"
            )
        slack = self.tol.allowance(self.disk_area, *self.values)
        for n, value in zip(self.ns, self.values, strict=True):
            if value < self.disk_area - slack:
                raise ValueError(f"A({n}) = {value} is below the disk area {self.disk_area}")
        for n, (a, b) in enumerate(zip(self.values, self.values[1:], strict=False), start=self.n_min):
            if b > a + slack:
                raise ValueError(f"table increases between n = {n} and n = {n + 1}")
        return self

    @property
    def ns(self) -> range:
        return range(self.n_min, self.n_max + 1)

    def value(self, n: int) -> float:
        """``A_K(n)``.

        Raises:
            InsufficientTableError: if ``n`` is outside the table.
        """
        if not self.n_min <= n <= self.n_max:
            raise InsufficientTableError(
                f"table {self.disk_id!r} covers n = {self.n_min}..{self.n_max}, asked for {n}"
            )
        return self.values[n - self.n_min]

    def covers(self, lo: int, hi: int) -> bool:
        return self.n_min <= lo and hi <= self.n_max


class DowkerProperty(str, Enum):
    """Convexity property checked on a Dowker table."""

    ALPHA_DOWKER = "alpha"
    WEAK_ALPHA_DOWKER = "weak"
    LOG_DOWKER = "log"
    WEAK_LOG_DOWKER = "weak-log"

    @property
    def is_weak(self) -> bool:
        return self in (DowkerProperty.WEAK_ALPHA_DOWKER, DowkerProperty.WEAK_LOG_DOWKER)


@dataclass(frozen=True)
class Margin:
    """Slack of one inequality; ``witness`` lists the side counts involved."""

    witness: tuple[int, ...]
    value: float


@dataclass
class DowkerReport:
    """Verdict of a (weak) alpha- or log-Dowker check."""

    property: DowkerProperty
    alpha: float
    verdict: bool
    margins: list[Margin]
    worst_margin: float
    threshold: float
    warnings: list[str] = field(default_factory=list)
    truncated_at: int | None = None

    @property
    def worst(self) -> Margin | None:
        """The margin entry achieving ``worst_margin``."""
        if not self.margins:
            return None
        return min(self.margins, key=lambda m: m.value)

    def to_dict(self) -> dict[str, Any]:
        worst = self.worst
        return {
            "property": self.property.value,
            "alpha": self.alpha,
            "verdict": self.verdict,
            "worst_margin": self.worst_margin,
            "worst_witness": list(worst.witness) if worst else None,
            "threshold": self.threshold,
            "truncated_at": self.truncated_at,
            "warnings": self.warnings,
            "margins": [{"witness": list(m.witness), "margin": m.value} for m in self.margins],
        }


class Conclusion(str, Enum):
    """Outcome of the honeycomb pipeline; NOT_CERTIFIED is not a disproof."""

    CERTIFIED_2ALPHA_HONEYCOMB = "CERTIFIED_2ALPHA_HONEYCOMB"
    NOT_CERTIFIED = "NOT_CERTIFIED"


@dataclass
class HoneycombCertificate:
    """Result of the isoperimetrix / Dowker table / weak check pipeline."""

    norm_id: str
    alpha: float
    iso_table: DowkerTable
    weak_report: DowkerReport
    conclusion: Conclusion
    hexagon: ConvexPolygon | None
    bound_value: float

    @property
    def certified(self) -> bool:
        return self.conclusion is Conclusion.CERTIFIED_2ALPHA_HONEYCOMB

    def to_dict(self) -> dict[str, Any]:
        return {
            "norm_id": self.norm_id,
            "alpha": self.alpha,
            "conclusion": self.conclusion.value,
            "bound_value": self.bound_value,
            "hexagon": [[p.x, p.y] for p in self.hexagon.vertices] if self.hexagon else None,
            "iso_table": {
                "n_max": self.iso_table.n_max,
                "edge_count": self.iso_table.edge_count,
                "disk_area": self.iso_table.disk_area,
                "values": list(self.iso_table.values),
            },
            "weak_report": self.weak_report.to_dict(),
        }


@dataclass
class StabilityResult:
    """Hausdorff distance of a rescaled unit disk from the Euclidean disk."""

    distance: float
    certified: bool
    epsilon0: float
    raw_distance: float  # before rescaling
    scale: float  # factor making the mean support value 1

    def to_dict(self) -> dict[str, Any]:
        return {
            "distance": self.distance,
            "certified": self.certified,
            "epsilon0": self.epsilon0,
            "raw_distance": self.raw_distance,
            "scale": self.scale,
        }


@dataclass(frozen=True)
class TailBound:
    """Table-free sufficient condition for the weak 1/2-Dowker inequality of a regular 2k-gon."""

    k: int
    a6: float
    lhs_floor: float
    holds: bool


@dataclass
class SweepRow:
    """One regular 2k-gon of a sweep."""

    k: int
    verdict: bool
    worst_margin: float
    witness: tuple[int, ...] | None
    tail_holds: bool
