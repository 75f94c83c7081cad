"""Validated configuration of one command-line run."""

from enum import Enum
from pathlib import Path
from typing import Self

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .dowker import DowkerProperty
from .tiling import StatKind


class Command(str, Enum):
    """Subcommands of the ``honeylab`` tool."""

    ISOPERIMETRIX = "isoperimetrix"
    CIRCUMSCRIBE = "circumscribe"
    DOWKER_TABLE = "dowker-table"
    DOWKER_CHECK = "dowker-check"
    HONEYCOMB = "honeycomb"
    STABILITY = "stability"
    TILING = "tiling"
    STEINHAUS = "steinhaus"
    SWEEP = "sweep"
    SHAPE = "shape"


class TilingProto(str, Enum):
    """Patch generators reachable from ``tiling --proto``."""

    HEX = "hex"
    SQUARE = "square"
    TRIANGLE = "triangle"
    STEINHAUS = "steinhaus"
    VORONOI = "voronoi"
    CUSTOM = "custom"


class ShapeKind(str, Enum):
    REGULAR = "regular"
    DISK = "disk"
    ELLIPSE = "ellipse"
    SQUARE = "square"


_STAT_ALIASES = {
    "p2": StatKind.POWERED_PERIM,
    "log": StatKind.LOG_PERIM,
    "sides": StatKind.SIDES,
    "iso": StatKind.ISO_RATIO,
}


def _check_input(path: Path | None, name: str) -> None:
    if path is not None and not path.is_file():
        raise ValueError(f"{name} file not found: {path}")


def _check_output(path: Path | None, name: str) -> None:
    if path is not None and not path.parent.resolve().is_dir():
        raise ValueError(f"{name} directory does not exist: {path.parent}")


class RunConfig(BaseModel):
    """Everything a run depends on; echoed into every output file."""

    model_config = ConfigDict(frozen=True)

    command: Command

    input: Path | None = None
    norm: Path | None = None
    table: Path | None = None

    out: Path | None = None
    csv: Path | None = None
    json_out: Path | None = None
    svg: Path | None = None

    alpha: float = Field(default=0.5, ge=0.0, le=8.0)
    n: int | None = Field(default=None, ge=3)
    n_max: int = Field(default=20, ge=6, le=512)
    R: float = Field(default=200.0, gt=0.0, le=1e4)
    seed: int = 0

    symmetric: bool = False
    dowker_property: DowkerProperty = DowkerProperty.WEAK_ALPHA_DOWKER
    proto: TilingProto = TilingProto.HEX
    stat: StatKind = StatKind.POWERED_PERIM
    power: float = Field(default=2.0, gt=0.0, le=8.0)  # exponent of POWERED_PERIM
    R_list: tuple[float, ...] = ()
    jitter: float = Field(default=0.2, ge=0.0, lt=0.5)
    schedule: tuple[str, ...] = ("A", "A", "B")
    v1: tuple[float, float] | None = None
    v2: tuple[float, float] | None = None
    reflect: bool = False

    k_min: int = Field(default=2, ge=2, le=64)
    k_max: int = Field(default=30, ge=2, le=64)
    nu: float = Field(default=8.0, gt=0.0)
    milestones: int = Field(default=3, ge=1, le=6)

    kind: ShapeKind = ShapeKind.REGULAR
    sides: int = Field(default=6, ge=3)
    a: float = Field(default=2.0, gt=0.0)
    b: float = Field(default=1.0, gt=0.0)

    tol_rel: float | None = Field(default=None, gt=0.0, lt=1e-3)
    tol_abs: float | None = Field(default=None, gt=0.0, lt=1e-3)
    reproducible: bool = False

    @field_validator("stat", mode="before")
    @classmethod
    def validate_stat(cls, v: object) -> object:
        if isinstance(v, str) and v in _STAT_ALIASES:
            return _STAT_ALIASES[v]
        return v

    @field_validator("schedule")
    @classmethod
    def validate_schedule(cls, v: tuple[str, ...]) -> tuple[str, ...]:
        steps = tuple(s.upper() for s in v)
        if not steps or any(s not in ("A", "B") for s in steps):
            raise ValueError("schedule must be a nonempty sequence of A and B steps")
        return steps

    @field_validator("R_list")
    @classmethod
    def validate_R_list(cls, v: tuple[float, ...]) -> tuple[float, ...]:
        if any(not 0 < r <= 1e4 for r in v):
            raise ValueError("window radii must lie in (0, 10000]")
        return tuple(sorted(v))

    @model_validator(mode="after")
    def validate_paths(self) -> Self:
        _check_input(self.input, "input")
        _check_input(self.norm, "norm")
        _check_input(self.table, "table")
        for name in ("out", "csv", "json_out", "svg"):
            _check_output(getattr(self, name), name)
        if self.k_min > self.k_max:
            raise ValueError(f"k_min ({self.k_min}) exceeds k_max ({self.k_max})")
        if self.tol_rel is not None and self.tol_abs is not None and self.tol_abs > self.tol_rel:
            raise ValueError("tol_abs must not exceed tol_rel")
        return self

    @model_validator(mode="after")
    def validate_required_inputs(self) -> Self:
        needs_input = {
            Command.ISOPERIMETRIX,
            Command.CIRCUMSCRIBE,
            Command.DOWKER_TABLE,
            Command.HONEYCOMB,
            Command.STABILITY,
        }
        if self.command in needs_input and self.input is None:
            raise ValueError(f"{self.command.value} requires --in")
        if self.command is Command.DOWKER_CHECK and self.table is None and self.input is None:
            raise ValueError("dowker-check requires --table or --in")
        if self.command is Command.CIRCUMSCRIBE and self.n is None:
            raise ValueError("circumscribe requires --n")
        if self.command is Command.SHAPE and self.out is None:
            raise ValueError("shape requires --out")
        if self.command is Command.TILING and self.proto is TilingProto.CUSTOM:
            if self.input is None or self.v1 is None or self.v2 is None:
                raise ValueError("tiling --proto custom requires --in, --v1 and --v2")
        return self

    @property
    def window_radii(self) -> list[float]:
        """Radii of the window-average series: ``R_list`` or ``R/4, R/2, R``."""
        if self.R_list:
            return list(self.R_list)
        return [self.R / 4, self.R / 2, self.R]
