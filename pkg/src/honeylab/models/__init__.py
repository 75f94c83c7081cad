"""Data models."""

from .dowker import (
    CircumscribeResult,
    Conclusion,
    DowkerProperty,
    DowkerReport,
    DowkerTable,
    HoneycombCertificate,
    Margin,
    StabilityResult,
    Strategy,
    SweepRow,
    TailBound,
)
from .geometry import DEFAULT_TOLERANCE, ConvexPolygon, NormDisk, Point2, Tolerance
from .run_config import Command, RunConfig, ShapeKind, TilingProto
from .tiling import (
    AverageSeries,
    CellGroup,
    ChakerianGap,
    CustomPrototype,
    NormalityConstants,
    PatchCheck,
    Proto,
    StatKind,
    SteinhausRun,
    TilingPatch,
    WindowShape,
)

__all__ = [
    "DEFAULT_TOLERANCE",
    "AverageSeries",
    "CellGroup",
    "ChakerianGap",
    "CircumscribeResult",
    "Command",
    "Conclusion",
    "ConvexPolygon",
    "CustomPrototype",
    "DowkerProperty",
    "DowkerReport",
    "DowkerTable",
    "HoneycombCertificate",
    "Margin",
    "NormDisk",
    "NormalityConstants",
    "PatchCheck",
    "Point2",
    "Proto",
    "RunConfig",
    "ShapeKind",
    "StabilityResult",
    "StatKind",
    "SteinhausRun",
    "Strategy",
    "SweepRow",
    "TailBound",
    "TilingPatch",
    "TilingProto",
    "Tolerance",
    "WindowShape",
]
