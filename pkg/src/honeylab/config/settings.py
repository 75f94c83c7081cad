"""Application settings."""

import os
from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings

from ..models.geometry import Tolerance


def _default_threads() -> int:
    return min(8, os.cpu_count() or 1)


class Settings(BaseSettings):
    """Application settings, overridable through ``HONEYLAB_*`` environment variables."""

    threads: int = Field(
        default_factory=_default_threads,
        ge=1,
        description="Worker cap for sweeps and R-series (HONEYLAB_THREADS)",
    )

    verbose: int = Field(
        default=0,
        description="Verbosity level (0=off, 1=INFO, 2+=DEBUG)",
    )

    log_file: Path | None = Field(
        default=None,
        description="Optional path to write logs to file",
    )

    tol_rel: float = Field(default=1e-9, gt=0, lt=1e-3)
    tol_abs: float = Field(default=1e-12, gt=0, lt=1e-3)

    disk_vertices: int = Field(
        default=4096,
        ge=8,
        description="Vertex count of polygonal approximations of smooth disks",
    )

    exact_vertex_limit: int = Field(
        default=128,
        ge=8,
        description="Largest edge count solved by the exact circumscribe DP",
    )

    band_width: int = Field(
        default=32,
        ge=1,
        description="Half-width of the refinement band used above the exact limit",
    )

    symmetry_rel: float = Field(
        default=1e-7,
        gt=0,
        description="Antipodal mismatch (relative to diameter) a unit disk may be symmetrized from",
    )

    hausdorff_grid: int = Field(default=4096, ge=16)

    model_config = {
        "env_prefix": "HONEYLAB_",
    }

    def tolerance(self) -> Tolerance:
        """Default comparison tolerance built from ``tol_rel`` and ``tol_abs``."""
        return Tolerance(rel=self.tol_rel, abs=self.tol_abs)
