"""Tiling and steinhaus commands."""

import logging

from ..config import Settings
from ..geometry import disk_approximation, read_norm, read_polygon
from ..models import CustomPrototype, NormDisk, Proto, RunConfig, StatKind, TilingPatch, TilingProto
from ..services import (
    TilingService,
    build_lattice_patch,
    jittered_voronoi_patch,
    normality_constants,
    steinhaus_example_patch,
    steinhaus_schedule,
)
from .output import fmt, header, info, table, verdict
from .reporting import write_csv, write_json
from .svg import render_patch

logger = logging.getLogger(__name__)

_LATTICE = {TilingProto.SQUARE: Proto.SQUARE, TilingProto.TRIANGLE: Proto.TRIANGLE}


def _norm(config: RunConfig, settings: Settings) -> NormDisk:
    if config.norm is not None:
        return read_norm(config.norm, settings.tolerance(), settings.symmetry_rel)
    return disk_approximation(settings.disk_vertices)


def _patch(config: RunConfig, service: TilingService, M: NormDisk) -> TilingPatch:
    match config.proto:
        case TilingProto.HEX:
            return service.build_hex_tiling(M, config.R)
        case TilingProto.SQUARE | TilingProto.TRIANGLE:
            return build_lattice_patch(_LATTICE[config.proto], config.R)
        case TilingProto.VORONOI:
            return jittered_voronoi_patch(config.R, config.jitter, config.seed)
        case TilingProto.STEINHAUS:
            return steinhaus_example_patch(config.schedule)
        case TilingProto.CUSTOM:
            assert config.input is not None and config.v1 is not None and config.v2 is not None
            cell = CustomPrototype(
                polygon=read_polygon(config.input, service.tol),
                v1=config.v1,
                v2=config.v2,
                reflect=config.reflect,
            )
            return build_lattice_patch(Proto.CUSTOM, config.R, cell)


def run_tiling(config: RunConfig, settings: Settings) -> int:
    """Window averages of one statistic over a generated patch.

    Returns:
        Exit code (0 for success)
    """
    service = TilingService.from_settings(settings)
    M = _norm(config, settings)
    patch = _patch(config, service, M)
    if config.proto is TilingProto.STEINHAUS:
        radii = list(config.R_list) or [patch.window_R]
    else:
        radii = config.window_radii
    series = service.series(patch, M, config.stat, radii, alpha=config.power)

    header(f"{config.proto.value} patch: {patch.cell_count} cells, {config.stat.value}")
    table(("R", "cells", "value"), series.rows())
    result: dict = {
        "generator": patch.meta,
        "cell_count": patch.cell_count,
        "stat": config.stat.value,
        "power": series.alpha,
        "rows": [{"R": R, "count": c, "value": v} for R, c, v in series.rows()],
    }
    if config.stat in (StatKind.POWERED_PERIM, StatKind.ISO_RATIO, StatKind.LOG_PERIM):
        alpha = {
            StatKind.POWERED_PERIM: config.power / 2,
            StatKind.ISO_RATIO: 1.0,
            StatKind.LOG_PERIM: 0.0,
        }[config.stat]
        bound = service.honeycomb_bound(M, alpha)
        info(f"honeycomb bound: {fmt(bound)}")
        result["honeycomb_bound"] = bound
    if config.proto is not TilingProto.STEINHAUS:
        constants = normality_constants(patch)
        info(
            f"r_hat {fmt(constants.r_hat)}, R_hat {fmt(constants.R_hat)}, "
            f"neighbours {constants.max_neighbors} <= {fmt(constants.max_neighbors_bound)}"
        )
        result["normality"] = {
            "r_hat": constants.r_hat,
            "R_hat": constants.R_hat,
            "max_neighbors_bound": constants.max_neighbors_bound,
            "max_neighbors": constants.max_neighbors,
            "aspect": constants.aspect,
        }

    if config.csv:
        write_csv(config.csv, config, ("R", "count", "value"), series.rows())
    if config.json_out:
        write_json(config.json_out, config, result)
    if config.svg:
        render_patch(config.svg, patch, R=radii[-1], reproducible=config.reproducible)
    return 0


def run_steinhaus(config: RunConfig, settings: Settings) -> int:
    """Greedy schedule whose square-window side averages exceed ``nu``.

    Returns:
        Exit code (0 when every milestone exceeds nu)
    """
    run = steinhaus_schedule(config.nu, config.milestones)
    header(f"Schedule {''.join(run.schedule)} (nu = {config.nu:g})")
    table(("milestone", "R", "average sides"), run.rows())
    ok = all(v > config.nu for v in run.values)
    verdict(ok, f"{len(run.values)} milestones above nu = {config.nu:g}")

    if config.csv:
        write_csv(config.csv, config, ("milestone", "R", "value"), run.rows())
    if config.json_out:
        write_json(
            config.json_out,
            config,
            {"schedule": run.schedule, "radii": run.radii, "values": run.values, "nu": run.nu},
        )
    if config.svg:
        patch = steinhaus_example_patch(run.schedule)
        render_patch(config.svg, patch, R=run.radii[-1], reproducible=config.reproducible)
    return 0 if ok else 1
