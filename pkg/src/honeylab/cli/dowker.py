"""Dowker-check, honeycomb, stability and sweep commands."""

import logging

from ..config import Settings
from ..geometry import read_norm, read_polygon
from ..models import DowkerProperty, DowkerTable, RunConfig
from ..services import (
    CircumscribeService,
    DowkerService,
    check_alpha_dowker,
    check_weak_alpha_dowker,
    estimate_min_weak_alpha,
    stability_sandwich,
)
from .output import fmt, header, info, table, verdict
from .reporting import read_table_csv, write_csv, write_json, write_polygon_file
from .svg import render_polygons

logger = logging.getLogger(__name__)


def _load_table(config: RunConfig, settings: Settings) -> DowkerTable:
    if config.table is not None:
        return read_table_csv(config.table, settings.tolerance())
    assert config.input is not None
    K = read_polygon(config.input, settings.tolerance())
    service = CircumscribeService.from_settings(settings)
    return service.dowker_table(K, config.n_max, disk_id=config.input.stem)


def run_dowker_check(config: RunConfig, settings: Settings) -> int:
    """Check a (weak) alpha- or log-Dowker property of a table.

    Returns:
        Exit code (0 if the property holds, 1 if not)
    """
    dowker = _load_table(config, settings)
    prop = config.dowker_property
    alpha = 0.0 if prop in (DowkerProperty.LOG_DOWKER, DowkerProperty.WEAK_LOG_DOWKER) else config.alpha
    report = check_weak_alpha_dowker(dowker, alpha) if prop.is_weak else check_alpha_dowker(dowker, alpha)

    worst = report.worst
    witness = f" at {worst.witness}" if worst else ""
    verdict(report.verdict, f"{prop.value} alpha={alpha:g}: worst margin {fmt(report.worst_margin)}{witness}")
    if report.truncated_at is not None:
        info(f"checked up to n = {report.truncated_at} only")
    result = report.to_dict()
    if prop.is_weak:
        result["min_weak_alpha"] = estimate_min_weak_alpha(dowker)
        info(f"smallest passing alpha: {result['min_weak_alpha']}")

    if config.json_out:
        write_json(config.json_out, config, result)
    if config.csv:
        rows = [(*m.witness, m.value) for m in report.margins]
        columns = ("m", "six", "n", "margin") if prop.is_weak else ("n_minus", "n", "n_plus", "margin")
        write_csv(config.csv, config, columns, rows)
    return 0 if report.verdict else 1


def run_honeycomb(config: RunConfig, settings: Settings) -> int:
    """Certify the (2 alpha)-honeycomb property of the norm in ``config.input``.

    Returns:
        Exit code (0 when certified, 1 when not certified)
    """
    assert config.input is not None
    M = read_norm(config.input, settings.tolerance(), settings.symmetry_rel)
    cert = DowkerService.from_settings(settings).honeycomb_certificate(
        M, config.alpha, norm_id=config.input.stem
    )
    report = cert.weak_report
    verdict(cert.certified, f"{cert.conclusion.value} (alpha = {config.alpha:g})")
    info(f"isoperimetrix edges: {cert.iso_table.edge_count}, A(6) = {fmt(cert.iso_table.value(6))}")
    info(f"worst weak margin {fmt(report.worst_margin)} at {report.worst.witness if report.worst else None}")
    if cert.certified:
        info(f"bound on the powered perimeter average: {fmt(cert.bound_value)}")

    if config.json_out:
        write_json(config.json_out, config, cert.to_dict())
    if config.out and cert.hexagon is not None:
        write_polygon_file(config.out, config, cert.hexagon, norm=config.input.stem)
    if config.svg and cert.hexagon is not None:
        render_polygons(
            config.svg,
            [(M.disk, "M"), (cert.hexagon, "optimal hexagon")],
            title=f"{config.input.stem}: {cert.conclusion.value}",
            reproducible=config.reproducible,
        )
    return 0 if cert.certified else 1


def run_stability(config: RunConfig, settings: Settings) -> int:
    """Hausdorff gate around the Euclidean disk.

    Returns:
        Exit code (0 when inside the certified ball, 1 otherwise)
    """
    assert config.input is not None
    M = read_norm(config.input, settings.tolerance(), settings.symmetry_rel)
    result = DowkerService.from_settings(settings).check_stability_gate(M)
    eps = result.distance
    verdict(
        result.certified,
        f"distance {fmt(eps)} {'<=' if result.certified else '>'} eps0 {fmt(result.epsilon0)}",
    )
    payload = result.to_dict()
    if eps < 1:
        bounds = {n: stability_sandwich(eps, n) for n in (5, 6, 7)}
        table(("n", "lower", "upper"), [(n, lo, hi) for n, (lo, hi) in bounds.items()])
        payload["sandwich"] = {str(n): list(b) for n, b in bounds.items()}
    if config.json_out:
        write_json(config.json_out, config, payload)
    return 0 if result.certified else 1


def run_sweep(config: RunConfig, settings: Settings) -> int:
    """Weak alpha-Dowker verdicts for the regular 2k-gons.

    Returns:
        Exit code (0 for success)
    """
    rows = DowkerService.from_settings(settings).regular_gon_sweep(
        config.k_min, config.k_max, config.alpha
    )
    header(f"Regular 2k-gons, k = {config.k_min}..{config.k_max}, alpha = {config.alpha:g}")
    printable = [
        (
            r.k,
            "pass" if r.verdict else "FAIL",
            r.worst_margin,
            f"{r.witness[0]},{r.witness[2]}" if r.witness else "",
            "yes" if r.tail_holds else "no",
        )
        for r in rows
    ]
    table(("k", "verdict", "worst margin", "m,n", "tail bound"), printable)
    failing = [r.k for r in rows if not r.verdict]
    info(f"failing k: {failing or 'none'}")

    if config.csv:
        write_csv(
            config.csv,
            config,
            ("k", "verdict", "worst_margin", "witness_m", "witness_n", "tail_holds"),
            [
                (
                    r.k,
                    r.verdict,
                    r.worst_margin,
                    r.witness[0] if r.witness else None,
                    r.witness[2] if r.witness else None,
                    r.tail_holds,
                )
                for r in rows
            ],
        )
    if config.json_out:
        write_json(
            config.json_out,
            config,
            {
                "rows": [
                    {
                        "k": r.k,
                        "verdict": r.verdict,
                        "worst_margin": r.worst_margin,
                        "witness": list(r.witness) if r.witness else None,
                        "tail_holds": r.tail_holds,
                    }
                    for r in rows
                ],
                "failing": failing,
            },
        )
    return 0
