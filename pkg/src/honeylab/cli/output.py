"""Colorful CLI output helpers."""

import sys
from collections.abc import Sequence

# ANSI color codes
GREEN = "\033[32m"
YELLOW = "\033[33m"
BLUE = "\033[34m"
RED = "\033[31m"
RESET = "\033[0m"
CHECK = "\u2713"  # ✓
BULLET = "\u2022"  # •
CROSS = "\u2717"  # ✗


def _supports_color(stream=sys.stdout) -> bool:
    """Check if the stream is a terminal."""
    return hasattr(stream, "isatty") and stream.isatty()


def _colorize(text: str, color: str, stream=sys.stdout) -> str:
    if _supports_color(stream):
        return f"{color}{text}{RESET}"
    return text


def fmt(value: float) -> str:
    """Numbers as printed everywhere: 12 significant digits, '.' decimal."""
    return f"{value:.12g}"


def success(message: str) -> None:
    """Print success message with green checkmark."""
    print(f"{_colorize(CHECK, GREEN)} {message}")


def info(message: str) -> None:
    """Print info message with yellow bullet."""
    print(f"{_colorize(BULLET, YELLOW)} {message}")


def header(message: str) -> None:
    """Print header message in blue."""
    print(_colorize(message, BLUE))


def error(message: str) -> None:
    """Print a one-line error with a red cross on stderr."""
    print(f"{_colorize(CROSS, RED, sys.stderr)} {message}", file=sys.stderr)


def verdict(ok: bool, message: str) -> None:
    """Checkmark for a passed check, red cross for a failed one (stdout)."""
    mark = _colorize(CHECK, GREEN) if ok else _colorize(CROSS, RED)
    print(f"{mark} {message}")


def table(headers: Sequence[str], rows: Sequence[Sequence[object]]) -> None:
    """Right-aligned plain-text table; floats use :func:`fmt`."""
    cells = [[fmt(v) if isinstance(v, float) else str(v) for v in row] for row in rows]
    widths = [max([len(h)] + [len(r[i]) for r in cells]) for i, h in enumerate(headers)]
    print("  ".join(h.rjust(w) for h, w in zip(headers, widths, strict=True)))
    for row in cells:
        print("  ".join(c.rjust(w) for c, w in zip(row, widths, strict=True)))
