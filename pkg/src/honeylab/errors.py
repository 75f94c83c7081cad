"""Exception hierarchy for honeylab.

Every error a library operation raises derives from ``HoneylabError`` so the
command line can map the whole family to exit code 2.
"""


class HoneylabError(Exception):
    """Base exception for honeylab errors."""

    pass


class DegenerateInputError(HoneylabError):
    """Point set whose convex hull is a segment or a point."""

    pass


class OriginNotInteriorError(HoneylabError):
    """The origin is not strictly inside the polygon (polar duality undefined)."""

    pass


class ZeroDirectionError(HoneylabError):
    """A support function was evaluated at the zero vector."""

    pass


class InvalidNError(HoneylabError, ValueError):
    """Requested polygon side count is below three."""

    pass


class OutOfRangeError(HoneylabError, ValueError):
    """Numeric argument outside the documented range."""

    pass


class OddNError(HoneylabError, ValueError):
    """Symmetric circumscription asked for an odd number of sides."""

    pass


class InsufficientTableError(HoneylabError):
    """Dowker table does not cover the side counts a check needs."""

    pass


class EmptyWindowError(HoneylabError):
    """No tiling cell fits inside a sampling window."""

    pass


class NonTilingPrototypeError(HoneylabError):
    """Prototype cell and translation vectors do not tile the plane."""

    pass


class UnboundedKStarError(HoneylabError):
    """Edge normals span less than a half-circle, so K* is unbounded."""

    pass


class AsymmetricDiskError(HoneylabError):
    """Polygon is too far from origin-symmetric to serve as a unit disk."""

    pass


class ParseError(HoneylabError):
    """Malformed polygon JSON or Dowker table CSV."""

    pass
