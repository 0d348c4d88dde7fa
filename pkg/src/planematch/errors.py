"""Exception types raised across the library.

Every error carries a stable ``code`` string so the CLI can emit
machine-readable error objects.
"""
from __future__ import annotations


class PlaneMatchError(Exception):
    """Base class for all library errors."""

    code = "error"


class UnknownPointId(PlaneMatchError):
    code = "unknown_point_id"


class DuplicatePoint(PlaneMatchError):
    code = "duplicate_point"


class DegenerateAngle(PlaneMatchError):
    code = "degenerate_angle"


class DegeneratePolygon(PlaneMatchError):
    code = "degenerate_polygon"


class TooFewPoints(PlaneMatchError):
    code = "too_few_points"


class OddPointCount(PlaneMatchError):
    code = "odd_point_count"


class InstanceTooLarge(PlaneMatchError):
    code = "instance_too_large"


class NoPlanePerfectMatching(PlaneMatchError):
    code = "no_plane_perfect_matching"


class DisconnectedInput(PlaneMatchError):
    code = "disconnected_input"


class SeedRequired(PlaneMatchError):
    code = "seed_required"


class InvariantViolation(PlaneMatchError):
    code = "invariant_violation"


class NotSkeletonLeaf(PlaneMatchError):
    code = "not_skeleton_leaf"


class FormatError(PlaneMatchError):
    code = "format_error"


class BadParameters(PlaneMatchError):
    code = "bad_parameters"
