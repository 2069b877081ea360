"""Exception types shared across the planning pipeline.

Everything raised on purpose derives from PlanningError so the CLI and the
HTTP service can map failures to structured reports without catching bare
Exception.
"""

from __future__ import annotations


class PlanningError(Exception):
    """Base class for all errors raised by this package."""


class InvalidGeometryError(PlanningError):
    """Floorplan or primitive geometry failed validation."""


class FloorplanFormatError(PlanningError):
    """A floorplan document could not be parsed."""


class ConfigError(PlanningError):
    """A request, sampling config, or constraint set is inconsistent."""


class PlacementInfeasibleError(PlanningError):
    """A viewpoint lies outside the floorplan or on its boundary."""


class InfeasibleSamplingError(PlanningError):
    """Sampling produced no candidate sites under the given clearances."""


class VisibilityBuildError(PlanningError):
    """Visibility matrix construction failed for a specific candidate."""


class OracleMisuseError(PlanningError):
    """A brute-force oracle was invoked outside its intended size range."""


class PipelineInconsistencyError(PlanningError):
    """Independent re-verification of a solver result disagreed with it."""
