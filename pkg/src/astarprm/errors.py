"""Exception types raised by the planning library."""


class PlanningError(Exception):
    """Base class for all library errors."""


class MapFormatError(PlanningError):
    """A map file could not be parsed."""


class MapGenerationError(PlanningError):
    """The procedural generator could not produce a connected map."""


class SamplingExhaustedError(PlanningError):
    """Free space is too small to draw the requested samples."""


class DegenerateQueryError(PlanningError):
    """Start and target coincide where a positive heuristic range is required."""


class GeometryError(PlanningError):
    """An angle or curvature is undefined for the given points."""


class ConfigError(PlanningError):
    """An experiment configuration is invalid or its output cannot be written."""
