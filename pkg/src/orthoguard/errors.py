"""Exception types raised across the package."""


class OrthoguardError(Exception):
    """Base class for all errors raised by this package."""


# --- polygon validation ---

class NonOrthogonalEdge(OrthoguardError):
    """A ring edge is not axis-aligned."""


class SelfIntersection(OrthoguardError):
    """A ring touches or crosses itself."""


class HoleOutsideOrTouching(OrthoguardError):
    """A hole is not strictly inside the outer ring, or rings touch."""


class DegenerateRing(OrthoguardError):
    """Ring collapses under normalization (zero area, <4 vertices, duplicates)."""


# --- pixelation ---

class RefineTwice(OrthoguardError):
    """one_refinement applied to an already refined pixelation."""


# --- guarding models ---

class OutsidePolygon(OrthoguardError):
    """A query point lies outside the polygon."""


class ModelRequiresExplicitSets(OrthoguardError):
    """Guard/watch reduction is unavailable for this model; explicit vertex
    sets are required."""


class PointNotOnPixelationVertex(OrthoguardError):
    """An explicit guard or watch point is not a vertex of the working
    pixelation."""


class InvalidGuardSpec(OrthoguardError):
    """Guard specification mode does not fit the model (e.g. point guards
    for sliding cameras)."""


# --- solving ---

class InvalidDecomposition(OrthoguardError):
    """Tree decomposition does not cover the graph it was paired with."""


class BudgetTooLarge(OrthoguardError):
    """Projected DP state space exceeds the configured cap."""


class InstanceTooLarge(OrthoguardError):
    """Instance exceeds the exact solver's configured size caps."""


class UnknownGuardId(OrthoguardError):
    """A guard id is not present in the guard graph."""
