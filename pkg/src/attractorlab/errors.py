"""Exception hierarchy shared by all attractorlab modules."""


class AttractorLabError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(AttractorLabError):
    """Operands live in affine spaces of different dimensions."""


class NearSingular(AttractorLabError):
    """Linear part fails the invertibility gate required of group elements."""


class NonUnique(AttractorLabError):
    """Fixed-point system is consistent but has infinitely many solutions."""


class NoFixedPoint(AttractorLabError):
    """Fixed-point system is inconsistent (e.g. a pure translation)."""


class BadIndex(AttractorLabError):
    """A word letter references a generator index outside the generator set."""


class BudgetExceeded(AttractorLabError):
    """An enumeration or exploration exceeded its configured budget."""


class ConvergenceFailure(AttractorLabError):
    """An iterative eigenvalue/singular-value scheme did not converge."""


class EmptySet(AttractorLabError):
    """A set-valued argument that must be nonempty is empty."""


class Degenerate(AttractorLabError):
    """Input point cloud is degenerate (e.g. all points identical)."""


class DegenerateTestSet(AttractorLabError):
    """Interpolation test points are not affinely independent."""


class RelatorViolated(AttractorLabError):
    """A representation does not kill a relator of the presentation.

    Carries the offending relator (rendered) and the numeric residual.
    """

    def __init__(self, relator: str, residual: float):
        super().__init__(f"relator {relator!r} maps to a non-identity element "
                         f"(residual {residual:.3e})")
        self.relator = relator
        self.residual = residual


class MismatchedGroup(AttractorLabError):
    """A report was produced from a different generator set than expected."""


class ScenarioError(AttractorLabError):
    """A scenario file failed to parse or validate.

    ``key`` names the offending entry when known.
    """

    def __init__(self, message: str, key: str | None = None):
        super().__init__(message if key is None else f"{key}: {message}")
        self.key = key
