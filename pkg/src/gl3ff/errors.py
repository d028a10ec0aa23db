"""Exception hierarchy shared across the package."""

__all__ = [
    "Gl3ffError",
    "PoleError",
    "BranchAmbiguityError",
    "SizeError",
    "TwistError",
    "CardinalityError",
    "CoincidingRootsError",
    "ConvergenceError",
    "DegenerateJacobianError",
    "SpecTransformError",
]


class Gl3ffError(Exception):
    """Base class for all package-specific errors."""


class PoleError(Gl3ffError, ValueError):
    """A rational kernel was evaluated at (or too close to) one of its poles."""

    def __init__(self, func, x, y, detail=""):
        self.func = func
        self.args_xy = (x, y)
        msg = f"pole of {func!r} at x={x!r}, y={y!r}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class BranchAmbiguityError(Gl3ffError, ValueError):
    """A logarithm factor sat too close to zero for a consistent branch choice."""


class SizeError(Gl3ffError, ValueError):
    """A chain or parameter-set size exceeds the dense-matrix cap."""


class TwistError(Gl3ffError, ValueError):
    """An operation requiring an untwisted chain was called with a twist."""


class CardinalityError(Gl3ffError, ValueError):
    """A form-factor request violates the cardinality selection rule."""


class CoincidingRootsError(Gl3ffError, ValueError):
    """Root sets share an element where pairwise-disjoint sets are required."""


class ConvergenceError(Gl3ffError, RuntimeError):
    """An iterative solve failed to reach tolerance; carries the best residual."""

    def __init__(self, best_residual, msg=""):
        self.best_residual = best_residual
        super().__init__(msg or f"no convergence; best residual {best_residual:.3e}")


class DegenerateJacobianError(Gl3ffError, RuntimeError):
    """The Newton Jacobian is numerically singular; carries a condition estimate."""

    def __init__(self, cond_estimate, msg=""):
        self.cond_estimate = cond_estimate
        super().__init__(msg or f"degenerate Jacobian; condition estimate {cond_estimate:.3e}")


class SpecTransformError(Gl3ffError, ValueError):
    """No chain in the implemented family realizes a requested representation swap."""
