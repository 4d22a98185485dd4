"""Exception types shared across the package."""


class LatentEvoError(Exception):
    """Base class for all package errors."""


class BadConfig(LatentEvoError):
    """A parameter violates its documented precondition."""


class ConfigError(BadConfig):
    """A run configuration file or override is invalid."""


class ShapeMismatch(LatentEvoError):
    """Tensor or matrix dimensions do not line up."""


class SingularInput(LatentEvoError):
    """A matrix is rank-deficient beyond tolerance."""

    def __init__(self, column: int, message: str | None = None):
        self.column = column
        super().__init__(message or f"column {column} collapsed during QR")


class NotEvaluated(LatentEvoError):
    """An engine step was requested before fitnesses were supplied."""


class SizeMismatch(LatentEvoError):
    """Fitness values do not cover the candidate set."""


class OddPopulation(LatentEvoError):
    """Symmetric sampling requires an even population."""


class GeneratorError(LatentEvoError):
    """The generator failed to produce an image."""


class ChildFailed(GeneratorError):
    """A subprocess generator exited nonzero."""

    def __init__(self, exit_code: int, detail: str = ""):
        self.exit_code = exit_code
        msg = f"generator child exited with code {exit_code}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class Timeout(GeneratorError):
    """A subprocess generator exceeded its time limit."""


class MalformedOutput(GeneratorError):
    """A subprocess generator produced unparseable or wrong-sized output."""


class EncodeFailed(LatentEvoError):
    """Image encoding failed."""


class EvaluationFailed(GeneratorError):
    """One or more candidates failed during batch evaluation.

    ``failures`` holds (genome id, exception) pairs in candidate order.
    """

    def __init__(self, failures):
        self.failures = list(failures)
        ids = ", ".join(str(i) for i, _ in self.failures)
        super().__init__(f"evaluation failed for genome(s) {ids}")
        if self.failures:
            self.__cause__ = self.failures[0][1]


class IoError(LatentEvoError):
    """Reading or writing run artifacts failed."""


class HeterogeneousReward(LatentEvoError):
    """Reports with different reward kinds cannot be aggregated."""


class NotPopulationAlgorithm(LatentEvoError):
    """The requested statistic needs a population-based run."""
