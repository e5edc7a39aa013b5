"""Exception hierarchy shared by all modules."""


class PullbackError(Exception):
    """Base class; the CLI maps any subclass to exit code 1."""


class DegenerateInput(PullbackError):
    pass


class OutOfModel(PullbackError):
    pass


class DomainError(PullbackError):
    pass


class ConvergenceFailure(PullbackError):
    pass


class UndefinedAt(PullbackError):
    pass


class BranchPole(PullbackError):
    def __init__(self, msg, orbit=None):
        super().__init__(msg)
        self.orbit = orbit


class ContinuationFailure(PullbackError):
    pass


class UnsupportedPortrait(PullbackError):
    pass


class PreconditionFailed(PullbackError):
    pass


class UnknownDegree(PullbackError):
    """A decision depends on a local degree the portrait leaves unspecified."""


class InconsistentOrbit(PullbackError):
    def __init__(self, msg, index=None):
        super().__init__(msg)
        self.index = index
