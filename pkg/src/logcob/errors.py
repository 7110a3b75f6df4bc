"""Exception hierarchy shared by all logcob modules."""


class LogcobError(Exception):
    """Base class for every domain error raised by logcob."""

    @property
    def module(self) -> str:
        return type(self).__module__.rsplit(".", 1)[-1]

    @property
    def kind(self) -> str:
        return type(self).__name__
