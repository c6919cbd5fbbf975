"""Exception hierarchy shared by every module."""


class CotlarError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(CotlarError, ValueError):
    """Malformed input: bad matrix, unknown generator, invalid descriptor."""


class NonSymmetric(ConfigError):
    pass


class BadDiagonal(ConfigError):
    pass


class OffDiagonalOne(ConfigError):
    pass


class DuplicateName(ConfigError):
    pass


class BadEntry(ConfigError):
    pass


class WordTooLong(CotlarError):
    """A computation would exceed the configured word-length cap.

    This is a resource limit, not a mathematical failure: rerun with a
    larger cap (``COTLAR_MAX_WORD_LEN``) or a smaller radius.
    """


class NestedConditionViolated(CotlarError):
    """The classification by descents needs every m(s, u) in {2, inf}."""


class WrongSystem(CotlarError):
    pass


class RepDiscoveryFailed(CotlarError):
    pass


class DecompositionFailed(CotlarError):
    pass


class ConstraintViolated(CotlarError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
