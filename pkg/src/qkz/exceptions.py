"""Exception types raised across the package."""


class QKZError(Exception):
    pass


class AmbientDimensionError(QKZError, ValueError):
    """Two subspaces (or a map and a subspace) live in different ambient spaces."""


class UnsupportedWeight(QKZError, ValueError):
    """Highest weight is not dominant integral."""


class ConfigurationError(QKZError, ValueError):
    pass


class NonGenericParameter(QKZError):
    """The intertwiner space at a spectral parameter is not one-dimensional."""

    def __init__(self, message, parameter=None, dimension=None):
        super().__init__(message)
        self.parameter = parameter
        self.dimension = dimension


class NormalizationFailure(NonGenericParameter):
    """The intertwiner vanishes on the tensor product of highest vectors."""


class AlgebraMismatch(QKZError, ValueError):
    pass
