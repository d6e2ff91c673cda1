"""Error hierarchy shared by all modules.

Every domain error carries a short machine-readable code (the ``code``
attribute) which the service layer mirrors into structured payloads.
"""

from __future__ import annotations


class PolydrawError(Exception):
    """Base class; ``code`` is a stable identifier, args[0] the detail."""

    code = "error"

    def __init__(self, detail: str = ""):
        super().__init__(detail or self.code)
        self.detail = detail or self.code


class EmptyPolyhedron(PolydrawError):
    code = "empty"


class NotPointed(PolydrawError):
    code = "not pointed"


class NotFullDimensional(PolydrawError):
    code = "not full-dimensional"


class InvalidViewpoint(PolydrawError):
    code = "invalid viewpoint"


class AmbiguousFacet(PolydrawError):
    code = "ambiguous facet"


class NoSuchFace(PolydrawError):
    code = "no such face"


class SingularConfiguration(PolydrawError):
    code = "singular configuration"


class NotPlanar(PolydrawError):
    code = "not planar"


class NotTriconnected(PolydrawError):
    code = "not 3-connected"


class LiftInconsistent(PolydrawError):
    code = "inconsistent lift"


class InvalidMetric(PolydrawError):
    code = "invalid metric"


class DimensionMismatch(PolydrawError):
    code = "dimension mismatch"


class ValidationError(PolydrawError):
    code = "validation"
