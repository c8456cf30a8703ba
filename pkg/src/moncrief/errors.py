"""Exception types shared across the package."""


class GeometryError(Exception):
    """Base class for every error raised by moncrief."""


class NonHyperbolic(GeometryError):
    pass


class ProjectionUndefined(GeometryError):
    pass


class DegenerateTriple(GeometryError):
    pass


class ConstructionFailure(GeometryError):
    pass


class EnumerationInconclusive(GeometryError):
    pass


class NoIntersection(GeometryError):
    pass


class ZeroWeight(GeometryError):
    pass


class EmptyDomain(GeometryError):
    pass


class DegenerateFamily(GeometryError):
    pass


class OutsideDomain(GeometryError):
    pass


class NoPastStratum(GeometryError):
    pass


class DomainError(GeometryError, ValueError):
    pass
