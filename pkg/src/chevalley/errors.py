"""Exception hierarchy shared by every module."""


class ChevalleyError(Exception):
    """Base class for all library errors."""


class DescriptorMismatch(ChevalleyError, TypeError):
    pass


class NotAUnit(ChevalleyError, ArithmeticError):
    pass


class Unsupported(ChevalleyError, NotImplementedError):
    pass


class InvalidType(ChevalleyError, ValueError):
    pass


class NotARoot(ChevalleyError, ValueError):
    pass


class ProportionalRoots(ChevalleyError, ValueError):
    pass


class NotAnAutomorphism(ChevalleyError, ValueError):
    pass


class NotUnipotent(ChevalleyError, ValueError):
    pass


class ExponentTooLarge(ChevalleyError, ValueError):
    pass


class NotBasedAtIdentity(ChevalleyError, ValueError):
    pass


class NotInLieAlgebra(ChevalleyError, ValueError):
    pass


class BadIdempotents(ChevalleyError, ValueError):
    pass


class ExtensionInconsistent(ChevalleyError, ValueError):
    pass


class NotMonomial(ChevalleyError, ValueError):
    pass


class ResidualNotTorus(ChevalleyError, ValueError):
    pass


class NotLinear(ChevalleyError, ValueError):
    pass


class NotSemilinear(ChevalleyError, ValueError):
    pass
