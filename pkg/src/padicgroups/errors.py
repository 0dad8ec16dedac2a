"""Exception types shared across the package."""


class MathError(Exception):
    """Base class for every mathematical failure raised by this package."""


# -- scalar arithmetic --------------------------------------------------

class DivisionByZero(MathError):
    pass


class PrecisionExhausted(MathError):
    """An operation would leave fewer trusted digits than the guard allows."""


class ZeroInput(MathError):
    pass


class NotASquare(MathError):
    pass


# -- quadratic spaces ---------------------------------------------------

class DegenerateForm(MathError):
    pass


class SearchExhausted(MathError):
    pass


class NotRepresented(MathError):
    pass


# -- orthogonal groups --------------------------------------------------

class NullReflectionVector(MathError):
    pass


class DifferentOrbits(MathError):
    pass


class NotIsometric(MathError):
    pass


class NotAnIsometry(MathError):
    pass


# -- group embeddings ---------------------------------------------------

class NotInStabilizer(MathError):
    pass


class NoPreimage(MathError):
    pass


class NotInImageShape(MathError):
    pass


# -- projective charts --------------------------------------------------

class NotInChart(MathError):
    pass


class NotTangent(MathError):
    pass


class WitnessSearchExhausted(MathError):
    pass


# -- Galilean machinery -------------------------------------------------

class InvalidBaseMultiplier(MathError):
    pass


class ZeroTau(MathError):
    pass


class ZeroXi(MathError):
    pass


# -- symmetry chains ----------------------------------------------------

class NotMassive(MathError):
    pass


class NotNull(MathError):
    pass


class DegenerateRestriction(MathError):
    pass
