"""Exception hierarchy.

Everything raised for bad input derives from :class:`QhnError` (itself a
``ValueError``); the CLI maps these to exit code 1.
"""


class QhnError(ValueError):
    pass


class CompositeModulus(QhnError):
    pass


class ZeroInverse(QhnError, ZeroDivisionError):
    pass


class OutOfAlphabet(QhnError):
    pass


class NotLatinSquare(QhnError):
    def __init__(self, axis, index, msg=None):
        self.axis = axis
        self.index = index
        super().__init__(msg or f"not a Latin square: {axis} {index} is not a permutation")


class DegenerateOrder(QhnError):
    pass


class BlockSizeMismatch(QhnError):
    pass


class NoSuchRoot(QhnError):
    pass


class UnsupportedFastOrder(QhnError):
    pass


class LengthNotAligned(QhnError):
    def __init__(self, length, lcm):
        self.length = length
        self.lcm = lcm
        super().__init__(
            f"input length {length} is not a multiple of lcm of block orders ({lcm})"
        )


class ConfigError(QhnError):
    pass


class EmptySequence(QhnError):
    pass


class PeriodTooShort(QhnError):
    pass


class BlockTooLarge(QhnError):
    pass


class DomainError(QhnError):
    pass


class ConvergenceError(QhnError, ArithmeticError):
    pass


class BadSeed(QhnError):
    pass


class BadPrime(QhnError):
    pass


class FormatError(QhnError):
    pass
