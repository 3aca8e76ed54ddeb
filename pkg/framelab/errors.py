"""
Exceptions raised by framelab
"""


class FramelabError(Exception):
    """
    Base class for every error raised by the library
    """


class LengthMismatch(FramelabError, ValueError):
    """
    Two vectors (or a vector and a frame) have different lengths
    """


class DependentFamily(FramelabError, ValueError):
    """
    A family expected to be linearly independent is dependent
    """


class NotABasis(FramelabError, ValueError):
    """
    A family expected to be a basis of R^n is not one
    """


class TooFewVectors(FramelabError, ValueError):
    """
    The frame has fewer vectors than the operation needs
    """


class SizeLimit(FramelabError, ValueError):
    """
    An exhaustive enumeration would exceed the configured cap
    """


class EmptyIndexSet(FramelabError, ValueError):
    """
    A coordinate subset was required to be nonempty
    """


class ZeroDimensional(FramelabError, ValueError):
    """
    A subspace has dimension zero
    """


class RetryLimit(FramelabError, RuntimeError):
    """
    A randomized constructor ran out of attempts
    """


class PairNotBad(FramelabError, ValueError):
    """
    x + y and x - y weakly have the same phase
    """


class FrameFileError(FramelabError, ValueError):
    """
    A frame file or a command-line vector could not be parsed
    """


class WitnessVerificationError(FramelabError, RuntimeError):
    """
    A certificate failed its independent re-check
    """


class NotClassifiable(FramelabError, ValueError):
    """
    A pair of vectors does not admit the five-set classification

    Args:
        coordinate (int): The zero-based coordinate that breaks it.
        message (str): Human-readable reason.
    """

    def __init__(self, coordinate: int, message: str):
        super().__init__(message)
        self.coordinate = coordinate
