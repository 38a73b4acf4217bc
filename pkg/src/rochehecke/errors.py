"""Exception hierarchy shared by all layers."""


class RocheHeckeError(Exception):
    """Base class for every error raised by this package."""


class PrecisionError(RocheHeckeError):
    """A coefficient at or above the known precision was requested."""


class NotInvertible(RocheHeckeError):
    pass


class ConcavityViolation(RocheHeckeError):
    def __init__(self, alpha, beta):
        self.alpha, self.beta = alpha, beta
        super().__init__(f"f({alpha}) + f({beta}) < f({alpha}+{beta})")


class PositivityViolation(RocheHeckeError):
    def __init__(self, alpha):
        self.alpha = alpha
        super().__init__(f"f({alpha}) + f(-{alpha}) < 1")


class DominanceError(RocheHeckeError):
    pass


class HomomorphismError(RocheHeckeError):
    """Generator exponents do not define a character."""


class CharacterNotTrivialOnTPrime(RocheHeckeError):
    pass


class NotRegular(RocheHeckeError):
    pass


class SingularMatrix(RocheHeckeError):
    pass


class NotInJ(RocheHeckeError):
    pass


class TruncationTooSmall(RocheHeckeError):
    pass


class SupportOutsideBox(RocheHeckeError):
    pass


class FactorizationInconsistent(RocheHeckeError):
    """Two factorizations of one element through J t^lambda J disagree on mu."""


class PropertyViolation(RocheHeckeError):
    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message if witness is None else f"{message}: {witness!r}")


class ConfigError(RocheHeckeError):
    pass


class NotRelevantInBox(RocheHeckeError):
    """g is not in J t^lambda J for any lambda in the box (or not relevant at all)."""
