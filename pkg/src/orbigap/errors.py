"""Exception types shared across the package.

Hypothesis-style failures (the ones a pipeline run reports with exit
code 2) derive from HypothesisFailure; everything else derives directly
from OrbigapError.
"""


class OrbigapError(Exception):
    """Base class for all package errors."""


class InvalidInput(OrbigapError):
    """A precondition on user input was violated."""


class HypothesisFailure(OrbigapError):
    """A theorem hypothesis checked by the pipeline does not hold."""


class NotSquarefree(InvalidInput):
    """Polynomial shares a factor with its derivative."""


class PrecisionExhausted(OrbigapError):
    """Certification failed at the configured working-precision cap."""


class Reducible(InvalidInput):
    """A rational factorization of the defining polynomial was found."""


class UndecidedIrreducibility(OrbigapError):
    """Irreducibility could not be certified within the search budget."""


class DiscriminantMismatch(InvalidInput):
    """Supplied field discriminant does not divide disc(f) with square quotient."""


class DiscriminantUnknown(OrbigapError):
    """Operation needs the exact field discriminant but none is known."""


class ExcludedPrime(InvalidInput):
    """Rational prime lies in the field's excluded set."""


class NotCoprime(InvalidInput):
    """Arguments required to be coprime are not."""


class DenominatorNotCoprime(InvalidInput):
    """Element denominator is divisible by the residue characteristic."""


class IndeterminateSign(PrecisionExhausted):
    """Certified interval still contains 0 after precision escalation."""


class PossiblySquareRadicand(HypothesisFailure):
    """No inert prime found below the certification height; the quadratic
    extension is rejected as possibly trivial."""


class UncheckablePlace(OrbigapError):
    """An opaque ramification label blocks a splitting computation."""


class AlreadyRamified(InvalidInput):
    """Prime to be added already lies in the ramification set."""


class SamePrime(InvalidInput):
    """The two primes extending a ramification set coincide."""


class OddRamification(InvalidInput):
    """Ramification set has odd total cardinality."""


class RamFEmpty(InvalidInput):
    """Operation requires a nonempty finite ramification set."""


class UnknownNorm(OrbigapError):
    """Opaque ramified place lacks a declared norm."""


class NotLoxodromic(OrbigapError):
    """Trace image is certified to meet the real segment [-2, 2]."""


class KleinianInadmissible(HypothesisFailure):
    """Field signature or ramification set rules out a Kleinian group."""


class RealPlaceUnramified(KleinianInadmissible):
    """A real place of the field is missing from the ramification set."""


class EmbeddingObstruction(HypothesisFailure):
    """The base algebra does not admit one of the quadratic extensions."""


class CompositumDegenerate(HypothesisFailure):
    """Observed Frobenius vectors do not generate the full group (Z/2Z)^r."""


class LoxodromyFailure(HypothesisFailure):
    """A requested trace is not loxodromic."""


class NoneBelowHeight(OrbigapError):
    """No qualifying prime exists below the search height."""


class NoTuplesFound(OrbigapError):
    """The bounded-gap search produced no tuples below the height."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
