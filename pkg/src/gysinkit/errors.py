"""Exception hierarchy shared by every stage of the pipeline."""

from __future__ import annotations


class GysinError(Exception):
    """Base class for all errors raised by gysinkit."""


class InputError(GysinError):
    """Malformed or inconsistent user input (CLI exit code 2)."""


class ParseError(InputError):
    """A complex file could not be parsed (bad JSON, schema, non-exact number)."""


class ComplexError(InputError):
    """A chain complex could not be constructed (duplicate or unknown names)."""


class InvalidComplex(GysinError):
    """An operation that needs a valid complex was handed an invalid one."""

    def __init__(self, report):
        self.report = report
        super().__init__("invalid complex: " + "; ".join(v.detail for v in report.violations))


class ValidationFailed(GysinError):
    """Raised by the CLI when ``validate`` finds violations."""


class WindowLeak(GysinError):
    """The differential crosses the boundary of a truncation window."""


class FiltrationViolation(GysinError):
    """A differential entry moves up in filtration or drops too far."""

    def __init__(self, entry, shift, message=None):
        self.entry = entry
        self.shift = shift
        super().__init__(message or f"entry {entry[0]} -> {entry[1]} has filtration shift {shift}")


class DegreeMismatch(InputError):
    """A supplied differential entry does not lower the degree by one."""


class NotTwoLine(GysinError):
    """A spectral sequence page is not supported in complementary degrees 0 and 1."""


class ConvergenceMismatch(GysinError):
    """Anti-diagonal sums of E-infinity disagree with the total homology."""


class UnknownMultiplicity(GysinError):
    """A multiplicity was needed for an orbit that does not declare one."""


class OrbitDataError(InputError):
    """Reeb orbit records violate a structural invariant."""


class MissingEvidence(OrbitDataError):
    """An even iterate carries neither parity evidence nor an eigenvalue count."""


class InconsistentEvidence(OrbitDataError):
    """Parity evidence and eigenvalue count disagree about good/bad."""


class BadOrbitGenerator(OrbitDataError):
    """Contact differential data references a bad orbit."""


class ActionIncrease(OrbitDataError):
    """A differential entry does not strictly decrease the action."""


class AugmentationViolation(OrbitDataError):
    """Augmentation values are inconsistent with degrees or with e o d = 0."""


class DegeneratePath(GysinError):
    """The endpoint of a symplectic path has eigenvalue one."""


class DimensionSupportViolation(InputError):
    """Betti input is supported outside the degrees allowed by dimension."""


class InvalidMorseData(InputError):
    """Base Morse complex for a disc bundle is malformed."""


class ScenarioFailure(GysinError):
    """One or more corpus scenarios failed verification."""

    def __init__(self, failures):
        self.failures = list(failures)
        super().__init__("failed scenarios: " + ", ".join(self.failures))
