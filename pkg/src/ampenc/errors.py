"""Exception hierarchy shared across the package."""


class EncoderError(Exception):
    """Base class for all protocol-level failures."""


class InputDomainError(EncoderError, ValueError):
    """An argument lies outside its documented domain."""


class ConfigurationError(EncoderError):
    """A circuit construction request that cannot be satisfied."""


class AllZeroDataError(EncoderError):
    """The data set has c_max == 0: there is nothing to encode."""


class ZeroSuccessProbabilityError(EncoderError):
    """The flag measurement can never yield the success outcome."""


class AncillaEntanglementError(EncoderError):
    """Ancilla qubits were left entangled with the processing register."""
