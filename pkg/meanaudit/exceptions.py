"""Public exception and warning types."""

from __future__ import annotations

from typing import Any, Optional, Sequence


class AuditWarning(UserWarning):
    """Issued for lenient expectation mismatches and oracle overrides during an audit."""

    pass


class ConvergenceWarning(UserWarning):
    """Issued when a golden-section refinement stops at its iteration cap."""

    pass


class InvalidPairError(ValueError):
    """Raised when a pair component is not a finite positive real.

    :param message: Human-readable reason.
    :param value: The offending component.

    Example::

        >>> from meanaudit import PositivePair, InvalidPairError
        >>> try:
        ...     PositivePair(0.0, 1.0)
        ... except InvalidPairError as e:
        ...     print(e.value)
        0.0
    """

    def __init__(self, message: str, *, value: Optional[float] = None) -> None:
        super().__init__(message)
        self.value = value


class MeanParameterError(ValueError):
    """Raised when a power-mean or difference-power-mean parameter is invalid.

    ``DP[r]`` requires ``0 < r < 1``; named means take no parameter and ``B[t]``
    requires one.
    """

    def __init__(self, message: str, *, parameter: Any = None) -> None:
        super().__init__(message)
        self.parameter = parameter


class MeanOverflowError(OverflowError):
    """Raised when a mean evaluates to a non-finite value."""

    pass


class RatioDomainError(ValueError):
    """Raised when the denominator of a ratio of second derivatives is not positive.

    :param x: Abscissa at which the denominator failed, when known.
    """

    def __init__(self, message: str, *, x: Optional[float] = None) -> None:
        super().__init__(message)
        self.x = x


class ClaimSyntaxError(ValueError):
    """Raised when claim text does not match the claim grammar.

    :param message: Reason, without the position suffix.
    :param position: Zero-based character offset into :attr:`text`.
    :param text: The full input text.
    """

    def __init__(self, message: str, *, position: int = 0, text: str = "") -> None:
        super().__init__(f"{message} at position {position}")
        self.position = position
        self.text = text


class UnknownSymbolError(ClaimSyntaxError):
    """Raised for an identifier that is not a mean symbol or ``sqrt``."""

    def __init__(self, symbol: str, *, position: int = 0, text: str = "") -> None:
        super().__init__(f"unknown symbol {symbol!r}", position=position, text=text)
        self.symbol = symbol


class MalformedParameterError(ClaimSyntaxError):
    """Raised for a bad ``B[t]`` or ``DP[r]`` parameter."""

    pass


class EvaluationFault(ArithmeticError):
    """Raised when a claim expression is undefined at a sample pair.

    :param witness: ``(a, b)`` at which evaluation failed.
    """

    def __init__(self, message: str, *, witness: Optional[tuple] = None) -> None:
        super().__init__(message)
        self.witness = witness


class SuiteFormatError(ValueError):
    """Raised for a malformed record in a claim suite file."""

    def __init__(
        self, message: str, *, line: Optional[int] = None, source: str = "<suite>"
    ) -> None:
        where = f"{source}:{line}: " if line is not None else f"{source}: "
        super().__init__(where + message)
        self.line = line
        self.source = source


class ConfigError(ValueError):
    """Raised when a :class:`~meanaudit.config.RunConfig` field is invalid."""

    def __init__(self, message: str, *, field: Optional[str] = None) -> None:
        super().__init__(message)
        self.field = field


class ExpectationMismatch(ValueError):
    """Raised when an audited claim's verdict differs from its expectation.

    :param claim_id: Suite identifier of the claim.
    :param expected: The recorded expectation (``HOLDS`` or ``FAILS``).
    :param verdict: The verdict the audit produced.
    """

    def __init__(self, claim_id: str, *, expected: str, verdict: str) -> None:
        super().__init__(f"{claim_id}: expected {expected}, got {verdict}")
        self.claim_id = claim_id
        self.expected = expected
        self.verdict = verdict


class MultipleExpectationMismatches(ValueError):
    """Raised by ``mode='collect'`` when at least one expectation is not met.

    :attr:`mismatches` keeps report order.
    """

    def __init__(self, mismatches: Sequence[ExpectationMismatch]) -> None:
        self.mismatches = tuple(mismatches)
        if not self.mismatches:
            super().__init__("expectations not met")
        else:
            super().__init__("; ".join(str(m) for m in self.mismatches))
