"""Custom exception hierarchy for molcomm-atv."""

from typing import Any


class MolcommError(Exception):
    """Base exception for all molcomm-atv errors."""


class DomainError(MolcommError, ValueError):
    """An operation was called outside its mathematical domain."""


class SingularityError(DomainError):
    """Closed-form expression is undefined for the given inputs."""


class UnachievableSinrError(DomainError):
    """Requested SINR exceeds what the channel can reach with zero noise."""

    def __init__(self, message: str, ceiling: float) -> None:
        super().__init__(message)
        self.ceiling = ceiling


class ConfigurationError(MolcommError):
    """Experiment configuration is invalid or unreadable."""

    def __init__(
        self,
        message: str,
        key: str | None = None,
        errors: list[dict[str, Any]] | None = None,
    ) -> None:
        super().__init__(message)
        self.key = key
        self.errors = errors or []


class SimulationError(MolcommError):
    """A simulation trial failed at runtime."""

    def __init__(self, message: str, trial: int | None = None) -> None:
        super().__init__(message)
        self.trial = trial
