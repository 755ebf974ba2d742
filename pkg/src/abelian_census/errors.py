"""Exception types shared across the census engine."""

from __future__ import annotations

__all__ = [
    "CensusError",
    "GroupError",
    "OmegaError",
    "ParamError",
    "DomainError",
    "UndefinedMinimumError",
    "NotApplicableError",
    "WitnessNotFoundError",
    "LatticeCapError",
    "ResourceCapError",
    "FitError",
    "ConfigError",
    "CacheError",
]


class CensusError(Exception):
    """Base class for all errors raised by this package."""


class GroupError(CensusError):
    """Invalid group description (bad invariant factors, unknown element)."""


class OmegaError(CensusError):
    """Omega set is not a union of power classes, or contains the identity."""


class ParamError(CensusError):
    """Parameter vector has the wrong length or a non-positive entry."""


class DomainError(CensusError):
    """An operation was called outside its stated domain (e.g. a tame prime
    where a wild one is required)."""


class UndefinedMinimumError(CensusError):
    """The off-omega minimum x0 is undefined because every class meets the
    closure of omega."""


class NotApplicableError(CensusError):
    """The requested quantity is not defined for this configuration."""


class WitnessNotFoundError(CensusError):
    """No generating family satisfies the requested (delta, gamma) budget."""


class LatticeCapError(CensusError):
    """Subgroup lattice exceeded the configured size cap."""


class ResourceCapError(CensusError):
    """Enumeration exceeded its node budget; partial state may be saved."""


class FitError(CensusError):
    """Exponent fit rejected: too few checkpoints or insufficient span."""


class ConfigError(CensusError):
    """Config file did not parse or validate; message carries the line."""


class CacheError(CensusError):
    """Prime-table cache was missing, stale, or failed validation."""
