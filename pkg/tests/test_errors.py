"""The exception taxonomy and the raising behavior of input validation."""

from __future__ import annotations

import pytest

import abelian_census as ac
from abelian_census import errors


ALL_ERRORS = [
    errors.GroupError,
    errors.OmegaError,
    errors.ParamError,
    errors.DomainError,
    errors.UndefinedMinimumError,
    errors.NotApplicableError,
    errors.WitnessNotFoundError,
    errors.LatticeCapError,
    errors.ResourceCapError,
    errors.FitError,
    errors.ConfigError,
    errors.CacheError,
]


def test_every_error_subclasses_the_base():
    for exc in ALL_ERRORS:
        assert issubclass(exc, errors.CensusError)
        assert issubclass(exc, Exception)


def test_base_error_is_exported():
    assert ac.CensusError is errors.CensusError
    for exc in ALL_ERRORS:
        assert getattr(ac, exc.__name__) is exc


@pytest.mark.parametrize("factors", [(), (1,), (0,), (-2,), (2, 0)])
def test_bad_invariant_factors_raise_group_error(factors):
    with pytest.raises(errors.GroupError):
        ac.make_group(factors)


def test_unknown_element_raises_group_error():
    G = ac.make_group((2, 2))
    with pytest.raises(errors.GroupError):
        G.index_of((0, 5))


def test_partial_class_raises_omega_error():
    G = ac.make_group((6,))
    # element 1 generates C6; its power class is {1, 5}
    with pytest.raises(errors.OmegaError):
        ac.validate_omega(G, [1])


def test_identity_in_omega_raises_omega_error():
    G = ac.make_group((2,))
    with pytest.raises(errors.OmegaError):
        ac.validate_omega(G, [0, 1])


@pytest.mark.parametrize("values", [[1], [1, 1, 1, 1], [1, 0, 1], [1, -2, 1]])
def test_bad_parameter_vectors_raise_param_error(values):
    G = ac.make_group((2, 2))  # three classes
    with pytest.raises(errors.ParamError):
        ac.make_params(G, values)


def test_tame_prime_rejected_where_wild_required():
    G = ac.make_group((2, 2))
    with pytest.raises(errors.DomainError):
        ac.wild_images(5, G)


def test_negative_gamma_rejected_by_series():
    from fractions import Fraction

    G = ac.make_group((2,))
    x = ac.make_params(G, [1])
    om = ac.validate_omega(G, [1])
    with pytest.raises(errors.ParamError):
        ac.mu_series(G, x, om, -1, Fraction(50))


def test_config_error_carries_line_number():
    from abelian_census.cli import parse_config

    with pytest.raises(errors.ConfigError, match="line 2"):
        parse_config("group=2,2\nnonsense_key=1\n")
