import pytest

from config.settings import (
    DEFAULT_GUARDS,
    EXIT_CODES,
    GUARD_ENV_VAR,
    MECHANISMS,
    load_guards,
    parse_guard_overrides,
)
from selection.mechanisms import MechanismSpec
from utils.validators import parse_probability, parse_range, parse_seed


def test_parse_overrides():
    assert parse_guard_overrides("permutation_n=7, enumerate-all-n=3") == {
        'permutation_n': 7,
        'enumerate_all_n': 3,
    }
    assert parse_guard_overrides("") == {}


@pytest.mark.parametrize('text', ["nope=3", "permutation_n", "permutation_n=x", "permutation_n=0"])
def test_parse_overrides_rejects(text):
    with pytest.raises(ValueError):
        parse_guard_overrides(text)


def test_precedence():
    guards, used_env = load_guards(environ={})
    assert guards == DEFAULT_GUARDS
    assert not used_env

    env = {GUARD_ENV_VAR: 'permutation_n=5,symmetrize_n=3'}
    guards, used_env = load_guards({'permutation_n': 8}, environ=env)
    assert used_env
    assert guards['permutation_n'] == 8
    assert guards['symmetrize_n'] == 3


def test_defaults_untouched_by_overrides():
    load_guards({'permutation_n': 2}, environ={})
    assert DEFAULT_GUARDS['permutation_n'] == 9


def test_exit_codes():
    assert EXIT_CODES == {'OK': 0, 'VERIFY_FAILED': 1, 'USAGE': 2, 'GUARD': 3}


def test_mechanism_names_resolve():
    for name, config in MECHANISMS.items():
        spec = MechanismSpec.from_name(name, 3 if config['needs_k'] else None)
        assert spec.label


class TestValidators:
    def test_ranges(self):
        assert parse_range("1..4") == [1, 2, 3, 4]
        assert parse_range("5") == [5]
        with pytest.raises(ValueError):
            parse_range("3..1")
        with pytest.raises(ValueError):
            parse_range("0..2")
        with pytest.raises(ValueError):
            parse_range("a..b")

    def test_seeds(self):
        assert parse_seed("42") == 42
        assert parse_seed("0xFF") == 255
        with pytest.raises(ValueError):
            parse_seed(str(2 ** 64))
        with pytest.raises(ValueError):
            parse_seed("seed")

    def test_probabilities(self):
        assert parse_probability("0.25") == 0.25
        assert parse_probability("1") == 1.0
        with pytest.raises(ValueError):
            parse_probability("1", open_interval=True)
        with pytest.raises(ValueError):
            parse_probability("-0.1")
