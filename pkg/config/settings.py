"""
Configuration settings for the impartial selection toolkit.

This module provides a centralized configuration system: file paths, the size
guards that keep the exact oracle and the enumerators at desk scale, the CLI
spellings of mechanisms and graph classes, and exit codes.
"""
import os
from pathlib import Path
from typing import Dict, Final, Mapping, Optional, Tuple, TypedDict


# Base directory paths
class Paths(TypedDict):
    """File path configuration."""
    BASE: Path
    DATA: Path
    GRAPHS: Path


PATHS: Paths = {
    'BASE': Path(__file__).parent.parent,
    'DATA': Path(__file__).parent.parent / 'data',
    'GRAPHS': Path(__file__).parent.parent / 'data' / 'graphs',
}


# Size guards
class SizeGuards(TypedDict):
    """Work limits for exhaustive computations."""
    partition_assignments: int
    permutation_n: int
    impartiality_n: int
    symmetrize_n: int
    compositions: int
    enumerate_all_n: int
    enumerate_functional_n: int
    enumerate_no_abstention_n: int


DEFAULT_GUARDS: Final[SizeGuards] = {
    'partition_assignments': 10 ** 7,   # k ** n
    'permutation_n': 9,                 # n! permutations
    'impartiality_n': 4,
    'symmetrize_n': 6,
    'compositions': 10 ** 6,            # C(delta + k - 1, k - 1)
    'enumerate_all_n': 4,
    'enumerate_functional_n': 5,
    'enumerate_no_abstention_n': 4,
}

GUARD_ENV_VAR: Final[str] = 'SELECTION_GUARDS'


# Mechanism configuration
class MechanismConfig(TypedDict):
    """CLI description of a mechanism."""
    name: str
    needs_k: bool
    description: str


MECHANISMS: Dict[str, MechanismConfig] = {
    'two-partition': {
        'name': '2-partition',
        'needs_k': False,
        'description': 'Random halves; best A2 vertex by nominations from A1',
    },
    'k-partition': {
        'name': 'k-partition',
        'needs_k': True,
        'description': 'k random blocks scanned in order with a carried candidate',
    },
    'permutation': {
        'name': 'permutation',
        'needs_k': False,
        'description': 'Vertices scanned in uniformly random order',
    },
}

GRAPH_CLASSES: Dict[str, str] = {
    'all': 'All',
    'no-abstention': 'NoAbstention',
    'outdegree-one': 'OutdegreeExactlyOne',
}

EXIT_CODES: Final[Dict[str, int]] = {
    'OK': 0,
    'VERIFY_FAILED': 1,
    'USAGE': 2,
    'GUARD': 3,
}

# Constants
DEFAULT_ENCODING: Final[str] = 'utf-8'
INDENT_LEVEL: Final[int] = 2
HOEFFDING_DELTA: Final[float] = 1e-6
DEFAULT_TRIALS: Final[int] = 100_000
MAX_SEED: Final[int] = 2 ** 64 - 1


def parse_guard_overrides(text: str) -> Dict[str, int]:
    """
    Parse a ``name=value,name=value`` override string.

    Raises:
        ValueError: On unknown guard names or non-positive values
    """
    overrides: Dict[str, int] = {}
    for item in text.split(','):
        item = item.strip()
        if not item:
            continue
        name, sep, value = item.partition('=')
        name = name.strip().replace('-', '_')
        if not sep:
            raise ValueError(f"Guard override must look like name=value, got {item!r}")
        if name not in DEFAULT_GUARDS:
            raise ValueError(f"Unknown size guard: {name}")
        try:
            number = int(value.strip())
        except ValueError:
            raise ValueError(f"Guard {name} needs an integer value, got {value!r}") from None
        if number <= 0:
            raise ValueError(f"Guard {name} must be positive, got {number}")
        overrides[name] = number
    return overrides


def load_guards(
    cli_overrides: Optional[Mapping[str, int]] = None,
    environ: Optional[Mapping[str, str]] = None,
) -> Tuple[SizeGuards, bool]:
    """
    Build the effective size guards.

    Defaults are overridden by the environment variable, which is in turn
    overridden by explicit CLI values.

    Returns:
        The effective guards and whether the environment variable was used
    """
    env = os.environ if environ is None else environ
    guards: SizeGuards = dict(DEFAULT_GUARDS)  # type: ignore[assignment]
    used_env = False
    raw = env.get(GUARD_ENV_VAR, '').strip()
    if raw:
        guards.update(parse_guard_overrides(raw))  # type: ignore[typeddict-item]
        used_env = True
    if cli_overrides:
        guards.update(cli_overrides)  # type: ignore[typeddict-item]
    return guards, used_env


def validate_settings() -> None:
    """
    Validate that all required configuration is correct.

    Raises:
        ValueError: If configuration values are invalid
    """
    for name, value in DEFAULT_GUARDS.items():
        if not isinstance(value, int) or value <= 0:
            raise ValueError(f"Invalid default for size guard {name}")

    if not MECHANISMS:
        raise ValueError("At least one mechanism must be configured")

    if sorted(EXIT_CODES.values()) != list(range(len(EXIT_CODES))):
        raise ValueError("Exit codes must be dense and start at zero")


validate_settings()
