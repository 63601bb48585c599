"""
Input validation utilities for the selection toolkit.

This module validates the textual values that arrive on the command line:
integer ranges such as ``1..4``, seeds and probabilities.
Every validator raises ``ValueError`` with a message fit for the user.
"""
from pathlib import Path
from typing import List, Union

from config.settings import MAX_SEED


def validate_file_exists(file_path: Union[str, Path]) -> bool:
    """
    Check whether a file exists and is readable.

    Args:
        file_path: Path to the file to check

    Returns:
        bool: True if the file exists and is a regular file
    """
    path = Path(file_path)
    return path.exists() and path.is_file()


def parse_positive_int(text: str, minimum: int = 1) -> int:
    """
    Parse an integer that must be at least ``minimum``.

    Raises:
        ValueError: If ``text`` is not an integer or is too small
    """
    try:
        value = int(str(text).strip())
    except ValueError:
        raise ValueError(f"expected an integer, got {text!r}") from None
    if value < minimum:
        raise ValueError(f"expected an integer >= {minimum}, got {value}")
    return value


def parse_range(text: str, minimum: int = 1) -> List[int]:
    """
    Parse ``a..b`` (inclusive) or a single integer into a list of integers.

    Args:
        text: Range text, e.g. ``"1..4"`` or ``"5"``
        minimum: Smallest allowed value

    Returns:
        The integers from a to b in ascending order

    Raises:
        ValueError: If the text is malformed, reversed, or below ``minimum``
    """
    text = str(text).strip()
    low_text, sep, high_text = text.partition('..')
    low = parse_positive_int(low_text, minimum)
    high = parse_positive_int(high_text, minimum) if sep else low
    if high < low:
        raise ValueError(f"range {text!r} is empty")
    return list(range(low, high + 1))


def parse_seed(text: str) -> int:
    """
    Parse a 64-bit seed given in decimal or with a ``0x`` prefix.

    Raises:
        ValueError: If the seed is not an integer in [0, 2**64)
    """
    text = str(text).strip().lower()
    try:
        value = int(text, 16) if text.startswith('0x') else int(text)
    except ValueError:
        raise ValueError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= value <= MAX_SEED:
        raise ValueError(f"seed must lie in [0, 2**64), got {value}")
    return value


def parse_probability(text: str, open_interval: bool = False) -> float:
    """
    Parse a probability.

    Args:
        text: The value to parse
        open_interval: Require 0 < p < 1 instead of 0 <= p <= 1

    Raises:
        ValueError: If the value is not a number in range
    """
    try:
        value = float(text)
    except ValueError:
        raise ValueError(f"expected a number, got {text!r}") from None
    if open_interval and not 0.0 < value < 1.0:
        raise ValueError(f"expected a value in (0, 1), got {value}")
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"expected a value in [0, 1], got {value}")
    return value
