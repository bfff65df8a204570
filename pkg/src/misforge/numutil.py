"""Small exact-integer helpers used by the graph constructions."""

from __future__ import annotations


def integer_nth_root(value: int, n: int) -> int:
    """floor(value ** (1/n)) in exact integer arithmetic."""
    if value < 0 or n < 1:
        raise ValueError(f"need value >= 0 and n >= 1, got {value}, {n}")
    if value in (0, 1) or n == 1:
        return value
    guess = 1 << ((value.bit_length() + n - 1) // n)
    while True:
        nxt = ((n - 1) * guess + value // guess ** (n - 1)) // n
        if nxt >= guess:
            break
        guess = nxt
    while guess**n > value:
        guess -= 1
    while (guess + 1) ** n <= value:
        guess += 1
    return guess


def ceil_div(a: int, b: int) -> int:
    return -(-a // b)
