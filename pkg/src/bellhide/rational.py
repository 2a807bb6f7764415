"""Lossless JSON encoding for exact rationals."""

from __future__ import annotations

from fractions import Fraction


def to_json(x: Fraction | int) -> dict:
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator}


def from_json(obj) -> Fraction:
    if isinstance(obj, dict):
        return Fraction(int(obj["num"]), int(obj["den"]))
    if isinstance(obj, str):
        return Fraction(obj)
    if isinstance(obj, int):
        return Fraction(obj)
    raise ValueError(f"not an exact rational: {obj!r}")


def parse(text: str) -> Fraction:
    """Parse ``"3/7"``, ``"0.25"`` or ``"1"``; floats are taken as decimals, not binary."""
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"not a rational number: {text!r}") from None
