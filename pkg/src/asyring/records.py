"""Text encodings shared by the JSON/CSV writers and the b-file reader."""

from __future__ import annotations

import re
from fractions import Fraction

__all__ = ["format_rational", "parse_rational", "parse_sequence_text", "ParseError"]


class ParseError(ValueError):
    """Input text could not be read as a sequence; carries the 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def format_rational(r) -> str:
    """Always ``"p/q"``, also for integers, so consumers never see floats."""
    r = Fraction(r)
    return f"{r.numerator}/{r.denominator}"


_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not _RATIONAL.match(text):
        raise ParseError(f"not an exact rational: {text!r}")
    return Fraction(text)


def parse_sequence_text(text: str, offset: int = 0) -> dict[int, Fraction]:
    """Read a plain list (one value per line) or an OEIS b-file (``n a(n)`` per line).

    Returns a mapping from series exponent to value.  For b-files the
    exponent is ``n + offset``; for plain lists the k-th value (0-based) gets
    exponent ``k + offset``.  Blank lines and ``#`` comments are skipped.
    """
    values: dict[int, Fraction] = {}
    mode = None
    k = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) == 2:
            this = "bfile"
        elif len(parts) == 1:
            this = "plain"
        else:
            raise ParseError(f"expected 'value' or 'n a(n)', got {raw.strip()!r}", lineno)
        if mode is None:
            mode = this
        elif mode != this:
            raise ParseError("mixed plain and b-file lines", lineno)
        try:
            if this == "bfile":
                n = int(parts[0])
                value = parse_rational(parts[1])
            else:
                n = k
                value = parse_rational(parts[0])
        except (ValueError, ParseError) as exc:
            raise ParseError(str(exc), lineno) from None
        exponent = n + offset
        if exponent in values:
            raise ParseError(f"duplicate index {n}", lineno)
        values[exponent] = value
        k += 1
    if not values:
        raise ParseError("no data")
    return values
