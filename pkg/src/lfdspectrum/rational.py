"""Exact rational arithmetic backend.

Everything downstream computes over Q.  gmpy2.mpq is used when available
(roughly 5-10x faster than fractions.Fraction on the workloads here);
otherwise we fall back to the stdlib type.  Both expose the same
numerator/denominator interface, so the rest of the package never needs
to know which one it got.
"""

from __future__ import annotations

try:
    from gmpy2 import mpq as _mpq

    QType = type(_mpq(1))

    def Q(num=0, den=1):
        return _mpq(num, den)

except ImportError:  # pragma: no cover
    from fractions import Fraction as _mpq

    QType = _mpq

    def Q(num=0, den=1):
        return _mpq(num, den)


QZERO = Q(0)
QONE = Q(1)


def rat(value) -> "QType":
    """Coerce ints, strings like '3/4' or '-2', and rationals to Q.

    Floats are rejected: they carry binary rounding error and this
    package promises exact answers.
    """
    if isinstance(value, QType):
        return value
    if isinstance(value, int):
        return Q(value)
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            num, _, den = text.partition("/")
            return Q(int(num.strip()), int(den.strip()))
        return Q(int(text))
    if isinstance(value, float):
        raise TypeError(f"refusing float {value!r}; pass an int, string, or rational")
    # fractions.Fraction instances when running on the gmpy2 backend, and
    # anything else exposing exact numerator/denominator integers
    num = getattr(value, "numerator", None)
    den = getattr(value, "denominator", None)
    if isinstance(num, int) and isinstance(den, int):
        return Q(num, den)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def rat_str(q) -> str:
    """Render as 'p/q' or 'p', the wire format used in JSON output."""
    q = rat(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"
