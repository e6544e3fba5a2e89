"""Exact rational arithmetic and terminating (q-)hypergeometric sums.

Every quantity in this module is a `fractions.Fraction`; there is no floating
point anywhere. All functions are pure, so concurrent use needs no locking.

A terminating generalized hypergeometric sum with leading numerator
parameter -n is

    sum_{k=0}^{n}  (a_1)_k ... (a_r)_k / (k! (b_1)_k ... (b_s)_k) * z^k

with the rising factorial (b)_k = b (b+1) ... (b+k-1), and its basic analogue
replaces each (a)_k by (a; q)_k = (1-a)(1-qa)...(1-q^{k-1}a) and k! by
(q; q)_k.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Sequence

Scalar = Fraction

__all__ = [
    "Scalar",
    "InvalidParameterError",
    "SingularParameterError",
    "as_scalar",
    "parse_scalar",
    "format_scalar",
    "pochhammer",
    "q_pochhammer",
    "binomial",
    "q_binomial",
    "hyper_terminating",
    "q_hyper_terminating",
]


class InvalidParameterError(ValueError):
    """Raised when parameters violate a validity requirement."""


class SingularParameterError(ValueError):
    """Raised when a term denominator vanishes inside a terminating sum."""

    def __init__(self, message: str, term: int | None = None):
        super().__init__(message)
        self.term = term


_SCALAR_RE = re.compile(r"^[+-]?\d+(?:/\d+)?$")


def as_scalar(value) -> Scalar:
    """Coerce an int, Fraction or 'a/b' string to a Scalar."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_scalar(value)
    raise InvalidParameterError(f"cannot interpret {value!r} as an exact rational")


def parse_scalar(text: str) -> Scalar:
    """Parse 'num/den' or an integer literal; no decimals, no floats."""
    text = text.strip()
    if not _SCALAR_RE.match(text):
        raise InvalidParameterError(f"not an exact rational literal: {text!r}")
    try:
        return Fraction(text)
    except ZeroDivisionError:
        raise InvalidParameterError(f"zero denominator in {text!r}") from None


def format_scalar(x: Scalar) -> str:
    """Render as 'num/den', omitting '/den' when the denominator is 1.

    Round-trips bit-exactly through parse_scalar.
    """
    return str(Fraction(x))


def pochhammer(b: Scalar, k: int) -> Scalar:
    """Rising factorial (b)_k = b(b+1)...(b+k-1); (b)_0 = 1."""
    if k < 0:
        raise ValueError("pochhammer needs k >= 0")
    out = Fraction(1)
    for i in range(k):
        out *= b + i
    return out


def q_pochhammer(b: Scalar, q: Scalar, k: int) -> Scalar:
    """(b; q)_k = (1-b)(1-qb)...(1-q^{k-1}b); (b; q)_0 = 1."""
    if k < 0:
        raise ValueError("q_pochhammer needs k >= 0")
    out = Fraction(1)
    qpow = Fraction(1)
    for _ in range(k):
        out *= 1 - qpow * b
        qpow *= q
    return out


def binomial(N: int, n: int) -> Scalar:
    """Binomial coefficient as a Scalar; 0 outside 0 <= n <= N."""
    if N < 0:
        raise ValueError("binomial needs N >= 0")
    if n < 0 or n > N:
        return Fraction(0)
    return Fraction(math.comb(N, n))


def q_binomial(N: int, n: int, q: Scalar) -> Scalar:
    """Gaussian binomial (q;q)_N / ((q;q)_n (q;q)_{N-n}); 0 outside range."""
    if N < 0:
        raise ValueError("q_binomial needs N >= 0")
    if q == 0 or q == 1:
        raise InvalidParameterError("q_binomial undefined at q in {0, 1}")
    if n < 0 or n > N:
        return Fraction(0)
    den = q_pochhammer(q, q, n) * q_pochhammer(q, q, N - n)
    if den == 0:
        raise SingularParameterError(f"(q;q) factor vanishes for q={q}")
    return q_pochhammer(q, q, N) / den


def hyper_terminating(num: Sequence[Scalar], den: Sequence[Scalar],
                      z: Scalar, n: int) -> Scalar:
    """Terminating hypergeometric sum; num[0] must equal -n.

    Each term is accumulated as a single reduced rational. A vanishing term
    denominator is an error naming the offending index, never a 0/0 limit.
    """
    if n < 0:
        raise ValueError("termination order n must be >= 0")
    if not num or num[0] != Fraction(-n):
        raise ValueError("first numerator parameter must be -n")
    total = Fraction(0)
    num_prod = Fraction(1)
    den_prod = Fraction(1)
    zpow = Fraction(1)
    for j in range(n + 1):
        if j:
            for a in num:
                num_prod *= a + (j - 1)
            den_prod *= j
            for b in den:
                den_prod *= b + (j - 1)
            zpow *= z
        if den_prod == 0:
            raise SingularParameterError(
                f"denominator parameter hits a pole at term k={j}", term=j)
        total += num_prod * zpow / den_prod
    return total


def q_hyper_terminating(num: Sequence[Scalar], den: Sequence[Scalar],
                        q: Scalar, z: Scalar, n: int) -> Scalar:
    """Terminating basic hypergeometric sum; num[0] must equal q^{-n}.

    The implicit (q; q)_k joins the denominator, as usual.
    """
    if n < 0:
        raise ValueError("termination order n must be >= 0")
    if q == 0:
        raise InvalidParameterError("q must be nonzero")
    if not num or num[0] != q ** (-n):
        raise ValueError("first numerator parameter must be q^{-n}")
    total = Fraction(0)
    num_prod = Fraction(1)
    den_prod = Fraction(1)
    zpow = Fraction(1)
    qpow = Fraction(1)  # q^{j-1} while processing term j
    for j in range(n + 1):
        if j:
            for a in num:
                num_prod *= 1 - qpow * a
            den_prod *= 1 - qpow * q  # the (q; q)_j factor
            for b in den:
                den_prod *= 1 - qpow * b
            zpow *= z
            qpow *= q
        if den_prod == 0:
            raise SingularParameterError(
                f"denominator parameter hits a pole at term k={j}", term=j)
        total += num_prod * zpow / den_prod
    return total
