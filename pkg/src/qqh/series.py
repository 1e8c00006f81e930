"""Truncated power series in a nilpotent variable.

A series is a list [a_0, ..., a_K] standing for sum a_k x^k mod x^{K+1}.
Coefficients can be Fractions, mpmath numbers or anything with ring ops.
"""
from __future__ import annotations

from fractions import Fraction
from math import factorial


def trunc(a, order: int) -> list:
    a = list(a[: order + 1])
    return a + [0] * (order + 1 - len(a))


def add(a, b, order: int) -> list:
    a, b = trunc(a, order), trunc(b, order)
    return [x + y for x, y in zip(a, b)]


def scale(a, c) -> list:
    return [c * x for x in a]


def mul(a, b, order: int) -> list:
    out = [0] * (order + 1)
    for i, x in enumerate(a[: order + 1]):
        if not x:
            continue
        for j, y in enumerate(b[: order + 1 - i]):
            if y:
                out[i + j] = out[i + j] + x * y
    return out


def inv(a, order: int) -> list:
    a = trunc(a, order)
    if not a[0]:
        raise ZeroDivisionError("series with zero constant term is not invertible")
    out = [0] * (order + 1)
    out[0] = 1 / a[0] if not isinstance(a[0], int) else Fraction(1, a[0])
    for k in range(1, order + 1):
        s = 0
        for j in range(1, k + 1):
            if a[j]:
                s = s + a[j] * out[k - j]
        out[k] = -s * out[0]
    return out


def div(a, b, order: int) -> list:
    return mul(a, inv(b, order), order)


def power(a, k: int, order: int) -> list:
    if k < 0:
        return power(inv(a, order), -k, order)
    out = trunc([1], order)
    base = trunc(a, order)
    while k:
        if k & 1:
            out = mul(out, base, order)
        base = mul(base, base, order)
        k >>= 1
    return out


def exp(a, order: int) -> list:
    """exp of a series with zero constant term."""
    a = trunc(a, order)
    if a[0]:
        raise ValueError("exp expects a series without constant term")
    # f' = a' f, solved degree by degree
    out = [0] * (order + 1)
    out[0] = Fraction(1)
    for k in range(1, order + 1):
        s = 0
        for j in range(1, k + 1):
            if a[j]:
                s = s + j * a[j] * out[k - j]
        out[k] = s / k if not isinstance(s, int) else Fraction(s, k)
    return out


def log1p(a, order: int) -> list:
    """log of a series with constant term 1."""
    a = trunc(a, order)
    if a[0] != 1:
        raise ValueError("log expects constant term 1")
    # f = log a: a f' = a'
    out = [0] * (order + 1)
    for k in range(1, order + 1):
        s = k * a[k]
        for j in range(1, k):
            if a[k - j]:
                s = s - j * out[j] * a[k - j]
        out[k] = s / k if not isinstance(s, int) else Fraction(s, k)
    return out


def exp_linear(c, order: int) -> list:
    """Coefficients of e^{c x}."""
    out, term = [], Fraction(1)
    for k in range(order + 1):
        out.append(term)
        term = term * c / (k + 1)
    return out


def taylor_exp_coeffs(order: int) -> list[Fraction]:
    return [Fraction(1, factorial(k)) for k in range(order + 1)]


def compose_neg(a) -> list:
    """a(-x)."""
    return [x if k % 2 == 0 else -x for k, x in enumerate(a)]
