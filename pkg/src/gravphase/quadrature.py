"""Composite Simpson quadrature on a single interval.

Exact for cubic integrands, which covers every phase integrand along a
parabolic trajectory piece.  The weighted sum is accumulated with
:func:`math.fsum` so the only rounding left is in the integrand values.
"""

import math

import numpy as np

from .errors import ConfigError

__all__ = ["simpson_nodes", "simpson", "integrate"]


def _even(n):
    n = int(n)
    if n < 2:
        raise ConfigError(f"n_steps must be at least 2, got {n}", field="run.n_steps")
    return n + (n % 2)


def simpson_nodes(a, b, n):
    """``n`` (rounded up to even) equal intervals on ``[a, b]``; returns ``(t, h)``."""
    n = _even(n)
    h = (b - a) / n
    t = a + h * np.arange(n + 1)
    t[-1] = b
    return t, h


def _weights(n):
    w = np.full(n + 1, 2.0)
    w[1::2] = 4.0
    w[0] = w[-1] = 1.0
    return w


def simpson(values, h):
    values = np.asarray(values, dtype=float)
    n = values.size - 1
    if n < 2 or n % 2:
        raise ConfigError("Simpson's rule needs an even number of intervals", field="run.n_steps")
    return h / 3.0 * math.fsum(_weights(n) * values)


def integrate(f, a, b, n):
    """Integrate a vectorised callable ``f`` over ``[a, b]``."""
    if b == a:
        return 0.0
    t, h = simpson_nodes(a, b, n)
    return simpson(f(t), h)
