"""Decimal digits of pi via an unbounded spigot.

The deterministic reservoir model derives its input weights from the
fractional digits of pi, so the digit stream has to be exact and cheap to
re-query.  We use the Gibbons streaming spigot, which emits decimal digits
one at a time using only integer arithmetic, and keep every digit produced
so far in a module-level cache so repeated callers never recompute a
prefix.
"""

from __future__ import annotations

# Digits produced so far, most significant first.  pi_digits(n) extends this
# list on demand; it is never truncated.
_CACHE: list[int] = []

# Spigot state (q, r, t, k, n, l) from which digit production resumes.
_STATE: tuple[int, int, int, int, int, int] = (1, 0, 1, 1, 3, 3)


def _extend(count: int) -> None:
    global _STATE
    q, r, t, k, n, l = _STATE
    produced = 0
    while produced < count:
        if 4 * q + r - t < n * t:
            _CACHE.append(n)
            produced += 1
            q, r, t, k, n, l = (
                10 * q,
                10 * (r - n * t),
                t,
                k,
                (10 * (3 * q + r)) // t - 10 * n,
                l,
            )
        else:
            q, r, t, k, n, l = (
                q * k,
                (2 * q + r) * l,
                t * l,
                k + 1,
                (q * (7 * k + 2) + r * l) // (t * l),
                l + 2,
            )
    _STATE = (q, r, t, k, n, l)


def pi_digits(count: int) -> list[int]:
    """Return the first `count` digits of pi after the decimal point.

    The stream starts 1, 4, 1, 5, 9, 2, ...; the integer part (3) is not
    included.  Digits are exact for any `count` the caller can afford; the
    cost of the first request is quadratic in `count` and later requests
    for a shorter or equal prefix are free.
    """
    if count < 0:
        raise ValueError(f"digit count must be >= 0, got {count}")
    # +1 because the spigot's first output digit is the integer part 3.
    needed = count + 1 - len(_CACHE)
    if needed > 0:
        _extend(needed)
    return _CACHE[1 : count + 1]
