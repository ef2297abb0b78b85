"""Exact combinatorial kernel: binomials, Catalan numbers, stationary
moments, and enumeration of reduced words over a two-letter involution
alphabet.

Everything in this module is computed in exact integer/rational arithmetic;
no floating point enters any identity checked here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

#: Hard cap on brute-force enumeration: 4**12 is ~16.8M expansion terms.
BRUTEFORCE_MAX_ORDER = 12

#: The four terms contributed by one factor (1+a)(1+b) = 1 + a + b + ab.
_FACTOR_PIECES = ("", "a", "b", "ab")


class OrderTooLargeError(ValueError):
    """Brute-force enumeration was requested above the 4**n term cap."""


def binomial(n: int, k: int) -> int:
    """C(n, k) with the convention that out-of-range k gives 0."""
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def catalan(k: int) -> int:
    """k-th Catalan number C(2k, k) / (k + 1)."""
    if k < 0:
        raise ValueError("catalan is defined for k >= 0")
    return math.comb(2 * k, k) // (k + 1)


def stationary_moment(n: int) -> Fraction:
    """n-th moment of the arcsine law on [0, 1]: C(2n, n) / 4**n, exactly.

    These are the large-time moments of the free Jacobi process at the
    symmetric parameter point; n = 0 gives 1.
    """
    if n < 0:
        raise ValueError("moment order must be nonnegative")
    return Fraction(math.comb(2 * n, n), 4**n)


def stationary_difference(k: int) -> Fraction:
    """m_k - m_{k+1} for the stationary moments; equals C_k / 2**(2k+1)."""
    return stationary_moment(k) - stationary_moment(k + 1)


def verify_catalan_identity(n_max: int) -> tuple[bool, int | None]:
    """Check m_n = sum_{k<n} m_{n-k-1} (m_k - m_{k+1}) in exact rationals.

    Returns (True, None) when the identity holds for every 1 <= n <= n_max,
    else (False, first failing n).
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    m = [stationary_moment(n) for n in range(n_max + 2)]
    for n in range(1, n_max + 1):
        rhs = sum((m[n - k - 1] * (m[k] - m[k + 1]) for k in range(n)), Fraction(0))
        if rhs != m[n]:
            return False, n
    return True, None


# ---------------------------------------------------------------------------
# Reduced-word enumeration
# ---------------------------------------------------------------------------

def reduce_word(letters) -> str:
    """Normal form of a word over {a, b} under aa -> empty, bb -> empty.

    Since the two letters satisfy no other relation, cancelling adjacent
    equal letters to a fixpoint yields a unique alternating word.
    """
    stack: list[str] = []
    for ch in letters:
        if stack and stack[-1] == ch:
            stack.pop()
        else:
            stack.append(ch)
    return "".join(stack)


def word_class(k: int, kind: str) -> str:
    """Reduced-word key for a named class: (ab)^k, (ab)^k a, (ba)^k, b(ab)^k."""
    if kind == "ab":
        return "ab" * k
    if kind == "aba":
        return "ab" * k + "a"
    if kind == "ba":
        return "ba" * k
    if kind == "bab":
        return "b" + "ab" * k
    raise ValueError(f"unknown word class kind {kind!r}")


@dataclass(frozen=True)
class WordCountTable:
    """Exact counts of reduced words in the expansion of [(1+a)(1+b)]^n.

    ``counts`` maps each reduced alternating word (including the empty
    word ``""``) to the number of the 4**n expansion terms that reduce
    to it.
    """

    n: int
    counts: dict[str, int]

    def count(self, word: str) -> int:
        return self.counts.get(word, 0)

    def c(self, k: int) -> int:
        """Number of terms reducing to (ab)^k; k = 0 is the empty word."""
        return self.count(word_class(k, "ab"))

    def d(self, k: int) -> int:
        """Number of terms reducing to (ab)^k a."""
        return self.count(word_class(k, "aba"))

    def e(self, k: int) -> int:
        """Number of terms reducing to (ba)^k; k = 0 is the empty word."""
        return self.count(word_class(k, "ba"))

    def b_leading(self, k: int) -> int:
        """Number of terms reducing to b(ab)^k (odd words starting with b)."""
        return self.count(word_class(k, "bab"))

    def total(self) -> int:
        return sum(self.counts.values())

    def odd_total(self) -> int:
        return sum(v for w, v in self.counts.items() if len(w) % 2 == 1)


def word_counts_bruteforce(n: int) -> WordCountTable:
    """Tally reduced words over all 4**n factor choices of [(1+a)(1+b)]^n.

    Each of the n factors contributes one of {1, a, b, ab}; the chosen
    pieces are concatenated and reduced with aa = bb = identity.  This is
    the independent oracle for the closed-form counts: it never consults
    a binomial formula or a recurrence.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > BRUTEFORCE_MAX_ORDER:
        raise OrderTooLargeError(
            f"brute-force enumeration capped at n <= {BRUTEFORCE_MAX_ORDER}"
            f" (4**{n} terms requested)"
        )
    counts: dict[str, int] = {}
    for pieces in product(_FACTOR_PIECES, repeat=n):
        word = reduce_word("".join(pieces))
        counts[word] = counts.get(word, 0) + 1
    return WordCountTable(n=n, counts=counts)


def word_counts_closed(n: int, k: int) -> tuple[int, int, int]:
    """Closed-form counts (c, d, e) for order n and alternation depth k.

    c(n,k) = C(2n-1, n-k) counts (ab)^k, d(n,k) = C(2n-1, n-k-1) counts
    (ab)^k a, and e(n,k) = d(n,k) counts (ba)^k (for k >= 1; at k = 0 the
    e-column refers to the empty word, where C(2n-1, n-1) = C(2n-1, n)
    makes the two conventions agree).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    c = binomial(2 * n - 1, n - k)
    d = binomial(2 * n - 1, n - k - 1)
    return c, d, d


def combined_weight(n: int, k: int) -> int:
    """c(n,k) + e(n,k) = C(2n, n-k), the weight of cos-type word pairs."""
    return binomial(2 * n, n - k)


# ---------------------------------------------------------------------------
# Identity checks used by the verification suites
# ---------------------------------------------------------------------------

def closed_recurrences_hold(n_max: int) -> bool:
    """Closed forms satisfy the one-step expansion recurrences, exactly.

    c(n,k) = c(n-1,k) + d(n-1,k) + d(n-1,k-1) + c(n-1,k-1)       n >= 2, k >= 1
    d(n,k) = d(n-1,k) + c(n-1,k) + c(n-1,k+1) + d(n-1,k+1)       n >= 2, k >= 0
    e(n,k) = e(n-1,k) + d(n-1,k) + d(n-1,k-1) + e(n-1,k+1)       n >= 3, k >= 1
    """
    def c(n, k):
        return binomial(2 * n - 1, n - k)

    def d(n, k):
        return binomial(2 * n - 1, n - k - 1)

    for n in range(2, n_max + 1):
        for k in range(0, n + 1):
            if k >= 1 and c(n, k) != c(n - 1, k) + d(n - 1, k) + d(n - 1, k - 1) + c(n - 1, k - 1):
                return False
            if d(n, k) != d(n - 1, k) + c(n - 1, k) + c(n - 1, k + 1) + d(n - 1, k + 1):
                return False
            if n >= 3 and k >= 1:
                # e and d share the same closed form; all e-indices here are >= 1
                if d(n, k) != d(n - 1, k) + d(n - 1, k) + d(n - 1, k - 1) + d(n - 1, k + 1):
                    return False
    return True


def pascal_combination_holds(n_max: int) -> bool:
    """4 C(2n-2, n-1-k) - C(2n, n-k) telescopes into four C(2n-2, .) terms.

    Exact for all n >= 2, 1 <= k <= n-1; this is the identity that drives
    the vanishing of the stationary coefficient gaps as the rank ratio
    tends to one.
    """
    for n in range(2, n_max + 1):
        for k in range(1, n):
            lhs = 4 * binomial(2 * n - 2, n - 1 - k) - binomial(2 * n, n - k)
            rhs = (
                binomial(2 * n - 2, n - k - 1)
                - binomial(2 * n - 2, n - k - 2)
                + binomial(2 * n - 2, n - k - 1)
                - binomial(2 * n - 2, n - k)
            )
            if lhs != rhs:
                return False
    return True


def inverse_sqrt_4z_coefficients(order: int) -> list[Fraction]:
    """Exact coefficients of (1 - 4z)^(-1/2) via the binomial recurrence.

    Used as an independent route to the empty-word generating function:
    the n-th coefficient here equals C(2n, n), derived without invoking
    binomials directly.
    """
    coeffs = [Fraction(1)]
    for n in range(order):
        # (1+u)^p with p = -1/2, u = -4z: a_{n+1} = a_n * (-4)(p - n)/(n + 1)
        coeffs.append(coeffs[-1] * Fraction(2 * (2 * n + 1), n + 1))
    return coeffs


def empty_word_generating_check(order: int) -> bool:
    """Sum of empty-word counts matches (1/2)(1/sqrt(1-4z) - 1), exactly."""
    inv = inverse_sqrt_4z_coefficients(order)
    for n in range(1, order + 1):
        c_n0 = Fraction(binomial(2 * n - 1, n))
        target = (inv[n] - (1 if n == 0 else 0)) / 2
        if c_n0 != target:
            return False
    return True
