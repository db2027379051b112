"""Upper bounds on the clique number of generalized Paley graphs.

Three bounds are implemented: the trivial ``floor(sqrt(q))``, the analytic
bound for ``d >= 3`` with ``d | p-1`` and ``q`` an even power of p, and the
refutation of ``omega = sqrt(q)`` for ``GP(p^{4r}, 4)`` with ``p = 3 mod 4``.
The last one rests on a binomial-coefficient criterion evaluated with
Lucas' theorem; :func:`lucas_criterion` exposes that criterion directly.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field as dc_field

from .errors import ParameterError
from .gf import is_prime

_SLACK = 1e-9


def base_p_digits(n: int, p: int) -> list[int]:
    """Little-endian base-p digits; ``[]`` for zero."""
    if n < 0:
        raise ParameterError("n must be nonnegative")
    out = []
    while n:
        n, d = divmod(n, p)
        out.append(d)
    return out


def lucas_binom_mod_p(n: int, k: int, p: int) -> int:
    """``binom(n, k) mod p`` as the product of digitwise binomials."""
    if not is_prime(p):
        raise ParameterError(f"{p} is not prime")
    if n < 0 or k < 0:
        raise ParameterError("n and k must be nonnegative")
    result = 1
    while n or k:
        n, ni = divmod(n, p)
        k, ki = divmod(k, p)
        if ki > ni:
            return 0
        result = result * math.comb(ni, ki) % p
    return result


def _check_gp(q: int, d: int, p: int):
    if d < 2:
        raise ParameterError(f"d = {d} must exceed 1")
    if not is_prime(p) or p == 2:
        raise ParameterError(f"p = {p} is not an odd prime")
    s = round(math.log(q, p))
    if p**s != q:
        raise ParameterError(f"q = {q} is not a power of p = {p}")
    if (q - 1) % (2 * d):
        raise ParameterError(f"q = {q} is not 1 mod 2d = {2 * d}")
    return s


def lucas_criterion(q: int, d: int, p: int, N: int, n: int) -> bool:
    """Whether ``binom(n-1+(q-1)/d, (q-1)/d)`` is nonzero mod p, for ``2 <= n <= N``.

    When it is and ``N`` is the clique number of GP(q, d), then
    ``(N-1) n <= (q-1)/d``; a violation of that inequality rules ``N`` out.
    """
    _check_gp(q, d, p)
    if not 2 <= n <= N:
        raise ParameterError(f"need 2 <= n <= N, got n = {n}, N = {N}")
    k = (q - 1) // d
    return lucas_binom_mod_p(n - 1 + k, k, p) != 0


def lucas_refutes(q: int, d: int, p: int, N: int) -> int | None:
    """Smallest ``n`` in ``[2, N]`` whose criterion rules out ``omega = N``, if any."""
    k = (q - 1) // d
    for n in range(2, N + 1):
        if (N - 1) * n > k and lucas_criterion(q, d, p, N, n):
            return n
    return None


@dataclass
class Bound:
    value: int | None
    source: str
    applicable: bool
    witness: dict = dc_field(default_factory=dict)


def trivial_bound(q: int) -> Bound:
    return Bound(math.isqrt(q), "trivial", True, {"sqrt_q": math.sqrt(q)})


def refute_sqrt_quadruple(q: int, p: int) -> Bound:
    """``omega(GP(q, 4)) <= sqrt(q) - 1`` for ``q = p^{4r}``, ``p = 3 mod 4``.

    Rebuilds the contradiction: with ``N = sqrt(q)`` and
    ``n - 1 = (3p-1)/4 * p^{2r-1}`` the criterion fires, yet
    ``(N-1) n > (q-1)/4``.
    """
    if not is_prime(p) or p % 4 != 3:
        return Bound(None, "lucas", False, {"reason": "needs p = 3 mod 4"})
    s = round(math.log(q, p))
    if p**s != q or s % 4:
        return Bound(None, "lucas", False, {"reason": "needs q = p^(4r)"})
    r = s // 4
    N = p ** (2 * r)
    k = (q - 1) // 4
    digits = base_p_digits(k, p)
    expected_digits = [(3 * p - 1) // 4, (p - 3) // 4] * (2 * r)
    while expected_digits and expected_digits[-1] == 0:
        expected_digits.pop()
    n = (3 * p - 1) // 4 * p ** (2 * r - 1) + 1
    fires = lucas_criterion(q, 4, p, N, n)
    lhs, rhs = (N - 1) * n, k
    # (N-1)n <= (q-1)/4 would force 3p^{2r} - p^{2r-1} <= p^{2r} + 1
    reduced_lhs = 3 * p ** (2 * r) - p ** (2 * r - 1)
    reduced_rhs = p ** (2 * r) + 1
    ok = fires and lhs > rhs and digits == expected_digits and reduced_lhs > reduced_rhs
    if not ok:
        raise AssertionError(f"refutation trace failed for q = {q}")
    return Bound(N - 1, "lucas", True, {
        "N": N, "n": n, "binom_mod_p": lucas_binom_mod_p(n - 1 + k, k, p),
        "lhs": lhs, "rhs": rhs, "digits": digits,
        "reduced_lhs": reduced_lhs, "reduced_rhs": reduced_rhs,
    })


def analytic_value(q: int, d: int, p: int) -> float | None:
    """``sqrt(q/d) (1 + 1/(2 sqrt d) + 1/(8d)) + 1`` when its hypotheses hold."""
    if d < 3 or (p - 1) % d:
        return None
    s = round(math.log(q, p))
    if p**s != q or s % 2:
        return None
    return math.sqrt(q / d) * (1 + 1 / (2 * math.sqrt(d)) + 1 / (8 * d)) + 1


def strict_floor(value: float) -> int:
    """Largest integer strictly below ``value``, tolerant of rounding."""
    n = math.floor(value)
    return n - 1 if value - n < _SLACK else n


def analytic_bound(q: int, d: int, p: int) -> Bound:
    value = analytic_value(q, d, p)
    if value is None:
        return Bound(None, "analytic", False, {"reason": "needs d >= 3, d | p-1 and q an even power of p"})
    return Bound(strict_floor(value), "analytic", True, {"value": value})


@dataclass
class BoundReport:
    q: int
    d: int
    p: int
    bounds: list

    @property
    def best(self) -> Bound:
        return min((b for b in self.bounds if b.applicable), key=lambda b: b.value)

    @property
    def value(self) -> int:
        return self.best.value

    def to_dict(self) -> dict:
        return {
            "q": self.q, "d": self.d, "p": self.p,
            "best": self.value, "best_source": self.best.source,
            "bounds": [asdict(b) for b in self.bounds],
        }


def best_upper_bound(q: int, d: int, p: int) -> BoundReport:
    _check_gp(q, d, p)
    bounds = [trivial_bound(q), analytic_bound(q, d, p)]
    if d == 4:
        bounds.append(refute_sqrt_quadruple(q, p))
    else:
        bounds.append(Bound(None, "lucas", False, {"reason": "needs d = 4"}))
    return BoundReport(q, d, p, bounds)


def dim_bound(s: int, t: int) -> int:
    """Largest possible K-dimension of a subspace clique in GP(p^s, d), ``|K| = p^t``."""
    if t < 1 or s % t:
        raise ParameterError(f"t = {t} does not divide s = {s}")
    return s // (2 * t)
