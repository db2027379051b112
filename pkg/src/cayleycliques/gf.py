"""Arithmetic in GF(p^s) for odd p.

Elements are numbered 0..q-1 by their coordinates in the power basis of the
modulus polynomial: the element with coefficients (c_0, ..., c_{s-1}) has
index ``sum(c_k * p**k)``.  Graph code works almost entirely with these
indices, using the vectorized helpers on :class:`FiniteField`.
:class:`FieldElement` is the scalar, operator-overloaded view, computed by
plain polynomial arithmetic without the lookup tables.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ParameterError, ResourceLimitError

DEFAULT_MAX_ORDER = 1 << 24

# Number of powers computed one at a time before switching to block products.
_EXP_BLOCK = 4096


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of ``n`` by trial division, ascending."""
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out.append(n)
    return out


# -- polynomials over F_p, little-endian coefficient lists -------------------

def _poly_mulmod(a, b, modulus, p):
    """Product of two reduced polynomials modulo a monic ``modulus``."""
    s = len(modulus) - 1
    prod = [0] * (2 * s - 1) if s > 0 else [0]
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] += ai * bj
    for k in range(len(prod) - 1, s - 1, -1):
        c = prod[k] % p
        if c:
            for j in range(s):
                prod[k - s + j] -= c * modulus[j]
        prod[k] = 0
    return [c % p for c in prod[:s]]


def _poly_powmod(a, e, modulus, p):
    s = len(modulus) - 1
    result = [1] + [0] * (s - 1)
    base = list(a)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, modulus, p)
        base = _poly_mulmod(base, base, modulus, p)
        e >>= 1
    return result


def _x_is_primitive(modulus, p, factors):
    """True iff the class of x has order exactly p^s - 1 modulo ``modulus``.

    This also certifies irreducibility: in a reducible quotient ring the
    unit group is smaller than p^s - 1.
    """
    s = len(modulus) - 1
    order = p**s - 1
    one = [1] + [0] * (s - 1)
    x = [0, 1] + [0] * (s - 2) if s > 1 else [(-modulus[0]) % p]
    if _poly_powmod(x, order, modulus, p) != one:
        return False
    return all(_poly_powmod(x, order // ell, modulus, p) != one for ell in factors)


def find_primitive_modulus(p: int, s: int) -> tuple[int, ...]:
    """Deterministic monic primitive polynomial of degree ``s`` over F_p.

    For ``s == 1`` this is ``x - g`` with ``g`` the smallest primitive root
    mod p.  Otherwise the candidates ``(c_0, ..., c_{s-1}, 1)`` are scanned in
    lexicographic order with ``c_0`` most significant and the first primitive
    one is returned.
    """
    factors = prime_factors(p**s - 1)
    if s == 1:
        for g in range(1, p):
            mod = ((-g) % p, 1)
            if _x_is_primitive(mod, p, factors):
                return mod
        raise AssertionError("no primitive root found")  # pragma: no cover
    # The constant term of a primitive polynomial is (-1)^s times a primitive
    # root mod p; skipping other constants keeps the scan order intact.
    p_factors = prime_factors(p - 1)
    sign = -1 if s % 2 else 1
    good_const = {
        c for c in range(1, p)
        if all(pow(sign * c % p, (p - 1) // ell, p) != 1 for ell in p_factors)
    }
    for low in itertools.product(range(p), repeat=s):
        if low[0] not in good_const:
            continue
        mod = (*low, 1)
        if _x_is_primitive(mod, p, factors):
            return mod
    raise AssertionError("no primitive polynomial found")  # pragma: no cover


class FiniteField:
    """GF(p^s) with a primitive generator ``g`` and discrete-log tables.

    ``g`` is the class of the indeterminate modulo ``modulus``.  ``exp[j]`` is
    the index of ``g**j`` for ``0 <= j < q-1`` and ``log[x]`` the discrete log
    of a nonzero index ``x`` (``log[0] == -1``).  ``class_table`` holds
    ``log mod class_modulus`` as one byte per element; tables for other
    moduli come from :meth:`class_table_for`.

    Instances are immutable once built and may be shared between threads.
    """

    def __init__(self, p: int, s: int, modulus, class_modulus: int = 2):
        self.p = int(p)
        self.s = int(s)
        self.q = self.p**self.s
        self.modulus = tuple(int(c) for c in modulus)
        self.class_modulus = int(class_modulus)
        self._powers = self.p ** np.arange(self.s, dtype=np.int64)
        self.exp = self._build_exp()
        log = np.full(self.q, -1, dtype=np.int64)
        log[self.exp] = np.arange(self.q - 1, dtype=np.int64)
        if (log[1:] < 0).any():
            raise ParameterError(f"modulus {self.modulus} is not primitive over F_{self.p}")
        self.log = log
        self._class_tables: dict[int, np.ndarray] = {}
        self.class_table = self.class_table_for(self.class_modulus)

    # -- construction -------------------------------------------------------

    def _times_x(self, digits):
        top = digits[-1]
        shifted = [0, *digits[:-1]]
        return [(c - top * m) % self.p for c, m in zip(shifted, self.modulus[:-1])]

    def _build_exp(self) -> np.ndarray:
        n = self.q - 1
        block = min(n, _EXP_BLOCK)
        if self.s == 1:
            g = (-self.modulus[0]) % self.p
            out = np.empty(n, dtype=np.int64)
            cur = 1
            for j in range(n):
                out[j] = cur
                cur = cur * g % self.p
            return out
        first = np.empty((block, self.s), dtype=np.int64)
        cur = [1] + [0] * (self.s - 1)
        for j in range(block):
            first[j] = cur
            cur = self._times_x(cur)
        # cur is now g**block; multiplying by it is a linear map on coordinates.
        step = self._mul_matrix_digits(cur)
        blocks = [first]
        done = block
        while done < n:
            blocks.append(blocks[-1] @ step % self.p)
            done += block
        digits = np.concatenate(blocks)[:n]
        return digits @ self._powers

    def _mul_matrix_digits(self, c_digits) -> np.ndarray:
        rows = []
        basis = [1] + [0] * (self.s - 1)
        for _ in range(self.s):
            rows.append(_poly_mulmod(basis, c_digits, self.modulus, self.p))
            basis = self._times_x(basis)
        return np.array(rows, dtype=np.int64)

    # -- descriptors ----------------------------------------------------------

    @property
    def generator_index(self) -> int:
        return int(self.exp[1]) if self.q > 2 else 1

    @property
    def g(self) -> FieldElement:
        return self.element(self.generator_index)

    def descriptor(self) -> dict:
        return {
            "p": self.p,
            "s": self.s,
            "modulus": list(self.modulus),
            "generator_index": self.generator_index,
            "class_modulus": self.class_modulus,
        }

    def __repr__(self):
        return f"FiniteField(p={self.p}, s={self.s}, modulus={self.modulus})"

    def same_field(self, other: FiniteField) -> bool:
        return self is other or (self.p == other.p and self.modulus == other.modulus)

    # -- scalar elements ----------------------------------------------------

    def element(self, value) -> FieldElement:
        """Element from an index or a coefficient sequence."""
        if isinstance(value, (int, np.integer)):
            return FieldElement(self, tuple(int(c) for c in self.decode(int(value))))
        coeffs = tuple(int(c) % self.p for c in value)
        if len(coeffs) != self.s:
            raise ParameterError(f"expected {self.s} coefficients, got {len(coeffs)}")
        return FieldElement(self, coeffs)

    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, (0,) * self.s)

    @property
    def one(self) -> FieldElement:
        return FieldElement(self, (1,) + (0,) * (self.s - 1))

    def encode(self, x: FieldElement) -> int:
        if not self.same_field(x.field):
            raise ParameterError("element belongs to a different field")
        return sum(c * self.p**k for k, c in enumerate(x.coeffs))

    def decode(self, i: int) -> list[int]:
        if not 0 <= i < self.q:
            raise ParameterError(f"vertex index {i} out of range [0, {self.q})")
        out = []
        for _ in range(self.s):
            i, c = divmod(i, self.p)
            out.append(c)
        return out

    # -- vectorized index arithmetic ------------------------------------------

    def digits(self, idx) -> np.ndarray:
        """Coordinates of index array ``idx``; shape ``idx.shape + (s,)``."""
        idx = np.asarray(idx, dtype=np.int64)
        return idx[..., None] // self._powers % self.p

    def from_digits(self, digits) -> np.ndarray:
        return np.asarray(digits, dtype=np.int64) @ self._powers

    def add(self, a, b):
        return self.from_digits((self.digits(a) + self.digits(b)) % self.p)

    def sub(self, a, b):
        return self.from_digits((self.digits(a) - self.digits(b)) % self.p)

    def neg(self, a):
        return self.from_digits(-self.digits(a) % self.p)

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        logs = (self.log[a] + self.log[b]) % (self.q - 1)
        return np.where((a == 0) | (b == 0), 0, self.exp[logs])

    def power(self, a, e: int):
        a = np.asarray(a, dtype=np.int64)
        if e < 0:
            if (a == 0).any():
                raise ZeroDivisionError("zero to a negative power")
        res = self.exp[self.log[a] * e % (self.q - 1)]
        if e == 0:
            return np.ones_like(a)
        return np.where(a == 0, 0, res)

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if (a == 0).any():
            raise ZeroDivisionError("inverse of zero")
        return self.exp[-self.log[a] % (self.q - 1)]

    def mul_matrix(self, c: int) -> np.ndarray:
        """Matrix ``M`` with ``digits(c*x) == digits(x) @ M mod p``.

        Built from polynomial multiplication, independent of the log tables.
        """
        return self._mul_matrix_digits(self.decode(int(c)))

    def scale(self, c: int, idx) -> np.ndarray:
        """``c * idx`` elementwise via the coordinate matrix of ``c``."""
        return self.from_digits(self.digits(idx) @ self.mul_matrix(c) % self.p)

    # -- discrete-log classes -------------------------------------------------

    def class_table_for(self, m: int) -> np.ndarray:
        """One byte per element: ``log mod m`` (entry 0 is unused, set to 0)."""
        m = int(m)
        if not 1 <= m <= 255:
            raise ParameterError(f"class modulus {m} outside [1, 255]")
        if (self.q - 1) % m:
            raise ParameterError(f"class modulus {m} does not divide q-1 = {self.q - 1}")
        table = self._class_tables.get(m)
        if table is None:
            table = np.zeros(self.q, dtype=np.uint8)
            table[1:] = self.log[1:] % m
            table.flags.writeable = False
            self._class_tables[m] = table
        return table

    def residue_class(self, x, m: int | None = None) -> int:
        """Discrete log of nonzero ``x`` (element or index) modulo ``m``."""
        idx = self.encode(x) if isinstance(x, FieldElement) else int(x)
        if idx == 0:
            raise ParameterError("residue class of zero is undefined")
        m = self.class_modulus if m is None else m
        return int(self.class_table_for(m)[idx])

    # -- subfields ----------------------------------------------------------

    def subfield_elements(self, t: int) -> np.ndarray:
        """Sorted indices of the subfield with p^t elements."""
        if t < 1 or self.s % t:
            raise ParameterError(f"subfield degree {t} does not divide {self.s}")
        step = (self.q - 1) // (self.p**t - 1)
        return np.sort(np.concatenate(([0], self.exp[::step])))

    def frobenius(self, idx, k: int = 1):
        """``x -> x**(p**k)`` on index arrays."""
        return self.power(idx, self.p**k)

    # -- bookkeeping --------------------------------------------------------

    @cached_property
    def nbytes(self) -> int:
        return self.exp.nbytes + self.log.nbytes


@dataclass(frozen=True, eq=False)
class FieldElement:
    """Scalar element; arithmetic is plain polynomial arithmetic mod the modulus."""

    field: FiniteField
    coeffs: tuple

    def _check(self, other) -> FieldElement:
        if isinstance(other, (int, np.integer)):
            other = self.field.element([int(other)] + [0] * (self.field.s - 1))
        if not isinstance(other, FieldElement):
            return NotImplemented
        if not self.field.same_field(other.field):
            raise ParameterError("operands belong to different fields")
        return other

    @property
    def index(self) -> int:
        return self.field.encode(self)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.field.same_field(other.field) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field.p, self.field.modulus, self.coeffs))

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        p = self.field.p
        return FieldElement(self.field, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return FieldElement(self.field, tuple(-a % p for a in self.coeffs))

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        f = self.field
        return FieldElement(f, tuple(_poly_mulmod(self.coeffs, other.coeffs, f.modulus, f.p)))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        f = self.field
        if e < 0:
            return self.inverse() ** (-e)
        return FieldElement(f, tuple(_poly_powmod(self.coeffs, e, f.modulus, f.p)))

    def inverse(self) -> FieldElement:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return self ** (self.field.q - 2)

    def __truediv__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __repr__(self):
        return f"FieldElement({self.index} in GF({self.field.p}^{self.field.s}))"


def build_field(p: int, s: int = 1, m: int = 2, max_order: int = DEFAULT_MAX_ORDER) -> FiniteField:
    """Build GF(p^s) with a deterministic primitive modulus.

    ``m`` is the default class modulus for :meth:`FiniteField.residue_class`;
    it has to divide ``p**s - 1``.
    """
    if p % 2 == 0 or not is_prime(p):
        raise ParameterError(f"p = {p} is not an odd prime")
    if s < 1:
        raise ParameterError(f"extension degree s = {s} must be >= 1")
    if not 1 <= m <= 255:
        raise ParameterError(f"class modulus {m} outside [1, 255]")
    q = p**s
    if q > max_order:
        raise ResourceLimitError(f"q = {q} exceeds the field size cap {max_order}")
    if (q - 1) % m:
        raise ParameterError(f"class modulus {m} does not divide q-1 = {q - 1}")
    return FiniteField(p, s, find_primitive_modulus(p, s), class_modulus=m)


def field_from_descriptor(desc: dict, max_order: int = DEFAULT_MAX_ORDER) -> FiniteField:
    p, s = int(desc["p"]), int(desc["s"])
    if p**s > max_order:
        raise ResourceLimitError(f"q = {p**s} exceeds the field size cap {max_order}")
    field = FiniteField(p, s, desc["modulus"], class_modulus=desc.get("class_modulus", 2))
    if "generator_index" in desc and int(desc["generator_index"]) != field.generator_index:
        raise ParameterError("descriptor generator does not match the modulus")
    return field
