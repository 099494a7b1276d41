"""Finite fields F_q, q = p**ell, in a polynomial basis.

Elements are residues of F_p[t] modulo a monic irreducible polynomial of
degree ell.  Coefficient vectors are little endian (coeffs[j] multiplies
t**j), and the index of an element is sum(coeffs[j] * p**j), so the field
enumerates as 0, 1, ..., p-1, t, t+1, ...

When no modulus is supplied, make_field picks the monic irreducible
polynomial of degree ell whose little-endian coefficient vector is
lexicographically least.  That rule is deterministic and reproducible, so
serialized tables always reconstruct the same field.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator, Sequence

import numpy as np

from . import _modp
from .errors import (
    FieldMismatch,
    IndexOutOfRange,
    NonPrime,
    NotABasis,
    ReducibleModulus,
    UnsupportedSize,
    ZeroInverse,
)

MAX_Q = 1 << 20
_TABLE_MAX_P = 13
_TABLE_MAX_ELL = 6


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# ---------------------------------------------------------------------------
# Polynomial helpers over F_p.  Coefficient sequences are little endian and
# only used at construction time, so plain Python loops are fine.


def _poly_rem(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    """Remainder of a modulo m; m must be monic."""
    r = [c % p for c in a]
    dm = len(m) - 1
    while len(r) - 1 >= dm:
        lead = r[-1]
        if lead:
            shift = len(r) - 1 - dm
            for j in range(dm + 1):
                r[shift + j] = (r[shift + j] - lead * m[j]) % p
        r.pop()
    while len(r) < dm:
        r.append(0)
    return r


def _is_irreducible(m: Sequence[int], p: int) -> bool:
    """Exhaustive trial division by monic polynomials of degree <= deg(m)/2."""
    deg = len(m) - 1
    if deg < 1:
        return False
    for e in range(1, deg // 2 + 1):
        for n in range(p**e):
            g = [(n // p**j) % p for j in range(e)] + [1]
            if not any(_poly_rem(m, g, p)):
                return False
    return True


@lru_cache(maxsize=None)
def default_modulus(p: int, ell: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of degree ell over F_p.

    Coverage is bounded (p <= 13, ell <= 6, p**ell <= 2**20); outside that
    range callers must supply a modulus explicitly.
    """
    if not _is_prime(p):
        raise NonPrime(f"characteristic {p!r} is not prime")
    if not (1 <= ell <= _TABLE_MAX_ELL and p <= _TABLE_MAX_P and p**ell <= MAX_Q):
        raise UnsupportedSize(
            f"no built-in modulus for p={p}, ell={ell}; pass one explicitly"
        )
    for n in range(p**ell):
        coeffs = tuple((n // p**j) % p for j in range(ell)) + (1,)
        if _is_irreducible(coeffs, p):
            return coeffs
    raise AssertionError("unreachable: an irreducible of every degree exists")


@dataclass(frozen=True)
class FieldParams:
    """Immutable description of F_q: characteristic, degree, and modulus."""

    p: int
    ell: int
    modulus: tuple[int, ...]

    def __post_init__(self) -> None:
        if not _is_prime(self.p):
            raise NonPrime(f"characteristic {self.p!r} is not prime")
        if self.ell < 1:
            raise UnsupportedSize("extension degree must be >= 1")
        if self.p**self.ell > MAX_Q:
            raise UnsupportedSize(f"q = {self.p}**{self.ell} exceeds {MAX_Q}")
        mod = tuple(int(c) % self.p for c in self.modulus)
        if len(mod) != self.ell + 1 or mod[-1] != 1:
            raise ValueError("modulus must be monic of degree ell")
        object.__setattr__(self, "modulus", mod)
        if not _is_irreducible(mod, self.p):
            raise ReducibleModulus(f"{mod} factors over F_{self.p}")

    @property
    def q(self) -> int:
        return self.p**self.ell

    # -- reduction data ------------------------------------------------

    @cached_property
    def _overflow_rows(self) -> tuple[tuple[int, ...], ...]:
        """Coefficients of t**(ell+k) mod modulus for k = 0..ell-2."""
        if self.ell == 1:
            return ()
        rows = []
        cur = [(-c) % self.p for c in self.modulus[:-1]]  # t**ell
        rows.append(tuple(cur))
        for _ in range(self.ell - 2):
            shifted = [0] + cur[:-1]
            if cur[-1]:
                lead = cur[-1]
                shifted = [
                    (shifted[j] + lead * rows[0][j]) % self.p for j in range(self.ell)
                ]
            cur = shifted
            rows.append(tuple(cur))
        return tuple(rows)

    @cached_property
    def trace_table(self) -> np.ndarray:
        """trace of every element by index, as an int64 array of length q."""
        weights = np.array(
            [trace(self.from_index(self.p**j)) for j in range(self.ell)],
            dtype=np.int64,
        )
        digits = _modp.digits_of(np.arange(self.q), self.p, self.ell)
        return (digits @ weights) % self.p

    # -- element construction -------------------------------------------

    def element(self, coeffs: Sequence[int]) -> "FieldElement":
        c = tuple(int(x) % self.p for x in coeffs)
        if len(c) != self.ell:
            raise ValueError(f"need exactly {self.ell} coefficients")
        return FieldElement(self, c)

    def scalar(self, n: int) -> "FieldElement":
        """The constant polynomial n mod p (embedding of the integers)."""
        return FieldElement(self, (int(n) % self.p,) + (0,) * (self.ell - 1))

    def zero(self) -> "FieldElement":
        return self.scalar(0)

    def one(self) -> "FieldElement":
        return self.scalar(1)

    def from_index(self, i: int) -> "FieldElement":
        i = int(i)
        if not 0 <= i < self.q:
            raise IndexOutOfRange(f"element index {i} outside [0, {self.q})")
        return FieldElement(
            self, tuple((i // self.p**j) % self.p for j in range(self.ell))
        )

    def elements(self) -> Iterator["FieldElement"]:
        for i in range(self.q):
            yield self.from_index(i)

    def __repr__(self) -> str:
        return f"FieldParams(p={self.p}, ell={self.ell}, modulus={self.modulus})"


def make_field(
    p: int, ell: int = 1, modulus: Sequence[int] | None = None
) -> FieldParams:
    """Construct F_{p**ell}; a built-in modulus is used when none is given."""
    if modulus is None:
        modulus = default_modulus(p, ell)
    return FieldParams(p, ell, tuple(int(c) for c in modulus))


@dataclass(frozen=True)
class FieldElement:
    """One element of F_q, as a little-endian coefficient vector."""

    params: FieldParams
    coeffs: tuple[int, ...]

    @property
    def index(self) -> int:
        p = self.params.p
        return sum(c * p**j for j, c in enumerate(self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def _check(self, other: object) -> "FieldElement":
        if not isinstance(other, FieldElement):
            raise TypeError(f"expected FieldElement, got {type(other).__name__}")
        if other.params != self.params:
            raise FieldMismatch("operands belong to different fields")
        return other

    def __add__(self, other: "FieldElement") -> "FieldElement":
        other = self._check(other)
        p = self.params.p
        return FieldElement(
            self.params,
            tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)),
        )

    def __neg__(self) -> "FieldElement":
        p = self.params.p
        return FieldElement(self.params, tuple((-a) % p for a in self.coeffs))

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        return self + (-self._check(other))

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        other = self._check(other)
        p = self.params.p
        ell = self.params.ell
        conv = [0] * (2 * ell - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    conv[i + j] += a * b
        out = list(conv[:ell])
        rows = self.params._overflow_rows
        for k in range(ell - 1):
            hi = conv[ell + k]
            if hi:
                row = rows[k]
                for j in range(ell):
                    out[j] += hi * row[j]
        return FieldElement(self.params, tuple(c % p for c in out))

    def scale(self, k: int) -> "FieldElement":
        """Prime-field scalar multiple k * self."""
        p = self.params.p
        k = int(k) % p
        return FieldElement(self.params, tuple((k * c) % p for c in self.coeffs))

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroInverse("0 has no multiplicative inverse")
        return self ** (self.params.q - 2)

    def __pow__(self, e: int) -> "FieldElement":
        e = int(e)
        if e < 0:
            return self.inverse() ** (-e)
        result = self.params.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __truediv__(self, other: "FieldElement") -> "FieldElement":
        return self * self._check(other).inverse()

    def __repr__(self) -> str:
        if self.params.ell == 1:
            return f"F{self.params.p}({self.coeffs[0]})"
        terms = []
        for j, c in enumerate(self.coeffs):
            if not c:
                continue
            if j == 0:
                terms.append(str(c))
            else:
                head = "" if c == 1 else str(c)
                terms.append(f"{head}t" if j == 1 else f"{head}t^{j}")
        body = " + ".join(terms) if terms else "0"
        return f"F{self.params.q}({body})"


def field_arithmetic(
    op: str, a: FieldElement, b: FieldElement | int | None = None
) -> FieldElement:
    """Named dispatch over the ring operations; pow takes an integer exponent."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    if op == "inv":
        return a.inverse()
    if op == "pow":
        return a ** int(b)
    raise ValueError(f"unknown field operation {op!r}")


def trace(a: FieldElement) -> int:
    """Absolute trace Tr(a) = a + a**p + ... + a**(p**(ell-1)), in [0, p)."""
    acc = a
    frob = a
    for _ in range(a.params.ell - 1):
        frob = frob**a.params.p
        acc = acc + frob
    if any(acc.coeffs[1:]):
        raise AssertionError("trace image left the prime field")
    return acc.coeffs[0]


@dataclass(frozen=True)
class FpBasis:
    """An F_p-basis of F_q, with digit decomposition against it."""

    params: FieldParams
    elements: tuple[FieldElement, ...]

    def __post_init__(self) -> None:
        if len(self.elements) != self.params.ell:
            raise NotABasis(f"need exactly {self.params.ell} elements")
        for e in self.elements:
            if e.params != self.params:
                raise FieldMismatch("basis element from a different field")
        if self._inverse_matrix is None:
            raise NotABasis("elements are linearly dependent over F_p")

    @cached_property
    def matrix(self) -> np.ndarray:
        """Columns are the coefficient vectors of the basis elements."""
        m = np.array([e.coeffs for e in self.elements], dtype=np.int64).T
        m.setflags(write=False)
        return m

    @cached_property
    def _inverse_matrix(self) -> np.ndarray | None:
        return _modp.invert_matrix(np.array(self.matrix), self.params.p)

    def decompose(self, a: FieldElement) -> tuple[int, ...]:
        if a.params != self.params:
            raise FieldMismatch("element from a different field")
        digits = (self._inverse_matrix @ np.array(a.coeffs)) % self.params.p
        return tuple(int(d) for d in digits)

    def combine(self, digits: Sequence[int]) -> FieldElement:
        if len(digits) != self.params.ell:
            raise ValueError(f"need exactly {self.params.ell} digits")
        coeffs = (self.matrix @ (np.array(digits, dtype=np.int64) % self.params.p)) % self.params.p
        return self.params.element([int(c) for c in coeffs])


def standard_fp_basis(params: FieldParams) -> FpBasis:
    """The polynomial basis 1, t, ..., t**(ell-1)."""
    return FpBasis(params, tuple(params.from_index(params.p**j) for j in range(params.ell)))


# ---------------------------------------------------------------------------
# Vectorized arithmetic on arrays of element indices.  These are the dense
# work-horses behind table operations; semantics match the element methods
# and the test suite ties the two together exhaustively on small fields.


def vec_add(params: FieldParams, a, b) -> np.ndarray:
    return _modp.add_indices(a, b, params.p, params.ell)


def vec_sub(params: FieldParams, a, b) -> np.ndarray:
    return _modp.sub_indices(a, b, params.p, params.ell)


def vec_neg(params: FieldParams, a) -> np.ndarray:
    return _modp.neg_indices(a, params.p, params.ell)


@lru_cache(maxsize=None)
def _overflow_matrix(params: FieldParams) -> np.ndarray:
    m = np.array(params._overflow_rows, dtype=np.int64).reshape(
        params.ell - 1 if params.ell > 1 else 0, params.ell
    )
    m.setflags(write=False)
    return m


def vec_mul(params: FieldParams, a, b) -> np.ndarray:
    """Componentwise field product of two index arrays."""
    p, ell = params.p, params.ell
    da = _modp.digits_of(a, p, ell)
    db = _modp.digits_of(b, p, ell)
    shape = np.broadcast_shapes(da.shape, db.shape)[:-1]
    conv = np.zeros(shape + (2 * ell - 1,), dtype=np.int64)
    for i in range(ell):
        for j in range(ell):
            conv[..., i + j] += da[..., i] * db[..., j]
    out = conv[..., :ell]
    if ell > 1:
        out = out + conv[..., ell:] @ _overflow_matrix(params)
    return _modp.index_of_digits(out % p, p)


@lru_cache(maxsize=None)
def mul_matrix(params: FieldParams, u_index: int) -> np.ndarray:
    """Matrix of multiplication by u on little-endian coefficient vectors."""
    u = params.from_index(u_index)
    cols = [(u * params.from_index(params.p**j)).coeffs for j in range(params.ell)]
    m = np.array(cols, dtype=np.int64).T
    m.setflags(write=False)
    return m


def vec_scalar_mul(params: FieldParams, a, u_index: int) -> np.ndarray:
    """Componentwise product of an index array with the fixed element u."""
    return _modp.apply_linear(a, mul_matrix(params, int(u_index)), params.p)


@lru_cache(maxsize=None)
def trace_weights(params: FieldParams, u_index: int) -> np.ndarray:
    """w[j] = Tr(u * t**j); then Tr(u*x) = digits(x) . w mod p."""
    u = params.from_index(u_index)
    w = np.array(
        [trace(u * params.from_index(params.p**j)) for j in range(params.ell)],
        dtype=np.int64,
    )
    w.setflags(write=False)
    return w
