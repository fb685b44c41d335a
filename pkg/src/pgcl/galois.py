"""Small finite fields GF(q), q in {2, 3, 4, 5, 7, 8, 9}, as lookup tables.

Elements are integers 0..q-1.  For q = p**e with e > 1 an element encodes the
polynomial sum(d_i * x**i) through its base-p digits, little-endian, so
``3 = 1 + x`` in GF(4) and ``5 = 2 + x`` in GF(9).
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

SUPPORTED_ORDERS = (2, 3, 4, 5, 7, 8, 9)

# coefficients of the monic modulus, constant term first
IRREDUCIBLE = {
    4: (1, 1, 1),  # x^2 + x + 1
    8: (1, 1, 0, 1),  # x^3 + x + 1
    9: (1, 0, 1),  # x^2 + 1
}

_PRIME_POWER = {2: (2, 1), 3: (3, 1), 4: (2, 2), 5: (5, 1), 7: (7, 1), 8: (2, 3), 9: (3, 2)}


class FieldError(ValueError):
    pass


def _digits(value: int, p: int, e: int) -> list[int]:
    out = []
    for _ in range(e):
        value, d = divmod(value, p)
        out.append(d)
    return out


def _undigits(digits, p: int) -> int:
    value = 0
    for d in reversed(digits):
        value = value * p + d
    return value


def _poly_mul_mod(a: list[int], b: list[int], p: int, modulus: tuple[int, ...]) -> list[int]:
    e = len(modulus) - 1
    prod = [0] * (2 * e - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    for k in range(len(prod) - 1, e - 1, -1):
        c = prod[k]
        if c:
            for i, mi in enumerate(modulus):
                prod[k - e + i] = (prod[k - e + i] - c * mi) % p
    return prod[:e]


class Field:
    """GF(q) with full addition/multiplication tables.

    ``add``, ``mul``, ``neg``, ``inv`` are numpy arrays usable for vectorized
    fancy indexing.  ``inv[0]`` is set to 0 but :meth:`inverse` refuses 0.
    """

    def __init__(self, q: int):
        if q not in _PRIME_POWER:
            raise FieldError(f"unsupported order {q}")
        p, e = _PRIME_POWER[q]
        self.q, self.p, self.e = q, p, e
        add = np.zeros((q, q), dtype=np.int64)
        mul = np.zeros((q, q), dtype=np.int64)
        if e == 1:
            for a in range(q):
                for b in range(q):
                    add[a, b] = (a + b) % q
                    mul[a, b] = (a * b) % q
        else:
            modulus = IRREDUCIBLE[q]
            digs = [_digits(a, p, e) for a in range(q)]
            for a in range(q):
                for b in range(q):
                    add[a, b] = _undigits([(x + y) % p for x, y in zip(digs[a], digs[b])], p)
                    mul[a, b] = _undigits(_poly_mul_mod(digs[a], digs[b], p, modulus), p)
        self.add = add
        self.mul = mul
        self.neg = np.array([int(np.nonzero(add[a] == 0)[0][0]) for a in range(q)], dtype=np.int64)
        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            inv[a] = int(np.nonzero(mul[a] == 1)[0][0])
        self.inv = inv
        self.sub = add[:, self.neg]
        frob = np.zeros(q, dtype=np.int64)
        for a in range(q):
            frob[a] = self.power(a, p)
        self.frob = frob
        self._check_axioms()

    def __repr__(self) -> str:
        return f"Field(q={self.q})"

    # -- element helpers -------------------------------------------------
    def power(self, a: int, k: int) -> int:
        result = 1
        for _ in range(k):
            result = int(self.mul[result, a])
        return result

    def inverse(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in GF(%d)" % self.q)
        return int(self.inv[a])

    def frobenius(self, a: int, times: int = 1) -> int:
        for _ in range(times % self.e if self.e > 1 else 0):
            a = int(self.frob[a])
        return a

    def solve_linear_2x2(self, m, rhs):
        """Solve [[a, b], [c, d]] (x, y)^T = rhs over the field."""
        (a, b), (c, d) = m
        det = self.sub[self.mul[a, d], self.mul[b, c]]
        if det == 0:
            raise ZeroDivisionError("singular 2x2 system")
        di = self.inv[det]
        r0, r1 = rhs
        x = self.mul[di, self.sub[self.mul[d, r0], self.mul[b, r1]]]
        y = self.mul[di, self.sub[self.mul[a, r1], self.mul[c, r0]]]
        return int(x), int(y)

    def _check_axioms(self) -> None:
        q = self.q
        add, mul = self.add, self.mul
        idx = np.arange(q)
        if not (np.array_equal(add, add.T) and np.array_equal(mul, mul.T)):
            raise FieldError("tables not commutative")
        if not (np.array_equal(add[0], idx) and np.array_equal(mul[1], idx)):
            raise FieldError("bad identities")
        a, b, c = np.meshgrid(idx, idx, idx, indexing="ij")
        if not np.array_equal(add[add[a, b], c], add[a, add[b, c]]):
            raise FieldError("addition not associative")
        if not np.array_equal(mul[mul[a, b], c], mul[a, mul[b, c]]):
            raise FieldError("multiplication not associative")
        if not np.array_equal(mul[a, add[b, c]], add[mul[a, b], mul[a, c]]):
            raise FieldError("not distributive")
        if any(mul[x, self.inv[x]] != 1 for x in range(1, q)):
            raise FieldError("missing inverse")


@lru_cache(maxsize=None)
def make_field(q: int) -> Field:
    return Field(q)
