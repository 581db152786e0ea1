"""Exact arithmetic in k = F_{p^e} and in the length-two Witt ring W2(k).

Field elements are coefficient tuples over Z/p modulo a user supplied
irreducible polynomial.  Witt vectors carry their two Witt coordinates
``(a0, a1)``; addition uses the integral carry polynomial

    C(a, b) = (a^p + b^p - (a + b)^p) / p   (mod p)

and multiplication ``(a0 b0, a0^p b1 + b0^p a1)``.  For k = F_p the map
``(a0, a1) -> a0^p + p a1`` is a ring isomorphism onto Z/p^2, which the
test-suite uses as an oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

from .errors import BadParams, DivisionByZero, NotDivisibleByP, ParamMismatch

MIN_PRIME = 3
MAX_PRIME = 13
MAX_DEGREE = 3


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % q for q in range(2, int(n**0.5) + 1))


def _poly_eval_mod(coeffs, x, p):
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % p
    return acc


@dataclass(frozen=True)
class FieldParams:
    """Parameters of k = F_{p^e}.

    ``modulus`` is the dense coefficient list ``[c0, c1, ..., ce]`` (low degree
    first) of a monic degree-e irreducible polynomial; it is ignored for e = 1.
    """

    p: int
    e: int = 1
    modulus: tuple = ()
    _carry: tuple = field(init=False, repr=False, compare=False)
    _carry_table: tuple | None = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        p, e = self.p, self.e
        if not isinstance(p, int) or not _is_prime(p) or p < MIN_PRIME or p > MAX_PRIME:
            raise BadParams(f"p must be an odd prime in [{MIN_PRIME}, {MAX_PRIME}], got {p!r}")
        if not isinstance(e, int) or not 1 <= e <= MAX_DEGREE:
            raise BadParams(f"extension degree must be in [1, {MAX_DEGREE}], got {e!r}")
        if e == 1:
            object.__setattr__(self, "modulus", ())
        else:
            mod = tuple(int(c) % p for c in self.modulus)
            if len(mod) != e + 1 or mod[-1] == 0:
                raise BadParams(f"modulus must have exactly {e + 1} coefficients with nonzero leading term")
            lead_inv = pow(mod[-1], p - 2, p)
            mod = tuple(c * lead_inv % p for c in mod)
            # degree <= 3: irreducible iff no root in F_p
            roots = [x for x in range(p) if _poly_eval_mod(mod, x, p) == 0]
            if roots:
                raise BadParams(f"modulus {list(mod)} is reducible over F_{p} (root {roots[0]})")
            object.__setattr__(self, "modulus", mod)
        # C(a, b) = sum_k carry[k] * a^k * b^(p-k), k = 1..p-1
        carry = tuple((-(comb(p, k) // p)) % p for k in range(1, p))
        object.__setattr__(self, "_carry", carry)
        table = None
        if e == 1:
            table = tuple(
                tuple(((a**p + b**p - (a + b) ** p) // p) % p for b in range(p)) for a in range(p)
            )
        object.__setattr__(self, "_carry_table", table)

    @property
    def order(self) -> int:
        return self.p**self.e

    def __call__(self, value) -> FieldElem:
        """Coerce an int or a coefficient sequence into k."""
        if isinstance(value, FieldElem):
            if value.params != self:
                raise ParamMismatch("field element belongs to a different field")
            return value
        if isinstance(value, int):
            return FieldElem(self, (value % self.p,) + (0,) * (self.e - 1))
        coeffs = [int(c) % self.p for c in value]
        if len(coeffs) > self.e:
            raise BadParams(f"too many coefficients for F_{self.p}^{self.e}")
        coeffs += [0] * (self.e - len(coeffs))
        return FieldElem(self, tuple(coeffs))

    def zero(self) -> FieldElem:
        return self(0)

    def one(self) -> FieldElem:
        return self(1)

    def gen(self) -> FieldElem:
        """The class of x in F_p[x]/(modulus); equals 1's neighbour for e = 1."""
        if self.e == 1:
            raise BadParams("F_p has no polynomial generator")
        return self([0, 1])

    def elements(self):
        """Enumerate every element of k (in base-p order)."""
        p, e = self.p, self.e
        for idx in range(p**e):
            rep = []
            for _ in range(e):
                idx, r = divmod(idx, p)
                rep.append(r)
            yield FieldElem(self, tuple(rep))

    def witt(self, a0, a1=0) -> Witt2Elem:
        return Witt2Elem(self(a0), self(a1))

    def witt_from_int(self, m: int) -> Witt2Elem:
        """Image of the integer m under Z -> W2(F_p) -> W2(k)."""
        p = self.p
        r = m % p
        return Witt2Elem(self(r), self(((m - r**p) // p) % p))


class FieldElem:
    """An element of F_{p^e} with canonical coefficients in [0, p)."""

    __slots__ = ("params", "rep")

    def __init__(self, params: FieldParams, rep: tuple):
        self.params = params
        self.rep = rep

    def _check(self, other):
        if self.params is not other.params and self.params != other.params:
            raise ParamMismatch(f"{self.params} vs {other.params}")

    def _coerce(self, other):
        if isinstance(other, int):
            return self.params(other)
        if isinstance(other, FieldElem):
            self._check(other)
            return other
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.params.p
        return FieldElem(self.params, tuple((a + b) % p for a, b in zip(self.rep, other.rep)))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.params.p
        return FieldElem(self.params, tuple((a - b) % p for a, b in zip(self.rep, other.rep)))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        p = self.params.p
        return FieldElem(self.params, tuple(-a % p for a in self.rep))

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        P = self.params
        p, e = P.p, P.e
        if e == 1:
            return FieldElem(P, (self.rep[0] * other.rep[0] % p,))
        prod = [0] * (2 * e - 1)
        for i, a in enumerate(self.rep):
            if a:
                for j, b in enumerate(other.rep):
                    prod[i + j] += a * b
        mod = P.modulus
        for k in range(2 * e - 2, e - 1, -1):
            c = prod[k] % p
            if c:
                for i in range(e):
                    prod[k - e + i] -= c * mod[i]
        return FieldElem(P, tuple(c % p for c in prod[:e]))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.params.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> FieldElem:
        return ff_inv(self)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * ff_inv(other)

    def frobenius(self) -> FieldElem:
        return frobenius_k(self)

    def inverse_frobenius(self) -> FieldElem:
        """The unique y with y^p = self, i.e. self^(p^(e-1))."""
        if self.params.e == 1:
            return self
        return self ** (self.params.p ** (self.params.e - 1))

    def is_zero(self) -> bool:
        return not any(self.rep)

    def __bool__(self):
        return any(self.rep)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.params(other)
        if not isinstance(other, FieldElem):
            return NotImplemented
        return self.rep == other.rep and self.params == other.params

    def __hash__(self):
        return hash(self.rep)

    def __repr__(self):
        return f"FieldElem({render_field(self)!r}, p={self.params.p}, e={self.params.e})"

    def __str__(self):
        return render_field(self)


class Witt2Elem:
    """A length-two Witt vector ``(a0, a1)`` over k."""

    __slots__ = ("a0", "a1")

    def __init__(self, a0: FieldElem, a1: FieldElem):
        if a0.params is not a1.params and a0.params != a1.params:
            raise ParamMismatch("Witt coordinates over different fields")
        self.a0 = a0
        self.a1 = a1

    @property
    def params(self) -> FieldParams:
        return self.a0.params

    def _coerce(self, other):
        if isinstance(other, int):
            return self.params.witt_from_int(other)
        if isinstance(other, Witt2Elem):
            if self.a0.params is not other.a0.params and self.a0.params != other.a0.params:
                raise ParamMismatch(f"{self.params} vs {other.params}")
            return other
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return witt_add(self, other)

    __radd__ = __add__

    def __neg__(self):
        # p odd: [-1] = -1, so negation is coordinatewise
        return Witt2Elem(-self.a0, -self.a1)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return witt_add(self, -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return witt_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.params.witt(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> Witt2Elem:
        """Inverse of a unit (a0 != 0): ``(1/a0, -a1 / a0^(2p))``."""
        if self.a0.is_zero():
            raise DivisionByZero("element of pW2 is not a unit")
        inv0 = ff_inv(self.a0)
        return Witt2Elem(inv0, -(self.a1 * inv0.frobenius() ** 2))

    def reduce(self) -> FieldElem:
        return self.a0

    def is_zero(self) -> bool:
        return self.a0.is_zero() and self.a1.is_zero()

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.params.witt_from_int(other)
        if not isinstance(other, Witt2Elem):
            return NotImplemented
        return self.a0 == other.a0 and self.a1 == other.a1

    def __hash__(self):
        return hash((self.a0.rep, self.a1.rep))

    def __repr__(self):
        return f"Witt2Elem({render_witt(self)!r}, p={self.params.p}, e={self.params.e})"

    def __str__(self):
        return render_witt(self)


def ff_inv(x: FieldElem) -> FieldElem:
    if x.is_zero():
        raise DivisionByZero("inverse of 0 in k")
    P = x.params
    if P.e == 1:
        return FieldElem(P, (pow(x.rep[0], P.p - 2, P.p),))
    return x ** (P.order - 2)


def frobenius_k(x: FieldElem) -> FieldElem:
    if x.params.e == 1:
        return x
    return x ** x.params.p


def carry(a: FieldElem, b: FieldElem) -> FieldElem:
    """The Witt carry C(a, b) = (a^p + b^p - (a+b)^p)/p reduced mod p."""
    P = a.params
    if P._carry_table is not None:
        return FieldElem(P, (P._carry_table[a.rep[0]][b.rep[0]],))
    if a.is_zero() or b.is_zero():
        return P.zero()
    p = P.p
    apow = [P.one()]
    bpow = [P.one()]
    for _ in range(p - 1):
        apow.append(apow[-1] * a)
        bpow.append(bpow[-1] * b)
    acc = P.zero()
    for k, c in enumerate(P._carry, start=1):
        if c:
            acc = acc + apow[k] * bpow[p - k] * c
    return acc


def witt_add(x: Witt2Elem, y: Witt2Elem) -> Witt2Elem:
    if x.a0.params is not y.a0.params and x.params != y.params:
        raise ParamMismatch(f"{x.params} vs {y.params}")
    return Witt2Elem(x.a0 + y.a0, x.a1 + y.a1 + carry(x.a0, y.a0))


def witt_mul(x: Witt2Elem, y: Witt2Elem) -> Witt2Elem:
    if x.a0.params is not y.a0.params and x.params != y.params:
        raise ParamMismatch(f"{x.params} vs {y.params}")
    return Witt2Elem(
        x.a0 * y.a0,
        frobenius_k(x.a0) * y.a1 + frobenius_k(y.a0) * x.a1,
    )


def teichmuller(x: FieldElem) -> Witt2Elem:
    return Witt2Elem(x, x.params.zero())


def witt_div_p(x: Witt2Elem) -> FieldElem:
    """The y in k with p * [y] = x; requires x in pW2."""
    if not x.a0.is_zero():
        raise NotDivisibleByP(f"{render_witt(x)} is not divisible by p", witness=x)
    return x.a1.inverse_frobenius()


def witt_p(params: FieldParams) -> Witt2Elem:
    """The element p = (0, 1) of W2(k)."""
    return Witt2Elem(params.zero(), params.one())


def witt_to_int(x: Witt2Elem) -> int:
    """The isomorphism W2(F_p) -> Z/p^2, (a0, a1) -> a0^p + p a1."""
    P = x.params
    if P.e != 1:
        raise BadParams("integer image only defined over F_p")
    p = P.p
    return (x.a0.rep[0] ** p + p * x.a1.rep[0]) % (p * p)


def render_field(x: FieldElem) -> str:
    """Canonical text: an integer for e = 1, otherwise ``{c_k x^k + ...}``."""
    if x.params.e == 1:
        return str(x.rep[0])
    parts = []
    for k in range(len(x.rep) - 1, -1, -1):
        c = x.rep[k]
        if not c:
            continue
        if k == 0:
            parts.append(str(c))
        else:
            mono = "x" if k == 1 else f"x^{k}"
            parts.append(mono if c == 1 else f"{c}{mono}")
    return "{" + ("+".join(parts) or "0") + "}"


def render_witt(x: Witt2Elem) -> str:
    if x.a1.is_zero():
        return render_field(x.a0)
    return f"({render_field(x.a0)},{render_field(x.a1)})"
