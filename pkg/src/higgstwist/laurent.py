"""Sparse multivariate Laurent polynomials over k or W2(k).

A :class:`RingTag` names the coordinate ring of one affine patch: the level
(``MOD_P`` for O_U, ``MOD_P2`` for its W2-lift O_U'), the number of
coordinates and the set of coordinates that are inverted.  Variables are
0-based in the Python API and rendered ``t1 .. td`` in text.

Text grammar (the canonical rendering is the output of :func:`render`)::

    poly   := "0" | ["-"] term (("+" | "-") term)*
    term   := factor ("*" factor)*
    factor := coef | var ["^" ["-"] digits]
    var    := "t" digits                       (1-based)
    coef   := digits | fe | "(" fe "," fe ")"  (the pair only at level MOD_P2)
    fe     := digits | "{" fpoly "}"           (fpoly in the generator x)

A bare integer ``m`` read at level MOD_P2 is the pair of its two lowest
base-p digits, ``[m mod p] + p [(m div p) mod p]``.  It agrees with the ring
integer when m < p or p | m, so ``5*t1^2`` is ``(0,1)*t1^2`` when p = 5, and
it keeps the rendering ``a0`` of a Teichmuller coefficient (a0, 0) stable
under parsing.  Terms render in graded-lex order, highest first.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import reduce

from .arith import FieldElem, FieldParams, Witt2Elem, render_field, render_witt, teichmuller, witt_div_p
from .errors import (
    BadIndex,
    ExponentOverflow,
    NonInvertibleImage,
    NotAUnit,
    NotDivisibleByP,
    PolynomialSyntaxError,
    TagMismatch,
    WrongLevel,
)

MOD_P = "ModP"
MOD_P2 = "ModP2"
MAX_EXPONENT = 2**15


@dataclass(frozen=True)
class RingTag:
    level: str
    nvars: int
    inverted: frozenset
    field: FieldParams

    def __post_init__(self):
        if self.level not in (MOD_P, MOD_P2):
            raise ValueError(f"unknown level {self.level!r}")
        if self.nvars < 1:
            raise ValueError("need at least one coordinate")
        inv = frozenset(self.inverted)
        if not inv <= set(range(self.nvars)):
            raise BadIndex(f"inverted set {sorted(inv)} out of range for {self.nvars} variables")
        object.__setattr__(self, "inverted", inv)

    def with_level(self, level: str) -> RingTag:
        return RingTag(level, self.nvars, self.inverted, self.field)

    def union(self, *others: RingTag) -> RingTag:
        """Tag of the overlap ring (localize at every inverted coordinate)."""
        inv = set(self.inverted)
        for o in others:
            if (o.level, o.nvars, o.field) != (self.level, self.nvars, self.field):
                raise TagMismatch(f"cannot intersect {self} and {o}")
            inv |= o.inverted
        return RingTag(self.level, self.nvars, frozenset(inv), self.field)

    def coeff(self, value):
        """Coerce an int / field element / Witt vector into the coefficient ring."""
        F = self.field
        if self.level == MOD_P:
            if isinstance(value, Witt2Elem):
                raise WrongLevel("Witt coefficient in a ModP ring")
            return F(value)
        if isinstance(value, Witt2Elem):
            return value
        if isinstance(value, FieldElem):
            return teichmuller(F(value))
        return F.witt_from_int(value)

    def zero(self) -> LaurentPoly:
        return LaurentPoly(self, {})

    def one(self) -> LaurentPoly:
        return self.const(1)

    def const(self, c) -> LaurentPoly:
        c = self.coeff(c)
        return LaurentPoly(self, {(0,) * self.nvars: c} if c else {})

    def var(self, i: int, power: int = 1) -> LaurentPoly:
        if not 0 <= i < self.nvars:
            raise BadIndex(f"variable index {i} out of range")
        exp = [0] * self.nvars
        exp[i] = power
        return LaurentPoly(self, {tuple(exp): self.coeff(1)})

    def gens(self):
        return [self.var(i) for i in range(self.nvars)]

    def monomial(self, c, exp) -> LaurentPoly:
        return LaurentPoly(self, {tuple(exp): self.coeff(c)})

    def __str__(self):
        inv = ",".join(f"t{i + 1}" for i in sorted(self.inverted))
        return f"{self.level}[{self.nvars} vars; inverted {{{inv}}}]"


def _check_exponents(exp, tag):
    for i, a in enumerate(exp):
        if a < 0 and i not in tag.inverted:
            raise TagMismatch(f"negative exponent of t{i + 1} in a ring where it is not inverted")
        if abs(a) > MAX_EXPONENT:
            raise ExponentOverflow(f"exponent {a} of t{i + 1} exceeds {MAX_EXPONENT}")


class LaurentPoly:
    """Immutable sparse Laurent polynomial; ``terms`` maps exponent tuples to nonzero coefficients."""

    __slots__ = ("tag", "terms", "_hash")

    def __init__(self, tag: RingTag, terms: dict, check: bool = True):
        self.tag = tag
        if check:
            clean = {}
            for exp, c in terms.items():
                exp = tuple(exp)
                if len(exp) != tag.nvars:
                    raise BadIndex(f"exponent {exp} has wrong length for {tag.nvars} variables")
                if c:
                    _check_exponents(exp, tag)
                    clean[exp] = c
            terms = clean
        self.terms = terms
        self._hash = None

    # -- ring structure -------------------------------------------------
    def _same(self, other):
        if isinstance(other, LaurentPoly):
            if other.tag is not self.tag and other.tag != self.tag:
                raise TagMismatch(f"{self.tag} vs {other.tag}")
            return other
        if isinstance(other, (int, FieldElem, Witt2Elem)):
            return self.tag.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._same(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for exp, c in other.terms.items():
            s = terms.get(exp)
            if s is None:
                terms[exp] = c
            else:
                s = s + c
                if s:
                    terms[exp] = s
                else:
                    del terms[exp]
        return LaurentPoly(self.tag, terms, check=False)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.tag, {e: -c for e, c in self.terms.items()}, check=False)

    def __sub__(self, other):
        other = self._same(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._same(other)
        if other is NotImplemented:
            return other
        if not self.terms or not other.terms:
            return LaurentPoly(self.tag, {}, check=False)
        terms = {}
        get = terms.get
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                s = get(exp)
                terms[exp] = c if s is None else s + c
        terms = {e: c for e, c in terms.items() if c}
        for exp in terms:
            for a in exp:
                if abs(a) > MAX_EXPONENT:
                    raise ExponentOverflow(f"exponent {a} exceeds {MAX_EXPONENT}")
        return LaurentPoly(self.tag, terms, check=False)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return lp_invert(self) ** (-n)
        result = self.tag.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, FieldElem, Witt2Elem)):
            other = self.tag.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.tag == other.tag and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.tag, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def scale(self, c) -> LaurentPoly:
        c = self.tag.coeff(c)
        terms = {e: a * c for e, a in self.terms.items()}
        return LaurentPoly(self.tag, {e: a for e, a in terms.items() if a}, check=False)

    def retag(self, tag: RingTag) -> LaurentPoly:
        """Include into a ring with more inverted coordinates (or re-check membership)."""
        if tag == self.tag:
            return self
        if (tag.level, tag.nvars, tag.field) != (self.tag.level, self.tag.nvars, self.tag.field):
            raise TagMismatch(f"cannot move {self.tag} polynomial into {tag}")
        for exp in self.terms:
            _check_exponents(exp, tag)
        return LaurentPoly(tag, self.terms, check=False)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    # -- calculus and maps ----------------------------------------------
    def deriv(self, i: int) -> LaurentPoly:
        return lp_deriv(self, i)

    def __repr__(self):
        return f"LaurentPoly({render(self)!r}, {self.tag})"

    def __str__(self):
        return render(self)


# -- operations ----------------------------------------------------------


def lp_arith(a: LaurentPoly, b: LaurentPoly, which: str) -> LaurentPoly:
    if a.tag != b.tag:
        raise TagMismatch(f"{a.tag} vs {b.tag}")
    if which == "add":
        return a + b
    if which == "sub":
        return a - b
    if which == "mul":
        return a * b
    raise ValueError(f"unknown operation {which!r}")


def _int_coeff(tag, m, cache={}):
    key = (tag.level, tag.field, m)
    c = cache.get(key)
    if c is None:
        c = cache[key] = tag.coeff(m)
    return c


def lp_deriv(f: LaurentPoly, i: int) -> LaurentPoly:
    tag = f.tag
    if not 0 <= i < tag.nvars:
        raise BadIndex(f"no variable with index {i} (have {tag.nvars})")
    terms = {}
    for exp, c in f.terms.items():
        a = exp[i]
        if a == 0:
            continue
        c = c * _int_coeff(tag, a)
        if c:
            new = list(exp)
            new[i] = a - 1
            terms[tuple(new)] = c
    return LaurentPoly(tag, terms, check=False)


def lp_invert(f: LaurentPoly) -> LaurentPoly:
    """Inverse of a unit.

    Over k the units of a Laurent ring are the monomials ``c t^a`` with ``a``
    supported on inverted coordinates.  Over W2(k), f = u + r with u the
    Teichmuller lift of the reduction and r in pO, so 1/f = 1/u - r/u^2.
    """
    tag = f.tag
    red = f if tag.level == MOD_P else lp_reduce(f)
    if len(red.terms) != 1:
        raise NotAUnit(f"{render(red)} is not a unit (not a monomial mod p)", witness=red)
    (exp, c), = red.terms.items()
    bad = [i for i, a in enumerate(exp) if a and i not in tag.inverted]
    if bad:
        raise NotAUnit(f"{render(red)} is not a unit: t{bad[0] + 1} is not inverted", witness=red)
    inv_exp = tuple(-a for a in exp)
    if tag.level == MOD_P:
        return LaurentPoly(tag, {inv_exp: c.inverse()}, check=False)
    u = LaurentPoly(tag, {exp: teichmuller(c)}, check=False)
    u_inv = LaurentPoly(tag, {inv_exp: teichmuller(c.inverse())}, check=False)
    r = f - u
    return u_inv - u_inv * u_inv * r


def lp_substitute(f: LaurentPoly, images) -> LaurentPoly:
    """Image of f under the ring map t_i -> images[i]."""
    images = list(images)
    if len(images) != f.tag.nvars:
        raise BadIndex(f"need {f.tag.nvars} images, got {len(images)}")
    tag = images[0].tag
    for g in images:
        if g.tag != tag:
            raise TagMismatch("images live in different rings")
    if (f.tag.level, f.tag.nvars, f.tag.field) != (tag.level, tag.nvars, tag.field):
        raise TagMismatch(f"cannot substitute {tag} images into {f.tag} polynomial")
    inverses = {}
    for i in f.tag.inverted:
        try:
            inverses[i] = lp_invert(images[i])
        except NotAUnit as exc:
            raise NonInvertibleImage(f"image of t{i + 1} is not invertible: {exc}", witness=exc.witness) from exc
    powers = {}

    def power(i, a):
        key = (i, a)
        if key not in powers:
            base = images[i] if a > 0 else inverses[i]
            powers[key] = base ** abs(a)
        return powers[key]

    result = tag.zero()
    for exp, c in f.terms.items():
        term = tag.const(c)
        for i, a in enumerate(exp):
            if a:
                term = term * power(i, a)
        result = result + term
    return result


def lp_frobenius_pullback(f: LaurentPoly) -> LaurentPoly:
    """f^p computed termwise: c t^a -> c^p t^(p a)."""
    if f.tag.level != MOD_P:
        raise WrongLevel("Frobenius pullback is defined on the closed fibre only")
    p = f.tag.field.p
    terms = {}
    for exp, c in f.terms.items():
        new = tuple(p * a for a in exp)
        for a in new:
            if abs(a) > MAX_EXPONENT:
                raise ExponentOverflow(f"exponent {a} exceeds {MAX_EXPONENT}")
        terms[new] = c.frobenius()
    return LaurentPoly(f.tag, terms, check=False)


def lp_sigma(f: LaurentPoly) -> LaurentPoly:
    """Witt Frobenius (a0, a1) -> (a0^p, a1^p) on every coefficient of a ModP2 polynomial."""
    if f.tag.level != MOD_P2:
        raise WrongLevel("sigma acts on ModP2 coefficients")
    return LaurentPoly(f.tag, {e: Witt2Elem(c.a0.frobenius(), c.a1.frobenius()) for e, c in f.terms.items()}, check=False)


def lp_reduce(f: LaurentPoly) -> LaurentPoly:
    if f.tag.level != MOD_P2:
        raise WrongLevel("reduction mod p needs a ModP2 polynomial")
    tag = f.tag.with_level(MOD_P)
    return LaurentPoly(tag, {e: c.a0 for e, c in f.terms.items() if c.a0}, check=False)


def lp_div_p(f: LaurentPoly) -> LaurentPoly:
    if f.tag.level != MOD_P2:
        raise WrongLevel("division by p needs a ModP2 polynomial")
    tag = f.tag.with_level(MOD_P)
    terms = {}
    for exp, c in f.terms.items():
        try:
            terms[exp] = witt_div_p(c)
        except NotDivisibleByP:
            raise NotDivisibleByP(
                f"term {render_term(exp, c)} is not divisible by p", witness=(exp, c)
            ) from None
    return LaurentPoly(tag, terms, check=False)


def lp_lift(f: LaurentPoly) -> LaurentPoly:
    if f.tag.level != MOD_P:
        raise WrongLevel("lifting needs a ModP polynomial")
    tag = f.tag.with_level(MOD_P2)
    return LaurentPoly(tag, {e: teichmuller(c) for e, c in f.terms.items()}, check=False)


def times_p(f: LaurentPoly) -> LaurentPoly:
    """p * (any lift of f), as a ModP2 polynomial; depends only on f."""
    if f.tag.level != MOD_P:
        raise WrongLevel("times_p takes a ModP polynomial")
    tag = f.tag.with_level(MOD_P2)
    zero = tag.field.zero()
    return LaurentPoly(tag, {e: Witt2Elem(zero, c.frobenius()) for e, c in f.terms.items()}, check=False)


# -- text ---------------------------------------------------------------


def _render_coeff(c) -> str:
    return render_witt(c) if isinstance(c, Witt2Elem) else render_field(c)


def _render_mono(exp) -> str:
    parts = []
    for i, a in enumerate(exp):
        if a == 1:
            parts.append(f"t{i + 1}")
        elif a:
            parts.append(f"t{i + 1}^{a}")
    return "*".join(parts)


def render_term(exp, c) -> str:
    mono = _render_mono(exp)
    coef = _render_coeff(c)
    if not mono:
        return coef
    if c == c.params.one() if isinstance(c, FieldElem) else (c.a0 == c.a0.params.one() and c.a1.is_zero()):
        return mono
    return f"{coef}*{mono}"


def render(f: LaurentPoly) -> str:
    if not f.terms:
        return "0"
    return " + ".join(render_term(e, c) for e, c in f.sorted_terms())


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<var>t\d+)|(?P<brace>\{[^}]*\})|(?P<op>[-+*^(),]))"
)


def _tokenize(text):
    pos = 0
    tokens = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise PolynomialSyntaxError(f"unexpected character {text[pos:].lstrip()[:1]!r}", pos + 1)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind) + 1))
        pos = m.end()
    tokens.append(("end", "", len(text) + 1))
    return tokens


_FTERM = re.compile(r"^(\d*)(x(?:\^(\d+))?)?$")


def parse_field_elem(text: str, F: FieldParams, position=None) -> FieldElem:
    """Parse an F_{p^e} literal: an integer or ``{2x^2+x+1}``."""
    body = text.strip()
    if body.startswith("{"):
        if not body.endswith("}"):
            raise PolynomialSyntaxError("unterminated field literal", position)
        body = body[1:-1].replace(" ", "")
    elif not body.isdigit():
        raise PolynomialSyntaxError(f"bad field literal {text!r}", position)
    if not body:
        raise PolynomialSyntaxError("empty field literal", position)
    coeffs = [0] * max(F.e, 1)
    body = body.replace("-", "+-")
    for part in body.split("+"):
        if not part:
            continue
        sign = 1
        if part.startswith("-"):
            sign, part = -1, part[1:]
        m = _FTERM.match(part)
        if not m or not part:
            raise PolynomialSyntaxError(f"bad field literal term {part!r}", position)
        c = int(m.group(1)) if m.group(1) else 1
        k = 0
        if m.group(2):
            k = int(m.group(3)) if m.group(3) else 1
        if k >= F.e:
            raise PolynomialSyntaxError(f"power x^{k} too large for degree-{F.e} field", position)
        coeffs[k] += sign * c
    return F(coeffs)


class _Parser:
    def __init__(self, text, tag):
        self.text = text
        self.tag = tag
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, value=None):
        tok = self.tokens[self.i]
        if value is not None and tok[1] != value:
            raise PolynomialSyntaxError(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok[2])
        self.i += 1
        return tok

    def poly(self):
        tag = self.tag
        total = tag.zero()
        sign = 1
        if self.peek()[1] == "-":
            self.take()
            sign = -1
        while True:
            t = self.term()
            total = total + t if sign > 0 else total - t
            tok = self.peek()
            if tok[1] == "+":
                self.take()
                sign = 1
            elif tok[1] == "-":
                self.take()
                sign = -1
            elif tok[0] == "end":
                return total
            else:
                raise PolynomialSyntaxError(f"unexpected {tok[1]!r}", tok[2])

    def term(self):
        result = self.factor()
        while self.peek()[1] == "*":
            self.take()
            result = result * self.factor()
        return result

    def factor(self):
        kind, value, pos = self.peek()
        tag = self.tag
        if kind == "num":
            self.take()
            m = int(value)
            if tag.level == MOD_P2:
                # base-p digits: m = a0 + p a1 -> [a0] + p [a1]
                F = tag.field
                return tag.const(Witt2Elem(F(m % F.p), F((m // F.p) % F.p)))
            return tag.const(m)
        if kind == "brace":
            self.take()
            return tag.const(parse_field_elem(value, tag.field, pos))
        if kind == "var":
            self.take()
            idx = int(value[1:]) - 1
            if not 0 <= idx < tag.nvars:
                raise PolynomialSyntaxError(f"variable {value} out of range (d = {tag.nvars})", pos)
            power = 1
            if self.peek()[1] == "^":
                self.take()
                neg = False
                if self.peek()[1] == "-":
                    self.take()
                    neg = True
                k, v, p2 = self.take()
                if k != "num":
                    raise PolynomialSyntaxError("expected exponent", p2)
                power = -int(v) if neg else int(v)
            if power < 0 and idx not in tag.inverted:
                raise PolynomialSyntaxError(f"{value} is not inverted in this ring", pos)
            return tag.var(idx, power)
        if value == "(":
            self.take()
            if tag.level != MOD_P2:
                raise PolynomialSyntaxError("Witt pair coefficient in a ModP polynomial", pos)
            a0 = self.fe()
            self.take(",")
            a1 = self.fe()
            self.take(")")
            return tag.const(Witt2Elem(a0, a1))
        raise PolynomialSyntaxError(f"unexpected {value or 'end of input'!r}", pos)

    def fe(self):
        kind, value, pos = self.take()
        if kind not in ("num", "brace"):
            raise PolynomialSyntaxError("expected a field element", pos)
        return parse_field_elem(value, self.tag.field, pos)


def parse(text: str, tag: RingTag) -> LaurentPoly:
    """Parse the canonical text grammar (plus integer/sign conveniences)."""
    if not isinstance(text, str):
        raise PolynomialSyntaxError(f"expected polynomial text, got {type(text).__name__}")
    if not text.strip():
        raise PolynomialSyntaxError("empty polynomial", 1)
    return _Parser(text, tag).poly()


def poly_sum(polys, tag: RingTag) -> LaurentPoly:
    return reduce(lambda a, b: a + b, polys, tag.zero())


def random_laurent(tag: RingTag, rng, nterms: int = 3, max_degree: int = 3, allow_zero: bool = True) -> LaurentPoly:
    """A random element of the ring; negative exponents only on inverted coordinates."""
    F = tag.field
    terms = {}
    for _ in range(nterms):
        exp = tuple(
            rng.randint(-max_degree, max_degree) if i in tag.inverted else rng.randint(0, max_degree)
            for i in range(tag.nvars)
        )
        if sum(abs(a) for a in exp) > max_degree:
            continue
        c = F([rng.randrange(F.p) for _ in range(F.e)])
        if tag.level == MOD_P2:
            c = Witt2Elem(c, F([rng.randrange(F.p) for _ in range(F.e)]))
        terms[exp] = c
    f = LaurentPoly(tag, terms)
    if not allow_zero and f.is_zero():
        return tag.one()
    return f
