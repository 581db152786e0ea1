"""Matrices over a patch ring and matrix-valued forms of degree 0, 1, 2.

A 1-form is stored by its components along dt_1 .. dt_d, a 2-form by its
components along dt_i ^ dt_j for i < j.  Matrix-valued forms are stored the
same way with :class:`Matrix` components, so ``A = sum_i A.comps[i] dt_i``.

Connection conventions: local sections are row vectors, ``nabla = d + A``,
a change of basis ``e' = M e`` acts by ``A' = dM M^-1 + M A M^-1`` and the
curvature is ``dA + A ^ A``.
"""

from __future__ import annotations

from .errors import NotAUnit, NotInvertible, ShapeMismatch, TagMismatch
from .laurent import LaurentPoly, RingTag, lp_deriv, lp_frobenius_pullback, lp_invert, render


class Matrix:
    """Immutable rectangular matrix of :class:`LaurentPoly` entries sharing one tag."""

    __slots__ = ("tag", "rows")

    def __init__(self, tag: RingTag, rows):
        rows = tuple(tuple(r) for r in rows)
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise ShapeMismatch("ragged matrix")
        for r in rows:
            for x in r:
                if x.tag != tag:
                    raise TagMismatch(f"matrix entry in {x.tag}, expected {tag}")
        self.tag = tag
        self.rows = rows

    @classmethod
    def identity(cls, tag, n):
        one, zero = tag.one(), tag.zero()
        return cls(tag, [[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, tag, n, m=None):
        zero = tag.zero()
        return cls(tag, [[zero] * (n if m is None else m) for _ in range(n)])

    @classmethod
    def elementary(cls, tag, n, i, j, value=None):
        """The matrix with ``value`` (default 1) at (i, j) and zeros elsewhere."""
        value = tag.one() if value is None else value
        zero = tag.zero()
        return cls(tag, [[value if (a, b) == (i, j) else zero for b in range(n)] for a in range(n)])

    @property
    def shape(self):
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def entries(self):
        for i, r in enumerate(self.rows):
            for j, x in enumerate(r):
                yield i, j, x

    def map(self, fn, tag=None):
        rows = [[fn(x) for x in r] for r in self.rows]
        if tag is None:
            tag = rows[0][0].tag if rows and rows[0] else self.tag
        return Matrix(tag, rows)

    def retag(self, tag):
        return self.map(lambda x: x.retag(tag), tag)

    def _check(self, other):
        if not isinstance(other, Matrix):
            return False
        if other.tag != self.tag:
            raise TagMismatch(f"{self.tag} vs {other.tag}")
        return True

    def __add__(self, other):
        if not self._check(other):
            return NotImplemented
        if self.shape != other.shape:
            raise ShapeMismatch(f"{self.shape} + {other.shape}")
        return Matrix(self.tag, [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        if not self._check(other):
            return NotImplemented
        if self.shape != other.shape:
            raise ShapeMismatch(f"{self.shape} - {other.shape}")
        return Matrix(self.tag, [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self):
        return Matrix(self.tag, [[-a for a in r] for r in self.rows])

    def __mul__(self, other):
        if isinstance(other, LaurentPoly):
            return Matrix(self.tag, [[a * other for a in r] for r in self.rows])
        if isinstance(other, int):
            return Matrix(self.tag, [[a * other for a in r] for r in self.rows])
        if not self._check(other):
            return NotImplemented
        n, k = self.shape
        k2, m = other.shape
        if k != k2:
            raise ShapeMismatch(f"{self.shape} @ {other.shape}")
        zero = self.tag.zero()
        cols = list(zip(*other.rows)) if other.rows else []
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                acc = zero
                for a, b in zip(r, c):
                    if a.terms and b.terms:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return Matrix(self.tag, out)

    def __rmul__(self, other):
        if isinstance(other, (LaurentPoly, int)):
            return self * other
        return NotImplemented

    __matmul__ = __mul__

    def __pow__(self, n: int):
        result = Matrix.identity(self.tag, self.shape[0])
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.tag == other.tag and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def is_zero(self):
        return all(not x.terms for r in self.rows for x in r)

    def is_identity(self):
        n, m = self.shape
        return n == m and self == Matrix.identity(self.tag, n)

    def first_difference(self, other):
        """(i, j, mine, theirs) for the first differing entry, or None."""
        for i, j, x in self.entries():
            if x != other.rows[i][j]:
                return i, j, x, other.rows[i][j]
        return None

    def to_text(self):
        return [[render(x) for x in r] for r in self.rows]

    def __repr__(self):
        return f"Matrix({self.to_text()!r})"


def commutator(a: Matrix, b: Matrix) -> Matrix:
    return a * b - b * a


def det(M: Matrix) -> LaurentPoly:
    n, m = M.shape
    if n != m:
        raise ShapeMismatch("determinant of a non-square matrix")
    if n == 0:
        return M.tag.one()
    if n == 1:
        return M.rows[0][0]
    if n == 2:
        (a, b), (c, d) = M.rows
        return a * d - b * c
    # Laplace expansion along the sparsest row; matrices here are at most 4x4
    row = min(range(n), key=lambda i: sum(1 for x in M.rows[i] if x.terms))
    total = M.tag.zero()
    for j, x in enumerate(M.rows[row]):
        if not x.terms:
            continue
        minor = _minor(M, row, j)
        term = x * det(minor)
        total = total + term if (row + j) % 2 == 0 else total - term
    return total


def _minor(M, i, j):
    return Matrix(M.tag, [[x for b, x in enumerate(r) if b != j] for a, r in enumerate(M.rows) if a != i])


def adjugate(M: Matrix) -> Matrix:
    n = M.shape[0]
    if n == 1:
        return Matrix.identity(M.tag, 1)
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            c = det(_minor(M, j, i))
            row.append(c if (i + j) % 2 == 0 else -c)
        rows.append(row)
    return Matrix(M.tag, rows)


def mat_inv(M: Matrix) -> Matrix:
    """Inverse via adjugate and an inverted determinant."""
    n, m = M.shape
    if n != m:
        raise ShapeMismatch("inverse of a non-square matrix")
    D = det(M)
    try:
        D_inv = lp_invert(D)
    except NotAUnit as exc:
        raise NotInvertible(f"determinant {render(D)} is not a unit", witness=D) from exc
    return adjugate(M) * D_inv


def f0_pullback_mat(M: Matrix) -> Matrix:
    """Entrywise absolute Frobenius pullback (entries raised to the p-th power)."""
    return M.map(lp_frobenius_pullback, M.tag)


# -- scalar forms ---------------------------------------------------------


class Form1:
    __slots__ = ("tag", "comps")

    def __init__(self, tag, comps):
        comps = tuple(comps)
        if len(comps) != tag.nvars:
            raise ShapeMismatch(f"1-form needs {tag.nvars} components")
        for c in comps:
            if c.tag != tag:
                raise TagMismatch(f"form component in {c.tag}, expected {tag}")
        self.tag = tag
        self.comps = comps

    @classmethod
    def zero(cls, tag):
        return cls(tag, [tag.zero()] * tag.nvars)

    def __add__(self, other):
        return Form1(self.tag, [a + b for a, b in zip(self.comps, other.comps)])

    def __sub__(self, other):
        return Form1(self.tag, [a - b for a, b in zip(self.comps, other.comps)])

    def __neg__(self):
        return Form1(self.tag, [-a for a in self.comps])

    def __mul__(self, f):
        return Form1(self.tag, [a * f for a in self.comps])

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Form1):
            return NotImplemented
        return self.comps == other.comps

    def __hash__(self):
        return hash(self.comps)

    def is_zero(self):
        return all(not c.terms for c in self.comps)

    def map(self, fn, tag=None):
        comps = [fn(c) for c in self.comps]
        return Form1(tag or comps[0].tag, comps)

    def retag(self, tag):
        return self.map(lambda c: c.retag(tag), tag)

    def __str__(self):
        return render_form1(self)

    __repr__ = __str__


class Form2:
    """Components along dt_i ^ dt_j, keyed by (i, j) with i < j; missing keys are zero."""

    __slots__ = ("tag", "comps")

    def __init__(self, tag, comps):
        self.tag = tag
        self.comps = {k: v for k, v in comps.items() if v.terms}
        for i, j in self.comps:
            if not 0 <= i < j < tag.nvars:
                raise ShapeMismatch(f"bad 2-form index {(i, j)}")

    def __getitem__(self, ij):
        return self.comps.get(ij, self.tag.zero())

    def is_zero(self):
        return not self.comps

    def __eq__(self, other):
        if not isinstance(other, Form2):
            return NotImplemented
        return self.comps == other.comps

    def __str__(self):
        if not self.comps:
            return "0"
        return " + ".join(f"{_paren(v)}*dt{i + 1}^dt{j + 1}" for (i, j), v in sorted(self.comps.items()))

    __repr__ = __str__


def _paren(f):
    s = render(f)
    return s if len(f.terms) == 1 else f"({s})"


def render_form1(w: Form1) -> str:
    parts = []
    for i, c in enumerate(w.comps):
        if not c.terms:
            continue
        s = render(c)
        if s == "1":
            parts.append(f"dt{i + 1}")
        else:
            parts.append(f"{_paren(c)}*dt{i + 1}")
    return " + ".join(parts) or "0"


def d0(f: LaurentPoly) -> Form1:
    return Form1(f.tag, [lp_deriv(f, i) for i in range(f.tag.nvars)])


def d1(w: Form1) -> Form2:
    n = w.tag.nvars
    comps = {}
    for i in range(n):
        for j in range(i + 1, n):
            comps[(i, j)] = lp_deriv(w.comps[j], i) - lp_deriv(w.comps[i], j)
    return Form2(w.tag, comps)


# -- matrix-valued forms --------------------------------------------------


class MatForm1:
    """Matrix-valued 1-form ``sum_i comps[i] dt_i``."""

    __slots__ = ("tag", "comps")

    def __init__(self, tag, comps):
        comps = tuple(comps)
        if len(comps) != tag.nvars:
            raise ShapeMismatch(f"matrix 1-form needs {tag.nvars} components")
        shapes = {c.shape for c in comps}
        if len(shapes) > 1:
            raise ShapeMismatch(f"components of different shapes {shapes}")
        for c in comps:
            if c.tag != tag:
                raise TagMismatch(f"component in {c.tag}, expected {tag}")
        self.tag = tag
        self.comps = comps

    @classmethod
    def zero(cls, tag, n):
        return cls(tag, [Matrix.zeros(tag, n)] * tag.nvars)

    @classmethod
    def from_entries(cls, tag, forms):
        """Build from a nested list of scalar :class:`Form1` entries."""
        n, m = len(forms), len(forms[0])
        comps = [Matrix(tag, [[forms[a][b].comps[i] for b in range(m)] for a in range(n)]) for i in range(tag.nvars)]
        return cls(tag, comps)

    @property
    def shape(self):
        return self.comps[0].shape

    def entry(self, i, j) -> Form1:
        return Form1(self.tag, [c.rows[i][j] for c in self.comps])

    def __add__(self, other):
        return MatForm1(self.tag, [a + b for a, b in zip(self.comps, other.comps)])

    def __sub__(self, other):
        return MatForm1(self.tag, [a - b for a, b in zip(self.comps, other.comps)])

    def __neg__(self):
        return MatForm1(self.tag, [-a for a in self.comps])

    def left(self, M: Matrix) -> MatForm1:
        return MatForm1(self.tag, [M * c for c in self.comps])

    def right(self, M: Matrix) -> MatForm1:
        return MatForm1(self.tag, [c * M for c in self.comps])

    def __eq__(self, other):
        if not isinstance(other, MatForm1):
            return NotImplemented
        return self.comps == other.comps

    def __hash__(self):
        return hash(self.comps)

    def is_zero(self):
        return all(c.is_zero() for c in self.comps)

    def retag(self, tag):
        return MatForm1(tag, [c.retag(tag) for c in self.comps])

    def first_difference(self, other):
        """(i, j, mine, theirs) as scalar 1-forms for the first differing entry."""
        n, m = self.shape
        for i in range(n):
            for j in range(m):
                a, b = self.entry(i, j), other.entry(i, j)
                if a != b:
                    return i, j, a, b
        return None

    def to_text(self):
        n, m = self.shape
        return [[render_form1(self.entry(i, j)) for j in range(m)] for i in range(n)]

    def __repr__(self):
        return f"MatForm1({self.to_text()!r})"


class MatForm2:
    __slots__ = ("tag", "comps", "shape")

    def __init__(self, tag, comps, shape):
        self.tag = tag
        self.shape = shape
        self.comps = {k: v for k, v in comps.items() if not v.is_zero()}

    def __getitem__(self, ij):
        return self.comps.get(ij) or Matrix.zeros(self.tag, *self.shape)

    def __add__(self, other):
        keys = set(self.comps) | set(other.comps)
        return MatForm2(self.tag, {k: self[k] + other[k] for k in keys}, self.shape)

    def __sub__(self, other):
        keys = set(self.comps) | set(other.comps)
        return MatForm2(self.tag, {k: self[k] - other[k] for k in keys}, self.shape)

    def conj(self, M: Matrix, M_inv: Matrix) -> MatForm2:
        return MatForm2(self.tag, {k: M * v * M_inv for k, v in self.comps.items()}, self.shape)

    def is_zero(self):
        return not self.comps

    def __eq__(self, other):
        if not isinstance(other, MatForm2):
            return NotImplemented
        return self.comps == other.comps and self.shape == other.shape

    def witness(self):
        """A readable description of the first nonzero entry, or None."""
        for (i, j), v in sorted(self.comps.items()):
            for a, b, x in v.entries():
                if x.terms:
                    return f"entry ({a},{b}) has {_paren(x)}*dt{i + 1}^dt{j + 1}"
        return None

    def to_text(self):
        n, m = self.shape
        out = []
        for a in range(n):
            row = []
            for b in range(m):
                f2 = Form2(self.tag, {k: v.rows[a][b] for k, v in self.comps.items()})
                row.append(str(f2))
            out.append(row)
        return out

    def __repr__(self):
        return f"MatForm2({self.to_text()!r})"


def mat_d0(M: Matrix) -> MatForm1:
    """Entrywise exterior derivative of a matrix of functions."""
    tag = M.tag
    return MatForm1(tag, [M.map(lambda x, i=i: lp_deriv(x, i), tag) for i in range(tag.nvars)])


def mat_d1(A: MatForm1) -> MatForm2:
    tag = A.tag
    n = tag.nvars
    comps = {}
    for i in range(n):
        for j in range(i + 1, n):
            dj = A.comps[j].map(lambda x: lp_deriv(x, i), tag)
            di = A.comps[i].map(lambda x: lp_deriv(x, j), tag)
            comps[(i, j)] = dj - di
    return MatForm2(tag, comps, A.shape)


def wedge11(a: MatForm1, b: MatForm1) -> MatForm2:
    if a.tag != b.tag:
        raise TagMismatch(f"{a.tag} vs {b.tag}")
    if a.shape[1] != b.shape[0]:
        raise ShapeMismatch(f"{a.shape} ^ {b.shape}")
    n = a.tag.nvars
    comps = {}
    for i in range(n):
        for j in range(i + 1, n):
            comps[(i, j)] = a.comps[i] * b.comps[j] - a.comps[j] * b.comps[i]
    return MatForm2(a.tag, comps, (a.shape[0], b.shape[1]))


def gauge_transform(A: MatForm1, M: Matrix, M_inv: Matrix | None = None) -> MatForm1:
    """Connection form in the basis ``M e``: ``dM M^-1 + M A M^-1``."""
    if M.shape != A.shape:
        raise ShapeMismatch(f"gauge {M.shape} vs connection {A.shape}")
    if M_inv is None:
        M_inv = mat_inv(M)
    dM = mat_d0(M)
    return MatForm1(A.tag, [dMi * M_inv + M * Ai * M_inv for dMi, Ai in zip(dM.comps, A.comps)])


def curvature(A: MatForm1, wedge_sign: int = 1) -> MatForm2:
    """``dA + A ^ A``.

    ``wedge_sign=-1`` gives ``dA - A ^ A``, the curvature that is covariant
    under :func:`gauge_transform` for non-commuting gauges; the two agree
    whenever ``A ^ A = 0``.
    """
    n, m = A.shape
    if n != m:
        raise ShapeMismatch("curvature of a non-square connection form")
    dA = mat_d1(A)
    AA = wedge11(A, A)
    return dA + AA if wedge_sign > 0 else dA - AA
