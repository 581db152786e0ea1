"""Nilpotent Higgs bundles in Cech form: per-patch Higgs field components and
transition matrices, their validation, and a seeded random generator."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations_with_replacement, permutations, product

from .arith import FieldParams
from .cover import random_lift
from .errors import BadParams, NotInvertible, HiggsTwistError
from .forms import Matrix, MatForm1, commutator, f0_pullback_mat, mat_inv, wedge11
from .laurent import MOD_P, RingTag, random_laurent, render
from .report import INPUT_VALIDATION, failed, passed

__all__ = [
    "HiggsData",
    "RandomHiggsParams",
    "validate_higgs",
    "f0_pullback_mat",
    "nilpotent_by_monomials",
    "nilpotent_by_words",
    "random_higgs",
    "random_instance",
]


@dataclass
class HiggsData:
    """Higgs field components ``theta[alpha][i]`` (the matrix of dt_i) and
    transitions ``transitions[(alpha, beta)] = M_ab`` with ``e_alpha = M_ab e_beta``.

    Only one direction of each pair needs to be given; the other is the inverse.
    """

    rank: int
    exponent: int
    patches: tuple
    theta: dict
    transitions: dict = field(default_factory=dict)

    def __post_init__(self):
        self.patches = tuple(self.patches)
        self._cache = {}

    def patch_tag(self, name) -> RingTag:
        return self.theta[name][0].tag

    @property
    def field(self) -> FieldParams:
        return self.patch_tag(self.patches[0]).field

    @property
    def nvars(self) -> int:
        return self.patch_tag(self.patches[0]).nvars

    def overlap(self, *names) -> RingTag:
        tags = [self.patch_tag(n) for n in names]
        return tags[0].union(*tags[1:])

    def theta_on(self, name, tag=None):
        """The Higgs components of ``name`` included into ``tag``."""
        mats = self.theta[name]
        if tag is None:
            return list(mats)
        return [m.retag(tag) for m in mats]

    def transition(self, a, b, tag=None) -> Matrix:
        """M_ab over the overlap of a and b (or over ``tag`` if given)."""
        key = (a, b, tag)
        if key in self._cache:
            return self._cache[key]
        base = self.overlap(a, b)
        if a == b:
            M = Matrix.identity(base, self.rank)
        elif (a, b) in self.transitions:
            M = self.transitions[(a, b)].retag(base)
        elif (b, a) in self.transitions:
            M = mat_inv(self.transitions[(b, a)].retag(base))
        else:
            M = Matrix.identity(base, self.rank)
        if tag is not None:
            M = M.retag(tag)
        self._cache[key] = M
        return M


def _product(mats, word, tag, rank):
    out = Matrix.identity(tag, rank)
    for i in word:
        out = out * mats[i]
    return out


def nilpotent_by_monomials(mats, n):
    """For commuting matrices: (True, None) when every degree-(n+1) monomial vanishes,
    else (False, offending multi-index as a sorted word)."""
    if not mats:
        return True, None
    tag, rank = mats[0].tag, mats[0].shape[0]
    for word in combinations_with_replacement(range(len(mats)), n + 1):
        if not _product(mats, word, tag, rank).is_zero():
            return False, word
    return True, None


def nilpotent_by_words(mats, n):
    """Brute force over every ordered word of length n+1."""
    if not mats:
        return True, None
    tag, rank = mats[0].tag, mats[0].shape[0]
    for word in product(range(len(mats)), repeat=n + 1):
        if not _product(mats, word, tag, rank).is_zero():
            return False, word
    return True, None


def _word_text(word):
    return "*".join(f"theta{i + 1}" for i in word)


def validate_higgs(H: HiggsData) -> list:
    """Check integrability, nilpotency, the exponent bound, the transition
    cocycle and compatibility of the fields on overlaps."""
    records = []
    try:
        p = H.field.p
        d = H.nvars
    except (IndexError, KeyError, AttributeError) as exc:
        return [failed("higgs:shape", INPUT_VALIDATION, "bundle", f"malformed Higgs data: {exc}")]
    n, r = H.exponent, H.rank

    if not 0 <= n <= p - 1:
        records.append(failed("higgs:exponent-bound", INPUT_VALIDATION, "bundle", f"exponent bound violated: n = {n}, p = {p} (need 0 <= n <= p-1)"))
        return records
    records.append(passed("higgs:exponent-bound", INPUT_VALIDATION, "bundle"))

    shape_ok = True
    for name in H.patches:
        mats = H.theta.get(name)
        if mats is None or len(mats) != d:
            records.append(failed(f"higgs:{name}:shape", INPUT_VALIDATION, name, f"need {d} Higgs components"))
            shape_ok = False
            continue
        for i, m in enumerate(mats):
            if m.shape != (r, r) or m.tag.level != MOD_P or m.tag != mats[0].tag:
                records.append(failed(f"higgs:{name}:shape", INPUT_VALIDATION, name, f"component {i + 1} is not an r x r matrix over the patch ring"))
                shape_ok = False
    if not shape_ok:
        return records

    for name in H.patches:
        mats = H.theta[name]
        commuting = True
        for i in range(d):
            for j in range(i + 1, d):
                c = commutator(mats[i], mats[j])
                if not c.is_zero():
                    commuting = False
                    a, b, x = next((a, b, x) for a, b, x in c.entries() if x.terms)
                    records.append(
                        failed(f"higgs:{name}:integrable", INPUT_VALIDATION, name,
                               f"[theta{i + 1}, theta{j + 1}] has entry ({a},{b}) = {render(x)}")
                    )
        if commuting:
            records.append(passed(f"higgs:{name}:integrable", INPUT_VALIDATION, name))
            ok, word = nilpotent_by_monomials(mats, n)
        else:
            ok, word = nilpotent_by_words(mats, n)
        if ok:
            records.append(passed(f"higgs:{name}:nilpotent", INPUT_VALIDATION, name))
        else:
            records.append(failed(f"higgs:{name}:nilpotent", INPUT_VALIDATION, name, f"{_word_text(word)} != 0 (exponent {n})"))

    for (a, b), M in sorted(H.transitions.items()):
        subject = f"{a},{b}"
        if a not in H.theta or b not in H.theta:
            records.append(failed(f"higgs:M:{subject}:patches", INPUT_VALIDATION, subject, "transition between unknown patches"))
            return records
        if M.shape != (r, r):
            records.append(failed(f"higgs:M:{subject}:shape", INPUT_VALIDATION, subject, f"transition has shape {M.shape}"))
            return records
        try:
            M.retag(H.overlap(a, b))
            mat_inv(M.retag(H.overlap(a, b)))
        except NotInvertible as exc:
            records.append(failed(f"higgs:M:{subject}:invertible", INPUT_VALIDATION, subject, str(exc)))
            return records
        except HiggsTwistError as exc:
            records.append(failed(f"higgs:M:{subject}:ring", INPUT_VALIDATION, subject, str(exc)))
            return records
        records.append(passed(f"higgs:M:{subject}:invertible", INPUT_VALIDATION, subject))

    for a, b in sorted(H.transitions):
        if (b, a) in H.transitions and a < b:
            tag = H.overlap(a, b)
            prod = H.transitions[(a, b)].retag(tag) * H.transitions[(b, a)].retag(tag)
            cid = f"higgs:M:{a},{b}:inverse-pair"
            if prod.is_identity():
                records.append(passed(cid, INPUT_VALIDATION, f"{a},{b}"))
            else:
                records.append(failed(cid, INPUT_VALIDATION, f"{a},{b}", "M_ab M_ba != 1"))

    for a, b, c in permutations(sorted(H.patches), 3):
        tag = H.overlap(a, b, c)
        lhs = H.transition(a, b, tag) * H.transition(b, c, tag)
        rhs = H.transition(a, c, tag)
        subject = f"{a},{b},{c}"
        if lhs == rhs:
            records.append(passed(f"higgs:M:{subject}:cocycle", INPUT_VALIDATION, subject))
        else:
            i, j, x, y = lhs.first_difference(rhs)
            records.append(failed(f"higgs:M:{subject}:cocycle", INPUT_VALIDATION, subject,
                                  f"(M_ab M_bc)[{i},{j}] = {render(x)} but M_ac[{i},{j}] = {render(y)}"))

    for a, b in permutations(sorted(H.patches), 2):
        tag = H.overlap(a, b)
        M = H.transition(a, b)
        M_inv = H.transition(b, a)
        subject = f"{a},{b}"
        bad = None
        for i, (ta, tb) in enumerate(zip(H.theta_on(a, tag), H.theta_on(b, tag))):
            rhs = M * tb * M_inv
            if ta != rhs:
                x, y, u, v = ta.first_difference(rhs)
                bad = f"theta{i + 1}: theta_a[{x},{y}] = {render(u)} but (M theta_b M^-1)[{x},{y}] = {render(v)}"
                break
        if bad:
            records.append(failed(f"higgs:{subject}:compatible", INPUT_VALIDATION, subject, bad))
        else:
            records.append(passed(f"higgs:{subject}:compatible", INPUT_VALIDATION, subject))
    return records


def is_valid_higgs(H: HiggsData) -> bool:
    return all(r.passed for r in validate_higgs(H))


def higgs_form(mats) -> MatForm1:
    """Assemble theta = sum_i theta_i dt_i."""
    return MatForm1(mats[0].tag, mats)


def theta_wedge_theta_vanishes(mats) -> bool:
    th = higgs_form(mats)
    return wedge11(th, th).is_zero()


# -- random instances -------------------------------------------------------


@dataclass(frozen=True)
class RandomHiggsParams:
    p: int
    d: int = 1
    rank: int = 2
    n: int = 1
    npatches: int = 2
    e: int = 1
    modulus: tuple = ()
    max_degree: int = 2
    nterms: int = 2
    trivial_transitions: bool = False

    def field(self) -> FieldParams:
        return FieldParams(self.p, self.e, self.modulus)


def _nilpotent(tag, rank, n, rng):
    """Constant block-Jordan-type matrix N with N^(n+1) = 0, blocks of size <= n+1."""
    F = tag.field
    N = [[tag.zero()] * rank for _ in range(rank)]
    start = 0
    while start < rank:
        size = min(n + 1, rank - start)
        for k in range(start, start + size - 1):
            N[k][k + 1] = tag.const(F(rng.randrange(1, F.p)))
        start += size
    return Matrix(tag, N)


def _unipotent(tag, rank, rng, nterms, max_degree):
    rows = []
    for i in range(rank):
        row = []
        for j in range(rank):
            if i == j:
                row.append(tag.one())
            elif j > i:
                row.append(random_laurent(tag, rng, nterms=nterms, max_degree=max_degree))
            else:
                row.append(tag.zero())
        rows.append(row)
    return Matrix(tag, rows)


def _check_random_params(params: RandomHiggsParams):
    if not 1 <= params.rank <= 4:
        raise BadParams(f"rank must be in [1, 4], got {params.rank}")
    if not 0 <= params.n <= min(params.p - 1, params.rank - 1):
        raise BadParams(f"need 0 <= n <= min(p-1, r-1), got n = {params.n}")
    if params.npatches < 1 or params.d < 1:
        raise BadParams("need at least one patch and one coordinate")


def random_higgs(params: RandomHiggsParams, seed) -> HiggsData:
    """theta_a,i = B_a (c_i N^s_i) B_a^-1 and M_ab = B_a B_b^-1 with unipotent B_a.

    Powers of one nilpotent N commute, so the result is integrable and
    nilpotent of exponent n by construction.
    """
    _check_random_params(params)
    rng = random.Random(seed)
    F = params.field()
    d, r, n = params.d, params.rank, params.n
    names = [f"U{k}" for k in range(params.npatches)]
    tags = {}
    for name in names:
        inverted = frozenset(i for i in range(d) if rng.random() < 0.5)
        tags[name] = RingTag(MOD_P, d, inverted, F)
    common = frozenset.intersection(*(t.inverted for t in tags.values()))
    base = RingTag(MOD_P, d, common, F)

    N = _nilpotent(base, r, n, rng)
    theta0 = []
    for _ in range(d):
        if n == 0:
            theta0.append(Matrix.zeros(base, r))
            continue
        s = rng.randint(1, n)
        c = random_laurent(base, rng, nterms=params.nterms, max_degree=params.max_degree)
        theta0.append((N**s) * c)

    B = {}
    for name in names:
        if params.trivial_transitions:
            B[name] = Matrix.identity(tags[name], r)
        else:
            B[name] = _unipotent(tags[name], r, rng, nterms=1, max_degree=params.max_degree)
    theta = {}
    for name in names:
        Bi = mat_inv(B[name])
        theta[name] = tuple(B[name] * t.retag(tags[name]) * Bi for t in theta0)
    transitions = {}
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            tag = tags[a].union(tags[b])
            transitions[(a, b)] = B[a].retag(tag) * mat_inv(B[b].retag(tag))
    return HiggsData(r, n, tuple(names), theta, transitions)


def random_instance(params: RandomHiggsParams, seed):
    """A random Higgs bundle together with random Frobenius lifts on its patches."""
    H = random_higgs(params, seed)
    rng = random.Random(f"lifts-{seed}")
    patches = [random_lift(name, H.patch_tag(name), rng, nterms=params.nterms, max_degree=params.max_degree)
               for name in H.patches]
    return patches, H
