"""The exponential twist: local flat connections built from a nilpotent Higgs
field and Frobenius lifts, gluing matrices, and executable checks of every
identity the construction relies on.

On a patch a with lift F_a the flat connection on F_0^*E is

    A_a = sum_l F_0^*(theta_a,l) xi_a[l]          (xi_a = df_over_p(F_a))

and on an overlap the gluing matrix is

    G_ab = exp(X_ab) F_0^*(M_ab),   X_ab = sum_l F_0^*(theta_a,l) z_ab[l],

where the exponential is the finite sum up to degree n (n < p, so every
i! is invertible).  ``F_0^*`` raises entries to the p-th power.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from math import factorial

from .cover import (
    DIHom,
    PatchLift,
    df_over_p,
    di_hom,
    ordered_pairs,
    ordered_triples,
    validate_patch,
    verify_di_cocycle,
    verify_di_derivative,
)
from .errors import BadParams, ExponentTooLarge, HiggsTwistError, NotNilpotentToOrder, ShapeMismatch
from .forms import MatForm1, Matrix, curvature, f0_pullback_mat, gauge_transform, mat_d1, mat_inv, wedge11
from .higgs import HiggsData, validate_higgs
from .laurent import render
from .report import (
    CHECK_KINDS,
    CONNECTION_GLUING,
    EXP_TAYLOR,
    GLUING_COCYCLE,
    INPUT_VALIDATION,
    LOCAL_FLATNESS,
    Report,
    failed,
    passed,
)


@dataclass
class LocalFlat:
    patch: str
    A: MatForm1


@dataclass
class PairData:
    """Everything computed on the overlap of an ordered pair (a, b)."""

    hom: DIHom
    X: Matrix  # h_ab(F_0^* theta_a)
    g: Matrix  # exp(X)
    G: Matrix  # g F_0^*(M_ab)


@dataclass
class FlatBundleAtlas:
    patches: dict
    higgs: HiggsData
    locals: dict = field(default_factory=dict)
    xi: dict = field(default_factory=dict)
    pairs: dict = field(default_factory=dict)
    report: Report = field(default_factory=Report)

    @property
    def status(self):
        return self.report.overall

    @property
    def verified(self):
        return self.report.verified

    def G(self, a, b) -> Matrix:
        if a == b:
            return Matrix.identity(self.higgs.patch_tag(a), self.higgs.rank)
        return self.pairs[(a, b)].G

    def names(self):
        return sorted(self.patches)

    def z(self, a, b) -> tuple:
        """z_ab, with z_aa = 0."""
        if a == b:
            tag = self.higgs.patch_tag(a)
            return tuple(tag.zero() for _ in range(tag.nvars))
        return self.pairs[(a, b)].hom.z


# -- building blocks ----------------------------------------------------------


def matrix_times_forms(mats, forms, tag) -> MatForm1:
    """sum_l mats[l] (x) forms[l] for matrices of functions and scalar 1-forms."""
    r = mats[0].shape[0]
    comps = []
    for i in range(tag.nvars):
        acc = Matrix.zeros(tag, r)
        for M, w in zip(mats, forms):
            c = w.comps[i]
            if c.terms and not M.is_zero():
                acc = acc + M * c
        comps.append(acc)
    return MatForm1(tag, comps)


def local_connection(P: PatchLift, H: HiggsData, xi=None) -> LocalFlat:
    """A = dF/[p](F_0^* theta) = sum_l F_0^*(theta_l) xi[l]."""
    xi = xi if xi is not None else df_over_p(P)
    tag = P.tag
    pulled = [f0_pullback_mat(t.retag(tag)) for t in H.theta[P.name]]
    return LocalFlat(P.name, matrix_times_forms(pulled, xi, tag))


def verify_local_flat(L: LocalFlat) -> list:
    """Curvature zero, plus its two ingredients separately: A ^ A = 0 and dA = 0."""
    A = L.A
    subject = L.patch
    out = []
    for cid, value in (
        ("curvature", curvature(A)),
        ("wedge-square", wedge11(A, A)),
        ("closed", mat_d1(A)),
    ):
        check_id = f"local-flatness/{cid}:{subject}"
        if value.is_zero():
            out.append(passed(check_id, LOCAL_FLATNESS, subject))
        else:
            out.append(failed(check_id, LOCAL_FLATNESS, subject, value.witness()))
    return out


def truncated_exp(X: Matrix, n: int) -> Matrix:
    """sum_{i=0}^n X^i / i! for X with X^(n+1) = 0 and n < p."""
    p = X.tag.field.p
    if n >= p:
        raise ExponentTooLarge(f"n = {n} >= p = {p}: {n}! is not invertible")
    if n < 0:
        raise BadParams("n must be non-negative")
    r, c = X.shape
    if r != c:
        raise ShapeMismatch("exponential of a non-square matrix")
    tag = X.tag
    F = tag.field
    result = Matrix.identity(tag, r)
    power = Matrix.identity(tag, r)
    for i in range(1, n + 1):
        power = power * X
        if power.is_zero():
            return result
        result = result + power * tag.const(F(factorial(i)).inverse())
    if not (power * X).is_zero():
        raise NotNilpotentToOrder(f"X^{n + 1} != 0")
    return result


def _multi_indices(d, n):
    for j in product(range(n + 1), repeat=d):
        if 1 <= sum(j) <= n:
            yield j


def multinomial_exp(mats, z, n: int) -> Matrix:
    """1 + sum_{1 <= |j| <= n} prod_l mats[l]^j_l * prod_l z[l]^j_l / j!."""
    tag = mats[0].tag
    F = tag.field
    if n >= F.p:
        raise ExponentTooLarge(f"n = {n} >= p = {F.p}")
    r = mats[0].shape[0]
    result = Matrix.identity(tag, r)
    for j in _multi_indices(len(mats), n):
        M = Matrix.identity(tag, r)
        for l, k in enumerate(j):
            if k:
                M = M * mats[l] ** k
        if M.is_zero():
            continue
        scalar = tag.one()
        denom = 1
        for l, k in enumerate(j):
            if k:
                scalar = scalar * z[l] ** k
                denom *= factorial(k)
        result = result + M * (scalar * tag.const(F(denom).inverse()))
    return result


def _pulled_theta(H, name, tag):
    return [f0_pullback_mat(t) for t in H.theta_on(name, tag)]


def pair_data(Pa: PatchLift, Pb: PatchLift, H: HiggsData) -> PairData:
    h = di_hom(Pa, Pb)
    tag = h.tag
    Theta = _pulled_theta(H, Pa.name, tag)
    X = Matrix.zeros(tag, H.rank)
    for T, z in zip(Theta, h.z):
        if z.terms:
            X = X + T * z
    g = truncated_exp(X, H.exponent)
    G = g * f0_pullback_mat(H.transition(Pa.name, Pb.name, tag))
    return PairData(h, X, g, G)


def gluing_matrix(Pa: PatchLift, Pb: PatchLift, H: HiggsData) -> Matrix:
    """G_ab = exp(h_ab(F_0^* theta_a)) F_0^*(M_ab)."""
    return pair_data(Pa, Pb, H).G


def taylor_gluing(Pa: PatchLift, Pb: PatchLift, H: HiggsData) -> Matrix:
    """The multinomial form 1 + sum_j F_0^*(theta^j) z^j / j! of exp(h_ab(F_0^* theta_a))."""
    h = di_hom(Pa, Pb)
    return multinomial_exp(_pulled_theta(H, Pa.name, h.tag), h.z, H.exponent)


# -- checks -------------------------------------------------------------------


def _matrix_witness(label_l, label_r, lhs, rhs):
    diff = lhs.first_difference(rhs)
    if diff is None:
        return ""
    i, j, x, y = diff
    return f"entry ({i},{j}): {label_l} = {render(x)}, {label_r} = {render(y)}"


def verify_G_inverse(atlas: FlatBundleAtlas, a, b):
    subject = f"{a},{b}"
    cid = f"gluing-cocycle/inverse:{subject}"
    prod = atlas.G(a, b) * atlas.G(b, a).retag(atlas.G(a, b).tag)
    ident = Matrix.identity(prod.tag, prod.shape[0])
    if prod == ident:
        return passed(cid, GLUING_COCYCLE, subject)
    return failed(cid, GLUING_COCYCLE, subject, _matrix_witness("G_ab G_ba", "1", prod, ident))


def verify_G_cocycle(atlas: FlatBundleAtlas, a, b, c) -> list:
    """G_ab G_bc = G_ac, with the exp(x) exp(y) = exp(x + y) step checked on its own."""
    H = atlas.higgs
    subject = f"{a},{b},{c}"
    tag = H.overlap(a, b, c)
    out = []
    lhs = atlas.G(a, b).retag(tag) * atlas.G(b, c).retag(tag)
    rhs = atlas.G(a, c).retag(tag)
    cid = f"gluing-cocycle:{subject}"
    if lhs == rhs:
        out.append(passed(cid, GLUING_COCYCLE, subject))
    else:
        out.append(failed(cid, GLUING_COCYCLE, subject, _matrix_witness("G_ab G_bc", "G_ac", lhs, rhs)))

    # x = h_ab(F_0^* theta_a), y = h_bc(F_0^* theta_a)
    Theta = _pulled_theta(H, a, tag)
    x = Matrix.zeros(tag, H.rank)
    y = Matrix.zeros(tag, H.rank)
    for T, z1, z2 in zip(Theta, atlas.z(a, b), atlas.z(b, c)):
        x = x + T * z1.retag(tag)
        y = y + T * z2.retag(tag)
    cid = f"gluing-cocycle/exp-additive:{subject}"
    if x * y != y * x:
        out.append(failed(cid, GLUING_COCYCLE, subject, _matrix_witness("xy", "yx", x * y, y * x)))
    else:
        n = H.exponent
        try:
            e_sum = truncated_exp(x + y, n)
            e_prod = truncated_exp(x, n) * truncated_exp(y, n)
        except HiggsTwistError as exc:
            out.append(failed(cid, GLUING_COCYCLE, subject, str(exc)))
        else:
            if e_sum == e_prod:
                out.append(passed(cid, GLUING_COCYCLE, subject))
            else:
                out.append(failed(cid, GLUING_COCYCLE, subject, _matrix_witness("exp(x)exp(y)", "exp(x+y)", e_prod, e_sum)))
    return out


def verify_connection_glue(atlas: FlatBundleAtlas, a, b) -> list:
    """A_a = dG G^-1 + G A_b G^-1 on the overlap, and g_ab commutes with dF_b/[p](F_0^* theta_a)."""
    H = atlas.higgs
    subject = f"{a},{b}"
    data = atlas.pairs[(a, b)]
    G = data.G
    tag = G.tag
    out = []
    A_a = atlas.locals[a].A.retag(tag)
    A_b = atlas.locals[b].A.retag(tag)
    cid = f"connection-gluing:{subject}"
    try:
        glued = gauge_transform(A_b, G, mat_inv(G))
    except HiggsTwistError as exc:
        out.append(failed(cid, CONNECTION_GLUING, subject, f"G_ab not invertible: {exc}"))
    else:
        if glued == A_a:
            out.append(passed(cid, CONNECTION_GLUING, subject))
        else:
            i, j, u, v = A_a.first_difference(glued)
            out.append(failed(cid, CONNECTION_GLUING, subject,
                              f"entry ({i},{j}): A_a = {u}, dG G^-1 + G A_b G^-1 = {v}"))

    xi_b = [w.retag(tag) for w in atlas.xi[b]]
    B = matrix_times_forms(_pulled_theta(H, a, tag), xi_b, tag)
    g = data.g
    cid = f"connection-gluing/commute:{subject}"
    bad = next((k for k, C in enumerate(B.comps) if g * C != C * g), None)
    if bad is None:
        out.append(passed(cid, CONNECTION_GLUING, subject))
    else:
        C = B.comps[bad]
        out.append(failed(cid, CONNECTION_GLUING, subject,
                          f"dt{bad + 1} component: " + _matrix_witness("g B", "B g", g * C, C * g)))
    return out


def verify_exp_equals_taylor(atlas: FlatBundleAtlas, a, b):
    """exp(h_ab(F_0^* theta_a)) equals its multinomial expansion in z_ab.

    The multinomial side is rebuilt from the lifts, not from the stored z.
    """
    subject = f"{a},{b}"
    cid = f"exp-taylor:{subject}"
    data = atlas.pairs[(a, b)]
    try:
        taylor = taylor_gluing(atlas.patches[a], atlas.patches[b], atlas.higgs)
    except HiggsTwistError as exc:
        return failed(cid, EXP_TAYLOR, subject, str(exc))
    if data.g == taylor:
        return passed(cid, EXP_TAYLOR, subject)
    return failed(cid, EXP_TAYLOR, subject, _matrix_witness("exp", "multinomial", data.g, taylor))


# -- mutation hooks -----------------------------------------------------------

CORRUPTION_HOOKS = {
    "A": "perturb the connection form of patch k by E_(0,r-1) t_d dt_1",
    "Ashift": "add the identity times dt_1 to the connection form of patch k (stays flat)",
    "z": "add t_1 to z[0] of ordered pair k (breaks dh = xi_a - xi_b)",
    "zc": "add 1 to z[0] of ordered pair k (breaks h_ab + h_bc = h_ac only)",
    "G": "scale the gluing matrix of ordered pair k by 2",
    "g": "add t_1 * identity to the exponential of ordered pair k",
}


def parse_hook(hook: str):
    try:
        target, index = hook.split(":")
        index = int(index)
    except ValueError:
        raise BadParams(f"corruption hook must look like TARGET:INDEX, got {hook!r}") from None
    if target not in CORRUPTION_HOOKS:
        raise BadParams(f"unknown corruption target {target!r}; known: {', '.join(CORRUPTION_HOOKS)}")
    return target, index


def _apply_corruption(atlas: FlatBundleAtlas, hook: str):
    target, k = parse_hook(hook)
    H = atlas.higgs
    r = H.rank
    if target in ("A", "Ashift"):
        names = atlas.names()
        name = names[k % len(names)]
        A = atlas.locals[name].A
        tag = A.tag
        if target == "A":
            bump = Matrix.elementary(tag, r, 0, r - 1, tag.var(tag.nvars - 1))
        else:
            bump = Matrix.identity(tag, r)
        comps = list(A.comps)
        comps[0] = comps[0] + bump
        atlas.locals[name] = LocalFlat(name, MatForm1(tag, comps))
        return
    pairs = ordered_pairs(atlas.names())
    if not pairs:
        raise BadParams(f"hook {hook!r} needs at least two patches")
    key = pairs[k % len(pairs)]
    data = atlas.pairs[key]
    tag = data.G.tag
    if target in ("z", "zc"):
        z = list(data.hom.z)
        z[0] = z[0] + (tag.var(0) if target == "z" else tag.one())
        data.hom = DIHom(data.hom.alpha, data.hom.beta, tuple(z))
    elif target == "G":
        data.G = data.G * 2
    elif target == "g":
        data.g = data.g + Matrix.identity(tag, r) * tag.var(0)


# -- driver ---------------------------------------------------------------------


def build_atlas(cover, H: HiggsData, checks=None, corrupt=None, title="") -> FlatBundleAtlas:
    """Construct every local connection and gluing matrix, then replay all checks.

    ``checks`` restricts the replayed check kinds; ``corrupt`` is a mutation hook
    (see ``CORRUPTION_HOOKS``) applied after construction, before checking.
    """
    kinds = set(CHECK_KINDS if checks is None else checks)
    unknown = kinds - set(CHECK_KINDS)
    if unknown:
        raise BadParams(f"unknown check kinds {sorted(unknown)}; known: {', '.join(CHECK_KINDS)}")
    patches = {P.name: P for P in cover}
    report = Report(title=title)
    atlas = FlatBundleAtlas(patches, H, report=report)

    for name in sorted(patches):
        report.add(*validate_patch(patches[name]))
    if set(patches) != set(H.patches):
        report.add(failed("cover:patch-names", INPUT_VALIDATION, "cover",
                          f"cover patches {sorted(patches)} != bundle patches {sorted(H.patches)}"))
    if report.failures():
        return atlas
    report.add(*validate_higgs(H))
    if report.failures():
        return atlas

    names = atlas.names()
    for name in names:
        atlas.xi[name] = df_over_p(patches[name])
        atlas.locals[name] = local_connection(patches[name], H, atlas.xi[name])
    for a, b in ordered_pairs(names):
        atlas.pairs[(a, b)] = pair_data(patches[a], patches[b], H)

    if corrupt:
        _apply_corruption(atlas, corrupt)

    if LOCAL_FLATNESS in kinds:
        for name in names:
            report.add(*verify_local_flat(atlas.locals[name]))
    if "di-derivative" in kinds:
        for a, b in ordered_pairs(names):
            report.add(verify_di_derivative(patches[a], patches[b], atlas.pairs[(a, b)].hom, atlas.xi[a], atlas.xi[b]))
    if "di-cocycle" in kinds:
        for a, b, c in ordered_triples(names):
            report.add(verify_di_cocycle(atlas.pairs[(a, b)].hom, atlas.pairs[(b, c)].hom, atlas.pairs[(a, c)].hom))
    if GLUING_COCYCLE in kinds:
        for a, b in ordered_pairs(names):
            report.add(verify_G_inverse(atlas, a, b))
        for a, b, c in ordered_triples(names):
            report.add(*verify_G_cocycle(atlas, a, b, c))
    if CONNECTION_GLUING in kinds:
        for a, b in ordered_pairs(names):
            report.add(*verify_connection_glue(atlas, a, b))
    if EXP_TAYLOR in kinds:
        for a, b in ordered_pairs(names):
            report.add(verify_exp_equals_taylor(atlas, a, b))
    return atlas

