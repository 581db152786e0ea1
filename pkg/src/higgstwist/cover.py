"""Affine patches with W2 Frobenius lifts, the descended operator dF/[p],
and the Deligne-Illusie homomorphisms attached to pairs of lifts.

All patches share the global coordinates t_1 .. t_d.  A patch is a Laurent
localization (some coordinates inverted) together with the images F(t_i) of
a Frobenius lift; overlaps invert the union of the inverted sets.

For a patch with lift F:

* ``df_over_p`` returns ``xi[l] = (1/p) dF(t_l)`` reduced mod p, so the
  operator dF/[p] sends ``F_0^*(sum f_l dt_l)`` to ``sum f_l^p xi[l]``;
* ``di_hom`` returns ``z[l] = (F_a(t_l) - F_b(t_l)) / p``, the value of
  h_ab on ``F_0^* dt_l``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

from .errors import BadParams, NotAUnit
from .forms import Form1, d0
from .laurent import (
    MOD_P,
    MOD_P2,
    LaurentPoly,
    RingTag,
    lp_div_p,
    lp_frobenius_pullback,
    lp_invert,
    lp_reduce,
    lp_sigma,
    lp_substitute,
    random_laurent,
    render,
    times_p,
)
from .report import DI_COCYCLE, DI_DERIVATIVE, INPUT_VALIDATION, failed, passed


@dataclass(frozen=True)
class PatchLift:
    name: str
    inverted: frozenset
    lift_images: tuple

    def __post_init__(self):
        object.__setattr__(self, "inverted", frozenset(self.inverted))
        object.__setattr__(self, "lift_images", tuple(self.lift_images))
        if not self.lift_images:
            raise BadParams("a patch needs at least one coordinate image")

    @property
    def tag2(self) -> RingTag:
        """Tag of the lifted ring O_U' (level ModP2)."""
        t = self.lift_images[0].tag
        return RingTag(MOD_P2, t.nvars, self.inverted, t.field)

    @property
    def tag(self) -> RingTag:
        """Tag of O_U on the closed fibre."""
        return self.tag2.with_level(MOD_P)

    @property
    def field(self):
        return self.lift_images[0].tag.field


@dataclass(frozen=True)
class DIHom:
    """h_ab evaluated on F_0^* dt_l, for every coordinate l."""

    alpha: str
    beta: str
    z: tuple

    @property
    def tag(self):
        return self.z[0].tag

    def apply(self, omega: Form1) -> LaurentPoly:
        """h_ab(F_0^* omega) = sum_l omega_l^p z[l]."""
        tag = self.tag
        total = tag.zero()
        for w, z in zip(omega.comps, self.z):
            total = total + lp_frobenius_pullback(w.retag(tag)) * z
        return total


def overlap_tag(*patches: PatchLift, level: str = MOD_P) -> RingTag:
    tags = [P.tag2.with_level(level) for P in patches]
    return tags[0].union(*tags[1:])


def validate_patch(P: PatchLift) -> list:
    """One record per invariant and coordinate; never raises on bad data."""
    records = []
    subject = P.name
    try:
        tag2 = P.tag2
    except Exception as exc:  # malformed images
        return [failed(f"patch:{P.name}:ring", INPUT_VALIDATION, subject, str(exc))]
    d = tag2.nvars
    if len(P.lift_images) != d:
        return [failed(f"patch:{P.name}:arity", INPUT_VALIDATION, subject, f"{len(P.lift_images)} images for {d} coordinates")]
    p = tag2.field.p
    for i, img in enumerate(P.lift_images):
        cid = f"patch:{P.name}:t{i + 1}"
        if img.tag != tag2:
            records.append(failed(cid + ":ring", INPUT_VALIDATION, subject, f"image of t{i + 1} lives in {img.tag}, expected {tag2}"))
            continue
        red = lp_reduce(img)
        expected = tag2.with_level(MOD_P).var(i, p)
        if red != expected:
            records.append(
                failed(cid + ":lifts-frobenius", INPUT_VALIDATION, subject, f"F(t{i + 1}) reduces to {render(red)}, not {render(expected)}")
            )
        else:
            records.append(passed(cid + ":lifts-frobenius", INPUT_VALIDATION, subject))
        if i in P.inverted:
            try:
                lp_invert(img)
                records.append(passed(cid + ":unit", INPUT_VALIDATION, subject))
            except NotAUnit as exc:
                records.append(failed(cid + ":unit", INPUT_VALIDATION, subject, str(exc)))
    return records


def is_valid_patch(P: PatchLift) -> bool:
    recs = validate_patch(P)
    return bool(recs) and all(r.passed for r in recs)


def df_over_p(P: PatchLift) -> list:
    """xi[l] = (1/p) dF(t_l) as 1-forms on the closed fibre."""
    out = []
    for img in P.lift_images:
        dF = d0(img)
        out.append(Form1(P.tag, [lp_div_p(c) for c in dF.comps]))
    return out


def apply_df_over_p(xi, omega: Form1) -> Form1:
    """dF/[p](F_0^* omega) for omega = sum_l omega_l dt_l on the closed fibre."""
    tag = xi[0].tag
    total = Form1.zero(tag)
    for w, x in zip(omega.comps, xi):
        if w.terms:
            total = total + x * lp_frobenius_pullback(w.retag(tag))
    return total


def descend(P: PatchLift, omega_lift: Form1) -> Form1:
    """(1/p) F^* omega' for a lifted 1-form omega', computed by substitution.

    The lift acts on coefficients by the Witt Frobenius, so it reduces to the
    absolute Frobenius.  Independent of the chosen lift omega' of omega; agrees
    with ``apply_df_over_p(df_over_p(P), reduction of omega')``.
    """
    tag2 = P.tag2
    images = [img.retag(tag2) for img in P.lift_images]
    total = Form1.zero(tag2)
    for w, img in zip(omega_lift.comps, images):
        if w.terms:
            total = total + d0(img) * lp_substitute(lp_sigma(w.retag(tag2)), images)
    return Form1(P.tag, [lp_div_p(c) for c in total.comps])


def di_hom(Pa: PatchLift, Pb: PatchLift) -> DIHom:
    tag2 = overlap_tag(Pa, Pb, level=MOD_P2)
    z = [lp_div_p(fa.retag(tag2) - fb.retag(tag2)) for fa, fb in zip(Pa.lift_images, Pb.lift_images)]
    return DIHom(Pa.name, Pb.name, tuple(z))


def verify_di_derivative(Pa: PatchLift, Pb: PatchLift, h: DIHom, xi_a=None, xi_b=None):
    """xi_a[l] - xi_b[l] == d z[l] for every l, over the overlap."""
    subject = f"{Pa.name},{Pb.name}"
    cid = f"di-derivative:{subject}"
    tag = h.tag
    xi_a = xi_a if xi_a is not None else df_over_p(Pa)
    xi_b = xi_b if xi_b is not None else df_over_p(Pb)
    for l, z in enumerate(h.z):
        lhs = xi_a[l].retag(tag) - xi_b[l].retag(tag)
        rhs = d0(z)
        if lhs != rhs:
            for i, (a, b) in enumerate(zip(lhs.comps, rhs.comps)):
                if a != b:
                    return failed(
                        cid, DI_DERIVATIVE, subject,
                        f"coordinate t{l + 1}, dt{i + 1} coefficient: xi_a - xi_b = {render(a)}, dh = {render(b)}",
                    )
    return passed(cid, DI_DERIVATIVE, subject)


def verify_di_cocycle(h_ab: DIHom, h_bc: DIHom, h_ac: DIHom):
    """z_ab + z_bc == z_ac over the triple overlap."""
    subject = f"{h_ab.alpha},{h_ab.beta},{h_bc.beta}"
    cid = f"di-cocycle:{subject}"
    if (h_ab.beta, h_ab.alpha, h_bc.beta) != (h_bc.alpha, h_ac.alpha, h_ac.beta):
        raise BadParams(f"homomorphisms {h_ab.alpha}{h_ab.beta}, {h_bc.alpha}{h_bc.beta}, {h_ac.alpha}{h_ac.beta} do not form a triple")
    tag = h_ab.tag.union(h_bc.tag, h_ac.tag)
    for l, (x, y, w) in enumerate(zip(h_ab.z, h_bc.z, h_ac.z)):
        lhs = x.retag(tag) + y.retag(tag)
        rhs = w.retag(tag)
        if lhs != rhs:
            return failed(cid, DI_COCYCLE, subject, f"coordinate t{l + 1}: z_ab + z_bc = {render(lhs)}, z_ac = {render(rhs)}")
    return passed(cid, DI_COCYCLE, subject)


def ordered_pairs(names):
    return list(permutations(sorted(names), 2))


def ordered_triples(names):
    return list(permutations(sorted(names), 3))


def random_lift(name: str, tag: RingTag, rng, nterms: int = 2, max_degree: int = 3) -> PatchLift:
    """A patch on ``tag`` (ModP) whose lift is t_i^p + p g_i with random g_i."""
    p = tag.field.p
    tag2 = tag.with_level(MOD_P2)
    images = []
    for i in range(tag.nvars):
        g = random_laurent(tag, rng, nterms=nterms, max_degree=max_degree)
        images.append(tag2.var(i, p) + times_p(g))
    return PatchLift(name, tag.inverted, tuple(images))
