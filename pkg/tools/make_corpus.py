"""Regenerate src/higgstwist/corpus/*.json.

Hand-written entries are canonicalized through parse/emit; the
``nontrivial-transitions`` entry is drawn from ``random_instance`` and frozen.
Run from the repository root: ``python3 tools/make_corpus.py``.
"""

from __future__ import annotations

from pathlib import Path

from higgstwist.higgs import RandomHiggsParams, random_instance
from higgstwist.manifest import Manifest, emit_manifest, manifest_from_dict

OUT = Path(__file__).resolve().parent.parent / "src" / "higgstwist" / "corpus"

E12 = [["0", "1"], ["0", "0"]]
I2 = [["1", "0"], ["0", "1"]]


def entry(title, p, dim, exponent, rank, patches, theta, transitions=(), e=1, modulus=None, seed=None):
    data = {"metadata": {"title": title, "seed": seed}, "p": p, "e": e}
    if modulus:
        data["modulus"] = modulus
    data.update(dim=dim, exponent=exponent)
    data["patches"] = [{"name": n, "inverted": inv, "lift": lift} for n, inv, lift in patches]
    data["bundle"] = {
        "rank": rank,
        "theta": theta,
        "transitions": [{"from": a, "to": b, "matrix": m} for a, b, m in transitions],
    }
    return data


def handwritten():
    yield "a1-two-lifts", entry(
        "affine line, p = 5, lifts t^5 and t^5 + 5 t^2", 5, 1, 1, 2,
        [("a", [], ["t1^5"]), ("b", [], ["t1^5 + 5*t1^2"])],
        {"a": [E12], "b": [E12]},
        [("a", "b", I2)],
    )
    yield "a1-three-lifts", entry(
        "affine line, p = 5, three lifts for the triple-overlap cocycle", 5, 1, 1, 2,
        [("a", [], ["t1^5"]), ("b", [], ["t1^5 + 5*t1^2"]), ("c", [], ["t1^5 + 5*t1^2 + 5*t1^3"])],
        {"a": [E12], "b": [E12], "c": [E12]},
        [("a", "b", I2), ("b", "c", I2), ("a", "c", I2)],
    )
    theta_gm = [[["0", "t1^-1"], ["0", "0"]]]
    diag = [["1", "0"], ["0", "t1"]]
    yield "gm-lifts", entry(
        "p = 3, two patches with t1 inverted and one without, Laurent denominators", 3, 1, 1, 2,
        [("a", [1], ["t1^3 + 3*t1^-1"]), ("b", [1], ["t1^3"]), ("c", [], ["t1^3 + 3*t1^2"])],
        {"a": theta_gm, "b": theta_gm, "c": [E12]},
        [("a", "b", I2), ("b", "c", diag), ("a", "c", diag)],
    )
    theta_a2 = [E12, [["0", "t1"], ["0", "0"]]]
    yield "a2-rank2", entry(
        "affine plane, p = 3, rank 2, three lifts", 3, 2, 1, 2,
        [
            ("a", [], ["t1^3", "t2^3"]),
            ("b", [], ["t1^3", "t2^3 + 3*t1"]),
            ("c", [], ["t1^3 + 3*t2^2", "t2^3 + 3*t1*t2"]),
        ],
        {"a": theta_a2, "b": theta_a2, "c": theta_a2},
        [("a", "b", I2), ("b", "c", I2), ("a", "c", I2)],
    )
    yield "a2-single", entry(
        "affine plane, p = 3, a single patch (no overlaps)", 3, 2, 1, 2,
        [("a", [], ["t1^3 + 3*t2^2", "t2^3 + 3*t1*t2"])],
        {"a": theta_a2},
    )
    J = [["0", "1", "0"], ["0", "0", "1"], ["0", "0", "0"]]
    theta2 = [["0", "t1", "1"], ["0", "0", "t1"], ["0", "0", "0"]]  # t1 J + J^2
    I3 = [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]
    yield "a2-rank3-taylor", entry(
        "affine plane, p = 5, rank 3, exponent 2", 5, 2, 2, 3,
        [
            ("a", [], ["t1^5", "t2^5"]),
            ("b", [], ["t1^5 + 5*t2", "t2^5 + 5*t1^2"]),
            ("c", [], ["t1^5 + 5*t1*t2", "t2^5 + 5"]),
        ],
        {"a": [J, theta2], "b": [J, theta2], "c": [J, theta2]},
        [("a", "b", I3), ("b", "c", I3), ("a", "c", I3)],
    )
    theta_fq = [[["0", "{x}"], ["0", "0"]]]
    yield "fq-base", entry(
        "affine line over F_9 = F_3[x]/(x^2 + 1)", 3, 1, 1, 2,
        [
            ("a", [], ["t1^3"]),
            ("b", [], ["t1^3 + (0,{x})*t1^2"]),
            ("c", [], ["t1^3 + (0,{x + 1})*t1"]),
        ],
        {"a": theta_fq, "b": theta_fq, "c": theta_fq},
        [("a", "b", I2), ("b", "c", I2), ("a", "c", I2)],
        e=2, modulus=[1, 0, 1],
    )


def nontrivial(seed=7):
    params = RandomHiggsParams(p=5, d=2, rank=3, n=2, npatches=3, max_degree=1, nterms=1)
    patches, H = random_instance(params, seed)
    return Manifest(params.field(), params.d, params.n, patches, H,
                    "p = 5, d = 2, rank 3, unipotent transitions B_a B_b^-1", seed)


def main():
    OUT.mkdir(exist_ok=True)
    for name, data in handwritten():
        (OUT / f"{name}.json").write_text(emit_manifest(manifest_from_dict(data)), encoding="utf-8")
    (OUT / "nontrivial-transitions.json").write_text(emit_manifest(nontrivial()), encoding="utf-8")


if __name__ == "__main__":
    main()
