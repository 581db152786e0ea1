"""JSON manifests describing a cover with Frobenius lifts and a Higgs bundle.

Example (the ``a1-two-lifts`` corpus entry)::

    {
      "metadata": {"title": "...", "seed": null},
      "p": 5, "e": 1, "dim": 1, "exponent": 1,
      "patches": [
        {"name": "a", "inverted": [], "lift": ["t1^5"]},
        {"name": "b", "inverted": [], "lift": ["t1^5 + (0,1)*t1^2"]}
      ],
      "bundle": {
        "rank": 2,
        "theta": {"a": [[["0", "1"], ["0", "0"]]], "b": [[["0", "1"], ["0", "0"]]]},
        "transitions": [{"from": "a", "to": "b", "matrix": [["1", "0"], ["0", "1"]]}]
      }
    }

``modulus`` (low degree first) is required when ``e > 1``.  Inverted
coordinates are 1-based.  Lift images are read at level ModP2, Higgs fields
and transitions at level ModP, all in the text grammar of :mod:`laurent`.
Transitions are given for unordered pairs; the reverse direction is the
inverse matrix.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .arith import FieldParams
from .cover import PatchLift, validate_patch
from .errors import HiggsTwistError, ManifestError
from .forms import Matrix
from .higgs import HiggsData, validate_higgs
from .laurent import MOD_P, MOD_P2, RingTag, parse, render


@dataclass
class Manifest:
    field: FieldParams
    dim: int
    exponent: int
    patches: list
    higgs: HiggsData
    title: str = ""
    seed: int | None = None

    @property
    def p(self):
        return self.field.p

    @property
    def rank(self):
        return self.higgs.rank

    def __eq__(self, other):
        if not isinstance(other, Manifest):
            return NotImplemented
        return (
            self.field == other.field
            and self.dim == other.dim
            and self.exponent == other.exponent
            and self.patches == other.patches
            and self.higgs.rank == other.higgs.rank
            and self.higgs.patches == other.higgs.patches
            and self.higgs.theta == other.higgs.theta
            and self.higgs.transitions == other.higgs.transitions
            and self.title == other.title
            and self.seed == other.seed
        )


def _require(obj, key, path, kind=None):
    if not isinstance(obj, dict) or key not in obj:
        raise ManifestError(f"missing field {key!r}", path=path or "<root>")
    value = obj[key]
    if kind is not None and not isinstance(value, kind) or (kind is int and isinstance(value, bool)):
        name = kind.__name__ if isinstance(kind, type) else "/".join(k.__name__ for k in kind)
        raise ManifestError(f"expected {name}, got {type(value).__name__}", path=_join(path, key))
    return value


def _join(path, key):
    if isinstance(key, int):
        return f"{path}[{key}]"
    return f"{path}.{key}" if path else key


def _poly(text, tag, path):
    try:
        return parse(text, tag)
    except HiggsTwistError as exc:
        raise ManifestError(str(exc), path=path) from None


def _matrix(rows, tag, rank, path):
    if not isinstance(rows, list) or len(rows) != rank or any(not isinstance(r, list) or len(r) != rank for r in rows):
        raise ManifestError(f"expected a {rank}x{rank} matrix of polynomial strings", path=path)
    return Matrix(tag, [[_poly(x, tag, f"{path}[{i}][{j}]") for j, x in enumerate(r)] for i, r in enumerate(rows)])


def manifest_from_dict(data) -> Manifest:
    if not isinstance(data, dict):
        raise ManifestError("manifest must be a JSON object", path="<root>")
    meta = data.get("metadata", {})
    if not isinstance(meta, dict):
        raise ManifestError("expected an object", path="metadata")
    title = meta.get("title", "")
    seed = meta.get("seed")

    p = _require(data, "p", "", int)
    e = data.get("e", 1)
    modulus = data.get("modulus", [])
    try:
        F = FieldParams(p, e, tuple(modulus))
    except (HiggsTwistError, TypeError) as exc:
        raise ManifestError(str(exc), path="p" if e == 1 else "modulus") from None
    d = _require(data, "dim", "", int)
    if d < 1:
        raise ManifestError("dimension must be positive", path="dim")
    n = _require(data, "exponent", "", int)
    if not 0 <= n <= p - 1:
        raise ManifestError(f"exponent bound violated: n = {n} but need 0 <= n <= p-1 = {p - 1}", path="exponent")

    patches = []
    tags = {}
    for k, entry in enumerate(_require(data, "patches", "", list)):
        path = f"patches[{k}]"
        name = _require(entry, "name", path, str)
        if name in tags:
            raise ManifestError(f"duplicate patch name {name!r}", path=_join(path, "name"))
        inverted = _require(entry, "inverted", path, list)
        if any(not isinstance(i, int) or not 1 <= i <= d for i in inverted):
            raise ManifestError(f"inverted coordinates must be in 1..{d}", path=_join(path, "inverted"))
        inv = frozenset(i - 1 for i in inverted)
        tag2 = RingTag(MOD_P2, d, inv, F)
        lift = _require(entry, "lift", path, list)
        if len(lift) != d:
            raise ManifestError(f"need {d} lift images", path=_join(path, "lift"))
        images = tuple(_poly(s, tag2, f"{path}.lift[{i}]") for i, s in enumerate(lift))
        P = PatchLift(name, inv, images)
        bad = [r for r in validate_patch(P) if not r.passed]
        if bad:
            raise ManifestError(f"rejected by patch validation: {bad[0].witness}", path=_join(path, "lift"))
        patches.append(P)
        tags[name] = tag2.with_level(MOD_P)
    if not patches:
        raise ManifestError("need at least one patch", path="patches")

    bundle = _require(data, "bundle", "", dict)
    rank = _require(bundle, "rank", "bundle", int)
    if rank < 1:
        raise ManifestError("rank must be positive", path="bundle.rank")
    theta_in = _require(bundle, "theta", "bundle", dict)
    theta = {}
    for name in tags:
        path = f"bundle.theta.{name}"
        if name not in theta_in:
            raise ManifestError("missing Higgs field for patch", path=path)
        comps = theta_in[name]
        if not isinstance(comps, list) or len(comps) != d:
            raise ManifestError(f"need {d} component matrices (one per dt_i)", path=path)
        theta[name] = tuple(_matrix(m, tags[name], rank, f"{path}[{i}]") for i, m in enumerate(comps))
    extra = set(theta_in) - set(tags)
    if extra:
        raise ManifestError(f"Higgs field for unknown patch {sorted(extra)[0]!r}", path="bundle.theta")
    transitions = {}
    for k, entry in enumerate(bundle.get("transitions", [])):
        path = f"bundle.transitions[{k}]"
        a = _require(entry, "from", path, str)
        b = _require(entry, "to", path, str)
        for key, nm in (("from", a), ("to", b)):
            if nm not in tags:
                raise ManifestError(f"unknown patch {nm!r}", path=_join(path, key))
        if a == b or (a, b) in transitions or (b, a) in transitions:
            raise ManifestError(f"duplicate or trivial transition {a}->{b}", path=path)
        tag = tags[a].union(tags[b])
        transitions[(a, b)] = _matrix(_require(entry, "matrix", path, list), tag, rank, _join(path, "matrix"))
    H = HiggsData(rank, n, tuple(tags), theta, transitions)
    bad = [r for r in validate_higgs(H) if not r.passed]
    if bad:
        r = bad[0]
        raise ManifestError(f"rejected by Higgs validation ({r.check_id}): {r.witness}", path="bundle")
    return Manifest(F, d, n, patches, H, title, seed)


def parse_manifest(text: str) -> Manifest:
    """Parse manifest text; raises :class:`ManifestError` with a line or a field path."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ManifestError(f"JSON syntax error: {exc.msg} (column {exc.colno})", line=exc.lineno) from None
    return manifest_from_dict(data)


def manifest_to_dict(m: Manifest) -> dict:
    out = {"metadata": {"title": m.title, "seed": m.seed}, "p": m.field.p, "e": m.field.e}
    if m.field.e > 1:
        out["modulus"] = list(m.field.modulus)
    out["dim"] = m.dim
    out["exponent"] = m.exponent
    out["patches"] = [
        {"name": P.name, "inverted": sorted(i + 1 for i in P.inverted), "lift": [render(f) for f in P.lift_images]}
        for P in m.patches
    ]
    H = m.higgs
    out["bundle"] = {
        "rank": H.rank,
        "theta": {name: [t.to_text() for t in H.theta[name]] for name in H.patches},
        "transitions": [
            {"from": a, "to": b, "matrix": M.to_text()} for (a, b), M in H.transitions.items()
        ],
    }
    return out


def emit_manifest(m: Manifest) -> str:
    return dumps(manifest_to_dict(m))


def dumps(obj) -> str:
    """JSON with two-space indentation, but innermost lists of strings kept on one line."""
    return _dump(obj, 0) + "\n"


def _dump(obj, level):
    pad = "  " * level
    inner = "  " * (level + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(k)}: {_dump(v, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, list):
        if all(not isinstance(x, (dict, list)) for x in obj):
            return json.dumps(obj)
        items = [inner + _dump(x, level + 1) for x in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    return json.dumps(obj)
