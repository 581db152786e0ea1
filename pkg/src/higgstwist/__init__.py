"""Exact construction and verification of the flat bundle obtained from a
nilpotent Higgs bundle by exponential twisting with W2 Frobenius lifts."""

from .arith import FieldElem, FieldParams, Witt2Elem
from .cover import DIHom, PatchLift, df_over_p, di_hom, validate_patch
from .errors import HiggsTwistError, ManifestError
from .forms import MatForm1, Matrix, curvature, gauge_transform
from .higgs import HiggsData, RandomHiggsParams, random_higgs, random_instance, validate_higgs
from .laurent import MOD_P, MOD_P2, LaurentPoly, RingTag, parse, render
from .manifest import Manifest, emit_manifest, parse_manifest
from .report import CHECK_KINDS, CheckResult, Report
from .twist import FlatBundleAtlas, build_atlas, gluing_matrix, local_connection, truncated_exp

__version__ = "0.1.0"

__all__ = [
    "CHECK_KINDS", "CheckResult", "DIHom", "FieldElem", "FieldParams", "FlatBundleAtlas", "HiggsData",
    "HiggsTwistError", "LaurentPoly", "MOD_P", "MOD_P2", "Manifest", "ManifestError", "MatForm1", "Matrix",
    "PatchLift", "RandomHiggsParams", "Report", "RingTag", "Witt2Elem", "build_atlas", "curvature",
    "df_over_p", "di_hom", "emit_manifest", "gauge_transform", "gluing_matrix", "local_connection",
    "parse", "parse_manifest", "random_higgs", "random_instance", "render", "truncated_exp",
    "validate_higgs", "validate_patch",
]
