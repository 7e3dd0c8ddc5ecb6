"""Exact rational verification of KZ / dynamical difference operator identities."""
from .errors import ConfigError, KzdynError, PoleError
from .exact import PuiseuxMatrix, RationalMatrix, mat_det, mat_inverse
from .modules import ModuleDescriptor, WeightModule, build_module, exterior_power, tensor, vector_rep
from .operators import EvalContext, bb_alpha, bb_w, fusion_J, r_matrix
from .reports import FAIL, PASS, SKIP, CheckReport
from .roots import AffineRoot, AffineWeylElement, RootSystem, WeylElement, build_root_system
from .suites import SuiteConfig, SuiteResult, emit_report, run_suite

__all__ = [
    "AffineRoot", "AffineWeylElement", "CheckReport", "ConfigError", "EvalContext", "FAIL", "KzdynError",
    "ModuleDescriptor", "PASS", "PoleError", "PuiseuxMatrix", "RationalMatrix", "RootSystem", "SKIP",
    "SuiteConfig", "SuiteResult", "WeightModule", "WeylElement", "bb_alpha", "bb_w", "build_module",
    "build_root_system", "emit_report", "exterior_power", "fusion_J", "mat_det", "mat_inverse", "r_matrix",
    "run_suite", "tensor", "vector_rep",
]
