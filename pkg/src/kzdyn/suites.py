"""Named check suites and the report writers used by the CLI."""
from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from . import det, kz, operators, roots, verma
from .errors import ConfigError, InvalidCartanType, KzdynError, PoleError
from .exact import RationalMatrix
from .modules import ModuleDescriptor, WeightModule, build_module, sl2_hef, sl2_module
from .reports import FAIL, PASS, SKIP, CheckReport, combine, compare, require
from .sampling import MAX_RETRIES, rand_kappa, rand_lambda, rand_points, rand_rational

F = Fraction
SUITES = ("sl2", "braid", "fusion", "kz", "compat", "det")
MAX_DIM = 256
MAX_FACTORS = 3


@dataclass
class SuiteConfig:
    lie_type: str = "A"
    rank: int | None = 2
    modules: tuple = (1, 1)
    weight: tuple | None = None
    kappa: Fraction | None = None
    samples: int = 3
    seed: int = 0
    suites: tuple = SUITES
    fmt: str = "jsonlines"
    out: str | None = None

    def root_system(self) -> roots.RootSystem:
        try:
            return roots.build_root_system(self.lie_type, self.rank)
        except InvalidCartanType as exc:
            raise ConfigError(f"invalid Cartan type: {exc}") from exc

    def validate(self) -> None:
        rs = self.root_system()
        if self.samples < 1:
            raise ConfigError("samples must be positive")
        unknown = [s for s in self.suites if s not in SUITES]
        if unknown:
            raise ConfigError(f"unknown suite(s): {', '.join(unknown)}")
        if self.fmt not in ("jsonlines", "markdown"):
            raise ConfigError(f"unknown format {self.fmt!r}")
        if self.kappa is not None and self.kappa == 0:
            raise ConfigError("kappa must be nonzero")
        if rs.letter == "A":
            N = rs.rank + 1
            if not self.modules or len(self.modules) > MAX_FACTORS:
                raise ConfigError(f"need 1..{MAX_FACTORS} tensor factors")
            if any(not 1 <= d < N for d in self.modules):
                raise ConfigError(f"wedge degrees must lie in 1..{N - 1}")
            from math import comb

            dim = 1
            for d in self.modules:
                dim *= comb(N, d)
            if dim > MAX_DIM:
                raise ConfigError(f"module dimension {dim} exceeds {MAX_DIM}")
            if self.weight is not None and len(self.weight) != N:
                raise ConfigError(f"weight must have {N} coordinates")

    @property
    def descriptor(self) -> str:
        rs = self.root_system()
        if rs.letter != "A":
            return ""
        return str(ModuleDescriptor(rs.rank + 1, tuple(self.modules)))


@dataclass
class SuiteResult:
    records: list = field(default_factory=list)  # (suite, sample, CheckReport)
    timings: list = field(default_factory=list)  # (suite, check_name, seconds); never written to reports

    def counts(self) -> dict:
        out = {PASS: 0, FAIL: 0, SKIP: 0}
        for _, _, r in self.records:
            out[r.status] += 1
        return out

    @property
    def ok(self) -> bool:
        return self.counts()[FAIL] == 0


class _Runner:
    def __init__(self, config: SuiteConfig, result: SuiteResult, suite: str):
        self.config = config
        self.result = result
        self.suite = suite
        self.rng = random.Random(f"{config.seed}:{suite}")
        self.rs = config.root_system()

    def add(self, report: CheckReport, sample: int | None = None) -> None:
        self.result.records.append((self.suite, sample, report))

    def timed(self, name: str, fn: Callable[[], CheckReport], sample: int | None = None) -> None:
        start = time.perf_counter()
        try:
            report = fn()
        except PoleError as exc:
            report = CheckReport(name, FAIL, witness={"error": type(exc).__name__, "message": str(exc)})
        self.result.timings.append((self.suite, name, time.perf_counter() - start))
        self.add(report, sample)

    def skip(self, name: str, note: str) -> None:
        self.add(CheckReport(name, SKIP, {"type": self.rs.name}, note=note))

    # sample points ---------------------------------------------------------
    def ctx(self, N: int) -> operators.EvalContext:
        kappa = self.config.kappa if self.config.kappa is not None else rand_kappa(self.rng)
        return operators.EvalContext(rand_lambda(self.rng, N), kappa)

    def zs(self, n: int, d: int) -> kz.ZSample:
        return kz.ZSample(rand_points(self.rng, n), d)

    def sampled(self, name: str, draw: Callable, run: Callable) -> None:
        """R samples; each redrawn on PoleError up to MAX_RETRIES times."""
        for s in range(self.config.samples):
            start = time.perf_counter()
            report = None
            for _ in range(MAX_RETRIES):
                sample = draw()
                try:
                    report = run(sample)
                    break
                except PoleError:
                    continue
            if report is None:
                report = CheckReport(name, FAIL, witness={"error": "PoleError", "message": "no generic sample found"})
            self.result.timings.append((self.suite, name, time.perf_counter() - start))
            self.add(report, s)

    def module(self) -> WeightModule | None:
        if self.rs.letter != "A":
            return None
        return build_module(self.rs.rank + 1, tuple(self.config.modules))


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------


def eq_product_eigenvalues(m: int, a: Fraction) -> list[Fraction]:
    """prod_{j<k} (a + m/2 - j) / (a - m/2 + j) for k = 0..m."""
    out = []
    for k in range(m + 1):
        v = F(1)
        for j in range(k):
            den = a - F(m, 2) + j
            if den == 0:
                raise PoleError("eigenvalue formula is singular", j=j)
            v *= (a + F(m, 2) - j) / den
        out.append(v)
    return out


def _suite_sl2(run: _Runner) -> None:
    for m in range(1, 7):
        L = sl2_module(m)
        H, E, F_ = sl2_hef(L)

        def eig(a, m=m, L=L):
            lam = (a / 2, -a / 2)
            got = operators.bb_alpha(L, (1, -1), lam)
            return compare("sl2_eigenvalues", got, RationalMatrix.diag(eq_product_eigenvalues(m, a)), m=m, a=a)

        run.sampled("sl2_eigenvalues", lambda: rand_rational(run.rng), eig)

        def inv(t, m=m, H=H, E=E, F_=F_):
            if t + 1 == 0:
                raise PoleError("t = -1")
            lhs = operators.p_series(-t - 2, -H, F_, E) @ operators.p_series(t, H, E, F_)
            rhs = (RationalMatrix.identity(m + 1).scale(t + 1) - H).scale(1 / (t + 1))
            return compare("sl2_inversion", lhs, rhs, m=m, t=t)

        run.sampled("sl2_inversion", lambda: rand_rational(run.rng), inv)
    for m, lam in ((0, 2), (2, 6), (3, 8), (4, 10)):
        run.timed("sl2_verma_oracle", lambda m=m, lam=lam: verma.sl2_verma_oracle(m, lam))


def word_checks(rs: roots.RootSystem) -> list[CheckReport]:
    """Word-level checks that make sense for every Cartan type."""
    out = []
    p = {"type": rs.name}
    for i in range(1, rs.rank + 1):
        el = roots.translation(rs, rs.dual_fundamental(i))
        _, c1 = roots.a_tilde_set(el, "min")
        _, c2 = roots.a_tilde_set(el, "max")
        out.append(require("a_tilde_useful", c1 == roots.useful_set(rs, i), "A-tilde differs from the useful set", i=i, **p))
        out.append(require("a_tilde_word_independent", c1 == c2, "tie-break changes A-tilde", i=i, **p))
        out.append(require("length_matches", el.length == sum(c1.values()), "length mismatch", i=i, **p))
    for i in range(1, rs.rank + 1):
        for j in range(1, rs.rank + 1):
            m = rs.coxeter_m(i, j)
            w = rs.from_word([i, j] * m)
            out.append(require("coxeter_relation", w.is_identity(), f"(s{i} s{j})^{m} != 1", i=i, j=j, **p))
    for i in range(1, rs.rank + 1):
        mins = roots.is_minuscule(rs, i)
        out.append(require("minuscule_matches_o_star", mins == (i in rs.o_star), "O* mismatch", i=i, **p))
    for i in rs.o_star:
        w = roots.w_bracket(rs, i)
        ok = all(
            rs.is_positive(w.act(a)) == (rs.pair(rs.dual_fundamental(i), a) == 0) for a in rs.positive_roots
        )
        out.append(require("w_bracket_signs", ok, "sign pattern of w_[i] is wrong", i=i, **p))
        perm = roots.pi_action_on_simple(rs, i)
        out.append(require("pi_alpha0", perm[0] == i, "pi_i(alpha_0) != alpha_i", i=i, **p))
    out.extend(example_word_checks(rs))
    return out


def _aff(rs, coeffs, level):
    return roots.AffineRoot(rs.from_coefficients(coeffs), level)


def example_sequences(rs: roots.RootSystem) -> dict:
    """Rightmost-first factor sequences of the translation cocycles for A2, B2 and G2."""
    a = lambda *c: _aff(rs, c[:-1], c[-1])  # noqa: E731
    if rs.name == "A2":
        return {1: [a(1, 0, 0), a(1, 1, 0)], 2: [a(0, 1, 0), a(1, 1, 0)]}
    if rs.name == "B2":
        return {1: [a(1, 0, 0), a(1, 1, 0), a(1, 2, 0)], 2: [a(0, 1, 0), a(1, 2, 0), a(1, 1, 0), a(1, 2, 1)]}
    if rs.name == "G2":
        return {
            1: [a(1, 0, 0), a(3, 1, 0), a(2, 1, 0), a(3, 2, 0), a(1, 1, 0),
                a(3, 1, 1), a(3, 2, 1), a(2, 1, 1), a(3, 1, 2), a(3, 2, 2)],
            2: [a(0, 1, 0), a(1, 1, 0), a(3, 2, 0), a(2, 1, 0), a(3, 1, 0), a(3, 2, 1)],
        }
    return {}


def example_word_checks(rs: roots.RootSystem) -> list[CheckReport]:
    out = []
    for i, seq in example_sequences(rs).items():
        p = {"type": rs.name, "i": i}
        word = roots.sequence_realizable(rs, seq)
        if word is None:
            out.append(require("example_sequence", False, "sequence is not an inversion sequence", **p))
            continue
        g = roots.affine_from_finite(rs.identity())
        for j in word:
            g = g * roots.affine_s(rs, j)
        t = roots.translation(rs, rs.dual_fundamental(i))
        rest = t * g.inverse()  # t = pi * g with pi of length 0
        ok = rest.length == 0 and len(seq) == t.length
        out.append(require("example_sequence", ok, "sequence does not reduce the translation", **p))
    return out


def _braid_relations(V: WeightModule, lam) -> CheckReport:
    rs = V.root_system
    N = V.N
    reps = []
    for a in rs.positive_roots:
        for b in rs.positive_roots:
            if a >= b:
                continue
            s = roots.vadd(a, b)
            if rs.is_root(s):
                lhs = operators.bb_product(V, [a, s, b], lam)
                rhs = operators.bb_product(V, [b, s, a], lam)
                reps.append(compare("braid_a2", lhs, rhs))
            elif operators.dot(a, b) == 0:
                lhs = operators.bb_product(V, [a, b], lam)
                rhs = operators.bb_product(V, [b, a], lam)
                reps.append(compare("braid_commute", lhs, rhs))
    return combine("braid_relations", reps, module=V.name, lam=list(lam), N=N)


def _suite_braid(run: _Runner) -> None:
    for r in word_checks(run.rs):
        run.add(r)
    V = run.module()
    if V is None:
        for name in ("braid_relations", "bb_word_independence", "reflection_scalar"):
            run.skip(name, "representation checks need type A modules")
        return
    rs = V.root_system
    run.sampled("braid_relations", lambda: run.ctx(V.N), lambda c: _braid_relations(V, c.lam))

    def words(c):
        w0 = rs.w0
        a = operators.bb_w(V, w0, c.lam, w0.reduced_word("min"))
        b = operators.bb_w(V, w0, c.lam, w0.reduced_word("max"))
        u = operators.bb_w_universal(V, w0, c.lam)
        return combine(
            "bb_word_independence",
            [compare("bb_words", a, b), compare("bb_universal_route", a, u)],
            module=V.name,
            lam=list(c.lam),
        )

    run.sampled("bb_word_independence", lambda: run.ctx(V.N), words)

    def prop3(c):
        reps = []
        for a in rs.positive_roots:
            prod = operators.bb_alpha(V, a, c.lam) @ operators.bb_alpha(V, roots.vneg(a), c.lam)
            reps.append(compare("reflection_scalar", prod, operators.reflection_scalar(V, a, c.lam)))
        return combine("reflection_scalar", reps, module=V.name, lam=list(c.lam))

    run.sampled("reflection_scalar", lambda: run.ctx(V.N), prop3)


def _suite_fusion(run: _Runner) -> None:
    V = run.module()
    if V is None or V.n_factors != 2:
        note = "fusion checks need a two-factor type A module"
        for name in ("abrr", "coproduct_factorization", "r_exchange"):
            run.skip(name, note)
        return
    rs = V.root_system
    N = V.N
    W1 = build_module(N, (run.config.modules[0],))
    W2 = build_module(N, (run.config.modules[1],))

    def abrr(c):
        J = operators.fusion_transformed(V, c.lam)
        res = operators.abrr_residual(V, c.lam, J)
        return combine(
            "abrr",
            [compare("abrr_residual", res, RationalMatrix.zeros(V.dim)),
             require("abrr_unipotent", operators.is_unipotent_lower(V, J), "J is not unipotent lower triangular")],
            module=V.name,
            lam=list(c.lam),
        )

    run.sampled("abrr", lambda: run.ctx(N), abrr)
    for w in (rs.s(1), rs.w0):
        run.sampled("coproduct_factorization", lambda: run.ctx(N), lambda c, w=w: operators.verify_coproduct_factorization(W1, W2, w, c))
        run.sampled("r_exchange", lambda: run.ctx(N), lambda c, w=w: operators.verify_r_exchange(V, w, c))


def _suite_kz(run: _Runner) -> None:
    V = run.module()
    if V is None:
        run.skip("kz_flatness", "KZ checks need type A modules")
        return
    n = V.n_factors
    run.sampled("kz_flatness", lambda: (run.ctx(V.N), run.zs(n, 1)), lambda s: kz.check_kz_flatness(V, s[1].z, s[0]))


def _suite_compat(run: _Runner) -> None:
    V = run.module()
    if V is None:
        for name in ("kz_dyn_compat", "dyn_dyn_compat", "pi_invariance", "bw_r_exchange", "equivalent_form", "cocycle_kz"):
            run.skip(name, "representation checks need type A modules")
        return
    rs = V.root_system
    N, n = V.N, V.n_factors
    draw = lambda: (run.ctx(N), run.zs(n, N))  # noqa: E731

    def all_of(name, fn):
        def go(s):
            c, zs = s
            return combine(name, list(fn(c, zs)), module=V.name, lam=list(c.lam), kappa=c.kappa, z=list(zs.z), t=list(zs.t))

        run.sampled(name, draw, go)

    all_of("kz_dyn_compat", lambda c, zs: (kz.check_kz_dyn_compat(V, i, j, zs, c) for i in rs.o_star for j in range(n)))
    all_of(
        "dyn_dyn_compat",
        lambda c, zs: [kz.check_dyn_dyn_compat(V, i, j, zs, c) for i in rs.o_star for j in rs.o_star if i < j]
        or [CheckReport("dyn_dyn_compat", PASS, note="single minuscule weight")],
    )
    all_of("pi_invariance", lambda c, zs: (kz.check_pi_invariance(V, i, j, zs, c) for i in rs.o_star for j in range(n)))
    all_of("bw_r_exchange", lambda c, zs: (kz.check_bw_r_exchange(V, j, w, zs, c) for w in (rs.s(1), rs.w0) for j in range(n)))
    all_of("equivalent_form", lambda c, zs: (kz.check_equivalent_form(V, i, zs, c) for i in range(1, N + 1)))
    all_of("cocycle_matches_dyn", lambda c, zs: (kz.check_cocycle_matches_dyn(V, i, c) for i in rs.o_star))

    def last(c, zs):
        els = [roots.affine_s(rs, j) for j in range(rs.rank + 1)]
        els.append(roots.affine_s(rs, 0) * roots.affine_s(rs, 1))
        els.append(roots.translation(rs, rs.dual_fundamental(1)) * roots.affine_s(rs, 0))
        return (kz.check_cocycle_kz(V, el, j, zs, c) for el in els for j in range(n))

    all_of("cocycle_kz", last)

    def cocycle(c, zs):
        out = []
        x = roots.affine_s(rs, 0)
        y = roots.affine_s(rs, 1)
        out.append(kz.check_cocycle_identity(V, x, y, c))
        t = roots.translation(rs, rs.dual_fundamental(1))
        _, word = t.reduced_word()
        if word:
            out.append(kz.check_cocycle_identity(V, roots.affine_s(rs, 0), roots.affine_s(rs, word[-1]), c))
        for a in (roots.affine_simple_root(rs, 0), roots.AffineRoot(rs.theta, 2)):
            out.append(kz.check_factor_well_defined(V, a, c))
        return out

    all_of("cocycle_identity", cocycle)


def _suite_det(run: _Runner) -> None:
    V = run.module()
    if V is None:
        run.skip("det_ratio", "determinant checks need type A modules")
        return
    rs = V.root_system
    N, n = V.N, V.n_factors
    if run.config.weight is not None:
        gl = [F(x) for x in run.config.weight]
        mean = sum(gl, F(0)) / N
        nus = [tuple(x - mean for x in gl)]
        V.weight_space(nus[0])
    else:
        nus = sorted(V.weight_blocks())

    def go(s):
        c, zs = s
        reps = [det.det_formula_check(V, nu, i, zs, c) for nu in nus for i in rs.o_star]
        return combine("det_ratio", reps, module=V.name, lam=list(c.lam), kappa=c.kappa, z=list(zs.z), t=list(zs.t))

    run.sampled("det_ratio", lambda: (run.ctx(N), run.zs(n, N)), go)


_DISPATCH = {
    "sl2": _suite_sl2,
    "braid": _suite_braid,
    "fusion": _suite_fusion,
    "kz": _suite_kz,
    "compat": _suite_compat,
    "det": _suite_det,
}


def run_suite(config: SuiteConfig) -> SuiteResult:
    config.validate()
    result = SuiteResult()
    for name in config.suites:
        try:
            _DISPATCH[name](_Runner(config, result, name))
        except KzdynError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"suite {name}: {exc}") from exc
    return result


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


def _context(config: SuiteConfig, suite: str, sample) -> dict:
    rs = config.root_system()
    return {
        "suite": suite,
        "sample": sample,
        "type": rs.letter,
        "rank": rs.rank,
        "module_descriptor": config.descriptor,
        "seed": config.seed,
    }


def report_records(config: SuiteConfig, result: SuiteResult) -> list[dict]:
    out = []
    for suite, sample, rep in result.records:
        rec = rep.to_record(_context(config, suite, sample))
        params = rec["params"]
        for key in ("lam", "kappa", "z"):
            rec[key] = params.get(key)
        out.append(rec)
    return out


def format_jsonlines(config: SuiteConfig, result: SuiteResult) -> str:
    return "".join(json.dumps(r, sort_keys=True) + "\n" for r in report_records(config, result))


def format_markdown(config: SuiteConfig, result: SuiteResult) -> str:
    rs = config.root_system()
    lines = [
        "# kzdyn report",
        "",
        f"- type: {rs.name}",
        f"- modules: {config.descriptor or '-'}",
        f"- seed: {config.seed}",
        f"- samples: {config.samples}",
        "",
    ]
    counts = result.counts()
    lines.append(f"PASS {counts[PASS]} / FAIL {counts[FAIL]} / SKIP {counts[SKIP]}")
    lines.append("")
    cols = list(range(config.samples))
    lines.append("| suite | check | " + " | ".join(f"sample {c + 1}" for c in cols) + " | unsampled |")
    lines.append("|" + "---|" * (len(cols) + 3))
    table: dict = {}
    order = []
    for suite, sample, rep in result.records:
        key = (suite, rep.check_name)
        if key not in table:
            table[key] = {}
            order.append(key)
        cell = table[key].setdefault(sample, [])
        cell.append(rep.status)
    for key in order:
        row = table[key]
        cells = [_cell(row.get(c, [])) for c in cols] + [_cell(row.get(None, []))]
        lines.append(f"| {key[0]} | {key[1]} | " + " | ".join(cells) + " |")
    failures = [(s, n, r) for s, n, r in result.records if r.status == FAIL]
    if failures:
        lines += ["", "## Failures", ""]
        for suite, sample, rep in failures:
            lines.append(f"- {suite}/{rep.check_name} sample {sample}: `{json.dumps(rep.to_record()['failure_witness'], sort_keys=True)}`")
    return "\n".join(lines) + "\n"


def _cell(statuses: Iterable[str]) -> str:
    statuses = list(statuses)
    if not statuses:
        return ""
    if FAIL in statuses:
        return f"FAIL ({statuses.count(FAIL)}/{len(statuses)})"
    if all(s == SKIP for s in statuses):
        return "SKIP"
    return "PASS" if len(statuses) == 1 else f"PASS x{len(statuses)}"


def emit_report(config: SuiteConfig, result: SuiteResult, fmt: str | None = None, path: str | None = None) -> str:
    text = (format_markdown if (fmt or config.fmt) == "markdown" else format_jsonlines)(config, result)
    target = path or config.out
    if target:
        with open(target, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return text
