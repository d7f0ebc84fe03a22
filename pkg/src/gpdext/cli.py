"""Command-line front end: parse documents, run named verification suites,
emit human-readable tables or byte-stable machine reports.

Exit codes: 0 when every check passes, 1 when a check fails, 2 on input
errors.  Machine reports contain only strings, integers and booleans (floats
are rendered at fixed precision), and serialize canonically, so a run with a
fixed seed reproduces its report byte-for-byte.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
from dataclasses import dataclass, field
from math import lcm
from pathlib import Path

from . import __version__
from . import cyclic_oracle as oracle
from .algebra import TwistedAlgebra
from .cocycle import (
    CocycleError,
    IsotropyObstruction,
    TwoCocycle,
    normalize,
    solve_coboundary,
    trivialize_principal,
)
from .documents import (
    DocumentError,
    SpecDocument,
    canonical_json,
    cochain_to_doc,
    cocycle_to_doc,
    fmt_float,
    parse_spec,
)
from .extension import (
    ExtensionAlgebra,
    check_reduced_decomposition,
    cyclic_decompose,
    cyclic_extension,
    decompose,
    intertwine_check,
    mode_component,
    mode_projection,
    oracle_norm_deviation,
)
from .groupoid import (
    PROPER_NOTE,
    is_principal,
    is_proper,
    is_transitive,
    orbit_decomposition,
    validate,
)
from .morita import MoritaError, fullness_check, positivity_check, saturation_report
from .randgen import random_bimodule, random_element, random_laurent

FIXTURE_ENV = "GPDEXT_FIXTURE_DIR"


@dataclass
class CheckResult:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)


@dataclass
class Report:
    command: str
    source: str
    seed: int
    samples: int
    checks: list[CheckResult] = field(default_factory=list)
    extras: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, **details):
        self.checks.append(CheckResult(name, bool(passed), details))

    def to_doc(self) -> dict:
        return {
            "command": self.command,
            "source": self.source,
            "provenance": {"seed": self.seed, "samples": self.samples, "version": __version__},
            "passed": self.passed,
            "checks": [
                {"name": c.name, "passed": c.passed, "details": c.details} for c in self.checks
            ],
            "extras": self.extras,
        }

    def to_machine(self) -> str:
        return canonical_json(self.to_doc())

    def to_human(self) -> str:
        width = max((len(c.name) for c in self.checks), default=4)
        lines = [
            f"{self.command} on {self.source} (seed={self.seed}, samples={self.samples})"
        ]
        for c in self.checks:
            info = ", ".join(f"{k}={v}" for k, v in c.details.items())
            mark = "pass" if c.passed else "FAIL"
            lines.append(f"  {c.name.ljust(width)}  {mark}  {info}")
        lines.append(f"overall: {'pass' if self.passed else 'FAIL'}")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# shared pieces

def _fixture_dir() -> Path:
    env = os.environ.get(FIXTURE_ENV)
    if env:
        return Path(env)
    return Path(__file__).parent / "fixtures"


def load_spec(path: str | None, fixture: str | None) -> tuple[SpecDocument, str]:
    if (path is None) == (fixture is None):
        raise DocumentError("exactly one of a document path or --fixture is required")
    if fixture is not None:
        p = _fixture_dir() / f"{fixture}.json"
        if not p.exists():
            known = sorted(q.stem for q in _fixture_dir().glob("*.json"))
            raise DocumentError(f"unknown fixture {fixture!r}; bundled: {', '.join(known)}")
        return parse_spec(p.read_text()), f"fixture:{fixture}"
    p = Path(path)
    if not p.exists():
        raise DocumentError(f"no such file: {path}")
    return parse_spec(p.read_text()), path


def _prepared_cocycle(spec: SpecDocument, report: Report) -> TwoCocycle | None:
    """Identity-check the cocycle and normalize it when needed; report both."""
    w = spec.cocycle_or_trivial()
    rep = w.check_identity()
    report.add(
        "cocycle-identity",
        rep.ok,
        violations=len(rep.violations),
        exact=w.is_exact,
    )
    if not rep.ok:
        return None
    if w.normalized:
        report.add("cocycle-normalized", True, auto_normalized=False)
        return w
    w2, _ = normalize(w)
    report.add("cocycle-normalized", w2.normalized, auto_normalized=True)
    return w2


def _oracle_order(spec: SpecDocument, w: TwoCocycle, k_flag: int | None) -> int | None:
    """The cyclic order used for oracle runs: the --k flag, the document
    parameter, or the smallest k containing all exact cocycle values."""
    if k_flag:
        return k_flag
    if "k" in spec.params:
        return int(spec.params["k"])
    if not w.is_exact:
        return None
    dens = [v.angle.denominator for v in w.values.values()]
    k = lcm(*dens) if dens else 1
    return k if k <= 12 else None


def _window(spec: SpecDocument, modes_flag) -> tuple[int, int]:
    if modes_flag:
        return modes_flag
    if "modes" in spec.params:
        lo, hi = spec.params["modes"]
        return int(lo), int(hi)
    return (-2, 2)


# ---------------------------------------------------------------------------
# commands

def cmd_validate(spec: SpecDocument, source: str, seed: int, samples: int) -> Report:
    report = Report("validate", source, seed, samples)
    g = spec.groupoid
    rep = validate(g)
    report.add(
        "groupoid-axioms",
        rep.ok,
        units=g.n_units,
        arrows=g.n_arrows,
        violations=len(rep.violations),
        first="" if rep.ok else rep.violations[0].message,
    )
    if rep.ok:
        dec = orbit_decomposition(g)
        report.add(
            "structure",
            True,
            principal=is_principal(g),
            transitive=is_transitive(g),
            proper=is_proper(g),
            proper_note=PROPER_NOTE,
            orbits=len(dec.orbits),
        )
        if spec.cocycle is not None:
            w = spec.cocycle
            idrep = w.check_identity()
            report.add(
                "cocycle-identity",
                idrep.ok,
                violations=len(idrep.violations),
                exact=w.is_exact,
            )
            report.add("cocycle-normalized", True, normalized=w.normalized)
    return report


def cmd_normalize(spec: SpecDocument, source: str, seed: int, samples: int) -> Report:
    report = Report("normalize", source, seed, samples)
    w = spec.cocycle_or_trivial()
    rep = w.check_identity()
    report.add("cocycle-identity", rep.ok, violations=len(rep.violations))
    if not rep.ok:
        return report
    w2, b = normalize(w)
    report.add(
        "normalized-output",
        w2.normalized and w2.check_identity().ok,
        nontrivial_values=len(w2.values),
    )
    report.extras["normalized_cocycle"] = cocycle_to_doc(w2)
    report.extras["normalizing_cochain"] = cochain_to_doc(b)
    return report


def cmd_trivialize(spec: SpecDocument, source: str, seed: int, samples: int) -> Report:
    report = Report("trivialize", source, seed, samples)
    w = _prepared_cocycle(spec, report)
    if w is None:
        return report
    try:
        b = trivialize_principal(w)
    except IsotropyObstruction as e:
        report.add("trivialize", False, obstruction=str(e))
        return report
    report.add("trivialize", True, reproduces_cocycle=True, exact=w.is_exact)
    report.extras["trivializing_cochain"] = cochain_to_doc(b)
    if w.is_exact:
        sol = solve_coboundary(w)
        report.add("coboundary-solver-agrees", sol is not None)
    return report


def cmd_algebra(
    spec: SpecDocument, source: str, seed: int, samples: int, power: int = 1, element_doc=None
) -> Report:
    report = Report("algebra", source, seed, samples)
    w = _prepared_cocycle(spec, report)
    if w is None:
        return report
    g = spec.groupoid
    alg = TwistedAlgebra(g, w, power)
    rng = random.Random(seed)
    cert = alg.full_norm_certificate()
    report.add(
        "faithful-regular-representation",
        cert.faithful,
        rank=cert.rank,
        dimension=cert.dimension,
    )
    if g.n_arrows:
        e_norm = alg.reduced_norm(alg.identity()).reduced_norm
        report.add("identity-norm", abs(e_norm - 1.0) <= 1e-12, norm=fmt_float(e_norm))
    worst_cstar = 0.0
    worst_assoc = 0.0
    worst_star = 0.0
    for _ in range(samples):
        f = random_element(rng, alg)
        h = random_element(rng, alg)
        x = random_element(rng, alg)
        n1 = alg.reduced_norm(f.star() * f).reduced_norm
        n2 = alg.reduced_norm(f).reduced_norm
        worst_cstar = max(worst_cstar, abs(n1 - n2 * n2) / max(1.0, n2 * n2))
        worst_assoc = max(worst_assoc, ((f * h) * x - f * (h * x)).sup_difference(alg.zero()))
        worst_star = max(worst_star, (f * h).star().sup_difference(h.star() * f.star()))
    report.add("cstar-identity", worst_cstar <= 1e-9, relative_error=fmt_float(worst_cstar))
    report.add("associativity", worst_assoc <= 1e-10, residual=fmt_float(worst_assoc))
    report.add("star-antihomomorphism", worst_star <= 1e-10, residual=fmt_float(worst_star))
    if element_doc is not None:
        from .documents import norm_report_to_doc, parse_element

        f = parse_element(element_doc, alg)
        nr = alg.reduced_norm(f)
        report.add("element-norm", True, **norm_report_to_doc(nr, g))
        matrices = {}
        for u in g.units():
            rep_u = alg.regular_rep(f, u)
            matrices[g.unit_labels[u]] = [
                [[fmt_float(z.real), fmt_float(z.imag)] for z in row]
                for row in rep_u.matrix
            ]
        report.extras["element_regular_rep"] = matrices
    report.extras["power"] = power
    return report


def cmd_decompose(
    spec: SpecDocument, source: str, seed: int, samples: int, modes=None
) -> Report:
    report = Report("decompose", source, seed, samples)
    w = _prepared_cocycle(spec, report)
    if w is None:
        return report
    g = spec.groupoid
    ea = ExtensionAlgebra(g, w)
    window = _window(spec, modes)
    rng = random.Random(seed)

    if g.n_arrows:
        _, idrep = decompose(ea.identity(), with_centers=False)
        report.add(
            "identity-decomposition",
            abs(idrep.extension_norm - 1.0) <= 1e-12,
            norm=fmt_float(idrep.extension_norm),
        )
    proj_ok = True
    homo = 0.0
    star = 0.0
    elements = []
    for _ in range(samples):
        F = random_laurent(rng, ea, window)
        G = random_laurent(rng, ea, window)
        elements.append(F)
        # projection laws
        for n in range(window[0] - 1, window[1] + 2):
            P = mode_projection(F, n)
            if not mode_projection(P, n).equals(P):
                proj_ok = False
            if n < window[0] or n > window[1]:
                continue
        total = ea.zero()
        for n in range(window[0], window[1] + 1):
            total = total + mode_projection(F, n)
        if not total.equals(F):
            proj_ok = False
        for n in range(window[0], window[1] + 1):
            homo = max(
                homo,
                (mode_component(F * G, n) - mode_component(F, n) * mode_component(G, n))
                .sup_difference(ea.twisted(n).zero()),
            )
            star = max(
                star,
                (mode_component(F.star(), n) - mode_component(F, n).star())
                .sup_difference(ea.twisted(n).zero()),
            )
    report.add("mode-projection-laws", proj_ok)
    report.add("mode-homomorphism", homo <= 1e-10, residual=fmt_float(homo))
    report.add("mode-star", star <= 1e-12, residual=fmt_float(star))

    worst_res = 0.0
    for F in elements[: max(1, samples // 2)]:
        for u in g.units():
            worst_res = max(worst_res, intertwine_check(F, u, window).residual)
    report.add("intertwining", worst_res <= 1e-12, residual=fmt_float(worst_res))

    cert = check_reduced_decomposition(elements[: max(1, samples // 2)])
    report.add(
        "reduced-decomposition",
        cert.ok,
        max_norm_deviation=fmt_float(cert.max_norm_deviation),
        max_unit_deviation=fmt_float(cert.max_unit_deviation),
    )

    per_mode = {}
    for n in range(window[0], window[1] + 1):
        alg = ea.twisted(n)
        per_mode[str(n)] = {
            "dimension": alg.dimension,
            "center_dimension": alg.center_dimension(),
            "faithful": alg.full_norm_certificate().faithful,
        }
    report.extras["modes"] = per_mode
    report.extras["window"] = list(window)
    if elements and not elements[0].is_zero:
        from .documents import decomposition_report_to_doc, laurent_to_doc

        _, sample_rep = decompose(elements[0], with_centers=True)
        report.extras["sample_element"] = laurent_to_doc(elements[0])
        report.extras["sample_decomposition"] = decomposition_report_to_doc(sample_rep)
    return report


def cmd_cyclic_oracle(
    spec: SpecDocument, source: str, seed: int, samples: int, k: int | None = None
) -> Report:
    report = Report("cyclic-oracle", source, seed, samples)
    w = _prepared_cocycle(spec, report)
    if w is None:
        return report
    g = spec.groupoid
    kk = _oracle_order(spec, w, k)
    if kk is None:
        report.add(
            "oracle-order",
            True,
            applicable=False,
            reason="no small mu_k contains the cocycle values; oracle comparison skipped",
        )
        return report
    try:
        ext = cyclic_extension(g, w, kk)
    except oracle.OracleError as e:
        report.add("extension-groupoid", False, error=str(e))
        return report
    report.add(
        "extension-groupoid",
        ext.validation.ok,
        k=kk,
        arrows=ext.groupoid.n_arrows,
    )
    cd = cyclic_decompose(ext)
    report.add(
        "mode-decomposition",
        cd.ok,
        exact=cd.exact,
        max_residual=fmt_float(cd.max_residual),
        products=cd.products_checked,
        stars=cd.stars_checked,
        projections=cd.projections_checked,
        summand_dimensions=[s.dimension for s in cd.summands],
        center_dimensions=[s.center_dimension for s in cd.summands],
    )
    rank, dim = oracle.faithfulness_rank(ext)
    report.add("oracle-faithfulness", rank == dim, rank=rank, dimension=dim)

    ea = ExtensionAlgebra(g, w)
    rng = random.Random(seed)
    worst = 0.0
    for _ in range(samples):
        F = random_laurent(rng, ea, (0, kk - 1))
        worst = max(worst, oracle_norm_deviation(F, ext))
    report.add("norm-agreement", worst <= 1e-9, deviation=fmt_float(worst))
    report.extras["oracle_agreement"] = worst <= 1e-9

    if is_principal(g):
        bad = oracle.quotient_matches_base(ext)
        report.add("isotropy-quotient", not bad, defects=bad)
    return report


def cmd_morita(spec: SpecDocument, source: str, seed: int, samples: int) -> Report:
    report = Report("morita", source, seed, samples)
    w = _prepared_cocycle(spec, report)
    if w is None:
        return report
    g = spec.groupoid
    if not is_principal(g):
        report.add("principal", False, reason="proposition hypotheses not met")
        return report
    cert = fullness_check(g)
    report.add(
        "fullness",
        cert.full,
        ideal_dimension=cert.ideal_dimension,
        algebra_dimension=cert.algebra_dimension,
        orbit_count=cert.orbit_count,
    )
    rng = random.Random(seed)
    pos_ok = True
    for _ in range(samples):
        if not positivity_check(random_bimodule(rng, g)):
            pos_ok = False
    report.add("positivity", pos_ok)
    kk = _oracle_order(spec, w, None)
    if kk is not None and kk >= 1:
        pairs = [(random_bimodule(rng, g), random_bimodule(rng, g)) for _ in range(samples)]
        sat = saturation_report(g, w, max(kk, 2), pairs)
        report.add(
            "mode-zero-inner-products",
            sat.mode_zero_ok,
            leakage=fmt_float(sat.nonzero_mode_leakage),
        )
        report.add(
            "not-saturated",
            sat.not_saturated,
            ideal_dimension=sat.ideal_dimension,
            mode_zero_summand=sat.mode_zero_summand_dimension,
            extension_dimension=sat.k * g.n_arrows,
        )
    return report


def cmd_verify_all(
    spec: SpecDocument, source: str, seed: int, samples: int, modes=None, k: int | None = None
) -> Report:
    report = Report("verify-all", source, seed, samples)
    g = spec.groupoid
    rep = validate(g)
    report.add(
        "groupoid-axioms", rep.ok, units=g.n_units, arrows=g.n_arrows, violations=len(rep.violations)
    )
    if not rep.ok:
        return report
    for prefix, sub in (
        ("validate", cmd_validate(spec, source, seed, samples)),
        ("algebra[n=0]", cmd_algebra(spec, source, seed, samples, power=0)),
        ("algebra[n=1]", cmd_algebra(spec, source, seed, samples, power=1)),
        ("decompose", cmd_decompose(spec, source, seed, samples, modes=modes)),
        ("cyclic-oracle", cmd_cyclic_oracle(spec, source, seed, samples, k=k)),
    ):
        for c in sub.checks:
            report.checks.append(CheckResult(f"{prefix}/{c.name}", c.passed, c.details))
        for key, val in sub.extras.items():
            report.extras[f"{prefix}.{key}"] = val
    w = spec.cocycle_or_trivial()
    if w.check_identity().ok:
        if is_principal(g):
            for sub in (
                cmd_trivialize(spec, source, seed, samples),
                cmd_morita(spec, source, seed, samples),
            ):
                for c in sub.checks:
                    if c.name in ("cocycle-identity", "cocycle-normalized"):
                        continue
                    report.checks.append(CheckResult(f"{sub.command}/{c.name}", c.passed, c.details))
        elif w.is_exact:
            ww = w if w.normalized else normalize(w)[0]
            sol = solve_coboundary(ww)
            report.add(
                "coboundary-class",
                True,
                trivial=sol is not None,
            )
    return report


# ---------------------------------------------------------------------------
# argparse plumbing

def _parse_modes(text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split("..")
        lo, hi = int(lo), int(hi)
    except ValueError:
        raise DocumentError(f"--modes wants the form a..b, got {text!r}") from None
    if lo > hi:
        raise DocumentError("--modes window is empty")
    return lo, hi


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="gpdext",
        description="verification suites for finite groupoids, cocycles, and their twisted algebras",
    )
    sub = ap.add_subparsers(dest="command", required=True)
    for name in (
        "validate",
        "normalize",
        "trivialize",
        "algebra",
        "decompose",
        "cyclic-oracle",
        "morita",
        "verify-all",
    ):
        p = sub.add_parser(name)
        p.add_argument("path", nargs="?", help="spec document (JSON)")
        p.add_argument("--fixture", help="name of a bundled fixture")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--samples", type=int, default=None)
        p.add_argument("--format", choices=("human", "machine"), default="human")
        if name in ("decompose", "verify-all"):
            p.add_argument(
                "--modes",
                type=_parse_modes,
                default=None,
                help="window a..b (write --modes=-2..2 for negative bounds)",
            )
        if name in ("cyclic-oracle", "verify-all"):
            p.add_argument("--k", type=int, default=None)
        if name == "algebra":
            p.add_argument("--power", type=int, default=1)
            p.add_argument("--element", help="path to an element document")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        spec, source = load_spec(args.path, args.fixture)
        seed = args.seed if args.seed is not None else int(spec.params.get("seed", 0))
        samples = (
            args.samples if args.samples is not None else int(spec.params.get("samples", 25))
        )
        if args.command == "validate":
            report = cmd_validate(spec, source, seed, samples)
        elif args.command == "normalize":
            report = cmd_normalize(spec, source, seed, samples)
        elif args.command == "trivialize":
            report = cmd_trivialize(spec, source, seed, samples)
        elif args.command == "algebra":
            element_doc = Path(args.element).read_text() if args.element else None
            report = cmd_algebra(
                spec, source, seed, samples, power=args.power, element_doc=element_doc
            )
        elif args.command == "decompose":
            report = cmd_decompose(spec, source, seed, samples, modes=args.modes)
        elif args.command == "cyclic-oracle":
            report = cmd_cyclic_oracle(spec, source, seed, samples, k=args.k)
        elif args.command == "morita":
            report = cmd_morita(spec, source, seed, samples)
        else:
            report = cmd_verify_all(
                spec, source, seed, samples, modes=args.modes, k=args.k
            )
    except (DocumentError, OSError) as e:
        print(f"input error: {e}", file=sys.stderr)
        return 2
    except (CocycleError, MoritaError, oracle.OracleError) as e:
        print(f"input error: {e}", file=sys.stderr)
        return 2
    print(report.to_machine() if args.format == "machine" else report.to_human(), end="")
    if args.format == "human":
        print()
    return 0 if report.passed else 1


if __name__ == "__main__":
    raise SystemExit(main())
