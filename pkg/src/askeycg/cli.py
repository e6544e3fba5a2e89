"""Batch verification driver.

Subcommands:

    verify    run the check suites for one family instance, emit a JSON report
    table     print the CG blocks and orthogonality weights, text or JSON
    coassoc   compare the two Krawtchouk recoupling compositions
    version   print the tool version

Exit codes: 0 all selected checks pass, 1 a check failed, 2 invalid
parameters or unknown check names, 3 I/O or config parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from .algebras import ModuleSpec, casimir, check_relations, first_block_mismatch, scalar_operator
from .cgverify import (DegenerateKernelError, WeightSolutionError, cg_block,
                       lowest_weight_oracle, orthogonality_weights,
                       verify_lowering, verify_raising, verify_weight_grading)
from .coproduct import (build_delta, check_algebraic_form, check_homomorphism,
                        check_twist_qracah_specialization, krawtchouk_coassoc,
                        tensor_module)
from .exactmath import InvalidParameterError, format_scalar, parse_scalar
from .families import (FamilyInstance, FamilyKind, algebra_for, check_contiguity,
                       check_three_term_dual_hahn, labels, make_instance)
from .report import TOOL_VERSION, CheckResult, Report, Witness

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INVALID = 2
EXIT_IO = 3

CHECK_NAMES = [
    "contiguity", "three-term", "relations", "casimir", "homomorphism",
    "algebraic-form", "grading", "raising", "lowering", "cg-oracle",
    "orthogonality", "twist",
]

_PARAM_FLAGS = ("alpha", "beta", "p", "q", "kappa1", "kappa2",
                "lambda1", "lambda2")


def _collapse(name: str, rep: Report) -> CheckResult:
    """Fold a sub-report into a single suite entry, keeping the first witness."""
    ranges = "; ".join(c.checked_range for c in rep.checks if c.checked_range)
    bad = rep.first_failure()
    if bad is None:
        return CheckResult.ok(name, ranges)
    return CheckResult(name, False, ranges, witness=bad.witness)


def _error_result(name: str, rng: str, exc: Exception) -> CheckResult:
    return CheckResult(name, False, rng,
                       witness=Witness({"error": str(exc)}, "", ""))


def run_verify_suite(inst: FamilyInstance, checks: list[str] | None = None,
                     seed: int = 0) -> Report:
    """Run the selected named checks; every known check appears in the report,
    skipped entries carry their reason."""
    selected = list(CHECK_NAMES) if not checks else list(checks)
    unknown = [c for c in selected if c not in CHECK_NAMES]
    if unknown:
        raise InvalidParameterError(
            f"unknown check names: {', '.join(unknown)} "
            f"(known: {', '.join(CHECK_NAMES)})")
    tm = tensor_module(inst)
    delta = build_delta(inst, tm)
    blocks = {N: cg_block(inst, N) for N in range(inst.n_max + 1)}
    rep = Report(suite=f"verify:{inst.kind.value}",
                 params={**inst.to_doc(), "seed": str(seed)})

    def relations_result() -> CheckResult:
        sub = Report(suite="relations")
        for label in labels(inst):
            sub.extend(check_relations(
                ModuleSpec(algebra_for(inst), label, inst.n_max)).checks)
        return _collapse("relations", sub)

    def casimir_result() -> CheckResult:
        rng = f"levels 0..{inst.n_max - 1}"
        for label in labels(inst):
            mod = ModuleSpec(algebra_for(inst), label, inst.n_max)
            res = casimir(mod)
            if not res.ok:
                hit = first_block_mismatch(
                    res.op, scalar_operator(res.op.dims, lambda n: res.eigenvalue),
                    range(inst.n_max))
                n, i, j, a, b = hit
                return CheckResult.fail("casimir", rng,
                                        {"label": label, "level": n}, a, b)
        return CheckResult.ok("casimir", rng)

    def raising_result() -> CheckResult:
        sub = Report(suite="raising")
        for N in range(inst.n_max):
            sub.extend(verify_raising(inst, tm, N, blocks, delta).checks)
            if not sub.passed:
                break
        return _collapse("raising", sub)

    def lowering_result() -> CheckResult:
        sub = Report(suite="lowering")
        for N in range(1, inst.n_max + 1):
            sub.extend(verify_lowering(inst, tm, N, blocks, delta).checks)
            if not sub.passed:
                break
        return _collapse("lowering", sub)

    def oracle_result() -> CheckResult:
        rng = f"all blocks N<={inst.n_max}"
        try:
            oracle = lowest_weight_oracle(inst, tm)
        except DegenerateKernelError as exc:
            return _error_result("cg-oracle", rng, exc)
        for N in range(inst.n_max + 1):
            if oracle[N].P != blocks[N].P:
                for n in range(N + 1):
                    for k in range(N + 1):
                        if oracle[N].P.entry(n, k) != blocks[N].P.entry(n, k):
                            return CheckResult.fail(
                                "cg-oracle", rng, {"N": N, "n": n, "k": k},
                                oracle[N].P.entry(n, k), blocks[N].P.entry(n, k))
        return CheckResult.ok("cg-oracle", rng)

    def orthogonality_result() -> CheckResult:
        rng = f"blocks 0..{inst.n_max}"
        for N in range(inst.n_max + 1):
            try:
                orthogonality_weights(inst, N, blocks[N])
            except WeightSolutionError as exc:
                return _error_result("orthogonality", rng, exc)
        return CheckResult.ok("orthogonality", rng)

    def three_term_result() -> CheckResult:
        if inst.kind is not FamilyKind.DUAL_HAHN:
            return CheckResult.skip("three-term", "only defined for dual-hahn")
        if inst.alpha != inst.lambda1 - 1:
            return CheckResult.skip("three-term", "needs alpha = lambda1 - 1")
        return _collapse("three-term", check_three_term_dual_hahn(inst))

    def twist_result() -> CheckResult:
        if inst.kind is not FamilyKind.Q_RACAH:
            return CheckResult.skip("twist", "only defined for q-racah")
        if inst.beta != 0 or inst.alpha != inst.kappa1 ** 2 / inst.q:
            return CheckResult.skip("twist", "needs beta = 0 and alpha = kappa1^2/q")
        return _collapse("twist", check_twist_qracah_specialization(
            inst.q, inst.kappa1, inst.kappa2, inst.n_max))

    runners = {
        "contiguity": lambda: _collapse("contiguity", check_contiguity(inst)),
        "three-term": three_term_result,
        "relations": relations_result,
        "casimir": casimir_result,
        "homomorphism": lambda: _collapse("homomorphism",
                                          check_homomorphism(inst, tm)),
        "algebraic-form": lambda: _collapse("algebraic-form",
                                            check_algebraic_form(inst, tm)),
        "grading": lambda: _collapse("grading",
                                     verify_weight_grading(inst, tm, delta)),
        "raising": raising_result,
        "lowering": lowering_result,
        "cg-oracle": oracle_result,
        "orthogonality": orthogonality_result,
        "twist": twist_result,
    }
    for name in CHECK_NAMES:
        if name not in selected:
            rep.add(CheckResult.skip(name, "not selected"))
        else:
            rep.add(runners[name]())
    return rep


# ---------------------------------------------------------------------------
# configuration plumbing
# ---------------------------------------------------------------------------

@dataclass
class RunConfig:
    """Merged run settings; flags override the config file."""

    family: str | None = None
    parameters: dict = field(default_factory=dict)
    n_max: int = 8
    seed: int = 0
    checks: list | None = None
    output: str | None = None
    format: str = "text"

    def instance(self) -> FamilyInstance:
        if not self.family:
            raise InvalidParameterError("a family must be given (--family or config)")
        try:
            kind = FamilyKind(self.family)
        except ValueError:
            options = ", ".join(k.value for k in FamilyKind)
            raise InvalidParameterError(
                f"unknown family {self.family!r} (options: {options})") from None
        return make_instance(kind, n_max=self.n_max, **self.parameters)


def _read_config(path: str) -> dict:
    values = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key = value")
            key, _, val = line.partition("=")
            values[key.strip()] = val.strip()
    return values


def _merge_settings(args) -> RunConfig:
    settings = {}
    if getattr(args, "config", None):
        settings.update(_read_config(args.config))
    for key in ("family", "nmax", "seed", "checks", "output", "format"):
        val = getattr(args, key, None)
        if val is not None:
            settings[key] = val
    for key in _PARAM_FLAGS:
        val = getattr(args, key, None)
        if val is not None:
            settings[key] = val
    checks = None
    if settings.get("checks"):
        checks = [c.strip() for c in str(settings["checks"]).split(",") if c.strip()]
    return RunConfig(
        family=settings.get("family"),
        parameters={k: v for k, v in settings.items() if k in _PARAM_FLAGS},
        n_max=int(settings.get("nmax", 8)),
        seed=int(settings.get("seed", 0)),
        checks=checks,
        output=settings.get("output"),
        format=settings.get("format", "text"),
    )


def _emit(doc: dict, output: str | None) -> None:
    text = json.dumps(doc, indent=2)
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_verify(args) -> int:
    try:
        config = _merge_settings(args)
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        rep = run_verify_suite(config.instance(), config.checks, config.seed)
    except InvalidParameterError as exc:
        print(f"error: invalid parameters: {exc}", file=sys.stderr)
        return EXIT_INVALID
    try:
        _emit(rep.to_dict(), config.output)
    except OSError as exc:
        print(f"error: cannot write report: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK if rep.passed else EXIT_CHECK_FAILED


def table_doc(inst: FamilyInstance) -> dict:
    blocks = []
    for N in range(inst.n_max + 1):
        blk = cg_block(inst, N)
        weights = orthogonality_weights(inst, N, blk)
        blocks.append({**blk.to_doc(), **{k: v for k, v in weights.to_doc().items()
                                          if k != "N"}})
    return {"suite": f"table:{inst.kind.value}", "version": TOOL_VERSION,
            "params": inst.to_doc(), "blocks": blocks}


def _format_table_text(doc: dict) -> str:
    lines = [f"family {doc['params']['kind']}  " +
             " ".join(f"{k}={v}" for k, v in sorted(doc["params"].items())
                      if k not in ("kind",))]
    for blk in doc["blocks"]:
        lines.append(f"N = {blk['N']}")
        width = max((len(x) for row in blk["P"] for x in row), default=1)
        for n, row in enumerate(blk["P"]):
            lines.append("  n=%d  [%s]" % (n, "  ".join(x.rjust(width) for x in row)))
        lines.append("  omega       = (" + ", ".join(blk["omega"]) + ")")
        lines.append("  omega_prime = (" + ", ".join(blk["omega_prime"]) + ")")
    return "\n".join(lines)


def cmd_table(args) -> int:
    try:
        config = _merge_settings(args)
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        doc = table_doc(config.instance())
    except InvalidParameterError as exc:
        print(f"error: invalid parameters: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (WeightSolutionError, DegenerateKernelError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    try:
        if config.format == "json":
            _emit(doc, config.output)
        else:
            text = _format_table_text(doc)
            if config.output:
                with open(config.output, "w", encoding="utf-8") as fh:
                    fh.write(text + "\n")
            else:
                print(text)
    except OSError as exc:
        print(f"error: cannot write table: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def cmd_coassoc(args) -> int:
    try:
        p, q, p2, q2 = (parse_scalar(v) for v in (args.p, args.q, args.p2, args.q2))
        result = krawtchouk_coassoc(p, q, p2, q2, n_max=args.nmax)
    except InvalidParameterError as exc:
        print(f"error: invalid parameters: {exc}", file=sys.stderr)
        return EXIT_INVALID
    doc = {
        "suite": "coassoc:krawtchouk", "version": TOOL_VERSION,
        "params": {"p": format_scalar(p), "q": format_scalar(q),
                   "p2": format_scalar(p2), "q2": format_scalar(q2),
                   "n_max": str(args.nmax)},
        "constraint_holds": result.constraint_holds,
        "operators_equal": result.lhs_equals_rhs,
        "witness": result.witness,
    }
    try:
        _emit(doc, args.output)
    except OSError as exc:
        print(f"error: cannot write report: {exc}", file=sys.stderr)
        return EXIT_IO
    confirmed = result.constraint_holds == result.lhs_equals_rhs
    return EXIT_OK if confirmed else EXIT_CHECK_FAILED


def _add_instance_flags(sp) -> None:
    sp.add_argument("--family", help="one of " + ", ".join(k.value for k in FamilyKind))
    for name in _PARAM_FLAGS:
        sp.add_argument(f"--{name}", help="rational, as a/b or an integer")
    sp.add_argument("--nmax", help="largest total level (default 8)")
    sp.add_argument("--config", help="flat key = value file; flags win")
    sp.add_argument("--output", help="write the JSON document here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="askeycg",
        description="Exact verification of generalized Clebsch-Gordan "
                    "decompositions for the finite Askey-scheme families.")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("verify", help="run the verification suites")
    _add_instance_flags(sp)
    sp.add_argument("--seed", help="seed echoed into the report (default 0)")
    sp.add_argument("--checks", help="comma-separated subset of: " + ", ".join(CHECK_NAMES))
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("table", help="print CG blocks and weights")
    _add_instance_flags(sp)
    sp.add_argument("--format", choices=("text", "json"), default=None)
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("coassoc", help="Krawtchouk recoupling comparison")
    sp.add_argument("p")
    sp.add_argument("q")
    sp.add_argument("p2")
    sp.add_argument("q2")
    sp.add_argument("--nmax", type=int, default=4)
    sp.add_argument("--output")
    sp.set_defaults(func=cmd_coassoc)

    sp = sub.add_parser("version", help="print version")
    sp.set_defaults(func=lambda args: (print(f"askeycg {TOOL_VERSION}"), EXIT_OK)[1])
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
