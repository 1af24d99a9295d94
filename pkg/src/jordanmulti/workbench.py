"""Command line front end: build catalog algebras, analyze files, run scenarios."""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from . import classify, completion, grouprep, repforge, twodim
from .errors import JordanError
from .exactla import Mat, Subspace
from .jordancore import MultialgebraInstance, is_closed

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class ScenarioResult:
    name: str
    verdicts: list[tuple[str, bool, dict]] = field(default_factory=list)

    @property
    def exitCode(self) -> int:
        return EXIT_OK if all(ok for _, ok, _ in self.verdicts) else EXIT_FAIL

    def to_json(self) -> dict:
        return {"name": self.name,
                "verdicts": [{"check": c, "pass": ok, "detail": d} for c, ok, d in self.verdicts],
                "exitCode": self.exitCode}

    def text(self) -> str:
        lines = [f"{'PASS' if ok else 'FAIL'} {c}" + (f"  {json.dumps(d)}" if d else "")
                 for c, ok, d in self.verdicts]
        lines.append(f"{self.name}: {'all checks pass' if self.exitCode == 0 else 'FAILED'}")
        return "\n".join(lines)


# ---------------------------------------------------------------- file i/o

def _read_json(path: str):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as e:
        raise UsageError(f"{path}: {e.strerror}")
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise UsageError(f"{path}:{e.lineno}:{e.colno}: {e.msg}")


def load_subspace(path: str) -> Subspace:
    obj = _read_json(path)
    if not isinstance(obj, dict) or "ambient" not in obj:
        raise UsageError(f"{path}: expected a subspace object with an 'ambient' field")
    shape = obj["ambient"]
    if not (isinstance(shape, list) and len(shape) == 2 and all(isinstance(x, int) and x >= 0 for x in shape)):
        raise UsageError(f"{path}: ambient must be [rows, cols]")
    mats = []
    for i, b in enumerate(obj.get("basis", [])):
        try:
            m = Mat.from_json(b)
        except (KeyError, TypeError, ValueError, JordanError) as e:
            raise UsageError(f"{path}: basis[{i}]: {e}")
        if list(m.shape) != shape:
            raise UsageError(f"{path}: basis[{i}]: shape {list(m.shape)} differs from ambient {shape}")
        mats.append(m)
    try:
        return Subspace.span(mats, shape=tuple(shape), ring=obj.get("ring", "real"))
    except (ValueError, JordanError) as e:
        raise UsageError(f"{path}: {e}")


def load_instance(algebra: str, mults: str | None) -> MultialgebraInstance:
    pi = load_subspace(algebra)
    try:
        if mults is None or mults == "classical":
            return MultialgebraInstance.classical(pi)
        return MultialgebraInstance(pi, load_subspace(mults))
    except (ValueError, JordanError) as e:
        raise UsageError(str(e))


def _emit(obj, out: str | None):
    text = json.dumps(obj, indent=2) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_text(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


# ---------------------------------------------------------------- commands

def _label(args) -> repforge.CatalogLabel:
    if args.form is None:
        raise UsageError("construct needs --form")
    kw = {k: getattr(args, k) for k in ("r", "N", "s1", "s2") if getattr(args, k) is not None}
    if args.multiplicity is not None:
        kw["multiplicity"] = args.multiplicity
    try:
        return repforge.CatalogLabel(args.form, **kw)
    except (TypeError, JordanError) as e:
        raise UsageError(f"invalid label: {e}")


def cmd_construct(args) -> int:
    label = _label(args)
    pi, _ = repforge.scramble(repforge.catalogBuild(label), args.seed) if args.scramble \
        else (repforge.catalogBuild(label), None)
    _emit(pi.to_json(), args.out)
    return EXIT_OK


def analyze_report(inst: MultialgebraInstance, seed: int = 0) -> dict:
    closure = is_closed(inst)
    report = {"ambient": inst.n, "dim": inst.pi.dim, "classical": inst.is_classical,
              "closed": closure.closed}
    if not closure:
        report["witness"] = closure.to_json()["witness"]
        return report
    E = completion.assoc_closure(inst, seed)
    comp = completion.completion_of(inst, seed)
    report["envelopeDim"] = E.dim
    report["completionDim"] = comp.dim
    report["complete"] = comp.dim == inst.pi.dim
    report["chains"] = [completion.chain_check(inst, k).to_json() for k in (3, 4)]
    if inst.is_classical:
        report["classification"] = classify.classifyAlgebra(inst.pi, seed).to_json()
    return report


def cmd_analyze(args) -> int:
    if not args.algebra:
        raise UsageError("analyze needs --algebra")
    _emit(analyze_report(load_instance(args.algebra, args.mults), args.seed), args.out)
    return EXIT_OK


def cmd_classify(args) -> int:
    if not args.algebra:
        raise UsageError("classify needs --algebra")
    pi = load_subspace(args.algebra)
    try:
        report = classify.classifyAlgebra(pi, args.seed)
    except JordanError as e:
        _emit({"error": str(e)}, args.out)
        return EXIT_FAIL
    _emit(report.to_json(), args.out)
    return EXIT_OK if report.verdicts_agree else EXIT_FAIL


def cmd_chains(args) -> int:
    if not args.algebra:
        raise UsageError("chains needs --algebra")
    inst = load_instance(args.algebra, args.mults)
    if not is_closed(inst):
        _emit({"closed": False}, args.out)
        return EXIT_FAIL
    reports = [completion.chain_check(inst, k) for k in (3, 4)]
    _emit({"closed": True, "chains": [r.to_json() for r in reports]}, args.out)
    return EXIT_OK


def counterexample_scenario(seed: int | None = None) -> ScenarioResult:
    report = twodim.run_counterexample(seed)
    return ScenarioResult("counterexample", report.checks())


def so3_scenario(algebras=None) -> ScenarioResult:
    if algebras is None:
        algebras = [("span{I1}", Subspace.span([Mat.identity(1)]), 6),
                    ("M2", Subspace.full((2, 2)), 21),
                    ("span{I2, J}", twodim.rotation_algebra(), 9)]
    res = ScenarioResult("so3")
    for name, B, expected in algebras:
        inst = twodim.buildSO3Multifield(B)
        closed = bool(is_closed(inst))
        complete = closed and completion.is_complete(inst)
        detail = {"B": name, "dim": inst.pi.dim}
        if expected is not None:
            res.verdicts.append((f"{name} dim", inst.pi.dim == expected, {"expected": expected, "dim": inst.pi.dim}))
        res.verdicts.append((f"{name} closed", closed, detail))
        res.verdicts.append((f"{name} complete", complete, detail))
    return res


def _scenario_out(res: ScenarioResult, args) -> int:
    if args.json:
        _emit(res.to_json(), args.out)
    else:
        _emit_text(res.text(), args.out)
    return res.exitCode


def cmd_counterexample(args) -> int:
    return _scenario_out(counterexample_scenario(args.seed), args)


def cmd_so3(args) -> int:
    algebras = None
    if args.algebra:
        algebras = [(args.algebra, load_subspace(args.algebra), None)]
    try:
        res = so3_scenario(algebras)
    except JordanError as e:
        raise UsageError(str(e))
    return _scenario_out(res, args)


def eckmann_report(p: int, variant=None) -> dict:
    if not 2 <= p <= 12:
        raise UsageError("p must lie in 2..12")
    if p % 4 == 0 and variant is None:
        variant = "plus"
    if p % 4 and variant is not None:
        raise UsageError(f"p = {p} has no variants")
    gens = repforge.rho(p, variant)
    violations = repforge.rh_violations(gens)
    out = {"p": p}
    if variant is not None:
        out["variant"] = variant
    out.update({"d": repforge.dimD(p), "relations": not violations,
                "classes": len(grouprep.conjugacyClasses(p)),
                "fs": int(grouprep.frobeniusSchur(p, variant)),
                "commutantDim": grouprep.commutantDim(p, variant),
                "type": grouprep.rep_type(p, variant)})
    if p in (4, 8):
        out["productSign"] = repforge.variant_sign(p, variant)
    if violations:
        out["violations"] = violations
    return out


def cmd_eckmann(args) -> int:
    report = eckmann_report(args.p, args.variant)
    if args.json or args.out:
        _emit(report, args.out)
    else:
        print(" ".join(f"{k}={v}" for k, v in report.items()))
    return EXIT_OK if report["relations"] else EXIT_FAIL


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="jordanmulti", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed=0):
        p.add_argument("--seed", type=int, default=seed)
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--out", help="write output to this file")

    p = sub.add_parser("construct", help="write a catalog algebra as subspace JSON")
    p.add_argument("--form", choices=list("abcde"))
    p.add_argument("--r", type=int)
    p.add_argument("--N", type=int)
    p.add_argument("--multiplicity", type=int)
    p.add_argument("--s1", type=int)
    p.add_argument("--s2", type=int)
    p.add_argument("--scramble", action="store_true", help="conjugate by the seeded orthogonal matrix")
    common(p)
    p.set_defaults(func=cmd_construct)

    for name, func, helptext in (("analyze", cmd_analyze, "closure, completion, chains and classification"),
                                 ("chains", cmd_chains, "3-chain and 4-chain checks")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--algebra", metavar="FILE")
        p.add_argument("--mults", default="classical", metavar="FILE|classical")
        common(p)
        p.set_defaults(func=func)

    p = sub.add_parser("classify", help="simple components and catalog labels")
    p.add_argument("--algebra", metavar="FILE")
    common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("counterexample", help="the quaternionic incomplete multialgebra")
    common(p, seed=None)
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("eckmann", help="representation data of G_p")
    p.add_argument("p", type=int)
    p.add_argument("--variant", choices=["plus", "minus"])
    common(p)
    p.set_defaults(func=cmd_eckmann)

    p = sub.add_parser("so3", help="SO(3)-invariant multialgebras from transpose-closed algebras")
    p.add_argument("--algebra", metavar="FILE", help="the algebra B; defaults to the built-in trio")
    common(p)
    p.set_defaults(func=cmd_so3)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
