"""Command-line front end.

Exit codes:
    0  success
    2  usage error (argparse)
    3  unreadable input file
    4  malformed or invalid presentation (including non-simply-connected input)
    5  resource budget exceeded while building a model
    6  infeasible LES instance
    7  model failed certification
    8  input violates the hypotheses of the requested scenario
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

from .dga import DGAError, FiniteDGA
from .dichotomy import CatBound, classify, growth_report
from .les_solver import (
    GottliebBudget,
    HypothesisError,
    InfeasibleLES,
    LESInstance,
    blowup_scenario,
    isotropy_lower_bounds,
    solve_les,
)
from .minimal_model import DEFAULT_BASIS_CAP, ModelBudgetExceeded, build_minimal_model, pi_ranks
from .spaces import BettiData, preset

EXIT_OK = 0
EXIT_UNREADABLE = 3
EXIT_INVALID = 4
EXIT_BUDGET = 5
EXIT_INFEASIBLE = 6
EXIT_UNCERTIFIED = 7
EXIT_HYPOTHESIS = 8

COMMANDS = ("model", "ranks", "classify", "les", "isotropy", "blowup")


@dataclass
class RunConfig:
    command: str
    source: str  # preset name or file path
    is_file: bool = False
    max_degree: int = 10
    cat: Optional[int] = None
    output: str = "table"
    cap: int = DEFAULT_BASIS_CAP

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.max_degree < 2:
            raise ValueError("max_degree must be at least 2")
        if self.cap < 16:
            raise ValueError("cap too small to build anything")
        if self.output not in ("table", "json"):
            raise ValueError("output must be 'table' or 'json'")


class CLIError(Exception):
    def __init__(self, code: int, message: str) -> None:
        super().__init__(message)
        self.code = code


# ------------------------------------------------------------------ reports

def _load_target(cfg: RunConfig) -> FiniteDGA:
    if not cfg.is_file:
        return preset(cfg.source)
    try:
        with open(cfg.source, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, UnicodeDecodeError) as exc:
        raise CLIError(EXIT_UNREADABLE, f"cannot read {cfg.source}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise CLIError(EXIT_INVALID, f"{cfg.source} is not valid JSON: {exc}") from None
    return FiniteDGA.from_json(doc)


def _model(cfg: RunConfig):
    target = _load_target(cfg)
    model = build_minimal_model(target, cfg.max_degree, basis_cap=cfg.cap, certify=False)
    from .minimal_model import verify_model
    model.certificate = verify_model(model, target, cfg.max_degree)
    if not model.certificate.ok:
        raise CLIError(EXIT_UNCERTIFIED, model.certificate.summary())
    return target, model


def _cat(cfg: RunConfig, fd: int) -> CatBound:
    if cfg.cat is not None:
        return CatBound(cfg.cat, "user-supplied")
    return CatBound.default_for(fd)


def report_model(cfg: RunConfig) -> dict:
    target, model = _model(cfg)
    doc = model.export()
    doc["certification"] = model.certificate.summary()
    return doc


def report_ranks(cfg: RunConfig) -> dict:
    target, model = _model(cfg)
    r = pi_ranks(model)
    return {"space": target.name, "truncation": r.truncation,
            "formal_dimension": r.formal_dimension,
            "ranks": {str(k): v for k, v in r.nonzero().items()},
            "growth": growth_report(r).as_dict(),
            "certification": model.certificate.summary()}


def report_classify(cfg: RunConfig) -> dict:
    target, model = _model(cfg)
    r = pi_ranks(model)
    v = classify(r, BettiData.of(target), _cat(cfg, r.formal_dimension))
    doc = {"space": target.name, "truncation": r.truncation,
           "ranks": {str(k): x for k, x in r.nonzero().items()}}
    doc.update(v.as_dict())
    doc["certification"] = model.certificate.summary()
    return doc


def report_isotropy(cfg: RunConfig) -> dict:
    target, model = _model(cfg)
    r = pi_ranks(model)
    rep = isotropy_lower_bounds(r, GottliebBudget(_cat(cfg, r.formal_dimension)))
    doc = {"space": target.name, "truncation": r.truncation}
    doc.update(rep.as_dict())
    doc["certification"] = model.certificate.summary()
    return doc


def report_blowup(cfg: RunConfig) -> dict:
    target, model = _model(cfg)
    r = pi_ranks(model)
    cat = CatBound(cfg.cat, "user-supplied") if cfg.cat is not None else None
    rep = blowup_scenario(r, cat)
    doc = {"space": target.name, "truncation": r.truncation}
    doc.update(rep.as_dict())
    doc["certification"] = model.certificate.summary()
    return doc


def report_les(cfg: RunConfig) -> dict:
    if not cfg.is_file:
        raise CLIError(EXIT_INVALID, "les needs --input with an instance document")
    try:
        with open(cfg.source, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise CLIError(EXIT_UNREADABLE, f"cannot read {cfg.source}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise CLIError(EXIT_INVALID, f"{cfg.source} is not valid JSON: {exc}") from None
    try:
        inst = LESInstance.from_json(doc)
    except (KeyError, TypeError, ValueError) as exc:
        raise CLIError(EXIT_INVALID, f"malformed LES instance: {exc}") from None
    sol = solve_les(inst)
    out = {"certified": sol.certified, "entries": []}
    for (s, k), iv in sol.intervals.items():
        out["entries"].append({"space": s, "degree": k, "lo": iv.lo,
                               "hi": None if iv.unbounded else iv.hi,
                               "unbounded": iv.unbounded})
    return out


REPORTS: Dict[str, Callable[[RunConfig], dict]] = {
    "model": report_model,
    "ranks": report_ranks,
    "classify": report_classify,
    "les": report_les,
    "isotropy": report_isotropy,
    "blowup": report_blowup,
}


# ---------------------------------------------------------------- rendering

def render_table(command: str, doc: dict) -> str:
    lines: List[str] = []
    if command == "model":
        lines.append(f"minimal model of {doc['target']} through degree {doc['truncation']}")
        lines.append(f"{'gen':<10} {'deg':>3}  {'kind':<8}  d / phi")
        for g in doc["generators"]:
            lines.append(f"{g['name']:<10} {g['degree']:>3}  {g['kind']:<8}  d = {g['d']}"
                         + (f";  phi = {g['phi']}" if g["phi"] != "0" else ""))
    elif command == "ranks":
        lines.append(f"dim Π^k of {doc['space']} (k <= {doc['truncation']})")
        lines.append(f"{'k':>3}  {'rank':>6}")
        for k, v in doc["ranks"].items():
            lines.append(f"{k:>3}  {v:>6}")
    elif command == "classify":
        lines.append(f"{doc['space']}: {doc['verdict']}")
        lines.append(f"witness: {doc['witness']['text']}")
        lines.append(f"cat bound: {doc['cat']['value']} ({doc['cat']['source']})")
        for note in doc["notes"]:
            lines.append(f"note: {note}")
    elif command == "isotropy":
        lines.append(f"isotropy lower bounds from {doc['space']}, cat = {doc['cat']}, "
                     f"k0 = {doc['k0']}, total shaving = {doc['total_shaving']}")
        lines.append(f"{'k':>3}  {'bound':>7}  {'pointwise':>9}  {'unshifted':>9}")
        for row in doc["rows"]:
            lines.append(f"{row['k']:>3}  {row['bound']:>7}  {row['pointwise']:>9}  "
                         f"{row['unshifted']:>9}")
        lines.append(f"solver cross-check: {'ok' if doc['certified'] else 'FAILED'}")
    elif command == "blowup":
        sg = ", ".join(str(k + 1) for k, v in enumerate(doc["structure_group"]) if v)
        lines.append(f"blow-up scenario for {doc['space']} (b2 = {doc['b2']}), k0 = {doc['k0']}")
        lines.append(f"structure group Sp(4,R): rational homotopy in degrees {sg}")
        lines.append(f"{'k':>3}  {'f_* on π_(k+1)':<44}  {'bound':>6}  {'cumulative':>10}")
        for k, b in doc["symp_bounds"].items():
            status = doc["surjectivity"].get(str(int(k) + 1), "")
            lines.append(f"{k:>3}  {status:<44}  {'-' if b is None else b:>6}  "
                         f"{doc['cumulative'][k]:>10}")
    elif command == "les":
        lines.append(f"{'entry':<10} interval")
        for e in doc["entries"]:
            hi = "∞" if e["unbounded"] else e["hi"]
            lines.append(f"Π^{e['degree']}({e['space']}){'':<3} [{e['lo']}, {hi}]")
        lines.append(f"certified: {doc['certified']}")
    if "certification" in doc:
        lines.append(doc["certification"])
    return "\n".join(lines)


def run(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    try:
        doc = REPORTS[cfg.command](cfg)
    except CLIError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except ModelBudgetExceeded as exc:
        print(f"error: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except InfeasibleLES as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except HypothesisError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except (DGAError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if cfg.output == "json":
        out.write(json.dumps(doc, ensure_ascii=False) + "\n")
    else:
        out.write(render_table(cfg.command, doc) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sullivan", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("command", choices=COMMANDS)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", action="append",
                     help="S<n>, CP<n>, S2xS2, 3CP2, <k>CP2, diag(...), [[..],[..]] (repeatable)")
    src.add_argument("--input", action="append",
                     help="cohomology ring (or LES instance for `les`) as JSON (repeatable)")
    p.add_argument("--max-degree", type=int, default=10)
    p.add_argument("--cat", type=int, default=None)
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.add_argument("--cap", type=int, default=DEFAULT_BASIS_CAP,
                   help="max monomials per degree before aborting")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(message)s")
    sources = [(s, False) for s in args.preset or []] + [(s, True) for s in args.input or []]
    status = EXIT_OK
    for source, is_file in sources:
        try:
            cfg = RunConfig(args.command, source, is_file, args.max_degree, args.cat,
                            args.format, args.cap)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        code = run(cfg)
        status = status or code
    return status


if __name__ == "__main__":
    sys.exit(main())
