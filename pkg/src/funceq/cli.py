"""Command-line front end. stdout carries one JSON document; logs go to stderr.

Exit codes: 0 pass (or informational), 1 a check failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from funceq.alienation import alien_summary, d1_solutions, lemma_L_check, verify_equivalence_over_kernel, z2_remark_check
from funceq.fn_table import FnTable, cauchy_difference, check_cocycle_and_symmetry, check_proof_identities
from funceq.inequality_lab import evaluate_spec
from funceq.linear_solver import BRUTE_FORCE_MAX_P, SolutionSpace, brute_force_solutions, star_kernel
from funceq.prime_field import PrimeField
from funceq.solution_family import same_function_kernel, family_exhaustion_report

log = logging.getLogger("funceq")


class UsageError(Exception):
    pass


@dataclass
class Verdict:
    command: str
    subject: dict
    passed: bool
    details: dict
    elapsed_ms: int = 0
    checks: dict[str, bool] = field(default_factory=dict)

    def to_dict(self, timing: bool = False) -> dict:
        out = {"command": self.command, **self.subject, "pass": self.passed,
               "details": {**self.details, "checks": self.checks}}
        if timing:
            out["elapsed_ms"] = self.elapsed_ms
        return out


def _field(p: int) -> PrimeField:
    try:
        return PrimeField(p)
    except ValueError as exc:
        msg = str(exc)
        raise UsageError(f"--prime {p}: not prime" if "not prime" in msg else msg) from None


def _fan_out(tasks: Sequence[tuple[str, Callable[[], object]]], threads: int) -> dict[str, object]:
    """Run independent tasks; results keyed and ordered as given."""
    if threads <= 1:
        return {name: fn() for name, fn in tasks}
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [(name, pool.submit(fn)) for name, fn in tasks]
        return {name: fut.result() for name, fut in futures}


def _span_set(space: SolutionSpace) -> set[tuple[int, ...]]:
    return set(space.vectors())


def _brute_matches(fld: PrimeField, space: SolutionSpace, threads: int) -> dict:
    sols = brute_force_solutions(fld, threads=threads)
    found = {f.values + g.values for f, g in sols}
    return {"count": len(sols), "kernel_size": space.size, "equal": found == _span_set(space)}


def cmd_solve(args) -> Verdict:
    fld = _field(args.prime)
    space = star_kernel(fld)
    return Verdict("solve", {"p": fld.p}, True, space.to_dict())


def _proof_identities_all(space: SolutionSpace) -> bool:
    return all(check_proof_identities(f, g).all_hold for f, g in space.solutions())


def cmd_verify(args) -> Verdict:
    fld = _field(args.prime)
    p = fld.p
    space = star_kernel(fld)
    in_scope = p >= 5
    d1 = d1_solutions(fld)
    tasks: list[tuple[str, Callable[[], object]]] = [
        ("lemma_L", lambda: lemma_L_check(fld)),
        ("proof_identities", lambda: _proof_identities_all(space)),
    ]
    if in_scope:
        tasks += [
            ("family", lambda: family_exhaustion_report(fld, space)),
            ("alien_equivalence", lambda: verify_equivalence_over_kernel(fld, space)),
            ("same_function", lambda: [t.values for t in same_function_kernel(fld)]),
        ]
    else:
        tasks.append(("alien", lambda: alien_summary(fld)))
        tasks.append(("same_function", lambda: [t.values for t in same_function_kernel(fld)]))
    run_oracle = p <= 3 or (args.oracle and p <= BRUTE_FORCE_MAX_P)
    if run_oracle:
        tasks.append(("oracle", lambda: _brute_matches(fld, space, args.threads)))
    res = _fan_out(tasks, args.threads)

    checks = {"lemma_L": res["lemma_L"], "proof_identities": res["proof_identities"]}
    details: dict = {"kernel_dim": space.dimension, "solution_count": space.size}
    if p == 2:
        identity = FnTable.from_fn(fld, lambda x: x)
        checks["d1_kernel"] = {t.values for t in d1} == {(0, 0), identity.values}
        checks["z2_remark"] = z2_remark_check()
    else:
        checks["d1_kernel"] = all(t.is_zero() for t in d1)
    if in_scope:
        fam = res["family"]
        details["scope"] = "theorem"
        details["family"] = fam.to_dict()
        checks["kernel_dim_3"] = space.dimension == 3
        checks["family_exhaustive"] = fam.exhaustive
        checks["alien_equivalence"] = res["alien_equivalence"]
        checks["same_function_zero"] = res["same_function"] == [(0,) * p]
    else:
        details["scope"] = "theorem scope: brute force only"
        details["alien"] = res["alien"]
        details["same_function_solutions"] = [list(v) for v in res["same_function"]]
    if run_oracle:
        details["oracle"] = res["oracle"]
        checks["oracle_equivalence"] = res["oracle"]["equal"]
    elif args.oracle:
        details["oracle"] = f"skipped: brute force is limited to p <= {BRUTE_FORCE_MAX_P}"
    return Verdict("verify", {"p": p}, all(checks.values()), details, checks=checks)


def cmd_alien(args) -> Verdict:
    fld = _field(args.prime)
    summary = alien_summary(fld)
    checks = {"lemma_L": summary["lemma_L"]}
    if summary["equivalence"] is not None:
        checks["equivalence"] = summary["equivalence"]
    return Verdict("alien", {"p": fld.p}, all(checks.values()), summary, checks=checks)


def cmd_brute(args) -> Verdict:
    fld = _field(args.prime)
    if fld.p > BRUTE_FORCE_MAX_P:
        raise UsageError(f"brute force is limited to p <= {BRUTE_FORCE_MAX_P}")
    space = star_kernel(fld)
    sols = brute_force_solutions(fld, threads=args.threads)
    found = {f.values + g.values for f, g in sols}
    equal = found == _span_set(space)
    details = {
        "count": len(sols),
        "kernel_dim": space.dimension,
        "solutions": [[list(f.values), list(g.values)] for f, g in sols],
    }
    return Verdict("brute", {"p": fld.p}, equal, details, checks={"matches_kernel": equal})


def cmd_cocycle(args) -> Verdict:
    fld = _field(args.prime)
    p = fld.p
    if args.exhaustive:
        if p ** p > 10 ** 6:
            raise UsageError("exhaustive scan needs p^p <= 10^6")
        tables = (FnTable(fld, np.unravel_index(i, (p,) * p)) for i in range(p ** p))
        count, mode = p ** p, "exhaustive"
    else:
        rng = np.random.default_rng(args.seed)
        vals = rng.integers(0, p, size=(args.samples, p))
        tables = (FnTable(fld, tuple(int(v) for v in row)) for row in vals)
        count, mode = args.samples, "random"
    failures = sum(not check_cocycle_and_symmetry(cauchy_difference(g)) for g in tables)
    details = {"mode": mode, "count": count, "failures": failures}
    if mode == "random":
        details["seed"] = args.seed
    return Verdict("cocycle", {"p": p}, failures == 0, details, checks={"cocycle_and_symmetry": failures == 0})


def cmd_ineq(args) -> Verdict:
    try:
        with open(args.spec_file) as fh:
            spec = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {args.spec_file}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {args.spec_file}: {exc}") from None
    try:
        checks, info = evaluate_spec(spec)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise UsageError(f"invalid input spec: {exc}") from None
    return Verdict("ineq", {"grid": info["grid"]}, all(checks.values()), info, checks=checks)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json-out", metavar="PATH", help="also write the verdict, with timing, here")
    common.add_argument("--threads", type=int, default=1, help="worker threads for independent checks")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized cocycle fuzzing")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="funceq", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def with_prime(name: str, help_: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.add_argument("--prime", type=int, required=True)
        return sp

    with_prime("solve", "print the solution space as JSON").set_defaults(run=cmd_solve)
    sp = with_prime("verify", "run every finite-field check for one prime")
    sp.add_argument("--oracle", action="store_true", help="include the p = 5 brute-force cross-check")
    sp.set_defaults(run=cmd_verify)
    with_prime("alien", "alien-solution report").set_defaults(run=cmd_alien)
    with_prime("brute", "exhaustive search (p <= 5)").set_defaults(run=cmd_brute)
    sp = with_prime("cocycle", "check symmetry and cocycle identity of Cauchy differences")
    sp.add_argument("--samples", type=int, default=1000)
    sp.add_argument("--exhaustive", action="store_true", help="scan all p^p functions")
    sp.set_defaults(run=cmd_cocycle)
    sp = sub.add_parser("ineq", parents=[common], help="check the inequality for an input file")
    sp.add_argument("spec_file")
    sp.set_defaults(run=cmd_ineq)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(stream=sys.stderr, level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.threads < 1:
        print("funceq: --threads must be >= 1", file=sys.stderr)
        return 2
    start = time.perf_counter()
    try:
        verdict = args.run(args)
    except UsageError as exc:
        print(f"funceq: {exc}", file=sys.stderr)
        return 2
    verdict.elapsed_ms = round((time.perf_counter() - start) * 1000)
    log.info("%s finished in %d ms", verdict.command, verdict.elapsed_ms)
    print(json.dumps(verdict.to_dict(), sort_keys=True))
    if args.json_out:
        with open(args.json_out, "w") as fh:
            json.dump(verdict.to_dict(timing=True), fh, sort_keys=True, indent=2)
    return 0 if verdict.passed else 1
