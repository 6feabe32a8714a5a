"""Alien solutions: f = 0 with g additive, and the criteria that detect them."""

from __future__ import annotations

from dataclasses import dataclass

from funceq.fn_table import FnTable, check_star, is_additive, is_even, is_odd
from funceq.linear_solver import SolutionSpace, d1_kernel, star_kernel
from funceq.prime_field import PrimeField
from funceq.solution_family import OutOfScope


def _in_scope(field: PrimeField) -> bool:
    return field.uniquely_divisible_by(2) and field.uniquely_divisible_by(3)


@dataclass(frozen=True)
class AlienReport:
    is_alien: bool
    crit_ii: bool
    crit_iii: bool
    in_scope: bool = True

    @property
    def equivalent(self) -> bool:
        return self.is_alien == self.crit_ii == self.crit_iii

    def to_dict(self) -> dict:
        return {
            "is_alien": self.is_alien,
            "crit_ii": self.crit_ii,
            "crit_iii": self.crit_iii,
            "equivalent": self.equivalent,
            "scope": "theorem" if self.in_scope else "out of theorem scope",
        }


def alien_report(f: FnTable, g: FnTable) -> AlienReport:
    """Evaluate (i) f = 0 and g additive, (ii) f even with f(1) = 0,
    (iii) g odd with g(2) = 2 g(1).

    At p = 2, 3 the report is still computed but ``in_scope`` is False.
    """
    if check_star(f, g):
        raise ValueError("(f, g) is not a solution")
    p = f.field.p
    return AlienReport(
        is_alien=f.is_zero() and is_additive(g),
        crit_ii=is_even(f) and f(1) == 0,
        crit_iii=is_odd(g) and g(2) == (2 * g(1)) % p,
        in_scope=_in_scope(f.field),
    )


def alien_reports(space: SolutionSpace) -> list[AlienReport]:
    return [alien_report(f, g) for f, g in space.solutions()]


def verify_equivalence_over_kernel(field: PrimeField, space: SolutionSpace | None = None) -> bool:
    """All three criteria agree on every one of the p^3 solutions."""
    if not _in_scope(field):
        raise OutOfScope(f"p={field.p}: criteria are only claimed when 2 and 3 are invertible")
    space = space or star_kernel(field)
    return all(r.equivalent for r in alien_reports(space))


def lemma_L_check(field: PrimeField) -> bool:
    """Every f with x f(y) + y f(x) = 0 everywhere has 2f = 0."""
    p = field.p
    return all(all((2 * v) % p == 0 for v in f.values) for f in d1_kernel(field).functions())


def d1_solutions(field: PrimeField) -> list[FnTable]:
    return list(d1_kernel(field).functions())


def solves_d1(f: FnTable) -> bool:
    p = f.field.p
    return all((x * f(y) + y * f(x)) % p == 0 for x in range(p) for y in range(p))


def z2_remark_check() -> bool:
    """Over Z_2 the identity solves x f(y) + y f(x) = 0; 1 and x + 1 do not."""
    z2 = PrimeField(2)
    identity = FnTable.from_fn(z2, lambda x: x)
    const = FnTable.from_fn(z2, lambda x: 1)
    shifted = FnTable.from_fn(z2, lambda x: x + 1)
    return solves_d1(identity) and not solves_d1(const) and not solves_d1(shifted)


def alien_summary(field: PrimeField) -> dict:
    """Per-prime report; criteria agreement is informational at p = 2, 3."""
    space = star_kernel(field)
    reports = alien_reports(space)
    summary = {
        "p": field.p,
        "lemma_L": lemma_L_check(field),
        "equivalence": all(r.equivalent for r in reports) if _in_scope(field) else None,
        "alien_count": sum(r.is_alien for r in reports),
    }
    if not _in_scope(field):
        summary["scope"] = "out of theorem scope"
        summary["criteria_agree_count"] = sum(r.equivalent for r in reports)
        summary["solution_count"] = len(reports)
    return summary
