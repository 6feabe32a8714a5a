"""Closed-form solutions and the check that they exhaust the kernel.

Every additive self-map of Z_p is x -> a*x, so the two additive maps of the
parametrization reduce to slopes and a solution is named by (a, b, c):

    f(x) = a x + c x^2
    g(x) = b x + a x^2 + c x^3 / 3

This needs 2 and 3 invertible, i.e. p >= 5.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass


from funceq.fn_table import FnTable, check_star
from funceq.linear_solver import (
    LinearSystem,
    SolutionSpace,
    build_star_system,
    contains,
    kernel,
    rref,
    star_kernel,
)
from funceq.prime_field import Elem, FieldMismatch, PrimeField


class OutOfScope(ValueError):
    """The closed form needs a field uniquely divisible by 2 and 3."""


def _require_p5(field: PrimeField) -> None:
    if not (field.uniquely_divisible_by(2) and field.uniquely_divisible_by(3)):
        raise OutOfScope(f"p={field.p}: Z_p is not uniquely divisible by 2 and 3")


@dataclass(frozen=True)
class FamilyParams:
    a: Elem
    b: Elem
    c: Elem

    def __post_init__(self) -> None:
        if not (self.a.field == self.b.field == self.c.field):
            raise FieldMismatch("parameters must share one field")

    @classmethod
    def of(cls, field: PrimeField, a: int, b: int, c: int) -> FamilyParams:
        return cls(field(a), field(b), field(c))

    @property
    def field(self) -> PrimeField:
        return self.a.field

    def as_tuple(self) -> tuple[int, int, int]:
        return self.a.value, self.b.value, self.c.value


def family_member(params: FamilyParams) -> tuple[FnTable, FnTable]:
    field = params.field
    _require_p5(field)
    p = field.p
    a, b, c = params.as_tuple()
    third = field.inv(3)
    f = FnTable.from_fn(field, lambda x: a * x + c * x * x)
    g = FnTable.from_fn(field, lambda x: b * x + a * x * x + third * c * pow(x, 3, p))
    return f, g


def recover_params(f: FnTable, g: FnTable) -> FamilyParams:
    """Invert family_member: f(1) = a + c, f(2) = 2a + 4c, g(1) = b + a + c/3."""
    field = f.field
    _require_p5(field)
    p = field.p
    half = field.inv(2)
    # f(2) - 2 f(1) = 2c
    c = (f(2) - 2 * f(1)) * half % p
    a = (f(1) - c) % p
    b = (g(1) - a - c * field.inv(3)) % p
    return FamilyParams.of(field, a, b, c)


@dataclass(frozen=True)
class GeneralFormReport:
    """What 4f = 2A1 + 2c x^2 and 6g = A2 + 3x A1 + c x^3 say about (f, g).

    ``f``/``g`` are set only when the corresponding equation pins the table
    down. ``params_consistent`` is False when the right-hand side of a
    vacuous equation (0 = ...) does not vanish. ``f_realizable`` records
    whether any g at all makes (f, g) a solution, when f is determined.
    """

    p: int
    params: tuple[int, int, int]
    f: FnTable | None
    g: FnTable | None
    f_note: str
    g_note: str
    params_consistent: bool
    equivalent_params: tuple[int, int, int] | None = None
    f_realizable: bool | None = None

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "params": list(self.params),
            "f": None if self.f is None else list(self.f.values),
            "g": None if self.g is None else list(self.g.values),
            "f_note": self.f_note,
            "g_note": self.g_note,
            "params_consistent": self.params_consistent,
            "equivalent_params": None if self.equivalent_params is None else list(self.equivalent_params),
            "f_realizable": self.f_realizable,
        }


VACUOUS = "vacuous: imposes no constraint"


def _f_projection_contains(space: SolutionSpace, f: FnTable) -> bool:
    p = space.field.p
    if space.dimension == 0:
        return f.is_zero()
    proj, _ = rref(space.basis[:, :p], p)
    sub = SolutionSpace(space.field, proj, p)
    return sub.contains_vector(f.values)


def family_member_general(params: FamilyParams) -> GeneralFormReport:
    """Read the general (non-divided) closed form at any prime.

    For p >= 5 both equations are divided out. The result coincides with
    ``family_member`` at the rescaled parameters (a/2, b/6, c/2), reported as
    ``equivalent_params``.
    """
    field = params.field
    p = field.p
    a, b, c = params.as_tuple()
    cube = lambda x: pow(x, 3, p)  # noqa: E731
    # right-hand sides, as functions of x
    rhs_f = lambda x: 2 * a * x + 2 * c * x * x  # noqa: E731
    rhs_g = lambda x: b * x + 3 * x * a * x + c * cube(x)  # noqa: E731

    f = g = None
    equiv = None
    if 4 % p:
        inv4 = field.inv(4)
        f = FnTable.from_fn(field, lambda x: inv4 * rhs_f(x))
        f_note = "determined: f = (2A1 + 2c x^2) / 4"
        f_ok = True
    else:
        f_note = VACUOUS
        f_ok = all(rhs_f(x) % p == 0 for x in range(p))
    if 6 % p:
        inv6 = field.inv(6)
        g = FnTable.from_fn(field, lambda x: inv6 * rhs_g(x))
        g_note = "determined: g = (A2 + 3x A1 + c x^3) / 6"
        g_ok = True
    else:
        g_note = VACUOUS
        g_ok = all(rhs_g(x) % p == 0 for x in range(p))
    if p >= 5:
        half, sixth = field.inv(2), field.inv(6)
        equiv = (a * half % p, b * sixth % p, c * half % p)
    realizable = None
    if f is not None:
        realizable = _f_projection_contains(star_kernel(field), f)
    return GeneralFormReport(p, (a, b, c), f, g, f_note, g_note, f_ok and g_ok, equiv, realizable)


def all_params(field: PrimeField):
    for a, b, c in itertools.product(range(field.p), repeat=3):
        yield FamilyParams.of(field, a, b, c)


@dataclass(frozen=True)
class ExhaustionReport:
    p: int
    family_size: int
    kernel_dim: int
    all_contained: bool
    all_solve: bool
    injective: bool

    @property
    def exhaustive(self) -> bool:
        return (self.all_contained and self.all_solve and self.injective
                and self.family_size == self.p ** self.kernel_dim)

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "family_size": self.family_size,
            "kernel_dim": self.kernel_dim,
            "exhaustive": self.exhaustive,
        }


def family_exhaustion_report(field: PrimeField, space: SolutionSpace | None = None) -> ExhaustionReport:
    _require_p5(field)
    space = space or star_kernel(field)
    seen: set[tuple[int, ...]] = set()
    all_contained = all_solve = True
    for params in all_params(field):
        f, g = family_member(params)
        all_contained &= contains(space, f, g)
        all_solve &= not check_star(f, g)
        seen.add(f.values + g.values)
    return ExhaustionReport(field.p, len(seen), space.dimension, all_contained, all_solve,
                            injective=len(seen) == field.p ** 3)


def verify_family_exhausts_kernel(field: PrimeField) -> bool:
    """Containment of all p^3 members, injectivity, and |family| = p^dim."""
    return family_exhaustion_report(field).exhaustive


def build_same_function_system(field: PrimeField) -> LinearSystem:
    """The main system with g forced equal to f: merge each g column into f."""
    star = build_star_system(field)
    p = field.p
    rows = (star.rows[:, :p] + star.rows[:, p:]) % p
    return LinearSystem(field, rows, "same")


def same_function_solutions(field: PrimeField) -> list[FnTable]:
    _require_p5(field)
    return list(kernel(build_same_function_system(field)).functions())


def same_function_kernel(field: PrimeField) -> list[FnTable]:
    """All same-function solutions at any prime; no claim is made for p = 2, 3."""
    return list(kernel(build_same_function_system(field)).functions())

