"""Functions Z_p -> Z_p stored as value tables, and pointwise identity checks."""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from typing import Callable, NamedTuple, Sequence

import numpy as np

from funceq.prime_field import Elem, FieldMismatch, PrimeField


@dataclass(frozen=True)
class FnTable:
    """A total function on Z_p; ``values[i]`` is the canonical residue of f(i)."""

    field: PrimeField
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        vals = tuple(int(v) % self.field.p for v in self.values)
        if len(vals) != self.field.p:
            raise ValueError(f"table needs {self.field.p} entries, got {len(vals)}")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_fn(cls, field: PrimeField, fn: Callable[[int], int]) -> FnTable:
        return cls(field, tuple(fn(x) for x in range(field.p)))

    @classmethod
    def zero(cls, field: PrimeField) -> FnTable:
        return cls(field, (0,) * field.p)

    @classmethod
    def from_json(cls, field: PrimeField, text: str) -> FnTable:
        return cls(field, tuple(json.loads(text)))

    def to_json(self) -> str:
        return json.dumps(list(self.values))

    def __call__(self, x: int) -> int:
        return self.values[x % self.field.p]

    def elem(self, x: int) -> Elem:
        return Elem(self(x), self.field)

    def array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=np.int64)

    def is_zero(self) -> bool:
        return not any(self.values)

    def __repr__(self) -> str:
        return f"FnTable(p={self.field.p}, {list(self.values)})"


@dataclass(frozen=True)
class PairTable:
    """A function Z_p x Z_p -> Z_p; ``values[x][y]`` is F(x, y)."""

    field: PrimeField
    values: tuple[tuple[int, ...], ...] = dc_field(repr=False)

    def __post_init__(self) -> None:
        p = self.field.p
        rows = tuple(tuple(int(v) % p for v in row) for row in self.values)
        if len(rows) != p or any(len(r) != p for r in rows):
            raise ValueError(f"pair table must be {p}x{p}")
        object.__setattr__(self, "values", rows)

    @classmethod
    def from_fn(cls, field: PrimeField, fn: Callable[[int, int], int]) -> PairTable:
        p = field.p
        return cls(field, tuple(tuple(fn(x, y) for y in range(p)) for x in range(p)))

    @classmethod
    def from_json(cls, field: PrimeField, text: str) -> PairTable:
        return cls(field, tuple(tuple(r) for r in json.loads(text)))

    def to_json(self) -> str:
        return json.dumps([list(r) for r in self.values])

    def __call__(self, x: int, y: int) -> int:
        p = self.field.p
        return self.values[x % p][y % p]

    def array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=np.int64)


class Violation(NamedTuple):
    x: int
    y: int
    lhs: int
    rhs: int


def _same_field(*tables: FnTable) -> PrimeField:
    fields = {t.field for t in tables}
    if len(fields) != 1:
        raise FieldMismatch("tables live over different fields")
    return tables[0].field


def _grid(p: int) -> tuple[np.ndarray, np.ndarray]:
    xs, ys = np.meshgrid(np.arange(p), np.arange(p), indexing="ij")
    return xs, ys


def parity_decompose(f: FnTable) -> tuple[FnTable, FnTable]:
    """Split f into (f(x) - f(-x), f(x) + f(-x)).

    No factor 1/2 is applied, so the parts sum to 2f and the split is
    meaningful in characteristic 2 as well.
    """
    p = f.field.p
    odd = FnTable(f.field, tuple(f(x) - f(-x) for x in range(p)))
    even = FnTable(f.field, tuple(f(x) + f(-x) for x in range(p)))
    return odd, even


def cauchy_difference(g: FnTable) -> PairTable:
    p = g.field.p
    a = g.array()
    xs, ys = _grid(p)
    F = (a[(xs + ys) % p] - a[xs] - a[ys]) % p
    return PairTable(g.field, tuple(tuple(int(v) for v in row) for row in F))


def _cocycle_ok(F: np.ndarray, p: int) -> bool:
    if not np.array_equal(F, F.T):
        return False
    r = np.arange(p)
    x, y, z = r[:, None, None], r[None, :, None], r[None, None, :]
    lhs = F[(x + y) % p, z] + F[x, y]
    rhs = F[x, (y + z) % p] + F[y, z]
    return bool(np.all((lhs - rhs) % p == 0))


def check_cocycle_and_symmetry(F: PairTable) -> bool:
    """Symmetry plus F(x+y, z) + F(x, y) = F(x, y+z) + F(y, z) at all p^3 triples."""
    return _cocycle_ok(F.array(), F.field.p)


def check_star(f: FnTable, g: FnTable) -> list[Violation]:
    """Pairs (x, y) where g(x+y) - g(x) - g(y) != x f(y) + y f(x)."""
    fld = _same_field(f, g)
    p = fld.p
    fa, ga = f.array(), g.array()
    xs, ys = _grid(p)
    lhs = (ga[(xs + ys) % p] - ga[xs] - ga[ys]) % p
    rhs = (xs * fa[ys] + ys * fa[xs]) % p
    bad = np.argwhere(lhs != rhs)
    return [Violation(int(x), int(y), int(lhs[x, y]), int(rhs[x, y])) for x, y in bad]


def is_solution(f: FnTable, g: FnTable) -> bool:
    return not check_star(f, g)


@dataclass(frozen=True)
class IdentityReport:
    """Pointwise truth of the identities every solution must satisfy."""

    p: int
    identities: dict[str, bool]

    @property
    def all_hold(self) -> bool:
        return all(self.identities.values())

    def to_dict(self) -> dict:
        return {"p": self.p, "identities": dict(self.identities), "all_hold": self.all_hold}


# The first five are required of every solution; the rest are the
# intermediate equations used along the way.
CORE_IDENTITIES = ("aux1", "gf", "31", "24_odd", "24_even")


def check_proof_identities(f: FnTable, g: FnTable) -> IdentityReport:
    """Evaluate the derived identities of a solution (f, g) at every point.

    aux1:    g(2x) - 2g(x) = 2x f(x)
    gf:      g_e(x) = x f_o(x)
    31:      f(2x) = 3f(x) + f(-x)
    24_odd:  f_o(2x) = 2 f_o(x)
    24_even: f_e(2x) = 4 f_e(x)

    Also reported: f(0) = g(0) = 0, the split equations for (g_e, f_o) and
    (g_o, f_e), and 2 C_{g_o}(x, y) = 2c xy(x + y) with c = f_e(1).
    """
    fld = _same_field(f, g)
    violations = check_star(f, g)
    if violations:
        raise ValueError(f"(f, g) is not a solution; first violation {violations[0]}")
    p = fld.p
    f_o, f_e = parity_decompose(f)
    g_o, g_e = parity_decompose(g)
    X = range(p)

    def pointwise(pred: Callable[[int], bool]) -> bool:
        return all(pred(x) for x in X)

    def split_eq(gg: FnTable, ff: FnTable) -> bool:
        return not check_star(ff, gg)

    c = f_e(1)
    ids = {
        "aux1": pointwise(lambda x: (g(2 * x) - 2 * g(x) - 2 * x * f(x)) % p == 0),
        "gf": pointwise(lambda x: (g_e(x) - x * f_o(x)) % p == 0),
        "31": pointwise(lambda x: (f(2 * x) - 3 * f(x) - f(-x)) % p == 0),
        "24_odd": pointwise(lambda x: (f_o(2 * x) - 2 * f_o(x)) % p == 0),
        "24_even": pointwise(lambda x: (f_e(2 * x) - 4 * f_e(x)) % p == 0),
        "zero_at_origin": f(0) == 0 and g(0) == 0,
        "eo": split_eq(g_e, f_o),
        "oe": split_eq(g_o, f_e),
        "go": all(
            (2 * (g_o(x + y) - g_o(x) - g_o(y)) - 2 * c * x * y * (x + y)) % p == 0
            for x in X
            for y in X
        ),
    }
    return IdentityReport(p, ids)


def is_additive(f: FnTable) -> bool:
    p = f.field.p
    a = f.array()
    xs, ys = _grid(p)
    return bool(np.all((a[(xs + ys) % p] - a[xs] - a[ys]) % p == 0))


def is_odd(f: FnTable) -> bool:
    p = f.field.p
    return all((f(-x) + f(x)) % p == 0 for x in range(p))


def is_even(f: FnTable) -> bool:
    return all(f(-x) == f(x) for x in range(f.field.p))


def tables_from_vector(field: PrimeField, vec: Sequence[int]) -> tuple[FnTable, FnTable]:
    """Decode a 2p-vector (f(0..p-1), g(0..p-1)) into two tables."""
    p = field.p
    if len(vec) != 2 * p:
        raise ValueError(f"expected a vector of length {2 * p}")
    return FnTable(field, tuple(vec[:p])), FnTable(field, tuple(vec[p:]))
