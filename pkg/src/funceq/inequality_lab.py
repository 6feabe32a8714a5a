"""Exact checks of g(x+y) - g(x) - g(y) >= x f(y) + y f(x) on dyadic grids.

The real line is replaced by the finite symmetric grid {k / 2^m : |k| <= K 2^m}.
Statements quantified over x + y are checked only on the *additive core*:
pairs whose sum is again a grid point. Everything is exact. Values are
Fractions at the interface; pair scans run on integers scaled to a common
denominator, so no rounding can enter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterator, NamedTuple, Sequence

import numpy as np

Number = int | Fraction


@dataclass(frozen=True)
class DyadicGrid:
    m: int
    K: int

    def __post_init__(self) -> None:
        if self.m < 0:
            raise ValueError("denominator exponent m must be >= 0")
        if self.K < 1:
            raise ValueError("half width K must be >= 1")

    @property
    def scale(self) -> int:
        return 1 << self.m

    @property
    def N(self) -> int:
        """Largest numerator; points are k / scale for |k| <= N."""
        return self.K * self.scale

    def __len__(self) -> int:
        return 2 * self.N + 1

    @cached_property
    def points(self) -> tuple[Fraction, ...]:
        s = self.scale
        return tuple(Fraction(k, s) for k in range(-self.N, self.N + 1))

    def numerator(self, x: Number) -> int:
        """k with x = k / 2^m; raises if x is not on the grid."""
        q = Fraction(x) * self.scale
        if q.denominator != 1 or abs(q.numerator) > self.N:
            raise ValueError(f"{x} is not on the grid m={self.m}, K={self.K}")
        return q.numerator

    def index(self, x: Number) -> int:
        return self.numerator(x) + self.N

    def __contains__(self, x: object) -> bool:
        try:
            self.numerator(x)  # type: ignore[arg-type]
        except (ValueError, TypeError):
            return False
        return True

    @cached_property
    def _core(self) -> tuple[tuple[int, int], ...]:
        N = self.N
        return tuple((kx, ky) for kx in range(-N, N + 1)
                     for ky in range(max(-N, -N - kx), min(N, N - kx) + 1))

    def core_pairs(self) -> Iterator[tuple[int, int]]:
        """Numerator pairs (kx, ky) with kx + ky also on the grid."""
        return iter(self._core)

    @cached_property
    def core_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Core pairs as index arrays (kx + N, ky + N)."""
        pairs = np.array(self._core, dtype=np.int64).reshape(-1, 2) + self.N
        return pairs[:, 0], pairs[:, 1]

    def core_size(self) -> int:
        n = 2 * self.N + 1
        return n * n - self.N * (self.N + 1)

    def to_dict(self) -> dict:
        return {"m": self.m, "K": self.K}


@dataclass(frozen=True)
class GridFunction:
    grid: DyadicGrid
    values: tuple[Fraction, ...] = dc_field(repr=False)

    def __post_init__(self) -> None:
        vals = tuple(_exact(v) for v in self.values)
        if len(vals) != len(self.grid):
            raise ValueError(f"grid has {len(self.grid)} points, got {len(vals)} values")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_fn(cls, grid: DyadicGrid, fn: Callable[[Fraction], Number]) -> GridFunction:
        return cls(grid, tuple(fn(x) for x in grid.points))

    @classmethod
    def zero(cls, grid: DyadicGrid) -> GridFunction:
        return cls(grid, (Fraction(0),) * len(grid))

    def __call__(self, x: Number) -> Fraction:
        return self.values[self.grid.index(x)]

    def at(self, k: int) -> Fraction:
        """Value at the grid point with numerator k."""
        return self.values[k + self.grid.N]

    @cached_property
    def scaled(self) -> tuple[tuple[int, ...], int]:
        """(nums, den) with values[i] == nums[i] / den and den > 0."""
        den = math.lcm(*(v.denominator for v in self.values))
        return tuple(v.numerator * (den // v.denominator) for v in self.values), den

    def is_zero(self) -> bool:
        return not any(self.values)

    def __add__(self, other: GridFunction) -> GridFunction:
        _same_grid(self, other)
        return GridFunction(self.grid, tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other: GridFunction) -> GridFunction:
        _same_grid(self, other)
        return GridFunction(self.grid, tuple(a - b for a, b in zip(self.values, other.values)))

    def to_list(self) -> list[str]:
        return [str(v) for v in self.values]


def _exact(v: object) -> Fraction:
    if isinstance(v, float):
        raise TypeError("floats are not allowed; pass an int, Fraction, or 'num/den' string")
    if isinstance(v, (int, Fraction, str)):
        return Fraction(v)
    raise TypeError(f"cannot read {v!r} as an exact rational")


def _same_grid(*fns: GridFunction) -> DyadicGrid:
    grids = {fn.grid for fn in fns}
    if len(grids) != 1:
        raise ValueError("grid functions live on different grids")
    return fns[0].grid


class IneqViolation(NamedTuple):
    x: Fraction
    y: Fraction
    lhs: Fraction
    rhs: Fraction


def phi(f: GridFunction, x: Number, y: Number) -> Fraction:
    """x f(y) + y f(x)."""
    return Fraction(x) * f(y) + Fraction(y) * f(x)


def _phi_num(F: Sequence[int], N: int, kx: int, ky: int) -> int:
    # phi(x, y) * scale * den_f
    return kx * F[ky + N] + ky * F[kx + N]


def _exact_array(values: Sequence[int], bound: int) -> np.ndarray:
    """int64 if every intermediate stays below ``bound`` < 2^62, else Python ints."""
    dtype = np.int64 if bound < (1 << 62) else object
    return np.array(values, dtype=dtype)


def _star_star_arrays(f: GridFunction, g: GridFunction) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Core (kx, ky) and L, R with lhs - rhs = (L - R) / (den_g * scale * den_f)."""
    grid = _same_grid(f, g)
    N, S = grid.N, grid.scale
    F, df = f.scaled
    G, dg = g.scaled
    ix, iy = grid.core_arrays
    mf = max(map(abs, F), default=0)
    mg = max(map(abs, G), default=0)
    bound = max(3 * mg * S * df, 2 * N * mf * dg) + 1
    Fa, Ga = _exact_array(F, bound), _exact_array(G, bound)
    kx, ky = ix - N, iy - N
    if Fa.dtype == object:
        kx, ky = kx.astype(object), ky.astype(object)
    L = (Ga[ix + iy - N] - Ga[ix] - Ga[iy]) * (S * df)
    R = (kx * Fa[iy] + ky * Fa[ix]) * dg
    return ix - N, iy - N, L, R


def check_star_star(f: GridFunction, g: GridFunction) -> list[IneqViolation]:
    """Core pairs where g(x+y) - g(x) - g(y) < x f(y) + y f(x)."""
    grid = _same_grid(f, g)
    s = grid.scale
    kx, ky, L, R = _star_star_arrays(f, g)
    out = []
    for i in np.nonzero(L < R)[0]:
        x, y = Fraction(int(kx[i]), s), Fraction(int(ky[i]), s)
        out.append(IneqViolation(x, y, g(x + y) - g(x) - g(y), phi(f, x, y)))
    return out


def star_star_slack(f: GridFunction, g: GridFunction) -> dict[tuple[Fraction, Fraction], Fraction]:
    """lhs - rhs of the inequality at every core pair."""
    grid = _same_grid(f, g)
    s = grid.scale
    den = g.scaled[1] * s * f.scaled[1]
    kx, ky, L, R = _star_star_arrays(f, g)
    return {(Fraction(int(a), s), Fraction(int(b), s)): Fraction(int(l - r), den)
            for a, b, l, r in zip(kx, ky, L, R)}


def subadditivity_defect(A: GridFunction) -> dict[tuple[Fraction, Fraction], Fraction]:
    """A(x) + A(y) - A(x+y) at every core pair."""
    grid = A.grid
    s, N = grid.scale, grid.N
    V, d = A.scaled
    return {(Fraction(kx, s), Fraction(ky, s)): Fraction(V[kx + N] + V[ky + N] - V[kx + ky + N], d)
            for kx, ky in grid.core_pairs()}


def slack_matches_defect(f: GridFunction, g: GridFunction, A: GridFunction) -> bool:
    """At every core pair, the slack of (f, g) equals A(x) + A(y) - A(x+y) and is >= 0."""
    grid = _same_grid(f, g, A)
    _, _, L, R = _star_star_arrays(f, g)
    V, da = A.scaled
    den = g.scaled[1] * grid.scale * f.scaled[1]
    ix, iy = grid.core_arrays
    slack_max = int(abs(L).max()) + int(abs(R).max()) if len(L) else 0
    bound = max(slack_max * da, 3 * max(map(abs, V), default=0) * den) + 1
    Va = _exact_array(V, bound)
    D = Va[ix] + Va[iy] - Va[ix + iy - grid.N]
    if Va.dtype == object or L.dtype == object:
        L, R, D = L.astype(object), R.astype(object), D.astype(object)
    return bool(np.all((L - R) * da == D * den) and np.all(L >= R))


def _core_defect(h: GridFunction) -> np.ndarray:
    """h(x) + h(y) - h(x+y) at the core pairs, as exact integers over h's denominator."""
    V, _ = h.scaled
    ix, iy = h.grid.core_arrays
    Va = _exact_array(V, 3 * max(map(abs, V), default=0) + 1)
    return Va[ix] + Va[iy] - Va[ix + iy - h.grid.N]


def is_additive_on_core(f: GridFunction) -> bool:
    return not _core_defect(f).any()


def is_subadditive_on_core(A: GridFunction) -> bool:
    return bool(np.all(_core_defect(A) >= 0))


def is_odd(f: GridFunction) -> bool:
    N = f.grid.N
    return all(f.at(-k) == -f.at(k) for k in range(N + 1))


def _doubling_ks(grid: DyadicGrid) -> range:
    """Numerators k with 2k still on the grid."""
    h = grid.N // 2
    return range(-h, h + 1)


@dataclass(frozen=True)
class PhiReport:
    """Which hypotheses on f and phi(x, y) = x f(y) + y f(x) hold on the grid.

    ``growth_truncated`` compares 4^-n phi(2^n x, 2^n y) with phi(x, y) only
    for the finitely many n the grid can represent, so it is a truncated
    check of an asymptotic condition, not a verification of it.
    """

    conditions: dict[str, bool]
    pair_counts: dict[str, int]
    truncated: tuple[str, ...] = ("growth_truncated",)

    def __getitem__(self, key: str) -> bool:
        return self.conditions[key]

    def to_dict(self) -> dict:
        return {
            "conditions": dict(self.conditions),
            "pair_counts": dict(self.pair_counts),
            "truncated": list(self.truncated),
        }


def check_phi_hypotheses(f: GridFunction) -> PhiReport:
    grid = f.grid
    N = grid.N
    F, _ = f.scaled
    P = lambda a, b: _phi_num(F, N, a, b)  # noqa: E731
    ks = range(-N, N + 1)
    dbl = _doubling_ks(grid)

    np_ok = all(P(a, -b) >= -P(a, b) for a in ks for b in ks)
    neg_sym = all(P(-a, -b) == P(a, b) for a in ks for b in ks)
    two_w = all(P(2 * a, 2 * a) <= 4 * P(a, a) for a in dbl)
    odd = all(F[-k + N] == -F[k + N] for k in ks)
    doubling = all(F[2 * k + N] == 2 * F[k + N] for k in dbl)
    scaling = all(P(2 * a, 2 * b) == 4 * P(a, b) for a in dbl for b in dbl)
    symmetric = all(P(a, b) == P(b, a) for a in ks for b in ks)

    growth = True
    growth_pairs = 0
    for a in ks:
        for b in ks:
            n = 1
            while abs(a) << n <= N and abs(b) << n <= N and (a or b):
                growth_pairs += 1
                if P(a << n, b << n) < (4 ** n) * P(a, b):
                    growth = False
                n += 1

    n_all = len(ks) ** 2
    return PhiReport(
        conditions={
            "NP": np_ok,
            "neg_symmetric": neg_sym,
            "2W": two_w,
            "odd": odd,
            "doubling": doubling,
            "scaling": scaling,
            "symmetric": symmetric,
            "growth_truncated": growth,
        },
        pair_counts={
            "all_pairs": n_all,
            "doubling_points": len(dbl),
            "doubling_pairs": len(dbl) ** 2,
            "growth_pairs": growth_pairs,
        },
    )


def phi_is_biadditive_on_core(f: GridFunction) -> bool:
    """phi(x, y + z) = phi(x, y) + phi(x, z) whenever y + z is on the grid."""
    grid = f.grid
    N = grid.N
    F, _ = f.scaled
    ks = range(-N, N + 1)
    return all(
        _phi_num(F, N, a, b + c) == _phi_num(F, N, a, b) + _phi_num(F, N, a, c)
        for a in ks
        for b, c in grid.core_pairs()
    )


def _x_times(f: GridFunction) -> GridFunction:
    return GridFunction(f.grid, tuple(x * v for x, v in zip(f.grid.points, f.values)))


def construct_solution(f: GridFunction, A: GridFunction) -> GridFunction:
    """g(x) = x f(x) - A(x) for additive f and subadditive A."""
    _same_grid(f, A)
    if not is_additive_on_core(f):
        raise ValueError("f is not additive on the additive core")
    if not is_subadditive_on_core(A):
        raise ValueError("A is not subadditive on the additive core")
    return _x_times(f) - A


def extract_remainder(f: GridFunction, g: GridFunction) -> GridFunction:
    """A(x) = x f(x) - g(x), certified subadditive on the core."""
    _same_grid(f, g)
    if not is_additive_on_core(f):
        raise ValueError("f is not additive on the additive core")
    bad = check_star_star(f, g)
    if bad:
        raise ValueError(f"(f, g) violates the inequality, first at {bad[0]}")
    A = _x_times(f) - g
    if not is_subadditive_on_core(A):
        # A(x)+A(y)-A(x+y) equals the slack when f is additive; cannot happen
        raise AssertionError("remainder is not subadditive although the inequality holds")
    return A


@dataclass(frozen=True)
class C2Result:
    holds: bool
    k0: int | None
    depth: int

    def to_dict(self) -> dict:
        return {"holds": self.holds, "k0": self.k0, "depth": self.depth, "truncated": True}


def check_c2_condition(g: GridFunction, x: Number) -> C2Result:
    """Is there k0 with g(x/2^k) + g(-x/2^k) >= 0 for every representable k >= k0?

    Only the finitely many k for which x/2^k is a grid point are examined;
    ``depth`` is the deepest such k and ``k0`` the smallest admissible start.
    """
    grid = g.grid
    k = grid.numerator(x)
    depth = grid.m if k == 0 else (abs(k) & -abs(k)).bit_length() - 1
    ok = [g.at(k >> j) + g.at(-(k >> j)) >= 0 for j in range(depth + 1)]
    k0 = None
    for j in range(depth, -1, -1):
        if not ok[j]:
            break
        k0 = j
    return C2Result(k0 is not None, k0, depth)


def alienation_failure_check(f: GridFunction) -> bool:
    """If phi <= 0 at every grid pair then f = 0.

    Follows the chain: y = 1 gives f(x) <= -f(1) x; applied to -x with
    oddness it gives f(x) >= -f(1) x; so f(x) = -f(1) x, which at x = 1
    forces f(1) = 0. The premise is taken over all grid pairs, since phi
    never needs x + y.
    """
    grid = f.grid
    if 1 not in grid:
        raise ValueError("grid must contain 1")
    if not is_odd(f):
        raise ValueError("f must be odd")
    N, s = grid.N, grid.scale
    F, _ = f.scaled
    ks = range(-N, N + 1)
    if any(_phi_num(F, N, a, b) > 0 for a in ks for b in ks):
        return True
    f1 = f(1)
    upper = all(f.at(k) <= -f1 * Fraction(k, s) for k in ks)
    lower = all(f.at(k) >= -f1 * Fraction(k, s) for k in ks)
    if not (upper and lower and f1 == -f1 and phi(f, 1, 1) <= 0):
        return False
    return f.is_zero()


def _term(grid: DyadicGrid, kind: str, q: Fraction) -> GridFunction:
    builders: dict[str, Callable[[Fraction], Fraction]] = {
        "linear": lambda x: q * x,
        "abs": lambda x: q * abs(x),
        "square": lambda x: q * x * x,
        "cube": lambda x: q * x ** 3,
        "const": lambda x: q,
    }
    if kind not in builders:
        raise ValueError(f"unknown function kind {kind!r}")
    return GridFunction.from_fn(grid, builders[kind])


def parse_function(grid: DyadicGrid, spec: object) -> GridFunction:
    """Build a grid function from its input-file description.

    Accepted: "zero"; "linear:q", "abs:q", "square:q", "cube:q", "const:q"
    (q a rational string such as "3/2"), joined by "+" to sum terms; a list
    of exact values, one per grid point; or {"table": [...]}.
    """
    if isinstance(spec, dict):
        if set(spec) != {"table"}:
            raise ValueError(f"unrecognized function object {spec!r}")
        spec = spec["table"]
    if isinstance(spec, list):
        return GridFunction(grid, tuple(spec))
    if not isinstance(spec, str):
        raise ValueError(f"unrecognized function description {spec!r}")
    total = GridFunction.zero(grid)
    for part in spec.split("+"):
        part = part.strip()
        if part == "zero":
            continue
        kind, sep, q = part.partition(":")
        if not sep:
            raise ValueError(f"term {part!r} needs the form kind:q")
        total = total + _term(grid, kind.strip(), Fraction(q.strip()))
    return total


def evaluate_spec(spec: dict) -> tuple[dict[str, bool], dict]:
    """Run the checks an input file asks for.

    The file is {"grid": {"m": int, "K": int}, "f": ..., "g": ..., "A": ...}
    with "f" required and at least one of "g", "A". Returns (checks, info);
    the verdict passes iff every entry of ``checks`` is True.
    """
    if not isinstance(spec, dict):
        raise ValueError("input must be a JSON object")
    if "grid" not in spec:
        raise ValueError("missing 'grid'")
    if "f" not in spec:
        raise ValueError("missing 'f'")
    if "g" not in spec and "A" not in spec:
        raise ValueError("need 'g', 'A', or both")
    gspec = spec["grid"]
    if not isinstance(gspec, dict) or not {"m", "K"} <= set(gspec):
        raise ValueError("'grid' needs integer keys 'm' and 'K'")
    m, K = gspec["m"], gspec["K"]
    if not all(isinstance(v, int) and not isinstance(v, bool) for v in (m, K)):
        raise ValueError("'grid' keys 'm' and 'K' must be integers")
    grid = DyadicGrid(m, K)
    f = parse_function(grid, spec["f"])
    A = parse_function(grid, spec["A"]) if "A" in spec else None
    g = parse_function(grid, spec["g"]) if "g" in spec else None

    checks: dict[str, bool] = {}
    info: dict = {"grid": grid.to_dict(), "points": len(grid), "core_pairs": grid.core_size()}
    f_additive = is_additive_on_core(f)
    info["f_additive_on_core"] = f_additive
    info["phi_hypotheses"] = check_phi_hypotheses(f).to_dict()

    if A is not None:
        info["A_subadditive_on_core"] = is_subadditive_on_core(A)
        constructible = f_additive and info["A_subadditive_on_core"]
        checks["construct_preconditions"] = constructible
        if constructible:
            built = construct_solution(f, A)
            if g is None:
                g = built
            else:
                checks["g_matches_construction"] = built == g

    if g is not None:
        violations = check_star_star(f, g)
        checks["star_star"] = not violations
        info["violations"] = [[str(v.x), str(v.y), str(v.lhs), str(v.rhs)] for v in violations]
        if f_additive and not violations:
            rem = extract_remainder(f, g)
            info["remainder"] = rem.to_list()
            info["remainder_additive_on_core"] = is_additive_on_core(rem)
            if A is not None:
                checks["round_trip"] = rem == A
                checks["slack_equals_defect"] = slack_matches_defect(f, g, A)
        if 1 in grid:
            info["c2_condition_at_1"] = check_c2_condition(g, 1).to_dict()
    return checks, info
