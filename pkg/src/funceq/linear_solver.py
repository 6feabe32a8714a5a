"""Linearize the functional equation over GF(p) and compute its exact kernel.

The equation is linear in the unknown values (f(0..p-1), g(0..p-1)), so the
complete solution set is the nullspace of a p^2 x 2p matrix.
"""

from __future__ import annotations

import itertools
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from funceq.fn_table import FnTable, tables_from_vector
from funceq.prime_field import FieldMismatch, PrimeField

BRUTE_FORCE_MAX_P = 5


@dataclass(frozen=True)
class LinearSystem:
    """Homogeneous system; row i is a coefficient vector over GF(p).

    For the main equation, columns 0..p-1 are f(0..p-1) and p..2p-1 are
    g(0..p-1). The alienation system only has the f columns.
    """

    field: PrimeField
    rows: np.ndarray
    kind: str = "star"

    @property
    def ncols(self) -> int:
        return int(self.rows.shape[1])

    def row(self, x: int, y: int) -> np.ndarray:
        return self.rows[x * self.field.p + y]


def _star_rows_for(p: int, x: int) -> np.ndarray:
    out = np.zeros((p, 2 * p), dtype=np.int64)
    for y in range(p):
        r = out[y]
        r[p + (x + y) % p] += 1
        r[p + x] -= 1
        r[p + y] -= 1
        r[y] -= x
        r[x] -= y
    return out % p


def build_star_system(field: PrimeField) -> LinearSystem:
    """Rows g(x+y) - g(x) - g(y) - x f(y) - y f(x) for every ordered pair."""
    p = field.p
    rows = np.vstack([_star_rows_for(p, x) for x in range(p)])
    return LinearSystem(field, rows, "star")


def build_d1_system(field: PrimeField) -> LinearSystem:
    """Rows x f(y) + y f(x) over the p unknowns f(0..p-1)."""
    p = field.p
    rows = np.zeros((p * p, p), dtype=np.int64)
    for x in range(p):
        for y in range(p):
            r = rows[x * p + y]
            r[y] += x
            r[x] += y
    return LinearSystem(field, rows % p, "d1")


def rref(matrix: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form mod p; zero rows are dropped.

    Entries stay below p <= 2^16, so int64 products cannot overflow.
    """
    M = np.array(matrix, dtype=np.int64) % p
    nrows, ncols = M.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(M[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            M[[r, i]] = M[[i, r]]
        M[r] = (M[r] * pow(int(M[r, c]), -1, p)) % p
        col = M[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            M[hit] = (M[hit] - np.outer(col[hit], M[r])) % p
        pivots.append(c)
        r += 1
    return M[:r], pivots


@dataclass(frozen=True)
class SolutionSpace:
    field: PrimeField
    basis: np.ndarray
    ncols: int

    @property
    def dimension(self) -> int:
        return int(self.basis.shape[0])

    @property
    def size(self) -> int:
        return self.field.p ** self.dimension

    def pivots(self) -> list[int]:
        return [int(np.nonzero(row)[0][0]) for row in self.basis]

    def vectors(self) -> Iterator[tuple[int, ...]]:
        """Every element of the span, in lexicographic order of coefficients."""
        p = self.field.p
        if self.dimension == 0:
            yield (0,) * self.ncols
            return
        for coeffs in itertools.product(range(p), repeat=self.dimension):
            v = (np.asarray(coeffs, dtype=np.int64) @ self.basis) % p
            yield tuple(int(t) for t in v)

    def solutions(self) -> Iterator[tuple[FnTable, FnTable]]:
        for v in self.vectors():
            yield tables_from_vector(self.field, v)

    def functions(self) -> Iterator[FnTable]:
        """Span elements as single tables (for one-function systems)."""
        for v in self.vectors():
            yield FnTable(self.field, v)

    def contains_vector(self, vec) -> bool:
        p = self.field.p
        v = np.asarray(vec, dtype=np.int64) % p
        if v.shape != (self.ncols,):
            raise ValueError(f"vector must have length {self.ncols}")
        for row, c in zip(self.basis, self.pivots()):
            if v[c]:
                v = (v - v[c] * row) % p
        return not v.any()

    def to_dict(self) -> dict:
        return {
            "p": self.field.p,
            "dimension": self.dimension,
            "basis": [[int(t) for t in row] for row in self.basis],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def kernel(system: LinearSystem, chunk: int | None = None) -> SolutionSpace:
    """Canonical nullspace basis, itself in reduced row-echelon form.

    Rows are absorbed in chunks so memory stays O(p * ncols) for large p.
    """
    p = system.field.p
    n = system.ncols
    chunk = chunk or max(n, 64)
    acc = np.zeros((0, n), dtype=np.int64)
    pivots: list[int] = []
    for start in range(0, system.rows.shape[0], chunk):
        acc, pivots = rref(np.vstack([acc, system.rows[start:start + chunk]]), p)
        if len(pivots) == n:
            break
    free = [c for c in range(n) if c not in set(pivots)]
    null = np.zeros((len(free), n), dtype=np.int64)
    for k, j in enumerate(free):
        null[k, j] = 1
        for row, c in zip(acc, pivots):
            null[k, c] = (-row[j]) % p
    basis, _ = rref(null, p) if len(free) else (null, [])
    return SolutionSpace(system.field, basis, n)


def contains(space: SolutionSpace, f: FnTable, g: FnTable) -> bool:
    if f.field != space.field or g.field != space.field:
        raise FieldMismatch("tables and space live over different fields")
    return space.contains_vector(f.values + g.values)


def star_kernel(field: PrimeField) -> SolutionSpace:
    return kernel(build_star_system(field))


def d1_kernel(field: PrimeField) -> SolutionSpace:
    return kernel(build_d1_system(field))


def _brute_block(p: int, f_rows: np.ndarray, G: np.ndarray, lhs: np.ndarray,
                 xs: np.ndarray, ys: np.ndarray) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    found = []
    for fv in f_rows:
        rhs = (xs * fv[ys] + ys * fv[xs]) % p
        hits = np.nonzero(np.all(lhs == rhs, axis=1))[0]
        ft = tuple(int(t) for t in fv)
        found.extend((ft, tuple(int(t) for t in G[i])) for i in hits)
    return found


def brute_force_solutions(field: PrimeField, threads: int = 1) -> list[tuple[FnTable, FnTable]]:
    """Every (f, g) pair solving the equation, by exhaustive search.

    Scans all p^(2p) candidate pairs, comparing the Cauchy difference of each
    g against x f(y) + y f(x) at every (x, y). Shares no code with the kernel
    route. Work is split over f; output is sorted, so independent of threads.
    """
    p = field.p
    if p > BRUTE_FORCE_MAX_P:
        raise ValueError(f"brute force is limited to p <= {BRUTE_FORCE_MAX_P}, got {p}")
    tables = np.array(list(itertools.product(range(p), repeat=p)), dtype=np.int64)
    xs, ys = (a.ravel() for a in np.meshgrid(np.arange(p), np.arange(p), indexing="ij"))
    lhs = (tables[:, (xs + ys) % p] - tables[:, xs] - tables[:, ys]) % p
    blocks = np.array_split(tables, max(1, threads))
    if threads <= 1:
        results = [_brute_block(p, b, tables, lhs, xs, ys) for b in blocks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda b: _brute_block(p, b, tables, lhs, xs, ys), blocks))
    pairs = sorted(itertools.chain.from_iterable(results))
    return [(FnTable(field, fv), FnTable(field, gv)) for fv, gv in pairs]
