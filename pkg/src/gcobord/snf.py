"""Exact integer Smith normal form, dense and sparse.

All arithmetic is on Python integers, so intermediate entry growth can never
overflow; :class:`EntryGrowthError` is raised only if an entry exceeds an
explicit bit budget, which callers may use to detect pathological fill.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field


class EntryGrowthError(ArithmeticError):
    pass


@dataclass
class SparseIntMatrix:
    rows: int
    cols: int
    entries: list = field(default_factory=list)

    def __post_init__(self):
        seen = {}
        for r, c, v in self.entries:
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise IndexError(f"entry ({r},{c}) outside {self.rows}x{self.cols}")
            if (r, c) in seen:
                raise ValueError(f"duplicate entry at ({r},{c})")
            seen[(r, c)] = v
        self.entries = [(r, c, int(v)) for (r, c), v in sorted(seen.items()) if v]

    @classmethod
    def from_dense(cls, A):
        A = [list(row) for row in A]
        rows = len(A)
        cols = len(A[0]) if rows else 0
        return cls(rows, cols, [(i, j, v) for i, row in enumerate(A) for j, v in enumerate(row) if v])

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for r, c, v in self.entries:
            out[r][c] = v
        return out


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A, B) -> list[list[int]]:
    if not A:
        return []
    Bt = list(zip(*B)) if B else []
    inner = len(B)
    if inner == 0:
        return [[0] * (len(B[0]) if B else 0) for _ in A]
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def determinant(A) -> int:
    """Exact determinant by fraction-free Bareiss elimination."""
    n = len(A)
    M = [list(r) for r in A]
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1] if n else 1


def _check_bits(v, max_bits):
    if max_bits is not None and abs(v).bit_length() > max_bits:
        raise EntryGrowthError(f"entry with {abs(v).bit_length()} bits exceeds budget {max_bits}")


def smith_normal_form(A, *, track=True, verify=False, max_bits=None):
    """Return (U, D, V) with U*A*V = D, U and V unimodular.

    ``A`` is a :class:`SparseIntMatrix` or a dense list of rows.  D is
    diagonal with nonnegative d_i and d_i | d_{i+1}.  Pivoting is
    deterministic: the smallest nonzero |entry| in the active block, ties
    broken by (row, col).  With ``track=False`` U and V are None.
    """
    U, D, V, _ = _snf(A, track_u=track, track_v=track, track_vinv=False,
                      max_bits=max_bits)
    if verify:
        A_dense = A.to_dense() if isinstance(A, SparseIntMatrix) else [list(r) for r in A]
        if track:
            assert matmul(matmul(U, A_dense), V) == D, "U*A*V != D"
            assert abs(determinant(U)) == 1 and abs(determinant(V)) == 1
    return U, D, V


def invariant_factors(A) -> list[int]:
    """Nonzero diagonal of the Smith form (including 1s)."""
    _, D, _ = smith_normal_form(A, track=False)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0)) if D[i][i]]


def _snf(A, *, track_u, track_v, track_vinv, max_bits=None):
    if isinstance(A, SparseIntMatrix):
        m, n = A.rows, A.cols
        D = A.to_dense()
    else:
        D = [list(map(int, r)) for r in A]
        m = len(D)
        n = len(D[0]) if m else 0
    U = identity(m) if track_u else None
    V = identity(n) if track_v else None
    Vi = identity(n) if track_vinv else None

    def row_swap(i, j):
        D[i], D[j] = D[j], D[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def col_swap(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        if V is not None:
            for row in V:
                row[i], row[j] = row[j], row[i]
        if Vi is not None:
            Vi[i], Vi[j] = Vi[j], Vi[i]

    def row_addmul(dst, src, q):
        # row dst += q * row src
        Ds, Dd = D[src], D[dst]
        for k in range(n):
            if Ds[k]:
                Dd[k] += q * Ds[k]
        if U is not None:
            Us, Ud = U[src], U[dst]
            for k in range(m):
                if Us[k]:
                    Ud[k] += q * Us[k]

    def col_addmul(dst, src, q):
        # col dst += q * col src
        for row in D:
            if row[src]:
                row[dst] += q * row[src]
        if V is not None:
            for row in V:
                if row[src]:
                    row[dst] += q * row[src]
        if Vi is not None:
            # inverse: row src of V^-1 -= q * row dst
            a, b = Vi[src], Vi[dst]
            for k in range(n):
                if b[k]:
                    a[k] -= q * b[k]

    def row_neg(i):
        D[i] = [-v for v in D[i]]
        if U is not None:
            U[i] = [-v for v in U[i]]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                Di = D[i]
                for j in range(t, n):
                    v = Di[j]
                    if v and (best is None or abs(v) < best[0]):
                        best = (abs(v), i, j)
                        if best[0] == 1:
                            break
                if best is not None and best[0] == 1:
                    break
            if best is None:
                break
            _, i, j = best
            if i != t:
                row_swap(i, t)
            if j != t:
                col_swap(j, t)
            p = D[t][t]
            done = True
            for i in range(t + 1, m):
                if D[i][t]:
                    q = D[i][t] // p
                    row_addmul(i, t, -q)
                    if D[i][t]:
                        done = False
            for j in range(t + 1, n):
                if D[t][j]:
                    q = D[t][j] // p
                    col_addmul(j, t, -q)
                    if D[t][j]:
                        done = False
            if max_bits is not None:
                for row in D:
                    for v in row:
                        _check_bits(v, max_bits)
            if not done:
                continue
            # divisibility: pull any offending row into row t
            bad = next((i for i in range(t + 1, m)
                        if any(D[i][j] % p for j in range(t + 1, n))), None)
            if bad is None:
                break
            row_addmul(t, bad, 1)
        if t < m and t < n and D[t][t] < 0:
            row_neg(t)
    return U, D, V, Vi


# ---------------------------------------------------------------------------
# sparse quotient of a lattice of relations

@dataclass
class Quotient:
    """Z^n / span(relations) as (torsion factors d_i >= 2, free rank, coordinate map).

    ``coord_values[c]`` is the image of basis vector c in the torsion part,
    a tuple of residues mod ``factors``; ``witnesses[i]`` is a sparse vector
    (dict) whose image is the i-th torsion unit vector and whose free part is 0.
    """
    n: int
    factors: list[int]
    free_rank: int
    coord_values: list[tuple]
    witnesses: list[dict]
    pivots: int = 0
    residual_shape: tuple = (0, 0)


def lattice_quotient(n: int, relations, max_bits=None) -> Quotient:
    """Quotient of Z^n by the span of sparse integer relations.

    Phase 1 eliminates unit pivots greedily (shortest relation first, then
    the coordinate occurring in the fewest relations) to limit fill.  The
    residual block, with no unit entries left, goes through a dense Smith
    form with column transforms tracked.
    """
    rels: dict[int, dict[int, int]] = {}
    col: list[set] = [set() for _ in range(n)]
    for rid, r in enumerate(relations):
        r = {c: v for c, v in r.items() if v}
        if not r:
            continue
        rels[rid] = r
        for c in r:
            col[c].add(rid)

    heap = [(len(r), rid) for rid, r in rels.items() if any(abs(v) == 1 for v in r.values())]
    heapq.heapify(heap)
    pivot_order: list[tuple[int, int, dict]] = []  # (coord, sign, relation without coord)
    eliminated = [False] * n

    while heap:
        length, rid = heapq.heappop(heap)
        r = rels.get(rid)
        if r is None or len(r) != length:
            continue  # stale; a fresh entry was pushed when it changed
        units = [c for c, v in r.items() if abs(v) == 1]
        if not units:
            continue
        c0 = min(units, key=lambda c: (len(col[c]), c))
        s = r[c0]
        del rels[rid]
        for c in r:
            col[c].discard(rid)
        # e_c0 = -s * sum_{c != c0} r[c] e_c  in the quotient
        rest = {c: v for c, v in r.items() if c != c0}
        pivot_order.append((c0, s, rest))
        eliminated[c0] = True
        for other in list(col[c0]):
            ro = rels[other]
            f = ro.pop(c0) * s  # ro -= (ro[c0]/s) * r, with 1/s == s
            col[c0].discard(other)
            for c, v in rest.items():
                nv = ro.get(c, 0) - f * v
                if nv:
                    if c not in ro:
                        col[c].add(other)
                    ro[c] = nv
                    _check_bits(nv, max_bits)
                elif c in ro:
                    del ro[c]
                    col[c].discard(other)
            if not ro:
                del rels[other]
            elif any(abs(v) == 1 for v in ro.values()):
                heapq.heappush(heap, (len(ro), other))

    remaining = [c for c in range(n) if not eliminated[c]]
    pos = {c: i for i, c in enumerate(remaining)}
    q = len(remaining)
    residual = [[0] * q for _ in rels]
    for i, r in enumerate(rels.values()):
        for c, v in r.items():
            residual[i][pos[c]] = v
    if residual:
        _, D, V, Vi = _snf(residual, track_u=False, track_v=True, track_vinv=True,
                           max_bits=max_bits)
        diag = [D[i][i] if i < len(D) else 0 for i in range(q)]
    else:
        V, Vi = identity(q), identity(q)
        diag = [0] * q
    tors = [i for i, d in enumerate(diag) if d >= 2]
    factors = [diag[i] for i in tors]
    rank = sum(1 for d in diag if d)
    free_rank = q - rank

    values: list = [None] * n
    for c in remaining:
        row = V[pos[c]]
        values[c] = tuple(row[i] % d for i, d in zip(tors, factors))
    zero = tuple(0 for _ in factors)
    for c0, s, rest in reversed(pivot_order):
        acc = [0] * len(factors)
        for c, v in rest.items():
            val = values[c]
            for k in range(len(factors)):
                acc[k] -= s * v * val[k]
        values[c0] = tuple(a % d for a, d in zip(acc, factors)) if factors else zero
    witnesses = []
    for i in tors:
        witnesses.append({remaining[j]: Vi[i][j] for j in range(q) if Vi[i][j]})
    return Quotient(n, factors, free_rank, values, witnesses,
                    pivots=len(pivot_order), residual_shape=(len(residual), q))
