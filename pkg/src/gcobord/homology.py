"""Second integral homology of a finite group from the normalized bar complex.

This is the brute-force oracle every constructive classifier is checked
against.  Chains are dicts keyed by tuples of non-identity element indices;
any tuple containing the identity (index 0) is zero.

The boundary of 3-chains is restricted to the triples ``[a|b|s]`` with ``s``
in a generating set.  These span the image of d3: since d3 d4 = 0,
``d3[g1|g2|h*s]`` is a combination of ``d3[g2|h|s]``, ``d3[g1*g2|h|s]``,
``d3[g1|g2*h|s]`` and ``d3[g1|g2|h]``, and induction on the word length of
the last entry finishes.  ``full=True`` uses every triple instead.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field

from .groups import GroupTable, SubgroupEmbedding, generating_set, invariant_factors_from_elementary
from .snf import lattice_quotient

DEFAULT_ORACLE_BOUND = 60


class OracleBoundError(ValueError):
    """Group too large for the bar-complex oracle."""


class NotACycleError(ValueError):
    pass


class NotInZError(ValueError):
    """Word whose commutator product is not the identity."""


@dataclass(frozen=True)
class MultiplierClass:
    coords: tuple
    factors: tuple

    def __post_init__(self):
        if len(self.coords) != len(self.factors):
            raise ValueError("coordinate count does not match the invariant factors")
        object.__setattr__(self, "coords", tuple(int(c) % d for c, d in zip(self.coords, self.factors)))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __add__(self, other):
        if self.factors != other.factors:
            raise ValueError("classes live in different groups")
        return MultiplierClass(tuple(a + b for a, b in zip(self.coords, other.coords)), self.factors)

    def __mul__(self, k: int):
        return MultiplierClass(tuple(k * a for a in self.coords), self.factors)

    __rmul__ = __mul__

    def __str__(self):
        if not self.factors:
            return "0"
        return " ".join(str(c) for c in self.coords)


def format_factors(factors) -> str:
    return " x ".join(f"Z/{d}" for d in factors) if factors else "trivial"


# ---------------------------------------------------------------------------
# chains

def d2(G: GroupTable, chain: dict) -> dict:
    """``d[g1|g2] = [g2] - [g1 g2] + [g1]``."""
    T = G.table
    out = defaultdict(int)
    for (a, b), v in chain.items():
        out[b] += v
        out[T[a][b]] -= v
        out[a] += v
    out.pop(0, None)
    return {k: v for k, v in out.items() if v}


def d3_of(T, a: int, b: int, c: int) -> dict:
    """``d[g1|g2|g3] = [g2|g3] - [g1g2|g3] + [g1|g2g3] - [g1|g2]`` (normalized)."""
    out = defaultdict(int)
    ab, bc = T[a][b], T[b][c]
    out[(b, c)] += 1
    if ab:
        out[(ab, c)] -= 1
    if bc:
        out[(a, bc)] += 1
    out[(a, b)] -= 1
    return {k: v for k, v in out.items() if v}


def is_cycle(G: GroupTable, chain: dict) -> bool:
    return not d2(G, chain)


def add_chain(acc: dict, chain: dict, k: int = 1) -> dict:
    for key, v in chain.items():
        nv = acc.get(key, 0) + k * v
        if nv:
            acc[key] = nv
        else:
            acc.pop(key, None)
    return acc


def clean(chain: dict) -> dict:
    return {k: v for k, v in chain.items() if v and 0 not in k}


# ---------------------------------------------------------------------------
# the multiplier structure

@dataclass(eq=False)
class MultiplierStructure:
    group: GroupTable
    invariant_factors: tuple
    gen_values: list            # gen_values[g][h] = torsion coords of [g|h]
    witness_cycles: list
    method: str = "bar"
    stats: dict = field(default_factory=dict)

    def zero(self) -> MultiplierClass:
        return MultiplierClass(tuple(0 for _ in self.invariant_factors), self.invariant_factors)

    def project(self, chain: dict, check: bool = True) -> MultiplierClass:
        """Class of a 2-cycle; boundaries project to zero."""
        if check and not is_cycle(self.group, chain):
            raise NotACycleError("chain is not a 2-cycle")
        r = len(self.invariant_factors)
        acc = [0] * r
        gv = self.gen_values
        for (a, b), v in chain.items():
            if a == 0 or b == 0:
                continue
            val = gv[a][b]
            for k in range(r):
                acc[k] += v * val[k]
        return MultiplierClass(tuple(acc), self.invariant_factors)

    def class_of_word(self, w) -> MultiplierClass:
        return self.project(surface_cycle(self.group, w), check=False)

    def __str__(self):
        return format_factors(self.invariant_factors)


def bar_h2(G: GroupTable, oracle_bound: int = DEFAULT_ORACLE_BOUND, full: bool = False) -> MultiplierStructure:
    """H2(G, Z) as invariant factors plus a projector from 2-cycles."""
    if G.order > oracle_bound:
        raise OracleBoundError(f"|G| = {G.order} exceeds the oracle bound {oracle_bound}")
    if full:
        return _bar_h2(G, True)
    return _bar_h2_cached(G)


_CACHE: dict = {}


def _bar_h2_cached(G):
    # keyed by identity of the (immutable) table
    hit = _CACHE.get(id(G))
    if hit is not None and hit[0] is G:
        return hit[1]
    S = _bar_h2(G, False)
    _CACHE[id(G)] = (G, S)
    return S


def _bar_h2(G: GroupTable, full: bool) -> MultiplierStructure:
    n = G.order
    T = G.table
    m = n - 1

    def idx(a, b):
        return (a - 1) * m + (b - 1)

    lasts = range(1, n) if full else generating_set(G)
    relations = []
    for a in range(1, n):
        for b in range(1, n):
            for c in lasts:
                rel = d3_of(T, a, b, c)
                if rel:
                    relations.append({idx(x, y): v for (x, y), v in rel.items()})
    q = lattice_quotient(m * m, relations)
    factors_raw = q.factors
    # canonical invariant factors; the projector already uses q's factors
    if factors_raw != sorted(factors_raw) or any(factors_raw[i + 1] % factors_raw[i]
                                                  for i in range(len(factors_raw) - 1)):
        raise AssertionError(f"Smith form factors out of order: {factors_raw}")
    gen_values = [[()] * n for _ in range(n)]
    for a in range(1, n):
        for b in range(1, n):
            gen_values[a][b] = q.coord_values[idx(a, b)]
    witnesses = [{(c // m + 1, c % m + 1): v for c, v in w.items()} for w in q.witnesses]
    stats = {"relations": len(relations), "pivots": q.pivots, "residual": q.residual_shape,
             "free_rank": q.free_rank, "full": full}
    return MultiplierStructure(G, tuple(factors_raw), gen_values, witnesses, "bar", stats)


# ---------------------------------------------------------------------------
# surface words as cycles

def relator_letters(G: GroupTable, w) -> list[tuple[int, int]]:
    """Letters (s, eps) of the free-group relator spelled by a pair word.

    ``<x,y>`` spells ``x y x^-1 y^-1`` and ``<x,y>^-1`` spells
    ``y x y^-1 x^-1``; the inverse letters are formal inverses of generators.
    """
    out = []
    for x, y, e in _letters(w):
        if e == 1:
            out += [(x, 1), (y, 1), (x, -1), (y, -1)]
        else:
            out += [(y, 1), (x, 1), (y, -1), (x, -1)]
    return out


def _letters(w):
    return w.letters if hasattr(w, "letters") else w


def surface_cycle(G: GroupTable, w) -> dict:
    """Bar 2-cycle of a word in Z(G).

    Prefix sums ``sum_j [p_{j-1} | g_j]`` over the spelled-out relator with
    letters x, y, x^-1, y^-1 as group elements, minus one ``[x | x^-1]`` per
    inverse pair of letters.
    """
    chain: dict = {}
    T = G.table if G.order <= 3000 else None
    inv = G.inverses

    def mul(a, b):
        return T[a][b] if T is not None else int(G.mul[a, b])

    p = 0
    for x, y, e in _letters(w):
        seq = (x, y, inv[x], inv[y]) if e == 1 else (y, x, inv[y], inv[x])
        for g in seq:
            if p and g:
                chain[(p, g)] = chain.get((p, g), 0) + 1
            p = mul(p, g)
        for g in (x, y):
            if g:
                key = (g, inv[g])
                chain[key] = chain.get(key, 0) - 1
    if p != 0:
        raise NotInZError(f"commutator product is {G.render(p)}, not the identity")
    return {k: v for k, v in chain.items() if v}


def class_of(G: GroupTable, w, oracle_bound: int = DEFAULT_ORACLE_BOUND) -> MultiplierClass:
    S = bar_h2(G, oracle_bound)
    return S.project(surface_cycle(G, w), check=False)


# ---------------------------------------------------------------------------
# restriction (transfer) and corestriction

def restriction_transfer(emb: SubgroupEmbedding, z: dict, check: bool = True) -> dict:
    """Chain-level transfer of a 2-cycle over G to a 2-cycle over H."""
    G = emb.amb
    if check and G.order <= 3000 and not is_cycle(G, z):
        raise NotACycleError("transfer input is not a cycle")
    reps, coset_of, h_part = emb.right_cosets
    mul = G.mul
    k = len(reps)
    # r_i g = h_i(g) r_sigma(i)
    cache: dict = {}

    def step(i, g):
        key = (i, g)
        hit = cache.get(key)
        if hit is None:
            x = int(mul[reps[i], g])
            hit = (h_part[x], coset_of[x])
            cache[key] = hit
        return hit

    out: dict = {}
    for (g1, g2), v in z.items():
        if g1 == 0 or g2 == 0:
            continue
        for i in range(k):
            h1, j = step(i, g1)
            h2, _ = step(j, g2)
            if h1 and h2:
                key = (h1, h2)
                nv = out.get(key, 0) + v
                if nv:
                    out[key] = nv
                else:
                    del out[key]
    if check and emb.sub.order <= 3000 and not is_cycle(emb.sub, out):
        raise AssertionError("transfer produced a non-cycle")
    return out


def corestriction(emb: SubgroupEmbedding, z: dict, check: bool = True) -> dict:
    """Push a 2-cycle over H forward along the inclusion."""
    if check and not is_cycle(emb.sub, z):
        raise NotACycleError("corestriction input is not a cycle")
    e = emb.embed
    out: dict = {}
    for (h1, h2), v in z.items():
        if h1 and h2:
            key = (e[h1], e[h2])
            out[key] = out.get(key, 0) + v
    return {k: v for k, v in out.items() if v}


# ---------------------------------------------------------------------------
# abelian fast path

@dataclass(eq=False)
class ExteriorSquare:
    """Exterior square of ``Z/d_1 + ... + Z/d_k``: summands Z/gcd(d_i, d_j), i < j."""
    factors: tuple
    summands: tuple              # ((i, j, gcd), ...) with gcd >= 2

    @property
    def orders(self) -> tuple:
        return tuple(g for _, _, g in self.summands)

    @property
    def invariant_factors(self) -> tuple:
        return invariant_factors_from_elementary(self.orders)

    def pairing(self, x, y) -> MultiplierClass:
        """Class of ``<x, y>`` for residue vectors x, y."""
        coords = tuple(x[i] * y[j] - x[j] * y[i] for i, j, _ in self.summands)
        return MultiplierClass(coords, self.orders)

    def zero(self) -> MultiplierClass:
        return MultiplierClass(tuple(0 for _ in self.summands), self.orders)


def exterior_square(factors) -> ExteriorSquare:
    factors = tuple(int(d) for d in factors)
    if any(d < 1 for d in factors):
        raise ValueError("cyclic orders must be positive")
    summands = tuple((i, j, math.gcd(factors[i], factors[j]))
                     for i in range(len(factors)) for j in range(i + 1, len(factors))
                     if math.gcd(factors[i], factors[j]) >= 2)
    return ExteriorSquare(factors, summands)
