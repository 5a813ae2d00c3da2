"""Classifiers for words in Z(G), all checkable against the bar-complex oracle.

Each classifier returns a :class:`ClassificationResult` whose ``cls`` is in
the method's own coordinates:

* ``abelian``: one coordinate per summand Z/gcd(d_i, d_j) of the exterior square
* ``dihedral`` and ``symmetric``: the coefficient of the standard generator
* ``sylow``: the image in the direct sum of the Sylow multipliers
* ``oracle``: the bar-complex invariant factors

Where possible a ``representative`` word in normal form is attached, so that
results from different methods can be compared through any evaluator.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .groups import (GroupTable, abelian_invariants, build_group, commutator, commutator_product,
                     invariant_factors_from_elementary, invariants_from_orders, isomorphism,
                     sylow_subgroup)
from .homology import (DEFAULT_ORACLE_BOUND, MultiplierClass, NotInZError, OracleBoundError,
                       bar_h2, corestriction, exterior_square, restriction_transfer,
                       surface_cycle)
from .pairword import PairWord, Rewriter, RewriteTrace

METHODS = ("abelian", "dihedral", "symmetric", "sylow", "oracle")


class NotApplicableError(ValueError):
    """The requested classifier does not handle this group."""


class MethodDisagreement(AssertionError):
    pass


@dataclass
class ClassificationResult:
    cls: MultiplierClass
    method: str
    trace: RewriteTrace | None = None
    representative: PairWord | None = None
    sylow_components: dict | None = None
    details: dict = field(default_factory=dict)

    def describe(self) -> str:
        text = str(self.cls)
        if self.method in ("dihedral", "symmetric") and self.cls.coords == (1,):
            text += " (generator)"
        return text


def _require_z(w: PairWord) -> None:
    c = commutator_product(w.group, w)
    if c:
        raise NotInZError(f"commutator product is {w.group.render(c)}, not the identity")


def _plain(G: GroupTable, notation: str) -> bool:
    return G.notation == notation and not G.meta.get("subgroup")


def is_dihedral(G: GroupTable) -> bool:
    return _plain(G, "dihedral")


def is_symmetric(G: GroupTable) -> bool:
    return _plain(G, "permutation") and not G.meta.get("alternating")


def is_permutation(G: GroupTable) -> bool:
    return _plain(G, "permutation")


# ---------------------------------------------------------------------------
# abelian

def _abelian_coordinates(G: GroupTable):
    """(factors, vector of element g) for an abelian table, plus the unit-vector elements."""
    if _plain(G, "abelian-vector"):
        factors = tuple(G.meta["factors"])
        vec = lambda g: G.elements[g]
        units = [G.index_of(tuple(int(i == j) for j in range(len(factors)))) for i in range(len(factors))]
        return factors, vec, units
    factors = abelian_invariants(G)
    if not factors:
        return (), (lambda g: ()), []
    H = build_group("x".join(f"Z{d}" for d in factors))
    phi = isomorphism(G, H)
    if phi is None:  # pragma: no cover - abelian groups with equal invariants are isomorphic
        raise AssertionError("no isomorphism to the invariant-factor model")
    back = {h: g for g, h in enumerate(phi)}
    units = [back[H.index_of(tuple(int(i == j) for j in range(len(factors))))] for i in range(len(factors))]
    return factors, (lambda g: H.elements[phi[g]]), units


def classify_abelian(w: PairWord) -> ClassificationResult:
    G = w.group
    if not G.is_abelian():
        raise NotApplicableError(f"{G.spec} is not abelian")
    factors, vec, units = _abelian_coordinates(G)
    E = exterior_square(factors)
    acc = E.zero()
    for x, y, e in w.letters:
        acc = acc + E.pairing(vec(x), vec(y)) * e
    rep = []
    for (i, j, _), c in zip(E.summands, acc.coords):
        rep += [(units[i], units[j], 1)] * c
    return ClassificationResult(acc, "abelian", representative=PairWord(G, tuple(rep)),
                                details={"factors": factors, "summands": E.summands})


# ---------------------------------------------------------------------------
# dihedral

def dihedral_exponent(G: GroupTable, x: int, y: int) -> int:
    """Exponent of <c,a> assigned to the pair <x, y> (elements a^e c^j at e*n + j)."""
    n = G.meta["n"]
    (ex, i), (ey, j) = divmod(x, n), divmod(y, n)
    if not ex and not ey:
        return 0
    if not ex:
        return i
    if not ey:
        return -j
    return j - i


def classify_dihedral(w: PairWord) -> ClassificationResult:
    G = w.group
    if not is_dihedral(G):
        raise NotApplicableError(f"{G.spec} is not a dihedral table")
    _require_z(w)
    n = G.meta["n"]
    m = sum(e * dihedral_exponent(G, x, y) for x, y, e in w.letters)
    rw = Rewriter(w)
    t = _dihedral_reduce(rw, n)
    if n % 2:
        cls = MultiplierClass((), ())
        if t:
            raise AssertionError("odd dihedral reduction left a generator")
    else:
        k = n // 2
        if m % k:
            raise AssertionError(f"exponent sum {m} not divisible by {k}")
        cls = MultiplierClass(((m // k) % 2,), (2,))
        if t != cls.coords[0]:
            raise AssertionError("rewrite reduction and exponent arithmetic disagree")
    rep = dihedral_generator(G) if cls.coords == (1,) else PairWord(G, ())
    if rw.word != rep:
        raise AssertionError("dihedral reduction did not reach normal form")
    return ClassificationResult(cls, "dihedral", trace=rw.trace, representative=rep,
                                details={"exponent_sum": m, "n": n})


def dihedral_generator(G: GroupTable) -> PairWord:
    """<c^k, a> for D_{4k}; the empty word when n is odd."""
    n = G.meta["n"]
    if n % 2:
        return PairWord(G, ())
    return PairWord(G, ((n // 2, n, 1),))


def _dihedral_reduce(rw: Rewriter, n: int) -> int:
    """Rewrite an element of Z(D_2n) to <c^k,a> (returns 1) or the empty word (returns 0)."""
    c1 = 1 if n > 1 else None
    # 1. every letter becomes a run of <c,a>^{+-1}
    p = 0
    while p < len(rw.word):
        x, y, _ = rw.word.letters[p]
        if (x, y) == (c1, n):
            p += 1
        else:
            p = _dihedral_letter(rw, p, n)
    # 2. free cancellation of the run
    _free_reduce(rw)
    # 3. bring the exponent into [0, n) and then to 0 or k
    L = rw.word.letters
    s = sum(e for *_, e in L)
    while s < 0:
        _insert_ca_power(rw, len(rw.word), n)
        _free_reduce(rw)
        s += n
    while s >= n:
        _merge_ca_run(rw, 0, n)
        rw.apply("R11", 0)
        s -= n
    if s == 0:
        return 0
    if n % 2 or s != n // 2:
        raise AssertionError(f"residual exponent {s} is not n/2 for n={n}")
    _merge_ca_run(rw, 0, s)
    return 1


def _dihedral_letter(rw: Rewriter, p: int, n: int) -> int:
    """Rewrite the letter at p into <c,a>^{+-1} letters; returns the position after them."""
    x, y, e = rw.word.letters[p]
    if x == y:
        rw.apply("R1", p)
        return p
    ex, i = divmod(x, n)
    ey, j = divmod(y, n)
    if not ex and not ey:
        rw.apply("R11", p)
        return p
    if ex and not ey:
        rw.apply("R2", p)
        return p
    if ex and ey:
        # <a c^i, a c^j> -> <c^(j-i), a c^j> <a c^j, a c^j>, then drop the second
        rw.apply("R3", p, (y,))
        rw.apply("R1", p + 1 if e == 1 else p)
        return p
    # <c^i, a c^j> -> <c^i, a> <c^-i, c^-j>, then drop the second
    if j:
        rw.apply("R5", p, (n,))
        rw.apply("R11", p + 1 if e == 1 else p)
    if i == 0:
        rw.apply("R11", p)
        return p
    if i == 1 % n:
        return p + 1
    # peel: <c^i, a> -> <c^(i-1), a c^-2> <c, a>
    rw.apply("R3", p, (1,))
    q = p if e == 1 else p + 1   # position of <c^(i-1), a c^-2>
    _dihedral_letter(rw, q, n)
    return p


def _free_reduce(rw: Rewriter) -> None:
    changed = True
    while changed:
        changed = False
        L = rw.word.letters
        for p in range(len(L) - 1):
            if L[p][:2] == L[p + 1][:2] and L[p][2] == -L[p + 1][2]:
                rw.free(p)
                changed = True
                break


def _insert_ca_power(rw: Rewriter, p: int, n: int) -> None:
    """Insert <c,a>^n at p, starting from <1,a> ~ 1."""
    rw.apply("R11", p, (n, 0, 1, 1), "backward")   # <a^0, a^1>
    if n == 1:
        return
    # <c^n, a> = <1, a>: peel like any other <c^i, a>
    for i in range(n, 1, -1):
        rw.apply("R3", p, (1,))               # <c^(i-1), a c^-2> <c, a>
        if (-2) % n:
            rw.apply("R5", p, (n,))           # <c^(i-1), a> <c^(1-i), c^2>
            rw.apply("R11", p + 1)
    # the last letter is <c, a>; positions p .. p+n-1 now hold <c,a>^n


def _merge_ca_run(rw: Rewriter, p: int, k: int) -> None:
    """Replace the run <c,a>^k at p by the single letter <c^k, a>."""
    n = rw.word.group.meta["n"]
    for i in range(2, k + 1):
        # <c^(i-1), a> <c, a> -> <c^i, a>
        if (-2) % n:
            rw.apply("R11", p + 1, (1, (1 - i) % n, 2 % n, 1), "backward")
            rw.apply("R5", p, (), "backward")
        rw.apply("R3", p, (), "backward")


# ---------------------------------------------------------------------------
# symmetric

def _perm(G, g):
    return G.elements[g]


def _moves(G, g, k) -> bool:
    return _perm(G, g)[k] != k


def _support(G, w) -> set:
    pts = set()
    for x, y, _ in w.letters:
        for g in (x, y):
            pts.update(i for i, v in enumerate(_perm(G, g)) if v != i)
    return pts


def _transposition(G, a, b):
    p = list(range(G.meta["n"]))
    p[a], p[b] = p[b], p[a]
    return G.index_of(tuple(p))


def _first_transposition(G, g):
    """A transposition t with g = t * (t g) and t g having fewer inversions of cycles."""
    p = _perm(G, g)
    i = next(i for i, v in enumerate(p) if v != i)
    return _transposition(G, i, p[i])


def _is_transposition(G, g):
    return sum(1 for i, v in enumerate(_perm(G, g)) if v != i) == 2


def symmetric_generator(G: GroupTable) -> PairWord:
    """u = <(1,2),(3,4)> for n >= 4; the empty word otherwise."""
    if G.meta["n"] < 4:
        return PairWord(G, ())
    return PairWord(G, ((_transposition(G, 0, 1), _transposition(G, 2, 3), 1),))


def sort_by_fixed_point(w: PairWord, k: int, rw: Rewriter | None = None):
    """Move every letter whose entries both fix point k (1-based) to the front.

    Uses only commuting shifts; the moved-past letters are conjugated by
    elements fixing k, so the prefix has exactly as many letters as the
    input had letters fixing k.  Returns (prefix, suffix, trace).
    """
    G = w.group
    if not _plain(G, "permutation"):
        raise NotApplicableError(f"{G.spec} is not a permutation table")
    n = G.meta["n"]
    if not 1 <= k <= n:
        raise ValueError(f"point {k} outside 1..{n}")
    if any(e != 1 for *_, e in w.letters):
        raise ValueError("sort_by_fixed_point needs positive exponents")
    pt = k - 1
    rw = rw or Rewriter(w)
    front = 0
    fixes = [not _moves(G, x, pt) and not _moves(G, y, pt) for x, y, _ in rw.word.letters]
    for p in range(len(fixes)):
        if not fixes[p]:
            continue
        q = p
        while q > front:
            rw.shift(q - 1)
            fixes[q - 1], fixes[q] = fixes[q], fixes[q - 1]
            q -= 1
        front += 1
    word = rw.word
    return (PairWord(G, word.letters[:front]), PairWord(G, word.letters[front:]), rw.trace)


def _normalize_symmetric(rw: Rewriter) -> int:
    """Expand to transposition pairs, turn disjoint pairs into u and collect u^r at the front.

    Returns r mod 2 after cancelling pairs of u's.
    """
    G = rw.word.group
    n = G.meta["n"]
    u0, u1 = (_transposition(G, 0, 1), _transposition(G, 2, 3)) if n >= 4 else (None, None)
    p = 0
    while p < len(rw.word):
        x, y, e = rw.word.letters[p]
        if e == -1:
            rw.apply("R2", p)
            continue
        if x == y:
            rw.apply("R1", p)
            continue
        if x == 0 or y == 0:
            rw.apply("R11", p)
            continue
        if not _is_transposition(G, x):
            rw.apply("R3", p, (_first_transposition(G, x),))
            continue
        if not _is_transposition(G, y):
            rw.apply("R5", p, (_first_transposition(G, y),))
            continue
        if not commutator(G, x, y):
            # disjoint transpositions: conjugate to u
            if (x, y) != (u0, u1):
                a, b = [i for i, v in enumerate(_perm(G, x)) if v != i]
                c, d = [i for i, v in enumerate(_perm(G, y)) if v != i]
                rw.apply("R4", p, (_mapping(G, (a, b, c, d)),))
                rw.apply("R11", p)
                continue
        p += 1
    if n < 4:
        return 0
    # move u letters to the front
    front = 0
    for p in range(len(rw.word)):
        if rw.word.letters[p][:2] == (u0, u1):
            q = p
            while q > front:
                rw.shift(q - 1)      # conjugation by [u1, u0] = 1
                q -= 1
            front += 1
    # cancel u u
    swap = _mapping(G, (2, 3, 0, 1))
    while front >= 2:
        rw.apply("R2", 1)                  # <(3,4),(1,2)>^-1
        rw.apply("R4", 1, (swap,))         # <u>^-1 <x,1>^-1
        rw.apply("R11", 2)
        rw.free(0)
        front -= 2
    return front


def _mapping(G, images):
    """A permutation sending 0,1,2,.. to the given images (rest filled in order)."""
    n = G.meta["n"]
    p = list(images)
    rest = [i for i in range(n) if i not in p]
    p += rest
    return G.index_of(tuple(p))


def _three_cycle_word(G, g):
    """Letters <t, t'> of overlapping transpositions whose commutators multiply to g (even)."""
    # g as a product of transpositions, then pairs of transpositions as 3-cycles
    ts = []
    h = g
    while h:
        t = _first_transposition(G, h)
        ts.append(t)
        h = G.m(t, h)
    if len(ts) % 2:
        raise AssertionError("odd permutation in the commutator subgroup")
    cycles = []
    for t1, t2 in zip(ts[::2], ts[1::2]):
        if t1 == t2:
            continue
        prod = G.m(t1, t2)
        if commutator(G, t1, t2):
            cycles.append(prod)
        else:
            a, b = [i for i, v in enumerate(_perm(G, t1)) if v != i]
            c, _ = [i for i, v in enumerate(_perm(G, t2)) if v != i]
            s = _transposition(G, b, c)
            cycles += [G.m(t1, s), G.m(s, t2)]
    letters = [_three_cycle_pair(G, rho) for rho in cycles]
    if commutator_product(G, letters) != g:
        raise AssertionError("3-cycle decomposition failed")
    return tuple(letters)


def _three_cycle_pair(G, rho):
    """Overlapping transpositions (t, t', +1) with [t, t'] = rho."""
    pts = [i for i, v in enumerate(_perm(G, rho)) if v != i]
    for a in pts:
        for b in pts:
            for c in pts:
                if len({a, b, c}) == 3:
                    t, t2 = _transposition(G, a, b), _transposition(G, a, c)
                    if commutator(G, t, t2) == rho:
                        return (t, t2, 1)
    raise AssertionError("not a 3-cycle")


@dataclass
class _SymContext:
    G: GroupTable
    base_bound: int
    oracle_bound: int
    path: list = field(default_factory=list)
    traces: list = field(default_factory=list)


def classify_symmetric(w: PairWord, base_bound: int = 3,
                       oracle_bound: int = DEFAULT_ORACLE_BOUND) -> ClassificationResult:
    """Reduce w to u^k by rewriting, recursing on a sorted split where possible.

    Words whose support has at most ``base_bound`` points, and recursion
    steps that make no progress, are settled by the oracle or by Sylow
    transfer; ``details["path"]`` records how every subword was decided.
    """
    G = w.group
    if not is_symmetric(G):
        raise NotApplicableError(f"{G.spec} is not a symmetric group table")
    _require_z(w)
    n = G.meta["n"]
    ctx = _SymContext(G, max(3, base_bound), oracle_bound)
    rw = Rewriter(w)
    k = _sym_class(ctx, rw, depth=0)
    cls = MultiplierClass((k,), (2,)) if n >= 4 else MultiplierClass((), ())
    rep = symmetric_generator(G) if k else PairWord(G, ())
    constructive = all(node["how"] in ("rewrite", "support<=3") for node in ctx.path)
    return ClassificationResult(cls, "symmetric", trace=rw.trace, representative=rep,
                                details={"path": ctx.path, "subtraces": ctx.traces,
                                         "constructive": constructive})


def _sym_class(ctx: _SymContext, rw: Rewriter, depth: int) -> int:
    G = ctx.G
    r = _normalize_symmetric(rw)
    rest = PairWord(G, rw.word.letters[r:])
    node = {"depth": depth, "word": rest.digest(), "length": len(rest), "u": r}
    ctx.path.append(node)
    if not rest.letters:
        node["how"] = "rewrite"
        return r
    P = _support(G, rest)
    node["support"] = len(P)
    if len(P) <= 3:
        node["how"] = "support<=3"
        return r
    if len(P) <= ctx.base_bound:
        node["how"] = "base"
        return (r + _base_class(ctx, rest)) % 2
    # split at the point fixed by the most letters
    counts = {x: sum(1 for a, b, _ in rest.letters if not _moves(G, a, x) and not _moves(G, b, x))
              for x in sorted(P)}
    chosen = None
    for x in sorted(P, key=lambda q: (-counts[q], q)):
        t = counts[x]
        if t == 0:
            break
        sub = Rewriter(rest)
        A, B, _ = sort_by_fixed_point(rest, x + 1, sub)
        C = _three_cycle_word(G, commutator_product(G, A))
        if len(C) < t:
            chosen = (x, sub, A, B, C)
            break
    if chosen is None:
        node["how"] = "stall:base"
        return (r + _base_class(ctx, rest)) % 2
    x, sub, A, B, C = chosen
    ctx.traces.append(sub.trace)
    node["how"] = "split"
    node["point"] = x + 1
    left = Rewriter(A + PairWord(G, C).inverse())
    right = Rewriter(PairWord(G, C) + B)
    kl = _sym_class(ctx, left, depth + 1)
    kr = _sym_class(ctx, right, depth + 1)
    ctx.traces += [left.trace, right.trace]
    return (r + kl + kr) % 2


def _base_class(ctx: _SymContext, w: PairWord) -> int:
    """0/1 coefficient of u for a word over S_n (n >= 4), by oracle or Sylow transfer."""
    G = ctx.G
    u = symmetric_generator(G)
    if G.order <= ctx.oracle_bound:
        S = bar_h2(G, ctx.oracle_bound)
        c, cu = S.class_of_word(w), S.class_of_word(u)
        if c.is_zero():
            return 0
        if c == cu:
            return 1
        raise AssertionError("class is neither 0 nor u")
    img = sylow_image_of_word(w, ctx.oracle_bound)
    img_u = sylow_image_of_word(u, ctx.oracle_bound)
    if all(v.is_zero() for v in img.values()):
        return 0
    if img == img_u:
        return 1
    raise AssertionError("Sylow image is neither 0 nor that of u")


# ---------------------------------------------------------------------------
# Sylow transfer

_SYLOW_CACHE: dict = {}


def sylow_data(G: GroupTable, oracle_bound: int = DEFAULT_ORACLE_BOUND, start: int = 0) -> dict:
    """{p: (embedding, multiplier of the Sylow subgroup)} for every prime p dividing |G|."""
    key = (id(G), oracle_bound, start)
    hit = _SYLOW_CACHE.get(key)
    if hit is not None and hit[0] is G:
        return hit[1]
    out = {}
    for p in _primes(G.order):
        emb = sylow_subgroup(G, p, start)
        if emb.sub.order > oracle_bound:
            raise OracleBoundError(f"Sylow {p}-subgroup of {G.spec} has order {emb.sub.order} "
                                   f"> oracle bound {oracle_bound}")
        out[p] = (emb, bar_h2(emb.sub, oracle_bound))
    _SYLOW_CACHE[key] = (G, out)
    return out


def _primes(n: int) -> list[int]:
    out, p = [], 2
    while n > 1:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    return out


def sylow_image_of_cycle(G: GroupTable, z: dict, oracle_bound: int = DEFAULT_ORACLE_BOUND,
                         start: int = 0) -> dict:
    out = {}
    for p, (emb, S) in sylow_data(G, oracle_bound, start).items():
        if not S.invariant_factors:
            out[p] = S.zero()
            continue
        out[p] = S.project(restriction_transfer(emb, z, check=False), check=False)
    return out


def sylow_image_of_word(w: PairWord, oracle_bound: int = DEFAULT_ORACLE_BOUND, start: int = 0) -> dict:
    return sylow_image_of_cycle(w.group, surface_cycle(w.group, w), oracle_bound, start)


def classify_via_sylow(w: PairWord, oracle_bound: int = DEFAULT_ORACLE_BOUND,
                       start: int = 0) -> ClassificationResult:
    """Per-prime components: oracle classes of the transferred cycle in each Sylow multiplier."""
    _require_z(w)
    comps = sylow_image_of_word(w, oracle_bound, start)
    coords, factors = [], []
    for p in sorted(comps):
        coords += comps[p].coords
        factors += comps[p].factors
    data = sylow_data(w.group, oracle_bound, start)
    return ClassificationResult(MultiplierClass(tuple(coords), tuple(factors)), "sylow",
                                sylow_components=comps,
                                details={"sylow_orders": {p: d[0].sub.order for p, d in data.items()}})


def classify_oracle(w: PairWord, oracle_bound: int = DEFAULT_ORACLE_BOUND) -> ClassificationResult:
    _require_z(w)
    S = bar_h2(w.group, oracle_bound)
    return ClassificationResult(S.class_of_word(w), "oracle", details={"factors": S.invariant_factors})


# ---------------------------------------------------------------------------
# dispatcher

def applicable_methods(G: GroupTable, oracle_bound: int = DEFAULT_ORACLE_BOUND) -> list[str]:
    out = []
    if G.is_abelian():
        out.append("abelian")
    if is_dihedral(G):
        out.append("dihedral")
    if is_symmetric(G):
        out.append("symmetric")
    try:
        sylow_data(G, oracle_bound)
        out.append("sylow")
    except OracleBoundError:
        pass
    if G.order <= oracle_bound:
        out.append("oracle")
    return out


def run_method(w: PairWord, method: str, oracle_bound: int = DEFAULT_ORACLE_BOUND) -> ClassificationResult:
    if method == "abelian":
        return classify_abelian(w)
    if method == "dihedral":
        return classify_dihedral(w)
    if method == "symmetric":
        return classify_symmetric(w, oracle_bound=oracle_bound)
    if method == "sylow":
        return classify_via_sylow(w, oracle_bound)
    if method == "oracle":
        return classify_oracle(w, oracle_bound)
    raise ValueError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")


def sylow_image(result: ClassificationResult, G: GroupTable,
                oracle_bound: int = DEFAULT_ORACLE_BOUND) -> dict:
    """Image of a result's class in the Sylow multipliers, for comparing methods."""
    if result.sylow_components is not None:
        return result.sylow_components
    if result.representative is not None:
        return sylow_image_of_word(result.representative, oracle_bound)
    S = bar_h2(G, oracle_bound)
    data = sylow_data(G, oracle_bound)
    out = {}
    for p, (_, SP) in data.items():
        acc = SP.zero()
        for c, wit in zip(result.cls.coords, S.witness_cycles):
            if c:
                acc = acc + sylow_image_of_cycle(G, wit, oracle_bound)[p] * c
        out[p] = acc
    return out


def classify(w: PairWord, method: str | None = None, test_mode: bool = False,
             oracle_bound: int = DEFAULT_ORACLE_BOUND) -> ClassificationResult:
    """Classify with the most specific method (or ``method``).

    In test mode every applicable method runs and their classes are compared
    through the Sylow images (injective on the multiplier).
    """
    _require_z(w)
    G = w.group
    avail = applicable_methods(G, oracle_bound)
    if method is None:
        if not avail:
            raise NotApplicableError(f"no classifier handles {G.spec} within oracle bound {oracle_bound}")
        method = avail[0]
    elif method not in avail:
        raise NotApplicableError(f"method {method!r} does not apply to {G.spec}")
    result = run_method(w, method, oracle_bound)
    if test_mode:
        ref = sylow_image(result, G, oracle_bound) if "sylow" in avail else None
        others = {}
        for m in avail:
            if m == method:
                continue
            r = run_method(w, m, oracle_bound)
            others[m] = str(r.cls)
            if ref is not None and sylow_image(r, G, oracle_bound) != ref:
                raise MethodDisagreement(f"{method} and {m} disagree on {w.render()}")
        result.details["checked_against"] = others
    return result


# ---------------------------------------------------------------------------
# multiplier structure from Sylow subgroups

def _span(vectors, factors) -> list[tuple]:
    """All elements of the subgroup of prod Z/d_i generated by ``vectors``."""
    zero = tuple(0 for _ in factors)
    seen = {zero}
    frontier = [zero]
    gens = [tuple(v) for v in vectors if any(v)]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = tuple((x + y) % d for x, y, d in zip(a, g, factors))
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
        frontier = nxt
    return sorted(seen)


def _vector_order(v, factors) -> int:
    o = 1
    for x, d in zip(v, factors):
        if x:
            o = o * (d // math.gcd(d, x)) // math.gcd(o, d // math.gcd(d, x))
    return o


def sylow_multiplier(G: GroupTable, oracle_bound: int = DEFAULT_ORACLE_BOUND) -> dict:
    """p-parts of M(G) as images of res o cor in M(Syl_p).

    res o cor (M(P)) lies in res(M(G)_p), and res(M(G)_p) = res(cor(res(M(G)_p)))
    because cor o res is multiplication by an index prime to p; so the image
    is exactly res(M(G)_p), which res maps isomorphically from M(G)_p.
    Returns {p: invariant factors of M(G)_p} together with the combined factors.
    """
    parts = {}
    for p, (emb, S) in sylow_data(G, oracle_bound).items():
        if not S.invariant_factors:
            parts[p] = ()
            continue
        images = []
        for wit in S.witness_cycles:
            z = restriction_transfer(emb, corestriction(emb, wit, check=False), check=False)
            images.append(S.project(z, check=False).coords)
        H = _span(images, S.invariant_factors)
        parts[p] = invariants_from_orders([_vector_order(v, S.invariant_factors) for v in H])
    combined = invariant_factors_from_elementary([d for f in parts.values() for d in f])
    return {"parts": parts, "factors": combined}
