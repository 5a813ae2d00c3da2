"""Finite groups as explicit multiplication tables.

Elements are dense integer indices into a :class:`GroupTable`; index 0 is
always the identity.  Each table carries a notation codec used to parse and
render elements: abelian residue vectors, dihedral words ``a^e*c^j``, or
permutations in cycle notation.

Conventions: ``[x, y] = x y x^-1 y^-1`` and conjugation ``y^x = x y x^-1``.
Permutations compose as functions, ``(s*t)(i) = s(t(i))``.
"""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

MAX_ORDER = 5040


class GroupSpecError(ValueError):
    """Malformed group spec or element string."""


class GroupRangeError(ValueError):
    """Group outside the supported size range."""


@dataclass(frozen=True, eq=False)
class GroupTable:
    order: int
    mul: np.ndarray
    inv: np.ndarray
    notation: str
    meta: dict = field(default_factory=dict)
    elements: tuple = ()
    spec: str = ""

    identity = 0

    def __repr__(self):
        return f"GroupTable({self.spec or self.notation}, order={self.order})"

    def __len__(self):
        return self.order

    @cached_property
    def table(self) -> list[list[int]]:
        """Multiplication table as nested lists, for hot loops on small groups."""
        return self.mul.tolist()

    @cached_property
    def inverses(self) -> list[int]:
        return self.inv.tolist()

    def m(self, a: int, b: int) -> int:
        return int(self.mul[a, b])

    def prod(self, *elts: int) -> int:
        r = 0
        for e in elts:
            r = int(self.mul[r, e])
        return r

    def conj(self, g: int, x: int) -> int:
        """``x^g = g x g^-1``."""
        return int(self.mul[self.mul[g, x], self.inv[g]])

    def power(self, x: int, k: int) -> int:
        if k < 0:
            x, k = int(self.inv[x]), -k
        r = 0
        for _ in range(k % self.element_order(x)):
            r = int(self.mul[r, x])
        return r

    def element_order(self, x: int) -> int:
        return int(self._orders[x])

    @cached_property
    def _orders(self) -> np.ndarray:
        orders = np.zeros(self.order, dtype=np.int64)
        cur = np.arange(self.order)
        k = 1
        todo = np.ones(self.order, dtype=bool)
        while todo.any():
            hit = todo & (cur == 0)
            orders[hit] = k
            todo &= ~hit
            cur = self.mul[cur, np.arange(self.order)]
            k += 1
        return orders

    def is_abelian(self) -> bool:
        return bool((self.mul == self.mul.T).all())

    # element codec
    def parse(self, text: str) -> int:
        return _PARSERS[self.notation](self, text)

    def render(self, idx: int) -> str:
        if not 0 <= idx < self.order:
            raise GroupSpecError(f"element index {idx} out of range for {self!r}")
        return _RENDERERS[self.notation](self, idx)

    def element(self, idx: int) -> "GroupElement":
        return GroupElement(idx, self.render(idx))

    def index_of(self, raw) -> int:
        try:
            return self._raw_index[raw]
        except KeyError:
            raise GroupSpecError(f"{raw!r} is not an element of {self!r}") from None

    @cached_property
    def _raw_index(self) -> dict:
        return {e: i for i, e in enumerate(self.elements)}

    def check_axioms(self) -> None:
        """Exhaustive associativity, unit and inverse checks (small groups)."""
        n = self.order
        M = self.mul
        r = np.arange(n)
        if not ((M[0] == r).all() and (M[:, 0] == r).all()):
            raise AssertionError("index 0 is not a two-sided identity")
        if not ((M[r, self.inv] == 0).all() and (M[self.inv, r] == 0).all()):
            raise AssertionError("inverse table is wrong")
        for a in range(n):
            # (a b) c == a (b c) for all b, c
            if not (M[M[a]][:, :] == M[a][M]).all():
                raise AssertionError(f"associativity fails at a={a}")


@dataclass(frozen=True)
class GroupElement:
    index: int
    display: str

    def __str__(self):
        return self.display


@dataclass(frozen=True, eq=False)
class SubgroupEmbedding:
    sub: GroupTable
    amb: GroupTable
    embed: tuple

    @property
    def index(self) -> int:
        return self.amb.order // self.sub.order

    @cached_property
    def image(self) -> frozenset:
        return frozenset(self.embed)

    @cached_property
    def preimage(self) -> dict:
        return {g: h for h, g in enumerate(self.embed)}

    def check(self) -> None:
        S, A, e = self.sub, self.amb, self.embed
        if len(set(e)) != S.order:
            raise AssertionError("embedding is not injective")
        for x in range(S.order):
            for y in range(S.order):
                if e[S.m(x, y)] != A.m(e[x], e[y]):
                    raise AssertionError("embedding is not a homomorphism")

    @cached_property
    def right_cosets(self) -> tuple[list[int], list[int], list[int]]:
        """Right coset decomposition ``G = U H r_i``.

        Returns (reps, coset_of, h_part) where every g equals
        ``embed[h_part[g]] * reps[coset_of[g]]``.  Representatives are the
        minimal element index in each coset.
        """
        A = self.amb
        n = A.order
        coset_of = [-1] * n
        h_part = [0] * n
        reps = []
        for g in range(n):
            if coset_of[g] >= 0:
                continue
            i = len(reps)
            reps.append(g)
            for h, hg in enumerate(self.embed):
                x = A.m(hg, g)
                coset_of[x] = i
                h_part[x] = h
        return reps, coset_of, h_part


# ---------------------------------------------------------------------------
# constructors

_SPEC_RE = re.compile(r"^(Z\d+(?:xZ\d+)*|D\d+|S\d+|A\d+)$")


def build_group(spec: str) -> GroupTable:
    """Build a group from ``Zn``, ``Zaxb...``, ``D2n``, ``Sn`` or ``An``."""
    key = re.sub(r"\s+", "", spec)
    if not _SPEC_RE.match(key):
        raise GroupSpecError(f"malformed group spec {spec!r}")
    return _build_cached(key)


@lru_cache(maxsize=64)
def _build_cached(key: str) -> GroupTable:
    kind = key[0]
    if kind == "Z":
        factors = tuple(int(p[1:]) for p in key.split("x"))
        if any(d < 1 for d in factors):
            raise GroupSpecError(f"cyclic factors must be positive in {key!r}")
        _check_order(math.prod(factors), key)
        return abelian_group(factors, spec=key)
    n = int(key[1:])
    if kind == "D":
        if n < 2 or n % 2:
            raise GroupSpecError(f"dihedral spec needs an even order >= 2, got {key!r}")
        _check_order(n, key)
        return dihedral_group(n // 2, spec=key)
    if n < 1:
        raise GroupSpecError(f"degree must be positive in {key!r}")
    if n > 8:
        raise GroupRangeError(f"degree {n} beyond supported range (n <= 8)")
    _check_order(math.factorial(n) // (2 if kind == "A" and n > 1 else 1), key)
    return permutation_group(n, alternating=(kind == "A"), spec=key)


def _check_order(order: int, spec: str) -> None:
    if order > MAX_ORDER:
        raise GroupRangeError(f"{spec} has order {order} > {MAX_ORDER}")


def abelian_group(factors, spec: str = "") -> GroupTable:
    factors = tuple(int(d) for d in factors)
    elements = tuple(itertools.product(*(range(d) for d in factors)))
    n = len(elements)
    # mixed radix, last coordinate fastest
    vecs = np.array(elements, dtype=np.int64).reshape(n, len(factors))
    mods = np.array(factors, dtype=np.int64)
    strides = np.array([math.prod(factors[i + 1:]) for i in range(len(factors))], dtype=np.int64)
    s = (vecs[:, None, :] + vecs[None, :, :]) % mods
    mul = (s * strides).sum(axis=2)
    inv = (((-vecs) % mods) * strides).sum(axis=1)
    return GroupTable(n, _compact(mul), _compact(inv), "abelian-vector",
                      {"factors": factors}, elements, spec or "x".join(f"Z{d}" for d in factors))


def dihedral_group(n: int, spec: str = "") -> GroupTable:
    """D_{2n}: elements a^e c^j stored at index e*n + j, with c a c^-1 ... a c a = c^-1."""
    elements = tuple((e, j) for e in (0, 1) for j in range(n))
    N = 2 * n
    mul = np.zeros((N, N), dtype=np.int64)
    inv = np.zeros(N, dtype=np.int64)
    for (e1, j1) in elements:
        i1 = e1 * n + j1
        inv[i1] = i1 if e1 else (-j1) % n
        for (e2, j2) in elements:
            # c^j1 a^e2 = a^e2 c^(+-j1)
            j = ((-j1 if e2 else j1) + j2) % n
            mul[i1, e2 * n + j2] = ((e1 + e2) % 2) * n + j
    return GroupTable(N, _compact(mul), _compact(inv), "dihedral", {"n": n}, elements,
                      spec or f"D{N}")


def permutation_group(n: int, alternating: bool = False, spec: str = "") -> GroupTable:
    perms = [p for p in itertools.permutations(range(n))
             if not alternating or _parity(p) == 0]
    P = np.array(perms, dtype=np.int64).reshape(len(perms), n)
    N = len(perms)
    weights = n ** np.arange(n - 1, -1, -1, dtype=np.int64)
    codes = P @ weights
    # lexicographic order of perms makes codes sorted, so searchsorted is a rank lookup
    assert (np.diff(codes) > 0).all()
    mul = np.empty((N, N), dtype=np.int32 if N > 30000 else np.int64)
    for a in range(N):
        comp = P[a][P]          # comp[b, i] = P[a][P[b][i]]  i.e. (a*b)(i) = a(b(i))
        mul[a] = np.searchsorted(codes, comp @ weights)
    inv_perm = np.argsort(P, axis=1)
    inv = np.searchsorted(codes, inv_perm @ weights)
    name = ("A" if alternating else "S") + str(n)
    return GroupTable(N, _compact(mul), _compact(inv), "permutation",
                      {"n": n, "alternating": alternating},
                      tuple(tuple(p) for p in perms), spec or name)


def _compact(a: np.ndarray) -> np.ndarray:
    dt = np.int16 if a.size and a.max() < 32767 else np.int32
    out = np.ascontiguousarray(a, dtype=dt)
    out.setflags(write=False)
    return out


def _parity(p) -> int:
    seen = [False] * len(p)
    parity = 0
    for i in range(len(p)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        parity ^= (length - 1) & 1
    return parity


# ---------------------------------------------------------------------------
# codecs

def _parse_abelian(G, text):
    s = re.sub(r"\s+", "", text)
    factors = G.meta["factors"]
    if s.startswith("(") and s.endswith(")"):
        body = s[1:-1]
        parts = body.split(",") if body else []
    else:
        parts = [s]
    try:
        vals = [int(p) for p in parts]
    except ValueError:
        raise GroupSpecError(f"cannot parse abelian element {text!r}") from None
    if len(vals) != len(factors):
        raise GroupSpecError(f"{text!r} has {len(vals)} coordinates, expected {len(factors)}")
    return G.index_of(tuple(v % d for v, d in zip(vals, factors)))


def _render_abelian(G, idx):
    return "(" + ",".join(str(v) for v in G.elements[idx]) + ")"


_DIH_TOKEN = re.compile(r"^([abc1])(?:\^(-?\d+))?$")


def _parse_dihedral(G, text):
    s = re.sub(r"\s+", "", text)
    if not s:
        raise GroupSpecError("empty dihedral element")
    n = G.meta["n"]
    A = dihedral_group(n) if G.meta.get("subgroup") else G
    r = 0
    for tok in s.split("*"):
        m = _DIH_TOKEN.match(tok)
        if not m:
            raise GroupSpecError(f"cannot parse dihedral element {text!r}")
        letter, exp = m.group(1), int(m.group(2) or 1)
        base = {"1": 0, "a": n, "c": 1, "b": n + 1}[letter]
        r = A.m(r, A.power(base, exp))
    return G.index_of(A.elements[r])


def _render_dihedral(G, idx):
    e, j = G.elements[idx]
    rot = "" if j == 0 else ("c" if j == 1 else f"c^{j}")
    if e == 0:
        return rot or "1"
    return "a" + ("*" + rot if rot else "")


def _parse_perm(G, text):
    s = re.sub(r"\s+", "", text)
    n = G.meta["n"]
    if s in ("id", "()", "1", ""):
        return G.index_of(tuple(range(n)))
    if not re.fullmatch(r"(\(\d+(,\d+)*\))+", s):
        raise GroupSpecError(f"cannot parse permutation {text!r}")
    perm = list(range(n))
    # product of cycles, rightmost applied first
    for cyc in reversed(re.findall(r"\(([^)]*)\)", s)):
        pts = [int(t) - 1 for t in cyc.split(",")]
        if any(not 0 <= p < n for p in pts) or len(set(pts)) != len(pts):
            raise GroupSpecError(f"bad cycle ({cyc}) for degree {n}")
        c = list(range(n))
        for a, b in zip(pts, pts[1:] + pts[:1]):
            c[a] = b
        perm = [c[perm[i]] for i in range(n)]
    return G.index_of(tuple(perm))


def _render_perm(G, idx):
    return perm_to_cycles(G.elements[idx])


def perm_to_cycles(p) -> str:
    seen = set()
    out = []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        cyc = [i]
        seen.add(i)
        j = p[i]
        while j != i:
            cyc.append(j)
            seen.add(j)
            j = p[j]
        out.append("(" + ",".join(str(k + 1) for k in cyc) + ")")
    return "".join(out) or "id"


def _parse_opaque(G, text):
    s = text.strip()
    try:
        return G.index_of(s)
    except GroupSpecError:
        pass
    m = re.fullmatch(r"g(\d+)", s)
    if m and int(m.group(1)) < G.order:
        return int(m.group(1))
    raise GroupSpecError(f"cannot parse element {text!r}")


def _render_opaque(G, idx):
    return f"g{idx}"


_PARSERS = {"abelian-vector": _parse_abelian, "dihedral": _parse_dihedral,
            "permutation": _parse_perm, "opaque": _parse_opaque}
_RENDERERS = {"abelian-vector": _render_abelian, "dihedral": _render_dihedral,
              "permutation": _render_perm, "opaque": _render_opaque}


# ---------------------------------------------------------------------------
# commutators, subgroups, Sylow

def commutator(G: GroupTable, g: int, h: int) -> int:
    """``[g, h] = g h g^-1 h^-1``."""
    return int(G.mul[G.mul[G.mul[g, h], G.inv[g]], G.inv[h]])


def closure(G: GroupTable, gens) -> list[int]:
    """Subgroup generated by ``gens``, sorted by index."""
    elts = {0}
    frontier = [0]
    gens = [int(g) for g in gens]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = int(G.mul[x, g])
                if y not in elts:
                    elts.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(elts)


def subgroup(G: GroupTable, elements) -> SubgroupEmbedding:
    """Embedding of the subgroup with the given (closed) set of elements."""
    embed = tuple(sorted(set(int(x) for x in elements)))
    if not embed or embed[0] != 0:
        raise ValueError("subgroup must contain the identity")
    pos = {g: i for i, g in enumerate(embed)}
    k = len(embed)
    idx = np.array(embed)
    sub_mul = G.mul[np.ix_(idx, idx)]
    try:
        mul = np.vectorize(pos.__getitem__, otypes=[np.int64])(sub_mul) if k else sub_mul
        inv = np.array([pos[int(G.inv[g])] for g in embed])
    except KeyError:
        raise ValueError("element set is not closed under multiplication") from None
    # codec parameters are inherited so elements parse and render as in G
    meta = dict(G.meta, ambient=G.spec, subgroup=True)
    H = GroupTable(k, _compact(mul), _compact(inv), G.notation, meta,
                   tuple(G.elements[g] for g in embed), f"{G.spec}<{k}>")
    return SubgroupEmbedding(H, G, embed)


def conjugate_embedding(emb: SubgroupEmbedding, g: int) -> SubgroupEmbedding:
    """Same abstract subgroup embedded as ``g H g^-1``."""
    A = emb.amb
    return SubgroupEmbedding(emb.sub, A, tuple(A.conj(g, x) for x in emb.embed))


def commutator_subgroup(G: GroupTable) -> SubgroupEmbedding:
    if G.order <= 720:
        comms = {commutator(G, g, h) for g in range(G.order) for h in range(G.order)}
        return subgroup(G, closure(G, comms))
    # large groups: normal closure of the commutators of a generating set
    gens = generating_set(G)
    comms = {commutator(G, a, b) for a in gens for b in gens} - {0}
    elts = set(closure(G, comms))
    frontier = list(elts)
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = G.conj(s, x)
                if y not in elts:
                    comms.add(y)
                    new = set(closure(G, comms))
                    nxt.extend(new - elts)
                    elts = new
        frontier = nxt
    return subgroup(G, elts)


def generating_set(G: GroupTable) -> list[int]:
    """Small deterministic generating set: greedy by element order, then index."""
    if G.order == 1:
        return []
    order_of = [G.element_order(x) for x in range(G.order)]
    cand = sorted(range(1, G.order), key=lambda x: (-order_of[x], x))
    gens = [cand[0]]
    span = set(closure(G, gens))
    while len(span) < G.order:
        best = None
        for x in cand:
            if x in span:
                continue
            size = len(closure(G, gens + [x]))
            if best is None or size > best[0]:
                best = (size, x)
                if size == G.order:
                    break
        gens.append(best[1])
        span = set(closure(G, gens))
    return gens


def _prime_part(n: int, p: int) -> int:
    q = 1
    while n % p == 0:
        n //= p
        q *= p
    return q


def _is_power_of(k: int, p: int) -> bool:
    while k % p == 0:
        k //= p
    return k == 1


def sylow_subgroup(G: GroupTable, p: int, start: int = 0) -> SubgroupEmbedding:
    """A Sylow p-subgroup, grown from a p-element by normalizer steps.

    Elements are scanned in index order beginning at ``start``; the result
    is deterministic for a given start.
    """
    if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
        raise ValueError(f"{p} is not prime")
    if G.order % p:
        raise ValueError(f"{p} does not divide |G| = {G.order}")
    target = _prime_part(G.order, p)
    scan = [(start + i) % G.order for i in range(G.order)]
    x0 = next(x for x in scan if x and _is_power_of(G.element_order(x), p))
    P = closure(G, [x0])
    while len(P) < target:
        Pset = set(P)
        grown = None
        for g in scan:
            if g in Pset:
                continue
            if any(G.conj(g, y) not in Pset for y in P):
                continue
            # g normalizes P; need the image of g in N(P)/P to be a p-element
            q, k = g, 1
            while q not in Pset:
                q = G.m(q, g)
                k += 1
            if _is_power_of(k, p):
                grown = g
                break
        if grown is None:  # pragma: no cover - excluded by Sylow's theorem
            raise AssertionError("normalizer growth stalled")
        P = closure(G, P + [grown])
    return subgroup(G, P)


def isomorphism(G: GroupTable, H: GroupTable) -> list[int] | None:
    """Search for an isomorphism G -> H; returns the image list or None."""
    if G.order != H.order:
        return None
    og = sorted(G.element_order(x) for x in range(G.order))
    oh = sorted(H.element_order(x) for x in range(H.order))
    if og != oh:
        return None
    gens = generating_set(G)
    by_order: dict[int, list[int]] = {}
    for y in range(H.order):
        by_order.setdefault(H.element_order(y), []).append(y)
    # express every element of G as (parent, generator) from a BFS tree
    words = {0: None}
    frontier = [0]
    order_bfs = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for gi, s in enumerate(gens):
                y = G.m(x, s)
                if y not in words:
                    words[y] = (x, gi)
                    nxt.append(y)
                    order_bfs.append(y)
        frontier = nxt

    def attempt(images):
        phi = [None] * G.order
        phi[0] = 0
        for y in order_bfs[1:]:
            x, gi = words[y]
            phi[y] = H.m(phi[x], images[gi])
        if len(set(phi)) != G.order:
            return None
        T, U = G.table, H.table
        for a in range(G.order):
            pa = phi[a]
            for b in range(G.order):
                if phi[T[a][b]] != U[pa][phi[b]]:
                    return None
        return phi

    def search(i, images):
        if i == len(gens):
            return attempt(images)
        for y in by_order.get(G.element_order(gens[i]), []):
            r = search(i + 1, images + [y])
            if r is not None:
                return r
        return None

    return search(0, [])


def abelian_invariants(G: GroupTable) -> tuple[int, ...]:
    """Invariant factors of an abelian group from its element-order statistics."""
    if not G.is_abelian():
        raise ValueError(f"{G!r} is not abelian")
    return invariants_from_orders([G.element_order(x) for x in range(G.order)])


def invariants_from_orders(orders) -> tuple[int, ...]:
    """Invariant factors of a finite abelian group given the orders of all its elements."""
    orders = list(orders)
    n = len(orders)
    primes = [p for p in range(2, n + 1) if n % p == 0 and all(p % q for q in range(2, p))]
    elementary = []
    for p in primes:
        # number of elements with order dividing p^k determines the p-primary type
        k = 0
        counts = [1]
        while counts[-1] < _prime_part(n, p):
            k += 1
            counts.append(sum(1 for o in orders if (p ** k) % o == 0))
        # r_k = number of cyclic factors of order >= p^k = log_p(c_k / c_{k-1})
        ge = [round(math.log(counts[j] / counts[j - 1], p)) for j in range(1, len(counts))]
        for j in range(len(ge)):
            nxt = ge[j + 1] if j + 1 < len(ge) else 0
            elementary += [p ** (j + 1)] * (ge[j] - nxt)
    return invariant_factors_from_elementary(elementary)


def invariant_factors_from_elementary(divs) -> tuple[int, ...]:
    """Collapse cyclic orders into the divisibility-chain normal form (dropping 1s)."""
    prime_powers: dict[int, list[int]] = {}
    for d in divs:
        m = d
        p = 2
        while m > 1:
            if m % p == 0:
                q = _prime_part(m, p)
                prime_powers.setdefault(p, []).append(q)
                m //= q
            p += 1
    if not prime_powers:
        return ()
    length = max(len(v) for v in prime_powers.values())
    out = [1] * length
    for p, qs in prime_powers.items():
        qs = sorted(qs, reverse=True)
        for i, q in enumerate(qs):
            out[length - 1 - i] *= q
    return tuple(out)


def commutator_product(G: GroupTable, w) -> int:
    """Product of ``[x_i, y_i]^e_i`` over a pair word, left to right."""
    letters = w.letters if hasattr(w, "letters") else w
    r = 0
    for x, y, e in letters:
        c = commutator(G, x, y) if e == 1 else commutator(G, y, x)
        r = int(G.mul[r, c])
    return r
