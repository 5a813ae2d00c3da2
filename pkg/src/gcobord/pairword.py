"""Words in the free group on pairs <x, y> and their rewriting.

A :class:`PairWord` is a tuple of letters ``(x, y, e)`` with element indices
x, y and exponent e = +1 or -1.  Rewrite moves are positional and explicit;
each returns the new word together with a :class:`TraceStep`, so a
:class:`RewriteTrace` replays exactly.

Rule ids and their two sides (kappa = [b, b'], lambda = [a, a'],
``<u,v>^g = <g u g^-1, g v g^-1>``)::

    R1   <x,x>                     ~  1
    R2   <x,y>                     ~  <y,x>^-1
    R3   <xy,z>                    ~  <y,z>^x <x,z>
    R4   <y,z>^x                   ~  <x,[y,z]> <y,z>
    R5   <x,yz>                    ~  <x,y> <x,z>^y
    R6   <a,b> <x,y> <a,b>^-1      ~  <x,y>^[a,b]
    R7   [<x,y>, <a,b>]            ~  <[x,y], [a,b]>
    R8   <b,b'> <a0,b0>            ~  <kappa,a0> <a0,kappa b0> <b,b'>
    R9   <b,b'> <b0,a0>            ~  <kappa b0,a0> <a0,kappa> <b,b'>
    R10  <b,b'> <a,a'>             ~  <kappa,lambda> <a,a'> <b,b'>
    R11  <x^n,x^s>                 ~  1
    SWAP <x,y> <a,b>               ~  <a,b> <x,y>^[b,a]
    FREE <x,y>^e <x,y>^-e          =  1   (free cancellation)

Multi-letter rules match all-positive segments; an all-negative segment is
handled by rewriting its inverse.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from .homology import NotInZError
from .groups import (GroupTable, build_group, closure, commutator, commutator_product,
                     commutator_subgroup)


class RewriteError(ValueError):
    """Rule does not match at the requested position."""


RULES = ("R1", "R2", "R3", "R4", "R5", "R6", "R7", "R8", "R9", "R10", "R11", "SWAP", "FREE")


@dataclass(frozen=True, eq=False)
class PairWord:
    group: GroupTable
    letters: tuple = ()

    def __post_init__(self):
        n = self.group.order
        letters = tuple((int(x), int(y), int(e)) for x, y, e in self.letters)
        for x, y, e in letters:
            if not (0 <= x < n and 0 <= y < n):
                raise ValueError(f"letter entries ({x}, {y}) out of range for order {n}")
            if e not in (1, -1):
                raise ValueError(f"exponent must be +1 or -1, got {e}")
        object.__setattr__(self, "letters", letters)

    def __len__(self):
        return len(self.letters)

    def __eq__(self, other):
        return (isinstance(other, PairWord) and self.group is other.group
                and self.letters == other.letters)

    def __hash__(self):
        return hash((id(self.group), self.letters))

    def __add__(self, other: "PairWord") -> "PairWord":
        if self.group is not other.group:
            raise ValueError("words over different groups")
        return PairWord(self.group, self.letters + other.letters)

    def inverse(self) -> "PairWord":
        return PairWord(self.group, _inv(self.letters))

    def replace(self, start: int, stop: int, new) -> "PairWord":
        return PairWord(self.group, self.letters[:start] + tuple(new) + self.letters[stop:])

    def conjugate(self, g: int) -> "PairWord":
        G = self.group
        return PairWord(G, tuple((G.conj(g, x), G.conj(g, y), e) for x, y, e in self.letters))

    def render(self) -> str:
        G = self.group
        if not self.letters:
            return "1"
        return " ".join(f"<{G.render(x)},{G.render(y)}>" + ("" if e == 1 else "^-1")
                        for x, y, e in self.letters)

    __str__ = render

    def digest(self) -> str:
        """First 16 hex digits of SHA-256 over the canonical rendering.

        Canonical form: ``spec|<x,y>^e;<x,y>^e;...`` with elements in the
        group's canonical notation.
        """
        return word_digest(self.group, self.letters)

    def to_json(self) -> dict:
        G = self.group
        return {"group": G.spec,
                "letters": [{"x": G.render(x), "y": G.render(y), "e": e} for x, y, e in self.letters]}

    @classmethod
    def from_json(cls, data: dict, group: GroupTable | None = None) -> "PairWord":
        G = group or build_group(data["group"])
        letters = []
        for item in data.get("letters", []):
            letters.append((G.parse(str(item["x"])), G.parse(str(item["y"])), int(item.get("e", 1))))
        return cls(G, tuple(letters))

    @classmethod
    def parse(cls, G: GroupTable, pairs) -> "PairWord":
        """From ``[("x", "y"), ("x", "y", -1), ...]`` in the group's notation."""
        letters = []
        for p in pairs:
            e = p[2] if len(p) > 2 else 1
            letters.append((G.parse(p[0]), G.parse(p[1]), e))
        return cls(G, tuple(letters))


def word_digest(G: GroupTable, letters) -> str:
    body = ";".join(f"<{G.render(x)},{G.render(y)}>^{e}" for x, y, e in letters)
    return hashlib.sha256(f"{G.spec}|{body}".encode()).hexdigest()[:16]


def _inv(letters):
    return tuple((x, y, -e) for x, y, e in reversed(letters))


def in_Z(w: PairWord) -> bool:
    return commutator_product(w.group, w) == 0


def check_in_Z(w: PairWord) -> None:
    c = commutator_product(w.group, w)
    if c:
        raise NotInZError(f"commutator product of the word is {w.group.render(c)}, not the identity")


# ---------------------------------------------------------------------------
# trace

@dataclass(frozen=True)
class TraceStep:
    rule: str
    position: int
    params: tuple = ()
    direction: str = "forward"
    before: str = ""
    after: str = ""

    def to_json(self, G: GroupTable) -> dict:
        kinds = _param_kinds(self.rule, self.direction)
        params = [G.render(p) if k == "e" else p for p, k in zip(self.params, kinds)]
        return {"rule": self.rule, "position": self.position, "direction": self.direction,
                "params": params, "before": self.before, "after": self.after}

    @classmethod
    def from_json(cls, d: dict, G: GroupTable) -> "TraceStep":
        kinds = _param_kinds(d["rule"], d.get("direction", "forward"))
        params = tuple(G.parse(str(p)) if k == "e" else int(p) for p, k in zip(d.get("params", []), kinds))
        return cls(d["rule"], int(d["position"]), params, d.get("direction", "forward"),
                   d.get("before", ""), d.get("after", ""))


_PARAM_KINDS = {
    ("R1", "backward"): "ei", ("R3", "forward"): "e", ("R4", "forward"): "e",
    ("R5", "forward"): "e", ("R6", "backward"): "eei", ("R7", "backward"): "eeee",
    ("R11", "forward"): "eii", ("R11", "backward"): "eiii", ("FREE", "backward"): "eei",
}


def _param_kinds(rule, direction):
    return _PARAM_KINDS.get((rule, direction), "")


@dataclass
class RewriteTrace:
    initial: str = ""
    steps: list = field(default_factory=list)

    def __len__(self):
        return len(self.steps)

    def append(self, step: TraceStep):
        self.steps.append(step)

    def extend(self, other: "RewriteTrace"):
        self.steps.extend(other.steps)

    @property
    def final(self) -> str:
        return self.steps[-1].after if self.steps else self.initial

    def replay(self, w: PairWord) -> PairWord:
        """Re-run every step from ``w``; raises if any digest disagrees."""
        if self.initial and w.digest() != self.initial:
            raise RewriteError("initial word does not match the trace")
        for i, st in enumerate(self.steps):
            if st.before and w.digest() != st.before:
                raise RewriteError(f"step {i}: word digest mismatch before {st.rule}")
            w, got = apply_step(w, st)
            if st.after and got.after != st.after:
                raise RewriteError(f"step {i}: {st.rule} produced a different word")
        return w

    def to_json(self, G: GroupTable) -> dict:
        return {"initial": self.initial, "final": self.final,
                "steps": [s.to_json(G) for s in self.steps]}

    @classmethod
    def from_json(cls, d: dict, G: GroupTable) -> "RewriteTrace":
        return cls(d.get("initial", ""), [TraceStep.from_json(s, G) for s in d.get("steps", [])])


class Rewriter:
    """Applies moves to a word while recording a trace."""

    def __init__(self, w: PairWord):
        self.word = w
        self.trace = RewriteTrace(initial=w.digest())

    def apply(self, rule, position, params=(), direction="forward"):
        self.word, st = apply_relation(self.word, rule, position, params, direction)
        self.trace.append(st)
        return self.word

    def shift(self, position, direction="forward"):
        self.word, st = commuting_shift(self.word, position, direction)
        self.trace.append(st)
        return self.word

    def free(self, position, params=(), direction="forward"):
        return self.apply("FREE", position, params, direction)


def apply_step(w: PairWord, st: TraceStep):
    if st.rule == "SWAP":
        return commuting_shift(w, st.position, st.direction)
    return apply_relation(w, st.rule, st.position, st.params, st.direction)


# ---------------------------------------------------------------------------
# rules

def _seg(w: PairWord, p: int, k: int):
    if not (0 <= p and p + k <= len(w.letters)):
        raise RewriteError(f"position {p} (+{k}) out of range for a word of length {len(w)}")
    return w.letters[p:p + k]


def _signed(seg, fn):
    """Apply ``fn`` to an all-positive segment, or through inversion to an all-negative one."""
    es = {e for _, _, e in seg}
    if es == {1}:
        return fn(seg)
    if es == {-1}:
        return _inv(fn(_inv(seg)))
    raise RewriteError("rule needs a segment of uniform exponent")


def common_root(G: GroupTable, p: int, q: int):
    """(x, n, s) with p = x^n and q = x^s, or None if <p, q> is not cyclic."""
    if commutator(G, p, q):
        return None
    H = closure(G, [p, q])
    for x in H:
        if G.element_order(x) == len(H):
            pw = {0: 0}
            y, k = 0, 0
            while True:
                y = G.m(y, x)
                k += 1
                if y == 0:
                    break
                pw[y] = k
            return x, pw[p], pw[q]
        if len(H) == 1:
            return 0, 0, 0
    return None


def apply_relation(w: PairWord, rule: str, position: int, params=(), direction: str = "forward"):
    """Apply one relation at ``position``; returns (new word, TraceStep)."""
    if direction not in ("forward", "backward"):
        raise ValueError(f"direction must be forward or backward, not {direction!r}")
    fn = _RULE_FUNCS.get(rule)
    if fn is None:
        if rule == "SWAP":
            return commuting_shift(w, position, direction)
        raise ValueError(f"unknown rule {rule!r}")
    G = w.group
    params = tuple(int(p) for p in params)
    start, stop, new, params = fn(G, w, position, params, direction == "forward")
    out = w.replace(start, stop, new)
    return out, TraceStep(rule, position, params, direction, w.digest(), out.digest())


def _r1(G, w, p, params, fwd):
    if fwd:
        (x, y, e), = _seg(w, p, 1)
        if x != y:
            raise RewriteError("R1 needs <x,x>")
        return p, p + 1, (), ()
    x, e = params
    return p, p, ((x, x, e),), (x, e)


def _r2(G, w, p, params, fwd):
    (x, y, e), = _seg(w, p, 1)
    return p, p + 1, ((y, x, -e),), ()


def _r3(G, w, p, params, fwd):
    inv, m = G.inverses, G.m
    if fwd:
        (x,) = params

        def f(seg):
            (g, z, _), = seg
            y = m(inv[x], g)
            return ((G.conj(x, y), G.conj(x, z), 1), (x, z, 1))
        return p, p + 1, _signed(_seg(w, p, 1), f), (x,)

    def b(seg):
        (u, v, _), (x, z, _) = seg
        if v != G.conj(x, z):
            raise RewriteError("R3 backward needs <u, x z x^-1><x, z>")
        return ((m(u, x), z, 1),)
    return p, p + 2, _signed(_seg(w, p, 2), b), ()


def _r4(G, w, p, params, fwd):
    inv = G.inverses
    if fwd:
        (x,) = params

        def f(seg):
            (u, v, _), = seg
            y, z = G.conj(inv[x], u), G.conj(inv[x], v)
            return ((x, commutator(G, y, z), 1), (y, z, 1))
        return p, p + 1, _signed(_seg(w, p, 1), f), (x,)

    def b(seg):
        (x, c, _), (y, z, _) = seg
        if c != commutator(G, y, z):
            raise RewriteError("R4 backward needs <x,[y,z]><y,z>")
        return ((G.conj(x, y), G.conj(x, z), 1),)
    return p, p + 2, _signed(_seg(w, p, 2), b), ()


def _r5(G, w, p, params, fwd):
    inv, m = G.inverses, G.m
    if fwd:
        (y,) = params

        def f(seg):
            (x, g, _), = seg
            z = m(inv[y], g)
            return ((x, y, 1), (G.conj(y, x), G.conj(y, z), 1))
        return p, p + 1, _signed(_seg(w, p, 1), f), (y,)

    def b(seg):
        (x, y, _), (u, v, _) = seg
        if u != G.conj(y, x):
            raise RewriteError("R5 backward needs <x,y><y x y^-1, .>")
        return ((x, m(v, y), 1),)
    return p, p + 2, _signed(_seg(w, p, 2), b), ()


def _r6(G, w, p, params, fwd):
    inv = G.inverses
    if fwd:
        (a, b, s), (x, y, e), (a2, b2, s2) = _seg(w, p, 3)
        if (a, b) != (a2, b2) or s != -s2:
            raise RewriteError("R6 needs <a,b>^s <x,y>^e <a,b>^-s")
        k = commutator(G, a, b) if s == 1 else commutator(G, b, a)
        return p, p + 3, ((G.conj(k, x), G.conj(k, y), e),), ()
    a, b, s = params
    if s not in (1, -1):
        raise RewriteError("R6 sign must be +1 or -1")
    (u, v, e), = _seg(w, p, 1)
    k = commutator(G, a, b) if s == 1 else commutator(G, b, a)
    ki = inv[k]
    return p, p + 1, ((a, b, s), (G.conj(ki, u), G.conj(ki, v), e), (a, b, -s)), (a, b, s)


def _r7(G, w, p, params, fwd):
    if fwd:
        seg = _seg(w, p, 4)
        (x, y, e1), (a, b, e2), (x2, y2, e3), (a2, b2, e4) = seg
        if (e1, e2, e3, e4) != (1, 1, -1, -1) or (x, y) != (x2, y2) or (a, b) != (a2, b2):
            raise RewriteError("R7 needs <x,y><a,b><x,y>^-1<a,b>^-1")
        return p, p + 4, ((commutator(G, x, y), commutator(G, a, b), 1),), ()
    x, y, a, b = params
    (u, v, e), = _seg(w, p, 1)
    if e != 1 or u != commutator(G, x, y) or v != commutator(G, a, b):
        raise RewriteError("R7 backward needs <[x,y],[a,b]>")
    return p, p + 1, ((x, y, 1), (a, b, 1), (x, y, -1), (a, b, -1)), (x, y, a, b)


def _r8(G, w, p, params, fwd):
    m, inv = G.m, G.inverses
    if fwd:
        def f(seg):
            (b, b1, _), (a0, b0, _) = seg
            k = commutator(G, b, b1)
            return ((k, a0, 1), (a0, m(k, b0), 1), (b, b1, 1))
        return p, p + 2, _signed(_seg(w, p, 2), f), ()

    def g(seg):
        (k, a0, _), (a1, r, _), (b, b1, _) = seg
        kk = commutator(G, b, b1)
        if k != kk or a1 != a0:
            raise RewriteError("R8 backward pattern mismatch")
        return ((b, b1, 1), (a0, m(inv[kk], r), 1))
    return p, p + 3, _signed(_seg(w, p, 3), g), ()


def _r9(G, w, p, params, fwd):
    m, inv = G.m, G.inverses
    if fwd:
        def f(seg):
            (b, b1, _), (b0, a0, _) = seg
            k = commutator(G, b, b1)
            return ((m(k, b0), a0, 1), (a0, k, 1), (b, b1, 1))
        return p, p + 2, _signed(_seg(w, p, 2), f), ()

    def g(seg):
        (kb0, a0, _), (a1, k, _), (b, b1, _) = seg
        kk = commutator(G, b, b1)
        if k != kk or a1 != a0:
            raise RewriteError("R9 backward pattern mismatch")
        return ((b, b1, 1), (m(inv[kk], kb0), a0, 1))
    return p, p + 3, _signed(_seg(w, p, 3), g), ()


def _r10(G, w, p, params, fwd):
    if fwd:
        def f(seg):
            (b, b1, _), (a, a1, _) = seg
            return ((commutator(G, b, b1), commutator(G, a, a1), 1), (a, a1, 1), (b, b1, 1))
        return p, p + 2, _signed(_seg(w, p, 2), f), ()

    def g(seg):
        (k, l, _), (a, a1, _), (b, b1, _) = seg
        if k != commutator(G, b, b1) or l != commutator(G, a, a1):
            raise RewriteError("R10 backward pattern mismatch")
        return ((b, b1, 1), (a, a1, 1))
    return p, p + 3, _signed(_seg(w, p, 3), g), ()


def _r11(G, w, p, params, fwd):
    if fwd:
        (u, v, e), = _seg(w, p, 1)
        if params:
            x, n, s = params
            if u != G.power(x, n) or v != G.power(x, s):
                raise RewriteError("R11 entries are not the stated powers")
        else:
            root = common_root(G, u, v)
            if root is None:
                raise RewriteError("R11 needs entries in a common cyclic subgroup")
            x, n, s = root
        return p, p + 1, (), (x, n, s)
    x, n, s, e = params
    return p, p, ((G.power(x, n), G.power(x, s), e),), (x, n, s, e)


def _free(G, w, p, params, fwd):
    if fwd:
        (x, y, e), (x2, y2, e2) = _seg(w, p, 2)
        if (x, y) != (x2, y2) or e != -e2:
            raise RewriteError("FREE needs <x,y>^e <x,y>^-e")
        return p, p + 2, (), ()
    x, y, e = params
    _seg(w, p, 0)
    return p, p, ((x, y, e), (x, y, -e)), (x, y, e)


_RULE_FUNCS = {"R1": _r1, "R2": _r2, "R3": _r3, "R4": _r4, "R5": _r5, "R6": _r6,
               "R7": _r7, "R8": _r8, "R9": _r9, "R10": _r10, "R11": _r11, "FREE": _free}


def commuting_shift(w: PairWord, position: int, direction: str = "forward"):
    """``<x,y><a,b> -> <a,b><x^d, y^d>`` with d = [b, a]; backward undoes it."""
    G = w.group
    (x, y, e1), (a, b, e2) = _seg(w, position, 2)
    if e1 != 1 or e2 != 1:
        raise RewriteError("commuting shift needs positive exponents (normalize with R2)")
    if direction == "forward":
        d = commutator(G, b, a)
        new = ((a, b, 1), (G.conj(d, x), G.conj(d, y), 1))
    elif direction == "backward":
        # here (x, y) is the moved pair and (a, b) the conjugated one
        d = commutator(G, x, y)
        new = ((G.conj(d, a), G.conj(d, b), 1), (x, y, 1))
    else:
        raise ValueError(f"direction must be forward or backward, not {direction!r}")
    out = w.replace(position, position + 2, new)
    return out, TraceStep("SWAP", position, (), direction, w.digest(), out.digest())


def inverse_step(st: TraceStep, before: PairWord) -> TraceStep:
    """A step taking ``apply_step(before, st)`` back to ``before``."""
    after, _ = apply_step(before, st)
    r, p, fwd = st.rule, st.position, st.direction == "forward"
    other = "backward" if fwd else "forward"
    L = before.letters
    if r in ("R2", "SWAP"):
        params = ()
    elif r in ("R1", "R11", "FREE"):
        if fwd:
            x, y, e = L[p]
            if r == "R1":
                params = (x, e)
            elif r == "R11":
                params = st.params + (e,)
            else:
                params = (x, y, e)
        else:
            params = st.params[:3] if r == "R11" else ()
    elif r in ("R3", "R4", "R5"):
        if fwd:
            params = ()
        else:
            seg = L[p:p + 2]
            if seg[0][2] == -1:
                seg = _inv(seg)
            # the split element is visible in the merged two-letter segment
            params = {"R3": (seg[1][0],), "R4": (seg[0][0],), "R5": (seg[0][1],)}[r]
    elif r == "R6":
        if fwd:
            a, b, s = L[p]
            params = (a, b, s)
        else:
            params = ()
    elif r == "R7":
        if fwd:
            x, y, _ = L[p]
            a, b, _ = L[p + 1]
            params = (x, y, a, b)
        else:
            params = ()
    else:  # R8, R9, R10 need no parameters
        params = ()
    return TraceStep(r, p, params, other, after.digest(), before.digest())


# ---------------------------------------------------------------------------
# surfaces

@dataclass(frozen=True, eq=False)
class SurfaceWord:
    """Closed genus-n surface data: handles (y_i, x_i) listed as
    ``(y_n, x_n), ..., (y_1, x_1)`` with ``prod_{i=1..n} [x_i, y_i] = 1``."""
    group: GroupTable
    handles: tuple = ()

    def __post_init__(self):
        handles = tuple((int(y), int(x)) for y, x in self.handles)
        object.__setattr__(self, "handles", handles)
        if separating_product(self, self.genus) != 0:
            raise NotInZError("handle commutators do not multiply to the identity")

    @property
    def genus(self) -> int:
        return len(self.handles)

    def pair(self, i: int) -> tuple[int, int]:
        """(x_i, y_i) for 1 <= i <= genus."""
        y, x = self.handles[self.genus - i]
        return x, y

    def to_json(self) -> dict:
        G = self.group
        return {"group": G.spec, "handles": [{"y": G.render(y), "x": G.render(x)} for y, x in self.handles]}

    @classmethod
    def from_json(cls, data: dict, group: GroupTable | None = None) -> "SurfaceWord":
        G = group or build_group(data["group"])
        return cls(G, tuple((G.parse(str(h["y"])), G.parse(str(h["x"]))) for h in data.get("handles", [])))


def to_surface(w: PairWord) -> SurfaceWord:
    """<x_1,y_1>...<x_n,y_n>  ->  (y_n,x_n)...(y_1,x_1)."""
    if any(e != 1 for _, _, e in w.letters):
        raise RewriteError("to_surface needs all exponents +1 (normalize with R2)")
    check_in_Z(w)
    return SurfaceWord(w.group, tuple((y, x) for x, y, _ in reversed(w.letters)))


def from_surface(s: SurfaceWord) -> PairWord:
    return PairWord(s.group, tuple((x, y, 1) for y, x in reversed(s.handles)))


def separating_product(s: SurfaceWord, i: int) -> int:
    G = s.group
    n = len(s.handles)
    if not 0 <= i <= n:
        raise IndexError(f"handle index {i} outside 0..{n}")
    r = 0
    for j in range(1, i + 1):
        y, x = s.handles[n - j]
        r = G.m(r, commutator(G, x, y))
    return r


_COMM_CACHE: dict = {}


def _commutator_image(G):
    hit = _COMM_CACHE.get(id(G))
    if hit is None or hit[0] is not G:
        hit = (G, commutator_subgroup(G).image)
        _COMM_CACHE[id(G)] = hit
    return hit[1]


def separating_monodromy(s: SurfaceWord, i: int) -> tuple[int, bool]:
    """Monodromy of the standard separating curve after handle i, and whether it lies in [G,G]."""
    g = separating_product(s, i)
    return g, g in _commutator_image(s.group)


def normalize_positive(w: PairWord, rw: Rewriter | None = None) -> PairWord:
    """Turn every negative letter positive with R2, recording the steps."""
    rw = rw or Rewriter(w)
    for p, (_, _, e) in enumerate(w.letters):
        if e == -1:
            rw.apply("R2", p)
    return rw.word


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


# ---------------------------------------------------------------------------
# random words and moves

_PAIRS_CACHE: dict = {}


def commutator_pairs(G: GroupTable) -> dict:
    """Map from each commutator value to the pairs (x, y) realizing it."""
    hit = _PAIRS_CACHE.get(id(G))
    if hit is None or hit[0] is not G:
        table: dict = {}
        n = G.order
        for x in range(n):
            for y in range(n):
                table.setdefault(commutator(G, x, y), []).append((x, y))
        hit = (G, table)
        _PAIRS_CACHE[id(G)] = hit
    return hit[1]


def random_z_word(G: GroupTable, rng, max_genus: int = 4, min_genus: int = 1,
                  flip: float = 0.0) -> PairWord:
    """A random word with trivial commutator product.

    The first genus-1 letters are uniform; the last one is drawn from the
    pairs whose commutator cancels the running product.  With ``flip`` > 0,
    letters are turned into their R2-equivalent negative form at random.
    """
    n = G.order
    pairs = commutator_pairs(G) if n <= 720 else None
    while True:
        g = rng.randint(min_genus, max_genus)
        letters = [(rng.randrange(n), rng.randrange(n), 1) for _ in range(g - 1)]
        need = G.inverses[commutator_product(G, letters)]
        if pairs is not None:
            cand = pairs.get(need)
            if not cand:
                continue
            x, y = cand[rng.randrange(len(cand))]
        else:
            for _ in range(20000):
                x, y = rng.randrange(n), rng.randrange(n)
                if commutator(G, x, y) == need:
                    break
            else:
                continue
        letters.append((x, y, 1))
        if flip:
            letters = [(y, x, -1) if rng.random() < flip else (x, y, 1) for x, y, _ in letters]
        return PairWord(G, tuple(letters))


def random_pattern(G: GroupTable, rule: str, direction: str, rng):
    """Letters matching one side of ``rule`` plus the parameters needed to rewrite them."""
    n = G.order
    r = lambda: rng.randrange(n)
    comm = lambda a, b: commutator(G, a, b)
    fwd = direction == "forward"
    params: tuple = ()
    if rule == "R1":
        x = r()
        pat, params = ([(x, x, rng.choice((1, -1)))], ()) if fwd else ([], (x, rng.choice((1, -1))))
    elif rule == "R2":
        pat = [(r(), r(), rng.choice((1, -1)))]
    elif rule == "R3":
        if fwd:
            pat, params = [(r(), r(), 1)], (r(),)
        else:
            x, z = r(), r()
            pat = [(r(), G.conj(x, z), 1), (x, z, 1)]
    elif rule == "R4":
        if fwd:
            pat, params = [(r(), r(), 1)], (r(),)
        else:
            y, z = r(), r()
            pat = [(r(), comm(y, z), 1), (y, z, 1)]
    elif rule == "R5":
        if fwd:
            pat, params = [(r(), r(), 1)], (r(),)
        else:
            x, y = r(), r()
            pat = [(x, y, 1), (G.conj(y, x), r(), 1)]
    elif rule == "R6":
        a, b, s = r(), r(), rng.choice((1, -1))
        if fwd:
            pat = [(a, b, s), (r(), r(), rng.choice((1, -1))), (a, b, -s)]
        else:
            pat, params = [(r(), r(), rng.choice((1, -1)))], (a, b, s)
    elif rule == "R7":
        x, y, a, b = r(), r(), r(), r()
        if fwd:
            pat = [(x, y, 1), (a, b, 1), (x, y, -1), (a, b, -1)]
        else:
            pat, params = [(comm(x, y), comm(a, b), 1)], (x, y, a, b)
    elif rule in ("R8", "R9", "R10"):
        b, b1 = r(), r()
        k = comm(b, b1)
        if fwd:
            pat = [(b, b1, 1), (r(), r(), 1)]
        elif rule == "R8":
            a0 = r()
            pat = [(k, a0, 1), (a0, r(), 1), (b, b1, 1)]
        elif rule == "R9":
            a0 = r()
            pat = [(r(), a0, 1), (a0, k, 1), (b, b1, 1)]
        else:
            a, a1 = r(), r()
            pat = [(k, comm(a, a1), 1), (a, a1, 1), (b, b1, 1)]
    elif rule == "R11":
        x = r()
        o = G.element_order(x)
        nn, ss = rng.randrange(o), rng.randrange(o)
        if fwd:
            pat, params = [(G.power(x, nn), G.power(x, ss), rng.choice((1, -1)))], (x, nn, ss)
        else:
            pat, params = [], (x, nn, ss, rng.choice((1, -1)))
    elif rule == "SWAP":
        pat = [(r(), r(), 1), (r(), r(), 1)]
    elif rule == "FREE":
        if fwd:
            x, y, e = r(), r(), rng.choice((1, -1))
            pat = [(x, y, e), (x, y, -e)]
        else:
            pat, params = [], (r(), r(), rng.choice((1, -1)))
    else:
        raise ValueError(f"unknown rule {rule!r}")
    # multi-letter uniform patterns may also be matched in inverted form
    if rule in ("R3", "R4", "R5", "R8", "R9", "R10") and rng.random() < 0.5:
        pat = list(_inv(pat))
    return pat, params


def random_move(w: PairWord, rule: str, rng, direction: str | None = None):
    """Apply ``rule`` once somewhere in ``w``.

    If the word has no matching segment, a block ``P P^-1`` is first spliced
    in by free insertions, where P matches the chosen side of the rule.
    Returns (setup steps, main step, result).
    """
    G = w.group
    direction = direction or rng.choice(("forward", "backward"))
    setup = []
    pat, params = random_pattern(G, rule, direction, rng)
    local = _local_match(w, rule, direction, rng)
    if local is not None and rng.random() < 0.5:
        pos, params2 = local
        if rule in ("R3", "R4", "R5") and direction == "forward":
            params2 = params
        params = params2
    else:
        pos = rng.randrange(len(w) + 1)
        for i, (x, y, e) in enumerate(pat):
            w, st = apply_relation(w, "FREE", pos + i, (x, y, e), "backward")
            setup.append(st)
    w, st = apply_relation(w, rule, pos, params, direction)
    return setup, st, w


def _local_match(w: PairWord, rule, direction, rng):
    """Some in-place position where ``rule`` applies without setup, or None."""
    L = w.letters
    n = len(L)
    if not n:
        return None
    if rule == "R2":
        return rng.randrange(n), ()
    if rule == "SWAP":
        cand = [i for i in range(n - 1) if L[i][2] == 1 and L[i + 1][2] == 1]
        return (rng.choice(cand), ()) if cand else None
    if direction == "forward" and rule in ("R3", "R4", "R5"):
        return rng.randrange(n), ()
    if direction == "forward" and rule in ("R8", "R9", "R10"):
        cand = [i for i in range(n - 1) if L[i][2] == L[i + 1][2]]
        return (rng.choice(cand), ()) if cand else None
    if direction == "backward" and rule == "R6":
        G = w.group
        return rng.randrange(n), (rng.randrange(G.order), rng.randrange(G.order), rng.choice((1, -1)))
    return None
