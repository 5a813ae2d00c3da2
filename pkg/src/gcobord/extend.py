"""Extension certificates for closed-surface G-bundles.

A certificate lists genus-one pieces (commuting monodromy pairs), a recipe
for each (a rotation disc times a circle bundle), and a rewrite trace taking
the input word to the product of the pieces.  Branched constructions carry
Riemann-Hurwitz data that is checked with exact rational arithmetic.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .classify import classify_dihedral, is_dihedral
from .groups import GroupTable, build_group, closure, commutator
from .homology import class_of
from .pairword import PairWord, RewriteError, RewriteTrace, SurfaceWord, from_surface


class CertificateError(ValueError):
    pass


@dataclass(frozen=True)
class GenusOnePiece:
    g: int
    k: int
    commuting: bool = True

    def letter(self):
        return (self.g, self.k, 1)


@dataclass(frozen=True)
class Recipe:
    """Disc rotation by 2*pi/|g| times the circle bundle with monodromy k."""
    rotation_order: int
    isotropy: tuple          # elements of <g>
    fixed_locus: str         # "center circle", or "none" when g is trivial
    circle_monodromy: int


@dataclass(frozen=True)
class BranchData:
    N: int
    h: int
    branch: tuple
    chi: int


@dataclass
class ExtensionCertificate:
    group: GroupTable
    kind: str
    pieces: list
    recipes: list
    provenance: RewriteTrace
    branch: list = field(default_factory=list)

    def piece_word(self) -> PairWord:
        return PairWord(self.group, tuple(p.letter() for p in self.pieces))

    def to_json(self) -> dict:
        G = self.group
        return {
            "group": G.spec,
            "kind": self.kind,
            "pieces": [{"g": G.render(p.g), "k": G.render(p.k), "commuting": p.commuting}
                       for p in self.pieces],
            "recipe": [{"rotation_order": r.rotation_order,
                        "isotropy": [G.render(x) for x in r.isotropy],
                        "fixed_locus": r.fixed_locus,
                        "circle_monodromy": G.render(r.circle_monodromy)} for r in self.recipes],
            "provenance": self.provenance.to_json(G),
            "branch": [{"N": b.N, "h": b.h, "branch": list(b.branch), "chi": b.chi} for b in self.branch],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, d: dict) -> "ExtensionCertificate":
        G = build_group(d["group"])
        pieces = [GenusOnePiece(G.parse(p["g"]), G.parse(p["k"]), bool(p.get("commuting", True)))
                  for p in d.get("pieces", [])]
        recipes = [Recipe(int(r["rotation_order"]), tuple(G.parse(x) for x in r["isotropy"]),
                          r["fixed_locus"], G.parse(r["circle_monodromy"])) for r in d.get("recipe", [])]
        branch = [BranchData(int(b["N"]), int(b["h"]), tuple(b["branch"]), int(b["chi"]))
                  for b in d.get("branch", [])]
        return cls(G, d.get("kind", ""), pieces, recipes,
                   RewriteTrace.from_json(d.get("provenance", {}), G), branch)


def _recipe(G: GroupTable, g: int, k: int) -> Recipe:
    return Recipe(G.element_order(g), tuple(closure(G, [g])),
                  "center circle" if g else "none", k)


def _piece(G: GroupTable, g: int, k: int) -> GenusOnePiece:
    if commutator(G, g, k):
        raise CertificateError(f"pair ({G.render(g)}, {G.render(k)}) does not commute")
    return GenusOnePiece(g, k, True)


def genus_one_certificate(G: GroupTable, g: int, k: int) -> ExtensionCertificate:
    piece = _piece(G, g, k)
    w = PairWord(G, (piece.letter(),))
    return ExtensionCertificate(G, "genus-one", [piece], [_recipe(G, g, k)],
                                RewriteTrace(initial=w.digest()))


def decompose_abelian(s: SurfaceWord) -> ExtensionCertificate:
    """One piece per handle: handle (y, x) gives g = x, k = y."""
    G = s.group
    if not G.is_abelian():
        raise CertificateError(f"{G.spec} is not abelian")
    w = from_surface(s)
    pieces = [_piece(G, x, y) for x, y, _ in w.letters]
    return ExtensionCertificate(G, "abelian", pieces, [_recipe(G, p.g, p.k) for p in pieces],
                                RewriteTrace(initial=w.digest()))


def dihedral_sphere_branch(n: int) -> BranchData:
    """D_2n acting on the sphere with quotient a sphere branched over (2, 2, n)."""
    return BranchData(2 * n, 0, (2, 2, n), 2)


def dihedral_reduction_certificate(w: PairWord) -> ExtensionCertificate:
    G = w.group
    if not is_dihedral(G):
        raise CertificateError(f"{G.spec} is not a dihedral table")
    res = classify_dihedral(w)
    pieces = [_piece(G, x, y) for x, y, _ in res.representative.letters]
    branch = [dihedral_sphere_branch(G.meta["n"])] if pieces else []
    return ExtensionCertificate(G, "dihedral", pieces, [_recipe(G, p.g, p.k) for p in pieces],
                                res.trace, branch)


def hyperelliptic_branch_data(h: int, r: int) -> BranchData:
    """Involution with quotient genus h and r (even) fixed points."""
    return BranchData(2, h, (2,) * r, 2 * (2 - 2 * h) - r)


def riemann_hurwitz_check(b: BranchData) -> dict:
    expected = b.N * (2 - 2 * b.h - sum(1 - Fraction(1, m) for m in b.branch))
    valid = [m >= 2 for m in b.branch]
    divides = [m >= 1 and b.N % m == 0 for m in b.branch]
    ok = expected == b.chi and all(valid) and all(divides)
    return {"passed": ok, "expected_chi": str(expected), "chi": b.chi,
            "residual": str(b.chi - expected), "orders_valid": all(valid),
            "orders_divide_N": all(divides)}


def validate_certificate(c: ExtensionCertificate, w: PairWord, oracle: bool = False) -> dict:
    """Checks: (a) provenance replay, (b) commuting pieces, (c) rotation orders, (d) branch data.

    With ``oracle=True`` the input and the piece word are also compared in M(G).
    """
    G = c.group
    report = {}
    try:
        end = c.provenance.replay(w)
        report["replay"] = end.letters == c.piece_word().letters
    except (RewriteError, ValueError):
        report["replay"] = False
    report["commuting"] = all(p.commuting and not commutator(G, p.g, p.k) for p in c.pieces)
    report["rotation_order"] = (len(c.recipes) == len(c.pieces) and
                                all(r.rotation_order == G.element_order(p.g)
                                    and set(r.isotropy) == set(closure(G, [p.g]))
                                    for p, r in zip(c.pieces, c.recipes)))
    report["branch"] = all(riemann_hurwitz_check(b)["passed"] for b in c.branch)
    if oracle:
        report["oracle"] = class_of(G, w) == class_of(G, c.piece_word())
    report["passed"] = all(report.values())
    return report
