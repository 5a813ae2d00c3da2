import random

import pytest

from gcobord.classify import (ClassificationResult, NotApplicableError, applicable_methods, classify,
                              classify_abelian, classify_dihedral, classify_oracle,
                              classify_symmetric, classify_via_sylow, dihedral_exponent,
                              dihedral_generator, sort_by_fixed_point, sylow_multiplier,
                              symmetric_generator)
from gcobord.groups import build_group, commutator_product
from gcobord.homology import NotInZError, OracleBoundError, class_of
from gcobord.pairword import PairWord, in_Z, random_z_word

U = [("(1,2)", "(3,4)")]
V = [("(1,2)(3,4)", "(1,3)(2,4)")]


def test_abelian_examples():
    Z6 = build_group("Z6")
    rng = random.Random(0)
    for _ in range(20):
        r = classify_abelian(random_z_word(Z6, rng, 4))
        assert r.cls.is_zero() and r.method == "abelian"
    K = build_group("Z2xZ2")
    w = PairWord.parse(K, [("(1,0)", "(0,1)")])
    assert classify_abelian(w).cls.coords == (1,)
    assert classify_abelian(w + w).cls.is_zero()
    with pytest.raises(NotApplicableError):
        classify_abelian(PairWord(build_group("S3"), ()))


def test_abelian_matches_oracle_outside_vector_notation():
    G = build_group("D4")
    rng = random.Random(1)
    for _ in range(40):
        w = random_z_word(G, rng, 3, flip=0.3)
        assert classify_abelian(w).cls.is_zero() == class_of(G, w).is_zero()


def test_dihedral_examples():
    D8 = build_group("D8")
    r = classify_dihedral(PairWord.parse(D8, [("c^2", "a")]))
    assert r.cls.coords == (1,) and r.describe() == "1 (generator)"
    w = PairWord.parse(D8, [("c", "a"), ("c", "a")])
    r = classify_dihedral(w)
    assert r.cls.coords == (1,) and r.cls == class_of(D8, w)
    assert r.trace.replay(w) == r.representative
    D12 = build_group("D12")
    assert classify_dihedral(PairWord.parse(D12, [("c^3", "a")])).cls.coords == (1,)
    D10 = build_group("D10")
    rng = random.Random(2)
    for _ in range(30):
        r = classify_dihedral(random_z_word(D10, rng, 4, flip=0.3))
        assert r.cls.is_zero() and len(r.representative) == 0


def test_dihedral_exponent_table():
    D8 = build_group("D8")
    p = D8.parse
    assert dihedral_exponent(D8, p("c"), p("c^3")) == 0
    assert dihedral_exponent(D8, p("c^3"), p("a*c")) == 3
    assert dihedral_exponent(D8, p("a*c"), p("c^2")) == -2
    assert dihedral_exponent(D8, p("a*c"), p("a*c^3")) == 2


def test_dihedral_generator():
    for k in (1, 2, 3):
        G = build_group(f"D{4 * k}")
        g = dihedral_generator(G)
        assert in_Z(g) and not class_of(G, g).is_zero()


def test_dihedral_rejects():
    with pytest.raises(NotApplicableError):
        classify_dihedral(PairWord(build_group("S4"), ()))
    D8 = build_group("D8")
    with pytest.raises(NotInZError):
        classify_dihedral(PairWord.parse(D8, [("c", "a")]))


def test_symmetric_examples():
    S4 = build_group("S4")
    r = classify_symmetric(PairWord.parse(S4, U))
    assert r.cls.coords == (1,) and r.describe() == "1 (generator)"
    assert classify_symmetric(PairWord.parse(S4, [("(1,2)", "(1,3)"), ("(1,3)", "(1,2)")])).cls.is_zero()
    assert classify_symmetric(PairWord.parse(S4, V)).cls.coords == (1,)
    assert symmetric_generator(S4) == PairWord.parse(S4, U)
    S3 = build_group("S3")
    rng = random.Random(3)
    for _ in range(10):
        assert classify_symmetric(random_z_word(S3, rng, 3)).cls.is_zero()


def test_symmetric_trace_replays():
    S4 = build_group("S4")
    rng = random.Random(4)
    for _ in range(30):
        w = random_z_word(S4, rng, 3, flip=0.3)
        r = classify_symmetric(w)
        out = r.trace.replay(w)
        assert in_Z(out) and class_of(S4, out) == class_of(S4, w)
        assert isinstance(r.details["constructive"], bool) and r.details["path"]


def test_symmetric_matches_oracle_s5():
    S5 = build_group("S5")
    rng = random.Random(5)
    for _ in range(15):
        w = random_z_word(S5, rng, 3, flip=0.3)
        a = classify_symmetric(w).cls
        b = classify_via_sylow(w).sylow_components[2]
        assert a.is_zero() == b.is_zero()


def test_sort_by_fixed_point_s7():
    G = build_group("S7")
    w = PairWord.parse(G, [("(6,7)", "(1,2)"), ("(1,2)", "(3,4)"), ("(5,6)", "(1,2)")])
    pre, suf, trace = sort_by_fixed_point(w, 7)
    assert len(pre) == 2 and len(suf) == 1
    assert all("7" not in G.render(x) + G.render(y) for x, y, _ in pre.letters)
    assert trace.replay(w) == pre + suf
    assert commutator_product(G, pre + suf) == commutator_product(G, w)


def test_sort_by_fixed_point_trivial_and_errors():
    S4 = build_group("S4")
    w = PairWord.parse(S4, U)
    pre, suf, _ = sort_by_fixed_point(w, 4)
    assert len(pre) == 0 and suf == w
    w2 = PairWord.parse(S4, [("(1,2)", "(1,3)"), ("(1,3)", "(1,2)")])
    pre, suf, trace = sort_by_fixed_point(w2, 4)
    assert pre == w2 and len(suf) == 0 and len(trace) == 0
    with pytest.raises(ValueError):
        sort_by_fixed_point(w, 5)


def test_sort_preserves_class():
    S4 = build_group("S4")
    rng = random.Random(6)
    for _ in range(30):
        w = random_z_word(S4, rng, 4)
        pre, suf, _ = sort_by_fixed_point(w, rng.randrange(1, 5))
        assert class_of(S4, pre + suf) == class_of(S4, w)


def test_sylow_examples():
    A5 = build_group("A5")
    r = classify_via_sylow(PairWord.parse(A5, V))
    assert not r.sylow_components[2].is_zero()
    assert r.sylow_components[3].is_zero() and r.sylow_components[5].is_zero()
    S4 = build_group("S4")
    r = classify_via_sylow(PairWord.parse(S4, U))
    assert r.sylow_components[2].coords == (1,) and r.sylow_components[3].is_zero()
    G = build_group("Z2xZ2xZ2")
    rng = random.Random(7)
    for _ in range(20):
        w = random_z_word(G, rng, 3)
        assert classify_via_sylow(w).cls == classify_oracle(w).cls


def test_sylow_restart_invariance():
    for spec in ("S4", "A4", "A5"):
        G = build_group(spec)
        rng = random.Random(spec)
        words = [random_z_word(G, rng, 3) for _ in range(10)] + [PairWord.parse(G, V)]
        for w in words:
            base = classify_via_sylow(w).sylow_components
            for start in (1, 5, 17):
                other = classify_via_sylow(w, start=start).sylow_components
                assert {p: c.coords for p, c in other.items()} == {p: c.coords for p, c in base.items()}


def test_sylow_bound():
    with pytest.raises(OracleBoundError):
        classify_via_sylow(PairWord(build_group("S7"), ()), oracle_bound=8)


def test_dispatcher():
    Z6 = build_group("Z6")
    r = classify(PairWord.parse(Z6, [("1", "2")]))
    assert r.method == "abelian" and r.cls.is_zero()
    D8 = build_group("D8")
    r = classify(PairWord.parse(D8, [("c^2", "a")]), test_mode=True)
    assert r.method == "dihedral" and r.cls.coords == (1,)
    assert set(r.details["checked_against"]) == {"sylow", "oracle"}
    A5 = build_group("A5")
    assert applicable_methods(A5)[0] == "sylow"
    assert classify(PairWord.parse(A5, V)).method == "sylow"
    with pytest.raises(NotApplicableError):
        classify(PairWord.parse(D8, [("c^2", "a")]), method="symmetric")
    with pytest.raises(NotInZError):
        classify(PairWord.parse(D8, [("c", "a")]))


@pytest.mark.parametrize("spec", ["D8", "D12", "S4", "A4", "Z2xZ4", "S5"])
def test_test_mode_agreement(spec):
    G = build_group(spec)
    rng = random.Random(spec)
    for _ in range(15):
        classify(random_z_word(G, rng, 4, flip=0.3), test_mode=True)


@pytest.mark.parametrize("spec", ["D8", "S4", "A4", "D12"])
def test_conjugation_invariance(spec):
    G = build_group(spec)
    rng = random.Random(8)
    for _ in range(30):
        w = random_z_word(G, rng, 4, flip=0.3)
        g = rng.randrange(G.order)
        assert classify(w).cls == classify(w.conjugate(g)).cls


@pytest.mark.parametrize("spec,want", [("S5", (2,)), ("A6", (6,)), ("A7", (6,)), ("S6", (2,)),
                                       ("S4", (2,)), ("A4", (2,)), ("D12", (2,)), ("Z3xZ3", (3,))])
def test_sylow_multiplier(spec, want):
    assert sylow_multiplier(build_group(spec))["factors"] == want


def test_result_describe():
    r = ClassificationResult(class_of(build_group("D8"), PairWord(build_group("D8"), ())), "oracle")
    assert r.describe() == "0"
