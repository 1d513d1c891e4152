import pytest

from helpers import mid, naive_retract_closed_subsets, naive_split_search
from rigidcat.builders import fixture, from_monoid
from rigidcat.errors import NotCauchyComplete, NotIdempotent, TooManyObjects
from rigidcat.karoubi import (cauchy_complete_full_subcategories,
                              envelope_export, is_cauchy_complete,
                              karoubi_envelope, split_idempotent)

ONE = fixture("one")
P2 = fixture("p2")
M2 = fixture("m2")
D1 = fixture("delta1")
KM2 = fixture("karoubi_m2")


def test_split_identity():
    for C in (ONE, P2, M2):
        for x in range(len(C.objects)):
            sp = split_idempotent(C, C.identity[x])
            assert sp.through == x
            assert sp.r == C.identity[x] and sp.s == C.identity[x]


def test_split_rejects_non_idempotent():
    with pytest.raises(NotIdempotent):
        split_idempotent(P2, mid(P2, "a<b"))


def test_m2_idempotent_does_not_split():
    assert split_idempotent(M2, mid(M2, "e")) is None
    assert naive_split_search(M2, mid(M2, "e")) is None


def test_delta1_constant_splits_through_point():
    c0 = mid(D1, "00:1->1")
    sp = split_idempotent(D1, c0)
    assert D1.objects[sp.through] == "[0]"
    assert sp.r == mid(D1, "00:1->0")
    assert sp.s == mid(D1, "0:0->1")
    assert D1.comp[sp.r][sp.s] == c0
    assert D1.comp[sp.s][sp.r] == D1.identity[sp.through]


def test_is_cauchy_complete():
    assert is_cauchy_complete(ONE).complete
    v = is_cauchy_complete(M2)
    assert not v.complete and M2.morphisms[v.witness].name == "e"
    assert is_cauchy_complete(KM2).complete
    assert is_cauchy_complete(D1).complete


def test_karoubi_envelope_one():
    env = karoubi_envelope(ONE)
    assert len(env.envelope.objects) == 1
    assert env.equivalent_to_base


def test_karoubi_envelope_p2_trivial():
    env = karoubi_envelope(P2)
    assert len(env.envelope.objects) == 2
    assert len(env.envelope.morphisms) == 3
    assert env.equivalent_to_base


def test_karoubi_envelope_m2_counts():
    env = karoubi_envelope(M2).envelope
    assert set(env.objects) == {"id_*", "e"}
    assert len(env.morphisms) == 5
    one, e = env.object_index["id_*"], env.object_index["e"]
    assert len(env.hom(one, one)) == 2
    assert len(env.hom(one, e)) == 1
    assert len(env.hom(e, one)) == 1
    assert len(env.hom(e, e)) == 1
    assert is_cauchy_complete(env).complete


def test_envelope_embedding_full_and_faithful():
    for C in (M2, P2, D1):
        env = karoubi_envelope(C)
        E = env.envelope
        for x in range(len(C.objects)):
            for y in range(len(C.objects)):
                ex = E.object_index[env.embedding[C.objects[x]]]
                ey = E.object_index[env.embedding[C.objects[y]]]
                assert len(C.hom(x, y)) == len(E.hom(ex, ey))


def test_envelope_idempotent_completion_is_idempotent():
    for C in (M2, P2, fixture("chain3")):
        E1 = karoubi_envelope(C).envelope
        env2 = karoubi_envelope(E1)
        E2 = env2.envelope
        assert is_cauchy_complete(E1).complete
        assert env2.equivalent_to_base
        # no new objects up to isomorphism
        embedded = {E2.object_index[n] for n in env2.embedding.values()}
        for y in range(len(E2.objects)):
            assert any(E2.objects_isomorphic(y, x) for x in embedded)


def test_cauchy_complete_iff_envelope_adds_nothing():
    for C in (ONE, P2, M2, D1, KM2):
        env = karoubi_envelope(C)
        assert is_cauchy_complete(C).complete == env.equivalent_to_base


def test_subcategories_one():
    assert cauchy_complete_full_subcategories(ONE) == [(), ("*",)]


def test_subcategories_delta1():
    subs = cauchy_complete_full_subcategories(D1)
    assert subs == [(), ("[0]",), ("[0]", "[1]")]
    assert naive_retract_closed_subsets(D1) == {tuple(sorted(s)) for s in subs}


def test_subcategories_karoubi_m2():
    subs = cauchy_complete_full_subcategories(KM2)
    assert len(subs) == 3
    assert {tuple(sorted(s)) for s in subs} == {(), ("e",), ("e", "id_*")}
    assert naive_retract_closed_subsets(KM2) == {tuple(sorted(s)) for s in subs}


def test_subcategories_refuse_incomplete():
    with pytest.raises(NotCauchyComplete):
        cauchy_complete_full_subcategories(M2)


def test_subcategories_guard():
    with pytest.raises(TooManyObjects):
        cauchy_complete_full_subcategories(D1, guard=1)


def test_subcategories_closed_under_intersection():
    for C in (ONE, P2, D1, KM2, fixture("delta2")):
        subs = {frozenset(s) for s in cauchy_complete_full_subcategories(C)}
        assert frozenset(C.objects) in subs
        for a in subs:
            for b in subs:
                assert a & b in subs


def test_envelope_export_sidecar():
    out = envelope_export(karoubi_envelope(M2))
    assert out["embedding"] == {"*": "id_*"}
    assert {m["name"] for m in out["morphisms"]} == {
        "e@id_*→id_*", "e@id_*→e", "e@e→id_*"}


def test_envelope_of_cyclic_monoid():
    # {1, f, f^2, f^3 = f^2}: the idempotent power f^2 splits in the envelope
    C = from_monoid(["1", "f", "f2"], [[0, 1, 2], [1, 2, 2], [2, 2, 2]],
                    name="cyclic")
    assert not is_cauchy_complete(C).complete
    env = karoubi_envelope(C).envelope
    assert is_cauchy_complete(env).complete
    assert len(env.objects) == 2
