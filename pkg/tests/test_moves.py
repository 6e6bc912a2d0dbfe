import random

import pytest

import oracles
from combitri.complex_core import boundary_complex, build_complex, f_vector, pseudomanifold_report
from combitri.constructions import BOUNDED_FIXTURES, boundary_of_simplex, fixture
from combitri.errors import ClosedInput, EmptyResult, IllegalMove, IllegalShelling, NotAFace, NotAFacet
from combitri.fvector import d_vector
from combitri.io import read_log, write_log
from combitri.moves import (
    FRESH,
    BistellarMove,
    MoveLog,
    ShellingMove,
    apply_bistellar,
    apply_shelling,
    enumerate_bistellar,
    enumerate_shellings,
    induced_boundary_move,
    move_from_json,
    one_face_exposed,
    star_subdivide_along_face,
)

S2 = boundary_of_simplex(2)
BIPYRAMID = fixture("bipyramid")
DISK_TWO = fixture("disk_two")


def scrambled(name, k, seed):
    C = fixture(name)
    rng = random.Random(seed)
    for _ in range(k):
        C = apply_bistellar(C, rng.choice(enumerate_bistellar(C)))
    return C


# ---- enumeration ----

def test_sphere_has_no_one_moves():
    assert enumerate_bistellar(S2, 1) == []


def test_sphere_zero_moves():
    ms = enumerate_bistellar(S2, 0)
    assert len(ms) == 4 and all(m.tau == (FRESH,) for m in ms)


def test_bipyramid_flip_listed():
    assert BistellarMove(1, (1, 2), (4, 5)) in enumerate_bistellar(BIPYRAMID, 1)


def test_enumeration_sorted():
    ms = enumerate_bistellar(scrambled("icosahedron", 4, 1))
    assert ms == sorted(ms)


@pytest.mark.parametrize("C", [S2, BIPYRAMID, fixture("torus7"), fixture("rp2_6"),
                               boundary_of_simplex(3), scrambled("sphere2_min", 5, 3),
                               scrambled("sphere3_min", 3, 4), scrambled("torus7", 3, 2)],
                         ids=lambda C: f"{C.name}-{len(C.facets)}")
def test_enumeration_matches_brute_force(C):
    assert len(C.facets) <= 20
    got = {(m.i, m.sigma, m.tau) for m in enumerate_bistellar(C)}
    assert got == oracles.brute_bistellar(C.facets, C.dim)


# ---- application ----

def test_zero_move_gives_bipyramid():
    B = apply_bistellar(S2, BistellarMove(0, (1, 2, 3), (5,)))
    assert B.facet_set == BIPYRAMID.facet_set
    assert f_vector(B).f == (5, 9, 6)


def test_placeholder_resolves_to_next_id():
    B = apply_bistellar(S2, BistellarMove(0, (1, 2, 3), (FRESH,)))
    assert B.facet_set == BIPYRAMID.facet_set


def test_inverse_returns_sphere():
    back = apply_bistellar(BIPYRAMID, BistellarMove(2, (5,), (1, 2, 3)))
    assert back.facet_set == S2.facet_set


def test_middle_flip_keeps_f():
    out = apply_bistellar(BIPYRAMID, BistellarMove(1, (1, 2), (4, 5)))
    assert f_vector(out).f == f_vector(BIPYRAMID).f
    assert out.facet_set != BIPYRAMID.facet_set


def test_illegal_tau_is_face():
    with pytest.raises(IllegalMove) as err:
        apply_bistellar(S2, BistellarMove(1, (1, 2), (3, 4)))
    assert err.value.exit_code == 3 and err.value.witness == ((1, 2), (3, 4))


def test_illegal_link():
    with pytest.raises(IllegalMove):
        apply_bistellar(fixture("icosahedron"), BistellarMove(2, (1,), (2, 3, 4)))


@pytest.mark.parametrize("name", ["sphere2_min", "bipyramid", "icosahedron", "torus7", "rp2_6",
                                  "sphere3_min", "sphere4_min"])
def test_move_delta_and_inverse(name):
    C = scrambled(name, 2, 7)
    for m in enumerate_bistellar(C):
        after = apply_bistellar(C, m)
        assert f_vector(after) - f_vector(C) == d_vector(C.dim, m.i).d
        assert apply_bistellar(after, m.resolved(C).inverse()).facet_set == C.facet_set
        assert pseudomanifold_report(after).status == pseudomanifold_report(C).status


def test_move_json_roundtrip():
    m = BistellarMove(1, (2, 1), (5, 4))
    assert m.to_json() == {"kind": "bistellar", "sigma": [1, 2], "tau": [4, 5], "i": 1}
    assert move_from_json(m.to_json()) == m
    s = ShellingMove(0, (4,), (2, 3))
    assert move_from_json(s.to_json()) == s


# ---- shellings ----

def test_shelling_listing_disk_two():
    ms = enumerate_shellings(DISK_TWO)
    assert ShellingMove(0, (4,), (2, 3)) in ms
    assert all(not (m.facet == (1, 2, 3) and m.tau == (1, 2)) for m in ms)


def test_shelling_single_facet_excluded():
    C = build_complex([[1, 2, 3]])
    assert enumerate_shellings(C) == []
    with pytest.raises(EmptyResult):
        apply_shelling(C, ShellingMove(0, (1,), (2, 3)))


def test_shelling_closed_input():
    with pytest.raises(ClosedInput):
        enumerate_shellings(S2)


def test_apply_shelling_disk_two():
    out = apply_shelling(DISK_TWO, ShellingMove(0, (4,), (2, 3)))
    assert out.facets == ((1, 2, 3),)
    assert len(boundary_complex(out).facets) == 3
    # the facet {234} owned vertex 4, edges {24},{34} and itself
    assert f_vector(out) - f_vector(DISK_TWO) == (-1, -2, -1)


def test_interior_edge_pair_decided_like_oracle():
    # sigma={1}, tau={2,3}: tau is interior and meets ∂ in its endpoints, sigma*∂tau is on ∂
    m = ShellingMove(0, (1,), (2, 3))
    legal = m in enumerate_shellings(DISK_TWO)
    assert legal == ((0, (1,), (2, 3)) in oracles.brute_shellings(DISK_TWO.facets))
    assert legal


def test_illegal_shelling_raises():
    with pytest.raises(IllegalShelling):
        apply_shelling(DISK_TWO, ShellingMove(1, (1, 2), (3,)))


@pytest.mark.parametrize("name", BOUNDED_FIXTURES)
def test_shellings_match_brute_force(name):
    C = fixture(name)
    got = {(m.i, m.sigma, m.tau) for m in enumerate_shellings(C)}
    assert got == oracles.brute_shellings(C.facets)


def test_induced_move_disk_two():
    m = induced_boundary_move(DISK_TWO, ShellingMove(0, (4,), (2, 3)))
    assert m == BistellarMove(1, (4,), (2, 3))


def test_induced_move_dim3_two_shelling():
    C = fixture("ball3_cone")
    m = induced_boundary_move(C, ShellingMove(2, (1, 2, 3), (5,)))
    assert m.i == 0 and m.sigma == (1, 2, 3) and m.tau == (5,)


@pytest.mark.parametrize("name", BOUNDED_FIXTURES)
def test_induced_moves_diff_boundaries(name):
    C = fixture(name)
    for s in enumerate_shellings(C):
        m = induced_boundary_move(C, s)
        assert m.i + s.i == C.dim - 1
        B0, B1 = boundary_complex(C), boundary_complex(apply_shelling(C, s))
        assert apply_bistellar(B0, m).facet_set == B1.facet_set


# ---- star subdivision and exposure ----

def test_star_subdivide_single_triangle():
    C = build_complex([[1, 2, 3]])
    out = star_subdivide_along_face(C, (1, 2, 3), (1, 2))
    assert out.facet_set == {(1, 4, 5), (2, 4, 5), (2, 3, 5), (1, 3, 5)}
    assert f_vector(out).f == (5, 8, 4)


def test_star_subdivide_boundary_change():
    C = fixture("disk_cone")
    out = star_subdivide_along_face(C, (1, 2, 4), (1, 2))
    assert f_vector(boundary_complex(out)) - f_vector(boundary_complex(C)) == (1, 1)


def test_star_subdivide_errors():
    C = fixture("disk_two")
    with pytest.raises(NotAFacet):
        star_subdivide_along_face(C, (1, 2, 4), (1, 2))
    with pytest.raises(NotAFace):
        star_subdivide_along_face(C, (1, 2, 3), (1, 4))
    with pytest.raises(IllegalMove):
        star_subdivide_along_face(C, (1, 2, 3), (2, 3))


def test_one_face_exposed_examples():
    assert one_face_exposed(DISK_TWO) == []
    got = one_face_exposed(fixture("disk_cone"))
    assert sorted(got) == [((1, 2, 4), (1, 2)), ((1, 3, 4), (1, 3)), ((2, 3, 4), (2, 3))]
    with pytest.raises(ClosedInput):
        one_face_exposed(S2)


@pytest.mark.parametrize("name", ["disk_cone", "disk_square", "disk_hex", "ball3_cone"])
def test_subdivision_adds_n_exposed(name):
    C = fixture(name)
    F, G = one_face_exposed(C)[0]
    out = star_subdivide_along_face(C, F, G)
    before = {f for f, _ in one_face_exposed(C)}
    after = {f for f, _ in one_face_exposed(out)}
    assert len(after - before) == C.dim
    assert before - after == {F}


# ---- logs ----

def test_log_replay_reproduces_end():
    C = fixture("torus7")
    rng = random.Random(3)
    log = MoveLog()
    cur = C
    for _ in range(6):
        m = rng.choice(enumerate_bistellar(cur)).resolved(cur)
        nxt = apply_bistellar(cur, m)
        log.append("bistellar", m.to_json(), cur, nxt)
        cur = nxt
    again = C
    for rec in read_log(write_log(log)):
        before = f_vector(again).f
        again = apply_bistellar(again, move_from_json(rec["params"]))
        assert list(before) == rec["f_before"] and list(f_vector(again).f) == rec["f_after"]
    assert again.facets == cur.facets
