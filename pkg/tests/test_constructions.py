import json
from dataclasses import replace

import pytest

from combitri.complex_core import (
    _make,
    build_complex,
    euler_characteristic,
    f_counts,
    f_vector,
    is_closed,
    link,
)
from combitri.constructions import (
    CLOSED_FIXTURES,
    BOUNDED_FIXTURES,
    PlumpCell,
    boundary_of_simplex,
    build_mold_cell,
    build_plump_cell,
    cell_from_json,
    fixture,
    implant_mold,
    implant_plump,
    mold_to_json,
    plump_to_json,
    verify_cell,
    verify_mold,
    verify_plump,
)
from combitri.errors import UnknownFixture, UnsupportedDimension
from combitri.fvector import ds_residual_closed
from combitri.moves import (
    FRESH,
    BistellarMove,
    apply_bistellar,
    apply_shelling,
    induced_boundary_move,
    is_legal_bistellar,
)
from combitri.complex_core import boundary_complex


@pytest.mark.parametrize("n,f", [(0, (2,)), (2, (4, 6, 4)), (3, (5, 10, 10, 5))])
def test_boundary_of_simplex(n, f):
    assert tuple(f_counts(boundary_of_simplex(n))) == f


def test_fixture_examples():
    T = fixture("torus7")
    assert len(T.facets) == 14 and is_closed(T)
    assert all(len(link(T, (v,)).facets) == 6 for v in T.vertices)
    P = fixture("rp2_6")
    assert len(P.facets) == 10 and euler_characteristic(P) == 1
    assert tuple(f_counts(fixture("icosahedron"))) == (12, 30, 20)


def test_fixture_groups():
    assert all(is_closed(fixture(n)) for n in CLOSED_FIXTURES)
    assert not any(is_closed(fixture(n)) for n in BOUNDED_FIXTURES)


def test_unknown_fixture():
    with pytest.raises(UnknownFixture) as err:
        fixture("klein_bottle")
    assert err.value.exit_code == 4


# ---- plump cells ----

def test_hand_built_plump_path():
    # a - x - y - z - b with a=1, b=2, x=3, y=4, z=5
    disk = build_complex([[1, 3], [3, 4], [4, 5], [2, 5]])
    cell = PlumpCell(1, disk, (1, 2), {0: BistellarMove(0, (3, 4), (FRESH,)),
                                       1: BistellarMove(1, (4,), (3, 5))})
    assert verify_plump(cell).ok


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_build_plump(n):
    cell = build_plump_cell(n)
    cert = verify_plump(cell)
    assert cert.ok, cert.summary()
    assert sorted(cell.prepared_moves) == list(range(n + 1))


def test_plump_deterministic():
    a, b = build_plump_cell(2, seed=7), build_plump_cell(2, seed=7)
    assert plump_to_json(a) == plump_to_json(b)


def test_bare_simplex_is_not_plump():
    disk = build_complex([[1, 2, 3]])
    cert = verify_plump(PlumpCell(2, disk, (1, 2, 3), {}))
    assert not cert.ok
    assert "missing prepared 1-move (none exists)" in cert.summary()


def test_plump_tamper_drop_move():
    cell = build_plump_cell(2)
    moves = dict(cell.prepared_moves)
    del moves[1]
    cert = verify_plump(replace(cell, prepared_moves=moves))
    assert not cert.ok and cert.witness == ("missing-type", 1)


def test_plump_tamper_boundary_move():
    cell = build_plump_cell(2)
    # a 0-move on a facet touching the boundary changes a boundary star
    F = next(f for f in cell.disk.facets if set(f) & set(cell.boundary_labels))
    moves = dict(cell.prepared_moves)
    moves[0] = BistellarMove(0, F, (FRESH,))
    assert not verify_plump(replace(cell, prepared_moves=moves)).ok


def test_plump_tamper_illegal_move():
    cell = build_plump_cell(2)
    moves = dict(cell.prepared_moves)
    m = moves[1]
    moves[1] = BistellarMove(1, m.sigma, (m.tau[0], cell.boundary_labels[0]))
    assert not verify_plump(replace(cell, prepared_moves=moves)).ok


def test_plump_tamper_boundary_shape():
    cell = build_plump_cell(2)
    F = cell.disk.facets[-1]
    disk = _make(2, [f for f in cell.disk.facets if f != F])
    assert not verify_plump(replace(cell, disk=disk)).ok


@pytest.mark.parametrize("host", ["sphere2_min", "icosahedron", "torus7", "rp2_6"])
def test_implant_plump_keeps_ds_and_legality(host):
    C = fixture(host)
    cell = build_plump_cell(2)
    F = C.facets[3]
    C2, moves = implant_plump(C, F, cell)
    assert euler_characteristic(C2) == euler_characteristic(C)
    assert not any(ds_residual_closed(f_vector(C2)))
    for m in moves.values():
        assert is_legal_bistellar(C2, m)


def test_implant_plump_dim3():
    C = fixture("sphere3_min")
    C2, moves = implant_plump(C, C.facets[0], build_plump_cell(3))
    assert not any(ds_residual_closed(f_vector(C2)))
    assert all(is_legal_bistellar(C2, m) for m in moves.values())


# ---- mold cells ----

@pytest.mark.parametrize("n", [2, 3])
def test_build_mold(n):
    cell = build_mold_cell(n)
    cert = verify_mold(cell)
    assert cert.ok, cert.summary()
    assert sorted(cell.prepared_shellings) == list(range(n))


@pytest.mark.parametrize("n", [2, 3])
def test_mold_induced_moves(n):
    cell = build_mold_cell(n)
    for i, s in cell.prepared_shellings.items():
        m = induced_boundary_move(cell.disk, s)
        prepared = cell.window.prepared_moves[i]
        assert m.i == i and m.sigma == prepared.sigma
        if i > 0:
            assert m.tau == prepared.tau
        B0, B1 = boundary_complex(cell.disk), boundary_complex(apply_shelling(cell.disk, s))
        assert apply_bistellar(B0, m).facet_set == B1.facet_set


@pytest.mark.parametrize("n", [1, 4, 5])
def test_mold_unsupported(n):
    with pytest.raises(UnsupportedDimension):
        build_mold_cell(n)


def test_mold_tamper_delete_facet():
    cell = build_mold_cell(2)
    inner = [f for f in cell.disk.facets if not set(f) <= set(boundary_complex(cell.disk).vertices)]
    disk = _make(2, [f for f in cell.disk.facets if f != inner[0]])
    assert not verify_mold(replace(cell, disk=disk)).ok


def test_mold_tamper_induced_mismatch():
    cell = build_mold_cell(3)
    sh = dict(cell.prepared_shellings)
    sh[0], sh[1] = sh[1], sh[0]
    cert = verify_mold(replace(cell, prepared_shellings=sh))
    assert not cert.ok


def test_mold_tamper_window_move():
    cell = build_mold_cell(2)
    win = cell.window
    other = next(v for v in win.disk.vertices if v not in win.boundary_labels
                 and v not in cell.prepared_shellings[1].sigma + cell.prepared_shellings[1].tau)
    s1 = cell.prepared_shellings[1]
    moves = dict(win.prepared_moves)
    moves[1] = BistellarMove(1, (other,), s1.tau)
    cert = verify_mold(replace(cell, window=replace(win, prepared_moves=moves)))
    assert not cert.ok


def test_mold_implant_into_exposed_facet():
    C = fixture("disk_cone")
    cell = build_mold_cell(2)
    C2, shellings = implant_mold(C, (1, 2, 4), (1, 2), cell)
    assert euler_characteristic(C2) == 1
    B = boundary_complex(C2)
    assert (1, 3) in B.facet_set and (2, 3) in B.facet_set
    for s in shellings.values():
        apply_shelling(C2, s)


# ---- serialization ----

def test_cell_json_roundtrip():
    for cell in (build_plump_cell(2), build_mold_cell(2)):
        rec = json.loads(json.dumps(plump_to_json(cell) if isinstance(cell, PlumpCell) else mold_to_json(cell)))
        back = cell_from_json(rec)
        assert verify_cell(back).ok
        assert back.disk.facets == cell.disk.facets
