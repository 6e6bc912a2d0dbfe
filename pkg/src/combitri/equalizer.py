"""Retriangulate two manifolds until their f-vectors agree.

Every step is logged; :func:`replay` re-applies a log from the input complex
with full legality checking and must land on the recorded output.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from .complex_core import (
    FacetComplex,
    boundary_complex,
    boundary_f_vector,
    euler_characteristic,
    f_vector,
    pseudomanifold_report,
)
from .constructions import (
    DEFAULT_BUDGET,
    DEFAULT_SEED,
    build_mold_cell,
    build_plump_cell,
    cell_from_json,
    implant_mold,
    implant_plump,
    mold_to_json,
    plump_to_json,
    verify_cell,
)
from .errors import (
    ChiBoundaryMismatch,
    ChiMismatch,
    DimensionMismatch,
    InternalAssertFailed,
    NoExposedFacet,
    NotClosed,
    PreconditionError,
    ReplayMismatch,
    UnsupportedDimension,
)
from .fvector import VirtualMovePlan, ds_residual_boundary, ds_residual_closed, hat_f, solve_virtual_plan
from .moves import (
    FRESH,
    BistellarMove,
    MoveLog,
    ShellingMove,
    apply_bistellar,
    apply_shelling,
    exposed_faces,
    move_from_json,
    one_face_exposed,
    star_subdivide_along_face,
)


@dataclass
class EqualizeResult:
    c1_star: FacetComplex
    c2_star: FacetComplex
    log1: MoveLog
    log2: MoveLog
    plan: VirtualMovePlan
    report: dict = field(default_factory=dict)
    boundary_plan: VirtualMovePlan | None = None


class _Tracker:
    """A complex plus its log; every mutation goes through here."""

    def __init__(self, C: FacetComplex, check):
        self.C = C
        self.log = MoveLog()
        self.check = check
        self.cells: dict = {}

    def _step(self, kind, params, new):
        self.log.append(kind, params, self.C, new)
        self.C = new
        self.check(new)

    def zero_move(self, facet):
        m = BistellarMove(0, facet, (FRESH,)).resolved(self.C)
        self._step("zero-move", m.to_json(), apply_bistellar(self.C, m))

    def bistellar(self, m: BistellarMove):
        m = m.resolved(self.C)
        self._step("bistellar", m.to_json(), apply_bistellar(self.C, m))

    def shelling(self, m: ShellingMove):
        self._step("shelling", m.to_json(), apply_shelling(self.C, m))

    def subdivide(self, F, G):
        self._step("star-subdivide", {"facet": list(F), "face": list(G)},
                   star_subdivide_along_face(self.C, F, G))

    def implant_plump(self, F, cell, cell_json, key):
        new, moves = implant_plump(self.C, F, cell)
        self._step("implant", {"facet": list(F), "cell": key}, new)
        self.cells[key] = cell_json
        return moves

    def implant_mold(self, F, G, cell, cell_json, key):
        new, shellings = implant_mold(self.C, F, G, cell)
        self._step("implant", {"facet": list(F), "face": list(G), "cell": key}, new)
        self.cells[key] = cell_json
        return shellings


def _cell_key(cell_json: dict) -> str:
    blob = json.dumps(cell_json, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def _closed_check(C):
    if any(ds_residual_closed(f_vector(C))):
        raise InternalAssertFailed("Dehn–Sommerville residual became nonzero")


def _bounded_check(C):
    if any(ds_residual_boundary(f_vector(C), boundary_f_vector(C))):
        raise InternalAssertFailed("Dehn–Sommerville residual (with boundary) became nonzero")


def _prepare_zero_moves(t1: _Tracker, t2: _Tracker, N: int) -> int:
    """Same number of 0-moves on both sides until each has more than N facets."""
    k = max(0, N + 1 - min(len(t1.C), len(t2.C)))
    for _ in range(k):
        t1.zero_move(t1.C.facets[0])
        t2.zero_move(t2.C.facets[0])
    return k


def _interior_stage(t1: _Tracker, t2: _Tracker, plan: VirtualMovePlan, seed: int, budget: int,
                    report: dict, tag: str) -> None:
    """Zero-move preparation, plump-cell implants on both sides, then the planned moves in t1."""
    n = t1.C.dim
    N = plan.total_moves
    diff0 = f_vector(t2.C) - f_vector(t1.C)
    k = _prepare_zero_moves(t1, t2, N)
    report[f"{tag}_zero_moves"] = k
    if N:
        cell = build_plump_cell(n, seed=seed, budget=budget)
        cj = plump_to_json(cell)
        key = _cell_key(cj)
        hosts1, hosts2 = t1.C.facets[:N], t2.C.facets[:N]
        prepared = [t1.implant_plump(F, cell, cj, key) for F in hosts1]
        for F in hosts2:
            t2.implant_plump(F, cell, cj, key)
        if f_vector(t2.C) - f_vector(t1.C) != diff0:
            raise InternalAssertFailed("symmetric preparation changed the f-vector difference")
        report[f"{tag}_prepared_f"] = [list(f_vector(t1.C).f), list(f_vector(t2.C).f)]
        for moves, t in zip(prepared, plan.move_types()):
            t1.bistellar(moves[t])
    report[f"{tag}_realized_moves"] = N


def _require_same_dim(C1, C2):
    if C1.dim != C2.dim:
        raise DimensionMismatch(f"dimensions {C1.dim} and {C2.dim}")


def equalize_closed(C1: FacetComplex, C2: FacetComplex, seed: int = DEFAULT_SEED,
                    budget: int = DEFAULT_BUDGET) -> EqualizeResult:
    _require_same_dim(C1, C2)
    for C in (C1, C2):
        rep = pseudomanifold_report(C)
        if rep.status != "verified-closed":
            raise NotClosed(f"{rep.detail}")
    chi1, chi2 = euler_characteristic(C1), euler_characteristic(C2)
    if chi1 != chi2:
        raise ChiMismatch(f"chi {chi1} != {chi2}")
    plan = solve_virtual_plan(f_vector(C1), f_vector(C2))
    report = {"mode": "closed", "seed": seed, "budget": budget, "n": C1.dim,
              "f_input": [list(f_vector(C1).f), list(f_vector(C2).f)],
              "plan": list(plan.x), "N": plan.total_moves}
    t1, t2 = _Tracker(C1, _closed_check), _Tracker(C2, _closed_check)
    _interior_stage(t1, t2, plan, seed, budget, report, "closed")
    return _finish(C1, C2, t1, t2, plan, report, boundary=False)


def _subdivision_target(C: FacetComplex):
    """Facet and free face for the next star subdivision (one-face-exposed first)."""
    ofe = one_face_exposed(C)
    if ofe:
        return ofe[0]
    exp = exposed_faces(C)
    if not exp:
        raise NoExposedFacet("no facet meets the boundary in a ridge")
    return exp[0]


def _boundary_stage(t1: _Tracker, t2: _Tracker, seed: int, budget: int, report: dict):
    n = t1.C.dim
    bplan = solve_virtual_plan(boundary_f_vector(t1.C), boundary_f_vector(t2.C))
    N = bplan.total_moves
    report["boundary_plan"] = list(bplan.x)
    report["boundary_N"] = N
    bdiff0 = boundary_f_vector(t2.C) - boundary_f_vector(t1.C)
    subs = 0
    while len(one_face_exposed(t1.C)) <= N or len(one_face_exposed(t2.C)) <= N:
        for t in (t1, t2):
            t.subdivide(*_subdivision_target(t.C))
        subs += 1
    report["star_subdivisions"] = subs
    if N:
        cell = build_mold_cell(n, seed=seed, budget=budget)
        cj = mold_to_json(cell)
        key = _cell_key(cj)
        hosts1 = one_face_exposed(t1.C)[:N]
        hosts2 = one_face_exposed(t2.C)[:N]
        prepared = [t1.implant_mold(F, G, cell, cj, key) for F, G in hosts1]
        for F, G in hosts2:
            t2.implant_mold(F, G, cell, cj, key)
        if boundary_f_vector(t2.C) - boundary_f_vector(t1.C) != bdiff0:
            raise InternalAssertFailed("symmetric mold implants changed the boundary difference")
        for shellings, i in zip(prepared, bplan.move_types()):
            t1.shelling(shellings[i])
    report["boundary_realized_moves"] = N
    if boundary_f_vector(t1.C).f != boundary_f_vector(t2.C).f:
        raise InternalAssertFailed("boundary f-vectors differ after the boundary stage")
    return bplan


def _bounded_preconditions(C1, C2):
    _require_same_dim(C1, C2)
    if C1.dim not in (2, 3):
        raise UnsupportedDimension(f"bounded equalization supports n in {{2, 3}}, got {C1.dim}")
    for C in (C1, C2):
        rep = pseudomanifold_report(C)
        if rep.status != "verified-with-boundary":
            raise PreconditionError(f"expected a pseudomanifold with boundary: {rep.detail}")
    b1, b2 = (euler_characteristic(boundary_complex(C)) for C in (C1, C2))
    if b1 != b2:
        raise ChiBoundaryMismatch(f"chi(boundary) {b1} != {b2}")


def equalize_boundary(C1: FacetComplex, C2: FacetComplex, seed: int = DEFAULT_SEED,
                      budget: int = DEFAULT_BUDGET) -> EqualizeResult:
    _bounded_preconditions(C1, C2)
    report = {"mode": "boundary", "seed": seed, "budget": budget, "n": C1.dim,
              "f_input": [list(f_vector(C1).f), list(f_vector(C2).f)],
              "boundary_f_input": [list(boundary_f_vector(C1).f), list(boundary_f_vector(C2).f)]}
    t1, t2 = _Tracker(C1, _bounded_check), _Tracker(C2, _bounded_check)
    bplan = _boundary_stage(t1, t2, seed, budget, report)
    return _finish(C1, C2, t1, t2, bplan, report, boundary=True, f_equal=False)


def equalize_full(C1: FacetComplex, C2: FacetComplex, seed: int = DEFAULT_SEED,
                  budget: int = DEFAULT_BUDGET) -> EqualizeResult:
    _bounded_preconditions(C1, C2)
    report = {"mode": "full", "seed": seed, "budget": budget, "n": C1.dim,
              "f_input": [list(f_vector(C1).f), list(f_vector(C2).f)],
              "boundary_f_input": [list(boundary_f_vector(C1).f), list(boundary_f_vector(C2).f)]}
    t1, t2 = _Tracker(C1, _bounded_check), _Tracker(C2, _bounded_check)
    bplan = _boundary_stage(t1, t2, seed, budget, report)
    chi1, chi2 = euler_characteristic(t1.C), euler_characteristic(t2.C)
    if chi1 != chi2:
        raise ChiMismatch(f"chi {chi1} != {chi2}")
    report["stage1_f"] = [list(f_vector(t1.C).f), list(f_vector(t2.C).f)]
    report["stage1_log_lengths"] = [len(t1.log), len(t2.log)]
    B1, B2 = boundary_complex(t1.C), boundary_complex(t2.C)
    h1 = hat_f(f_vector(t1.C), boundary_f_vector(t1.C))
    h2 = hat_f(f_vector(t2.C), boundary_f_vector(t2.C))
    plan = solve_virtual_plan(h1, h2)
    report["plan"] = list(plan.x)
    report["N"] = plan.total_moves
    _interior_stage(t1, t2, plan, seed + 1, budget, report, "interior")
    if boundary_complex(t1.C) != B1 or boundary_complex(t2.C) != B2:
        raise InternalAssertFailed("interior stage touched the boundary")
    res = _finish(C1, C2, t1, t2, plan, report, boundary=True)
    res.boundary_plan = bplan
    return res


def _finish(C1, C2, t1, t2, plan, report, boundary: bool, f_equal: bool = True) -> EqualizeResult:
    f1, f2 = f_vector(t1.C), f_vector(t2.C)
    report["f_output"] = [list(f1.f), list(f2.f)]
    if f_equal and f1.f != f2.f:
        raise InternalAssertFailed(f"f-vectors differ after equalization: {f1} vs {f2}")
    if boundary:
        b1, b2 = boundary_f_vector(t1.C), boundary_f_vector(t2.C)
        report["boundary_f_output"] = [list(b1.f), list(b2.f)]
        if b1.f != b2.f:
            raise InternalAssertFailed(f"boundary f-vectors differ: {b1} vs {b2}")
    report["log_lengths"] = [len(t1.log), len(t2.log)]
    report["cells"] = {**t1.cells, **t2.cells}
    for C, t in ((C1, t1), (C2, t2)):
        if replay(C, t.log, report["cells"]) != t.C:
            raise InternalAssertFailed("log does not replay to the output")
    return EqualizeResult(t1.C, t2.C, t1.log, t2.log, plan, report)


# ---- replay ----------------------------------------------------------------------

def replay(C: FacetComplex, log, cells: dict | None = None) -> FacetComplex:
    """Re-apply every record of ``log`` with legality checks.

    Implant records refer to cells by key; ``cells`` maps keys to cell JSON and
    each cell is re-certified before use.
    """
    cells = cells or {}
    records = log.records if isinstance(log, MoveLog) else list(log)
    certified: dict = {}
    for idx, rec in enumerate(records):
        if list(f_vector(C).f) != list(rec["f_before"]):
            raise ReplayMismatch(f"at record {idx}: f_before differs", idx)
        kind, p = rec["kind"], rec["params"]
        try:
            if kind in ("bistellar", "zero-move"):
                C = apply_bistellar(C, move_from_json(p))
            elif kind == "shelling":
                C = apply_shelling(C, move_from_json(p))
            elif kind == "star-subdivide":
                C = star_subdivide_along_face(C, p["facet"], p["face"])
            elif kind == "implant":
                key = p["cell"]
                if key not in certified:
                    cell = cell_from_json(cells[key])
                    cert = verify_cell(cell)
                    if not cert.ok:
                        raise ReplayMismatch(f"cell {key} fails certification: {cert.witness}", idx)
                    certified[key] = cell
                cell = certified[key]
                if "face" in p:
                    C = implant_mold(C, p["facet"], p["face"], cell)[0]
                else:
                    C = implant_plump(C, tuple(p["facet"]), cell)[0]
            else:
                raise ReplayMismatch(f"unknown record kind {kind!r}", idx)
        except ReplayMismatch:
            raise
        except Exception as exc:
            raise ReplayMismatch(f"at record {idx}: {exc}", idx) from exc
        if list(f_vector(C).f) != list(rec["f_after"]):
            raise ReplayMismatch(f"at record {idx}: f_after differs", idx)
    return C


# ---- directory output ----------------------------------------------------------------

def write_result(res: EqualizeResult, out_dir) -> None:
    from pathlib import Path

    from .io import write_facet_list, write_log

    d = Path(out_dir)
    d.mkdir(parents=True, exist_ok=True)
    (d / "out1.fl").write_text(write_facet_list(res.c1_star))
    (d / "out2.fl").write_text(write_facet_list(res.c2_star))
    (d / "log1.jsonl").write_text(write_log(res.log1))
    (d / "log2.jsonl").write_text(write_log(res.log2))
    (d / "report.json").write_text(json.dumps(res.report, sort_keys=True, indent=1) + "\n")
