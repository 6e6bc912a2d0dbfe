"""Plump cells, mold cells and the named fixture corpus.

Cells are produced by a seeded search and accepted only after an independent
verifier has checked every property they are used for.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations

from .complex_core import (
    FacetComplex,
    _make,
    boundary_complex,
    build_complex,
    euler_characteristic,
    f_counts,
    relabel_glue,
    simplex,
    simplex_boundary,
    star,
    verify_manifold,
)
from .errors import (
    BoundaryMismatch,
    BudgetExhausted,
    NotAFace,
    NotAFacet,
    UnknownFixture,
    UnsupportedDimension,
)
from .moves import (
    FRESH,
    BistellarMove,
    ShellingMove,
    apply_bistellar,
    apply_shelling,
    bistellar_violation,
    enumerate_bistellar,
    shelling_violation,
)

DEFAULT_SEED = 20090310
DEFAULT_BUDGET = 400


# ---- fixtures ----------------------------------------------------------------

def boundary_of_simplex(n: int) -> FacetComplex:
    """∂Δ^{n+1} on vertices 1..n+2."""
    verts = tuple(range(1, n + 3))
    return _make(n, combinations(verts, n + 1), f"sphere{n}_min")


def _torus7():
    return [sorted({i % 7 + 1, (i + a) % 7 + 1, (i + b) % 7 + 1})
            for i in range(7) for a, b in ((1, 3), (2, 3))]


def _icosahedron():
    up = [2, 3, 4, 5, 6]
    lo = [7, 8, 9, 10, 11]
    out = []
    for k in range(5):
        k1 = (k + 1) % 5
        out += [[1, up[k], up[k1]], [up[k], up[k1], lo[k]],
                [lo[k], lo[k1], up[k1]], [12, lo[k], lo[k1]]]
    return out


def _cone(apex, ring):
    return [[apex, ring[k], ring[(k + 1) % len(ring)]] for k in range(len(ring))]


# name -> (facets, expected f_0..f_n, expected chi)
_FIXTURES = {
    "sphere2_min": (lambda: boundary_of_simplex(2).facets, (4, 6, 4), 2),
    "sphere3_min": (lambda: boundary_of_simplex(3).facets, (5, 10, 10, 5), 0),
    "sphere4_min": (lambda: boundary_of_simplex(4).facets, (6, 15, 20, 15, 6), 2),
    "icosahedron": (_icosahedron, (12, 30, 20), 2),
    "torus7": (_torus7, (7, 21, 14), 0),
    "rp2_6": (lambda: [[1, 2, 3], [1, 3, 4], [1, 4, 5], [1, 5, 6], [1, 2, 6],
                       [2, 3, 5], [2, 4, 5], [2, 4, 6], [3, 4, 6], [3, 5, 6]], (6, 15, 10), 1),
    "bipyramid": (lambda: [[1, 2, 4], [1, 3, 4], [2, 3, 4], [1, 2, 5], [1, 3, 5], [2, 3, 5]],
                  (5, 9, 6), 2),
    "disk_cone": (lambda: [[1, 2, 4], [1, 3, 4], [2, 3, 4]], (4, 6, 3), 1),
    "disk_two": (lambda: [[1, 2, 3], [2, 3, 4]], (4, 5, 2), 1),
    "disk_square": (lambda: _cone(5, [1, 2, 3, 4]), (5, 8, 4), 1),
    "disk_hex": (lambda: _cone(7, [1, 2, 3, 4, 5, 6]), (7, 12, 6), 1),
    "ball3_cone": (lambda: [[1, 2, 3, 5], [1, 2, 4, 5], [1, 3, 4, 5], [2, 3, 4, 5]],
                   (5, 10, 10, 4), 1),
    "ball3_bipyramid": (lambda: [[1, 2, 3, 4], [1, 2, 3, 5]], (5, 9, 7, 2), 1),
}

CLOSED_FIXTURES = ("sphere2_min", "sphere3_min", "sphere4_min", "icosahedron", "torus7",
                   "rp2_6", "bipyramid")
BOUNDED_FIXTURES = ("disk_cone", "disk_two", "disk_square", "disk_hex", "ball3_cone",
                    "ball3_bipyramid")


def fixture_names() -> list[str]:
    return sorted(_FIXTURES)


def fixture(name: str) -> FacetComplex:
    try:
        make, expected_f, expected_chi = _FIXTURES[name]
    except KeyError:
        raise UnknownFixture(f"unknown fixture {name!r}; known: {', '.join(fixture_names())}")
    C = build_complex([list(f) for f in make()], name=name)
    got = tuple(f_counts(C))
    if got != expected_f or euler_characteristic(C) != expected_chi:
        raise AssertionError(f"fixture {name}: f={got}, chi={euler_characteristic(C)}")
    return C


# ---- certificates --------------------------------------------------------------------

@dataclass
class CellCertificate:
    ok: bool
    checks: list = field(default_factory=list)
    witness: object = None

    def fail(self, what: str, witness=None) -> "CellCertificate":
        self.ok = False
        self.checks.append(f"FAIL {what}")
        if self.witness is None:
            self.witness = witness if witness is not None else what
        return self

    def passed(self, what: str) -> None:
        self.checks.append(f"ok   {what}")

    def summary(self) -> str:
        return ("PASS" if self.ok else "FAIL") + "\n" + "\n".join(self.checks)


def _stars(C: FacetComplex, verts) -> dict:
    return {v: star(C, (v,)).facet_set for v in verts}


# ---- plump cells ------------------------------------------------------------------

@dataclass(frozen=True)
class PlumpCell:
    n: int
    disk: FacetComplex
    boundary_labels: tuple
    prepared_moves: dict  # type -> BistellarMove

    def interior_vertices(self) -> set:
        return set(self.disk.vertices) - set(self.boundary_labels)


def _safe_moves(disk: FacetComplex, boundary: set) -> dict:
    """Legal moves whose vertices avoid ``boundary``, grouped by type."""
    out: dict = {}
    for m in enumerate_bistellar(disk):
        verts = set(m.sigma) | (set(m.tau) - {FRESH})
        if verts & boundary:
            continue
        out.setdefault(m.i, []).append(m)
    return out


def _pick_disjoint(safe: dict, n: int, rng: random.Random) -> dict:
    """One move per type, vertex-disjoint when such a choice is easy to find."""
    types = list(range(n + 1))
    best = None
    for _ in range(64):
        used: set = set()
        choice = {}
        for t in types:
            cands = [m for m in safe[t]
                     if not (set(m.sigma) | (set(m.tau) - {FRESH})) & used]
            if not cands:
                break
            m = rng.choice(cands)
            choice[t] = m
            used |= set(m.sigma) | (set(m.tau) - {FRESH})
        if len(choice) == len(types):
            return choice
        if best is None:
            best = {t: safe[t][0] for t in types}
    return best


def build_plump_cell(n: int, seed: int = DEFAULT_SEED, budget: int = DEFAULT_BUDGET) -> PlumpCell:
    """Grow Δ^n by interior moves until every move type has an interior instance.

    An interior instance is a legal move whose vertices all avoid ∂Δ^n, so it
    leaves every boundary-vertex star alone.  To make type i available we fire
    an interior (n-i)-move (its inverse is then an interior i-move); if none is
    available we deepen the interior with a 0-move.
    """
    if n < 1:
        raise UnsupportedDimension("plump cells need n >= 1")
    rng = random.Random(seed)
    labels = tuple(range(1, n + 2))
    bset = set(labels)
    disk = _make(n, [labels])
    disk = apply_bistellar(disk, BistellarMove(0, labels, (FRESH,)))
    for _ in range(budget):
        safe = _safe_moves(disk, bset)
        missing = [t for t in range(n + 1) if t not in safe]
        if not missing:
            cell = PlumpCell(n, disk, labels, _pick_disjoint(safe, n, rng))
            cert = verify_plump(cell)
            if cert.ok:
                return cell
            raise AssertionError(f"builder produced an uncertified cell: {cert.witness}")
        want = rng.choice(missing)
        feeders = safe.get(n - want, [])
        if feeders and rng.random() < 0.8:
            m = rng.choice(feeders)
        else:
            interior = len(disk.vertices) - len(labels)
            deep = max(sum(v not in bset for v in f) for f in disk.facets)
            pool = [f for f in disk.facets if sum(v not in bset for v in f) == deep]
            if interior > 4 * (n + 2) and rng.random() < 0.5:
                pool = list(disk.facets)
            m = BistellarMove(0, rng.choice(pool), (FRESH,))
        disk = apply_bistellar(disk, m)
    raise BudgetExhausted(f"no plump {n}-cell within {budget} steps (seed {seed}); retry with another seed")


def verify_plump(cell: PlumpCell) -> CellCertificate:
    cert = CellCertificate(True)
    n, disk = cell.n, cell.disk
    labels = tuple(cell.boundary_labels)
    if disk.dim != n or len(labels) != n + 1 or len(set(labels)) != n + 1:
        return cert.fail("disk dimension / boundary label count")
    try:
        B = boundary_complex(disk)
    except Exception as exc:  # not a pseudomanifold
        return cert.fail(f"boundary: {exc}")
    if B.facet_set != simplex_boundary(simplex(labels)).facet_set:
        return cert.fail("boundary is not ∂Δ^n on the boundary labels", sorted(B.facets))
    cert.passed("boundary ≅ ∂Δ^n")
    if n <= 3:
        mc = verify_manifold(disk)
        if not mc.ok or euler_characteristic(disk) != 1:
            return cert.fail(f"not a PL disk: {mc.detail}", mc.witness)
        cert.passed("manifold with χ = 1")
    bset = set(labels)
    before = _stars(disk, labels)
    for t in range(n + 1):
        m = cell.prepared_moves.get(t)
        if m is None:
            safe = _safe_moves(disk, bset).get(t, [])
            note = "none exists" if not safe else f"{len(safe)} available"
            cert.fail(f"missing prepared {t}-move ({note})", ("missing-type", t))
            continue
        if m.i != t:
            cert.fail(f"prepared move under key {t} has type {m.i}", ("wrong-type", t))
            continue
        why = bistellar_violation(disk, m)
        if why is not None:
            cert.fail(f"prepared {t}-move illegal: {why}", (m.sigma, m.tau))
            continue
        after = _stars(apply_bistellar(disk, m), labels)
        changed = [v for v in labels if after[v] != before[v]]
        if changed:
            cert.fail(f"prepared {t}-move changes star of boundary vertex {changed[0]}", changed[0])
            continue
        cert.passed(f"{t}-move legal, boundary stars unchanged")
    return cert


def implant_plump(C: FacetComplex, F, cell: PlumpCell):
    """Implant ``cell`` into facet F; return (complex, relabelled prepared moves)."""
    from .complex_core import implant_with_map

    C2, vmap = implant_with_map(C, F, cell.disk, cell.boundary_labels)
    moves = {t: _map_move(m, vmap) for t, m in cell.prepared_moves.items()}
    return C2, moves


def _map_move(m, vmap):
    def mp(s):
        return tuple(vmap[v] if v != FRESH else FRESH for v in s)
    return type(m)(m.i, mp(m.sigma), mp(m.tau))


# ---- mold cells --------------------------------------------------------------------

@dataclass(frozen=True)
class MoldCell:
    n: int
    disk: FacetComplex
    window: PlumpCell  # the boundary window, as a plump (n-1)-cell on the disk's vertex ids
    apex: int  # the one vertex of ∂Δ^n off the subdivided face
    prepared_shellings: dict  # window move type i -> ShellingMove of type n-1-i

    @property
    def outer_labels(self) -> tuple:
        return tuple(self.window.boundary_labels) + (self.apex,)


def build_mold_cell(n: int, seed: int = DEFAULT_SEED, budget: int = DEFAULT_BUDGET) -> MoldCell:
    """Cone a plump (n-1)-cell window from an interior vertex, then make each
    window move a shelling by lifting it through the cone vertex.

    For a window i-move (σ, τ) the n-dimensional move (c∪σ, τ) is legal in the
    cone and leaves the facet σ∪τ behind, glued to ∂ along σ*∂τ.  Shelling that
    facet performs the window move on the boundary.
    """
    if n not in (2, 3):
        raise UnsupportedDimension(f"mold cells are supported for n in {{2, 3}}, got {n}")
    rng = random.Random(seed)
    window = build_plump_cell(n - 1, seed=rng.randrange(2**31), budget=budget)
    Z, blabels = window.disk, tuple(window.boundary_labels)
    for _ in range(budget):
        cell = _try_mold(n, Z, blabels, rng)
        if cell is not None:
            cert = verify_mold(cell)
            if cert.ok:
                return cell
            raise AssertionError(f"builder produced an uncertified mold cell: {cert.witness}")
        # deepen the window; any interior 0-move keeps its boundary intact
        zero = _safe_moves(Z, set(blabels)).get(0, [])
        if not zero:
            break
        Z = apply_bistellar(Z, rng.choice(zero))
    raise BudgetExhausted(f"no mold {n}-cell within {budget} attempts (seed {seed}); retry with another seed")


def _try_mold(n: int, Z: FacetComplex, blabels: tuple, rng: random.Random):
    apex = Z.max_vertex + 1
    c = Z.max_vertex + 2
    sphere = list(Z.facets) + [tuple(sorted(r + (apex,)))
                               for r in simplex_boundary(simplex(blabels)).facets]
    U = _make(n, [tuple(sorted(s + (c,))) for s in sphere])
    zint = set(Z.vertices) - set(blabels)
    safe = _safe_moves(Z, set(blabels))
    chosen: dict = {}
    shellings: dict = {}
    for i in range(n - 1, 0, -1):
        cands = list(safe.get(i, []))
        rng.shuffle(cands)
        for m in cands:
            lifted = BistellarMove(i, tuple(sorted(m.sigma + (c,))), m.tau)
            if bistellar_violation(U, lifted) is None:
                U = apply_bistellar(U, lifted)
                chosen[i] = m
                shellings[i] = ShellingMove(n - 1 - i, m.sigma, m.tau)
                break
        else:
            return None
    cands = list(safe.get(0, []))
    rng.shuffle(cands)
    for m in cands:
        if tuple(sorted(m.sigma + (c,))) in U.facet_set and set(m.sigma) <= zint:
            chosen[0] = m
            shellings[0] = ShellingMove(n - 1, m.sigma, (c,))
            break
    else:
        return None
    win = PlumpCell(n - 1, Z, blabels, chosen)
    return MoldCell(n, U, win, apex, shellings)


def verify_mold(cell: MoldCell) -> CellCertificate:
    cert = CellCertificate(True)
    n, U = cell.n, cell.disk
    win = cell.window
    if U.dim != n or win.n != n - 1:
        return cert.fail("dimensions")
    wcert = verify_plump(win)
    if not wcert.ok:
        return cert.fail(f"window is not a plump cell: {wcert.witness}", wcert.witness)
    cert.passed("window is a certified plump (n-1)-cell")
    blabels = tuple(win.boundary_labels)
    outer = simplex(blabels + (cell.apex,))
    if cell.apex in win.disk.vertices or len(outer) != n + 1:
        return cert.fail("apex collides with the window")
    try:
        B = boundary_complex(U)
    except Exception as exc:
        return cert.fail(f"boundary: {exc}")
    expected = set(win.disk.facets) | {tuple(sorted(r + (cell.apex,)))
                                       for r in simplex_boundary(simplex(blabels)).facets}
    if B.facet_set != expected:
        return cert.fail("boundary is not ∂Δ^n with one face replaced by the window",
                         sorted(B.facet_set ^ expected))
    cert.passed("boundary = ∂Δ^n with the window in one face")
    if n <= 3:
        mc = verify_manifold(U)
        if not mc.ok or euler_characteristic(U) != 1:
            return cert.fail(f"not a PL disk: {mc.detail}", mc.witness)
        cert.passed("manifold with χ = 1")
    zint = set(win.disk.vertices) - set(blabels)
    outside = [v for v in B.vertices if v not in zint]
    before = _stars(U, outside)
    for i in range(n):
        s = cell.prepared_shellings.get(i)
        if s is None:
            cert.fail(f"missing shelling for window type {i}", ("missing-type", i))
            continue
        if s.i != n - 1 - i:
            cert.fail(f"shelling for window type {i} has type {s.i}", ("wrong-type", i))
            continue
        why = shelling_violation(U, s, B)
        if why is not None:
            cert.fail(f"shelling {i}: {why}", (s.sigma, s.tau))
            continue
        shelled = apply_shelling(U, s)
        B1 = boundary_complex(shelled)
        induced = BistellarMove(n - 1 - s.i, s.sigma, s.tau)
        prepared = win.prepared_moves[i]
        same = induced.sigma == prepared.sigma and induced.i == prepared.i and (
            induced.tau == prepared.tau or (i == 0 and prepared.tau == (FRESH,)))
        if not same:
            cert.fail(f"shelling {i} induces {induced} but the window prepared {prepared}",
                      {"before": sorted(B.facets), "after": sorted(B1.facets)})
            continue
        if bistellar_violation(B, induced) is not None or \
                apply_bistellar(B, induced).facet_set != B1.facet_set:
            cert.fail(f"boundary diff of shelling {i} is not the induced move",
                      {"before": sorted(B.facets), "after": sorted(B1.facets)})
            continue
        after = _stars(shelled, outside)
        changed = [v for v in outside if after[v] != before[v]]
        if changed:
            cert.fail(f"shelling {i} changes the star of {changed[0]} outside the window", changed[0])
            continue
        cert.passed(f"shelling {i} legal, induces the window {i}-move, outer stars unchanged")
    return cert


def implant_mold(C: FacetComplex, F, G, cell: MoldCell):
    """Replace facet F by the mold cell, with the window laid onto its free face G.

    Returns (complex, relabelled prepared shellings).
    """
    F, G = simplex(F), simplex(G)
    if F not in C.facet_set:
        raise NotAFacet(f"{list(F)} is not a facet")
    if len(G) != len(F) - 1 or not set(G) < set(F):
        raise NotAFace(f"{list(G)} is not a codimension-1 face of {list(F)}")
    if C.ridge_degrees.get(G, 0) != 1:
        raise BoundaryMismatch(f"{list(G)} is not a boundary face")
    (a,) = set(F) - set(G)
    fixed = dict(zip(cell.window.boundary_labels, G))
    fixed[cell.apex] = a
    C2, vmap = relabel_glue(C, F, cell.disk, fixed)
    shellings = {i: _map_move(s, vmap) for i, s in cell.prepared_shellings.items()}
    return C2, shellings


# ---- serialization ---------------------------------------------------------------

def plump_to_json(cell: PlumpCell) -> dict:
    return {
        "kind": "plump",
        "n": cell.n,
        "disk": [list(f) for f in cell.disk.facets],
        "boundary_labels": list(cell.boundary_labels),
        "prepared_moves": {str(t): m.to_json() for t, m in sorted(cell.prepared_moves.items())},
    }


def plump_from_json(rec: dict) -> PlumpCell:
    from .moves import move_from_json

    disk = build_complex(rec["disk"])
    moves = {int(t): move_from_json(m) for t, m in rec["prepared_moves"].items()}
    return PlumpCell(int(rec["n"]), disk, tuple(rec["boundary_labels"]), moves)


def mold_to_json(cell: MoldCell) -> dict:
    return {
        "kind": "mold",
        "n": cell.n,
        "disk": [list(f) for f in cell.disk.facets],
        "apex": cell.apex,
        "window": plump_to_json(cell.window),
        "prepared_shellings": {str(i): s.to_json() for i, s in sorted(cell.prepared_shellings.items())},
    }


def mold_from_json(rec: dict) -> MoldCell:
    from .moves import move_from_json

    return MoldCell(int(rec["n"]), build_complex(rec["disk"]), plump_from_json(rec["window"]),
                    int(rec["apex"]),
                    {int(i): move_from_json(s) for i, s in rec["prepared_shellings"].items()})


def cell_from_json(rec: dict):
    return mold_from_json(rec) if rec.get("kind") == "mold" else plump_from_json(rec)


def verify_cell(cell) -> CellCertificate:
    return verify_mold(cell) if isinstance(cell, MoldCell) else verify_plump(cell)
