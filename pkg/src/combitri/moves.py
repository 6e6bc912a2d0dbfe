"""Bistellar moves, elementary shellings and star subdivisions along a face."""
from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations

from .complex_core import (
    FacetComplex,
    _make,
    boundary_complex,
    f_vector,
    simplex,
    simplex_boundary_facets,
)
from .errors import (
    ClosedInput,
    EmptyResult,
    IllegalMove,
    IllegalShelling,
    NotAFace,
    NotAFacet,
)

FRESH = 0  # placeholder vertex of a 0-move, resolved to max id + 1 on application


@dataclass(frozen=True, order=True)
class BistellarMove:
    i: int
    sigma: tuple
    tau: tuple

    def __post_init__(self):
        object.__setattr__(self, "sigma", tuple(sorted(self.sigma)))
        object.__setattr__(self, "tau", tuple(sorted(self.tau)))

    @property
    def kind(self) -> str:
        return "bistellar"

    def inverse(self) -> "BistellarMove":
        n = len(self.sigma) - 1 + self.i
        return BistellarMove(n - self.i, self.tau, self.sigma)

    def resolved(self, C: FacetComplex) -> "BistellarMove":
        if self.i == 0 and self.tau == (FRESH,):
            return BistellarMove(0, self.sigma, (C.max_vertex + 1,))
        return self

    def to_json(self) -> dict:
        return {"kind": "bistellar", "sigma": list(self.sigma), "tau": list(self.tau), "i": self.i}


@dataclass(frozen=True, order=True)
class ShellingMove:
    i: int
    sigma: tuple
    tau: tuple

    def __post_init__(self):
        object.__setattr__(self, "sigma", tuple(sorted(self.sigma)))
        object.__setattr__(self, "tau", tuple(sorted(self.tau)))

    @property
    def kind(self) -> str:
        return "shelling"

    @property
    def facet(self) -> tuple:
        return tuple(sorted(self.sigma + self.tau))

    def to_json(self) -> dict:
        return {"kind": "shelling", "sigma": list(self.sigma), "tau": list(self.tau), "i": self.i}


def move_from_json(rec: dict):
    kind = rec.get("kind", "bistellar")
    cls = {"bistellar": BistellarMove, "shelling": ShellingMove}[kind]
    return cls(int(rec["i"]), tuple(rec["sigma"]), tuple(rec["tau"]))


# ---- bistellar moves ------------------------------------------------------------

def bistellar_violation(C: FacetComplex, m: BistellarMove) -> str | None:
    """Why ``m`` is illegal in ``C``, or None if it is legal."""
    n = C.dim
    sigma, tau = m.sigma, m.tau
    if not 0 <= m.i <= n:
        return f"type {m.i} outside [0, {n}]"
    if len(sigma) != n - m.i + 1 or len(tau) != m.i + 1:
        return "sigma/tau have the wrong dimensions for this move type"
    if set(sigma) & set(tau):
        return "sigma and tau share a vertex"
    if m.i == 0:
        if sigma not in C.facet_set:
            return f"sigma {list(sigma)} is not a facet"
        if tau != (FRESH,) and tau[0] in C.vertices:
            return f"cone vertex {tau[0]} is not new"
        return None
    if sigma not in C.face_counts:
        return f"sigma {list(sigma)} is not a face"
    if tau in C.face_counts:
        return f"tau {list(tau)} is already a face"
    ss = set(sigma)
    link_facets = {tuple(v for v in f if v not in ss) for f in C.facets if ss.issubset(f)}
    if link_facets != set(simplex_boundary_facets(tau)):
        return f"link of {list(sigma)} is not the boundary of {list(tau)}"
    return None


def is_legal_bistellar(C: FacetComplex, m: BistellarMove) -> bool:
    return bistellar_violation(C, m) is None


def apply_bistellar(C: FacetComplex, m: BistellarMove) -> FacetComplex:
    why = bistellar_violation(C, m)
    if why is not None:
        raise IllegalMove(f"{why}", witness=(m.sigma, m.tau))
    m = m.resolved(C)
    sigma, tau = m.sigma, m.tau
    removed = {tuple(sorted(sigma + t)) for t in simplex_boundary_facets(tau)}
    added = [tuple(sorted(s + tau)) for s in simplex_boundary_facets(sigma)]
    rest = [f for f in C.facets if f not in removed]
    return _make(C.dim, rest + added, C.name)


def enumerate_bistellar(C: FacetComplex, i: int | None = None) -> list[BistellarMove]:
    """All legal moves of type ``i`` (or every type), in (i, sigma, tau) order."""
    n = C.dim
    types = range(n + 1) if i is None else [i]
    # face -> vertices of its link, and number of facets containing it
    star_verts = defaultdict(set)
    for f in C.facets:
        for k in range(1, len(f) + 1):
            for s in combinations(f, k):
                star_verts[s].update(f)
    out = []
    for t in types:
        if t == 0:
            out.extend(BistellarMove(0, f, (FRESH,)) for f in C.facets)
            continue
        size = n - t + 1
        for s, verts in star_verts.items():
            if len(s) != size:
                continue
            if C.face_counts[s] != t + 1:
                continue
            tau = tuple(sorted(verts.difference(s)))
            if len(tau) != t + 1 or tau in C.face_counts:
                continue
            # t+1 distinct link facets, each a t-subset of the (t+1)-set tau: the link is ∂tau
            out.append(BistellarMove(t, s, tau))
    out.sort()
    return out


def reduce_to_simplex_boundary(K: FacetComplex, budget: int = 500, seed: int = 0):
    """Try to turn a closed pseudomanifold into ∂Δ^{d+1} by bistellar moves.

    Greedy: take a vertex-removing or facet-reducing move when one exists,
    otherwise a random middle move.  Returns the number of moves used, or
    None when the budget runs out.
    """
    rng = random.Random(seed)
    d = K.dim
    for used in range(budget + 1):
        if len(K.vertices) == d + 2 and len(K.facets) == d + 2:
            return used
        moves = [m for m in enumerate_bistellar(K) if m.i > 0]
        reducing = [m for m in moves if 2 * m.i > d]
        if reducing:
            best = max(m.i for m in reducing)
            m = next(m for m in reducing if m.i == best)
        else:
            middle = [m for m in moves if 2 * m.i == d or 2 * m.i == d + 1]
            pool = middle or moves
            if not pool:
                return None
            m = rng.choice(pool)
        K = apply_bistellar(K, m)
    return None


# ---- elementary shellings -----------------------------------------------------------

def _boundary_data(C: FacetComplex):
    B = boundary_complex(C)
    if B.is_void():
        raise ClosedInput("complex has no boundary")
    return B


def shelling_violation(C: FacetComplex, m: ShellingMove, B: FacetComplex | None = None) -> str | None:
    n = C.dim
    if B is None:
        B = _boundary_data(C)
    sigma, tau = m.sigma, m.tau
    if not sigma or not tau:
        return "sigma and tau must be nonempty"
    if m.i != len(sigma) - 1 or not 0 <= m.i <= n - 1:
        return f"type {m.i} does not match dim(sigma) = {len(sigma) - 1}"
    if set(sigma) & set(tau):
        return "sigma and tau share a vertex"
    if m.facet not in C.facet_set:
        return f"sigma*tau = {list(m.facet)} is not a facet"
    if len(C.facets) == 1:
        return "shelling the last facet would empty the complex"
    if B.has_face(tau):
        return f"tau {list(tau)} lies in the boundary"
    for t in simplex_boundary_facets(tau):
        if tuple(sorted(sigma + t)) not in B.facet_set:
            return f"{list(sorted(sigma + t))} of sigma*∂tau is not a boundary face"
    return None


def enumerate_shellings(C: FacetComplex) -> list[ShellingMove]:
    B = _boundary_data(C)
    out = []
    for f in C.facets:
        for k in range(1, len(f)):
            for sigma in combinations(f, k):
                tau = tuple(v for v in f if v not in sigma)
                m = ShellingMove(k - 1, sigma, tau)
                if shelling_violation(C, m, B) is None:
                    out.append(m)
    out.sort()
    return out


def apply_shelling(C: FacetComplex, m: ShellingMove) -> FacetComplex:
    B = _boundary_data(C)
    why = shelling_violation(C, m, B)
    if why is not None:
        cls = EmptyResult if "empty" in why else IllegalShelling
        raise cls(f"{why}", witness=(m.sigma, m.tau))
    return _make(C.dim, [f for f in C.facets if f != m.facet], C.name)


def induced_boundary_move(C: FacetComplex, m: ShellingMove) -> BistellarMove:
    """The (n-1)-dimensional move that the shelling performs on the boundary.

    Checked by applying it to ∂C and comparing with ∂ of the shelled complex.
    """
    after = apply_shelling(C, m)
    n = C.dim
    move = BistellarMove(n - 1 - m.i, m.sigma, m.tau)
    B0 = boundary_complex(C)
    B1 = boundary_complex(after)
    if apply_bistellar(B0, move).facet_set != B1.facet_set:
        raise IllegalShelling("boundary change is not the expected bistellar move",
                              witness=(m.sigma, m.tau))
    return move


# ---- star subdivision along a face, exposure ------------------------------------------

def star_subdivide_along_face(C: FacetComplex, F, G) -> FacetComplex:
    """Subdivide ``G`` (a free codimension-1 face of facet ``F``) by a new vertex w,
    then cone the resulting sphere from a new interior apex v0.

    w = max id + 1, v0 = max id + 2.
    """
    F, G = simplex(F), simplex(G)
    if F not in C.facet_set:
        raise NotAFacet(f"{list(F)} is not a facet")
    if len(G) != len(F) - 1 or not set(G).issubset(F):
        raise NotAFace(f"{list(G)} is not a codimension-1 face of {list(F)}")
    if C.ridge_degrees.get(G, 0) != 1:
        raise IllegalMove(f"{list(G)} is not a boundary face; subdividing it "
                          "would leave a neighbouring facet unsubdivided", witness=(F, G))
    w, v0 = C.max_vertex + 1, C.max_vertex + 2
    sphere = [r for r in simplex_boundary_facets(F) if r != G]
    sphere += [tuple(sorted(g + (w,))) for g in simplex_boundary_facets(G)]
    new = [tuple(sorted(s + (v0,))) for s in sphere]
    rest = [f for f in C.facets if f != F]
    return _make(C.dim, rest + new, C.name)


def boundary_meet(C: FacetComplex, F, B: FacetComplex) -> list:
    """Maximal faces of facet ``F`` lying in the boundary complex ``B``."""
    inside = [s for k in range(1, len(F) + 1) for s in combinations(F, k) if s in B.face_counts]
    return [s for s in inside if not any(len(t) > len(s) and set(s) < set(t) for t in inside)]


def exposed_faces(C: FacetComplex, B: FacetComplex | None = None) -> list:
    """(facet, boundary ridge) pairs: every way a facet is exposed."""
    if B is None:
        B = _boundary_data(C)
    out = []
    for F in C.facets:
        for r in simplex_boundary_facets(F):
            if r in B.facet_set:
                out.append((F, r))
    return out


def one_face_exposed(C: FacetComplex) -> list:
    B = _boundary_data(C)
    out = []
    for F in C.facets:
        meet = boundary_meet(C, F, B)
        if len(meet) == 1 and len(meet[0]) == C.dim:
            out.append((F, meet[0]))
    return out


# ---- move logs ---------------------------------------------------------------------

@dataclass
class MoveLog:
    records: list = field(default_factory=list)

    def append(self, kind: str, params: dict, before: FacetComplex, after: FacetComplex) -> None:
        self.records.append({
            "kind": kind,
            "params": params,
            "f_before": list(f_vector(before).f),
            "f_after": list(f_vector(after).f),
        })

    def count(self, *kinds: str) -> int:
        return sum(1 for r in self.records if r["kind"] in kinds)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)
