"""Finite pure simplicial complexes stored by their facets.

A simplex is a strictly increasing tuple of positive vertex ids; ``()`` is the
empty simplex of dimension -1.  A :class:`FacetComplex` is an immutable value:
every operation here returns a new complex.
"""
from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence, Union

from .errors import (
    BadVertexId,
    BoundaryMismatch,
    ClosedInput,
    DegenerateDouble,
    DuplicateFacet,
    NotAFace,
    NotAFacet,
    NotPseudomanifold,
    NotPure,
    VertexClash,
)

Simplex = tuple  # strictly increasing tuple of ints >= 1

EMPTY: Simplex = ()


def simplex(vertices: Iterable[int]) -> Simplex:
    """Canonical simplex from any iterable of vertex ids."""
    s = tuple(sorted(set(int(v) for v in vertices)))
    return s


def sdim(s: Simplex) -> int:
    return len(s) - 1


def faces_of(s: Simplex, include_empty: bool = False):
    """All faces of ``s`` (including ``s`` itself)."""
    lo = 0 if include_empty else 1
    for k in range(lo, len(s) + 1):
        yield from combinations(s, k)


def simplex_boundary_facets(s: Simplex) -> list[Simplex]:
    """Facets of the boundary complex of ``s``; for a vertex this is ``[()]``."""
    if not s:
        return []
    return [s[:j] + s[j + 1:] for j in range(len(s))]


@dataclass(frozen=True)
class FacetComplex:
    """Pure simplicial complex given by its maximal simplices.

    ``facets`` is kept lexicographically sorted.  A complex with no facets is
    the void complex (e.g. the boundary of a closed manifold); the complex whose
    only facet is ``()`` is the empty-simplex marker returned as the link of a
    facet.
    """

    dim: int
    facets: tuple
    name: str | None = field(default=None, compare=False)

    # ---- cached structure -------------------------------------------------
    @cached_property
    def facet_set(self) -> frozenset:
        return frozenset(self.facets)

    @cached_property
    def vertices(self) -> tuple:
        return tuple(sorted({v for f in self.facets for v in f}))

    @cached_property
    def max_vertex(self) -> int:
        return self.vertices[-1] if self.vertices else 0

    @cached_property
    def face_counts(self) -> dict:
        """Map every nonempty face to the number of facets containing it."""
        counts: dict = defaultdict(int)
        for f in self.facets:
            for face in faces_of(f):
                counts[face] += 1
        return dict(counts)

    @cached_property
    def faces(self) -> frozenset:
        return frozenset(self.face_counts)

    @cached_property
    def ridge_degrees(self) -> dict:
        deg: dict = defaultdict(int)
        for f in self.facets:
            for r in simplex_boundary_facets(f):
                deg[r] += 1
        return dict(deg)

    def has_face(self, s: Simplex) -> bool:
        if not s:
            return bool(self.facets)
        return s in self.face_counts

    def facets_containing(self, s: Simplex) -> list:
        ss = set(s)
        return [f for f in self.facets if ss.issubset(f)]

    def __len__(self) -> int:
        return len(self.facets)

    def is_void(self) -> bool:
        return not self.facets

    def with_name(self, name: str | None) -> "FacetComplex":
        return FacetComplex(self.dim, self.facets, name)

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"<FacetComplex{label} dim={self.dim} facets={len(self.facets)}>"


def _make(dim: int, facets: Iterable[Simplex], name=None) -> FacetComplex:
    return FacetComplex(dim, tuple(sorted(set(facets))), name)


def void_complex(dim: int) -> FacetComplex:
    return FacetComplex(dim, ())


def empty_marker() -> FacetComplex:
    """The complex {∅}: the link of a facet, the boundary of a vertex."""
    return FacetComplex(-1, (EMPTY,))


def build_complex(facets: Sequence[Sequence[int]], name: str | None = None) -> FacetComplex:
    """Validate and canonicalize a list of facets."""
    if not facets:
        raise NotPure("complex needs at least one facet")
    canon = []
    sizes = set()
    for raw in facets:
        if len(raw) == 0:
            raise NotPure("empty facet")
        for v in raw:
            if int(v) != v or v < 1:
                raise BadVertexId(f"vertex id {v!r} is not a positive integer")
        s = tuple(sorted(int(v) for v in raw))
        if len(set(s)) != len(s):
            raise BadVertexId(f"repeated vertex in facet {list(raw)}")
        canon.append(s)
        sizes.add(len(s))
    if len(sizes) > 1:
        raise NotPure(f"facet sizes {sorted(sizes)}")
    if len(set(canon)) != len(canon):
        seen = set()
        for s in canon:
            if s in seen:
                raise DuplicateFacet(f"duplicate facet {list(s)}")
            seen.add(s)
    return FacetComplex(sizes.pop() - 1, tuple(sorted(canon)), name)


def from_simplex(s: Simplex) -> FacetComplex:
    return FacetComplex(sdim(s), (tuple(s),))


def simplex_boundary(s: Simplex) -> FacetComplex:
    """∂s as a complex; ∂(vertex) is the empty marker."""
    if len(s) == 1:
        return empty_marker()
    return _make(sdim(s) - 1, simplex_boundary_facets(s))


# ---- f-vectors ----------------------------------------------------------------

def f_counts(C: FacetComplex) -> list[int]:
    """Face counts f_0..f_dim."""
    out = [0] * (C.dim + 1)
    for face in C.face_counts:
        out[len(face) - 1] += 1
    return out


def euler_characteristic(C: FacetComplex) -> int:
    return sum((-1) ** k * fk for k, fk in enumerate(f_counts(C)))


def f_vector(C: FacetComplex):
    """f-vector with the f_{-1} = χ/2 slot filled in."""
    from .fvector import FVector

    counts = f_counts(C)
    chi = sum((-1) ** k * fk for k, fk in enumerate(counts))
    return FVector(C.dim, Fraction(chi, 2), tuple(counts))


def boundary_f_vector(C: FacetComplex):
    from .fvector import FVector

    B = boundary_complex(C)
    counts = f_counts(B) if B.facets else [0] * C.dim
    chi = sum((-1) ** k * fk for k, fk in enumerate(counts))
    return FVector(C.dim - 1, Fraction(chi, 2), tuple(counts))


# ---- link / star / join ---------------------------------------------------------

def _require_face(C: FacetComplex, s: Simplex) -> None:
    if s and s not in C.face_counts:
        raise NotAFace(f"{list(s)} is not a face of the complex")


def link(C: FacetComplex, s: Simplex) -> FacetComplex:
    s = simplex(s)
    _require_face(C, s)
    ss = set(s)
    rest = [tuple(v for v in f if v not in ss) for f in C.facets if ss.issubset(f)]
    return _make(C.dim - len(s), rest)


def star(C: FacetComplex, s: Simplex) -> FacetComplex:
    s = simplex(s)
    _require_face(C, s)
    return _make(C.dim, C.facets_containing(s))


def _as_complex(X: Union[FacetComplex, Simplex, Sequence[int]]) -> FacetComplex:
    if isinstance(X, FacetComplex):
        return X
    s = simplex(X)
    return FacetComplex(sdim(s), (s,))


def join(A, B) -> FacetComplex:
    """Join of two complexes (or simplices) on disjoint vertex sets."""
    A, B = _as_complex(A), _as_complex(B)
    clash = set(A.vertices) & set(B.vertices)
    if clash:
        raise VertexClash(f"vertex sets overlap in {sorted(clash)}")
    facets = [tuple(sorted(a + b)) for a in A.facets for b in B.facets]
    return _make(A.dim + B.dim + 1, facets)


# ---- boundary, pseudomanifold checks ------------------------------------------------

def boundary_complex(C: FacetComplex) -> FacetComplex:
    """Complex generated by the ridges lying in exactly one facet."""
    deg = C.ridge_degrees
    bad = [r for r, d in deg.items() if d > 2]
    if bad:
        raise NotPseudomanifold(f"ridge {list(min(bad))} lies in more than two facets")
    return _make(C.dim - 1, [r for r, d in deg.items() if d == 1])


def is_closed(C: FacetComplex) -> bool:
    return all(d == 2 for d in C.ridge_degrees.values())


@dataclass(frozen=True)
class ManifoldCertificate:
    status: str  # verified-closed | verified-with-boundary | pseudomanifold-only | unverified | failed
    detail: str
    checked_dim_exact: bool
    witness: tuple | None = None

    @property
    def ok(self) -> bool:
        return self.status.startswith("verified")


def _strongly_connected(C: FacetComplex) -> bool:
    if len(C.facets) <= 1:
        return True
    by_ridge = defaultdict(list)
    for idx, f in enumerate(C.facets):
        for r in simplex_boundary_facets(f):
            by_ridge[r].append(idx)
    seen = {0}
    todo = deque([0])
    while todo:
        idx = todo.popleft()
        for r in simplex_boundary_facets(C.facets[idx]):
            for j in by_ridge[r]:
                if j not in seen:
                    seen.add(j)
                    todo.append(j)
    return len(seen) == len(C.facets)


def pseudomanifold_report(C: FacetComplex) -> ManifoldCertificate:
    exact = C.dim <= 3
    for r, d in sorted(C.ridge_degrees.items()):
        if d > 2:
            return ManifoldCertificate("failed", f"ridge {list(r)} lies in {d} facets", exact, r)
    if not _strongly_connected(C):
        return ManifoldCertificate("failed", "not strongly connected", exact, C.facets[0])
    if is_closed(C):
        return ManifoldCertificate("verified-closed", "pseudomanifold without boundary", exact)
    return ManifoldCertificate("verified-with-boundary", "pseudomanifold with boundary", exact)


def _connected(C: FacetComplex) -> bool:
    if not C.facets:
        return True
    adj = defaultdict(set)
    for f in C.facets:
        for v in f:
            adj[v].update(f)
    start = C.facets[0][0]
    seen = {start}
    todo = [start]
    while todo:
        v = todo.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return len(seen) == len(C.vertices)


def _sphere_or_disk(K: FacetComplex) -> str | None:
    """Classify a link of dimension <= 2: 'sphere', 'disk' or None."""
    d = K.dim
    if d == -1:
        return "sphere" if K.facets == (EMPTY,) else None
    if d == 0:
        return {2: "sphere", 1: "disk"}.get(len(K.facets))
    if any(deg > 2 for deg in K.ridge_degrees.values()) or not _connected(K):
        return None
    if d == 1:
        degs = K.ridge_degrees  # ridges of a graph are its vertices
        ends = sum(1 for v in K.vertices if degs[(v,)] == 1)
        if ends == 0:
            return "sphere"
        return "disk" if ends == 2 else None
    if d == 2:
        for v in K.vertices:
            if _sphere_or_disk(link(K, (v,))) is None:
                return None
        chi = euler_characteristic(K)
        if is_closed(K):
            return "sphere" if chi == 2 else None
        return "disk" if chi == 1 else None
    raise ValueError("exact recognition only up to dimension 2")


def verify_manifold(C: FacetComplex, budget: int = 500, seed: int = 0) -> ManifoldCertificate:
    """Check that every vertex link is a sphere or a disk.

    Exact for dim <= 3.  Above that each link is pushed towards the boundary
    of a simplex by bistellar moves; if the budget runs out the result is
    ``unverified``.
    """
    pm = pseudomanifold_report(C)
    if pm.status == "failed" and pm.detail != "not strongly connected":
        return pm
    exact = C.dim <= 3
    closed = pm.status == "verified-closed"
    for v in C.vertices:
        L = link(C, (v,))
        if exact:
            kind = _sphere_or_disk(L)
            if kind is None:
                return ManifoldCertificate(
                    "failed", f"link of vertex {v} is neither a sphere nor a disk", True, (v,))
        else:
            from .moves import reduce_to_simplex_boundary

            target = L
            if not is_closed(L):
                B = boundary_complex(L)
                apex = L.max_vertex + 1
                target = _make(L.dim, L.facets + tuple(tuple(sorted(b + (apex,))) for b in B.facets))
            done = reduce_to_simplex_boundary(target, budget=budget, seed=seed + v)
            if done is None:
                return ManifoldCertificate(
                    "unverified", f"link of vertex {v} not reduced within budget {budget}", False, (v,))
    if pm.status == "failed":
        # every link looked fine, yet the facets fall apart into pieces
        return pm
    status = "verified-closed" if closed else "verified-with-boundary"
    how = "exact link recognition" if exact else "bistellar reduction of every link"
    return ManifoldCertificate(status, how, exact)


# ---- doubling and implanting ---------------------------------------------------

def double(C: FacetComplex) -> FacetComplex:
    """Glue two copies of ``C`` along their common boundary."""
    B = boundary_complex(C)
    if B.is_void():
        raise ClosedInput("double needs a complex with nonempty boundary")
    bverts = set(B.vertices)
    bfaces = B.faces
    for face in sorted(C.faces):
        if face not in bfaces and bverts.issuperset(face):
            raise DegenerateDouble(
                f"face {list(face)} has all vertices on the boundary but is not a boundary face; "
                "apply interior 0-moves first")
    offset = C.max_vertex
    copy2 = [tuple(sorted(v if v in bverts else v + offset for v in f)) for f in C.facets]
    return _make(C.dim, C.facets + tuple(copy2), None)


def relabel_glue(C: FacetComplex, F: Simplex, disk: FacetComplex, fixed: dict) -> tuple[FacetComplex, dict]:
    """Replace facet ``F`` by ``disk``.

    ``fixed`` maps some disk vertices onto vertices of ``F``; every other disk
    vertex gets a fresh id, allocated in ascending order from ``max id + 1``.
    Returns the new complex and the full vertex map.
    """
    nxt = C.max_vertex + 1
    vmap = dict(fixed)
    for v in disk.vertices:
        if v not in vmap:
            vmap[v] = nxt
            nxt += 1
    new = [tuple(sorted(vmap[v] for v in f)) for f in disk.facets]
    rest = [f for f in C.facets if f != F]
    return _make(C.dim, rest + new, C.name), vmap


def implant(C: FacetComplex, F: Simplex, D: FacetComplex,
            boundary_labels: Sequence[int] | None = None) -> FacetComplex:
    """Subdivide facet ``F`` of ``C`` into the disk ``D``.

    ``boundary_labels`` lists the boundary vertices of ``D`` in the order they
    are matched to the ascending vertices of ``F``.
    """
    return implant_with_map(C, F, D, boundary_labels)[0]


def implant_with_map(C, F, D, boundary_labels=None):
    F = simplex(F)
    if F not in C.facet_set:
        raise NotAFacet(f"{list(F)} is not a facet")
    if D.dim != C.dim:
        raise BoundaryMismatch("disk dimension differs from the host")
    B = boundary_complex(D)
    labels = tuple(boundary_labels) if boundary_labels is not None else B.vertices
    if len(labels) != C.dim + 1:
        raise BoundaryMismatch(f"expected {C.dim + 1} boundary labels, got {len(labels)}")
    expected = simplex_boundary(simplex(labels)) if C.dim > 0 else empty_marker()
    if C.dim > 0 and B.facet_set != expected.facet_set:
        raise BoundaryMismatch("disk boundary is not the boundary of a simplex on the given labels")
    return relabel_glue(C, F, D, dict(zip(labels, F)))
