"""Acyclic quivers, paths and finite-dimensional representations."""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .exactalg import QQ, Matrix
from .exactalg.subspace import span_basis


class QuiverError(ValueError):
    """Malformed quiver (unknown vertex, duplicate ids, ...)."""


class CycleError(QuiverError):
    """The arrow graph contains an oriented cycle."""


class DisconnectedQuiverWarning(UserWarning):
    pass


@dataclass(frozen=True)
class Arrow:
    id: str
    tail: str
    head: str


@dataclass(frozen=True)
class Path:
    """A path given by its arrows in traversal order (first arrow first).

    ``start`` is only needed for trivial paths; for nontrivial paths it is the
    tail of the first arrow.
    """

    start: str
    arrows: tuple = ()
    end: str = ""

    def __post_init__(self):
        if not self.end:
            object.__setattr__(self, "end", self.arrows[-1].head if self.arrows else self.start)

    @property
    def tail(self) -> str:
        return self.start

    @property
    def head(self) -> str:
        return self.end

    @property
    def length(self) -> int:
        return len(self.arrows)

    def then(self, a: Arrow) -> "Path":
        """The path ``a p``: first ``self``, then ``a``."""
        if a.tail != self.end:
            raise QuiverError(f"cannot append {a.id}: head {self.end} does not meet tail {a.tail}")
        return Path(self.start, self.arrows + (a,), a.head)

    def concat(self, other: "Path") -> "Path":
        """First ``self``, then ``other``."""
        if other.start != self.end:
            raise QuiverError("paths do not compose")
        return Path(self.start, self.arrows + other.arrows, other.end)

    def ids(self) -> tuple:
        return tuple(a.id for a in self.arrows)

    def __str__(self):
        # composition order, last arrow leftmost: a4a2 means a2 then a4
        if not self.arrows:
            return f"e{self.start}"
        return "".join(a.id for a in reversed(self.arrows))


class Quiver:
    """Finite acyclic quiver with string vertex and arrow ids."""

    def __init__(self, vertices: Iterable, arrows: Iterable):
        self.vertices = tuple(str(v) for v in vertices)
        arr = []
        for a in arrows:
            if isinstance(a, Arrow):
                arr.append(a)
            elif isinstance(a, Mapping):
                arr.append(Arrow(str(a["id"]), str(a["tail"]), str(a["head"])))
            else:
                i, t, h = a
                arr.append(Arrow(str(i), str(t), str(h)))
        self.arrows = tuple(arr)
        if len(set(self.vertices)) != len(self.vertices):
            raise QuiverError("duplicate vertex ids")
        if len({a.id for a in self.arrows}) != len(self.arrows):
            raise QuiverError("duplicate arrow ids")
        vs = set(self.vertices)
        for a in self.arrows:
            if a.tail not in vs or a.head not in vs:
                raise QuiverError(f"arrow {a.id} references an unknown vertex")
        self.order = self._topological_order()
        if not self.is_connected():
            warnings.warn("quiver is not connected", DisconnectedQuiverWarning, stacklevel=2)

    # -- structure --------------------------------------------------------

    def _topological_order(self) -> tuple:
        indeg = {v: 0 for v in self.vertices}
        for a in self.arrows:
            indeg[a.head] += 1
        ready = [v for v in self.vertices if indeg[v] == 0]
        rank = {v: i for i, v in enumerate(self.vertices)}
        out = []
        while ready:
            ready.sort(key=rank.__getitem__)
            v = ready.pop(0)
            out.append(v)
            for a in self.arrows:
                if a.tail == v:
                    indeg[a.head] -= 1
                    if indeg[a.head] == 0:
                        ready.append(a.head)
        if len(out) != len(self.vertices):
            raise CycleError("quiver has an oriented cycle")
        return tuple(out)

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        adj = {v: set() for v in self.vertices}
        for a in self.arrows:
            adj[a.tail].add(a.head)
            adj[a.head].add(a.tail)
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)

    def arrow(self, aid: str) -> Arrow:
        for a in self.arrows:
            if a.id == aid:
                return a
        raise QuiverError(f"unknown arrow {aid!r}")

    @cached_property
    def arrow_ids(self) -> tuple:
        return tuple(a.id for a in self.arrows)

    @cached_property
    def arrow_index(self) -> dict:
        return {a.id: i for i, a in enumerate(self.arrows)}

    def out_arrows(self, v: str) -> list:
        return [a for a in self.arrows if a.tail == v]

    def in_arrows(self, v: str) -> list:
        return [a for a in self.arrows if a.head == v]

    def check_vertex(self, v) -> str:
        v = str(v)
        if v not in self.vertices:
            raise QuiverError(f"unknown vertex {v!r}")
        return v

    def __eq__(self, other):
        return isinstance(other, Quiver) and (self.vertices, self.arrows) == (other.vertices, other.arrows)

    def __hash__(self):
        return hash((self.vertices, self.arrows))

    def __repr__(self):
        arrows = ", ".join(f"{a.id}:{a.tail}->{a.head}" for a in self.arrows)
        return f"Quiver(vertices={list(self.vertices)}, arrows=[{arrows}])"

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "arrows": [{"id": a.id, "tail": a.tail, "head": a.head} for a in self.arrows],
        }

    # -- paths ------------------------------------------------------------

    @cached_property
    def longest_in(self) -> dict:
        """Length of the longest path ending at each vertex."""
        best = {v: 0 for v in self.vertices}
        for v in self.order:
            for a in self.out_arrows(v):
                best[a.head] = max(best[a.head], best[v] + 1)
        return best

    @cached_property
    def _paths_by_length(self) -> list:
        level = [Path(v) for v in self.order]
        out = [level]
        while True:
            nxt = [p.then(a) for p in level for a in self.arrows if a.tail == p.end]
            if not nxt:
                break
            out.append(nxt)
            level = nxt
        return out

    def paths(self, length: int | None = None) -> list:
        by_len = self._paths_by_length
        if length is None:
            return [p for level in by_len for p in level]
        if length < 0 or length >= len(by_len):
            return []
        return list(by_len[length])


def loewy_length(q: Quiver) -> int:
    """1 + the length of the longest path."""
    return 1 + max(q.longest_in.values(), default=0)


def paths_between(q: Quiver, x: str, y: str, l: int) -> list:
    return [p for p in q.paths(l) if p.start == x and p.end == y]


def gamma_in(q: Quiver, l: int) -> frozenset:
    """Vertices at which some path of length ``l`` ends."""
    return frozenset(p.end for p in q.paths(l))


def gamma_out(q: Quiver, l: int) -> frozenset:
    """Vertices at which some path of length ``l`` starts."""
    return frozenset(p.start for p in q.paths(l))


def level_vertices(q: Quiver, l: int) -> list:
    """Vertices whose longest incoming path has length exactly ``l``."""
    return sorted(v for v in q.vertices if q.longest_in[v] == l)


# -- representations -----------------------------------------------------------


class Representation:
    """Dimension vector plus one rational matrix per arrow (shape head x tail)."""

    def __init__(self, quiver: Quiver, dims: Mapping, maps: Mapping | None = None):
        self.quiver = quiver
        self.dims = {v: int(dims.get(v, 0)) for v in quiver.vertices}
        if any(d < 0 for d in self.dims.values()):
            raise ValueError("dimensions must be nonnegative")
        unknown = set(str(k) for k in dims) - set(quiver.vertices)
        if unknown:
            raise QuiverError(f"dims given for unknown vertices {sorted(unknown)}")
        maps = dict(maps or {})
        unknown = set(maps) - set(quiver.arrow_ids)
        if unknown:
            raise QuiverError(f"maps given for unknown arrows {sorted(unknown)}")
        self.maps = {}
        for a in quiver.arrows:
            shape = (self.dims[a.head], self.dims[a.tail])
            m = maps.get(a.id)
            if m is None:
                m = Matrix.zeros(*shape)
            elif not isinstance(m, Matrix):
                m = Matrix.from_rows(m, QQ, ncols=shape[1])
            if m.shape != shape:
                raise ValueError(f"map {a.id} has shape {m.shape}, expected {shape}")
            if m.field != QQ:
                raise ValueError("representation matrices must be rational")
            self.maps[a.id] = m

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    @cached_property
    def offsets(self) -> dict:
        """Start of each vertex block in the topologically ordered total space."""
        off, out = 0, {}
        for v in self.quiver.order:
            out[v] = off
            off += self.dims[v]
        return out

    def block(self, v: str) -> range:
        return range(self.offsets[v], self.offsets[v] + self.dims[v])

    def path_map(self, p: Path) -> Matrix:
        m = Matrix.identity(self.dims[p.start])
        for a in p.arrows:
            m = self.maps[a.id] @ m
        return m

    def dimension_vector(self) -> tuple:
        return tuple(self.dims[v] for v in self.quiver.vertices)

    def __eq__(self, other):
        return (isinstance(other, Representation) and self.quiver == other.quiver
                and self.dims == other.dims and self.maps == other.maps)

    def __repr__(self):
        return f"Representation(dims={self.dims})"

    def to_json(self) -> dict:
        return {
            "dims": dict(self.dims),
            "maps": {aid: [[QQ.to_json(x) for x in row] for row in m.to_list()]
                     for aid, m in self.maps.items()},
        }


def simple(q: Quiver, x) -> Representation:
    x = q.check_vertex(x)
    return Representation(q, {x: 1})


def _path_module(q: Quiver, basis: dict, action) -> Representation:
    dims = {v: len(basis[v]) for v in q.vertices}
    index = {v: {p: i for i, p in enumerate(basis[v])} for v in q.vertices}
    maps = {}
    for a in q.arrows:
        entries = {}
        for j, p in enumerate(basis[a.tail]):
            img = action(a, p)
            if img is not None:
                entries[(index[a.head][img], j)] = 1
        maps[a.id] = Matrix.from_entries(dims[a.head], dims[a.tail], entries)
    return Representation(q, dims, maps)


def projective(q: Quiver, x) -> Representation:
    """P(x): basis of paths starting at x; an arrow extends a path at its head."""
    x = q.check_vertex(x)
    basis = {v: [] for v in q.vertices}
    for p in q.paths():
        if p.start == x:
            basis[p.end].append(p)

    def act(a, p):
        return p.then(a)

    return _path_module(q, basis, act)


def injective(q: Quiver, x) -> Representation:
    """I(x): basis of paths ending at x; an arrow strips itself off the front."""
    x = q.check_vertex(x)
    basis = {v: [] for v in q.vertices}
    for p in q.paths():
        if p.end == x:
            basis[p.start].append(p)

    def act(a, p):
        if p.arrows and p.arrows[0] == a:
            return Path(a.head, p.arrows[1:], p.end)
        return None

    return _path_module(q, basis, act)


def kronecker_quiver(n: int = 2) -> Quiver:
    """Vertices ``1 -> 2`` joined by arrows ``a1..an``."""
    if n < 1:
        raise ValueError("Kronecker quiver needs at least one arrow")
    return Quiver(["1", "2"], [(f"a{i}", "1", "2") for i in range(1, n + 1)])


def running_example_quiver() -> Quiver:
    """Four arrows a1: 0->1, a2, a3: 0->2, a4: 2->1."""
    return Quiver(["0", "1", "2"], [("a1", "0", "1"), ("a2", "0", "2"), ("a3", "0", "2"), ("a4", "2", "1")])


def kronecker_P(n: int) -> Representation:
    """Preprojective K_2-module of dimension (n, n+1): maps [I;0] and [0;I]."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    q = kronecker_quiver(2)
    a1 = {(i, i): 1 for i in range(n)}
    a2 = {(i + 1, i): 1 for i in range(n)}
    return Representation(q, {"1": n, "2": n + 1}, {
        "a1": Matrix.from_entries(n + 1, n, a1),
        "a2": Matrix.from_entries(n + 1, n, a2),
    })


def kronecker_I(n: int) -> Representation:
    """Preinjective K_2-module of dimension (n+1, n): maps [I 0] and [0 I]."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    q = kronecker_quiver(2)
    a1 = {(i, i): 1 for i in range(n)}
    a2 = {(i, i + 1): 1 for i in range(n)}
    return Representation(q, {"1": n + 1, "2": n}, {
        "a1": Matrix.from_entries(n, n + 1, a1),
        "a2": Matrix.from_entries(n, n + 1, a2),
    })


def direct_sum(M: Representation, N: Representation) -> Representation:
    if M.quiver != N.quiver:
        raise QuiverError("direct sum of representations of different quivers")
    q = M.quiver
    dims = {v: M.dims[v] + N.dims[v] for v in q.vertices}
    maps = {a.id: Matrix.block_diag([M.maps[a.id], N.maps[a.id]]) for a in q.arrows}
    return Representation(q, dims, maps)


def semisimple(q: Quiver, dims: Mapping) -> Representation:
    return Representation(q, dims)


def _zero_vertices(M: Representation, kill: set) -> Representation:
    q = M.quiver
    dims = {v: (0 if v in kill else M.dims[v]) for v in q.vertices}
    maps = {}
    for a in q.arrows:
        if a.tail in kill or a.head in kill:
            maps[a.id] = Matrix.zeros(dims[a.head], dims[a.tail])
        else:
            maps[a.id] = M.maps[a.id]
    return Representation(q, dims, maps)


def quotient_by_R(M: Representation, l: int) -> Representation:
    """M / R^l(M), where R^l(M) is the sum of the M_y with y receiving a length-l path."""
    if l < 1:
        raise ValueError("l must be at least 1")
    return _zero_vertices(M, set(gamma_in(M.quiver, l)))


def quotient_by_S(M: Representation, l: int) -> Representation:
    """M / S^l(M), where S^l(M) is the sum of the M_x with x emitting no length-l path."""
    if l < 1:
        raise ValueError("l must be at least 1")
    q = M.quiver
    return _zero_vertices(M, set(q.vertices) - set(gamma_out(q, l)))


def random_rep(q: Quiver, dims: Mapping, seed: int, bound: int = 5) -> Representation:
    """Entries drawn uniformly from {-bound, ..., bound}."""
    rng = random.Random(seed)
    dims = {v: int(dims.get(v, 0)) for v in q.vertices}
    maps = {}
    for a in q.arrows:
        rows, cols = dims[a.head], dims[a.tail]
        maps[a.id] = Matrix.from_rows(
            [[rng.randint(-bound, bound) for _ in range(cols)] for _ in range(rows)], QQ, ncols=cols)
    return Representation(q, dims, maps)


def random_quiver(rng: random.Random, n_vertices: int, n_arrows: int, max_length: int | None = None) -> Quiver:
    """Random acyclic quiver on ``v0..v{n-1}`` (arrows point from lower to higher index).

    With ``max_length`` the longest path is kept at most that long.
    """
    verts = [f"v{i}" for i in range(n_vertices)]
    if max_length is None:
        level = list(range(n_vertices))
    else:
        level = sorted(rng.randint(0, max_length) for _ in range(n_vertices))
    arrows = []
    pairs = [(i, j) for i in range(n_vertices) for j in range(n_vertices) if level[i] < level[j]]
    for k in range(n_arrows if pairs else 0):
        i, j = rng.choice(pairs)
        arrows.append((f"b{k + 1}", verts[i], verts[j]))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DisconnectedQuiverWarning)
        return Quiver(verts, arrows)


# -- morphisms, subrepresentations, quotients, extensions ----------------------


def is_homomorphism(f: Mapping, M: Representation, N: Representation) -> bool:
    """Check ``f_h(a) M_a == N_a f_t(a)`` for every arrow."""
    for a in M.quiver.arrows:
        if f[a.head] @ M.maps[a.id] != N.maps[a.id] @ f[a.tail]:
            return False
    return True


def generated_subspaces(M: Representation, generators: Mapping) -> dict:
    """Smallest subrepresentation containing the given vectors (vertex -> list)."""
    q = M.quiver
    spaces = {v: span_basis(list(generators.get(v, [])), QQ, M.dims[v]) for v in q.vertices}
    for v in q.order:
        for a in q.out_arrows(v):
            imgs = [M.maps[a.id].apply(u) for u in spaces[v]]
            spaces[a.head] = span_basis(spaces[a.head] + imgs, QQ, M.dims[a.head])
    return spaces


def is_subrepresentation(M: Representation, spaces: Mapping) -> bool:
    from .exactalg.subspace import contains
    for a in M.quiver.arrows:
        imgs = [M.maps[a.id].apply(u) for u in spaces[a.tail]]
        if imgs and not contains(spaces[a.head], imgs):
            return False
    return True


def _adapted_basis(n: int, sub: Sequence) -> tuple:
    """Change of basis ``[sub | complement]`` and its inverse, both n x n."""
    sub = span_basis(list(sub), QQ, n)
    comp = []
    cur = list(sub)
    rank = len(cur)
    for i in range(n):
        e = tuple(1 if j == i else 0 for j in range(n))
        trial = cur + [e]
        if Matrix.from_rows(trial, QQ, ncols=n).rank() > rank:
            cur.append(e)
            comp.append(e)
            rank += 1
    B = Matrix.from_columns(list(sub) + comp, n)
    cols = [B.solve([1 if j == i else 0 for j in range(n)]) for i in range(n)]
    Binv = Matrix.from_columns(cols, n) if n else Matrix.zeros(0, 0)
    return sub, comp, B, Binv


def subrepresentation(M: Representation, spaces: Mapping):
    """The subrepresentation on ``spaces`` and its inclusion morphism."""
    if not is_subrepresentation(M, spaces):
        raise ValueError("subspaces are not closed under the arrow maps")
    q = M.quiver
    bases = {v: span_basis(list(spaces.get(v, [])), QQ, M.dims[v]) for v in q.vertices}
    incl = {v: Matrix.from_columns(bases[v], M.dims[v]) if bases[v] else Matrix.zeros(M.dims[v], 0)
            for v in q.vertices}
    maps = {}
    for a in q.arrows:
        cols = []
        Bh = incl[a.head]
        for u in bases[a.tail]:
            cols.append(Bh.solve(M.maps[a.id].apply(u)))
        k = len(bases[a.head])
        maps[a.id] = Matrix.from_columns(cols, k) if cols else Matrix.zeros(k, 0)
    sub = Representation(q, {v: len(bases[v]) for v in q.vertices}, maps)
    return sub, incl


def quotient(M: Representation, spaces: Mapping):
    """``M / U`` for a subrepresentation ``U`` and the projection morphism."""
    if not is_subrepresentation(M, spaces):
        raise ValueError("subspaces are not closed under the arrow maps")
    q = M.quiver
    proj, comps = {}, {}
    for v in q.vertices:
        n = M.dims[v]
        sub, comp, _, Binv = _adapted_basis(n, spaces.get(v, []))
        k = len(sub)
        proj[v] = Binv.submatrix(range(k, n), range(n)) if n else Matrix.zeros(0, 0)
        comps[v] = comp
    maps = {}
    for a in q.arrows:
        cols = [proj[a.head].apply(M.maps[a.id].apply(c)) for c in comps[a.tail]]
        k = len(comps[a.head])
        maps[a.id] = Matrix.from_columns(cols, k) if cols else Matrix.zeros(k, 0)
    Q = Representation(q, {v: len(comps[v]) for v in q.vertices}, maps)
    return Q, proj


def extension(N: Representation, Q: Representation, couplings: Mapping | None = None) -> Representation:
    """Middle term of ``0 -> N -> E -> Q -> 0`` with maps ``[[N_a, C_a], [0, Q_a]]``.

    ``couplings`` maps arrow ids to ``C_a`` (shape N_h x Q_t); missing means zero,
    which gives the split extension.
    """
    if N.quiver != Q.quiver:
        raise QuiverError("extension of representations of different quivers")
    q = N.quiver
    couplings = couplings or {}
    dims = {v: N.dims[v] + Q.dims[v] for v in q.vertices}
    maps = {}
    for a in q.arrows:
        grid = {(0, 0): N.maps[a.id], (1, 1): Q.maps[a.id]}
        c = couplings.get(a.id)
        if c is not None:
            if not isinstance(c, Matrix):
                c = Matrix.from_rows(c, QQ, ncols=Q.dims[a.tail])
            grid[(0, 1)] = c
        maps[a.id] = Matrix.block(grid, [N.dims[a.head], Q.dims[a.head]], [N.dims[a.tail], Q.dims[a.tail]])
    return Representation(q, dims, maps)


def random_extension(N: Representation, Q: Representation, seed: int, bound: int = 3) -> Representation:
    rng = random.Random(seed)
    couplings = {}
    for a in N.quiver.arrows:
        r, c = N.dims[a.head], Q.dims[a.tail]
        couplings[a.id] = Matrix.from_rows(
            [[rng.randint(-bound, bound) for _ in range(c)] for _ in range(r)], QQ, ncols=c)
    return extension(N, Q, couplings)
