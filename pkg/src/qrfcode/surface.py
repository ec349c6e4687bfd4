"""Z2 surface codes on rectangles with boundary and on closed surfaces.

Qubits live on edges. A rectangle of width L and height H has H horizontal
lines of L + 1 vertices each. Vertical edges come first, row-major from the
top: vertical edge (r, c), r = 0..H, c = 0..L, has index r(L+1) + c and joins
vertex (r-1, c) to vertex (r, c); rows 0 and H dangle off the rough top and
bottom boundaries. Horizontal edge (r, c), r = 0..H-1, c = 0..L-1, follows at
offset (H+1)(L+1) + rL + c. Face (r, c), r = 0..H, c = 0..L-1, has index rL + c.

Group bits of the full gauge group put vertex v at bit v and face f at bit
|V| + f. On a closed surface two of those generators are redundant; the
stabilizer code keeps an independent subset and the characters of the
quotient group are the (V, F) labels with |V| and |F| even.
"""

from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from . import dense, gf2
from .pauli_core import Pauli, commutes, multiply
from .stabilizer import StabilizerCode, build_code, project_state, symplectic_matrix

HOMOLOGY_DENSE_CAP = 13
SPACE_DIM_CAP = 10


class MapError(ValueError):
    pass


class ForestError(ValueError):
    pass


class AmbiguousSector(ValueError):
    pass


# maps ------------------------------------------------------------------

@dataclass
class CombinatorialMap:
    n_vertices: int
    edges: List[Tuple[Optional[int], Optional[int]]]   # None marks a rough dangling end
    faces: List[Tuple[int, ...]]
    kind: str                                          # "rect" or "closed"
    L: Optional[int] = None
    H: Optional[int] = None
    genus: Optional[int] = None
    edge_names: List[str] = field(default_factory=list)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    @property
    def closed(self) -> bool:
        return self.kind == "closed"

    @property
    def euler_characteristic(self) -> int:
        return self.n_vertices - self.n_edges + self.n_faces

    def face_slots(self, e: int) -> List[int]:
        """Faces containing e, repeated if e occurs twice in one face."""
        return [f for f, es in enumerate(self.faces) for x in es if x == e]

    @property
    def rough_edges(self) -> Tuple[int, ...]:
        return tuple(e for e, (a, b) in enumerate(self.edges) if a is None or b is None)

    @property
    def smooth_edges(self) -> Tuple[int, ...]:
        return tuple(e for e in range(self.n_edges) if len(self.face_slots(e)) == 1)

    def incident_edges(self, v: int) -> List[int]:
        """Edges at v, a self-loop listed twice."""
        out = []
        for e, ends in enumerate(self.edges):
            out.extend([e] * sum(1 for x in ends if x == v))
        return out

    def to_json(self) -> dict:
        if self.kind == "rect":
            return {"type": "rect", "L": self.L, "H": self.H}
        return {"type": "closed", "vertices": self.n_vertices,
                "edges": [list(ends) for ends in self.edges],
                "faces": [list(f) for f in self.faces]}


def build_rect_lattice(L: int, H: int) -> CombinatorialMap:
    if L < 1 or H < 1:
        raise MapError(f"need L, H >= 1, got L={L}, H={H}")
    vid = lambda r, c: r * (L + 1) + c      # vertex on horizontal line r
    n_vertical = (H + 1) * (L + 1)
    vert = lambda r, c: r * (L + 1) + c     # vertical edge, same arithmetic
    horiz = lambda r, c: n_vertical + r * L + c
    edges, names = [], []
    for r in range(H + 1):
        for c in range(L + 1):
            edges.append((vid(r - 1, c) if r > 0 else None, vid(r, c) if r < H else None))
            names.append(f"v({r},{c})")
    for r in range(H):
        for c in range(L):
            edges.append((vid(r, c), vid(r, c + 1)))
            names.append(f"h({r},{c})")
    faces = []
    for r in range(H + 1):
        for c in range(L):
            es = [vert(r, c), vert(r, c + 1)]
            if r > 0:
                es.append(horiz(r - 1, c))
            if r < H:
                es.append(horiz(r, c))
            faces.append(tuple(sorted(es)))
    m = CombinatorialMap(H * (L + 1), edges, faces, "rect", L=L, H=H, edge_names=names)
    _check_counts(m)
    return m


def _check_counts(m: CombinatorialMap) -> None:
    L, H = m.L, m.H
    expect = (2 * L * H + L + H + 1, L * H + H, L * H + L)
    got = (m.n_edges, m.n_vertices, m.n_faces)
    if got != expect:
        raise MapError(f"rectangle counts {got} differ from {expect}")


def build_closed_map(spec: dict) -> CombinatorialMap:
    """Closed map from {"vertices": int, "edges": [[v, v]], "faces": [[e, ...]]}."""
    nv = int(spec["vertices"])
    edges = []
    for e, ends in enumerate(spec["edges"]):
        if len(ends) != 2 or any(x is None for x in ends):
            raise MapError(f"edge {e} is dangling: {ends}")
        a, b = int(ends[0]), int(ends[1])
        if not (0 <= a < nv and 0 <= b < nv):
            raise MapError(f"edge {e} has endpoint outside 0..{nv - 1}")
        edges.append((a, b))
    faces = [tuple(int(x) for x in f) for f in spec["faces"]]
    for f, es in enumerate(faces):
        if not es or any(not 0 <= x < len(edges) for x in es):
            raise MapError(f"face {f} lists an unknown edge")
    m = CombinatorialMap(nv, edges, faces, "closed")
    for e in range(m.n_edges):
        if len(m.face_slots(e)) != 2:
            raise MapError(f"edge {e} borders {len(m.face_slots(e))} face sides, expected 2")
    chi_e = m.euler_characteristic
    if chi_e % 2 or chi_e > 2:
        raise MapError(f"Euler characteristic {chi_e} fits no closed orientable surface")
    g = (2 - chi_e) // 2
    if "genus" in spec and int(spec["genus"]) != g:
        raise MapError(f"Euler relation gives genus {g}, spec says {spec['genus']}")
    m.genus = g
    m.edge_names = [f"e{e}" for e in range(m.n_edges)]
    return m


def torus_spec(a: int, b: int) -> dict:
    """Square a x b torus: edge h(i,j) joins (i,j)-(i,j+1), v(i,j) joins (i,j)-(i+1,j)."""
    vid = lambda i, j: (i % a) * b + (j % b)
    h = lambda i, j: (i % a) * b + (j % b)
    v = lambda i, j: a * b + (i % a) * b + (j % b)
    edges = [[vid(i, j), vid(i, j + 1)] for i in range(a) for j in range(b)]
    edges += [[vid(i, j), vid(i + 1, j)] for i in range(a) for j in range(b)]
    faces = [[h(i, j), h(i + 1, j), v(i, j), v(i, j + 1)] for i in range(a) for j in range(b)]
    return {"type": "closed", "vertices": a * b, "edges": edges, "faces": faces}


def map_from_spec(spec) -> CombinatorialMap:
    """Accepts "rect:LxH", "torus:AxB", a JSON path or an already parsed dict."""
    if isinstance(spec, CombinatorialMap):
        return spec
    if isinstance(spec, str):
        for prefix in ("rect:", "torus:"):
            if spec.startswith(prefix):
                try:
                    a, b = (int(t) for t in spec[len(prefix):].lower().split("x"))
                except ValueError as exc:
                    raise MapError(f"bad lattice shorthand {spec!r}") from exc
                return build_rect_lattice(a, b) if prefix == "rect:" else build_closed_map(torus_spec(a, b))
        spec = json.loads(Path(spec).read_text())
    kind = spec.get("type")
    if kind == "rect":
        return build_rect_lattice(int(spec["L"]), int(spec["H"]))
    if kind == "closed":
        return build_closed_map(spec)
    raise MapError(f"unknown lattice type {kind!r}")


# chain complexes -------------------------------------------------------

def boundary_1(m: CombinatorialMap) -> np.ndarray:
    """Subsets of vertices to subsets of edges, as an |E| x |V| matrix."""
    out = np.zeros((m.n_edges, m.n_vertices), dtype=np.uint8)
    for e, ends in enumerate(m.edges):
        for v in ends:
            if v is not None:
                out[e, v] ^= 1
    return out


def boundary_2(m: CombinatorialMap) -> np.ndarray:
    """Edges to the faces they border, as an |F| x |E| matrix."""
    out = np.zeros((m.n_faces, m.n_edges), dtype=np.uint8)
    for f, es in enumerate(m.faces):
        for e in es:
            out[f, e] ^= 1
    return out


def coboundary_1(m: CombinatorialMap) -> np.ndarray:
    return boundary_2(m).T.copy()


def coboundary_2(m: CombinatorialMap) -> np.ndarray:
    return boundary_1(m).T.copy()


def chain_defects(m: CombinatorialMap) -> Tuple[int, int]:
    """Number of nonzero entries in the two composites; both vanish on a valid map."""
    d = (boundary_2(m).astype(np.int64) @ boundary_1(m)) % 2
    c = (coboundary_2(m).astype(np.int64) @ coboundary_1(m)) % 2
    return int(d.sum()), int(c.sum())


def homology_rank(m: CombinatorialMap) -> int:
    """dim ker d2 - dim im d1 over GF(2)."""
    return m.n_edges - gf2.rank(boundary_2(m)) - gf2.rank(boundary_1(m))


def cohomology_rank(m: CombinatorialMap) -> int:
    return m.n_edges - gf2.rank(coboundary_2(m)) - gf2.rank(coboundary_1(m))


def _quotient_basis(kernel: List[np.ndarray], trivial: np.ndarray) -> List[np.ndarray]:
    """Kernel vectors independent modulo the rows of ``trivial``."""
    rows = [r for r in trivial]
    base = gf2.rank(np.array(rows)) if rows else 0
    out = []
    for v in kernel:
        trial = np.array(rows + [v])
        r = gf2.rank(trial)
        if r > base:
            rows.append(v)
            base = r
            out.append(v)
    return out


def homology_basis(m: CombinatorialMap) -> List[np.ndarray]:
    """Cycles (edge vectors with no face boundary) that are not boundaries."""
    return _quotient_basis(gf2.kernel(boundary_2(m)), boundary_1(m).T)


def cohomology_basis(m: CombinatorialMap) -> List[np.ndarray]:
    return _quotient_basis(gf2.kernel(coboundary_2(m)), coboundary_1(m).T)


def intersection_parity(a: Sequence[int], b: Sequence[int]) -> int:
    return int(np.dot(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)) % 2)


def _gf2_inverse(M: np.ndarray) -> np.ndarray:
    k = M.shape[0]
    cols = []
    for j in range(k):
        x = gf2.solve(M, np.eye(k, dtype=np.uint8)[j])
        if x is None:
            raise MapError("intersection form is degenerate")
        cols.append(x)
    return np.array(cols, dtype=np.uint8).T


def paired_logical_chains(m: CombinatorialMap) -> Tuple[List[np.ndarray], List[np.ndarray]]:
    """(Z chains, X chains) with |z_i & x_j| odd exactly when i == j."""
    xs = homology_basis(m)
    zs = cohomology_basis(m)
    if len(xs) != len(zs):
        raise MapError("homology and cohomology ranks differ")
    if not xs:
        return [], []
    M = np.array([[intersection_parity(a, b) for b in zs] for a in xs], dtype=np.uint8)
    N = _gf2_inverse(M).T
    zs = [(N[i].astype(np.int64) @ np.array(zs, dtype=np.int64)) % 2 for i in range(len(zs))]
    return [z.astype(np.uint8) for z in zs], xs


# operators -------------------------------------------------------------

def _edge_vector(m: CombinatorialMap, edges) -> np.ndarray:
    v = np.zeros(m.n_edges, dtype=np.uint8)
    for e in edges:
        e = int(e)
        if not 0 <= e < m.n_edges:
            raise MapError(f"edge {e} is not in the lattice")
        v[e] ^= 1
    return v


def _support(vec: Sequence[int]) -> Tuple[int, ...]:
    return tuple(int(i) for i in np.nonzero(np.asarray(vec))[0])


def _mask(n: int, vec: Sequence[int]) -> int:
    out = 0
    for e in _support(vec):
        out |= 1 << (n - 1 - e)
    return out


def string_operator(m: CombinatorialMap, path, kind: str = "Z") -> Pauli:
    """S^Z(t) = prod Z_e or S^X(t) = prod X_e over an edge subset (repeats cancel)."""
    mask = _mask(m.n_edges, _edge_vector(m, path))
    if kind == "Z":
        return Pauli(m.n_edges, 0, mask)
    if kind == "X":
        return Pauli(m.n_edges, mask, 0)
    raise ValueError(f"kind must be 'Z' or 'X', got {kind!r}")


def vertex_operator(m: CombinatorialMap, v: int) -> Pauli:
    return string_operator(m, m.incident_edges(v), "X")


def plaquette_operator(m: CombinatorialMap, f: int) -> Pauli:
    return string_operator(m, m.faces[f], "Z")


@dataclass
class SurfaceCode:
    map: CombinatorialMap
    vertex_ops: List[Pauli]
    face_ops: List[Pauli]
    code: StabilizerCode
    kept: List[int]                  # full generator indices used by ``code``
    relations: List[int]             # kernel basis, bit i = full generator i
    _dropped_combo: Dict[int, int] = field(default_factory=dict, repr=False)

    @property
    def full_generators(self) -> List[Pauli]:
        return self.vertex_ops + self.face_ops

    @property
    def n_full(self) -> int:
        return len(self.vertex_ops) + len(self.face_ops)

    @property
    def quotient_rank(self) -> int:
        return self.code.m

    @property
    def faithful(self) -> bool:
        return not self.relations

    def kernel_elements(self) -> List[int]:
        out = {0}
        for r in self.relations:
            out |= {x ^ r for x in out}
        return sorted(out)

    def split(self, full_bits: int) -> Tuple[FrozenSet[int], FrozenSet[int]]:
        nv = len(self.vertex_ops)
        vs = frozenset(i for i in range(nv) if (full_bits >> i) & 1)
        fs = frozenset(i - nv for i in range(nv, self.n_full) if (full_bits >> i) & 1)
        return vs, fs

    def join(self, vhat, fhat) -> int:
        nv = len(self.vertex_ops)
        return sum(1 << v for v in set(vhat)) | sum(1 << (nv + f) for f in set(fhat))

    def full_element(self, full_bits: int) -> Pauli:
        out = Pauli(self.map.n_edges)
        for i, s in enumerate(self.full_generators):
            if (full_bits >> i) & 1:
                out = multiply(out, s)
        return out

    def full_character(self, bits: int) -> int:
        """Extend a character of the kept generators to all of them, trivially on the kernel."""
        out = 0
        for j, i in enumerate(self.kept):
            if (bits >> j) & 1:
                out |= 1 << i
        for d, combo in self._dropped_combo.items():
            if bin(bits & combo).count("1") % 2:
                out |= 1 << d
        return out

    def reduced_character(self, full_bits: int) -> int:
        """Restriction to the kept generators; rejects labels that do not descend."""
        for r in self.relations:
            if bin(full_bits & r).count("1") % 2:
                raise ValueError("character is not trivial on the kernel")
        return sum(1 << j for j, i in enumerate(self.kept) if (full_bits >> i) & 1)

    def reduced_element(self, full_bits: int) -> int:
        """Group element of ``code`` equal to the full product (kernel dropped)."""
        found = self.code.lookup(self.full_element(full_bits))
        if found is None or found[1]:
            raise ValueError("element has no phase-free image in the kept group")
        return found[0]


def vertex_plaquette_code(m: CombinatorialMap, name: str = "") -> SurfaceCode:
    vs = [vertex_operator(m, v) for v in range(m.n_vertices)]
    fs = [plaquette_operator(m, f) for f in range(m.n_faces)]
    full = vs + fs
    for i, s in enumerate(full):
        if s.is_identity:
            raise MapError(f"generator {i} is the identity; the map is degenerate")
    for a, b in itertools.product(vs, fs):
        if not commutes(a, b):
            raise MapError(f"{a} and {b} anticommute; the map is malformed")
    sym = symplectic_matrix(full)
    kept, rank = [], 0
    for i in range(len(full)):
        r = gf2.rank(sym[kept + [i]])
        if r > rank:
            kept.append(i)
            rank = r
    relations = [gf2.bits_to_int(v[::-1]) for v in gf2.kernel(sym.T)]
    for r in relations:
        prod = Pauli(m.n_edges)
        for i in range(len(full)):
            if (r >> i) & 1:
                prod = multiply(prod, full[i])
        if not prod.is_identity or prod.phase:
            raise MapError("a generator relation yields -I")
    dropped = {}
    kept_sym = sym[kept].T
    for d in range(len(full)):
        if d in kept:
            continue
        x = gf2.solve(kept_sym, sym[d])
        dropped[d] = sum(int(b) << j for j, b in enumerate(x))
    zs, xs = paired_logical_chains(m)
    lz = [string_operator(m, _support(z), "Z") for z in zs]
    lx = [string_operator(m, _support(x), "X") for x in xs]
    label = name or (f"rect{m.L}x{m.H}" if m.kind == "rect" else f"closed-g{m.genus}")
    code = build_code(m.n_edges, [full[i] for i in kept], lz, lx, name=label)
    return SurfaceCode(m, vs, fs, code, kept, relations, dropped)


# string classes --------------------------------------------------------

def _trivial_rows(sc: SurfaceCode, kind: str) -> np.ndarray:
    # Z strings deform across faces, X strings across vertex stars
    return boundary_2(sc.map) if kind == "Z" else boundary_1(sc.map).T


def canonical_string(sc: SurfaceCode, path, kind: str = "Z") -> Tuple[int, ...]:
    """Canonical edge set of the class of a string modulo stabilizer deformations."""
    vec = _edge_vector(sc.map, path)
    return _support(gf2.coset_canonical(vec, _trivial_rows(sc, kind)))


def string_endpoints(sc: SurfaceCode, path, kind: str = "Z") -> FrozenSet[int]:
    """Vertices (Z) or faces (X) where the string creates a defect."""
    vec = _edge_vector(sc.map, path).astype(np.int64)
    if kind == "Z":
        ends = (boundary_1(sc.map).T.astype(np.int64) @ vec) % 2
    else:
        ends = (boundary_2(sc.map).astype(np.int64) @ vec) % 2
    return frozenset(_support(ends))


def classify_string(sc: SurfaceCode, path, kind: str = "Z") -> str:
    """'stabilizer', 'logical' or 'charged' for a string operator."""
    if string_endpoints(sc, path, kind):
        return "charged"
    if not canonical_string(sc, path, kind):
        return "stabilizer"
    return "logical"


# forests ---------------------------------------------------------------

def _bfs(n_nodes: int, ends: List[Optional[Tuple[int, int]]], root: int):
    adj: List[List[Tuple[int, int]]] = [[] for _ in range(n_nodes)]
    for e, pair in enumerate(ends):
        if pair is None:
            continue
        a, b = pair
        adj[a].append((e, b))
        if a != b:
            adj[b].append((e, a))
    parent: Dict[int, Tuple[int, int]] = {}
    seen = {root}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for e, w in adj[u]:
            if w not in seen:
                seen.add(w)
                parent[w] = (e, u)
                queue.append(w)
    return parent, seen


def _path_to_root(parent: Dict[int, Tuple[int, int]], node: int) -> Tuple[int, ...]:
    out = []
    while node in parent:
        e, node = parent[node]
        out.append(e)
    return tuple(out)


@dataclass
class ForestPair:
    tree: FrozenSet[int]
    dual_tree: FrozenSet[int]
    vertex_paths: Dict[int, Tuple[int, ...]]    # to a rough boundary, or to the root vertex
    face_paths: Dict[int, Tuple[int, ...]]      # to a smooth boundary, or to the root face
    root_edges: Tuple[int, ...]
    dual_root_edges: Tuple[int, ...]
    leftover: Tuple[int, ...]
    root_vertex: Optional[int] = None
    root_face: Optional[int] = None

    def to_json(self) -> dict:
        return {
            "tree": sorted(self.tree),
            "dual_tree": sorted(self.dual_tree),
            "root_edges": list(self.root_edges),
            "dual_root_edges": list(self.dual_root_edges),
            "leftover": list(self.leftover),
            "root_vertex": self.root_vertex,
            "root_face": self.root_face,
        }


def _dual_ends(m: CombinatorialMap, sink: Optional[int]) -> List[Optional[Tuple[int, int]]]:
    out = []
    for e in range(m.n_edges):
        slots = m.face_slots(e)
        if len(slots) == 2:
            out.append((slots[0], slots[1]))
        elif len(slots) == 1 and sink is not None:
            out.append((slots[0], sink))
        else:
            raise ForestError(f"edge {e} borders {len(slots)} face sides")
    return out


def spanning_forests(m: CombinatorialMap) -> ForestPair:
    """Disjoint direct and dual forests by breadth-first search in edge order.

    With boundaries, a sink vertex absorbs every rough end and a sink face
    absorbs every smooth edge; the two trees are grown from the sinks and the
    sinks are removed afterwards.
    """
    nv, nf = m.n_vertices, m.n_faces
    if m.closed:
        vsink = fsink = None
        prim = [(a, b) for a, b in m.edges]
        vroot, froot = 0, 0
        n_vnodes, n_fnodes = nv, nf
    else:
        vsink, fsink = nv, nf
        prim = [(a if a is not None else vsink, b if b is not None else vsink) for a, b in m.edges]
        vroot, froot = vsink, fsink
        n_vnodes, n_fnodes = nv + 1, nf + 1
    vparent, vseen = _bfs(n_vnodes, prim, vroot)
    if len(vseen) != n_vnodes:
        raise ForestError("the direct graph is not connected")
    tree = frozenset(e for e, _ in vparent.values())
    dual = _dual_ends(m, fsink)
    rest = [None if e in tree else dual[e] for e in range(m.n_edges)]
    fparent, fseen = _bfs(n_fnodes, rest, froot)
    if len(fseen) != n_fnodes:
        raise ForestError("the dual graph minus the direct tree is not connected")
    dual_tree = frozenset(e for e, _ in fparent.values())
    vpaths = {v: _path_to_root(vparent, v) for v in range(nv)}
    fpaths = {f: _path_to_root(fparent, f) for f in range(nf)}
    if m.closed:
        root_edges = dual_root = ()
    else:
        root_edges = tuple(sorted(e for w, (e, u) in vparent.items() if u == vsink))
        dual_root = tuple(sorted(e for w, (e, u) in fparent.items() if u == fsink))
    leftover = tuple(e for e in range(m.n_edges) if e not in tree and e not in dual_tree)
    return ForestPair(tree, dual_tree, vpaths, fpaths, root_edges, dual_root, leftover,
                      vroot if m.closed else None, froot if m.closed else None)


def check_forests(m: CombinatorialMap, fp: ForestPair) -> List[str]:
    """Problems with a forest pair; empty when every stated property holds."""
    problems = []
    if fp.tree & fp.dual_tree:
        problems.append("forests share an edge")
    for v, path in fp.vertex_paths.items():
        ends = string_endpoints_on_map(m, path, "Z")
        want = {v} ^ ({fp.root_vertex} if m.closed else set())
        if not set(path) <= fp.tree:
            problems.append(f"path of vertex {v} leaves the tree")
        if ends != frozenset(want):
            problems.append(f"path of vertex {v} has endpoints {sorted(ends)}")
        if not m.closed and (not path or path[-1] not in m.rough_edges):
            problems.append(f"path of vertex {v} does not reach a rough boundary")
    for f, path in fp.face_paths.items():
        ends = string_endpoints_on_map(m, path, "X")
        want = {f} ^ ({fp.root_face} if m.closed else set())
        if not set(path) <= fp.dual_tree:
            problems.append(f"dual path of face {f} leaves the dual tree")
        if ends != frozenset(want):
            problems.append(f"dual path of face {f} has endpoints {sorted(ends)}")
        if not m.closed and (not path or path[-1] not in m.smooth_edges):
            problems.append(f"dual path of face {f} does not reach a smooth boundary")
    if m.closed:
        if len(fp.tree) != m.n_vertices - 1 or len(fp.dual_tree) != m.n_faces - 1:
            problems.append("trees have the wrong size")
        if len(fp.leftover) != 2 * m.genus:
            problems.append(f"{len(fp.leftover)} leftover edges, expected {2 * m.genus}")
    return problems


def string_endpoints_on_map(m: CombinatorialMap, path, kind: str) -> FrozenSet[int]:
    vec = _edge_vector(m, path).astype(np.int64)
    mat = boundary_1(m).T if kind == "Z" else boundary_2(m)
    return frozenset(_support((mat.astype(np.int64) @ vec) % 2))


@dataclass
class ForestDualRep:
    surface: SurfaceCode
    forests: ForestPair
    generators: List[Pauli]          # image of each kept-generator character bit

    def for_defects(self, vhat, fhat) -> Pauli:
        """prod_{v in V} S^Z(gamma_v) prod_{f in F} S^X(gamma'_f)."""
        m = self.surface.map
        vhat, fhat = set(vhat), set(fhat)
        if m.closed and (len(vhat) % 2 or len(fhat) % 2):
            raise ValueError("closed surfaces only carry even defect numbers")
        zvec = np.zeros(m.n_edges, dtype=np.uint8)
        xvec = np.zeros(m.n_edges, dtype=np.uint8)
        for v in vhat:
            zvec ^= _edge_vector(m, self.forests.vertex_paths[v])
        for f in fhat:
            xvec ^= _edge_vector(m, self.forests.face_paths[f])
        return Pauli(m.n_edges, _mask(m.n_edges, xvec), _mask(m.n_edges, zvec))

    def element(self, bits: int) -> Pauli:
        out = Pauli(self.surface.map.n_edges)
        for j, p in enumerate(self.generators):
            if (bits >> j) & 1:
                out = multiply(out, p)
        return out

    def to_dual_rep(self):
        from .duality import dual_rep_from_ops
        dense.check_cap(self.surface.map.n_edges, dense.MATRIX_CAP, "matrix")
        ops = [dense.pauli_matrix(self.element(c)) for c in range(self.surface.code.order)]
        rep = dual_rep_from_ops(self.surface.code, ops, source="forest pair")
        rep.paulis = None   # keep the dense route honest
        return rep


def forest_dual_rep(sc: SurfaceCode, fp: Optional[ForestPair] = None) -> ForestDualRep:
    fp = fp or spanning_forests(sc.map)
    problems = check_forests(sc.map, fp)
    if problems:
        raise ForestError("; ".join(problems))
    rep = ForestDualRep(sc, fp, [])
    for j in range(sc.code.m):
        vs, fs = sc.split(sc.full_character(1 << j))
        rep.generators.append(rep.for_defects(vs, fs))
    return rep


@dataclass
class WeylReport:
    ok: bool
    pairs_checked: int
    violation: Optional[Tuple[int, int]] = None   # (full generator, character bit)
    rep_ok: bool = True


def weyl_check(rep: ForestDualRep) -> WeylReport:
    """U^g Uhat^chi = chi(g) Uhat^chi U^g on every vertex/plaquette generator, plus rep laws."""
    sc = rep.surface
    full = sc.full_generators
    count = 0
    for j, p in enumerate(rep.generators):
        char = sc.full_character(1 << j)
        for i, s in enumerate(full):
            count += 1
            if commutes(s, p) != (not (char >> i) & 1):
                return WeylReport(False, count, (i, j))
    rep_ok = all(p.is_hermitian and multiply(p, p).is_identity and multiply(p, p).phase == 0
                 for p in rep.generators)
    rep_ok = rep_ok and all(commutes(a, b) for a, b in itertools.combinations(rep.generators, 2))
    return WeylReport(rep_ok, count, None, rep_ok)


# dense pieces ----------------------------------------------------------

def code_space_dimension(sc: SurfaceCode) -> int:
    """Rank of the projector built by applying every generator's (1+S)/2 to I."""
    n = sc.map.n_edges
    dense.check_cap(n, SPACE_DIM_CAP, "projector")
    P = project_state(sc.code, np.eye(1 << n, dtype=complex))
    return dense.projector_rank(P)


def isotype_dimension(sc: SurfaceCode, vhat, fhat) -> int:
    """Character sum over the kernel: only kernel elements have nonzero trace."""
    lab = sc.join(vhat, fhat)
    total = 0
    for h in sc.kernel_elements():
        total += -1 if bin(lab & h).count("1") % 2 else 1
    n = sc.map.n_edges
    num = total * (1 << n)
    den = 1 << sc.n_full
    if num % den:
        raise ArithmeticError("non-integer isotype dimension")
    return num // den


def isotype_dimension_dense(sc: SurfaceCode, vhat, fhat) -> int:
    """Trace of prod_a (1 +- S_a)/2 over every generator, relations included."""
    n = sc.map.n_edges
    dense.check_cap(n, SPACE_DIM_CAP, "projector")
    lab = sc.join(vhat, fhat)
    M = np.eye(1 << n, dtype=complex)
    for i, s in enumerate(sc.full_generators):
        sign = -1 if (lab >> i) & 1 else 1
        M = 0.5 * (M + sign * dense.apply_pauli(s, M))
        if not np.any(np.abs(M) > 1e-12):
            return 0
    return int(round(float(np.real(np.trace(M)))))


def homological_codewords(sc: SurfaceCode) -> List[np.ndarray]:
    """|0bar> averages boundaries of vertex sets; others add nontrivial cycles."""
    m = sc.map
    n = m.n_edges
    dense.check_cap(n, HOMOLOGY_DENSE_CAP)
    d1 = boundary_1(m).astype(np.int64)
    masks = set()
    for bits in range(1 << m.n_vertices):
        sel = np.array([(bits >> v) & 1 for v in range(m.n_vertices)], dtype=np.int64)
        masks.add(_mask(n, (d1 @ sel) % 2))
    zero = np.zeros(1 << n, dtype=complex)
    zero[sorted(masks)] = 1.0
    zero /= np.linalg.norm(zero)
    out = []
    for j in range(1 << sc.code.k):
        v = zero
        for i in range(sc.code.k):
            if (j >> (sc.code.k - 1 - i)) & 1:
                v = dense.apply_pauli(sc.code.logical_x[i], v)
        out.append(v)
    return out


# defects ---------------------------------------------------------------

def defect_sector(sc: SurfaceCode, state: np.ndarray, tol: float = 1e-8) -> Tuple[FrozenSet[int], FrozenSet[int]]:
    """(vertex defects, face defects) read from generator eigenvalues."""
    v = np.asarray(state, dtype=complex)
    nrm = np.vdot(v, v).real
    bits = 0
    for i, s in enumerate(sc.full_generators):
        ev = np.vdot(v, dense.apply_pauli(s, v)).real / nrm
        if abs(ev - 1) <= tol:
            continue
        if abs(ev + 1) <= tol:
            bits |= 1 << i
            continue
        raise AmbiguousSector(f"generator {i} has expectation {ev:.6f}; state mixes sectors")
    return sc.split(bits)


@dataclass
class DefectCorrection:
    state: np.ndarray
    sector: Tuple[FrozenSet[int], FrozenSet[int]]
    dressing: Tuple[Tuple[int, ...], str]        # (edges, kind) applied to the state
    verdict: str                                 # 'no-defect', 'corrected', 'logical', 'unchecked'
    combined: Tuple[int, ...] = ()


def correct_single_defect(sc: SurfaceCode, fp: ForestPair, state: np.ndarray,
                          error_path: Optional[Sequence[int]] = None,
                          tol: float = 1e-8) -> DefectCorrection:
    """Apply the tree path of the defect; with the error's path, say whether a logical slipped in.

    Closed surfaces carry defects in pairs, so there the one pair is joined by
    the tree path between its two members.
    """
    vs, fs = defect_sector(sc, state, tol)
    if not vs and not fs:
        return DefectCorrection(np.asarray(state, dtype=complex), (vs, fs), ((), "Z"), "no-defect")
    allowed = 2 if sc.map.closed else 1
    if vs and fs or len(vs) + len(fs) != allowed:
        raise ValueError(f"expected {'one pair' if allowed == 2 else 'one'} defect, got V={sorted(vs)} F={sorted(fs)}")
    kind = "Z" if vs else "X"
    paths = fp.vertex_paths if vs else fp.face_paths
    vec = np.zeros(sc.map.n_edges, dtype=np.uint8)
    for x in (vs or fs):
        vec ^= _edge_vector(sc.map, paths[x])
    dressing = _support(vec)
    out = dense.apply_pauli(string_operator(sc.map, dressing, kind), state)
    verdict, combined = "unchecked", ()
    if error_path is not None:
        combined = _support(_edge_vector(sc.map, error_path) ^ vec)
        cls = classify_string(sc, combined, kind)
        if cls == "charged":
            raise ValueError("error path does not create the observed defect")
        verdict = "corrected" if cls == "stabilizer" else "logical"
    return DefectCorrection(out, (vs, fs), (dressing, kind), verdict, combined)
