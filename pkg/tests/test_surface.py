import dataclasses
import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qrfcode import dense, surface
from qrfcode.pauli_core import commutes
from qrfcode.stabilizer import codewords

TOL = 1e-10
TORUS = surface.map_from_spec("torus:2x2")
RECT = surface.build_rect_lattice(2, 2)
SC_TORUS = surface.vertex_plaquette_code(TORUS)


def edge_sets(m):
    return st.lists(st.integers(0, m.n_edges - 1), max_size=m.n_edges)


@pytest.mark.parametrize("L,H", [(1, 1), (2, 2), (3, 2), (1, 4)])
def test_rect_counts_and_complex(L, H):
    m = surface.build_rect_lattice(L, H)
    assert (m.n_edges, m.n_vertices, m.n_faces) == (2 * L * H + L + H + 1, L * H + H, L * H + L)
    assert surface.chain_defects(m) == (0, 0)
    assert surface.homology_rank(m) == surface.cohomology_rank(m) == 1
    assert len(m.rough_edges) == 2 * (L + 1)
    assert len(m.smooth_edges) == 2 * (H + 1)   # left and right columns


def test_rect_indexing():
    assert RECT.edges[0] == (None, 0) and RECT.edges[3] == (0, 3) and RECT.edges[6] == (3, None)
    assert RECT.edges[9] == (0, 1) and RECT.edge_names[9] == "h(0,0)"
    with pytest.raises(surface.MapError):
        surface.build_rect_lattice(0, 2)


@pytest.mark.parametrize("a,b", [(1, 1), (2, 2), (2, 3)])
def test_torus_complex(a, b):
    m = surface.map_from_spec(f"torus:{a}x{b}")
    assert m.closed and m.genus == 1 and m.euler_characteristic == 0
    assert surface.chain_defects(m) == (0, 0)
    assert surface.homology_rank(m) == surface.cohomology_rank(m) == 2
    zs, xs = surface.paired_logical_chains(m)
    form = [[surface.intersection_parity(z, x) for x in xs] for z in zs]
    assert form == [[1, 0], [0, 1]]


def test_broken_complex_is_detected():
    m = surface.CombinatorialMap(2, [(0, 1)], [(0,)], "closed")
    assert surface.chain_defects(m) != (0, 0)


def test_closed_map_validation():
    spec = surface.torus_spec(2, 2)
    with pytest.raises(surface.MapError, match="genus"):
        surface.build_closed_map({**spec, "genus": 2})
    with pytest.raises(surface.MapError, match="Euler"):
        surface.build_closed_map({**spec, "vertices": 5})
    with pytest.raises(surface.MapError, match="face sides"):
        surface.build_closed_map({**spec, "faces": spec["faces"][1:]})
    with pytest.raises(surface.MapError, match="dangling"):
        surface.build_closed_map({"vertices": 1, "edges": [[0, None]], "faces": [[0, 0]]})
    with pytest.raises(surface.MapError, match="outside"):
        surface.build_closed_map({"vertices": 1, "edges": [[0, 3]], "faces": [[0, 0]]})
    with pytest.raises(surface.MapError, match="shorthand"):
        surface.map_from_spec("rect:2by2")
    with pytest.raises(surface.MapError, match="unknown lattice"):
        surface.map_from_spec({"type": "disc"})


def test_identity_generator_rejected():
    # sphere with one edge whose single face runs along both sides
    m = surface.build_closed_map({"vertices": 2, "edges": [[0, 1]], "faces": [[0, 0]]})
    assert m.genus == 0
    with pytest.raises(surface.MapError, match="identity"):
        surface.vertex_plaquette_code(m)


def test_spec_round_trip(tmp_path):
    for m in (RECT, TORUS):
        again = surface.map_from_spec(m.to_json())
        assert again.edges == m.edges and again.faces == m.faces
        path = tmp_path / "map.json"
        path.write_text(json.dumps(m.to_json()))
        assert surface.map_from_spec(str(path)).faces == m.faces


def test_code_structure():
    sc = surface.vertex_plaquette_code(RECT)
    assert sc.faithful and sc.code.k == 1 and sc.quotient_rank == 12
    assert len(SC_TORUS.relations) == 2 and SC_TORUS.code.k == 2
    assert len(SC_TORUS.kernel_elements()) == 4
    for h in SC_TORUS.kernel_elements():
        assert SC_TORUS.full_element(h).is_identity
    with pytest.raises(ValueError, match="kernel"):
        SC_TORUS.reduced_character(SC_TORUS.join({0}, ()))


@given(edge_sets(TORUS), edge_sets(TORUS))
def test_string_commutation_is_intersection_parity(a, b):
    z = surface.string_operator(TORUS, a, "Z")
    x = surface.string_operator(TORUS, b, "X")
    va = surface._edge_vector(TORUS, a)
    vb = surface._edge_vector(TORUS, b)
    assert commutes(z, x) == (surface.intersection_parity(va, vb) == 0)


@given(edge_sets(TORUS), st.lists(st.integers(0, 3)), st.sampled_from("ZX"))
def test_deformation_invariance(path, cells, kind):
    # moving a string across faces (Z) or vertex stars (X) keeps its class
    vec = surface._edge_vector(TORUS, path)
    for c in cells:
        if kind == "Z":
            vec ^= surface._edge_vector(TORUS, TORUS.faces[c])
        else:
            vec ^= surface._edge_vector(TORUS, TORUS.incident_edges(c))
    moved = surface._support(vec)
    assert surface.canonical_string(SC_TORUS, moved, kind) == surface.canonical_string(SC_TORUS, path, kind)
    assert surface.classify_string(SC_TORUS, moved, kind) == surface.classify_string(SC_TORUS, path, kind)
    assert surface.string_endpoints(SC_TORUS, moved, kind) == surface.string_endpoints(SC_TORUS, path, kind)


def test_classify_string():
    sc = surface.vertex_plaquette_code(RECT)
    assert surface.classify_string(sc, [0], "Z") == "charged"
    assert surface.string_endpoints(sc, [0], "Z") == frozenset({0})
    assert surface.classify_string(sc, [0, 3, 6], "Z") == "logical"
    assert surface.classify_string(sc, [], "Z") == "stabilizer"
    assert surface.classify_string(sc, RECT.faces[4], "Z") == "stabilizer"
    with pytest.raises(ValueError):
        surface.string_operator(RECT, [0], "Y")
    with pytest.raises(surface.MapError):
        surface.string_operator(RECT, [99], "Z")


@pytest.mark.parametrize("spec", ["rect:1x1", "rect:2x2", "rect:3x1", "torus:2x2", "torus:2x3"])
def test_forest_invariants(spec):
    m = surface.map_from_spec(spec)
    fp = surface.spanning_forests(m)
    assert surface.check_forests(m, fp) == []
    assert not fp.tree & fp.dual_tree
    assert len(fp.tree) + len(fp.dual_tree) + len(fp.leftover) == m.n_edges
    assert len(fp.leftover) == (2 * m.genus if m.closed else 1)
    assert json.loads(json.dumps(fp.to_json()))["leftover"] == list(fp.leftover)
    report = surface.weyl_check(surface.forest_dual_rep(surface.vertex_plaquette_code(m), fp))
    assert report.ok and report.rep_ok


def test_broken_forest_rejected():
    fp = surface.spanning_forests(RECT)
    bad = dataclasses.replace(fp, vertex_paths={**fp.vertex_paths, 0: ()})
    assert surface.check_forests(RECT, bad)
    with pytest.raises(surface.ForestError):
        surface.forest_dual_rep(surface.vertex_plaquette_code(RECT), bad)


def test_forest_rep_dense_route():
    m = surface.build_rect_lattice(1, 1)
    sc = surface.vertex_plaquette_code(m)
    from qrfcode import duality
    rep = surface.forest_dual_rep(sc).to_dual_rep()
    assert rep.paulis is None
    assert duality.check_duality(sc.code, rep, TOL, exhaustive=True).ok
    assert duality.rep_axiom_deviation(rep) <= TOL


def test_isotype_dimension_routes():
    for spec in ("rect:1x1", "torus:2x2"):
        sc = surface.vertex_plaquette_code(surface.map_from_spec(spec))
        nv, nf = sc.map.n_vertices, sc.map.n_faces
        for bits in range(1 << (nv + nf)):
            vs, fs = sc.split(bits)
            assert surface.isotype_dimension(sc, vs, fs) == surface.isotype_dimension_dense(sc, vs, fs)
        assert surface.code_space_dimension(sc) == 1 << sc.code.k


def _projector(vecs):
    return sum(np.outer(v, v.conj()) for v in vecs)


def test_homological_codewords_match_stabilizer_codewords():
    for spec in ("rect:1x1", "torus:2x2"):
        sc = surface.vertex_plaquette_code(surface.map_from_spec(spec))
        a = surface.homological_codewords(sc)
        b = codewords(sc.code)
        assert dense.max_dev(_projector(a), _projector(b)) <= TOL
        gram = np.array([[np.vdot(x, y) for y in a] for x in a])
        assert dense.max_dev(gram, np.eye(len(a))) <= TOL


@pytest.fixture(scope="module")
def rect_setup():
    sc = surface.vertex_plaquette_code(RECT)
    fp = surface.spanning_forests(RECT)
    zero, one = surface.homological_codewords(sc)
    return sc, fp, (zero + one) / np.sqrt(2)


def test_defect_correction(rect_setup):
    sc, fp, plus = rect_setup
    for path, verdict, fid in (([0], "corrected", 1.0), ([3, 6], "logical", 0.0)):
        hit = dense.apply_pauli(surface.string_operator(RECT, path, "Z"), plus)
        assert surface.defect_sector(sc, hit) == (frozenset({0}), frozenset())
        res = surface.correct_single_defect(sc, fp, hit, path)
        assert res.verdict == verdict
        assert surface.defect_sector(sc, res.state) == (frozenset(), frozenset())
        assert abs(abs(np.vdot(plus, res.state)) ** 2 - fid) <= TOL
    assert surface.correct_single_defect(sc, fp, plus).verdict == "no-defect"


def test_defect_errors(rect_setup):
    sc, fp, plus = rect_setup
    hit = dense.apply_pauli(surface.string_operator(RECT, [0], "Z"), plus)
    with pytest.raises(ValueError, match="does not create"):
        surface.correct_single_defect(sc, fp, hit, [1])
    two = dense.apply_pauli(surface.string_operator(RECT, [0, 1], "Z"), plus)
    with pytest.raises(ValueError, match="one defect"):
        surface.correct_single_defect(sc, fp, two)
    with pytest.raises(surface.AmbiguousSector):
        surface.defect_sector(sc, plus + hit)


def test_torus_pair_correction():
    sc = SC_TORUS
    fp = surface.spanning_forests(TORUS)
    psi = surface.homological_codewords(sc)[0]
    path = [0]
    hit = dense.apply_pauli(surface.string_operator(TORUS, path, "Z"), psi)
    vs, fs = surface.defect_sector(sc, hit)
    assert len(vs) == 2 and not fs
    res = surface.correct_single_defect(sc, fp, hit, path)
    assert res.verdict in ("corrected", "logical")
    assert surface.defect_sector(sc, res.state) == (frozenset(), frozenset())
    with pytest.raises(ValueError, match="even"):
        surface.forest_dual_rep(sc, fp).for_defects({0}, ())
