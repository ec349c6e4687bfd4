"""Planar and toric codes: spanning forests, single-defect dressing, and isotype dimensions."""

import numpy as np

from qrfcode import dense, surface

m = surface.build_rect_lattice(2, 2)
sc = surface.vertex_plaquette_code(m)
fp = surface.spanning_forests(m)
print(f"rect 2x2: n={sc.code.n} k={sc.code.k} leftover edges {list(fp.leftover)}")
print("forest problems:", surface.check_forests(m, fp))

zero, one = surface.homological_codewords(sc)
plus = (zero + one) / np.sqrt(2)
for path in ([0], [3, 6]):
    hit = dense.apply_pauli(surface.string_operator(m, path, "Z"), plus)
    res = surface.correct_single_defect(sc, fp, hit, path)
    fid = abs(np.vdot(plus, res.state)) ** 2
    print(f"  Z on {path}: defect at {sorted(res.sector[0])}, dressed by {list(res.dressing[0])},"
          f" {res.verdict}, fidelity {fid:.3f}")

torus = surface.map_from_spec("torus:2x2")
st = surface.vertex_plaquette_code(torus)
print(f"\ntorus 2x2: genus {torus.genus}, k={st.code.k}, relations {len(st.relations)}")
print("forest rep obeys the commutation rule:", surface.weyl_check(surface.forest_dual_rep(st)).ok)
for vs, fs in (((), ()), ((0, 1), ()), ((0,), ()), ((), (2, 3))):
    print(f"  defects V={list(vs)} F={list(fs)}: dimension {surface.isotype_dimension(st, vs, fs)}")
