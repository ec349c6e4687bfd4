import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import paulis
from qrfcode import build_code, dense, load_code, parse
from qrfcode.pauli_core import Pauli, all_paulis, commutes, multiply
from qrfcode.stabilizer import (CodeError, classify_sector, code_projector, codewords, encode_computational,
                                isotype_projector, logical_operators, project_state, sector_bits, syndrome)

TOL = 1e-10


def test_three_qubit_group(code3):
    assert {str(p) for p in code3.group_table} == {"III", "ZZI", "IZZ", "ZIZ"}
    assert code3.k == 1 and code3.order == 4


def test_five_qubit_generators_from_listed_group(code5):
    assert [str(g) for g in code5.generators] == ["ZXIXZ", "IYXXY", "XXYIY", "XIXZZ"]
    assert len(set(code5.group_table)) == 16


def test_empty_generator_code():
    c = build_code(1, [])
    assert c.k == 1 and [str(p) for p in c.group_table] == ["I"]
    assert np.array_equal(code_projector(c), np.eye(2))


@pytest.mark.parametrize("gens, msg", [
    (["XI", "ZI"], "anticommute"),
    (["ZZ", "ZZ"], "dependent"),
    (["ZZ", "-ZZ"], "dependent"),
    (["+iZZ"], "Hermitian"),
    (["II"], "identity"),
    (["ZZZ"], "qubits"),
])
def test_build_rejects(gens, msg):
    with pytest.raises(CodeError, match=msg):
        build_code(2, gens)


def test_catalog_names_and_paths(tmp_path, monkeypatch):
    spec = tmp_path / "rep.json"
    spec.write_text('{"name": "rep", "n": 2, "generators": ["ZZ"]}')
    assert load_code(str(spec)).name == "rep"
    monkeypatch.setenv("QRFCODE_CATALOG", str(tmp_path))
    assert load_code("rep").n == 2


def test_projector_formula_and_trace(code3, code5):
    expected = dense.operator_from_paulis([(0.25, p) for p in ["III", "ZZI", "IZZ", "ZIZ"]])
    Pi = code_projector(code3)
    assert np.array_equal(Pi, expected)
    assert dense.projector_rank(Pi) == 2
    assert abs(np.trace(code_projector(code5)) - 2) <= TOL


def test_syndrome_examples(code3, code5, rng):
    assert syndrome(code3, parse("XII")) == (-1, 1)
    assert syndrome(code3, parse("III")) == (1, 1)
    psi = codewords(code5)[0]
    for _ in range(20):
        e = Pauli(5, int(rng.integers(32)), int(rng.integers(32)))
        moved = dense.apply_pauli(e, psi)
        measured = tuple(int(np.round(np.vdot(moved, dense.apply_pauli(s, moved)).real)) for s in code5.generators)
        assert syndrome(code5, e) == measured
    with pytest.raises(ValueError):
        syndrome(code3, parse("XX"))


def test_sector_examples(code3):
    for u in code3.group_table:
        assert classify_sector(code3, u).is_trivial
    assert classify_sector(code3, parse("XII")).bits == 1


def test_sector_populations(code3):
    counts = {}
    for p in all_paulis(3):
        s = sector_bits(code3, p)
        counts[s] = counts.get(s, 0) + 1
    assert counts == {s: 16 for s in range(4)}   # 2^{n+k} = 16 per sector, 64 with phases


def test_isotype_projectors(code3, code5):
    P2 = isotype_projector(code3, 1)
    target = np.zeros((8, 8))
    target[0b100, 0b100] = target[0b011, 0b011] = 1
    assert dense.max_dev(P2, target) <= TOL
    assert np.array_equal(isotype_projector(code3, 0), code_projector(code3))
    total = sum(isotype_projector(code5, c) for c in range(16))
    assert dense.max_dev(total, np.eye(32)) <= 1e-12
    for a in range(4):
        for b in range(4):
            prod = isotype_projector(code3, a) @ isotype_projector(code3, b)
            assert dense.max_dev(prod, isotype_projector(code3, a) if a == b else 0 * prod) <= TOL


def test_projector_routes_agree(code5, rng):
    # product of (1 +- S)/2 against the group sum
    for c in (0, 5, 15):
        v = dense.random_state(5, rng)
        assert dense.max_dev(project_state(code5, v, c), isotype_projector(code5, c) @ v) <= TOL


def test_computational_encoding(code3, code5):
    assert np.array_equal(encode_computational(code3, [1, 0]), dense.basis_state(3, 0))
    assert np.array_equal(encode_computational(code3, [0, 1]), dense.basis_state(3, 7))
    zero = encode_computational(code5, [1, 0])
    plus = "00000 10010 01001 10100 01010 00101".split()
    assert abs(zero[0] - 0.25) <= TOL
    assert all(abs(zero[int(b, 2)] - 0.25) <= TOL for b in plus)
    assert abs(zero[0b11011] + 0.25) <= TOL
    a, b = 0.6, 0.8j
    mix = encode_computational(code5, [a, b])
    assert dense.max_dev(mix, a * zero + b * encode_computational(code5, [0, 1])) <= 1e-12
    with pytest.raises(ValueError):
        encode_computational(code3, [0, 0])


def test_logical_operators(code3, code5):
    lz, lx = logical_operators(code3)
    assert len(lz) == len(lx) == 1
    assert not commutes(lz[0], lx[0])
    assert code3.lookup(multiply(lx[0], parse("XXX"))) is not None   # X1X2X3 up to stabilizers
    lz5, lx5 = logical_operators(code5)
    for s in code5.group_table:
        assert commutes(s, lz5[0]) and commutes(s, lx5[0])
    assert not commutes(lz5[0], lx5[0])


def test_logicals_reduction_route():
    # n = 8 takes the reduction path; the toric-like code below has k = 2
    from qrfcode.stabilizer import _logicals_by_enumeration, _logicals_by_reduction
    code = build_code(4, ["XXXX", "ZZZZ"])
    a = _logicals_by_enumeration(code)
    b = _logicals_by_reduction(code)
    for lz, lx in (a, b):
        for i in range(2):
            for j in range(2):
                assert commutes(lz[i], lx[j]) == (i != j)


@given(st.integers(0, 15), st.integers(0, 15))
def test_group_closure_with_phases(g, h):
    code5 = load_code("5qubit")
    assert multiply(code5.element(g), code5.element(h)) == code5.element(g ^ h)


@given(paulis(n=5, phase=False))
def test_error_maps_code_space_into_its_isotype(e):
    code5 = load_code("5qubit")
    E = dense.pauli_matrix(e)
    P = isotype_projector(code5, sector_bits(code5, e))
    assert abs(np.trace(P @ E @ code_projector(code5) @ E.conj().T @ P) - 2) <= TOL


def test_twirl_equals_charge_measurement(code3, rng):
    rho = dense.random_density(3, rng, rank=3)
    lhs = sum(isotype_projector(code3, c) @ rho @ isotype_projector(code3, c) for c in range(4))
    rhs = sum(dense.pauli_matrix(u) @ rho @ dense.pauli_matrix(u) for u in code3.group_table) / 4
    assert dense.max_dev(lhs, rhs) <= TOL


def test_no_minus_identity_in_group(code5):
    assert not any(u.x == 0 and u.z == 0 and u.phase for u in code5.group_table)
