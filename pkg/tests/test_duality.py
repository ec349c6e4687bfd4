import numpy as np
import pytest

from qrfcode import build_code, dense, duality, error_frames, parse, qrf_local
from qrfcode.stabilizer import code_projector, codewords, isotype_projector

TOL = 1e-10


def _setup(code):
    frame = qrf_local.build_local_frame(code)
    rep = duality.dual_rep_from_basis(frame)
    base = error_frames.build_maximal_error_set(code)
    return rep, base


def test_basis_rep_is_pauli_and_satisfies_axioms(code3, code5):
    for code in (code3, code5):
        rep, _ = _setup(code)
        assert rep.paulis is not None
        assert duality.check_duality(code, rep, TOL, exhaustive=True).ok
        assert duality.rep_axiom_deviation(rep) <= TOL


def test_flipped_sign_is_caught(code3):
    rep, _ = _setup(code3)
    ops = list(rep.paulis)
    # swap in an operator that commutes with every check
    ops[1] = parse("ZZZ")
    bad = duality.dual_rep_from_ops(code3, ops)
    verdict = duality.check_duality(code3, bad)
    assert not verdict.ok and verdict.violation[1] == 1
    dense_bad = duality.dual_rep_from_ops(code3, [dense.pauli_matrix(p) for p in ops])
    assert dense_bad.paulis is not None   # recognized back as Paulis
    raw = duality.DualRep(code3, dense_bad.ops, None)
    v2 = duality.check_duality(code3, raw)
    assert not v2.ok and v2.violation == verdict.violation and v2.max_dev > 1


def test_wrong_rep_size(code3):
    with pytest.raises(duality.DualityError):
        duality.dual_rep_from_ops(code3, ["III", "XII"])


def test_trivial_group():
    code = build_code(2, [], ["XI", "IX"], ["ZI", "IZ"])
    rep = duality.dual_rep_from_ops(code, ["II"])
    assert duality.check_duality(code, rep, exhaustive=True).ok
    assert dense.max_dev(duality.dual_projector(rep, 0), np.eye(4)) <= TOL


def test_gauge_fix_unitaries(code5):
    rep, base = _setup(code5)
    gs = duality.gauge_fix_errors(rep, base)
    report = duality.gauge_fix_report(gs)
    assert max(report.values()) <= TOL


def test_relabel_table_checks():
    with pytest.raises(duality.DualityError, match="trivial character"):
        duality._relabel_table(4, lambda c, g: g ^ 1)
    with pytest.raises(duality.DualityError, match="bijection"):
        duality._relabel_table(4, lambda c, g: g if c == 0 else 0)
    table = duality._relabel_table(4, duality.linear_relabel([2, 1]))
    assert table[1].tolist() == [2, 3, 0, 1] and table[2].tolist() == [1, 0, 3, 2]


def test_gauge_fix_rejects_bad_bases(code3):
    rep, _ = _setup(code3)
    with pytest.raises(duality.DualityError, match="every sector"):
        duality.gauge_fix_errors(rep, error_frames.error_set(code3, ["III", "XII"]))
    shifted = error_frames.error_set(code3, ["-III", "XII", "IXI", "IIX"])
    with pytest.raises(duality.DualityError, match="must be I"):
        duality.gauge_fix_errors(rep, shifted)


def test_dual_syndrome_and_recovery(code3):
    rep, base = _setup(code3)
    gs = duality.gauge_fix_errors(rep, base)
    psi = codewords(code3)[0] * np.sqrt(0.3) + codewords(code3)[1] * np.sqrt(0.7)
    rho = dense.ket_to_density(psi)
    for g in range(code3.order):
        hit = gs.unitaries[g] @ psi
        assert duality.dual_syndrome(gs, hit) == g
        out = duality.dual_recovery(gs, dense.ket_to_density(hit))
        assert dense.max_dev(out, rho) <= TOL
    mixed = gs.unitaries[1] @ psi + gs.unitaries[2] @ psi
    with pytest.raises(duality.AmbiguousSyndrome) as info:
        duality.dual_syndrome(gs, mixed)
    assert np.isclose(info.value.weights[1], 0.5)


def test_dual_recovery_is_trace_preserving(code5):
    rep, base = _setup(code5)
    gs = duality.gauge_fix_errors(rep, base)
    total = sum(dense.dagger(K) @ K for K in duality.dual_recovery_kraus(gs))
    assert dense.max_dev(total, np.eye(32)) <= TOL


def test_electric_recovery(code3):
    base = error_frames.build_maximal_error_set(code3)
    by = base.by_sector()
    psi = codewords(code3)[1]
    rho = dense.ket_to_density(psi)
    for c, e in by.items():
        E = dense.pauli_matrix(e)
        out = duality.electric_recovery(code3, by, E @ rho @ dense.dagger(E))
        assert dense.max_dev(out, rho) <= TOL


def test_twirl_equals_measurement(code3, rng):
    rep, _ = _setup(code3)
    A = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    rho = A @ dense.dagger(A)
    rho /= np.trace(rho)
    assert dense.max_dev(duality.group_twirl(code3, rho), duality.charge_measurement(code3, rho)) <= TOL
    assert dense.max_dev(duality.dual_twirl(rep, rho), duality.dual_charge_measurement(rep, rho)) <= TOL


def test_complementarity(code3, code5):
    for code in (code3, code5):
        rep, _ = _setup(code)
        assert duality.complementarity_deviation(rep) <= TOL


def test_frame_field_and_factorization_reps_agree(code3, code5):
    for code in (code3, code5):
        base = error_frames.build_maximal_error_set(code)
        fields = error_frames.frame_fields_from_errors(base)
        a = duality.dual_rep_from_frame_fields(fields)
        b = duality.dual_rep_from_factorization(error_frames.build_factorization(base))
        assert duality.check_duality(code, a, TOL, exhaustive=True).ok
        assert duality.rep_axiom_deviation(a) <= TOL
        for x, y in zip(a.ops, b.ops):
            assert dense.max_dev(x, y) <= TOL


def test_induced_restrictions(code5):
    base = error_frames.build_maximal_error_set(code5)
    fields = error_frames.frame_fields_from_errors(base)
    rep = duality.dual_rep_from_frame_fields(fields)
    Pi = code_projector(code5)
    root = np.sqrt(code5.order)
    for g, R in enumerate(duality.induced_gauge_fix_restrictions(fields)):
        assert dense.max_dev(R, root * duality.dual_projector(rep, g) @ Pi) <= TOL


def test_fourier_relation(code5):
    fact = error_frames.build_factorization(error_frames.build_maximal_error_set(code5))
    assert max(duality.fourier_basis_relation(fact).values()) <= TOL


def test_blanket_recovery_not_positive(code3):
    assert abs(duality.blanket_recovery_min_eigenvalue(code3) - (1 - 4)) <= TOL
    trivial = build_code(1, [], ["X"], ["Z"])
    assert abs(duality.blanket_recovery_min_eigenvalue(trivial)) <= TOL


def test_dual_projectors_partition(code5):
    rep, _ = _setup(code5)
    total = sum(duality.dual_projector(rep, g) for g in range(code5.order))
    assert dense.max_dev(total, np.eye(32)) <= TOL
    for g in range(code5.order):
        U = dense.pauli_matrix(code5.element(g))
        assert dense.max_dev(U @ duality.dual_projector(rep, 0) @ U, duality.dual_projector(rep, g)) <= TOL
    assert dense.max_dev(sum(isotype_projector(code5, c) for c in range(16)), np.eye(32)) <= TOL
