import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import paulis
from qrfcode import build_code, dense, error_frames, load_code, parse
from qrfcode.stabilizer import code_projector, codewords, isotype_projector

TOL = 1e-10
CODE3 = load_code("3qubit")
error_lists = st.lists(paulis(n=3, phase=False), min_size=1, max_size=5)


def test_single_flips_are_correctable(code3):
    kl = error_frames.kl_check(code3, ["III", "XII", "IXI", "IIX"])
    assert kl.correctable and np.array_equal(kl.C, np.eye(4)) and kl.rank == 4


def test_shared_sector_with_logical_difference(code3):
    # X3 and X1X2 share a syndrome, but X3 . X1X2 = X1X2X3 is the logical X
    kl = error_frames.kl_check(code3, ["III", "IIX", "XXI"])
    assert (1, 2) in kl.diagnostics["same_sector"]
    assert kl.diagnostics["violations"] == [(1, 2, "XXX")]
    assert not kl.correctable
    assert not error_frames.kl_check_dense(code3, ["III", "IIX", "XXI"]).correctable


def test_degenerate_correctable_pair(code3):
    kl = error_frames.kl_check(code3, ["III", "XII", "XZZ"])   # X1 and X1 Z1Z2 differ by a stabilizer
    assert kl.correctable
    assert kl.diagnostics["degenerate"] == [(1, 2)]
    assert abs(kl.C[1, 2] - 1) <= TOL


def test_logical_insertion_fails(code3):
    kl = error_frames.kl_check(code3, ["III", "XII", "ZII"])
    assert not kl.correctable
    assert kl.rank is None
    assert np.isnan(kl.C[0, 2])


def test_dense_and_pauli_routes_match_on_c(code5):
    errs = ["IIIII", "XIIII", "IZIII", "IIYII"]
    a = error_frames.kl_check(code5, errs)
    b = error_frames.kl_check_dense(code5, errs)
    assert a.correctable == b.correctable
    assert dense.max_dev(a.C, b.C) <= TOL


def test_wrong_length(code3):
    with pytest.raises(ValueError):
        error_frames.kl_check(code3, ["XX"])


def test_maximal_sets(code3, code5):
    es = error_frames.build_maximal_error_set(code3)
    assert {str(e) for e in es.errors} == {"III", "XII", "IXI", "IIX"}
    assert str(es.errors[0]) == "III" and es.is_maximal
    assert np.linalg.matrix_rank(es.kl_matrix) == 4
    es5 = error_frames.build_maximal_error_set(code5)
    assert len(es5.errors) == 16 and es5.is_maximal
    assert all(e.weight <= 1 for e in es5.errors)


def test_seeded_set_matches_minority_rule(code3):
    target = ["III", "IXX", "XIX", "XXI"]
    es = error_frames.build_maximal_error_set(code3, ["XXI", "IXX", "XIX"])
    assert error_frames.equivalent(code3, es.errors, target)
    # a lone two-flip seed is completed by single flips, which is a different class
    lone = error_frames.build_maximal_error_set(code3, ["XXI"])
    assert "XXI" in {str(e) for e in lone.errors}
    assert not error_frames.equivalent(code3, lone.errors, target)


def test_inconsistent_seeds(code3):
    with pytest.raises(error_frames.ErrorSetError, match="logical"):
        error_frames.build_maximal_error_set(code3, ["ZII"])


def test_destabilizer_fill_route(monkeypatch, code5):
    monkeypatch.setattr(error_frames, "ENUM_BUDGET", 3)
    es = error_frames.build_maximal_error_set(code5)
    assert es.is_maximal
    assert error_frames.kl_check(code5, es.errors).correctable


def test_equivalence_examples(code3):
    a = ["III", "XII", "IXI", "IIX"]
    assert error_frames.equivalent(code3, a, a)
    # {I, X3} and {I, X1X2}: same sector, but the two restrictions differ by the logical X
    assert not error_frames.equivalent(code3, ["III", "IIX"], ["III", "XXI"])
    assert not error_frames.equivalent_dense(code3, ["III", "IIX"], ["III", "XXI"])
    assert not error_frames.equivalent(code3, ["III", "XII"], ["III", "YII"])
    assert not error_frames.equivalent_dense(code3, ["III", "XII"], ["III", "YII"])
    # stabilizer multiples and phases do not change the span
    assert error_frames.equivalent(code3, ["III", "XII"], ["-ZZI", "+iYZI"])


@given(error_lists, error_lists)
def test_equivalence_routes_agree(a, b):
    assert error_frames.equivalent(CODE3, a, b) == error_frames.equivalent_dense(CODE3, a, b)


@given(error_lists)
def test_kl_routes_agree(errs):
    a = error_frames.kl_check(CODE3, errs)
    b = error_frames.kl_check_dense(CODE3, errs)
    assert a.correctable == b.correctable


@given(error_lists)
def test_kl_iff_gauge_only_action(errs):
    verdict = error_frames.kl_check(CODE3, errs).correctable
    assert verdict == error_frames.kl_via_factorization(CODE3, errs)


def test_kl_matrix_hermitian(code5, rng):
    for _ in range(10):
        errs = [parse("".join(rng.choice(list("IXYZ"), size=5))) for _ in range(4)]
        C = error_frames.kl_check_dense(code5, errs).C
        ok = ~np.isnan(C)
        assert np.allclose(C[ok], C.conj().T[ok], atol=TOL)


def test_dressing_recovery(code3):
    es = error_frames.build_maximal_error_set(code3)
    fields = error_frames.frame_fields_from_errors(es)
    zero = codewords(code3)[0]
    rho = dense.ket_to_density(zero)
    for e in ("IXI", "III", "XII", "IIX"):
        hit = dense.pauli_matrix(parse(e)) @ rho @ dense.pauli_matrix(parse(e))
        assert dense.max_dev(error_frames.dressing_recovery(fields, hit), rho) <= TOL
    for g in range(code3.order):
        moved = fields.gauge_transformed(g)
        for Ka, Kb in zip(error_frames.recovery_kraus(fields), error_frames.recovery_kraus(moved)):
            # the channel is unchanged; each element may pick up a sign
            assert dense.max_dev(Ka @ rho @ Ka.conj().T, Kb @ rho @ Kb.conj().T) <= TOL


def test_frame_fields_are_isometries(code5):
    fields = error_frames.frame_fields_from_errors(error_frames.build_maximal_error_set(code5))
    Pi = code_projector(code5)
    for c in range(code5.order):
        R = fields.matrix(c)
        assert dense.max_dev(R.conj().T @ R, Pi) <= TOL
        assert dense.max_dev(isotype_projector(code5, c) @ R, R) <= TOL


def test_frame_fields_need_maximal_set(code3):
    with pytest.raises(error_frames.ErrorSetError):
        error_frames.frame_fields_from_errors(error_frames.error_set(code3, ["III", "XII"]))


def test_factorization_properties(code3, code5):
    for code in (code3, code5):
        es = error_frames.build_maximal_error_set(code)
        fact = error_frames.build_factorization(es)
        dim = 1 << code.n
        assert dense.max_dev(fact.t @ fact.t.conj().T, np.eye(dim)) <= TOL
        assert error_frames.covariance_deviation(fact) <= TOL
        assert error_frames.diagonal_projector_deviation(es) <= TOL
        B = fact.group_basis()
        assert dense.max_dev(B.conj().T @ B, np.eye(code.order)) <= TOL
    assert error_frames.frame_algebra_dim(error_frames.build_maximal_error_set(code3)) == 16


def test_factorization_cap():
    code = build_code(11, ["ZZ" + "I" * 9])
    with pytest.raises(dense.DenseCapError):
        error_frames.build_factorization(error_frames.build_maximal_error_set(code))


def test_minority_rule_factorization(code3):
    es = error_frames.error_set(code3, ["III", "XXI", "XIX", "IXX"])
    fact = error_frames.build_factorization(es)
    table = {(r["logical"], r["charge"]): set(r["state"]) for r in fact.table()}
    # charge 1 flips the first check: reached by X2X3 from either codeword
    assert table[(0, 1)] == {"011"} and table[(1, 1)] == {"100"}
    assert error_frames.covariance_deviation(fact) <= TOL
