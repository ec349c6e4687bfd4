"""Check batteries for stabilizer codes and surface lattices.

Each check returns a record with a verdict of "pass", "fail" or "skipped"
and the largest deviation it saw. Random inputs come from a fixed seed so a
report is reproducible byte for byte on one platform.
"""

from __future__ import annotations

import itertools
import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, List, Optional, Tuple

import numpy as np

from . import dense, duality, error_frames, qrf_local, surface
from .stabilizer import (StabilizerCode, code_projector, codewords, isotype_projector,
                         load_code, project_state)

SCHEMA_VERSION = 1
SEED = 20240917


class UnknownCode(LookupError):
    pass


def catalog_dir() -> Path:
    env = os.environ.get("QRFCODE_CATALOG")
    return Path(env) if env else Path(__file__).parent / "catalog"


def catalog_names() -> List[str]:
    return sorted(p.stem for p in catalog_dir().glob("*.json"))


def resolve_code(spec: str) -> StabilizerCode:
    """A catalog name or a path to a code JSON file."""
    path = Path(spec)
    if path.suffix == ".json" and path.exists():
        return load_code(str(path))
    cand = catalog_dir() / f"{spec}.json"
    if cand.exists():
        return load_code(str(cand))
    raise UnknownCode(f"unknown code {spec!r}; catalog has {', '.join(catalog_names()) or 'nothing'}")


def is_lattice_spec(spec: str) -> bool:
    if spec.startswith(("rect:", "torus:")):
        return True
    path = Path(spec)
    if path.suffix == ".json" and path.exists():
        try:
            return "type" in json.loads(path.read_text())
        except (OSError, ValueError):
            return False
    return False


@dataclass
class Record:
    name: str
    anchor: str              # which claim the check certifies
    verdict: str
    max_dev: float = 0.0
    detail: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "anchor": self.anchor, "verdict": self.verdict,
                "max_dev": float(f"{self.max_dev:.3e}"), "detail": self.detail}


class _Skip(Exception):
    pass


def _run(name: str, anchor: str, fn: Callable[[], Tuple[float, str]], tol: float) -> Record:
    try:
        dev, detail = fn()
    except (_Skip, dense.DenseCapError) as exc:
        return Record(name, anchor, "skipped", 0.0, str(exc))
    except Exception as exc:  # a crash inside a check is a failed check
        return Record(name, anchor, "fail", 1.0, f"{type(exc).__name__}: {exc}")
    return Record(name, anchor, "pass" if dev <= tol else "fail", dev, detail)


def _cap(n: int, cap: int, what: str) -> None:
    if n > cap:
        raise _Skip(f"{what} needs n <= {cap}, code has n = {n}")


def _bool(ok: bool) -> float:
    return 0.0 if ok else 1.0


# stabilizer-code battery -----------------------------------------------

def verify_code(code: StabilizerCode, tol: float = dense.TOL, max_dense_n: int = 13) -> List[Record]:
    rng = np.random.default_rng(SEED)
    mcap = min(dense.MATRIX_CAP, max_dense_n)
    vcap = min(dense.STATE_CAP, max_dense_n)
    n = code.n
    state = {}

    def projector_formula():
        _cap(n, mcap, "projector")
        group_avg = code_projector(code)
        product = project_state(code, np.eye(1 << n, dtype=complex))
        rank = dense.projector_rank(group_avg)
        dev = dense.max_dev(group_avg, product)
        return max(dev, _bool(rank == 1 << code.k)), f"rank {rank}"

    def codewords_stabilized():
        _cap(n, vcap, "codewords")
        words = codewords(code)
        dev = 0.0
        for w in words:
            for s in code.generators:
                dev = max(dev, dense.max_dev(dense.apply_pauli(s, w), w))
        W = np.stack(words, axis=1)
        dev = max(dev, dense.max_dev(dense.dagger(W) @ W, np.eye(len(words))))
        return dev, f"{len(words)} codewords"

    def maximal_set():
        es = error_frames.build_maximal_error_set(code)
        state["es"] = es
        kl = error_frames.kl_check(code, es.errors)
        dev = _bool(kl.correctable and es.is_maximal)
        if n <= mcap:
            kd = error_frames.kl_check_dense(code, es.errors, tol)
            dev = max(dev, _bool(kd.correctable), dense.max_dev(kd.C, kl.C))
        return dev, " ".join(str(e) for e in es.errors)

    def local_frame():
        _cap(n, vcap, "local frame")
        fr = qrf_local.build_local_frame(code)
        state["frame"] = fr
        c = fr.cocycle
        bad = 0
        for g, h, k in itertools.product(range(fr.order), repeat=3):
            if (c[g, h] + c[g ^ h, k] - c[h, k] - c[g, h ^ k]) % 4:
                bad += 1
        B = fr.orientation_basis
        dev = max(dense.max_dev(dense.dagger(B) @ B, np.eye(fr.order)), float(bad))
        return dev, f"frame qubits {[q + 1 for q in fr.frame_qubits]}, seed {fr.seed_origin}"

    def disentangler():
        _cap(n, mcap, "disentangler")
        fr = state.get("frame") or qrf_local.build_local_frame(code)
        es = state.get("es") or error_frames.build_maximal_error_set(code)
        rec = qrf_local.recover_via_disentangler(fr, es.errors, tol)
        dev = dense.max_dev(rec.gram, np.eye(len(rec.records)))
        return max(dev, _bool(rec.unitary)), f"{len(rec.records)} pointer states"

    def factorization():
        _cap(n, mcap, "factorization")
        es = state.get("es") or error_frames.build_maximal_error_set(code)
        fact = error_frames.build_factorization(es)
        state["fact"] = fact
        dim = error_frames.frame_algebra_dim(es)
        dev = max(error_frames.covariance_deviation(fact),
                  error_frames.diagonal_projector_deviation(es),
                  _bool(dim == code.order ** 2))
        return dev, f"frame algebra dimension {dim}"

    def weyl_orientation():
        _cap(n, mcap, "dual representation")
        fr = state.get("frame") or qrf_local.build_local_frame(code)
        rep = duality.dual_rep_from_basis(fr)
        state["rep"] = rep
        v = duality.check_duality(code, rep, tol, exhaustive=True)
        return max(v.max_dev, _bool(v.ok), duality.rep_axiom_deviation(rep)), ""

    def gauge_fixing():
        _cap(n, mcap, "gauge-fixing errors")
        rep = state.get("rep") or duality.dual_rep_from_basis(qrf_local.build_local_frame(code))
        es = state.get("es") or error_frames.build_maximal_error_set(code)
        gs = duality.gauge_fix_errors(rep, es)
        state["gs"] = gs
        r = duality.gauge_fix_report(gs)
        return max(r.values()), ""

    def dual_recovery():
        _cap(n, mcap, "dual recovery")
        gs = state.get("gs")
        if gs is None:
            raise _Skip("gauge-fixing errors unavailable")
        words = codewords(code)
        worst = 0.0
        for g in range(code.order):
            amps = rng.normal(size=len(words)) + 1j * rng.normal(size=len(words))
            psi = sum(a * w for a, w in zip(amps, words))
            psi /= np.linalg.norm(psi)
            hit = gs.unitaries[g] @ psi
            if duality.dual_syndrome(gs, hit) != g:
                return 1.0, f"dual syndrome wrong for g={g}"
            out = duality.dual_recovery(gs, dense.ket_to_density(hit))
            worst = max(worst, 1 - dense.fidelity(psi, out))
        return worst, "1 - worst fidelity"

    def twirls():
        _cap(n, mcap, "twirls")
        rep = state.get("rep") or duality.dual_rep_from_basis(qrf_local.build_local_frame(code))
        rho = dense.random_density(n, rng)
        dev = max(dense.max_dev(duality.group_twirl(code, rho), duality.charge_measurement(code, rho)),
                  dense.max_dev(duality.dual_twirl(rep, rho), duality.dual_charge_measurement(rep, rho)),
                  duality.complementarity_deviation(rep))
        return dev, ""

    def frame_field_duals():
        _cap(n, mcap, "frame-field duals")
        fact = state.get("fact")
        if fact is None:
            raise _Skip("factorization unavailable")
        a = duality.dual_rep_from_frame_fields(fact.fields)
        b = duality.dual_rep_from_factorization(fact)
        dev = max(dense.max_dev(x, y) for x, y in zip(a.ops, b.ops))
        v = duality.check_duality(code, a, tol, exhaustive=True)
        rel = duality.fourier_basis_relation(fact, tol)
        return max(dev, _bool(v.ok), max(rel.values())), ""

    def blanket_negative():
        _cap(n, mcap, "eigenvalue scan")
        ev = duality.blanket_recovery_min_eigenvalue(code)
        return abs(ev - (1 - code.order)), f"minimum eigenvalue {ev:.6f}"

    def no_frame_local():
        _cap(n, min(4, mcap), "frame-local scan")
        fr = state.get("frame") or qrf_local.build_local_frame(code)
        hits = qrf_local.frame_local_paulis(fr, tol)
        return float(len(hits)), f"{len(hits)} frame-local Paulis"

    checks = [
        ("code-projector", "group average of the stabilizer group equals the product of (I+S)/2", projector_formula),
        ("codewords", "codewords are fixed by every generator and orthonormal", codewords_stabilized),
        ("maximal-error-set", "one correctable error per sector (Pauli and dense routes)", maximal_set),
        ("local-frame", "faithful truncated frame with orthonormal orientation states and a 2-cocycle", local_frame),
        ("disentangler-recovery", "pointer states orthonormal and system action unitary", disentangler),
        ("error-factorization", "frame-dependent factorization is covariant; frame algebra is full", factorization),
        ("weyl-orientation-basis", "orientation basis yields a dual representation", weyl_orientation),
        ("gauge-fixing-errors", "unitary gauge-fixing errors restrict to scaled dual projectors", gauge_fixing),
        ("dual-recovery", "dual syndrome plus recovery restores code states", dual_recovery),
        ("twirl-identities", "group twirls equal charge measurements; the two bases are complementary", twirls),
        ("frame-field-duals", "frame-field dual rep agrees across two constructions and obeys the Fourier relation", frame_field_duals),
        ("blanket-recovery-negative", "I - |G| Pi has minimum eigenvalue 1 - |G|", blanket_negative),
        ("no-frame-local-paulis", "no Pauli acts on the code space through the frame alone", no_frame_local),
    ]
    return [_run(name, anchor, fn, tol) for name, anchor, fn in checks]


# surface battery -------------------------------------------------------

def verify_surface(m: surface.CombinatorialMap, tol: float = dense.TOL,
                   max_dense_n: int = 13) -> List[Record]:
    n = m.n_edges
    state = {}

    def counts():
        if m.closed:
            euler = m.euler_characteristic - (2 - 2 * m.genus)
            return float(abs(euler)), f"V={m.n_vertices} E={n} F={m.n_faces} genus={m.genus}"
        L, H = m.L, m.H
        ok = (n, m.n_vertices, m.n_faces) == (2 * L * H + L + H + 1, L * H + H, L * H + L)
        return _bool(ok), f"V={m.n_vertices} E={n} F={m.n_faces}"

    def chain():
        d, c = surface.chain_defects(m)
        return float(d + c), f"homology rank {surface.homology_rank(m)}"

    def code():
        sc = surface.vertex_plaquette_code(m)
        state["sc"] = sc
        expect_k = 2 * m.genus if m.closed else 1
        expect_rel = 2 if m.closed else 0
        ok = sc.code.k == expect_k and len(sc.relations) == expect_rel
        ok = ok and surface.homology_rank(m) == expect_k
        return _bool(ok), f"[[{sc.code.n},{sc.code.k}]] relations {len(sc.relations)}"

    def forests():
        fp = surface.spanning_forests(m)
        state["fp"] = fp
        problems = surface.check_forests(m, fp)
        expect = 2 * m.genus if m.closed else 1
        ok = not problems and len(fp.leftover) == expect
        return _bool(ok), f"leftover edges {list(fp.leftover)}" + ("; " + "; ".join(problems) if problems else "")

    def weyl():
        sc, fp = state.get("sc"), state.get("fp")
        if sc is None or fp is None:
            raise _Skip("code or forests unavailable")
        rep = surface.forest_dual_rep(sc, fp)
        state["rep"] = rep
        w = surface.weyl_check(rep)
        dev = _bool(w.ok)
        if n <= min(dense.MATRIX_CAP, max_dense_n):
            dr = rep.to_dual_rep()
            v = duality.check_duality(sc.code, dr, tol, exhaustive=True)
            dev = max(dev, _bool(v.ok), v.max_dev, duality.rep_axiom_deviation(dr))
        return dev, f"{w.pairs_checked} generator pairs"

    def code_space():
        sc = state.get("sc")
        if sc is None:
            raise _Skip("code unavailable")
        _cap(n, min(surface.SPACE_DIM_CAP, max_dense_n), "code-space projector")
        dim = surface.code_space_dimension(sc)
        return _bool(dim == 1 << sc.code.k), f"dimension {dim}"

    def codewords_match():
        sc = state.get("sc")
        if sc is None:
            raise _Skip("code unavailable")
        _cap(n, min(surface.HOMOLOGY_DENSE_CAP, max_dense_n), "homological codewords")
        hw = surface.homological_codewords(sc)
        cw = codewords(sc.code)
        G = np.array([[np.vdot(a, b) for b in cw] for a in hw])
        return dense.max_dev(np.abs(G), np.eye(len(cw))), ""

    def isotypes():
        sc = state.get("sc")
        if sc is None:
            raise _Skip("code unavailable")
        if not m.closed:
            raise _Skip("rectangle representation is faithful")
        bad = 0
        nv, nf = m.n_vertices, m.n_faces
        for lab in range(1 << (nv + nf)):
            vs, fs = sc.split(lab)
            expect = (1 << (2 * m.genus)) if len(vs) % 2 == 0 and len(fs) % 2 == 0 else 0
            bad += surface.isotype_dimension(sc, vs, fs) != expect
        return float(bad), f"{1 << (nv + nf)} sectors"

    checks = [
        ("lattice-counts", "vertex, edge and face counts", counts),
        ("chain-complex", "both composites of (co)boundary maps vanish", chain),
        ("vertex-plaquette-code", "code parameters and relations among generators", code),
        ("spanning-forests", "disjoint forests with unique boundary paths and the expected leftover", forests),
        ("forest-weyl", "forest dual representation satisfies the Weyl relation", weyl),
        ("code-space-dimension", "dense projector rank equals 2^k", code_space),
        ("homological-codewords", "boundary averages reproduce the stabilizer codewords", codewords_match),
        ("isotype-dimensions", "sector dimensions 2^(2g) on even-even labels, 0 otherwise", isotypes),
    ]
    return [_run(name, anchor, fn, tol) for name, anchor, fn in checks]


def build_report(target: str, records: List[Record], version: str) -> dict:
    counts = {v: sum(r.verdict == v for r in records) for v in ("pass", "fail", "skipped")}
    return {
        "schema": SCHEMA_VERSION,
        "tool_version": version,
        "target": target,
        "summary": counts,
        "ok": counts["fail"] == 0,
        "checks": [r.to_json() for r in records],
    }
