"""Command-line front end; every subcommand prints one JSON document.

Exit status is 0 when every verdict passes, 1 when a verification fails and
2 for usage errors such as an unknown code or flag.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from . import __version__, dense, duality, error_frames, qrf_local, surface, verify
from .pauli_core import Pauli, parse
from .stabilizer import StabilizerCode, codewords, sector_bits


class UsageError(Exception):
    pass


def _complex(z) -> object:
    z = complex(z)
    if np.isnan(z.real) or np.isnan(z.imag):
        return None
    re, im = round(z.real, 12) + 0.0, round(z.imag, 12) + 0.0
    return re if im == 0 else [re, im]


def _matrix(m: np.ndarray) -> list:
    return [[_complex(x) for x in row] for row in np.asarray(m)]


def _emit(doc: dict, out: Optional[str] = None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True)
    if out:
        Path(out).write_text(text + "\n")
    print(text)


def _code(spec: str) -> StabilizerCode:
    try:
        return verify.resolve_code(spec)
    except verify.UnknownCode as exc:
        raise UsageError(str(exc)) from exc


def _errors(path: str) -> List[Pauli]:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read error set {path!r}: {exc}") from exc
    items = doc["errors"] if isinstance(doc, dict) else doc
    return [parse(e) for e in items]


# subcommands -----------------------------------------------------------

def cmd_build(args) -> int:
    code = _code(args.code)
    doc = {
        "name": code.name,
        "n": code.n,
        "k": code.k,
        "generators": [str(g) for g in code.generators],
        "logical_z": [str(p) for p in code.logical_z],
        "logical_x": [str(p) for p in code.logical_x],
        "group_order": code.order,
    }
    _emit(doc)
    return 0


def cmd_kl_check(args) -> int:
    code = _code(args.code)
    errs = _errors(args.errors)
    kl = error_frames.kl_check(code, errs)
    doc = {
        "code": code.name,
        "errors": [str(e) for e in errs],
        "correctable": kl.correctable,
        "sectors": [code.sign_label(s) for s in kl.sectors],
        "C": _matrix(kl.C),
        "diagnostics": {k: [list(x) for x in v] for k, v in kl.diagnostics.items()},
    }
    if code.n <= dense.MATRIX_CAP:
        kd = error_frames.kl_check_dense(code, errs)
        doc["dense_agrees"] = bool(kd.correctable == kl.correctable)
    _emit(doc)
    return 0 if kl.correctable and doc.get("dense_agrees", True) else 1


def _local_frame(code: StabilizerCode, frame_qubits: Optional[str], basis: str) -> qrf_local.LocalFrame:
    drop = None
    if frame_qubits:
        frame = {int(t) for t in frame_qubits.split(",") if t.strip()}
        drop = [q for q in range(1, code.n + 1) if q not in frame]
    try:
        return qrf_local.build_local_frame(code, drop, basis)
    except qrf_local.FrameError as exc:
        raise UsageError(str(exc)) from exc


def cmd_frame_local(args) -> int:
    code = _code(args.code)
    fr = _local_frame(code, args.frame_qubits, args.basis)
    B = fr.orientation_basis
    ortho = dense.is_close(dense.dagger(B) @ B, np.eye(fr.order))
    doc = {
        "code": code.name,
        "frame_qubits": [q + 1 for q in fr.frame_qubits],
        "system_qubits": [q + 1 for q in fr.system_qubits],
        "seed": fr.seed_origin,
        "fragments_R": [str(p) for p in fr.fragments_R],
        "fragments_S": [str(p) for p in fr.fragments_S],
        "cocycle_exponents": fr.cocycle.tolist(),
        "orientation_orthonormal": bool(ortho),
    }
    _emit(doc)
    return 0 if ortho else 1


def _error_set(code: StabilizerCode, path: Optional[str]) -> error_frames.ErrorSet:
    if not path:
        return error_frames.build_maximal_error_set(code)
    errs = _errors(path)
    sectors = {sector_bits(code, e) for e in errs}
    if len(errs) == code.order and len(sectors) == code.order:
        return error_frames.error_set(code, errs)
    return error_frames.build_maximal_error_set(code, [e for e in errs if not e.is_identity])


def cmd_frame_errors(args) -> int:
    code = _code(args.code)
    es = _error_set(code, args.errors)
    fact = error_frames.build_factorization(es)
    cov = error_frames.covariance_deviation(fact)
    rows = [{"logical": r["logical"], "charge": code.sign_label(r["charge"]),
             "state": {b: _complex(a) for b, a in r["state"].items()}} for r in fact.table()]
    doc = {
        "code": code.name,
        "errors": [str(e) for e in es.errors],
        "sectors": [code.sign_label(s) for s in es.sector_of],
        "frame_algebra_dim": error_frames.frame_algebra_dim(es),
        "covariance_deviation": float(f"{cov:.3e}"),
        "table": rows,
    }
    _emit(doc)
    return 0 if cov <= args.tol else 1


def cmd_duality(args) -> int:
    code = _code(args.code)
    if args.frame.startswith("local"):
        fq = args.frame.split(":", 1)[1] if ":" in args.frame else None
        rep = duality.dual_rep_from_basis(_local_frame(code, fq, args.basis))
        es = error_frames.build_maximal_error_set(code)
    else:
        es = _error_set(code, None if args.frame == "errors" else args.frame)
        rep = duality.dual_rep_from_frame_fields(error_frames.frame_fields_from_errors(es))
    verdict = duality.check_duality(code, rep, args.tol, exhaustive=True)
    gs = duality.gauge_fix_errors(rep, es)
    report = duality.gauge_fix_report(gs)
    rng = np.random.default_rng(verify.SEED)
    words = codewords(code)
    fids = []
    for g in range(code.order):
        amps = rng.normal(size=len(words)) + 1j * rng.normal(size=len(words))
        psi = sum(a * w for a, w in zip(amps, words))
        psi /= np.linalg.norm(psi)
        out = duality.dual_recovery(gs, dense.ket_to_density(gs.unitaries[g] @ psi))
        fids.append(round(dense.fidelity(psi, out), 12))
    ok = verdict.ok and max(report.values()) <= args.tol and min(fids) >= 1 - 1e-9
    doc = {
        "code": code.name,
        "source": rep.source,
        "dual_paulis": [str(p) for p in rep.paulis] if rep.paulis else None,
        "weyl": {"ok": verdict.ok, "violation": verdict.violation},
        "gauge_fix": {k: float(f"{v:.3e}") for k, v in sorted(report.items())},
        "base_errors": [str(e) for e in gs.base_errors],
        "dual_recovery_fidelity": fids,
        "ok": bool(ok),
    }
    _emit(doc)
    return 0 if ok else 1


def _defect_demo(sc: surface.SurfaceCode, fp: surface.ForestPair) -> List[dict]:
    m = sc.map
    words = codewords(sc.code) if m.n_edges <= dense.STATE_CAP else None
    rows = []
    if m.closed:
        a, b = 0, m.n_vertices - 1
        short = surface._support(surface._edge_vector(m, fp.vertex_paths[a]) ^ surface._edge_vector(m, fp.vertex_paths[b]))
        zs, _ = surface.paired_logical_chains(m)
        wrap = surface._support(surface._edge_vector(m, short) ^ zs[0])
        trials = [("tree path", short), ("tree path plus a noncontractible cycle", wrap)]
    else:
        L = m.L
        up = (0,)
        down = tuple(r * (L + 1) for r in range(1, m.H + 1))
        trials = [("to the top boundary", up), ("to the bottom boundary", down)]
    for label, path in trials:
        row = {"error": label, "edges": list(path), "class": None}
        if words is not None:
            psi = words[0] + 0.5j * words[-1]
            psi /= np.linalg.norm(psi)
            hit = dense.apply_pauli(surface.string_operator(m, path, "Z"), psi)
            res = surface.correct_single_defect(sc, fp, hit, error_path=path)
            row.update({
                "sector_vertices": sorted(res.sector[0]),
                "dressing": list(res.dressing[0]),
                "class": res.verdict,
                "fidelity": round(abs(np.vdot(psi, res.state)) ** 2, 12),
            })
        else:
            vec = surface._edge_vector(m, path)
            ends = surface.string_endpoints(sc, path, "Z")
            for v in ends:
                vec = vec ^ surface._edge_vector(m, fp.vertex_paths[v])
            cls = surface.classify_string(sc, surface._support(vec), "Z")
            row["class"] = "corrected" if cls == "stabilizer" else cls
        rows.append(row)
    return rows


def cmd_surface(args) -> int:
    try:
        m = surface.map_from_spec(args.lattice)
    except (surface.MapError, OSError, ValueError, KeyError) as exc:
        raise UsageError(f"bad lattice {args.lattice!r}: {exc}") from exc
    sc = surface.vertex_plaquette_code(m)
    doc = {
        "lattice": m.to_json(),
        "vertices": m.n_vertices,
        "edges": m.n_edges,
        "faces": m.n_faces,
        "genus": m.genus,
        "n": sc.code.n,
        "k": sc.code.k,
        "independent_generators": sc.code.m,
        "relations": [[sorted(x) for x in sc.split(r)] for r in sc.relations],
        "homology_rank": surface.homology_rank(m),
        "logical_z": [str(p) for p in sc.code.logical_z],
        "logical_x": [str(p) for p in sc.code.logical_x],
    }
    ok = True
    fp = None
    if args.forests or args.defect_demo:
        fp = surface.spanning_forests(m)
    if args.forests:
        rep = surface.forest_dual_rep(sc, fp)
        w = surface.weyl_check(rep)
        problems = surface.check_forests(m, fp)
        ok = ok and w.ok and not problems
        doc["forests"] = fp.to_json()
        doc["forests"]["leftover_count"] = len(fp.leftover)
        doc["forests"]["problems"] = problems
        doc["forest_dual_rep"] = {"weyl_ok": w.ok, "pairs_checked": w.pairs_checked,
                                  "generators": [str(p) for p in rep.generators]}
    if args.defect_demo:
        doc["defect_demo"] = _defect_demo(sc, fp)
    _emit(doc)
    return 0 if ok else 1


def cmd_verify_all(args) -> int:
    if verify.is_lattice_spec(args.code):
        try:
            m = surface.map_from_spec(args.code)
        except (surface.MapError, ValueError, KeyError) as exc:
            raise UsageError(str(exc)) from exc
        records = verify.verify_surface(m, args.tol, args.max_dense_n)
    else:
        records = verify.verify_code(_code(args.code), args.tol, args.max_dense_n)
    report = verify.build_report(args.code, records, __version__)
    _emit(report, args.out)
    return 0 if report["ok"] else 1


# parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qrfcode", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="build a code and print its data")
    b.add_argument("--code", required=True, help="catalog name or code JSON")
    b.set_defaults(func=cmd_build)

    k = sub.add_parser("kl-check", help="Knill-Laflamme test for a Pauli error set")
    k.add_argument("--code", required=True)
    k.add_argument("--errors", required=True, help='JSON {"code": name, "errors": [pauli-text]}')
    k.set_defaults(func=cmd_kl_check)

    f = sub.add_parser("frame", help="reference frames")
    fsub = f.add_subparsers(dest="frame_kind", required=True)
    fl = fsub.add_parser("local", help="frame on a subset of qubits")
    fl.add_argument("--code", required=True)
    fl.add_argument("--frame-qubits", help="comma separated, 1-based")
    fl.add_argument("--basis", choices=["X", "Y"], default="X")
    fl.set_defaults(func=cmd_frame_local)
    fe = fsub.add_parser("from-errors", help="frame generated by a maximal error set")
    fe.add_argument("--code", required=True)
    fe.add_argument("--errors", help="error-set JSON; missing sectors are filled in")
    fe.add_argument("--tol", type=float, default=dense.TOL)
    fe.set_defaults(func=cmd_frame_errors)

    d = sub.add_parser("duality", help="dual representation and gauge-fixing errors")
    d.add_argument("--code", required=True)
    d.add_argument("--frame", default="local", help="local[:q,q,...], errors, or an error-set JSON")
    d.add_argument("--basis", choices=["X", "Y"], default="X")
    d.add_argument("--tol", type=float, default=dense.TOL)
    d.set_defaults(func=cmd_duality)

    s = sub.add_parser("surface", help="surface-code lattices")
    s.add_argument("--lattice", required=True, help="rect:LxH, torus:AxB or lattice JSON")
    s.add_argument("--forests", action="store_true")
    s.add_argument("--defect-demo", action="store_true")
    s.set_defaults(func=cmd_surface)

    v = sub.add_parser("verify-all", help="run the full check battery")
    v.add_argument("--code", required=True, help="catalog name, code JSON, or a lattice spec")
    v.add_argument("--tol", type=float, default=dense.TOL)
    v.add_argument("--max-dense-n", type=int, default=13)
    v.add_argument("--out", help="also write the report here")
    v.set_defaults(func=cmd_verify_all)
    return p


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"qrfcode: error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
