"""Bit-flip code seen through two frames: a local one on qubits 1-2 and one built from errors."""

import numpy as np

from qrfcode import build_code, dense, error_frames, qrf_local
from qrfcode.stabilizer import codewords

# checks Z1Z3 and Z2Z3, so flipping qubit j alone lights up check j
code = build_code(3, ["ZIZ", "IZZ"], ["ZII"], ["XXX"], name="bitflip")

frame = qrf_local.build_local_frame(code, drop=[3])
print("frame qubits:", [q + 1 for q in frame.frame_qubits], "seed:", frame.seed_origin)
for g in range(code.order):
    print(f"  U^{code.sign_label(g)} = {code.element(g)}  restricted to frame: {frame.fragments_R[g]}")

zero, one = codewords(code)
psi = (zero + 1j * one) / np.sqrt(2)
for g in range(code.order):
    red = qrf_local.page_wootters_reduce(frame, psi, g)
    print(f"  system state seen from orientation {code.sign_label(g)}:", np.round(red, 6))

# two correctable sets that share no error except I
for label, errs in (("single flips", ["III", "XII", "IXI", "IIX"]),
                    ("double flips", ["III", "IXX", "XIX", "XXI"])):
    es = error_frames.error_set(code, errs)
    fact = error_frames.build_factorization(es)
    print(f"\n{label}: covariance deviation {error_frames.covariance_deviation(fact):.1e}")
    for row in fact.table():
        print(f"  logical {row['logical']} charge {code.sign_label(row['charge'])}: {sorted(row['state'])}")

# a set that is not correctable: X3 and X1X2 differ by the logical X
kl = error_frames.kl_check(code, ["III", "IIX", "XXI"])
print("\n{I, X3, X1X2} correctable:", kl.correctable, "violations:", kl.diagnostics["violations"])
