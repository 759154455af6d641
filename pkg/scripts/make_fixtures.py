"""Write the hand-built frames and operators as JSON documents for the CLI."""

import argparse
from pathlib import Path

import numpy as np

from framecal import io, linalg, sampling
from framecal.frame import frame_operator, make_frame, standard_dual


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("outdir", type=Path)
    args = p.parse_args()
    args.outdir.mkdir(parents=True, exist_ok=True)

    f, g = sampling.partition_dual_pair()
    rep = sampling.repeated_basis_frame()
    frames = {
        "partition_F": f,
        "partition_G": g,
        "repeated_basis": rep,
        "repeated_basis_dual": standard_dual(rep),
        "repeated_basis_kernel": rep.with_vectors([[0, 1], [0, 0], [0, -1]]),
        "basis2": make_frame(np.eye(2)),
    }
    for eps in (0.1, 0.5, 0.9):
        frames[f"scaled_partition_G_{eps}"] = sampling.scaled_partition_pair(eps)[1]
    operators = {
        "inv_root_repeated_basis": linalg.psd_inv_sqrt(frame_operator(rep)),
        "U_diag_1_2": np.diag([1.0, 2.0]),
        "V_diag_1_half": np.diag([1.0, 0.5]),
        "V_diag_09_05": np.diag([0.9, 0.5]),
    }
    for name, frame in frames.items():
        io.save_frame(frame, args.outdir / f"{name}.json")
    for name, op in operators.items():
        io.save_operator(op, args.outdir / f"{name}.json")
    print(f"wrote {len(frames) + len(operators)} documents to {args.outdir}")


if __name__ == "__main__":
    main()
