"""Sweep the scale resolution of the discretized wavelet frame.

Prints one JSON line per configuration with the Rayleigh-ratio extremes on
the resolved band; useful for seeing where the discretization stops being
approximately tight.
"""

import argparse
import dataclasses
import json

from framecal.cwt import CwtConfig, run_cwt_experiment


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    p.add_argument("--na", type=int, nargs="+", default=[2, 3, 4, 8, 16, 32, 64])
    p.add_argument("--nb", type=int, nargs="+", default=[64])
    p.add_argument("--amin", type=float, default=4.0)
    p.add_argument("--amax", type=float, default=32.0)
    p.add_argument("--dim", type=int, default=256)
    p.add_argument("--probes", type=int, default=20)
    p.add_argument("--seed", type=int, default=42)
    args = p.parse_args()

    for nb in args.nb:
        for na in args.na:
            cfg = CwtConfig(
                amin=args.amin, amax=args.amax, na=na, nb=nb, dim=args.dim,
                probes=args.probes, seed=args.seed,
            )
            out = run_cwt_experiment(cfg)
            row = {k: out[k] for k in ("min_ratio", "max_ratio", "within_band", "atoms")}
            row.update({k: v for k, v in dataclasses.asdict(cfg).items() if k in ("na", "nb")})
            print(json.dumps(row, sort_keys=True))


if __name__ == "__main__":
    main()
