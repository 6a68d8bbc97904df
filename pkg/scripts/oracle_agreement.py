#!/usr/bin/env python3
"""Compare the exact arrangement decision against the raster flood-fill oracle.

Samples random 3-circle instances on the sphere (rejection-sampled so every
tangency gap and point-circle distance clears a margin), runs both deciders,
and reports the agreement rate plus timing.  Disagreements are printed with
enough data to reproduce.
"""

import argparse
import time
import warnings

import numpy as np

from hyptube.insulator import NearTangencyWarning, flood_fill_oracle, triple_separates


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--instances", type=int, default=500)
    ap.add_argument("--resolution", type=int, default=512)
    ap.add_argument("--margin", type=float, default=0.04)
    ap.add_argument("--seed", type=int, default=20260823)
    args = ap.parse_args()

    import sys
    from pathlib import Path

    sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))
    from conftest import random_circle_instance

    rng = np.random.default_rng(args.seed)
    agree = disagree = excluded = 0
    t0 = time.perf_counter()
    for k in range(args.instances):
        circles, p, q = random_circle_instance(rng, margin=args.margin)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", NearTangencyWarning)
            exact = triple_separates(*circles, p, q)
        if any(issubclass(w.category, NearTangencyWarning) for w in caught):
            excluded += 1
            continue
        raster = flood_fill_oracle(
            circles, p, q, resolution=args.resolution, seed=args.seed + k
        )
        if exact == raster:
            agree += 1
        else:
            disagree += 1
            planes = [c.to_sphere_plane() for c in circles]
            print(f"DISAGREE at instance {k}: exact={exact} raster={raster}")
            print(f"  planes: {planes}")
            print(f"  p={p} q={q}")
    dt = time.perf_counter() - t0
    tested = agree + disagree
    print(
        f"{agree}/{tested} agree, {excluded} near-tangent excluded, "
        f"resolution {args.resolution}, {dt:.1f}s"
    )
    return 0 if disagree == 0 else 1


if __name__ == "__main__":
    raise SystemExit(main())
