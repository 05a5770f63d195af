"""Run every packaged preset and write its artifacts under OUT/<preset>/.

    python3 scripts/run_presets.py [--out out] [--only NAME ...] [--seed 0]
"""
import argparse
import time

from weilheights.experiments import PRESETS, preset_config, run_experiment
from weilheights.outputs import emit_outputs


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="out")
    ap.add_argument("--only", nargs="*", choices=sorted(PRESETS))
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    failed = []
    for name in args.only or PRESETS:
        t0 = time.perf_counter()
        art = run_experiment(preset_config(name, seed=args.seed))
        emit_outputs(art.files, f"{args.out}/{name}")
        status = "ok" if art.ok else "MISMATCH"
        print(f"{name:22s} {status:8s} {time.perf_counter() - t0:6.1f}s  -> {args.out}/{name}/")
        if not art.ok:
            failed.append(name)
    return 4 if failed else 0


if __name__ == "__main__":
    raise SystemExit(main())
