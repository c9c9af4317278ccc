"""Condition 1 / Condition 2 at desk scale over several pair seeds, plus the C = 1 control.

    python3 scripts/desk_conditions.py --seeds 7 0 1 2 3 --samples 200000
"""

import argparse

from slablb.construction import ConstructionConfig, build_instance, conditioning
from slablb.volume_check import condition_report


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--seeds", type=int, nargs="+", default=[7, 0, 1, 2, 3])
    ap.add_argument("--samples", type=int, default=200_000)
    ap.add_argument("--pairs", type=int, default=64)
    ap.add_argument("--eps-p", type=float, default=ConstructionConfig.eps_p)
    args = ap.parse_args()

    cfg = ConstructionConfig(eps_p=args.eps_p)
    inst = build_instance(cfg)
    sep, aspect = conditioning(inst.base_query, inst.base_point, cfg)
    print(f"eps_p={cfg.eps_p} separation={float(sep):.3f} aspect={float(aspect):.3f} m={len(inst.queries)}")
    print(f"{'seed':>4} {'c1_fail':>7} {'c2_frac':>7} {'max_pair_ci':>11}  status")
    for s in args.seeds:
        rep, _ = condition_report(inst, args.samples, args.pairs, s)
        c1, c2 = rep.measured["condition1"], rep.measured["condition2"]
        print(f"{s:>4} {c1['failures']:>7} {c2['fraction']:>7.3f} {c2['max_ci_high']:>11.2e}  {rep.status}")
    neg = build_instance(ConstructionConfig(eps_p=args.eps_p, C=1.0, negative_control=True))
    rep, _ = condition_report(neg, args.samples, args.pairs, args.seeds[0])
    print(f"C=1 control: condition-1 failures {rep.measured['condition1']['failures']}/{len(neg.queries)}")


if __name__ == "__main__":
    main()
