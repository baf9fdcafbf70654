"""Operation-count model: full table, the per-estimator bar values of
the linear WI family, and the headline ratios.

Run:  python demos/complexity_report.py [--i 100] [--p 2]
"""

import argparse

from wice.metrics import ComplexityParams, complexity, complexity_ratio, complexity_table


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--i", type=int, default=100)
    ap.add_argument("--p", type=int, default=2)
    ap.add_argument("--l", type=int, default=12)
    args = ap.parse_args()
    params = ComplexityParams(n_symbols=args.i, n_pilot_syms=args.p,
                              n_lp_pilots=args.l)

    print(f"{'scheme':16s}{'mul/div':>18s}{'sum/sub':>18s}{'total':>18s}")
    for scheme, ops in complexity_table(params).items():
        print(f"{scheme:16s}{ops.mul_div:18,d}{ops.sum_sub:18,d}{ops.total:18,d}")

    print("\nlinear WI estimators (x1000 real ops):")
    for scheme in ("fp-als", "lp", "fp-sls"):
        ops = complexity(scheme, params)
        print(f"  {scheme:8s} mul/div={ops.mul_div / 1e3:8.3f}  "
              f"sum/sub={ops.sum_sub / 1e3:8.3f}")

    print("\nheadline ratios at these parameters:")
    for a, b, label in (
            ("channelnet", "fp-als-srcnn", "legacy 2-net stack vs FP-ALS + SR-CNN"),
            ("ts-channelnet", "fp-als-srcnn", "legacy ConvLSTM stack vs FP-ALS + SR-CNN"),
            ("fp-als-dncnn", "fp-als-srcnn", "DN-CNN vs SR-CNN post-processing"),
            ("lmmse-online", "fp-als-dncnn", "online 2D LMMSE vs the costliest WI variant")):
        print(f"  {label:45s} {complexity_ratio(a, b, params):10.2f}x")


if __name__ == "__main__":
    main()
