"""Tour of the vehicular channel model.

Draws tap processes for the three mobility scenarios and verifies the
statistics the rest of the library relies on: the Jakes time
autocorrelation J0(2*pi*f_d*m*T_s), unit channel power, and the
frequency correlation implied by the power-delay profile.

Run:  python demos/channel_statistics.py [--realizations N] [--plot]
"""

import argparse

import numpy as np
from scipy.special import j0

from wice import PROFILES, FrameSpec, sample_channel
from wice.channel import sample_tap_processes, steering_matrix
from wice.frames import SYMBOL_DURATION


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--realizations", type=int, default=30_000)
    ap.add_argument("--plot", action="store_true", help="save autocorrelation plot")
    args = ap.parse_args()

    print("=== tap autocorrelation vs J0 ===")
    lags = np.arange(21)
    curves = {}
    for name in ("VTV-UC", "VTV-SDWW-500", "VTV-SDWW-1000"):
        fd = PROFILES[name].doppler_hz
        x = sample_tap_processes(fd, args.realizations, lags.size,
                                 np.random.default_rng(1))
        est = (x[:, :1].conj() * x).mean(axis=0).real
        ref = j0(2 * np.pi * fd * lags * SYMBOL_DURATION)
        curves[name] = (est, ref)
        print(f"{name:15s} f_d={fd:6.0f} Hz  worst |corr err| over 20 lags: "
              f"{np.max(np.abs(est - ref)):.4f}")

    print("\n=== channel power ===")
    for name, prof in PROFILES.items():
        rng = np.random.default_rng(2)
        g = (rng.standard_normal((prof.n_taps, 50_000))
             + 1j * rng.standard_normal((prof.n_taps, 50_000))) / np.sqrt(2)
        h = steering_matrix(prof) @ (g * np.sqrt(prof.tap_powers)[:, None])
        print(f"{name:15s} mean |H|^2 = {np.mean(np.abs(h) ** 2):.4f} (target 1)")

    print("\n=== one frame realization ===")
    spec = FrameSpec(n_symbols=100)
    chan = sample_channel(PROFILES["VTV-SDWW-1000"], spec, 7)
    h = chan.freq_response
    print(f"freq response grid: {h.shape[0]} subcarriers x {h.shape[1]} epochs")
    drift = np.abs(h[:, -1] - h[:, 1]).mean() / np.abs(h[:, 1]).mean()
    print(f"mean relative drift across the frame at 1000 Hz: {drift:.2f}")

    if args.plot:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
        fig, ax = plt.subplots(figsize=(7, 4))
        for name, (est, ref) in curves.items():
            line, = ax.plot(lags, est, "o", ms=3, label=f"{name} (measured)")
            ax.plot(lags, ref, "-", color=line.get_color(), alpha=0.6)
        ax.set_xlabel("lag [symbols]")
        ax.set_ylabel("tap autocorrelation")
        ax.legend()
        fig.tight_layout()
        fig.savefig("demos/channel_statistics.png", dpi=120)
        print("\nsaved demos/channel_statistics.png")


if __name__ == "__main__":
    main()
