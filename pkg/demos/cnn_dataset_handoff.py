"""Dataset handoff to the learned post-processing stage.

Exports (interpolated estimate, true channel) pairs in the binary
container the training side consumes, shows the real-stacked
representation round-trip, and scores an identity "prediction" to
illustrate the evaluation path.  The actual training lives in the
frontend/ package; see its README.

Run:  python demos/cnn_dataset_handoff.py [--records N]
"""

import argparse
import tempfile
from pathlib import Path

import numpy as np

from wice import ExperimentConfig
from wice.datasets import (DatasetRecord, complex_unstack, read_dataset,
                           write_dataset)
from wice.metrics import nmse, to_db
from wice.runner import eval_predictions, export_dataset


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--records", type=int, default=10)
    ap.add_argument("--snr-db", type=float, default=30.0)
    args = ap.parse_args()

    cfg = ExperimentConfig(scenario="VTV-SDWW-500", n_pilot_syms=2,
                           estimators=["wi-fp-als"], seed=1)
    records = export_dataset(cfg, n_records=args.records, snr_db=args.snr_db)
    print(f"exported {len(records)} records, matrices "
          f"{records[0].input.shape[0]}x{records[0].input.shape[1]} "
          "(real/imaginary halves stacked vertically)")

    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "train.wice"
        write_dataset(records, path)
        print(f"container size: {path.stat().st_size:,} bytes "
              f"(16-byte header + float32 matrices)")
        back = read_dataset(path)
        drift = max(np.max(np.abs(a.input - b.input)) for a, b in zip(records, back))
        print(f"float32 round-trip drift: {drift:.2e}")

    per_record = [nmse(complex_unstack(r.input), complex_unstack(r.target))
                  for r in records]
    print(f"pre-processing NMSE at {args.snr_db:.0f} dB: "
          f"{to_db(float(np.mean(per_record))):.2f} dB")

    preds = [DatasetRecord(input=r.input.copy()) for r in records]
    pre, post = eval_predictions(cfg, records, preds, snr_db=args.snr_db)
    print(f"identity predictions: pre NMSE {to_db(pre.nmse):.2f} dB == "
          f"post NMSE {to_db(post.nmse):.2f} dB, BER {post.ber:.4f} "
          "(a trained denoiser should push post below pre)")


if __name__ == "__main__":
    main()
