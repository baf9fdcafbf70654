"""Monte-Carlo experiment engine.

Each frame index owns counter-derived RNG streams
(``default_rng((seed, frame, purpose))``), so frame k's transmission is
identical no matter how frames are distributed over workers, and the
merged report is byte-stable for any worker count.
"""

import csv
import io
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import metrics, modulation
from .channel import apply_channel, noise_variance, sample_channel
from .config import ExperimentConfig
from .datasets import DatasetRecord, complex_stack, complex_unstack
from .estimators import (AddTtParams, CorrelationModel, DftMatrices, RbfParams,
                         WiWeightTable, add_tt, estimate_frame, lmmse_2d,
                         ls_preamble, rbf_interpolate)
from .estimators.wi import SYMBOL_DURATION, noise_term
from .frames import FrameGrid, FrameSpec, build_frame, buffering_time, tdr

_STREAM_CHANNEL = 0
_STREAM_BITS = {"standard": 1, "FP": 2, "LP": 3, "staggered": 4}

CSV_COLUMNS = ["estimator", "scenario", "snr_db", "nmse", "nmse_db", "ber",
               "frames", "ci95", "ops_muldiv", "ops_sumsub",
               "tdr_gain_pct", "phi_us"]


def estimator_structure(token: str) -> str:
    if token.startswith("wi-lp"):
        return "LP"
    if token.startswith("wi-"):
        return "FP"
    if token.startswith("lmmse") or token == "rbf":
        return "staggered"  # frame-by-frame interpolators use sliding sparse pilots
    return "standard"


def wi_scheme(token: str) -> str:
    return token[len("wi-"):]


def _complexity_scheme(token: str) -> str | None:
    if token.endswith("+cnn"):
        return None  # the learned stage depends on the mobility-selected net
    if token.startswith("wi-"):
        return wi_scheme(token)
    if token.startswith("lmmse"):
        return "lmmse-online"
    if token in ("rbf", "addtt"):
        return None  # interpolation front ends are tabulated with their CNNs
    return None


def detect_bits(rx: FrameGrid, h_hat: np.ndarray) -> np.ndarray:
    """Equalize every data cell by the estimate and hard-demap, in the
    same symbol-major cell order used when the frame was built.
    """
    mask = rx.data_cell_mask()
    eq = (rx.symbols / h_hat).T[mask.T]
    return modulation.demap_hard(eq, rx.spec.mod_order)[1]


def _lmmse_window(token: str, cfg: ExperimentConfig) -> int | None:
    if "-" in token:
        return int(token.split("-", 1)[1])
    return cfg.lmmse_window or None


def populate_weight_table(table: WiWeightTable, spec: FrameSpec, scheme: str,
                          doppler_hz: float, sigma2: float,
                          dft: DftMatrices) -> None:
    e_pre = noise_term("preamble", sigma2, dft).value
    e_pilot = noise_term(scheme, sigma2, dft).value
    for q, n_data in enumerate(spec.subframe_data_counts):
        table.add(doppler_hz, SYMBOL_DURATION, n_data,
                  e_pre if q == 0 else e_pilot, e_pilot)


class FrameWorker:
    """Per-frame simulation shared by all entry points.  Instances are
    cheap to pickle into worker processes; caches rebuild lazily there.
    """

    def __init__(self, cfg: ExperimentConfig):
        self.cfg = cfg
        self.profile = cfg.profile
        self.tokens = cfg.resolved_estimators()
        self.structures = sorted({estimator_structure(t) for t in self.tokens})
        self.specs = {s: cfg.frame_spec(s) for s in self.structures}
        self.corr = CorrelationModel.from_profile(self.profile)
        self.rbf_params = RbfParams(r0=cfg.rbf_r0)
        self.addtt_params = AddTtParams(alpha=cfg.addtt_alpha, beta=cfg.addtt_beta,
                                        n_taps=cfg.addtt_taps)
        self._dft = None
        self._table = None

    @property
    def dft(self) -> DftMatrices:
        if self._dft is None:
            self._dft = DftMatrices(n_taps=self.cfg.wi_taps, lp_pilots=self.cfg.lp_pilots)
        return self._dft

    @property
    def weight_table(self) -> WiWeightTable:
        if self._table is None:
            table = WiWeightTable()
            for tok in self.tokens:
                if not tok.startswith("wi-"):
                    continue
                spec = self.specs[estimator_structure(tok)]
                for snr in self.cfg.snr_db:
                    populate_weight_table(table, spec, wi_scheme(tok),
                                          self.profile.doppler_hz,
                                          noise_variance(snr), self.dft)
            self._table = table
        return self._table

    def transmissions(self, frame_idx: int):
        """Channel realization plus one built frame per needed structure."""
        rng_ch = np.random.default_rng((self.cfg.seed, frame_idx, _STREAM_CHANNEL))
        any_spec = next(iter(self.specs.values()))
        chan = sample_channel(self.profile, any_spec, rng_ch)
        frames = {}
        for s in self.structures:
            rng_bits = np.random.default_rng((self.cfg.seed, frame_idx, _STREAM_BITS[s]))
            frames[s] = build_frame(self.specs[s], rng=rng_bits)
        return chan, frames

    def estimate(self, token: str, rx: FrameGrid, sigma2: float) -> np.ndarray:
        if token == "ls":
            return np.repeat(ls_preamble(rx.preambles)[:, None], rx.spec.n_symbols, axis=1)
        if token.startswith("lmmse"):
            window = _lmmse_window(token, self.cfg)
            return lmmse_2d(rx, self.corr, sigma2, window=window).h_hat
        if token == "rbf":
            return rbf_interpolate(rx, self.rbf_params).h_hat
        if token == "addtt":
            return add_tt(rx, self.addtt_params, dft=self.dft).h_hat
        if token.startswith("wi-"):
            return estimate_frame(rx, self.profile.doppler_hz, sigma2,
                                  scheme=wi_scheme(token), dft=self.dft,
                                  table=self.weight_table).h_hat
        raise ValueError(f"unknown estimator {token!r}")

    def run_frame(self, frame_idx: int) -> dict:
        chan, frames = self.transmissions(frame_idx)
        h_true = chan.freq_response[:, 1:]
        out = {}
        for snr in self.cfg.snr_db:
            sigma2 = noise_variance(snr)
            rx = {s: apply_channel(frames[s], chan, snr) for s in self.structures}
            for token in self.tokens:
                s = estimator_structure(token)
                h_hat = h_true if token == "ideal" else self.estimate(token, rx[s], sigma2)
                bits_hat = detect_bits(rx[s], h_hat)
                errors = int(np.count_nonzero(bits_hat != frames[s].payload_bits))
                out[(token, snr)] = (metrics.nmse(h_hat, h_true), errors,
                                     frames[s].payload_bits.size)
        return out


def _run_chunk(args):
    cfg, frame_indices = args
    worker = FrameWorker(cfg)
    return [worker.run_frame(k) for k in frame_indices]


def simulate(cfg: ExperimentConfig) -> list[metrics.PointResult]:
    """Run the configured sweep and return one result per
    (estimator, SNR) point, accumulated in frame order.
    """
    indices = list(range(cfg.frames))
    if cfg.workers > 1 and cfg.frames > 1:
        chunks = [indices[i::cfg.workers] for i in range(cfg.workers)]
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            chunk_results = list(pool.map(_run_chunk, [(cfg, c) for c in chunks]))
        per_frame: dict[int, dict] = {}
        for chunk, results in zip(chunks, chunk_results):
            per_frame.update(zip(chunk, results))
        frame_results = [per_frame[k] for k in indices]
    else:
        worker = FrameWorker(cfg)
        frame_results = [worker.run_frame(k) for k in indices]

    tokens = cfg.resolved_estimators()
    points: dict[tuple, metrics.PointResult] = {}
    for token in tokens:
        for snr in cfg.snr_db:
            points[(token, snr)] = metrics.PointResult(
                estimator=token, scenario=cfg.scenario, snr_db=snr)
    for res in frame_results:
        for key, (nmse_f, errors, nbits) in res.items():
            points[key].add_frame(nmse_f, errors, nbits)
    return [points[(t, s)] for t in tokens for s in cfg.snr_db]


def report_csv(cfg: ExperimentConfig, points: list[metrics.PointResult]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for pt in points:
        spec = cfg.frame_spec(estimator_structure(pt.estimator))
        _, gain = tdr(spec)
        scheme = _complexity_scheme(pt.estimator)
        params = metrics.ComplexityParams(
            n_symbols=cfg.n_symbols, n_pilot_syms=max(cfg.n_pilot_syms, 1),
            n_lp_pilots=cfg.lp_pilots)
        ops = metrics.complexity(scheme, params) if scheme else None
        writer.writerow([
            pt.estimator, pt.scenario, f"{pt.snr_db:g}",
            f"{pt.nmse:.10g}", f"{metrics.to_db(pt.nmse):.6f}",
            f"{pt.ber:.10g}", pt.frames, f"{pt.nmse_ci95:.6g}",
            ops.mul_div if ops else "", ops.sum_sub if ops else "",
            f"{gain:.6f}", f"{buffering_time(spec):g}",
        ])
    return buf.getvalue()


# --- dataset export / prediction evaluation --------------------------------


def _wi_token(cfg: ExperimentConfig) -> str:
    for tok in cfg.resolved_estimators():
        if tok.startswith("wi-"):
            return tok
    raise ValueError("config must include a wi-* estimator for dataset work")


def export_dataset(cfg: ExperimentConfig, n_records: int | None = None,
                   snr_db: float | None = None) -> list[DatasetRecord]:
    """Generate (interpolated estimate, true channel) pairs for the
    configured WI estimator, data-symbol columns only.
    """
    token = _wi_token(cfg)
    structure = estimator_structure(token)
    n_records = cfg.export_frames if n_records is None else n_records
    snr = cfg.export_snr_db if snr_db is None else snr_db
    sigma2 = noise_variance(snr)

    worker = FrameWorker(cfg)
    spec = worker.specs[structure]
    data_cols = np.setdiff1d(np.arange(spec.n_symbols), spec.pilot_symbol_cols)
    records = []
    for k in range(n_records):
        chan, frames = worker.transmissions(k)
        rx = apply_channel(frames[structure], chan, snr)
        h_hat = worker.estimate(token, rx, sigma2)
        records.append(DatasetRecord(
            input=complex_stack(h_hat[:, data_cols]),
            target=complex_stack(chan.freq_response[:, 1:][:, data_cols]),
            meta={"scenario": cfg.scenario, "snr_db": snr, "seed": cfg.seed,
                  "frame": k, "estimator": token},
        ))
    return records


def eval_predictions(cfg: ExperimentConfig, dataset_records: list[DatasetRecord],
                     predictions: list[DatasetRecord],
                     snr_db: float | None = None) -> list[metrics.PointResult]:
    """Score post-processed estimates against the dataset targets and
    re-detect the regenerated transmissions with them.  The config must
    match the one used for the export (same seed and layout).
    """
    if len(dataset_records) != len(predictions):
        raise ValueError("dataset and prediction record counts differ")
    token = _wi_token(cfg)
    structure = estimator_structure(token)
    snr = cfg.export_snr_db if snr_db is None else snr_db
    sigma2 = noise_variance(snr)

    worker = FrameWorker(cfg)
    spec = worker.specs[structure]
    data_cols = np.setdiff1d(np.arange(spec.n_symbols), spec.pilot_symbol_cols)

    pre = metrics.PointResult(estimator=token, scenario=cfg.scenario, snr_db=snr)
    post = metrics.PointResult(estimator=f"{token}+cnn", scenario=cfg.scenario, snr_db=snr)
    for k, (rec, prd) in enumerate(zip(dataset_records, predictions)):
        if rec.target is None:
            raise ValueError("dataset records must carry targets")
        target = complex_unstack(rec.target)
        chan, frames = worker.transmissions(k)
        rx = apply_channel(frames[structure], chan, snr)
        h_wi = worker.estimate(token, rx, sigma2)
        h_post = h_wi.copy()
        h_post[:, data_cols] = complex_unstack(prd.input)

        bits_pre = detect_bits(rx, h_wi)
        bits_post = detect_bits(rx, h_post)
        sent = frames[structure].payload_bits
        pre.add_frame(metrics.nmse(complex_unstack(rec.input), target),
                      int(np.count_nonzero(bits_pre != sent)), sent.size)
        post.add_frame(metrics.nmse(complex_unstack(prd.input), target),
                       int(np.count_nonzero(bits_post != sent)), sent.size)
    return [pre, post]
