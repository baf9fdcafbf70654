"""Experiment configuration: a flat, typed key=value file (INI sections)
mapping onto one Monte-Carlo run.
"""

import configparser
import io
from dataclasses import dataclass, field, fields

from .channel import PROFILES, TdlProfile
from .frames import FrameSpec

ESTIMATOR_TOKENS = ("ideal", "ls", "lmmse", "rbf", "addtt",
                    "wi", "wi-fp-sls", "wi-fp-als", "wi-lp")


def _parse_list(raw: str, conv):
    return [conv(tok.strip()) for tok in raw.split(",") if tok.strip()]


@dataclass
class ExperimentConfig:
    scenario: str = "VTV-SDWW-500"
    # optional custom TDL profile (overrides the named scenario)
    profile_delays_ns: list = field(default_factory=list)
    profile_gains_db: list = field(default_factory=list)
    profile_doppler_hz: float = 0.0
    estimators: list = field(default_factory=lambda: ["wi-fp-als"])
    snr_db: list = field(default_factory=lambda: [0.0, 10.0, 20.0, 30.0, 40.0])
    frames: int = 100
    seed: int = 1234
    workers: int = 1
    # frame structure
    n_symbols: int = 100
    n_pilot_syms: int = 2
    lp_pilots: int = 12
    mod_order: int = 4
    code_rate: float = 1.0
    # estimator parameters
    lmmse_window: int = 0          # 0 = full frame
    addtt_alpha: float = 0.5
    addtt_beta: int = 2
    addtt_taps: int = 12
    rbf_r0: float = 510.0
    wi_scheme: str = "fp-als"      # used by the bare "wi" estimator token
    wi_taps: int = 12
    # dataset export
    export_snr_db: float = 30.0
    export_frames: int = 8000

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.frames < 1:
            raise ValueError("frames must be >= 1")
        if not self.snr_db:
            raise ValueError("SNR list must be nonempty")
        if not self.estimators:
            raise ValueError("estimator list must be nonempty")
        for tok in self.estimators:
            base = tok.split("-")[0] if tok.startswith("lmmse") else tok
            if base not in ESTIMATOR_TOKENS and tok not in ESTIMATOR_TOKENS:
                raise ValueError(f"unknown estimator {tok!r}")
        if self.wi_scheme not in ("fp-sls", "fp-als", "lp"):
            raise ValueError(f"unknown WI scheme {self.wi_scheme!r}")
        if self.profile_delays_ns:
            self.profile  # validates the custom profile fields
        elif self.scenario not in PROFILES:
            raise ValueError(f"unknown scenario {self.scenario!r}; "
                             f"choose from {sorted(PROFILES)}")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")

    @property
    def profile(self) -> TdlProfile:
        if self.profile_delays_ns:
            return TdlProfile(name=self.scenario,
                              tap_delays_ns=tuple(self.profile_delays_ns),
                              tap_gains_db=tuple(self.profile_gains_db),
                              doppler_hz=self.profile_doppler_hz)
        return PROFILES[self.scenario]

    def resolved_estimators(self) -> list:
        """Estimator tokens with the bare ``wi`` expanded via wi.scheme."""
        return [f"wi-{self.wi_scheme}" if tok == "wi" else tok
                for tok in self.estimators]

    def frame_spec(self, structure: str) -> FrameSpec:
        """Frame layout for one of 'standard', 'staggered', 'FP', 'LP'."""
        common = dict(n_symbols=self.n_symbols, mod_order=self.mod_order,
                      code_rate=self.code_rate, n_lp_pilots=self.lp_pilots)
        if structure == "standard":
            return FrameSpec(n_pilot_syms=0, **common)
        if structure == "staggered":
            return FrameSpec(n_pilot_syms=0, pilot_layout="staggered", **common)
        if structure in ("FP", "LP"):
            return FrameSpec(n_pilot_syms=self.n_pilot_syms, scheme=structure, **common)
        raise ValueError(f"unknown structure {structure!r}")

    # --- file form -----------------------------------------------------

    _SECTIONS = {
        "simulation": ["scenario", "estimators", "snr_db", "frames", "seed", "workers"],
        "profile": ["profile_delays_ns", "profile_gains_db", "profile_doppler_hz"],
        "frame": ["n_symbols", "mod_order", "code_rate"],
        "lmmse": ["lmmse_window"],
        "addtt": ["addtt_alpha", "addtt_beta", "addtt_taps"],
        "rbf": ["rbf_r0"],
        "wi": ["wi_scheme", "n_pilot_syms", "lp_pilots", "wi_taps"],
        "export": ["export_snr_db", "export_frames"],
    }
    # key names inside the file drop the section prefix
    _FILE_KEYS = {
        "lmmse_window": "window", "addtt_alpha": "alpha", "addtt_beta": "beta",
        "addtt_taps": "taps", "rbf_r0": "r0", "wi_scheme": "scheme",
        "wi_taps": "taps", "export_snr_db": "snr_db", "export_frames": "frames",
        "n_pilot_syms": "p", "lp_pilots": "l", "n_symbols": "i",
        "mod_order": "modulation", "code_rate": "code_rate",
        "profile_delays_ns": "tap_delays_ns", "profile_gains_db": "tap_gains_db",
        "profile_doppler_hz": "doppler_hz",
    }

    def to_file(self, path) -> None:
        cp = configparser.ConfigParser()
        for section, names in self._SECTIONS.items():
            cp[section] = {}
            for name in names:
                value = getattr(self, name)
                if isinstance(value, list):
                    value = ", ".join(str(v) for v in value)
                cp[section][self._FILE_KEYS.get(name, name)] = str(value)
        with open(path, "w") as fh:
            cp.write(fh)

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        cp = configparser.ConfigParser()
        with open(path) as fh:
            cp.read_file(fh)
        kwargs = {}
        types = {f.name: f.type for f in fields(cls)}
        for section, names in cls._SECTIONS.items():
            if section not in cp:
                continue
            for name in names:
                key = cls._FILE_KEYS.get(name, name)
                if key not in cp[section]:
                    continue
                raw = cp[section][key]
                if name == "estimators":
                    kwargs[name] = _parse_list(raw, str)
                elif name in ("snr_db", "profile_delays_ns", "profile_gains_db"):
                    kwargs[name] = _parse_list(raw, float)
                elif types[name] in (int, "int"):
                    kwargs[name] = int(raw)
                elif types[name] in (float, "float"):
                    kwargs[name] = float(raw)
                else:
                    kwargs[name] = raw
        return cls(**kwargs)

    def dumps(self) -> str:
        buf = io.StringIO()
        cp = configparser.ConfigParser()
        for section, names in self._SECTIONS.items():
            cp[section] = {self._FILE_KEYS.get(n, n): str(getattr(self, n)) for n in names}
        cp.write(buf)
        return buf.getvalue()
