"""Run configuration: TOML parsing, validation, and provenance hashing.

A run file has up to five tables —

    [code]      rate ("1/2" | 0.5), k
    [channel]   p (single float or list)
    [decoder]   iterations, early_stop, memory_last, interleaver_seed
    [mc]        max_frames, target_errors, master_seed, workers
    [output]    directory, formats (subset of {"csv", "json"})

— every key optional, unknown tables or keys rejected by name.  The
resolved RunConfig is frozen; command-line overrides produce a new one.

`config_hash` digests only the fields that influence simulated numbers
(code, channel, decoder, and Monte-Carlo stopping/seed), so output
files can be matched to the physics that produced them while renaming
an output directory or re-running with more workers changes nothing.
"""
from __future__ import annotations

import dataclasses
import hashlib
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

try:  # Python 3.11+
    import tomllib
except ModuleNotFoundError:  # pragma: no cover - version-dependent import
    import tomli as tomllib

_SECTIONS: dict[str, tuple[str, ...]] = {
    "code": ("rate", "k"),
    "channel": ("p",),
    "decoder": ("iterations", "early_stop", "memory_last", "interleaver_seed"),
    "mc": ("max_frames", "target_errors", "master_seed", "workers"),
    "output": ("directory", "formats"),
}
_FORMATS = ("csv", "json")


@dataclass(frozen=True)
class RunConfig:
    rate: Fraction = Fraction(1, 2)
    k: int = 500
    p_list: tuple[float, ...] = (0.03,)
    iterations: int = 16
    early_stop: bool = True
    memory_last: bool = False
    interleaver_seed: int = 0
    max_frames: int = 10_000
    target_errors: int = 100
    master_seed: int = 0
    workers: int = 1
    out_dir: str = "out"
    formats: tuple[str, ...] = ("csv",)

    def __post_init__(self):
        if not isinstance(self.rate, Fraction):
            object.__setattr__(self, "rate", _parse_rate(self.rate))
        if not 0 < self.rate < 1:
            raise ValueError(f"rate must be in (0, 1), got {self.rate}")
        if self.k < 1:
            raise ValueError("k must be positive")
        object.__setattr__(self, "p_list", tuple(float(p) for p in self.p_list))
        if not self.p_list:
            raise ValueError("channel p list must be non-empty")
        for p in self.p_list:
            if not 0.0 <= p < 1.0:
                raise ValueError(f"channel p must be in [0, 1), got {p}")
        if self.iterations < 1:
            raise ValueError("iterations must be positive")
        if self.max_frames < 1:
            raise ValueError("max_frames must be positive")
        if self.target_errors < 1:
            raise ValueError("target_errors must be positive")
        if self.workers < 1:
            raise ValueError("workers must be positive")
        object.__setattr__(self, "formats", tuple(self.formats))
        if not self.formats:
            raise ValueError("need at least one output format")
        for fmt in self.formats:
            if fmt not in _FORMATS:
                raise ValueError(f"unknown output format {fmt!r} (known: {_FORMATS})")


def _parse_rate(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value).limit_denominator(100)
    raise TypeError(f"cannot read a rate from {value!r}")


def _reject_unknown(data: dict) -> None:
    for section, content in data.items():
        if section not in _SECTIONS:
            raise ValueError(
                f"unknown config section [{section}] (known: {sorted(_SECTIONS)})"
            )
        if not isinstance(content, dict):
            raise ValueError(f"config section [{section}] must be a table")
        for key in content:
            if key not in _SECTIONS[section]:
                raise ValueError(
                    f"unknown key {key!r} in [{section}] "
                    f"(known: {sorted(_SECTIONS[section])})"
                )


def config_from_dict(data: dict) -> RunConfig:
    """Build and validate a RunConfig from parsed TOML data."""
    _reject_unknown(data)
    code = data.get("code", {})
    channel = data.get("channel", {})
    decoder = data.get("decoder", {})
    mc = data.get("mc", {})
    output = data.get("output", {})

    kwargs: dict = {}
    if "rate" in code:
        kwargs["rate"] = _parse_rate(code["rate"])
    if "k" in code:
        kwargs["k"] = int(code["k"])
    if "p" in channel:
        p = channel["p"]
        kwargs["p_list"] = tuple(float(v) for v in p) if isinstance(p, list) else (float(p),)
    if "iterations" in decoder:
        kwargs["iterations"] = int(decoder["iterations"])
    if "early_stop" in decoder:
        kwargs["early_stop"] = bool(decoder["early_stop"])
    if "memory_last" in decoder:
        kwargs["memory_last"] = bool(decoder["memory_last"])
    if "interleaver_seed" in decoder:
        kwargs["interleaver_seed"] = int(decoder["interleaver_seed"])
    if "max_frames" in mc:
        kwargs["max_frames"] = int(mc["max_frames"])
    if "target_errors" in mc:
        kwargs["target_errors"] = int(mc["target_errors"])
    if "master_seed" in mc:
        kwargs["master_seed"] = int(mc["master_seed"])
    if "workers" in mc:
        kwargs["workers"] = int(mc["workers"])
    if "directory" in output:
        kwargs["out_dir"] = str(output["directory"])
    if "formats" in output:
        fmts = output["formats"]
        kwargs["formats"] = tuple(fmts) if isinstance(fmts, list) else (str(fmts),)
    return RunConfig(**kwargs)


def load_config(path: str | Path) -> RunConfig:
    """Parse a TOML run file into a validated RunConfig."""
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    return config_from_dict(data)


def override(config: RunConfig, **changes) -> RunConfig:
    """New config with the given fields replaced (None values skipped)."""
    real = {k: v for k, v in changes.items() if v is not None}
    return dataclasses.replace(config, **real) if real else config


def config_hash(config: RunConfig) -> str:
    """12-hex digest of the result-determining subset of the config."""
    physics = (
        f"rate={config.rate}",
        f"k={config.k}",
        "p=" + ",".join(repr(p) for p in config.p_list),
        f"iterations={config.iterations}",
        f"early_stop={config.early_stop}",
        f"memory_last={config.memory_last}",
        f"interleaver_seed={config.interleaver_seed}",
        f"max_frames={config.max_frames}",
        f"target_errors={config.target_errors}",
        f"master_seed={config.master_seed}",
    )
    return hashlib.sha256(";".join(physics).encode()).hexdigest()[:12]
