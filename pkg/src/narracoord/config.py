"""Run configuration: event windows, keyword lists, hash algorithm, seed.

The built-in defaults cover the six geopolitical collection windows the
engine ships with; a YAML config file can override any of them or define
entirely new windows.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from datetime import date

import yaml

from .corpus import EventWindow, HASH_ALGORITHMS
from .snc import EQUAL_WEIGHTS, NORMALIZATION_POOLS, POOL_JOINT


class ConfigError(Exception):
    """Invalid or unreadable run configuration."""


_UKRAINE_KW = (
    "ukraine", "ukrainian", "kyiv", "kharkiv", "odesa", "donbas", "crimea",
    "zelensky", "putin", "kremlin", "russia", "russian",
    "украин", "киев", "харьков", "донбасс", "крым", "зеленск", "россия", "всу",
)
_GAZA_KW = (
    "gaza", "israel", "israeli", "hamas", "idf", "palestin", "rafah",
    "west bank", "netanyahu", "hezbollah",
    "газа", "израил", "хамас", "палестин", "цахал",
)
_IRAN_KW = (
    "iran", "iranian", "tehran", "irgc", "strait of hormuz", "hormuz",
    "missile", "drone strike", "khamenei", "isfahan",
    "иран", "тегеран", "ксир", "ормуз", "хаменеи",
)
_TRUMP_UA_KW = (
    "trump", "minerals deal", "rare earth", "ceasefire", "peace deal",
    "negotiation", "white house", "zelensky", "witkoff",
    "трамп", "перегово", "сделк", "редкоземель",
)
_NATO_KW = (
    "nato", "summit", "the hague", "article 5", "defence spending",
    "defense spending", "alliance", "rutte",
    "нато", "саммит", "гаага", "альянс",
)

DEFAULT_EVENT_WINDOWS = (
    EventWindow("ukraine_war_general", date(2025, 5, 15), date(2026, 5, 14),
                None, _UKRAINE_KW),
    EventWindow("israel_gaza_general", date(2025, 5, 15), date(2026, 5, 14),
                None, _GAZA_KW),
    EventWindow("iran_israel_escalation", date(2024, 4, 1), date(2026, 5, 14),
                date(2024, 4, 13), _IRAN_KW),
    EventWindow("gaza_conflict_full", date(2023, 10, 1), date(2026, 5, 14),
                date(2023, 10, 7), _GAZA_KW),
    EventWindow("trump_ukraine_diplomacy", date(2025, 1, 20), date(2026, 5, 14),
                None, _TRUMP_UA_KW),
    EventWindow("nato_summit_2025", date(2025, 6, 11), date(2025, 7, 9),
                date(2025, 6, 25), _NATO_KW),
)


@dataclass
class PipelineConfig:
    seed: int = 17
    hash_algorithm: str = "fnv1a64"
    mattr_window: int = 500
    sample_cap: int = 800
    coactivity_bin_hours: int = 6
    weights: tuple[float, float, float, float] = EQUAL_WEIGHTS
    normalization_pool: str = POOL_JOINT
    events: tuple[EventWindow, ...] = DEFAULT_EVENT_WINDOWS

    def window(self, event_id: str) -> EventWindow:
        for w in self.events:
            if w.event_id == event_id:
                return w
        raise ConfigError(f"unknown event window: {event_id!r}")

    def validate(self) -> "PipelineConfig":
        if self.hash_algorithm not in HASH_ALGORITHMS:
            raise ConfigError(f"unknown hash algorithm: {self.hash_algorithm!r}")
        if self.normalization_pool not in NORMALIZATION_POOLS:
            raise ConfigError(
                f"normalization_pool must be one of {NORMALIZATION_POOLS}"
            )
        if len(self.weights) != 4 or any(w < 0 for w in self.weights):
            raise ConfigError("weights must be four non-negative numbers")
        if sum(self.weights) <= 0:
            raise ConfigError("weights must not all be zero")
        if self.mattr_window < 1 or self.sample_cap < 2:
            raise ConfigError("mattr_window >= 1 and sample_cap >= 2 required")
        if self.coactivity_bin_hours < 1:
            raise ConfigError("coactivity_bin_hours must be positive")
        if not self.events:
            raise ConfigError("at least one event window required")
        return self


def _parse_date(value, what: str) -> date:
    if isinstance(value, date):
        return value
    try:
        return date.fromisoformat(str(value))
    except ValueError as exc:
        raise ConfigError(f"bad {what}: {value!r}") from exc


def _parse_window(entry: dict) -> EventWindow:
    try:
        event_id = entry["event_id"]
        start = _parse_date(entry["start"], "start date")
        end = _parse_date(entry["end"], "end date")
    except KeyError as exc:
        raise ConfigError(f"event window missing key {exc}") from exc
    t0 = entry.get("t0")
    keywords = entry.get("keywords", ())
    if not isinstance(keywords, (list, tuple)):
        raise ConfigError(f"{event_id}: keywords must be a list")
    try:
        return EventWindow(
            event_id=str(event_id),
            start=start,
            end=end,
            t0=_parse_date(t0, "t0") if t0 is not None else None,
            keywords=tuple(str(k) for k in keywords),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path=None) -> PipelineConfig:
    """Build a PipelineConfig from defaults plus an optional YAML file.

    Raises :class:`ConfigError` for unreadable files, unknown keys, or
    invalid values.
    """
    cfg = PipelineConfig()
    if path is None:
        return cfg.validate()
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"invalid YAML in {path}: {exc}") from exc
    if data is None:
        return cfg.validate()
    if not isinstance(data, dict):
        raise ConfigError("config root must be a mapping")

    known = {
        "seed", "hash_algorithm", "mattr_window", "sample_cap",
        "coactivity_bin_hours", "weights", "normalization_pool", "events",
    }
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")

    scalars = {}
    for key in ("seed", "mattr_window", "sample_cap", "coactivity_bin_hours"):
        if key in data:
            try:
                scalars[key] = int(data[key])
            except (TypeError, ValueError):
                raise ConfigError(f"{key} must be an integer") from None
    for key in ("hash_algorithm", "normalization_pool"):
        if key in data:
            scalars[key] = str(data[key])
    if "weights" in data:
        w = data["weights"]
        if isinstance(w, dict):
            try:
                w = [w["h"], w["b"], w["r"], w["d"]]
            except KeyError as exc:
                raise ConfigError(f"weights mapping missing {exc}") from exc
        if not isinstance(w, (list, tuple)) or len(w) != 4:
            raise ConfigError("weights must be 4 numbers or an h/b/r/d mapping")
        try:
            scalars["weights"] = tuple(float(x) for x in w)
        except (TypeError, ValueError):
            raise ConfigError("weights must be numeric") from None
    if "events" in data:
        if not isinstance(data["events"], list):
            raise ConfigError("events must be a list of window mappings")
        scalars["events"] = tuple(_parse_window(e) for e in data["events"])

    return replace(cfg, **scalars).validate()
