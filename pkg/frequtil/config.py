"""YAML config loader."""

import os
from dataclasses import dataclass, field

import yaml

from .generator import GeneratorConfig


@dataclass
class BenchConfig:
    timeout: float = 10_000.0  # seconds per algorithm run
    sample_memory: bool = True
    memory_interval_ms: int = 10
    trace_alloc: bool = False
    record_runs: bool = True


@dataclass
class OracleConfig:
    max_items: int = 20


@dataclass
class GeneratorSettings:
    transactions: int = 100_000
    items: int = 1_000
    avg_len: float = 10.0
    max_quantity: int = 5
    utility_min: int = 1
    utility_max: int = 10
    zipf_exponent: float = 1.2
    seed: int = 42

    def to_generator_config(self) -> GeneratorConfig:
        return GeneratorConfig(
            transaction_count=self.transactions,
            item_universe_size=self.items,
            average_transaction_length=self.avg_len,
            max_quantity=self.max_quantity,
            external_utility_range=(self.utility_min, self.utility_max),
            seed=self.seed,
            zipf_exponent=self.zipf_exponent,
        )


@dataclass
class AppConfig:
    data_dir: str = "data"
    db_path: str = "runs.db"
    log_dir: str = "logs"
    bench: BenchConfig = field(default_factory=BenchConfig)
    oracle: OracleConfig = field(default_factory=OracleConfig)
    generator: GeneratorSettings = field(default_factory=GeneratorSettings)


def _section(cls, raw: dict):
    return cls(**{k: v for k, v in (raw or {}).items() if k in cls.__dataclass_fields__})


def load_config(config_path: str = "config.yaml") -> AppConfig:
    raw = {}
    if os.path.exists(config_path):
        with open(config_path) as f:
            raw = yaml.safe_load(f) or {}

    config = AppConfig(
        data_dir=raw.get("data_dir", "data"),
        db_path=raw.get("db_path", "runs.db"),
        log_dir=raw.get("log_dir", "logs"),
        bench=_section(BenchConfig, raw.get("bench")),
        oracle=_section(OracleConfig, raw.get("oracle")),
        generator=_section(GeneratorSettings, raw.get("generator")),
    )

    config.db_path = os.environ.get("FREQUTIL_DB_PATH", config.db_path)
    config.log_dir = os.environ.get("FREQUTIL_LOG_DIR", config.log_dir)
    return config
