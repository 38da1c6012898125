"""
Experiment Configuration
========================
Settings for an MSE-versus-power sweep.

A configuration file is a flat ``key=value`` text file (``#`` comments and
quoted values allowed)::

    n_bs=4
    architectures=32x1,16x2,1x32
    strategies=dft,hadamard,random
    powers=0:50:5
    noise_power_dbm=-100
    n_trials=1000
    master_seed=2024
    output=mse_sweep.csv

Values set on the command line override the file, which overrides defaults.
"""

import dataclasses
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple, Union

from dotenv import dotenv_values

from ..channel import LinkBudget
from ..codebook import BaseKind, GroupTopology

logger = logging.getLogger(__name__)

MAX_SEED = 2 ** 64


class ConfigError(ValueError):
    """Invalid configuration value; ``field`` names the offending setting."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


def _default_architectures() -> List[Tuple[int, int]]:
    return [(32, 1), (16, 2), (1, 32)]


def _default_strategies() -> List[BaseKind]:
    return [BaseKind.DFT, BaseKind.HADAMARD, BaseKind.RANDOM_UNITARY]


@dataclass(frozen=True)
class ExperimentConfig:
    """
    One sweep: every power point x architecture x strategy.

    ``link_budget.tx_power_dbm`` is ignored; the sweep sets it per point.
    """
    n_bs: int = 4
    architectures: List[Tuple[int, int]] = field(default_factory=_default_architectures)
    strategies: List[BaseKind] = field(default_factory=_default_strategies)
    power_sweep_dbm: Tuple[float, float, float] = (0.0, 50.0, 5.0)  # start, stop, step
    link_budget: LinkBudget = field(default_factory=LinkBudget)
    n_trials: int = 1000
    master_seed: int = 2024
    output: Path = Path('mse_sweep.csv')
    workers: int = 1

    def validate(self) -> 'ExperimentConfig':
        """
        Check every field.

        Returns:
            self, for chaining

        Raises:
            ConfigError: naming the first invalid field
        """
        if not isinstance(self.n_bs, int) or self.n_bs < 1:
            raise ConfigError('n_bs', f"must be a positive integer, got {self.n_bs!r}")
        if not self.architectures:
            raise ConfigError('architectures', "at least one architecture is required")
        for g, m_bar in self.architectures:
            if g < 1 or m_bar < 1:
                raise ConfigError('architectures', f"invalid architecture {g}x{m_bar}")
        port_counts = {g * m_bar for g, m_bar in self.architectures}
        if len(port_counts) > 1:
            raise ConfigError(
                'architectures',
                f"all architectures must share one port count M, got {sorted(port_counts)}",
            )
        if len(set(self.architectures)) != len(self.architectures):
            raise ConfigError('architectures', "duplicate architecture")
        if not self.strategies:
            raise ConfigError('strategies', "at least one strategy is required")
        if len(set(self.strategies)) != len(self.strategies):
            raise ConfigError('strategies', "duplicate strategy")

        start, stop, step = self.power_sweep_dbm
        if not all(math.isfinite(v) for v in (start, stop, step)):
            raise ConfigError('powers', "start, stop and step must be finite")
        if step <= 0:
            raise ConfigError('powers', f"step must be positive, got {step:g}")
        if stop < start:
            raise ConfigError('powers', f"stop {stop:g} is below start {start:g}")

        if not isinstance(self.n_trials, int) or self.n_trials < 1:
            raise ConfigError('n_trials', f"must be >= 1, got {self.n_trials!r}")
        if not 0 <= self.master_seed < MAX_SEED:
            raise ConfigError('master_seed', f"must fit in 64 bits, got {self.master_seed}")
        if not isinstance(self.workers, int) or self.workers < 1:
            raise ConfigError('workers', f"must be >= 1, got {self.workers!r}")
        return self

    @property
    def m(self) -> int:
        """BD-RIS port count shared by all architectures."""
        g, m_bar = self.architectures[0]
        return g * m_bar

    def topologies(self) -> List[GroupTopology]:
        return [GroupTopology(n_bs=self.n_bs, g=g, m_bar=m_bar) for g, m_bar in self.architectures]

    def powers(self) -> List[float]:
        """Power points in dBm; each is start + k * step, never accumulated."""
        start, stop, step = self.power_sweep_dbm
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [round(start + k * step, 10) for k in range(count)]

    def with_overrides(self, **changes) -> 'ExperimentConfig':
        """Copy with the given fields replaced (None values are skipped), then validated."""
        changes = {k: v for k, v in changes.items() if v is not None}
        return dataclasses.replace(self, **changes).validate()


def parse_powers(text: str) -> Tuple[float, float, float]:
    """Parse ``start:stop:step`` (a single number means one power point)."""
    parts = [p.strip() for p in text.split(':')]
    try:
        values = [float(p) for p in parts]
    except ValueError:
        raise ConfigError('powers', f"expected start:stop:step, got {text!r}")
    if len(values) == 1:
        return (values[0], values[0], 1.0)
    if len(values) != 3:
        raise ConfigError('powers', f"expected start:stop:step, got {text!r}")
    return (values[0], values[1], values[2])


def parse_architecture(text: str) -> Tuple[int, int]:
    """Parse ``GxM_bar``, e.g. ``16x2``."""
    parts = text.strip().lower().split('x')
    if len(parts) != 2:
        raise ConfigError('architectures', f"expected GxM_bar, got {text!r}")
    try:
        g, m_bar = int(parts[0]), int(parts[1])
    except ValueError:
        raise ConfigError('architectures', f"expected integers in {text!r}")
    if g < 1 or m_bar < 1:
        raise ConfigError('architectures', f"G and M_bar must be positive in {text!r}")
    return (g, m_bar)


def parse_strategy(text: str) -> BaseKind:
    try:
        return BaseKind.parse(text)
    except ValueError as exc:
        raise ConfigError('strategies', str(exc))


def _split(text: str) -> List[str]:
    return [item for item in (s.strip() for s in text.split(',')) if item]


def _to_int(name: str) -> Callable[[str], int]:
    def convert(text: str) -> int:
        try:
            return int(text)
        except ValueError:
            raise ConfigError(name, f"expected an integer, got {text!r}")
    return convert


def _to_float(name: str) -> Callable[[str], float]:
    def convert(text: str) -> float:
        try:
            return float(text)
        except ValueError:
            raise ConfigError(name, f"expected a number, got {text!r}")
    return convert


# Keys that map directly onto ExperimentConfig fields
_TOP_LEVEL: Dict[str, Tuple[str, Callable[[str], object]]] = {
    'n_bs': ('n_bs', _to_int('n_bs')),
    'architectures': ('architectures', lambda s: [parse_architecture(a) for a in _split(s)]),
    'strategies': ('strategies', lambda s: [parse_strategy(k) for k in _split(s)]),
    'powers': ('power_sweep_dbm', parse_powers),
    'n_trials': ('n_trials', _to_int('n_trials')),
    'master_seed': ('master_seed', _to_int('master_seed')),
    'output': ('output', Path),
    'workers': ('workers', _to_int('workers')),
}

# Keys that configure the link budget
_LINK_BUDGET = ('zeta0_db', 'd0_m', 'd_bi_m', 'd_iu_m', 'epsilon', 'noise_power_dbm')

CONFIG_KEYS = tuple(_TOP_LEVEL) + _LINK_BUDGET


def config_from_mapping(
    values: Dict[str, Optional[str]],
    base: Optional[ExperimentConfig] = None
) -> ExperimentConfig:
    """
    Build a configuration from string key/value pairs.

    Args:
        values: Raw settings, e.g. from a config file
        base: Configuration supplying the defaults

    Returns:
        Validated ExperimentConfig

    Raises:
        ConfigError: unknown key or invalid value
    """
    base = base or ExperimentConfig()
    changes: Dict[str, object] = {}
    budget: Dict[str, float] = {}
    for key, raw in values.items():
        name = key.strip().lower()
        if raw is None or not raw.strip():
            raise ConfigError(name, "missing value")
        if name in _TOP_LEVEL:
            attr, convert = _TOP_LEVEL[name]
            changes[attr] = convert(raw.strip())
        elif name in _LINK_BUDGET:
            budget[name] = _to_float(name)(raw.strip())
        else:
            raise ConfigError(name, f"unknown setting (expected one of {', '.join(CONFIG_KEYS)})")

    if budget:
        try:
            changes['link_budget'] = dataclasses.replace(base.link_budget, **budget)
        except ValueError as exc:
            raise ConfigError(next(iter(budget)), str(exc))
    return dataclasses.replace(base, **changes).validate()


def load_config(path: Union[str, Path], base: Optional[ExperimentConfig] = None) -> ExperimentConfig:
    """
    Load a flat key=value configuration file.

    Raises:
        ConfigError: the file is missing or holds an invalid setting
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError('config', f"file not found: {path}")
    values = dotenv_values(path)
    logger.debug(f"Loaded {len(values)} settings from {path}")
    return config_from_mapping(values, base)
