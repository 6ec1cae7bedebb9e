"""Numerical configuration shared by every module.

A single :class:`Config` instance is active at a time. Functions that take an
optional ``cfg`` argument fall back to :func:`get_config`.
"""
from __future__ import annotations

import contextlib
import dataclasses
from dataclasses import dataclass


MIN_ORDER = 8
MAX_ORDER = 512


@dataclass(frozen=True)
class Config:
    order: int = 64
    samples: int = 1024
    test_radii: tuple[float, ...] = (0.5, 0.8, 0.95, 0.99)
    r_h: float = 0.999
    tolerance: float = 1e-4
    tail_tol: float = 1e-6
    seed: int = 0

    def __post_init__(self):
        if not MIN_ORDER <= self.order <= MAX_ORDER:
            raise ValueError(f"order must lie in [{MIN_ORDER}, {MAX_ORDER}], got {self.order}")
        if not 64 <= self.samples <= 16384:
            raise ValueError(f"samples must lie in [64, 16384], got {self.samples}")
        if not 1e-8 <= self.tolerance <= 1e-2:
            raise ValueError(f"tolerance must lie in [1e-8, 1e-2], got {self.tolerance}")
        if not self.test_radii or any(not 0 < r < 1 for r in self.test_radii):
            raise ValueError("test radii must lie in (0, 1)")
        if not 0 < self.r_h < 1:
            raise ValueError("r_h must lie in (0, 1)")

    def replace(self, **changes) -> "Config":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["test_radii"] = list(self.test_radii)
        return d


_active = Config()


def get_config() -> Config:
    return _active


def set_config(cfg: Config) -> None:
    global _active
    _active = cfg


@contextlib.contextmanager
def config_override(**changes):
    """Temporarily replace fields of the active configuration."""
    global _active
    saved = _active
    _active = saved.replace(**changes)
    try:
        yield _active
    finally:
        _active = saved
