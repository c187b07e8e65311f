"""Cached builds shared by the test modules (exact computations are not cheap)."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from qbrst.brst import build_brst
from qbrst.complex import GammaModule
from qbrst.presets import DEFAULT_CAPS, load_preset
from qbrst.scalar import Field

Q32 = Field(Fraction(3, 2))


@lru_cache(maxsize=None)
def spec(name: str):
    """Classical presets, symbolic mode."""
    return load_preset(name, Field())


@lru_cache(maxsize=None)
def uq_spec():
    return load_preset("uq-gl", Q32)


@lru_cache(maxsize=None)
def brst(name: str):
    s = uq_spec() if name == "uq-gl" else spec(name)
    return build_brst(s, max_n=DEFAULT_CAPS[name][0])


@lru_cache(maxsize=None)
def module(name: str, chi_cap: int | None = None, gamma_cap: int | None = None):
    d = brst(name)
    _, c, g = DEFAULT_CAPS[name]
    return GammaModule(d.spec, d.tower, c if chi_cap is None else chi_cap, g if gamma_cap is None else gamma_cap)


def as_fraction(x) -> Fraction:
    return Fraction(str(x))
