"""Bundled case-study datasets."""

from __future__ import annotations

from importlib import resources

INSULATING_FLUID = "insulating_fluid_34kv.txt"
AIR_CONDITIONING = "air_conditioning.txt"

FIXTURES = {
    "insulating_fluid_34kv": INSULATING_FLUID,
    "air_conditioning": AIR_CONDITIONING,
}


def fixture_path(name: str):
    """Filesystem path of a bundled dataset (file name or short key)."""
    fname = FIXTURES.get(name, name)
    return resources.files("celdist") / "data" / fname


def load_fixture(name: str):
    from .io import load_dataset

    return load_dataset(fixture_path(name))
