"""Access to the packaged fixture catalog and rule bindings."""

from __future__ import annotations

from importlib import resources


def packaged_catalog_bytes() -> bytes:
    return resources.files("visqual").joinpath("data/catalog.json").read_bytes()


def packaged_bindings_bytes() -> bytes:
    return resources.files("visqual").joinpath("data/bindings.json").read_bytes()
