"""Deterministic local fixture sites with golden sets."""

from .server import FixtureServer, RequestRecord, ServerStartError, serve
from .site import (
    GOLDEN_PATH,
    PRICE_KINDS,
    VARIANTS,
    GeneratedSite,
    Page,
    SiteSpec,
    generate_site,
    load_spec,
    spec_from_dict,
    spec_to_dict,
)
from .traces import scripted_trace_for, trace_dict_for

__all__ = [
    "FixtureServer",
    "GOLDEN_PATH",
    "GeneratedSite",
    "PRICE_KINDS",
    "Page",
    "RequestRecord",
    "ServerStartError",
    "SiteSpec",
    "VARIANTS",
    "generate_site",
    "load_spec",
    "scripted_trace_for",
    "serve",
    "spec_from_dict",
    "spec_to_dict",
    "trace_dict_for",
]
