"""Pricing catalogs: the unit prices behind every cost model."""

from pathlib import Path
from typing import List, Optional, Tuple, Union

from loguru import logger

from costbench.flatfile import build_model, dump_flat, parse_flat, read_flat
from costbench.models import PRICE_FIELDS, PricingCatalog

CatalogDelta = Tuple[str, Optional[str], Optional[str]]


def parse_catalog(text: str, source: str = "<string>") -> PricingCatalog:
    """Parse and validate catalog text.

    Args:
        text: Flat key=value contents
        source: Name used in diagnostics

    Returns:
        Validated catalog
    """
    return build_model(PricingCatalog, parse_flat(text, source), source)


def load_catalog(path: Union[str, Path]) -> PricingCatalog:
    """Load a pricing catalog file.

    Optional prices default to 0; container minimums default to the shipped
    autopilot values.

    Args:
        path: Path to the catalog file

    Returns:
        Validated catalog

    Raises:
        ParseError: If the file is malformed
        ValidationError: If a price is negative or a required field is missing
    """
    catalog = build_model(PricingCatalog, read_flat(path), str(path))
    logger.info(f"Loaded pricing catalog '{catalog.label}' from {path}")
    return catalog


def dump_catalog(catalog: PricingCatalog) -> str:
    """Serialize a catalog in the format load_catalog reads."""
    return dump_flat(
        [("label", catalog.label), ("source", catalog.source)]
        + [(name, getattr(catalog, name)) for name in PRICE_FIELDS]
    )


def _render(value: object) -> Optional[str]:
    if value is None:
        return None
    return format(value, "f") if not isinstance(value, str) else value


def catalog_diff(a: PricingCatalog, b: PricingCatalog) -> List[CatalogDelta]:
    """List every field whose value differs between two catalogs.

    Args:
        a: First catalog
        b: Second catalog

    Returns:
        (field, a_value, b_value) in schema order; empty when identical
    """
    deltas = []
    for name in PricingCatalog.model_fields:
        left, right = getattr(a, name), getattr(b, name)
        if left != right:
            deltas.append((name, _render(left), _render(right)))
    return deltas
