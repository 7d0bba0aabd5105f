"""Character extraction and rotation/scale-invariant recognition with
accumulated gradient projection vectors (AGPVs).

Images are 2-D ``numpy.uint8`` arrays indexed ``[y, x]``. Boxes are
``(x, y, width, height)`` tuples in input-image pixels.
"""

from ._agpv import (
    ConfigError,
    Database,
    DbFormatError,
    PgmError,
    add_salt_pepper,
    build_pyramid,
    edge_count,
    equivalent_sigma,
    extract_candidates,
    load_pgm,
    match_cost,
    recognize,
    render_glyph,
    run_bench,
    save_pgm,
    standard_labels,
)

__all__ = [
    "ConfigError",
    "Database",
    "DbFormatError",
    "PgmError",
    "add_salt_pepper",
    "build_pyramid",
    "edge_count",
    "equivalent_sigma",
    "extract_candidates",
    "load_pgm",
    "match_cost",
    "recognize",
    "render_glyph",
    "run_bench",
    "save_pgm",
    "standard_labels",
]
