"""Bundled demo corpus: 41 concepts over 4 levels, 3 org units,
10 researchers, 30 publications spanning 2015-2024."""

from pathlib import Path

_HERE = Path(__file__).parent

TAXONOMY = _HERE / "taxonomy.tsv"
UNITS = _HERE / "units.ndjson"
RESEARCHERS = _HERE / "researchers.ndjson"
PUBLICATIONS = _HERE / "publications.ndjson"


def fixture_files() -> dict[str, Path]:
    return {
        "taxonomy": TAXONOMY,
        "units": UNITS,
        "researchers": RESEARCHERS,
        "publications": PUBLICATIONS,
    }
