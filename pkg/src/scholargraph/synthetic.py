"""Synthetic corpus generator for capacity benchmarks.

Produces input files in the ingest formats at configurable scale. Each
concept gets its own keyword vocabulary so publication/concept overlap
stays sparse and classification cost reflects realistic selectivity.
Fully deterministic for a given seed.
"""

from __future__ import annotations

import json
import random
from pathlib import Path


def generate_corpus(
    out_dir: str | Path,
    concepts: int = 2000,
    units: int = 20,
    researchers: int = 500,
    publications: int = 5000,
    year_range: tuple[int, int] = (2015, 2024),
    seed: int = 7,
) -> dict[str, Path]:
    """Write taxonomy/units/researchers/publications files; returns their paths."""
    rng = random.Random(seed)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    n_roots = max(4, concepts // 250)
    n_level1 = max(n_roots * 4, concepts // 25)
    levels: list[list[str]] = [[], [], [], []]
    rows = []
    for i in range(concepts):
        cid = f"c{i:05d}"
        if i < n_roots:
            level = 0
        elif i < n_roots + n_level1:
            level = 1
        elif i < n_roots + n_level1 + (concepts - n_roots - n_level1) // 2:
            level = 2
        else:
            level = 3
        parents = []
        if level > 0:
            pool = levels[level - 1]
            parents = sorted(rng.sample(pool, k=min(len(pool), rng.choice((1, 1, 2)))))
        levels[level].append(cid)
        kw = [f"kw{i:05d}{suffix}" for suffix in "abcd"]
        name = f"{kw[0]} {kw[1]}"
        description = f"{kw[2]} {kw[3]}"
        rows.append((cid, name, description, parents))
    taxonomy_path = out_dir / "taxonomy.tsv"
    with open(taxonomy_path, "w", encoding="utf-8") as fh:
        for cid, name, description, parents in rows:
            fh.write(f"{cid}\t{name}\t{description}\t{','.join(parents)}\n")

    units_path = out_dir / "units.ndjson"
    unit_ids = [f"u{i:04d}" for i in range(units)]
    with open(units_path, "w", encoding="utf-8") as fh:
        for i, uid in enumerate(unit_ids):
            parent = "" if i < max(1, units // 5) else rng.choice(unit_ids[: max(1, units // 5)])
            fh.write(
                json.dumps(
                    {"id": uid, "name": f"Unit {i}", "unit_type": "group", "parent_id": parent}
                )
                + "\n"
            )

    researchers_path = out_dir / "researchers.ndjson"
    researcher_ids = [f"r{i:04d}" for i in range(researchers)]
    with open(researchers_path, "w", encoding="utf-8") as fh:
        for i, rid in enumerate(researcher_ids):
            memberships = sorted(rng.sample(unit_ids, k=rng.choice((1, 1, 2))))
            fh.write(
                json.dumps({"id": rid, "name": f"Researcher {i}", "unit_ids": memberships})
                + "\n"
            )

    filler = [f"filler{i:03d}" for i in range(200)]
    concept_keywords = {
        cid: [f"kw{i:05d}{suffix}" for suffix in "abcd"]
        for i, cid in enumerate(r[0] for r in rows)
    }
    all_concepts = [r[0] for r in rows]
    publications_path = out_dir / "publications.ndjson"
    with open(publications_path, "w", encoding="utf-8") as fh:
        for i in range(publications):
            pid = f"p{i:05d}"
            topics = rng.sample(all_concepts, k=rng.choice((1, 2, 3)))
            title_words = [rng.choice(concept_keywords[t]) for t in topics for _ in range(2)]
            body_words = []
            for t in topics:
                body_words += rng.choices(concept_keywords[t], k=8)
            body_words += rng.choices(filler, k=20)
            rng.shuffle(body_words)
            fh.write(
                json.dumps(
                    {
                        "id": pid,
                        "title": " ".join(title_words),
                        "abstract": " ".join(body_words),
                        "year": rng.randint(*year_range),
                        "citations": rng.randint(0, 200),
                        "author_ids": sorted(rng.sample(researcher_ids, k=rng.choice((1, 2, 3)))),
                    }
                )
                + "\n"
            )

    return {
        "taxonomy": taxonomy_path,
        "units": units_path,
        "researchers": researchers_path,
        "publications": publications_path,
    }
