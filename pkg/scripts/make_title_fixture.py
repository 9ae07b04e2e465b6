#!/usr/bin/env python3
"""Generate the 50-entry reference-string fixture for the title matcher.

Each entry pairs a registry title with a (raw reference string, parsed title)
variant: faithful embeddings, mangled-but-recognizable forms, truncations, and
unrelated titles that share common words. The expected decision is computed
here with a brute-force full-matrix edit-distance oracle (independent of the
library implementation) at threshold 0.9 and frozen into the fixture.

Usage: python scripts/make_title_fixture.py [out.json]
"""

import json
import random
import string
import sys
from pathlib import Path

THRESHOLD = 0.9

REGISTRY_TITLES = [
    "Deep Learning Techniques for Automatic MRI Cardiac Multi-structures"
    " Segmentation and Diagnosis: Is the Problem Solved?",
    "The Multimodal Brain Tumor Image Segmentation Benchmark (BRATS)",
    "Ridge-based vessel segmentation in color images of the retina",
    "CheXpert: A Large Chest Radiograph Dataset with Uncertainty Labels and"
    " Expert Comparison",
    "1399 H&E-stained sentinel lymph node sections of breast cancer patients:"
    " the CAMELYON dataset",
    "ChestX-ray8: Hospital-scale Chest X-ray Database and Benchmarks on"
    " Weakly-Supervised Classification and Localization of Common Thorax"
    " Diseases",
]

UNRELATED_TITLES = [
    "Deep learning for segmentation",
    "A survey of deep learning in medical image analysis",
    "Cardiac motion estimation with recurrent networks",
    "Brain tumor detection using transfer learning",
    "Vessel tracking in fundus photography: a comparison",
    "Chest radiograph classification with limited labels",
    "Uncertainty estimation for medical segmentation models",
    "Sentinel lymph node metastasis grading with attention models",
    "Benchmarking augmentation strategies for tumor segmentation",
    "Large-scale weak supervision for thorax disease detection",
    "Prostate segmentation from multi-parametric MRI",
    "Automatic diagnosis of retinal disease from color images",
    "Self-supervised pretraining for radiograph understanding",
    "Multi-structure labeling of cardiac cine sequences",
    "A large dataset of knee MRI examinations",
    "Histopathology image retrieval at scale",
    "Federated learning across imaging centers",
    "Domain adaptation for cross-scanner segmentation",
    "Counting mitoses in whole-slide images",
    "Evaluation metrics for medical image segmentation challenges",
]

ALNUM = "abcdefghijklmnopqrstuvwxyz0123456789"


def normalize(text: str) -> str:
    cleaned = "".join(ch if ch in ALNUM else " " for ch in text.lower())
    return " ".join(cleaned.split())


def full_matrix_distance(a: str, b: str) -> int:
    rows = len(a) + 1
    cols = len(b) + 1
    table = [[0] * cols for _ in range(rows)]
    for i in range(rows):
        table[i][0] = i
    for j in range(cols):
        table[0][j] = j
    for i in range(1, rows):
        for j in range(1, cols):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            table[i][j] = min(table[i - 1][j] + 1, table[i][j - 1] + 1,
                              table[i - 1][j - 1] + cost)
    return table[rows - 1][cols - 1]


def similarity(a: str, b: str) -> float:
    na, nb = normalize(a), normalize(b)
    longest = max(len(na), len(nb))
    if longest == 0:
        return 1.0
    return 1.0 - full_matrix_distance(na, nb) / longest


def oracle_decision(raw: str, parsed: str | None, registry_title: str) -> bool:
    wanted = normalize(registry_title)
    if wanted and wanted in normalize(raw):
        return True
    if parsed is not None:
        return similarity(parsed, registry_title) >= THRESHOLD
    return False


def substitute(rng: random.Random, text: str, edits: int) -> str:
    """Random alnum->different-alnum substitutions; edit distance grows with edits."""
    chars = list(text)
    positions = [i for i, ch in enumerate(chars) if ch.lower() in ALNUM]
    rng.shuffle(positions)
    for pos in positions[:edits]:
        current = chars[pos].lower()
        chars[pos] = rng.choice([c for c in string.ascii_lowercase if c != current])
    return "".join(chars)


def drop_tail_words(text: str, keep_fraction: float) -> str:
    words = text.split()
    keep = max(1, int(len(words) * keep_fraction))
    return " ".join(words[:keep])


def build_entries() -> list[dict]:
    rng = random.Random(0xDA7A)
    entries = []

    def add(registry_title, raw, parsed, note):
        entries.append({
            "registry_title": registry_title,
            "raw": raw,
            "parsed_title": parsed,
            "note": note,
            "expect": oracle_decision(raw, parsed, registry_title),
        })

    for idx, title in enumerate(REGISTRY_TITLES):
        author = f"Author{idx} A, Author{idx} B, et al."
        # faithful embedding in a reference string
        add(title, f"{author} {title}. In Proceedings, 20{10 + idx}.", title,
            "faithful embedding")
        # shouty, punctuation-free raw; containment survives normalization
        shouty = "".join(ch for ch in title.upper() if ch not in ",:()?-")
        add(title, f"{author} {shouty}, vol. {idx}.", None,
            "recased and stripped punctuation")
        # lightly misparsed title: similarity stays above the threshold
        light = substitute(rng, title, max(1, len(normalize(title)) // 20))
        add(title, f"[{idx}] unrelated fragment {idx}", light, "light typos")
        # truncated parse: similarity drops well below the threshold
        add(title, f"[{idx}] unrelated fragment {idx}",
            drop_tail_words(title, 0.55), "truncated parse")
        # heavy mangling: recognizably corrupted beyond the threshold
        heavy = substitute(rng, title, max(3, len(normalize(title)) // 6))
        add(title, f"[{idx}] unrelated fragment {idx}", heavy, "heavy typos")

    # threshold boundary probes on the longest title
    anchor = REGISTRY_TITLES[5]
    length = len(normalize(anchor))
    just_in = substitute(rng, anchor, int(length * (1 - THRESHOLD)) - 1)
    just_out = substitute(rng, anchor, int(length * (1 - THRESHOLD)) + 3)
    add(anchor, "boundary probe", just_in, "just inside threshold")
    add(anchor, "boundary probe", just_out, "just outside threshold")

    for i, unrelated in enumerate(UNRELATED_TITLES[:18]):
        registry_title = REGISTRY_TITLES[i % len(REGISTRY_TITLES)]
        add(registry_title, f"Someone S. {unrelated}. Journal {i}.", unrelated,
            "unrelated title sharing common words")

    assert len(entries) == 50, len(entries)
    return entries


def main() -> int:
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else \
        Path(__file__).resolve().parents[1] / "tests" / "data" / "title_fixture.json"
    entries = build_entries()

    matches = sum(1 for e in entries if e["expect"])
    sims = [
        (similarity(e["parsed_title"], e["registry_title"]), e["expect"])
        for e in entries if e["parsed_title"] is not None
    ]
    near = [(s, x) for s, x in sims if 0.85 <= s <= 0.95]
    assert matches >= 15 and len(entries) - matches >= 15, matches
    assert any(x for _, x in near) and any(not x for _, x in near), near

    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps({"threshold": THRESHOLD, "entries": entries},
                              indent=2) + "\n", encoding="utf-8")
    print(f"wrote {len(entries)} entries ({matches} matches) to {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
