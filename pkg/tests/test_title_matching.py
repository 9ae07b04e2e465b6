"""The title matcher must agree with a brute-force similarity oracle on the
50-entry mangled/unrelated reference fixture, with zero disagreements."""

import json
from pathlib import Path

from datause import detector

FIXTURE = Path(__file__).parent / "data" / "title_fixture.json"
ALNUM = "abcdefghijklmnopqrstuvwxyz0123456789"


def oracle_normalize(text: str) -> str:
    cleaned = "".join(ch if ch in ALNUM else " " for ch in text.lower())
    return " ".join(cleaned.split())


def oracle_distance(a: str, b: str) -> int:
    """Full-matrix DP, written independently of the library's two-row version."""
    table = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
    for i in range(len(a) + 1):
        table[i][0] = i
    for j in range(len(b) + 1):
        table[0][j] = j
    for i in range(1, len(a) + 1):
        for j in range(1, len(b) + 1):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            table[i][j] = min(table[i - 1][j] + 1, table[i][j - 1] + 1,
                              table[i - 1][j - 1] + cost)
    return table[len(a)][len(b)]


def oracle_decision(entry: dict, threshold: float) -> bool:
    wanted = oracle_normalize(entry["registry_title"])
    if wanted and wanted in oracle_normalize(entry["raw"]):
        return True
    parsed = entry["parsed_title"]
    if parsed is None:
        return False
    na = oracle_normalize(parsed)
    nb = oracle_normalize(entry["registry_title"])
    longest = max(len(na), len(nb))
    sim = 1.0 if longest == 0 else 1.0 - oracle_distance(na, nb) / longest
    return sim >= threshold


def load_fixture():
    data = json.loads(FIXTURE.read_text(encoding="utf-8"))
    return data["threshold"], data["entries"]


def test_fixture_has_fifty_entries_with_both_outcomes():
    _, entries = load_fixture()
    assert len(entries) == 50
    outcomes = {e["expect"] for e in entries}
    assert outcomes == {True, False}


def test_matcher_agrees_with_oracle_on_every_entry():
    threshold, entries = load_fixture()
    disagreements = []
    for entry in entries:
        implementation = detector.reference_matches_title(
            entry["raw"], entry["parsed_title"], entry["registry_title"],
            threshold)
        oracle = oracle_decision(entry, threshold)
        if not (implementation == oracle == entry["expect"]):
            disagreements.append((entry["note"], entry["registry_title"][:40],
                                  implementation, oracle, entry["expect"]))
    assert disagreements == []


def test_levenshtein_implementation_matches_full_matrix_oracle():
    pairs = [("", ""), ("a", ""), ("kitten", "sitting"),
             ("cardiac mri segmentation", "cardiac mr segmentation"),
             ("abcdef", "fedcba")]
    for a, b in pairs:
        assert detector.edit_distance(a, b) == oracle_distance(a, b)
