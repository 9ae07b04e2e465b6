"""Deterministic serialization of pipeline outputs.

All delimited files are UTF-8, comma-separated with RFC-style quoting,
``\n`` line endings, and fixed sort keys, so identical runs produce
byte-identical artifacts suitable for golden-file testing.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .analyzer import IndexComparison, PresenceSummary, YearSeries
from .detector import PRESENCE_TYPES, Detection, Location

DETECTION_COLUMNS = ("paper_id", "dataset_id", "kind", "location",
                     "matched_text", "span_start", "span_end")


@dataclass
class RunManifest:
    registry_sha256: str
    venues_sha256: str
    config: dict
    counts: dict[str, int] = field(default_factory=dict)
    tool_version: str = __version__

    def to_dict(self) -> dict:
        return {
            "tool_version": self.tool_version,
            "registry_sha256": self.registry_sha256,
            "venues_sha256": self.venues_sha256,
            "config": self.config,
            "counts": self.counts,
        }


class ManifestMismatch(Exception):
    pass


def sha256_file(path: Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _csv_text(header: tuple[str, ...], rows: list[tuple]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def presence_csv(summaries: list[PresenceSummary]) -> str:
    rows = []
    for summary in sorted(summaries, key=lambda s: (s.dataset_id, s.venue_id)):
        for presence_type in PRESENCE_TYPES:
            rows.append((summary.dataset_id, summary.venue_id, presence_type,
                         summary.counts.get(presence_type, 0), summary.total))
    return _csv_text(("dataset", "venue", "type", "count", "total"), rows)


def cumulative_csv(series: list[YearSeries]) -> str:
    rows = []
    for entry in sorted(series, key=lambda s: (s.dataset_id, s.kind)):
        for year, count in zip(entry.years, entry.counts):
            rows.append((entry.dataset_id, entry.kind, year, count))
    return _csv_text(("dataset", "kind", "year", "count"), rows)


def detections_csv(detections: list[Detection]) -> str:
    rows = [
        (d.paper_id, d.dataset_id, d.kind, d.location.label(), d.matched_text,
         d.span[0], d.span[1])
        for d in sorted(detections, key=lambda d: (
            d.paper_id, d.dataset_id, d.kind, d.location.label(), d.span))
    ]
    return _csv_text(DETECTION_COLUMNS, rows)


def read_detections_csv(path: Path) -> list[Detection]:
    detections = []
    with open(path, newline="", encoding="utf-8") as handle:
        for row in csv.DictReader(handle):
            kind, _, heading = row["location"].partition(":")
            detections.append(Detection(
                paper_id=row["paper_id"],
                dataset_id=row["dataset_id"],
                kind=row["kind"],
                location=Location(kind, heading or None),
                matched_text=row["matched_text"],
                span=(int(row["span_start"]), int(row["span_end"])),
            ))
    return detections


def comparison_json(comparison: IndexComparison) -> str:
    return json.dumps(comparison.to_dict(), indent=2, sort_keys=True) + "\n"


def emit_reports(out_dir: Path, summaries: list[PresenceSummary],
                 series: list[YearSeries], detections: list[Detection],
                 manifest: RunManifest) -> list[Path]:
    """Write the final file set; the manifest goes last so a complete manifest
    implies complete data files."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for name, text in (
        ("presence.csv", presence_csv(summaries)),
        ("cumulative.csv", cumulative_csv(series)),
        ("detections.csv", detections_csv(detections)),
    ):
        path = out_dir / name
        path.write_text(text, encoding="utf-8")
        written.append(path)
    manifest_path = out_dir / "manifest.json"
    manifest_path.write_text(
        json.dumps(manifest.to_dict(), indent=2, sort_keys=True) + "\n",
        encoding="utf-8")
    written.append(manifest_path)
    return written


def verify_manifest(manifest_path: Path, registry_path: Path,
                    venues_path: Path) -> RunManifest:
    """Recompute the input digests and compare against the stored manifest."""
    data = json.loads(Path(manifest_path).read_text(encoding="utf-8"))
    manifest = RunManifest(
        registry_sha256=data["registry_sha256"],
        venues_sha256=data["venues_sha256"],
        config=data["config"],
        counts=data["counts"],
        tool_version=data["tool_version"],
    )
    actual_registry = sha256_file(registry_path)
    actual_venues = sha256_file(venues_path)
    if actual_registry != manifest.registry_sha256:
        raise ManifestMismatch(f"registry digest {actual_registry} != recorded")
    if actual_venues != manifest.venues_sha256:
        raise ManifestMismatch(f"venue list digest {actual_venues} != recorded")
    return manifest
