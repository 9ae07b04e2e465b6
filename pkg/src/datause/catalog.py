"""Dataset registry and venue list: the two user-supplied inputs of the pipeline.

Both files are delimited UTF-8 tables with a header row. The delimiter
(`|` or `,`) is auto-detected from the header; list-valued cells use `;`
as the inner separator. Records are validated on load and are immutable
afterwards, so they can be shared freely across pipeline workers.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass
from pathlib import Path
from urllib.parse import urlsplit, urlunsplit

DOI_PATTERN = re.compile(r"10\.[^/\s]+/\S+")
_DOI_PREFIX = re.compile(r"^(?:https?://(?:dx\.)?doi\.org/|doi:)\s*", re.IGNORECASE)

TASKS = ("segmentation", "classification")

# Aliases this short and shouty are acronyms; folding case would make e.g.
# DRIVE collide with the common English word.
_ACRONYM_MAX_LEN = 6


class CatalogError(Exception):
    """Base class for registry/venue loading failures."""


class MalformedRow(CatalogError):
    def __init__(self, row_index: int, reason: str):
        super().__init__(f"row {row_index}: {reason}")
        self.row_index = row_index
        self.reason = reason


class DuplicateDatasetId(CatalogError):
    pass


class EmptyRegistry(CatalogError):
    pass


class EmptyVenueList(CatalogError):
    pass


def normalize_doi(raw: str) -> str:
    """Strip resolver prefixes, lowercase, and validate the DOI shape."""
    doi = _DOI_PREFIX.sub("", raw.strip()).lower()
    if not DOI_PATTERN.fullmatch(doi):
        raise ValueError(f"not a DOI: {raw!r}")
    return doi


def normalize_url(raw: str) -> str:
    """Lowercase the host, strip the trailing slash; scheme defaults to https."""
    raw = raw.strip()
    if not raw:
        raise ValueError("empty URL")
    if "://" not in raw:
        raw = "https://" + raw
    parts = urlsplit(raw)
    netloc = parts.netloc.lower()
    path = parts.path.rstrip("/")
    return urlunsplit((parts.scheme.lower(), netloc, path, parts.query, ""))


def url_match_key(url: str) -> str:
    """host+path form used for substring matching inside document text."""
    normalized = normalize_url(url)
    parts = urlsplit(normalized)
    return (parts.netloc + parts.path).lower()


@dataclass(frozen=True)
class Alias:
    text: str
    case_sensitive: bool

    @classmethod
    def from_cell(cls, token: str) -> "Alias":
        """Parse one alias token; `[cs]`/`[ci]` suffixes override the default."""
        token = token.strip()
        forced = None
        if token.endswith("[cs]"):
            token, forced = token[:-4].strip(), True
        elif token.endswith("[ci]"):
            token, forced = token[:-4].strip(), False
        if forced is None:
            forced = len(token) <= _ACRONYM_MAX_LEN and token.isupper()
        return cls(text=token, case_sensitive=forced)

    def to_cell(self) -> str:
        return self.text + ("[cs]" if self.case_sensitive else "[ci]")


def _squash_ws(text: str) -> str:
    return " ".join(text.split())


@dataclass(frozen=True)
class DatasetRecord:
    dataset_id: str
    canonical_name: str
    aliases: tuple[Alias, ...]
    urls: tuple[str, ...]
    paper_titles: tuple[str, ...]
    paper_dois: tuple[str, ...]
    task: str
    organ: str
    modality: str
    year_published: int


def dataset_invariant_violations(rec: DatasetRecord) -> list[str]:
    """Re-run the DatasetRecord invariants; empty list means the record is valid."""
    problems = []
    alias_texts = [a.text for a in rec.aliases]
    if rec.canonical_name not in alias_texts:
        problems.append("canonical name missing from aliases")
    if not rec.canonical_name:
        problems.append("empty canonical name")
    if any(not a.text for a in rec.aliases):
        problems.append("empty alias")
    squashed = [_squash_ws(t) for t in alias_texts]
    if len(set(squashed)) != len(squashed):
        problems.append("duplicate aliases after whitespace normalization")
    for doi in rec.paper_dois:
        if not DOI_PATTERN.fullmatch(doi) or doi != doi.lower():
            problems.append(f"unnormalized DOI {doi!r}")
    if len(set(rec.paper_dois)) != len(rec.paper_dois):
        problems.append("duplicate DOIs")
    if not rec.paper_titles and not rec.paper_dois and not rec.urls:
        problems.append("no titles, DOIs or URLs: dataset is undetectable")
    if rec.task not in TASKS:
        problems.append(f"unknown task {rec.task!r}")
    return problems


@dataclass(frozen=True)
class VenueRecord:
    venue_id: str
    dblp_stream_key: str
    display_name: str
    year_range: tuple[int, int]


_DATASET_COLUMNS = (
    "dataset_id",
    "name",
    "aliases",
    "urls",
    "paper_titles",
    "paper_dois",
    "task",
    "organ",
    "modality",
    "year",
)
_VENUE_COLUMNS = ("venue_id", "dblp_stream_key", "display_name", "years")


def _read_table(path: Path, columns: tuple[str, ...]) -> list[dict[str, str]]:
    text = Path(path).read_text(encoding="utf-8")
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        return []
    delimiter = "|" if "|" in lines[0] else ","
    reader = csv.reader(io.StringIO("\n".join(lines)), delimiter=delimiter)
    rows = [[cell.strip() for cell in row] for row in reader]
    header = [h.lower() for h in rows[0]]
    missing = [c for c in columns if c not in header]
    if missing:
        raise MalformedRow(0, f"missing columns: {', '.join(missing)}")
    out = []
    for i, row in enumerate(rows[1:], start=1):
        if len(row) != len(header):
            raise MalformedRow(i, f"expected {len(header)} cells, got {len(row)}")
        out.append({header[j]: row[j] for j in range(len(header))})
    return out


def _split_list(cell: str) -> list[str]:
    return [part.strip() for part in cell.split(";") if part.strip()]


def load_dataset_registry(path: Path) -> list[DatasetRecord]:
    """Load and validate datasets.csv; the canonical name becomes a self-alias."""
    rows = _read_table(path, _DATASET_COLUMNS)
    if not rows:
        raise EmptyRegistry(str(path))
    records = []
    seen_ids = set()
    for i, row in enumerate(rows, start=1):
        try:
            record = _dataset_from_row(row)
        except ValueError as exc:
            raise MalformedRow(i, str(exc)) from exc
        problems = dataset_invariant_violations(record)
        if problems:
            raise MalformedRow(i, "; ".join(problems))
        if record.dataset_id in seen_ids:
            raise DuplicateDatasetId(record.dataset_id)
        seen_ids.add(record.dataset_id)
        records.append(record)
    return records


def _dataset_from_row(row: dict[str, str]) -> DatasetRecord:
    dataset_id = row["dataset_id"]
    name = row["name"]
    if not dataset_id:
        raise ValueError("empty dataset_id")
    if not name:
        raise ValueError("empty name")
    aliases = [Alias.from_cell(tok) for tok in _split_list(row["aliases"])]
    if name not in [a.text for a in aliases]:
        aliases.insert(0, Alias.from_cell(name))
    return DatasetRecord(
        dataset_id=dataset_id,
        canonical_name=name,
        aliases=tuple(aliases),
        urls=tuple(normalize_url(u) for u in _split_list(row["urls"])),
        paper_titles=tuple(_split_list(row["paper_titles"])),
        paper_dois=tuple(normalize_doi(d) for d in _split_list(row["paper_dois"])),
        task=row["task"].lower(),
        organ=row["organ"],
        modality=row["modality"],
        year_published=int(row["year"]),
    )


def save_dataset_registry(records: list[DatasetRecord], path: Path) -> None:
    """Write a registry back out; loading the result round-trips exactly."""
    lines = ["|".join(_DATASET_COLUMNS)]
    for rec in records:
        lines.append(
            "|".join(
                [
                    rec.dataset_id,
                    rec.canonical_name,
                    ";".join(a.to_cell() for a in rec.aliases),
                    ";".join(rec.urls),
                    ";".join(rec.paper_titles),
                    ";".join(rec.paper_dois),
                    rec.task,
                    rec.organ,
                    rec.modality,
                    str(rec.year_published),
                ]
            )
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _parse_year_range(cell: str) -> tuple[int, int]:
    parts = cell.split("-")
    if len(parts) == 1:
        start = end = int(parts[0])
    elif len(parts) == 2:
        start, end = int(parts[0]), int(parts[1])
    else:
        raise ValueError(f"bad year range {cell!r}")
    if start > end:
        raise ValueError(f"inverted year range {cell!r}")
    return start, end


def load_venue_list(path: Path) -> list[VenueRecord]:
    rows = _read_table(path, _VENUE_COLUMNS)
    if not rows:
        raise EmptyVenueList(str(path))
    venues = []
    for i, row in enumerate(rows, start=1):
        if not row["venue_id"]:
            raise MalformedRow(i, "empty venue_id")
        if not row["dblp_stream_key"]:
            raise MalformedRow(i, "empty dblp_stream_key")
        try:
            year_range = _parse_year_range(row["years"])
        except ValueError as exc:
            raise MalformedRow(i, str(exc)) from exc
        venues.append(
            VenueRecord(
                venue_id=row["venue_id"],
                dblp_stream_key=row["dblp_stream_key"],
                display_name=row["display_name"],
                year_range=year_range,
            )
        )
    return venues
