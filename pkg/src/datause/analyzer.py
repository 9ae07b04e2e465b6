"""Data-availability grouping, presence aggregation, and index comparison."""

from __future__ import annotations

from dataclasses import dataclass, field

from .catalog import VenueRecord
from .detector import CITED_AND_MENTIONED, ONLY_CITED, ONLY_MENTIONED, PRESENCE_TYPES
from .harvester import (
    ABSTRACT_OPENALEX,
    FULLTEXT_AVAILABLE,
    FULLTEXT_SCRAPED,
    PaperRecord,
)

GROUP1 = "group1"
GROUP2 = "group2"
GROUP3 = "group3"
DISCARDED = "discarded"


class DanglingPaperRef(Exception):
    pass


@dataclass(frozen=True)
class GroupAssignment:
    paper_id: str
    group: str
    reason: str


def assign_group(paper: PaperRecord) -> GroupAssignment:
    """Total rule over the (full text, OpenAlex abstract, references) cube.

    Full-text papers are group 1 (abstract falls back to the full text) unless
    references are missing (group 3, citations only via title matching). With
    no full text the paper is group 2 (abstract-only mentions, references
    when present) unless nothing at all is obtainable, which discards it.
    """
    fulltext = paper.fulltext_status in (FULLTEXT_AVAILABLE, FULLTEXT_SCRAPED)
    abstract = paper.abstract_source == ABSTRACT_OPENALEX and bool(paper.abstract_text)
    references = bool(paper.referenced_work_ids)

    if not fulltext and not abstract and not references:
        return GroupAssignment(paper.paper_id, DISCARDED,
                               "no content and no references obtainable")
    if fulltext and references:
        detail = "all information" if abstract else "missing only the indexed abstract"
        return GroupAssignment(paper.paper_id, GROUP1, f"full text present, {detail}")
    if fulltext:
        return GroupAssignment(paper.paper_id, GROUP3,
                               "no indexed references, citations via title matching")
    detail = "abstract-only mention scope" if abstract else "references only"
    return GroupAssignment(paper.paper_id, GROUP2, f"full text unavailable, {detail}")


@dataclass(frozen=True)
class PresenceRecord:
    paper_id: str
    dataset_id: str
    presence: str


@dataclass
class PresenceSummary:
    dataset_id: str
    venue_id: str
    counts: dict[str, int] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(self.counts.values())


def aggregate_presence(records: list[PresenceRecord],
                       papers: dict[str, PaperRecord]) -> list[PresenceSummary]:
    """Per (dataset, venue) presence-type counts; counts partition the subset."""
    summaries: dict[tuple[str, str], PresenceSummary] = {}
    for record in records:
        paper = papers.get(record.paper_id)
        if paper is None:
            raise DanglingPaperRef(record.paper_id)
        key = (record.dataset_id, paper.venue_id)
        if key not in summaries:
            summaries[key] = PresenceSummary(
                dataset_id=record.dataset_id, venue_id=paper.venue_id,
                counts={t: 0 for t in PRESENCE_TYPES})
        summaries[key].counts[record.presence] += 1
    return [summaries[k] for k in sorted(summaries)]


@dataclass(frozen=True)
class YearSeries:
    dataset_id: str
    kind: str  # "citations" | "mentions"
    years: tuple[int, ...]
    counts: tuple[int, ...]  # cumulative, monotone non-decreasing


def cumulative_series(records: list[PresenceRecord],
                      papers: dict[str, PaperRecord],
                      venues: list[VenueRecord]) -> list[YearSeries]:
    """Cumulative per-year citation and mention counts per dataset.

    A paper counts toward citations if cited and mentions if mentioned; a
    cited-and-mentioned paper increments both series.
    """
    if not venues:
        return []
    start = min(v.year_range[0] for v in venues)
    end = max(v.year_range[1] for v in venues)
    years = tuple(range(start, end + 1))

    per_year: dict[tuple[str, str], dict[int, set[str]]] = {}
    for record in records:
        paper = papers.get(record.paper_id)
        if paper is None:
            raise DanglingPaperRef(record.paper_id)
        kinds = []
        if record.presence in (ONLY_CITED, CITED_AND_MENTIONED):
            kinds.append("citations")
        if record.presence in (ONLY_MENTIONED, CITED_AND_MENTIONED):
            kinds.append("mentions")
        for kind in kinds:
            per_year.setdefault((record.dataset_id, kind), {}).setdefault(
                paper.year, set()).add(record.paper_id)

    dataset_ids = sorted({dataset_id for dataset_id, _ in per_year})
    series = []
    for dataset_id in dataset_ids:
        for kind in ("citations", "mentions"):
            by_year = per_year.get((dataset_id, kind), {})
            running = 0
            counts = []
            for year in years:
                running += len(by_year.get(year, ()))
                counts.append(running)
            series.append(YearSeries(dataset_id=dataset_id, kind=kind,
                                     years=years, counts=tuple(counts)))
    return series


@dataclass(frozen=True)
class IndexComparison:
    size_a: int
    size_b: int
    overlap: int
    a_in_b: float | None  # |A∩B| / |A|; None when A is empty (undefined)
    b_in_a: float | None

    def to_dict(self) -> dict:
        return {
            "size_a": self.size_a,
            "size_b": self.size_b,
            "overlap": self.overlap,
            "a_in_b": self.a_in_b,
            "b_in_a": self.b_in_a,
        }


def compare_citation_indexes(set_a: set[str], set_b: set[str]) -> IndexComparison:
    """Mutual containment of two citing-work ID sets over a common ID space."""
    overlap = len(set_a & set_b)
    return IndexComparison(
        size_a=len(set_a),
        size_b=len(set_b),
        overlap=overlap,
        a_in_b=overlap / len(set_a) if set_a else None,
        b_in_a=overlap / len(set_b) if set_b else None,
    )
