"""Citation and mention detection over harvested metadata and parsed full texts.

A dataset is *cited* when one of its associated papers shows up in the
reference list (matched by OpenAlex work ID or by title similarity against
the parsed reference strings). It is *mentioned* when a name, alias or URL
appears in an eligible location: the abstract, a non-excluded body section,
a figure/table caption, or a footnote. Reference lists and excluded sections
(related work, discussion, ...) never produce mentions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .catalog import DatasetRecord, url_match_key
from .fulltext import ELIGIBLE, EXCLUDED, UNKNOWN, StructuredDocument
from .harvester import PaperRecord

KIND_CITATION_DOI = "citation_via_doi"
KIND_CITATION_TITLE = "citation_via_title"
KIND_MENTION = "mention"
CITATION_KINDS = (KIND_CITATION_DOI, KIND_CITATION_TITLE)

LOC_ABSTRACT = "abstract"
LOC_BODY_SECTION = "body_section"
LOC_FIGURE_CAPTION = "figure_caption"
LOC_TABLE_CAPTION = "table_caption"
LOC_FOOTNOTE = "footnote"
LOC_REFERENCE_LIST = "reference_list"

ONLY_CITED = "only_cited"
ONLY_MENTIONED = "only_mentioned"
CITED_AND_MENTIONED = "cited_and_mentioned"
PRESENCE_TYPES = (ONLY_CITED, ONLY_MENTIONED, CITED_AND_MENTIONED)


@dataclass(frozen=True)
class Location:
    kind: str
    heading: str | None = None

    def label(self) -> str:
        return f"{self.kind}:{self.heading}" if self.heading else self.kind


@dataclass(frozen=True)
class Detection:
    paper_id: str
    dataset_id: str
    kind: str
    location: Location
    matched_text: str
    span: tuple[int, int]


@dataclass(frozen=True)
class MatcherConfig:
    title_similarity_threshold: float = 0.9
    excluded_heading_keywords: tuple[str, ...] = (
        "related work",
        "prior work",
        "state of the art",
        "discussion",
    )
    word_boundaries: bool = True
    unknown_headings_eligible: bool = True

    def __post_init__(self):
        if not 0.0 <= self.title_similarity_threshold <= 1.0:
            raise ValueError("title_similarity_threshold must be in [0, 1]")
        for kw in self.excluded_heading_keywords:
            if kw != kw.lower():
                raise ValueError(f"excluded keyword must be lowercase: {kw!r}")


def sort_key(det: Detection) -> tuple:
    return (det.dataset_id, det.location.kind, det.location.heading or "",
            det.span, det.kind)


# -- title matching --------------------------------------------------------------


def normalize_title(title: str) -> str:
    return " ".join(re.sub(r"[^0-9a-z]+", " ", title.lower()).split())


def edit_distance(a: str, b: str) -> int:
    """Levenshtein distance, two-row DP."""
    if len(a) < len(b):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            current.append(min(
                previous[j] + 1,
                current[j - 1] + 1,
                previous[j - 1] + (ca != cb),
            ))
        previous = current
    return previous[-1]


def title_similarity(a: str, b: str) -> float:
    """Edit-distance similarity of normalized titles, in [0, 1]."""
    na, nb = normalize_title(a), normalize_title(b)
    longest = max(len(na), len(nb))
    if longest == 0:
        return 1.0
    return 1.0 - edit_distance(na, nb) / longest


def reference_matches_title(raw: str, parsed_title: str | None,
                            registry_title: str, threshold: float) -> bool:
    """Containment of the normalized title in the raw entry, or parsed-title
    similarity at or above the threshold."""
    wanted = normalize_title(registry_title)
    if wanted and wanted in normalize_title(raw):
        return True
    if parsed_title is not None:
        return title_similarity(parsed_title, registry_title) >= threshold
    return False


# -- citations --------------------------------------------------------------------


def detect_citations_by_id(paper: PaperRecord, registry: list[DatasetRecord],
                           dataset_work_ids: dict[str, set[str]]) -> list[Detection]:
    """One citation per (paper, dataset) whose resolved work ID is referenced."""
    referenced = set(paper.referenced_work_ids or ())
    detections = []
    for dataset in registry:
        hit = sorted(dataset_work_ids.get(dataset.dataset_id, set()) & referenced)
        if hit:
            detections.append(Detection(
                paper_id=paper.paper_id,
                dataset_id=dataset.dataset_id,
                kind=KIND_CITATION_DOI,
                location=Location(LOC_REFERENCE_LIST),
                matched_text=hit[0],
                span=(0, len(hit[0])),
            ))
    return sorted(detections, key=sort_key)


def detect_citations_by_title(paper_id: str, doc: StructuredDocument,
                              registry: list[DatasetRecord],
                              config: MatcherConfig) -> list[Detection]:
    """Match registry paper titles against the parsed reference entries."""
    detections = []
    for dataset in registry:
        for entry in doc.references:
            if any(
                reference_matches_title(entry.raw, entry.parsed_title, title,
                                        config.title_similarity_threshold)
                for title in dataset.paper_titles
            ):
                detections.append(Detection(
                    paper_id=paper_id,
                    dataset_id=dataset.dataset_id,
                    kind=KIND_CITATION_TITLE,
                    location=Location(LOC_REFERENCE_LIST),
                    matched_text=entry.raw,
                    span=(0, len(entry.raw)),
                ))
                break  # one detection per pair, spans kept as evidence
    return sorted(detections, key=sort_key)


# -- mentions ---------------------------------------------------------------------


def classify_section(heading: str, config: MatcherConfig) -> str:
    """eligible/excluded/unknown; excluded iff the heading names a keyword."""
    if not heading.strip():
        return UNKNOWN
    normalized = " ".join(heading.lower().split())
    for keyword in config.excluded_heading_keywords:
        if keyword in normalized:
            return EXCLUDED
    return ELIGIBLE


def _alias_spans(text: str, alias: str, case_sensitive: bool,
                 word_boundaries: bool) -> list[tuple[int, int]]:
    pattern = re.escape(alias)
    if word_boundaries:
        # a match inside a longer alphanumeric token is not a mention
        pattern = rf"(?<![0-9A-Za-z]){pattern}(?![0-9A-Za-z])"
    flags = 0 if case_sensitive else re.IGNORECASE
    return [m.span() for m in re.finditer(pattern, text, flags)]


def _url_spans(text: str, key: str) -> list[tuple[int, int]]:
    lowered = text.lower()
    spans = []
    start = 0
    while True:
        pos = lowered.find(key, start)
        if pos < 0:
            return spans
        spans.append((pos, pos + len(key)))
        start = pos + 1


def _scan_location(text: str, location: Location, dataset: DatasetRecord,
                   config: MatcherConfig, paper_id: str) -> list[Detection]:
    found = {}
    for alias in dataset.aliases:
        for span in _alias_spans(text, alias.text, alias.case_sensitive,
                                 config.word_boundaries):
            found.setdefault(span, text[span[0]:span[1]])
    for url in dataset.urls:
        for span in _url_spans(text, url_match_key(url)):
            found.setdefault(span, text[span[0]:span[1]])
    return [
        Detection(paper_id=paper_id, dataset_id=dataset.dataset_id,
                  kind=KIND_MENTION, location=location,
                  matched_text=matched, span=span)
        for span, matched in found.items()
    ]


def _mention_targets(source: StructuredDocument | str,
                     config: MatcherConfig) -> list[tuple[Location, str]]:
    if isinstance(source, str):
        return [(Location(LOC_ABSTRACT), source)] if source else []
    targets = []
    if source.abstract:
        targets.append((Location(LOC_ABSTRACT), source.abstract))
    for section in source.sections:
        section.eligibility = classify_section(section.heading, config)
        allowed = section.eligibility == ELIGIBLE or (
            section.eligibility == UNKNOWN and config.unknown_headings_eligible
        )
        if allowed:
            targets.append((Location(LOC_BODY_SECTION, section.heading or None),
                            section.text))
    for caption in source.figure_captions:
        targets.append((Location(LOC_FIGURE_CAPTION), caption.text))
    for caption in source.table_captions:
        targets.append((Location(LOC_TABLE_CAPTION), caption.text))
    for footnote in source.footnotes:
        targets.append((Location(LOC_FOOTNOTE), footnote.text))
    return targets


def detect_mentions(source: StructuredDocument | str, registry: list[DatasetRecord],
                    config: MatcherConfig, paper_id: str = "") -> list[Detection]:
    """Scan all eligible locations; every matched span becomes a Detection.

    ``source`` is a parsed document, or the bare abstract text for papers
    whose full text is unavailable.
    """
    if isinstance(source, StructuredDocument) and not paper_id:
        paper_id = source.paper_id
    detections = []
    for location, text in _mention_targets(source, config):
        for dataset in registry:
            detections.extend(
                _scan_location(text, location, dataset, config, paper_id))
    return sorted(set(detections), key=sort_key)


# -- presence ---------------------------------------------------------------------


def resolve_presence(paper_id: str, detections: list[Detection]) -> dict[str, str]:
    """Per-dataset presence type for one paper; datasets without evidence are absent."""
    cited = set()
    mentioned = set()
    for det in detections:
        if det.paper_id != paper_id:
            raise ValueError(f"detection for {det.paper_id} passed to {paper_id}")
        if det.kind in CITATION_KINDS:
            cited.add(det.dataset_id)
        elif det.kind == KIND_MENTION:
            mentioned.add(det.dataset_id)
    presence = {}
    for dataset_id in sorted(cited | mentioned):
        if dataset_id in cited and dataset_id in mentioned:
            presence[dataset_id] = CITED_AND_MENTIONED
        elif dataset_id in cited:
            presence[dataset_id] = ONLY_CITED
        else:
            presence[dataset_id] = ONLY_MENTIONED
    return presence
