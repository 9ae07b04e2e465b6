"""Venue paper lists from DBLP and per-paper metadata from OpenAlex.

Every remote call runs through :class:`datause.netcache.PoliteClient`, so a
frozen cache replays the whole harvest deterministically.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import asdict, dataclass

from .catalog import DatasetRecord, VenueRecord, normalize_doi
from .netcache import PoliteClient, TransportError

DBLP_API = "https://dblp.org/search/publ/api"
OPENALEX_WORKS = "https://api.openalex.org/works"

ABSTRACT_OPENALEX = "openalex"
ABSTRACT_FULLTEXT = "fulltext"
ABSTRACT_NONE = "none"

FULLTEXT_AVAILABLE = "available"
FULLTEXT_SCRAPED = "scraped"
FULLTEXT_UNAVAILABLE = "unavailable"


class VenueNotFound(Exception):
    pass


class NotInIndex(Exception):
    """The paper could not be located in OpenAlex."""


class AmbiguousTitleMatch(Exception):
    """More than one OpenAlex work ties on the normalized title."""


class DuplicatePosition(ValueError):
    pass


class GapInPositions(ValueError):
    pass


@dataclass
class PaperRecord:
    paper_id: str
    venue_id: str
    year: int
    title: str
    doi: str | None = None
    openalex_id: str | None = None
    abstract_source: str = ABSTRACT_NONE
    abstract_text: str | None = None
    referenced_work_ids: list[str] | None = None
    oa_fulltext_url: str | None = None
    fulltext_status: str = FULLTEXT_UNAVAILABLE

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "PaperRecord":
        return cls(**data)


def reconstruct_abstract(inverted: dict[str, list[int]]) -> str:
    """Rebuild the plain abstract from OpenAlex's word -> positions map."""
    slots: dict[int, str] = {}
    for word, positions in inverted.items():
        for pos in positions:
            if pos in slots:
                raise DuplicatePosition(f"position {pos} assigned twice")
            slots[pos] = word
    if not slots:
        return ""
    if sorted(slots) != list(range(len(slots))):
        raise GapInPositions("positions are not a contiguous range from 0")
    return " ".join(slots[i] for i in range(len(slots)))


def _paper_id_for(key: str | None, title: str, year: int) -> str:
    if key:
        return key.replace("/", "__")
    digest = hashlib.sha1(f"{title}|{year}".encode("utf-8")).hexdigest()
    return f"untracked__{digest[:16]}"


def fetch_venue_papers(venue: VenueRecord, client: PoliteClient,
                       page_size: int = 500) -> list[PaperRecord]:
    """All publications in the venue's DBLP stream, filtered to its year range."""
    hits = []
    offset = 0
    total = None
    while total is None or offset < total:
        body = client.get(DBLP_API, {
            "q": f"streamid:{venue.dblp_stream_key}*",
            "format": "json",
            "h": str(page_size),
            "f": str(offset),
        })
        result = _json(body)["result"]["hits"]
        total = int(result.get("@total", 0))
        page = result.get("hit", [])
        if isinstance(page, dict):  # DBLP collapses single-hit pages
            page = [page]
        hits.extend(page)
        if not page:
            break
        offset += len(page)
    if total == 0:
        raise VenueNotFound(venue.dblp_stream_key)

    lo, hi = venue.year_range
    papers: dict[str, PaperRecord] = {}
    for hit in hits:
        info = hit.get("info", {})
        year = int(info.get("year", 0))
        if year < lo or year > hi:
            continue
        title = info.get("title", "").rstrip(".").strip()
        doi = None
        raw_doi = info.get("doi") or ""
        if not raw_doi and "doi.org/" in (info.get("ee") or ""):
            raw_doi = info["ee"]
        if raw_doi:
            try:
                doi = normalize_doi(raw_doi)
            except ValueError:
                doi = None
        paper_id = _paper_id_for(info.get("key"), title, year)
        papers.setdefault(paper_id, PaperRecord(
            paper_id=paper_id, venue_id=venue.venue_id, year=year,
            title=title, doi=doi,
        ))
    return sorted(papers.values(), key=lambda p: p.paper_id)


def _json(body: bytes) -> dict:
    return json.loads(body.decode("utf-8"))


def normalized_title(title: str) -> str:
    """lowercase, punctuation stripped, whitespace collapsed."""
    return " ".join(re.sub(r"[^0-9a-z]+", " ", title.lower()).split())


def _short_work_id(work_url: str) -> str:
    return work_url.rsplit("/", 1)[-1]


def _lookup_work(paper: PaperRecord, client: PoliteClient) -> dict:
    if paper.doi:
        body = client.get(OPENALEX_WORKS, {"filter": f"doi:{paper.doi}"})
        results = _json(body).get("results", [])
        if not results:
            raise NotInIndex(paper.doi)
        return results[0]
    body = client.get(OPENALEX_WORKS, {"filter": f"title.search:{paper.title}"})
    results = _json(body).get("results", [])
    wanted = normalized_title(paper.title)
    matches = [w for w in results if normalized_title(w.get("title") or "") == wanted]
    if not matches:
        raise NotInIndex(paper.title)
    if len(matches) > 1:
        raise AmbiguousTitleMatch(paper.title)
    return matches[0]


def fetch_work_metadata(paper: PaperRecord, client: PoliteClient) -> PaperRecord:
    """Enrich a paper with OpenAlex references, abstract and open-access link.

    Fields OpenAlex does not provide stay unset rather than defaulting.
    """
    work = _lookup_work(paper, client)
    paper.openalex_id = _short_work_id(work.get("id", "")) or None
    if "referenced_works" in work:
        seen = []
        for ref in work["referenced_works"]:
            short = _short_work_id(ref)
            if short not in seen:
                seen.append(short)
        paper.referenced_work_ids = seen
    inverted = work.get("abstract_inverted_index")
    if inverted:
        paper.abstract_text = reconstruct_abstract(inverted)
        paper.abstract_source = ABSTRACT_OPENALEX
    oa_url = (work.get("open_access") or {}).get("oa_url")
    if not oa_url:
        oa_url = ((work.get("best_oa_location") or {}).get("pdf_url")
                  or (work.get("primary_location") or {}).get("pdf_url"))
    if oa_url:
        paper.oa_fulltext_url = oa_url
    return paper


def resolve_registry_work_ids(
    registry: list[DatasetRecord], client: PoliteClient,
) -> tuple[dict[str, set[str]], list[tuple[str, str]]]:
    """OpenAlex work IDs for every dataset paper DOI, resolved once per run.

    Returns (dataset_id -> work id set, list of (dataset_id, doi) that did not
    resolve; those datasets stay trackable through the title-matching path).
    """
    resolved: dict[str, set[str]] = {}
    unresolved: list[tuple[str, str]] = []
    for dataset in registry:
        ids = set()
        for doi in dataset.paper_dois:
            try:
                body = client.get(OPENALEX_WORKS, {"filter": f"doi:{doi}"})
                results = _json(body).get("results", [])
            except TransportError:
                results = []
            if results:
                ids.add(_short_work_id(results[0].get("id", "")))
            else:
                unresolved.append((dataset.dataset_id, doi))
        resolved[dataset.dataset_id] = ids
    return resolved, unresolved
