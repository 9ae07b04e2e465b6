"""Full-text acquisition and structure extraction.

PDFs come from the OpenAlex open-access link first, then from a pluggable
per-venue scraper; a GROBID service turns them into TEI XML, which is parsed
here into a :class:`StructuredDocument` (abstract, headed sections, captions,
footnotes, reference entries).

Scraper plugin contract: a callable ``(PaperRecord) -> bytes | None``. Config
names a factory as ``"module.path:function"``; the factory receives the
options table and returns the scraper. ``fixture_scraper_factory`` (reads
``<dir>/<paper_id>.pdf``) is the shipped reference implementation.
"""

from __future__ import annotations

import hashlib
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from pathlib import Path

from .catalog import normalize_doi
from .harvester import (
    FULLTEXT_AVAILABLE,
    FULLTEXT_SCRAPED,
    FULLTEXT_UNAVAILABLE,
    PaperRecord,
)
from .netcache import PoliteClient, TransportError

TEI_NS = "http://www.tei-c.org/ns/1.0"

ELIGIBLE = "eligible"
EXCLUDED = "excluded"
UNKNOWN = "unknown"


class MalformedXML(Exception):
    pass


class EmptyBody(Exception):
    """The TEI carried no abstract, sections, captions, footnotes or references."""


class ServiceUnavailable(Exception):
    pass


class ConversionFailed(Exception):
    pass


@dataclass(frozen=True)
class Caption:
    kind: str  # "figure" | "table"
    text: str
    anchor: int  # index of the source element, for traceability


@dataclass(frozen=True)
class Footnote:
    text: str
    anchor: int


@dataclass(frozen=True)
class ReferenceEntry:
    raw: str
    parsed_title: str | None = None
    parsed_doi: str | None = None


@dataclass
class Section:
    heading: str
    paragraphs: tuple[str, ...]
    eligibility: str = UNKNOWN  # filled in by the detector

    @property
    def text(self) -> str:
        return "\n".join(self.paragraphs)


@dataclass
class StructuredDocument:
    paper_id: str
    abstract: str | None = None
    sections: list[Section] = field(default_factory=list)
    figure_captions: list[Caption] = field(default_factory=list)
    table_captions: list[Caption] = field(default_factory=list)
    footnotes: list[Footnote] = field(default_factory=list)
    references: list[ReferenceEntry] = field(default_factory=list)


# -- acquisition ---------------------------------------------------------------


def fixture_scraper_factory(options: dict):
    """Scraper that serves PDFs from a directory, keyed by paper_id."""
    root = Path(options["dir"])

    def scrape(paper: PaperRecord) -> bytes | None:
        path = root / f"{paper.paper_id}.pdf"
        return path.read_bytes() if path.exists() else None

    return scrape


def load_scraper_plugin(spec: str, options: dict):
    import importlib

    module_name, _, func_name = spec.partition(":")
    factory = getattr(importlib.import_module(module_name), func_name)
    return factory(options)


def _scraped_path(pdf_dir: Path, paper_id: str) -> Path:
    return pdf_dir / f"{paper_id}.scraped.pdf"


def pdf_path(pdf_dir: Path, paper_id: str) -> Path:
    return pdf_dir / f"{paper_id}.pdf"


def acquire_pdf(paper: PaperRecord, client: PoliteClient, pdf_dir: Path,
                scraper=None, always_scrape: bool = False) -> PaperRecord:
    """Fetch the paper's PDF; failures degrade to fulltext_status=unavailable."""
    pdf_dir = Path(pdf_dir)
    pdf_dir.mkdir(parents=True, exist_ok=True)
    oa_bytes = None
    if paper.oa_fulltext_url:
        try:
            body = client.get(paper.oa_fulltext_url)
            if body.startswith(b"%PDF"):  # landing pages are not full texts
                oa_bytes = body
        except TransportError:
            oa_bytes = None

    scraped_bytes = None
    if scraper is not None and (oa_bytes is None or always_scrape):
        scraped_bytes = scraper(paper)

    main = pdf_path(pdf_dir, paper.paper_id)
    if oa_bytes is not None:
        main.write_bytes(oa_bytes)
        paper.fulltext_status = FULLTEXT_AVAILABLE
        if scraped_bytes is not None:
            _scraped_path(pdf_dir, paper.paper_id).write_bytes(scraped_bytes)
    elif scraped_bytes is not None:
        main.write_bytes(scraped_bytes)
        paper.fulltext_status = FULLTEXT_SCRAPED
    else:
        paper.fulltext_status = FULLTEXT_UNAVAILABLE
    return paper


@dataclass(frozen=True)
class DedupeEntry:
    paper_id: str
    action: str  # "dropped_identical" | "kept_scraped" | "kept_oa"


def dedupe_pdfs(pdf_dir: Path, prefer_scraped: bool = True) -> list[DedupeEntry]:
    """Collapse OA+scraped pairs to one artifact per paper.

    Identical digests keep one copy; on a mismatch the scraped copy wins by
    default (it is the venue-canonical fetch). Never removes the last artifact.
    """
    report = []
    for scraped in sorted(Path(pdf_dir).glob("*.scraped.pdf")):
        paper_id = scraped.name[: -len(".scraped.pdf")]
        main = pdf_path(Path(pdf_dir), paper_id)
        if not main.exists():
            scraped.replace(main)
            continue
        if hashlib.sha256(main.read_bytes()).digest() == hashlib.sha256(
                scraped.read_bytes()).digest():
            scraped.unlink()
            report.append(DedupeEntry(paper_id, "dropped_identical"))
        elif prefer_scraped:
            scraped.replace(main)
            report.append(DedupeEntry(paper_id, "kept_scraped"))
        else:
            scraped.unlink()
            report.append(DedupeEntry(paper_id, "kept_oa"))
    return report


# -- GROBID conversion ---------------------------------------------------------


def convert_to_tei(pdf: Path, client: PoliteClient, grobid_url: str,
                   tei_path: Path) -> Path:
    """Convert one PDF via GROBID; responses are cached by PDF digest."""
    data = Path(pdf).read_bytes()
    digest = hashlib.sha256(data).hexdigest()
    endpoint = grobid_url.rstrip("/") + "/api/processFulltextDocument"
    try:
        body = client.post_multipart(endpoint, files={"input": data},
                                     cache_params={"digest": digest})
    except TransportError as exc:
        if exc.status is not None and 400 <= exc.status < 500:
            raise ConversionFailed(f"{pdf}: HTTP {exc.status}") from exc
        raise ServiceUnavailable(str(exc)) from exc
    text = body.decode("utf-8", errors="replace")
    if "<TEI" not in text:
        raise ConversionFailed(f"{pdf}: response is not TEI")
    tei_path = Path(tei_path)
    tei_path.parent.mkdir(parents=True, exist_ok=True)
    tei_path.write_text(text, encoding="utf-8")
    return tei_path


# -- TEI parsing -----------------------------------------------------------------


def _tag(name: str) -> str:
    return f"{{{TEI_NS}}}{name}"


def _flat_text(elem) -> str:
    return " ".join("".join(elem.itertext()).split())


def parse_tei(tei_xml: str, paper_id: str = "") -> StructuredDocument:
    """Deterministic, total extraction of the document structure from TEI."""
    try:
        root = ET.fromstring(tei_xml)
    except ET.ParseError as exc:
        raise MalformedXML(str(exc)) from exc

    doc = StructuredDocument(paper_id=paper_id)

    abstract = root.find(f".//{_tag('teiHeader')}//{_tag('abstract')}")
    if abstract is not None:
        text = _flat_text(abstract)
        doc.abstract = text or None

    body = root.find(f".//{_tag('text')}/{_tag('body')}")
    if body is not None:
        for div in body.iter(_tag("div")):
            head = div.find(_tag("head"))
            heading = _flat_text(head) if head is not None else ""
            paragraphs = tuple(
                t for t in (_flat_text(p) for p in div.findall(_tag("p"))) if t
            )
            if paragraphs:
                doc.sections.append(Section(heading=heading, paragraphs=paragraphs))
        for anchor, figure in enumerate(body.iter(_tag("figure"))):
            desc = figure.find(_tag("figDesc"))
            text = _flat_text(desc) if desc is not None else ""
            if not text:
                continue
            kind = "table" if figure.get("type") == "table" else "figure"
            caption = Caption(kind=kind, text=text, anchor=anchor)
            (doc.table_captions if kind == "table" else doc.figure_captions).append(caption)

    for anchor, note in enumerate(root.iter(_tag("note"))):
        if note.get("place") != "foot":
            continue
        text = _flat_text(note)
        if text:
            doc.footnotes.append(Footnote(text=text, anchor=anchor))

    for bibl in root.findall(f".//{_tag('back')}//{_tag('listBibl')}/{_tag('biblStruct')}"):
        raw = _flat_text(bibl)
        if not raw:
            continue
        title = None
        for level in ("a", "m"):
            node = bibl.find(f".//{_tag('title')}[@level='{level}']")
            if node is not None and _flat_text(node):
                title = _flat_text(node)
                break
        doi = None
        for idno in bibl.iter(_tag("idno")):
            if (idno.get("type") or "").upper() == "DOI" and idno.text:
                try:
                    doi = normalize_doi(idno.text)
                except ValueError:
                    doi = None
                break
        doc.references.append(ReferenceEntry(raw=raw, parsed_title=title, parsed_doi=doi))

    if (doc.abstract is None and not doc.sections and not doc.figure_captions
            and not doc.table_captions and not doc.footnotes and not doc.references):
        raise EmptyBody(paper_id or "document")
    return doc
