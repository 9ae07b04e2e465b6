#!/usr/bin/env python3
"""Build the replay mini-corpus under data/mini_corpus/.

Produces the registry/venue inputs, a frozen response cache (DBLP listings,
OpenAlex works, PDF downloads, GROBID conversions), the scraper fixture
directory, and plan.json: the hand-written ground truth (per-paper group and
presence) that the corpus was constructed to satisfy. plan.json is what the
acceptance suite checks the pipeline outputs against, independently of any
detector code.

Usage: python scripts/make_mini_corpus.py
"""

import hashlib
import json
import shutil
import sys
from dataclasses import dataclass, field
from pathlib import Path
from xml.sax.saxutils import escape

REPO = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(REPO / "src"))

from datause.harvester import DBLP_API, OPENALEX_WORKS  # noqa: E402
from datause.netcache import PoliteClient  # noqa: E402

CORPUS = REPO / "data" / "mini_corpus"

GROBID_URL = "http://grobid.replay.local:8070"
PDF_HOST = "https://papers.openmirror.example"

TITLES = {
    "acdc": "Deep Learning Techniques for Automatic MRI Cardiac Multi-structures"
            " Segmentation and Diagnosis: Is the Problem Solved?",
    "brats": "The Multimodal Brain Tumor Image Segmentation Benchmark (BRATS)",
    "drive": "Ridge-based vessel segmentation in color images of the retina",
    "camelyon": "1399 H&E-stained sentinel lymph node sections of breast cancer"
                " patients: the CAMELYON dataset",
    "chexpert": "CheXpert: A Large Chest Radiograph Dataset with Uncertainty"
                " Labels and Expert Comparison",
}

WORK_IDS = {
    "acdc": "W7000001",
    "brats": "W7000002",
    "drive": "W7000003",
    "camelyon": "W7000004",
    "chexpert": "W7000005",
}

DATASET_ROWS = [
    "acdc|ACDC||https://acdc-challenge.example.org|{t[acdc]}"
    "|10.1109/tmi.2018.2837502|segmentation|Cardiac|MRI|2017",
    "brats|BRATS|BraTS[cs]||{t[brats]}"
    "|10.1109/tmi.2014.2377694|segmentation|Brain|MR|2014",
    "drive|DRIVE||https://drive-vessels.example.org|{t[drive]}"
    "|10.1109/tmi.2004.825627|segmentation|Eye|Fundus|2004",
    "camelyon|CAMELYON||https://camelyon17.grand-challenge.org|{t[camelyon]}"
    "|10.1093/gigascience/giy065|classification|Breast|whole-slide images|2018",
    "chexpert|CheXpert||https://chexpert.example.org/data|{t[chexpert]}"
    "|10.1609/aaai.v33i01.3301590|classification|Chest|X-rays|2019",
]

REGISTRY_DOIS = {
    "acdc": "10.1109/tmi.2018.2837502",
    "brats": "10.1109/tmi.2014.2377694",
    "drive": "10.1109/tmi.2004.825627",
    "camelyon": "10.1093/gigascience/giy065",
    "chexpert": "10.1609/aaai.v33i01.3301590",
}

INTRO = ("Quantitative analysis of medical scans supports diagnosis and"
         " follow-up in routine practice.")
METHOD = ("We train a convolutional encoder-decoder on expert annotations and"
          " tune it with standard augmentation.")
RESULTS = ("Mean overlap improves over the baseline by a clear margin across"
           " all folds.")
RELATED = ("Earlier systems relied on atlas registration and handcrafted"
           " intensity features.")
DISCUSSION = ("Limitations include scanner variability and the modest cohort"
              " size.")

FILLER_REFS = [
    (None, "Fillerman J. and Placeholder K. A broad look at image analysis."
           " Journal of Examples, 2015."),
    (None, "Sample R. Augmentation strategies revisited. In Proceedings, 2018."),
]


def mangle_title(title: str, positions: tuple[int, ...]) -> str:
    """Deterministic letter substitutions; stays within 0.9 similarity."""
    chars = list(title)
    letters = [i for i, ch in enumerate(chars) if ch.isalpha()]
    for offset, pos in enumerate(positions):
        index = letters[pos % len(letters)]
        original = chars[index].lower()
        chars[index] = "z" if original != "z" else "q"
    return "".join(chars)


def cite(dataset: str, mangled: tuple[int, ...] = ()) -> tuple[str, str]:
    title = TITLES[dataset]
    if mangled:
        title = mangle_title(title, mangled)
    return (title, f"Creator {dataset.title()} et al. 20{10 + len(dataset)}.")


@dataclass
class Tei:
    abstract: str | None = None
    method_extra: str = ""
    results_extra: str = ""
    related_extra: str = ""
    discussion_extra: str = ""
    figures: tuple[str, ...] = ()
    tables: tuple[str, ...] = ()
    footnotes: tuple[str, ...] = ()
    refs: tuple[tuple[str | None, str], ...] = ()


@dataclass
class Paper:
    pid: str
    venue: str
    year: int
    title: str
    doi: str | None
    # OpenAlex payload pieces; None = the paper is not in the index
    oa_abstract: str | None = None
    oa_refs: tuple[str, ...] | None = None  # None = referenced_works absent
    oa_pdf: bool = False
    ambiguous: bool = False
    scrape: bool = False
    tei: Tei | None = None
    oa_variant_tei: Tei | None = None  # recorded for a dropped duplicate PDF
    # hand-written ground truth
    group: str = "group1"
    presence: dict = field(default_factory=dict)

    @property
    def dblp_key(self) -> str:
        return f"conf/{self.venue}/{self.pid.capitalize()}{self.year % 100:02d}"

    @property
    def paper_id(self) -> str:
        return self.dblp_key.replace("/", "__")


def build_papers() -> list[Paper]:
    papers = [
        Paper("p01", "miccai", 2013, "Ventricle delineation with cascaded networks",
              "10.5000/mini.p01", oa_abstract="We report ventricle overlap scores.",
              oa_refs=("W7000001", "W9100001"), oa_pdf=True,
              tei=Tei(method_extra=" We evaluate on the ACDC cohort.",
                      refs=(cite("acdc"),) + tuple(FILLER_REFS)),
              group="group1", presence={"acdc": "cited_and_mentioned"}),
        Paper("p02", "miccai", 2013, "Tumor boundary refinement study",
              "10.5000/mini.p02", oa_abstract="A refinement study for boundaries.",
              oa_refs=("W9100002",), oa_pdf=True,
              tei=Tei(tables=("Dice scores on BRATS volumes",),
                      refs=((None, "Proceedings note mentioning the BRATS"
                                   " challenge series, 2016."),) + tuple(FILLER_REFS)),
              group="group1", presence={"brats": "only_mentioned"}),
        Paper("p03", "miccai", 2014, "Lesion load estimation in brain MR",
              "10.5000/mini.p03", oa_abstract="Lesion load estimation results.",
              oa_refs=("W7000002", "W9100003"), oa_pdf=True,
              tei=Tei(related_extra=" The BRATS benchmark shaped this line of"
                                    " work.",
                      refs=(cite("brats"),) + tuple(FILLER_REFS)),
              group="group1", presence={"brats": "only_cited"}),
        Paper("p04", "miccai", 2015, "Cardiac structure segmentation revisited",
              "10.5000/mini.p04",
              oa_abstract="We revisit segmentation and DRIVE vessel maps.",
              oa_refs=("W9100004",), oa_pdf=True,
              tei=Tei(figures=("Qualitative ACDC results",),
                      refs=(cite("acdc", mangled=(5, 29, 61)),) + tuple(FILLER_REFS)),
              group="group1", presence={"acdc": "cited_and_mentioned",
                                        "drive": "only_mentioned"}),
        Paper("p05", "miccai", 2015, "Metastasis screening pipeline",
              "10.5000/mini.p05", oa_abstract="A screening pipeline description.",
              oa_refs=("W9100005",), oa_pdf=True,
              tei=Tei(footnotes=("Data available at"
                                 " https://camelyon17.grand-challenge.org",),
                      refs=tuple(FILLER_REFS)),
              group="group1", presence={"camelyon": "only_mentioned"}),
        Paper("p06", "miccai", 2016, "Radiograph triage at admission",
              "10.5000/mini.p06",
              oa_abstract="Triage experiments use the CheXpert release.",
              oa_refs=("W7000005",), oa_pdf=True,
              tei=Tei(refs=(cite("chexpert"),) + tuple(FILLER_REFS)),
              group="group1", presence={"chexpert": "cited_and_mentioned"}),
        Paper("p07", "miccai", 2016, "Architecture search for dense prediction",
              "10.5000/mini.p07", oa_abstract="A search over dense predictors.",
              oa_refs=("W9100007",), oa_pdf=True,
              tei=Tei(method_extra=" We propose ACDCNet for this task. A drive"
                                   " to annotate more data persists.",
                      discussion_extra=" ACDC remains a popular benchmark"
                                       " elsewhere.",
                      refs=tuple(FILLER_REFS)),
              group="group1", presence={}),
        Paper("p08", "miccai", 2017, "Retinal vessel connectivity priors",
              "10.5000/mini.p08", oa_abstract="Connectivity priors for vessels.",
              oa_refs=("W7000003",), oa_pdf=True,
              tei=Tei(method_extra=" Evaluation uses DRIVE fundus photographs.",
                      refs=(cite("drive"),) + tuple(FILLER_REFS)),
              group="group1", presence={"drive": "cited_and_mentioned"}),
        Paper("p09", "miccai", 2018, "Motion compensation for cine imaging",
              "10.5000/mini.p09", oa_abstract="Compensation for cine sequences.",
              oa_refs=("W7000001",), oa_pdf=True,
              tei=Tei(related_extra=" Several studies report results on ACDC.",
                      refs=(cite("acdc"),) + tuple(FILLER_REFS)),
              group="group1", presence={"acdc": "only_cited"}),
        Paper("p10", "miccai", 2019, "Joint tumor and structure labeling",
              "10.5000/mini.p10", oa_abstract="Joint labeling of two targets.",
              oa_refs=("W7000002",), oa_pdf=True,
              tei=Tei(method_extra=" Experiments cover BRATS and ACDC subjects.",
                      refs=(cite("brats"),) + tuple(FILLER_REFS)),
              group="group1", presence={"brats": "cited_and_mentioned",
                                        "acdc": "only_mentioned"}),
        Paper("p11", "miccai", 2020, "Label-efficient chest classification",
              "10.5000/mini.p11", oa_abstract=None,
              oa_refs=("W9100011",), oa_pdf=True,
              tei=Tei(abstract="Few labels suffice on CheXpert images.",
                      refs=tuple(FILLER_REFS)),
              group="group1", presence={"chexpert": "only_mentioned"}),
        Paper("p12", "miccai", 2021, "Slide-level attention pooling",
              "10.5000/mini.p12", oa_abstract="Attention pooling for slides.",
              oa_refs=("W9100012",), oa_pdf=True,
              tei=Tei(tables=("AUC per CAMELYON center",),
                      refs=(cite("camelyon"),) + tuple(FILLER_REFS)),
              group="group1", presence={"camelyon": "cited_and_mentioned"}),
        Paper("p13", "miccai", 2022, "Cross-cohort cardiac generalization",
              "10.5000/mini.p13", oa_abstract="Generalization across cohorts.",
              oa_refs=("W7000001", "W7000002"), oa_pdf=True,
              tei=Tei(footnotes=("The ACDC release notes describe the splits.",),
                      refs=tuple(FILLER_REFS)),
              group="group1", presence={"acdc": "cited_and_mentioned",
                                        "brats": "only_cited"}),
        Paper("p14", "miccai", 2023, "Topology-aware vessel losses",
              "10.5000/mini.p14", oa_abstract="Topology-aware loss functions.",
              oa_refs=("W9100014",), oa_pdf=True,
              tei=Tei(figures=("Centerline recall on DRIVE",),
                      refs=(cite("drive"),) + tuple(FILLER_REFS)),
              group="group1", presence={"drive": "cited_and_mentioned"}),
        # -- group 2: no full text, OpenAlex abstract only --------------------
        Paper("p15", "miccai", 2015, "Ejection fraction from short-axis stacks",
              "10.5000/mini.p15",
              oa_abstract="We estimate function on ACDC recordings.",
              oa_refs=("W7000001",), oa_pdf=False,
              group="group2", presence={"acdc": "cited_and_mentioned"}),
        Paper("p16", "miccai", 2016, "Glioma grading without biopsies",
              "10.5000/mini.p16",
              oa_abstract="Grading gliomas with BRATS imagery only.",
              oa_refs=("W9100016",), oa_pdf=False,
              group="group2", presence={"brats": "only_mentioned"}),
        Paper("p17", "miccai", 2017, "Microvasculature statistics at scale",
              "10.5000/mini.p17", oa_abstract="Population statistics of vessels.",
              oa_refs=("W7000003",), oa_pdf=False,
              group="group2", presence={"drive": "only_cited"}),
        Paper("p18", "miccai", 2019, "Reading-room workflow simulation",
              "10.5000/mini.p18",
              oa_abstract="Simulated workflows rely on CheXpert labels.",
              oa_refs=("W7000005", "W7000001"), oa_pdf=False,
              group="group2", presence={"chexpert": "cited_and_mentioned",
                                        "acdc": "only_cited"}),
        Paper("p19", "miccai", 2021, "Metastasis detection reproducibility",
              "10.5000/mini.p19",
              oa_abstract="Artifacts at https://camelyon17.grand-challenge.org"
                          " support replication.",
              oa_refs=("W9100019",), oa_pdf=False,
              group="group2", presence={"camelyon": "only_mentioned"}),
        Paper("p20", "miccai", 2023, "Curriculum schedules for dense tasks",
              "10.5000/mini.p20", oa_abstract="Curriculum schedules compared.",
              oa_refs=("W9100020",), oa_pdf=False,
              group="group2", presence={}),
        Paper("p21", "miccai", 2018, "Annotation cost accounting",
              "10.5000/mini.p21",
              oa_abstract="Costs are reported for ACDC-style labeling.",
              oa_refs=None, oa_pdf=False,
              group="group2", presence={"acdc": "only_mentioned"}),
        Paper("p22", "miccai", 2020, "Archive consolidation report",
              "10.5000/mini.p22", oa_abstract=None,
              oa_refs=("W7000002",), oa_pdf=False,
              group="group2", presence={"brats": "only_cited"}),
        # -- discarded ---------------------------------------------------------
        Paper("p23", "miccai", 2019, "Withdrawn demonstration abstract",
              "10.5000/mini.p23", oa_abstract=None, oa_refs=None, oa_pdf=False,
              group="discarded", presence={}),
        Paper("p24", "miccai", 2020, "Shared title collision paper",
              None, ambiguous=True,
              group="discarded", presence={}),
        # -- MIDL: scraped full texts -----------------------------------------
        Paper("p25", "midl", 2019, "Lightweight tumor detectors",
              "10.5000/mini.p25", oa_abstract="Lightweight detector designs.",
              oa_refs=None, oa_pdf=False, scrape=True,
              tei=Tei(refs=(cite("brats"),) + tuple(FILLER_REFS)),
              group="group3", presence={"brats": "only_cited"}),
        Paper("p26", "midl", 2020, "Semi-supervised cardiac contours",
              "10.5000/mini.p26", oa_abstract="Semi-supervision for contours.",
              oa_refs=None, oa_pdf=False, scrape=True,
              tei=Tei(method_extra=" Contours are scored against ACDC truth.",
                      refs=(cite("acdc", mangled=(3, 17, 41, 73)),)
                      + tuple(FILLER_REFS)),
              group="group3", presence={"acdc": "cited_and_mentioned"}),
        Paper("p27", "midl", 2021, "Calibration of vessel segmenters",
              "10.5000/mini.p27", oa_abstract="Calibration study of segmenters.",
              oa_refs=None, oa_pdf=False, scrape=True,
              tei=Tei(tables=("Reliability diagram bins for DRIVE",),
                      refs=tuple(FILLER_REFS)),
              group="group3", presence={"drive": "only_mentioned"}),
        Paper("p28", "midl", 2022, "Stain-invariant embeddings",
              "10.5000/mini.p28", oa_abstract="Invariant embeddings for stains.",
              oa_refs=None, oa_pdf=False, scrape=True,
              tei=Tei(footnotes=("See https://camelyon17.grand-challenge.org"
                                 " for the acquisition protocol.",),
                      refs=(cite("camelyon"),) + tuple(FILLER_REFS)),
              group="group3", presence={"camelyon": "cited_and_mentioned"}),
        # -- MIDL with both OA and scraped copies ------------------------------
        Paper("p29", "midl", 2022, "Report-supervised pretraining",
              "10.5000/mini.p29", oa_abstract="Pretraining from reports.",
              oa_refs=("W7000005",), oa_pdf=True, scrape=True,
              tei=Tei(method_extra=" Fine-tuning uses CheXpert studies.",
                      refs=tuple(FILLER_REFS)),
              group="group1", presence={"chexpert": "cited_and_mentioned"}),
        Paper("p30", "midl", 2023, "Uncertainty for screening programs",
              "10.5000/mini.p30", oa_abstract="Uncertainty in screening.",
              oa_refs=("W7000003",), oa_pdf=True, scrape=True,
              tei=Tei(method_extra=" Screening thresholds are set on DRIVE.",
                      refs=tuple(FILLER_REFS)),
              oa_variant_tei=Tei(refs=tuple(FILLER_REFS)),
              group="group1", presence={"drive": "cited_and_mentioned"}),
    ]
    assert len(papers) == 30
    return papers


# -- artifact builders -------------------------------------------------------------


def make_pdf(paper_id: str, variant: str) -> bytes:
    body = f"{paper_id}:{variant}".encode()
    return (b"%PDF-1.4\n1 0 obj\n<< /Type /Catalog >>\nendobj\n% " + body
            + b"\ntrailer\n<<>>\n%%EOF\n")


def invert_abstract(text: str) -> dict:
    inverted = {}
    for pos, word in enumerate(text.split()):
        inverted.setdefault(word, []).append(pos)
    return inverted


def tei_xml(plan: Tei) -> bytes:
    parts = ['<TEI xmlns="http://www.tei-c.org/ns/1.0">', "<teiHeader><profileDesc>"]
    if plan.abstract:
        parts.append(f"<abstract><p>{escape(plan.abstract)}</p></abstract>")
    parts.append("</profileDesc></teiHeader><text><body>")
    sections = [
        ("1 Introduction", INTRO),
        ("2 Method", METHOD + plan.method_extra),
        ("3 Results", RESULTS + plan.results_extra),
        ("4 Related Work", RELATED + plan.related_extra),
        ("5 Discussion", DISCUSSION + plan.discussion_extra),
    ]
    for heading, text in sections:
        parts.append(f"<div><head>{escape(heading)}</head>"
                     f"<p>{escape(text)}</p></div>")
    for caption in plan.figures:
        parts.append(f"<figure><head>Figure</head>"
                     f"<figDesc>{escape(caption)}</figDesc></figure>")
    for caption in plan.tables:
        parts.append(f'<figure type="table"><head>Table</head>'
                     f"<figDesc>{escape(caption)}</figDesc></figure>")
    for note in plan.footnotes:
        parts.append(f'<note place="foot">{escape(note)}</note>')
    parts.append("</body><back><div><listBibl>")
    for title, trailer in plan.refs:
        parts.append("<biblStruct>")
        if title:
            parts.append(f'<analytic><title level="a">{escape(title)}</title>'
                         "</analytic>")
        parts.append(f"<monogr></monogr><note>{escape(trailer)}</note>")
        parts.append("</biblStruct>")
    parts.append("</listBibl></div></back></text></TEI>")
    return "".join(parts).encode("utf-8")


def dblp_payload(hits: list[dict]) -> bytes:
    return json.dumps({
        "result": {"hits": {"@total": str(len(hits)), "@sent": str(len(hits)),
                            "hit": [{"info": info} for info in hits]}}
    }).encode()


def openalex_work(paper: Paper) -> dict:
    work = {"id": f"https://openalex.org/W8{paper.pid[1:]}000",
            "title": paper.title}
    if paper.oa_abstract is not None:
        work["abstract_inverted_index"] = invert_abstract(paper.oa_abstract)
    if paper.oa_refs is not None:
        work["referenced_works"] = [f"https://openalex.org/{w}"
                                    for w in paper.oa_refs]
    if paper.oa_pdf:
        work["open_access"] = {"oa_url": f"{PDF_HOST}/{paper.paper_id}.pdf"}
    return work


def main() -> int:
    papers = build_papers()
    if CORPUS.exists():
        shutil.rmtree(CORPUS)
    CORPUS.mkdir(parents=True)

    (CORPUS / "datasets.csv").write_text(
        "dataset_id|name|aliases|urls|paper_titles|paper_dois|task|organ"
        "|modality|year\n"
        + "\n".join(row.format(t=TITLES) for row in DATASET_ROWS) + "\n",
        encoding="utf-8")
    (CORPUS / "venues.csv").write_text(
        "venue_id|dblp_stream_key|display_name|years\n"
        "miccai|conf/miccai|MICCAI|2013-2023\n"
        "midl|conf/midl|MIDL|2019-2023\n", encoding="utf-8")
    (CORPUS / "run.toml").write_text(
        "[inputs]\n"
        'datasets = "datasets.csv"\n'
        'venues = "venues.csv"\n\n'
        "[http]\n"
        "retries = 0\n"
        "spacing_ms = 0\n\n"
        "[grobid]\n"
        f'url = "{GROBID_URL}"\n\n'
        "[scraper]\n"
        'plugin = "datause.fulltext:fixture_scraper_factory"\n'
        'always_scrape = ["midl"]\n\n'
        "[scraper.options]\n"
        'dir = "scraped_pdfs"\n\n'
        "[detector]\n"
        "title_similarity_threshold = 0.9\n", encoding="utf-8")

    cache = PoliteClient(CORPUS / "cache")

    # DBLP listings: one page per venue; one extra out-of-range MICCAI hit
    for venue_key, venue in (("conf/miccai", "miccai"), ("conf/midl", "midl")):
        hits = []
        for paper in papers:
            if paper.venue != venue:
                continue
            info = {"key": paper.dblp_key, "title": paper.title + ".",
                    "year": str(paper.year)}
            if paper.doi:
                info["doi"] = paper.doi.upper()
            hits.append(info)
        if venue == "miccai":
            hits.append({"key": "conf/miccai/Outside12",
                         "title": "Pre-range workshop note.", "year": "2012",
                         "doi": "10.5000/mini.outside"})
        cache.cache_store("GET", DBLP_API,
                          {"q": f"streamid:{venue_key}*", "format": "json",
                           "h": "500", "f": "0"},
                          200, dblp_payload(hits))

    # OpenAlex: per-paper lookups plus the registry DOI resolutions
    for paper in papers:
        if paper.ambiguous:
            works = [{"id": "https://openalex.org/W5550001", "title": paper.title},
                     {"id": "https://openalex.org/W5550002",
                      "title": paper.title.lower()}]
            cache.cache_store("GET", OPENALEX_WORKS,
                              {"filter": f"title.search:{paper.title}"},
                              200, json.dumps({"results": works}).encode())
            continue
        results = [] if paper.pid == "p23" else [openalex_work(paper)]
        cache.cache_store("GET", OPENALEX_WORKS,
                          {"filter": f"doi:{paper.doi}"},
                          200, json.dumps({"results": results}).encode())
    for dataset, doi in REGISTRY_DOIS.items():
        payload = {"results": [{"id": f"https://openalex.org/{WORK_IDS[dataset]}",
                                "title": TITLES[dataset]}]}
        cache.cache_store("GET", OPENALEX_WORKS, {"filter": f"doi:{doi}"},
                          200, json.dumps(payload).encode())

    # PDFs: OA downloads into the cache, scraped copies into the fixture dir
    scraped_dir = CORPUS / "scraped_pdfs"
    scraped_dir.mkdir()
    for paper in papers:
        oa_bytes = scraped_bytes = None
        if paper.oa_pdf:
            # p29 ships identical copies (dedupe drops one); p30 differs
            variant = "scraped" if paper.pid == "p29" else "oa"
            oa_bytes = make_pdf(paper.paper_id, variant)
            cache.cache_store("GET", f"{PDF_HOST}/{paper.paper_id}.pdf", {},
                              200, oa_bytes)
        if paper.scrape:
            scraped_bytes = make_pdf(paper.paper_id, "scraped")
            (scraped_dir / f"{paper.paper_id}.pdf").write_bytes(scraped_bytes)

        # GROBID responses, keyed by the digest of whichever bytes survive
        endpoint = GROBID_URL + "/api/processFulltextDocument"
        if paper.tei is not None:
            kept = scraped_bytes if scraped_bytes is not None else oa_bytes
            digest = hashlib.sha256(kept).hexdigest()
            cache.cache_store("POST", endpoint, {"digest": digest}, 200,
                              tei_xml(paper.tei))
        if paper.oa_variant_tei is not None and oa_bytes is not None:
            digest = hashlib.sha256(oa_bytes).hexdigest()
            cache.cache_store("POST", endpoint, {"digest": digest}, 200,
                              tei_xml(paper.oa_variant_tei))

    plan = {
        "papers": [
            {"paper_id": paper.paper_id, "venue": paper.venue,
             "year": paper.year, "group": paper.group,
             "presence": paper.presence}
            for paper in papers
        ]
    }
    (CORPUS / "plan.json").write_text(json.dumps(plan, indent=2, sort_keys=True)
                                      + "\n", encoding="utf-8")

    n_cached = len(list((CORPUS / "cache").rglob("*.json")))
    print(f"mini corpus: {len(papers)} papers, {n_cached} cached responses")
    return 0


if __name__ == "__main__":
    sys.exit(main())
