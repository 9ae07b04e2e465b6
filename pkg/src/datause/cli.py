"""Pipeline orchestration: composable stage subcommands plus the annotation server.

Each stage reads its predecessor's on-disk artifacts (papers.json, pdfs/,
tei/, detections.csv, ...), so stages can be re-run independently; ``all``
chains them in order. Exit codes: 0 success, 1 stage failure (a JSON error
summary goes to stderr), 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import analyzer, catalog, detector, fulltext, harvester, reporter
from .config import ConfigMissing, PipelineConfig, load_config
from .netcache import PoliteClient

STAGES = ("harvest", "fetch-fulltext", "convert", "detect", "analyze", "report")


class StageInputMissing(Exception):
    def __init__(self, artifact: Path | str):
        super().__init__(f"missing stage input: {artifact}")
        self.artifact = str(artifact)


def _client(cfg: PipelineConfig) -> PoliteClient:
    return PoliteClient(cfg.cache_dir, config=cfg.http, replay=cfg.replay)


def _papers_path(cfg: PipelineConfig) -> Path:
    return cfg.workdir / "papers.json"


def _load_papers(cfg: PipelineConfig) -> list[harvester.PaperRecord]:
    path = _papers_path(cfg)
    if not path.exists():
        raise StageInputMissing(path)
    data = json.loads(path.read_text(encoding="utf-8"))
    return [harvester.PaperRecord.from_dict(entry) for entry in data]


def _save_papers(cfg: PipelineConfig, papers: list[harvester.PaperRecord]) -> None:
    cfg.workdir.mkdir(parents=True, exist_ok=True)
    payload = [p.to_dict() for p in sorted(papers, key=lambda p: p.paper_id)]
    _papers_path(cfg).write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _map_workers(cfg: PipelineConfig, func, items):
    if cfg.workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        return list(pool.map(func, items))


# -- stages ---------------------------------------------------------------------


def stage_harvest(cfg: PipelineConfig) -> dict:
    registry = catalog.load_dataset_registry(cfg.datasets_csv)
    venues = catalog.load_venue_list(cfg.venues_csv)
    client = _client(cfg)
    papers: list[harvester.PaperRecord] = []
    for venue in venues:
        papers.extend(harvester.fetch_venue_papers(venue, client))

    skipped = []

    def enrich(paper: harvester.PaperRecord) -> harvester.PaperRecord:
        if not paper.doi and not paper.title:
            return paper
        try:
            return harvester.fetch_work_metadata(paper, client)
        except (harvester.NotInIndex, harvester.AmbiguousTitleMatch) as exc:
            skipped.append((paper.paper_id, type(exc).__name__))
            return paper

    papers = _map_workers(cfg, enrich, papers)
    _save_papers(cfg, papers)
    return {"papers": len(papers), "not_in_index": len(skipped),
            "datasets": len(registry)}


def stage_fetch_fulltext(cfg: PipelineConfig) -> dict:
    papers = _load_papers(cfg)
    client = _client(cfg)
    scraper = None
    if cfg.scraper_plugin:
        scraper = fulltext.load_scraper_plugin(cfg.scraper_plugin,
                                               cfg.scraper_options)

    def acquire(paper: harvester.PaperRecord) -> harvester.PaperRecord:
        return fulltext.acquire_pdf(
            paper, client, cfg.pdf_dir, scraper=scraper,
            always_scrape=paper.venue_id in cfg.always_scrape_venues)

    papers = _map_workers(cfg, acquire, papers)
    report = fulltext.dedupe_pdfs(cfg.pdf_dir, prefer_scraped=cfg.prefer_scraped)
    (cfg.workdir / "dedupe.json").write_text(
        json.dumps([{"paper_id": e.paper_id, "action": e.action} for e in report],
                   indent=2) + "\n", encoding="utf-8")
    _save_papers(cfg, papers)
    acquired = sum(1 for p in papers
                   if p.fulltext_status != harvester.FULLTEXT_UNAVAILABLE)
    return {"pdfs": acquired, "deduped": len(report)}


def stage_convert(cfg: PipelineConfig) -> dict:
    papers = _load_papers(cfg)
    if not cfg.pdf_dir.exists():
        raise StageInputMissing(cfg.pdf_dir)
    client = _client(cfg)

    def convert(paper: harvester.PaperRecord) -> harvester.PaperRecord:
        if paper.fulltext_status == harvester.FULLTEXT_UNAVAILABLE:
            return paper
        pdf = fulltext.pdf_path(cfg.pdf_dir, paper.paper_id)
        if not pdf.exists():
            paper.fulltext_status = harvester.FULLTEXT_UNAVAILABLE
            return paper
        try:
            fulltext.convert_to_tei(pdf, client, cfg.grobid_url,
                                    cfg.tei_dir / f"{paper.paper_id}.tei.xml")
        except fulltext.ConversionFailed:
            paper.fulltext_status = harvester.FULLTEXT_UNAVAILABLE
        return paper

    papers = _map_workers(cfg, convert, papers)
    _save_papers(cfg, papers)
    converted = len(list(cfg.tei_dir.glob("*.tei.xml"))) if cfg.tei_dir.exists() else 0
    return {"tei_documents": converted}


def stage_detect(cfg: PipelineConfig) -> dict:
    papers = _load_papers(cfg)
    registry = catalog.load_dataset_registry(cfg.datasets_csv)
    client = _client(cfg)
    work_ids, unresolved = harvester.resolve_registry_work_ids(registry, client)

    detections: list[detector.Detection] = []
    presence_records = []
    for paper in papers:
        paper_detections = detector.detect_citations_by_id(paper, registry, work_ids)
        tei_path = cfg.tei_dir / f"{paper.paper_id}.tei.xml"
        if tei_path.exists():
            doc = fulltext.parse_tei(tei_path.read_text(encoding="utf-8"),
                                     paper_id=paper.paper_id)
            if doc.references:
                paper_detections.extend(detector.detect_citations_by_title(
                    paper.paper_id, doc, registry, cfg.matcher))
            # prefer the indexed abstract; fall back to the full-text one
            if paper.abstract_source != harvester.ABSTRACT_OPENALEX and doc.abstract:
                paper.abstract_text = doc.abstract
                paper.abstract_source = harvester.ABSTRACT_FULLTEXT
            elif paper.abstract_text:
                doc.abstract = paper.abstract_text
            paper_detections.extend(detector.detect_mentions(
                doc, registry, cfg.matcher, paper_id=paper.paper_id))
        elif paper.abstract_text:
            paper_detections.extend(detector.detect_mentions(
                paper.abstract_text, registry, cfg.matcher,
                paper_id=paper.paper_id))
        detections.extend(paper_detections)
        for dataset_id, presence in detector.resolve_presence(
                paper.paper_id, paper_detections).items():
            presence_records.append({"paper_id": paper.paper_id,
                                     "dataset_id": dataset_id,
                                     "presence": presence})

    (cfg.workdir / "detections.csv").write_text(
        reporter.detections_csv(detections), encoding="utf-8")
    presence_records.sort(key=lambda r: (r["paper_id"], r["dataset_id"]))
    (cfg.workdir / "presence.json").write_text(
        json.dumps(presence_records, indent=2, sort_keys=True) + "\n",
        encoding="utf-8")
    (cfg.workdir / "detect_summary.json").write_text(
        json.dumps({"unresolved_dataset_dois": [
            {"dataset_id": d, "doi": doi} for d, doi in unresolved]},
            indent=2, sort_keys=True) + "\n", encoding="utf-8")
    _save_papers(cfg, papers)
    return {"detections": len(detections), "presence_records": len(presence_records),
            "unresolved_dataset_dois": len(unresolved)}


def _load_presence(cfg: PipelineConfig) -> list[analyzer.PresenceRecord]:
    path = cfg.workdir / "presence.json"
    if not path.exists():
        raise StageInputMissing(path)
    return [analyzer.PresenceRecord(**row)
            for row in json.loads(path.read_text(encoding="utf-8"))]


def stage_analyze(cfg: PipelineConfig) -> dict:
    papers = {p.paper_id: p for p in _load_papers(cfg)}
    records = _load_presence(cfg)
    venues = catalog.load_venue_list(cfg.venues_csv)

    assignments = [analyzer.assign_group(p)
                   for p in sorted(papers.values(), key=lambda p: p.paper_id)]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("paper_id", "group", "reason"))
    writer.writerows((a.paper_id, a.group, a.reason) for a in assignments)
    (cfg.workdir / "groups.csv").write_text(buf.getvalue(), encoding="utf-8")

    summaries = analyzer.aggregate_presence(records, papers)
    series = analyzer.cumulative_series(records, papers, venues)
    (cfg.workdir / "presence.csv").write_text(reporter.presence_csv(summaries),
                                              encoding="utf-8")
    (cfg.workdir / "cumulative.csv").write_text(reporter.cumulative_csv(series),
                                                encoding="utf-8")
    groups = {g: sum(1 for a in assignments if a.group == g)
              for g in (analyzer.GROUP1, analyzer.GROUP2, analyzer.GROUP3,
                        analyzer.DISCARDED)}
    return {"summaries": len(summaries), "series": len(series), **groups}


def stage_report(cfg: PipelineConfig) -> dict:
    papers = {p.paper_id: p for p in _load_papers(cfg)}
    records = _load_presence(cfg)
    detections_path = cfg.workdir / "detections.csv"
    if not detections_path.exists():
        raise StageInputMissing(detections_path)
    detections = reporter.read_detections_csv(detections_path)
    venues = catalog.load_venue_list(cfg.venues_csv)
    summaries = analyzer.aggregate_presence(records, papers)
    series = analyzer.cumulative_series(records, papers, venues)
    manifest = reporter.RunManifest(
        registry_sha256=reporter.sha256_file(cfg.datasets_csv),
        venues_sha256=reporter.sha256_file(cfg.venues_csv),
        config=cfg.snapshot,
        counts={
            "papers": len(papers),
            "presence_records": len(records),
            "detections": len(detections),
            "summaries": len(summaries),
            "series": len(series),
        },
    )
    written = reporter.emit_reports(cfg.out_dir, summaries, series, detections,
                                    manifest)
    return {"files": [str(p) for p in written]}


def stage_compare_index(args) -> dict:
    set_a = set(json.loads(Path(args.a).read_text(encoding="utf-8")))
    set_b = set(json.loads(Path(args.b).read_text(encoding="utf-8")))
    comparison = analyzer.compare_citation_indexes(set_a, set_b)
    print(reporter.comparison_json(comparison), end="")
    if args.out:
        Path(args.out).write_text(reporter.comparison_json(comparison),
                                  encoding="utf-8")
    return comparison.to_dict()


def stage_serve(args) -> None:
    import uvicorn

    from .annotation.service import create_app

    app = create_app(
        root=Path(args.annotation_root),
        detections_csv=Path(args.detections) if args.detections else None,
        ui_dir=Path(args.ui_dir) if args.ui_dir else None,
    )
    uvicorn.run(app, host=args.host, port=args.port)


# -- entry point -----------------------------------------------------------------


_STAGE_FUNCS = {
    "harvest": stage_harvest,
    "fetch-fulltext": stage_fetch_fulltext,
    "convert": stage_convert,
    "detect": stage_detect,
    "analyze": stage_analyze,
    "report": stage_report,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="datause",
        description="Detect dataset citations and mentions in venue papers.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_pipeline_flags(p):
        p.add_argument("--config", type=Path, help="TOML run configuration")
        p.add_argument("--replay", metavar="DIR",
                       help="cache directory; forces cache-only operation")
        p.add_argument("--workers", type=int)
        p.add_argument("--out", help="output directory override")
        p.add_argument("--grobid-url")
        p.add_argument("--mailto")

    for name in STAGES + ("all",):
        add_pipeline_flags(sub.add_parser(name))

    compare = sub.add_parser("compare-index",
                             help="mutual containment of two citing-ID sets")
    compare.add_argument("--a", required=True, help="JSON array of IDs")
    compare.add_argument("--b", required=True, help="JSON array of IDs")
    compare.add_argument("--out", help="also write the report to this path")

    serve = sub.add_parser("serve", help="run the annotation service")
    serve.add_argument("--annotation-root", default="projects")
    serve.add_argument("--detections", help="detections.csv for agreement checks")
    serve.add_argument("--ui-dir", help="static web UI directory")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8100)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "serve":
        stage_serve(args)
        return 0
    if args.command == "compare-index":
        try:
            stage_compare_index(args)
        except (OSError, json.JSONDecodeError) as exc:
            print(json.dumps({"stage": "compare-index",
                              "error": type(exc).__name__,
                              "detail": str(exc)}), file=sys.stderr)
            return 1
        return 0

    overrides = {"replay": args.replay, "workers": args.workers, "out": args.out,
                 "grobid_url": args.grobid_url, "mailto": args.mailto}
    try:
        cfg = load_config(args.config, overrides)
    except ConfigMissing as exc:
        print(json.dumps({"stage": args.command, "error": "ConfigMissing",
                          "detail": str(exc)}), file=sys.stderr)
        return 2

    stages = list(STAGES) if args.command == "all" else [args.command]
    for stage in stages:
        try:
            summary = _STAGE_FUNCS[stage](cfg)
        except Exception as exc:
            print(json.dumps({"stage": stage, "error": type(exc).__name__,
                              "detail": str(exc)}), file=sys.stderr)
            return 1
        print(json.dumps({"stage": stage, **summary}))
    return 0


if __name__ == "__main__":
    sys.exit(main())
