"""Run configuration: a TOML file plus a handful of CLI overrides.

Relative paths in the file resolve against the config file's directory, so a
checked-in corpus ships with a config that works from any working directory.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

import tomli

from .detector import MatcherConfig
from .netcache import HttpConfig


class ConfigMissing(Exception):
    pass


@dataclass
class PipelineConfig:
    datasets_csv: Path
    venues_csv: Path
    out_dir: Path
    workdir: Path
    cache_dir: Path
    replay: bool = False
    workers: int = max(os.cpu_count() or 1, 1)
    grobid_url: str = "http://localhost:8070"
    http: HttpConfig = field(default_factory=HttpConfig)
    matcher: MatcherConfig = field(default_factory=MatcherConfig)
    scraper_plugin: str | None = None
    scraper_options: dict = field(default_factory=dict)
    always_scrape_venues: tuple[str, ...] = ()
    prefer_scraped: bool = True
    snapshot: dict = field(default_factory=dict)

    @property
    def pdf_dir(self) -> Path:
        return self.workdir / "pdfs"

    @property
    def tei_dir(self) -> Path:
        return self.workdir / "tei"


def load_config(config_path: Path | None, overrides: dict | None = None) -> PipelineConfig:
    """Parse the TOML config; ``overrides`` holds CLI flag values."""
    overrides = overrides or {}
    if config_path is None:
        raise ConfigMissing("a --config file is required for pipeline commands")
    config_path = Path(config_path)
    if not config_path.exists():
        raise ConfigMissing(str(config_path))
    with open(config_path, "rb") as handle:
        raw = tomli.load(handle)
    base = config_path.parent

    def _resolve(value: str) -> Path:
        path = Path(value)
        return path if path.is_absolute() else (base / path)

    inputs = raw.get("inputs", {})
    if "datasets" not in inputs or "venues" not in inputs:
        raise ConfigMissing("config must name [inputs] datasets and venues")
    paths = raw.get("paths", {})

    out_dir = Path(overrides.get("out") or _resolve(paths.get("out", "out")))
    workdir = (_resolve(paths["workdir"]) if "workdir" in paths
               else out_dir / "work")
    replay_dir = overrides.get("replay")
    if replay_dir:
        cache_dir = Path(replay_dir)
    else:
        cache_dir = _resolve(paths.get("cache", "cache"))

    http_raw = raw.get("http", {})
    http = HttpConfig(
        retries=int(http_raw.get("retries", 3)),
        backoff_base=float(http_raw.get("backoff_base", 0.5)),
        per_host_cap=int(http_raw.get("per_host_cap", 4)),
        spacing=float(http_raw.get("spacing_ms", 100)) / 1000.0,
        mailto=(overrides.get("mailto") or http_raw.get("mailto")
                or os.environ.get("OPENALEX_MAILTO")),
    )

    det = raw.get("detector", {})
    matcher = MatcherConfig(
        title_similarity_threshold=float(det.get("title_similarity_threshold", 0.9)),
        excluded_heading_keywords=tuple(det.get(
            "excluded_heading_keywords",
            MatcherConfig().excluded_heading_keywords)),
        unknown_headings_eligible=bool(det.get("unknown_headings_eligible", True)),
    )

    scraper = raw.get("scraper", {})
    scraper_options = dict(scraper.get("options", {}))
    if "dir" in scraper_options:
        scraper_options["dir"] = str(_resolve(scraper_options["dir"]))

    pipeline = raw.get("pipeline", {})
    snapshot = dict(raw)
    snapshot["replay"] = bool(replay_dir)

    return PipelineConfig(
        datasets_csv=_resolve(inputs["datasets"]),
        venues_csv=_resolve(inputs["venues"]),
        out_dir=out_dir,
        workdir=workdir,
        cache_dir=cache_dir,
        replay=bool(replay_dir),
        workers=int(overrides.get("workers") or pipeline.get("workers")
                    or max(os.cpu_count() or 1, 1)),
        grobid_url=(overrides.get("grobid_url") or raw.get("grobid", {}).get("url")
                    or "http://localhost:8070"),
        http=http,
        matcher=matcher,
        scraper_plugin=scraper.get("plugin"),
        scraper_options=scraper_options,
        always_scrape_venues=tuple(scraper.get("always_scrape", ())),
        prefer_scraped=bool(pipeline.get("prefer_scraped", True)),
        snapshot=snapshot,
    )
