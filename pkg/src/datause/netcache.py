"""Cached, rate-limited HTTP access shared by every remote call in the pipeline.

All harvest/fulltext traffic goes through :class:`PoliteClient`, which keys
responses by canonicalized URL+params under ``cache/<host>/<hash>.json``.
With ``replay=True`` the client never touches the network: a cache miss is a
hard error, which is what makes frozen-cache runs deterministic.
"""

from __future__ import annotations

import base64
import hashlib
import json
import os
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from urllib.parse import urlencode, urlsplit

import requests


class TransportError(Exception):
    def __init__(self, message: str, status: int | None = None):
        super().__init__(message)
        self.status = status


class RateLimited(TransportError):
    """Server kept answering 429 through all retries."""


class ReplayMiss(TransportError):
    """Cache-only mode was requested and the response is not recorded."""


@dataclass
class HttpConfig:
    retries: int = 3
    backoff_base: float = 0.5
    per_host_cap: int = 4
    spacing: float = 0.1
    timeout: float = 30.0
    mailto: str | None = None


def cache_key(method: str, url: str, params: dict | None) -> str:
    canonical = f"{method.upper()} {url}?{urlencode(sorted((params or {}).items()))}"
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _default_transport(method: str, url: str, params: dict | None, files: dict | None,
                       timeout: float) -> tuple[int, bytes]:
    resp = requests.request(method, url, params=params, files=files, timeout=timeout)
    return resp.status_code, resp.content


class _HostGate:
    """Admission control for one host: concurrency cap plus request spacing."""

    def __init__(self, cap: int, spacing: float):
        self.semaphore = threading.Semaphore(cap)
        self.spacing = spacing
        self._lock = threading.Lock()
        self._next_slot = 0.0

    def __enter__(self):
        self.semaphore.acquire()
        with self._lock:
            now = time.monotonic()
            slot = max(now, self._next_slot)
            self._next_slot = slot + self.spacing
        delay = slot - time.monotonic()
        if delay > 0:
            time.sleep(delay)
        return self

    def __exit__(self, *exc):
        self.semaphore.release()
        return False


class PoliteClient:
    """requests wrapper with a persistent response cache and per-host politeness.

    ``transport`` is injectable for tests: a callable
    ``(method, url, params, files, timeout) -> (status, body_bytes)``.
    """

    def __init__(self, cache_dir: Path, config: HttpConfig | None = None,
                 replay: bool = False, transport=None):
        self.cache_dir = Path(cache_dir)
        self.config = config or HttpConfig()
        self.replay = replay
        self.transport = transport or _default_transport
        self._gates: dict[str, _HostGate] = {}
        self._gates_lock = threading.Lock()

    # -- cache ---------------------------------------------------------------

    def _cache_path(self, url: str, key: str) -> Path:
        host = urlsplit(url).netloc or "local"
        return self.cache_dir / host / f"{key}.json"

    def cache_lookup(self, method: str, url: str, params: dict | None) -> bytes | None:
        path = self._cache_path(url, cache_key(method, url, params))
        if not path.exists():
            return None
        entry = json.loads(path.read_text(encoding="utf-8"))
        return base64.b64decode(entry["body_b64"])

    def cache_store(self, method: str, url: str, params: dict | None, status: int,
                    body: bytes) -> None:
        path = self._cache_path(url, cache_key(method, url, params))
        path.parent.mkdir(parents=True, exist_ok=True)
        entry = {
            "method": method.upper(),
            "url": url,
            "params": dict(sorted((params or {}).items())),
            "status": status,
            "body_b64": base64.b64encode(body).decode("ascii"),
        }
        tmp = path.with_suffix(f".tmp{os.getpid()}.{threading.get_ident()}")
        tmp.write_text(json.dumps(entry, sort_keys=True), encoding="utf-8")
        os.replace(tmp, path)  # atomic: concurrent writers of one key can't corrupt

    # -- requests ------------------------------------------------------------

    def _gate(self, host: str) -> _HostGate:
        with self._gates_lock:
            gate = self._gates.get(host)
            if gate is None:
                gate = _HostGate(self.config.per_host_cap, self.config.spacing)
                self._gates[host] = gate
            return gate

    def get(self, url: str, params: dict | None = None, refresh: bool = False) -> bytes:
        params = dict(params or {})
        host = urlsplit(url).netloc
        # replay keys must match what was recorded, so no contact param there
        if host.endswith("openalex.org") and self.config.mailto and not self.replay:
            params.setdefault("mailto", self.config.mailto)
        return self._request("GET", url, params=params, files=None, refresh=refresh)

    def post_multipart(self, url: str, files: dict, cache_params: dict,
                       refresh: bool = False) -> bytes:
        """POST with a caller-chosen cache identity (e.g. an upload digest)."""
        return self._request("POST", url, params=cache_params, files=files,
                             refresh=refresh)

    def _request(self, method: str, url: str, params: dict | None, files: dict | None,
                 refresh: bool) -> bytes:
        if not refresh:
            cached = self.cache_lookup(method, url, params)
            if cached is not None:
                return cached
        if self.replay:
            raise ReplayMiss(f"replay cache miss: {method} {url} {params}")

        send_params = None if files is not None else params
        last_status = None
        last_error = "no attempt made"
        for attempt in range(max(self.config.retries, 0) + 1):
            if attempt:
                time.sleep(self.config.backoff_base * (2 ** (attempt - 1)))
            try:
                with self._gate(urlsplit(url).netloc):
                    status, body = self.transport(method, url, send_params, files,
                                                  self.config.timeout)
            except Exception as exc:  # connection-level failure: retry
                last_status = None
                last_error = str(exc)
                continue
            last_status = status
            last_error = f"HTTP {status}"
            if status == 200:
                self.cache_store(method, url, params, status, body)
                return body
            if status == 429 or status >= 500:
                continue
            raise TransportError(f"{method} {url}: HTTP {status}", status=status)
        if last_status == 429:
            raise RateLimited(f"{method} {url}: rate limited after retries", status=429)
        raise TransportError(f"{method} {url}: {last_error} after retries",
                             status=last_status)
