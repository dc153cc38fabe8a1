"""HTTP client for the dataset block protocol, with bounded retries."""

from __future__ import annotations

import threading
import time
from typing import List, Optional, Tuple

import httpx

from ..volume import GridMeta, VolumeBlock, samples_from_bytes
from .datasets import DatasetDescriptor
from .errors import NotFound, RangeError, Transport

RETRY_STATUS = (500, 502, 503, 504)


class DatasetClient:
    """Fetch descriptors and volume blocks from a dataset server.

    ``http`` is any httpx.Client-compatible object (starlette's TestClient
    qualifies), so tests can run fully in-process.  Transient failures are
    retried up to ``retries`` times with exponential backoff starting at
    ``backoff_base`` seconds.  ``request_count`` counts every HTTP round trip
    issued, including retries.
    """

    def __init__(
        self,
        base_url: str = "",
        http: Optional[httpx.Client] = None,
        retries: int = 3,
        backoff_base: float = 0.25,
        timeout: float = 30.0,
    ):
        if http is None:
            http = httpx.Client(base_url=base_url, timeout=timeout)
        self._http = http
        self._retries = retries
        self._backoff_base = backoff_base
        self._lock = threading.Lock()
        self.request_count = 0

    def _count(self) -> None:
        with self._lock:
            self.request_count += 1

    def _get_with_retries(self, url: str, params: Optional[dict] = None) -> httpx.Response:
        last_error: Optional[str] = None
        for attempt in range(self._retries):
            if attempt:
                time.sleep(self._backoff_base * (2 ** (attempt - 1)))
            self._count()
            try:
                response = self._http.get(url, params=params)
            except httpx.HTTPError as exc:
                last_error = str(exc)
                continue
            if response.status_code == 404:
                raise NotFound(response.text)
            if response.status_code == 416:
                raise RangeError(response.text)
            if response.status_code in RETRY_STATUS:
                last_error = f"HTTP {response.status_code}"
                continue
            if response.status_code != 200:
                raise Transport(f"unexpected HTTP {response.status_code}: {response.text}")
            return response
        raise Transport(f"{url}: retries exhausted ({last_error})")

    def list_datasets(self) -> List[DatasetDescriptor]:
        response = self._get_with_retries("/v1/datasets")
        return [DatasetDescriptor.from_json(t) for t in response.json()]

    def descriptor(self, name: str) -> DatasetDescriptor:
        response = self._get_with_retries(f"/v1/datasets/{name}")
        return DatasetDescriptor.from_json(response.json())

    def fetch_block(
        self,
        dataset: str,
        field: str,
        t: int,
        q: int,
        box: Tuple[Tuple[int, int, int], Tuple[int, int, int]],
    ) -> VolumeBlock:
        (x1, y1, z1), (x2, y2, z2) = box
        response = self._get_with_retries(
            f"/v1/datasets/{dataset}/fields/{field}/block",
            params={"t": t, "q": q, "box": f"{x1},{y1},{z1},{x2},{y2},{z2}"},
        )
        try:
            dims = tuple(int(v) for v in response.headers["X-Dims"].split(","))
            channels = int(response.headers["X-Channels"])
            samples = samples_from_bytes(response.content, dims, channels)
        except (KeyError, ValueError) as exc:
            raise Transport(f"malformed block response: {exc}") from exc
        meta = GridMeta(dims=dims, channels=channels, field_name=field)
        return VolumeBlock(meta=meta, box=box, quality=q, samples=samples)
