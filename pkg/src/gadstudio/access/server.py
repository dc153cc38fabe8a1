"""The bundled synthetic dataset server.

Speaks the region/quality/timestep block protocol:

    GET /v1/datasets                                        -> descriptor list
    GET /v1/datasets/{name}                                 -> one descriptor
    GET /v1/datasets/{name}/fields/{field}/block
        ?t={t}&q={q}&box=x1,y1,z1,x2,y2,z2                  -> raw <f4 payload,
                                                               X-Dims / X-Channels headers

404 for unknown names, 416 for out-of-range requests.  ``app.state.fail_next``
can be set to make the next N block requests answer 503, for retry testing.
"""

from __future__ import annotations

from typing import Dict, Optional

from fastapi import FastAPI, Response
from fastapi.responses import JSONResponse

from ..volume import InvalidQuality, OutOfBounds, block_bytes
from .datasets import SyntheticDataset, mini_ocean
from .errors import NotFound


def _parse_box(text: str):
    parts = text.split(",")
    if len(parts) != 6:
        raise ValueError(f"box must be x1,y1,z1,x2,y2,z2, got {text!r}")
    vals = [int(p) for p in parts]
    return (tuple(vals[:3]), tuple(vals[3:]))


def create_dataset_app(datasets: Optional[Dict[str, SyntheticDataset]] = None) -> FastAPI:
    if datasets is None:
        default = mini_ocean()
        datasets = {default.name: default}

    app = FastAPI(title="synthetic dataset server")
    app.state.datasets = datasets
    app.state.fail_next = 0
    app.state.block_requests = 0

    @app.get("/v1/datasets")
    def list_datasets():
        return [ds.descriptor().to_json() for ds in datasets.values()]

    @app.get("/v1/datasets/{name}")
    def get_descriptor(name: str):
        if name not in datasets:
            return JSONResponse(status_code=404, content={"error": f"unknown dataset {name!r}"})
        return datasets[name].descriptor().to_json()

    @app.get("/v1/datasets/{name}/fields/{field}/block")
    def get_block(name: str, field: str, t: int, q: int, box: str):
        app.state.block_requests += 1
        if app.state.fail_next > 0:
            app.state.fail_next -= 1
            return JSONResponse(status_code=503, content={"error": "injected fault"})
        if name not in datasets:
            return JSONResponse(status_code=404, content={"error": f"unknown dataset {name!r}"})
        try:
            region = _parse_box(box)
        except ValueError as exc:
            return JSONResponse(status_code=416, content={"error": str(exc)})
        try:
            blk = datasets[name].block(field, t, q, region)
        except NotFound as exc:
            return JSONResponse(status_code=404, content={"error": str(exc)})
        except (OutOfBounds, InvalidQuality) as exc:
            return JSONResponse(status_code=416, content={"error": str(exc)})
        dx, dy, dz = blk.meta.dims
        return Response(
            content=block_bytes(blk),
            media_type="application/octet-stream",
            headers={
                "X-Dims": f"{dx},{dy},{dz}",
                "X-Channels": str(blk.meta.channels),
            },
        )

    return app


def main():  # pragma: no cover - exercised via the CLI
    import uvicorn

    uvicorn.run(create_dataset_app(), host="127.0.0.1", port=8801)


if __name__ == "__main__":  # pragma: no cover
    main()
