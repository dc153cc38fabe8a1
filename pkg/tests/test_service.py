import time

import pytest
from fastapi.testclient import TestClient

from gadstudio.service import ServiceConfig, create_app

SPEC_BODY = {
    "dataset": "mini-ocean",
    "field": "temperature",
    "box": [[4, 4, 0], [28, 28, 16]],
    "time": [0, 3, 1],
    "quality": -2,
    "streamlines": False,
}


@pytest.fixture()
def service(tmp_path, dataset_client):
    config = ServiceConfig(cache_root=str(tmp_path / "cache"), width=32, height=32, workers=2)
    app = create_app(config, dataset_client=dataset_client)
    with TestClient(app) as http:
        yield http


def _wait_done(http, job_id, timeout=60.0):
    deadline = time.time() + timeout
    snapshots = []
    while time.time() < deadline:
        job = http.get(f"/v1/animations/{job_id}").json()
        snapshots.append(job)
        if job["state"] in ("done", "failed"):
            return job, snapshots
        time.sleep(0.05)
    raise TimeoutError(f"job {job_id} did not finish: {snapshots[-1]}")


class TestHealthAndDatasets:
    def test_healthz_reports_dependencies(self, service):
        body = service.get("/healthz").json()
        assert body["status"] == "ok"
        assert body["dependencies"]["dataset_server"] == "ok"

    def test_healthz_degrades_when_dataset_server_unreachable(self, tmp_path):
        from gadstudio.access import DatasetClient

        dead = DatasetClient(base_url="http://127.0.0.1:9", retries=1, backoff_base=0.001)
        config = ServiceConfig(cache_root=str(tmp_path / "cache"))
        app = create_app(config, dataset_client=dead)
        with TestClient(app) as http:
            body = http.get("/healthz")
            assert body.status_code == 200  # not fatal, reported instead
            assert body.json()["status"] == "degraded"
            assert body.json()["dependencies"]["dataset_server"] == "unreachable"

    def test_dead_upstream_maps_to_502(self, tmp_path):
        from gadstudio.access import DatasetClient

        dead = DatasetClient(base_url="http://127.0.0.1:9", retries=1, backoff_base=0.001)
        config = ServiceConfig(cache_root=str(tmp_path / "cache"))
        app = create_app(config, dataset_client=dead)
        with TestClient(app) as http:
            response = http.get("/v1/datasets")
            assert response.status_code == 502
            assert response.json()["code"] == "upstream"

    def test_datasets_proxy(self, service):
        body = service.get("/v1/datasets").json()
        assert [d["name"] for d in body] == ["mini-ocean"]


class TestAnimationJobs:
    def test_submit_returns_202_and_job_id(self, service):
        response = service.post("/v1/animations", json=SPEC_BODY)
        assert response.status_code == 202
        body = response.json()
        assert body["job_id"].startswith("animation_")
        assert body["job"]["state"] in ("queued", "fetching", "rendering", "done")

    def test_job_lifecycle_reaches_done_with_frames(self, service):
        job_id = service.post("/v1/animations", json=SPEC_BODY).json()["job_id"]
        job, snapshots = _wait_done(service, job_id)
        assert job["state"] == "done"
        assert job["frame_count"] == 4
        progresses = [s["progress"] for s in snapshots]
        assert progresses == sorted(progresses), "progress must be non-decreasing"
        assert job["progress"] == 1.0

    def test_duplicate_post_of_cached_spec_returns_done_immediately(self, service):
        job_id = service.post("/v1/animations", json=SPEC_BODY).json()["job_id"]
        _wait_done(service, job_id)
        response = service.post("/v1/animations", json=SPEC_BODY)
        assert response.status_code == 200
        assert response.json()["job"]["state"] == "done"

    def test_frames_served_with_immutable_caching(self, service):
        job_id = service.post("/v1/animations", json=SPEC_BODY).json()["job_id"]
        _wait_done(service, job_id)
        response = service.get(f"/v1/animations/{job_id}/frames/0")
        assert response.status_code == 200
        assert response.content.startswith(b"\x89PNG")
        assert "immutable" in response.headers["cache-control"]

    def test_unknown_job_is_404_with_stable_code(self, service):
        response = service.get("/v1/animations/animation_nope")
        assert response.status_code == 404
        assert response.json()["code"] == "unknown_job"

    def test_invalid_spec_is_400(self, service):
        bad = dict(SPEC_BODY, box=[[28, 4, 0], [4, 28, 16]])
        response = service.post("/v1/animations", json=bad)
        assert response.status_code == 400
        assert response.json()["code"] == "validation"

    def test_out_of_range_spec_fails_job_with_range_error(self, service):
        bad = dict(SPEC_BODY, time=[0, 5000, 1])
        job_id = service.post("/v1/animations", json=bad).json()["job_id"]
        job, _ = _wait_done(service, job_id)
        assert job["state"] == "failed"
        assert "RangeError" in job["error"]

    def test_gad_bundle_archive(self, service):
        import io
        import zipfile

        job_id = service.post("/v1/animations", json=SPEC_BODY).json()["job_id"]
        _wait_done(service, job_id)
        response = service.get(f"/v1/animations/{job_id}/gad")
        assert response.status_code == 200
        archive = zipfile.ZipFile(io.BytesIO(response.content))
        names = archive.namelist()
        assert "header.gad.json" in names
        assert "datalist.gad.json" in names
        assert any(n.startswith("data/") for n in names)
        assert not any(n.startswith("frames_") for n in names)


class TestDocumentEditing:
    def _finished_job(self, service):
        job_id = service.post("/v1/animations", json=SPEC_BODY).json()["job_id"]
        _wait_done(service, job_id)
        return job_id

    def test_get_document_tree(self, service):
        job_id = self._finished_job(service)
        doc = service.get(f"/v1/animations/{job_id}/doc").json()
        assert doc["header"]["version"] == "1.0"
        assert len(doc["keyframes"]) == 4
        assert doc["keyframes"][0]["scene"][0]["tf"]["domain"] == [0.0, 1.0]

    def test_unchanged_export_is_pure_cache_hit(self, service, dataset_client):
        job_id = self._finished_job(service)
        doc = service.get(f"/v1/animations/{job_id}/doc").json()
        before = dataset_client.request_count
        response = service.post(
            f"/v1/animations/{job_id}/doc", json={"keyframes": doc["keyframes"]}
        )
        assert response.status_code == 200
        body = response.json()
        assert body["job_id"] == job_id, "unchanged export must map to the same animation"
        assert body["job"]["state"] == "done"
        assert dataset_client.request_count == before, "unchanged export must not fetch"

    def test_edited_opacity_renders_new_frames(self, service):
        job_id = self._finished_job(service)
        doc = service.get(f"/v1/animations/{job_id}/doc").json()
        for kf in doc["keyframes"]:
            kf["scene"][0]["tf"]["points"][-1][2] = 0.25
        response = service.post(
            f"/v1/animations/{job_id}/doc", json={"keyframes": doc["keyframes"]}
        )
        assert response.status_code in (200, 202)
        edit_id = response.json()["job_id"]
        assert edit_id.startswith(job_id + "~")
        job, _ = _wait_done(service, edit_id)
        assert job["state"] == "done"
        assert job["frame_count"] == 4
        edited = service.get(f"/v1/animations/{edit_id}/frames/0").content
        original = service.get(f"/v1/animations/{job_id}/frames/0").content
        assert edited != original

    def test_invalid_edit_rejected_with_diagnostics(self, service):
        job_id = self._finished_job(service)
        doc = service.get(f"/v1/animations/{job_id}/doc").json()
        doc["keyframes"][0]["camera"]["up"] = [0.0, 0.0, 0.0]
        response = service.post(
            f"/v1/animations/{job_id}/doc", json={"keyframes": doc["keyframes"]}
        )
        assert response.status_code == 400
        body = response.json()
        assert body["code"] == "validation"
        assert any("camera.up" in d["path"] for d in body["diagnostics"])


class TestChat:
    def test_full_loop_over_http(self, service):
        session_id = service.post("/v1/chat/sessions").json()["session_id"]

        reply = service.post(
            f"/v1/chat/sessions/{session_id}/messages",
            json={"text": "Mediterranean sea salinity with 4 days"},
        ).json()
        assert reply["proposal"]["spec"]["field"] == "salinity"
        assert reply["proposal"]["spec"]["quality"] == -8
        assert reply["job_id"] is None

        accepted = service.post(
            f"/v1/chat/sessions/{session_id}/messages", json={"text": "accept"}
        ).json()
        job_id = accepted["job_id"]
        assert job_id is not None
        job, _ = _wait_done(service, job_id)
        assert job["state"] == "done"

        critique = service.post(
            f"/v1/chat/sessions/{session_id}/messages", json={"text": "evaluate"}
        ).json()
        assert critique["critique"]["deltas"] == {"quality": -6, "streamlines": True}

        second = service.post(
            f"/v1/chat/sessions/{session_id}/messages", json={"text": "accept"}
        ).json()
        assert second["proposal"]["spec"]["quality"] == -6
        assert second["proposal"]["spec"]["streamlines"] is True
        job2, _ = _wait_done(service, second["job_id"])
        assert job2["state"] == "done"

        state = service.get(f"/v1/chat/sessions/{session_id}").json()
        assert state["produced_animations"] == [job_id, second["job_id"]]
        assert len(state["history"]) > 4

    def test_accept_without_proposal_is_400(self, service):
        session_id = service.post("/v1/chat/sessions").json()["session_id"]
        response = service.post(
            f"/v1/chat/sessions/{session_id}/messages", json={"text": "accept"}
        )
        assert response.status_code == 400

    def test_unknown_session_is_404(self, service):
        response = service.get("/v1/chat/sessions/session-9999")
        assert response.status_code == 404


class TestUiFlow:
    """The browser flow, driven at the HTTP layer: every UI action is exactly
    one service call, so this exercises the same sequence the frontend makes."""

    def test_prompt_accept_scrub_export_cycle(self, service, dataset_client):
        session_id = service.post("/v1/chat/sessions").json()["session_id"]

        # chat panel: send prompt -> proposal card
        reply = service.post(
            f"/v1/chat/sessions/{session_id}/messages",
            json={"text": "Mediterranean sea salinity with 3 days"},
        ).json()
        assert reply["proposal"] is not None

        # accept -> job with progress reaching done
        accepted = service.post(
            f"/v1/chat/sessions/{session_id}/messages", json={"text": "accept"}
        ).json()
        job, snapshots = _wait_done(service, accepted["job_id"])
        assert job["state"] == "done"
        progresses = [s["progress"] for s in snapshots]
        assert progresses == sorted(progresses)

        # scrubber: first and last frames display
        first = service.get(f"/v1/animations/{job['id']}/frames/0")
        last = service.get(f"/v1/animations/{job['id']}/frames/{job['frame_count'] - 1}")
        assert first.status_code == 200 and last.status_code == 200
        assert first.content.startswith(b"\x89PNG")

        # tf editor: export of the unchanged document is a pure cache hit
        doc = service.get(f"/v1/animations/{job['id']}/doc").json()
        before = dataset_client.request_count
        export = service.post(
            f"/v1/animations/{job['id']}/doc", json={"keyframes": doc["keyframes"]}
        )
        assert export.status_code == 200
        assert export.json()["job"]["state"] == "done"
        assert dataset_client.request_count == before

    def test_static_ui_mounted_when_built(self, tmp_path, dataset_client):
        import pathlib

        dist = pathlib.Path(__file__).resolve().parent.parent / "frontend" / "dist"
        if not dist.is_dir():
            pytest.skip("frontend not built")
        config = ServiceConfig(
            cache_root=str(tmp_path / "cache"), width=16, height=16,
            frontend_dir=str(dist),
        )
        app = create_app(config, dataset_client=dataset_client)
        with TestClient(app) as http:
            page = http.get("/ui/")
            assert page.status_code == 200
            assert b"gad-studio" in page.content
            script = http.get("/ui/app.js")
            assert script.status_code == 200


class TestApiCliEquivalence:
    def test_same_spec_same_frames_both_paths(self, service, dataset_client, tmp_path):
        from gadstudio.access import AnimationSpec, CacheIndex
        from gadstudio.chat import basic_generate
        from gadstudio.render import RenderSettings

        job_id = service.post("/v1/animations", json=SPEC_BODY).json()["job_id"]
        _wait_done(service, job_id)

        spec = AnimationSpec(
            box=((4, 4, 0), (28, 28, 16)),
            time=(0, 3, 1),
            quality=-2,
            field="temperature",
            dataset="mini-ocean",
        )
        aid, frames_dir = basic_generate(
            spec,
            dataset_client,
            CacheIndex(tmp_path / "cli-cache"),
            RenderSettings(width=32, height=32),
        )
        assert str(aid) == job_id
        cli_frames = sorted(frames_dir.glob("frame_*.png"))
        assert len(cli_frames) == 4
        for n, path in enumerate(cli_frames):
            api_bytes = service.get(f"/v1/animations/{job_id}/frames/{n}").content
            assert api_bytes == path.read_bytes(), f"frame {n} differs between API and CLI"
