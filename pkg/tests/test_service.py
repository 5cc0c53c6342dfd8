"""HTTP API contract tests against a temp-dir-backed app instance."""

from __future__ import annotations

import json

import pytest
from fastapi.testclient import TestClient

from visqual.report_io import report_to_csv, report_to_json
from visqual.scoring import build_report
from visqual.service import ServiceConfig, create_app
from visqual.storage import SessionStore

from helpers import TINY_PNG

ADMIN_TOKEN = "secret-token"


@pytest.fixture()
def client(tmp_path):
    config = ServiceConfig(data_dir=tmp_path / "data", max_upload_mb=1,
                           admin_token=ADMIN_TOKEN)
    app = create_app(config)
    with TestClient(app) as test_client:
        test_client.config = config
        yield test_client


def upload(client, data=TINY_PNG, media_type="image/png",
           filename="chart.png"):
    return client.post("/api/sessions",
                       files={"image": (filename, data, media_type)})


class TestSessionEndpoints:
    def test_create_session_201(self, client):
        response = upload(client)
        assert response.status_code == 201
        body = response.json()
        assert len(body["states"]) == 60
        assert body["image"]["filename"] == "chart.png"
        assert all(state is None for state in body["states"].values())

    def test_pdf_upload_415(self, client):
        response = upload(client, b"%PDF-1.4", "application/pdf", "doc.pdf")
        assert response.status_code == 415
        assert response.json()["error"] == "unsupported_media_type"

    def test_oversized_upload_413(self, client):
        response = upload(client, b"x" * (1024 * 1024 + 1))
        assert response.status_code == 413
        assert response.json()["error"] == "image_too_large"

    def test_empty_upload_400(self, client):
        response = upload(client, b"")
        assert response.status_code == 400
        assert response.json()["error"] == "empty_upload"

    def test_get_session_roundtrip(self, client):
        session_id = upload(client).json()["session_id"]
        response = client.get(f"/api/sessions/{session_id}")
        assert response.status_code == 200
        assert response.json()["session_id"] == session_id

    def test_get_unknown_session_404(self, client):
        response = client.get("/api/sessions/ghost")
        assert response.status_code == 404
        assert response.json()["error"] == "not_found"

    def test_asset_stored_on_disk(self, client, tmp_path):
        body = upload(client).json()
        sha = body["image"]["sha256"]
        assert (tmp_path / "data" / "assets" / f"{sha}.png").exists()


class TestAnswerEndpoint:
    def test_answer_returns_progress(self, client):
        session_id = upload(client).json()["session_id"]
        response = client.put(
            f"/api/sessions/{session_id}/answers/Q-PER-001",
            json={"answer": "yes"})
        assert response.status_code == 200
        body = response.json()
        assert body["answered"] == 1
        assert body["total"] == 60
        assert body["per_category"]["Perception"]["answered"] == 1

    def test_skip_records_na(self, client):
        session_id = upload(client).json()["session_id"]
        client.put(f"/api/sessions/{session_id}/answers/Q-GEO-002",
                   json={"answer": "na"})
        states = client.get(f"/api/sessions/{session_id}").json()["states"]
        assert states["Q-GEO-002"]["answer"] == "na"
        assert states["Q-GEO-002"]["source"] == "manual"

    def test_unknown_question_404(self, client):
        session_id = upload(client).json()["session_id"]
        response = client.put(
            f"/api/sessions/{session_id}/answers/Q-XXX-999",
            json={"answer": "yes"})
        assert response.status_code == 404
        assert response.json()["error"] == "unknown_question"

    def test_unknown_session_404(self, client):
        response = client.put("/api/sessions/ghost/answers/Q-PER-001",
                              json={"answer": "yes"})
        assert response.status_code == 404

    def test_invalid_answer_value_422(self, client):
        session_id = upload(client).json()["session_id"]
        response = client.put(
            f"/api/sessions/{session_id}/answers/Q-PER-001",
            json={"answer": "maybe"})
        assert response.status_code == 422
        assert response.json()["error"] == "validation_error"


class TestReportEndpoints:
    def answer_all(self, client, session_id, value="yes"):
        states = client.get(f"/api/sessions/{session_id}").json()["states"]
        for qid in states:
            response = client.put(
                f"/api/sessions/{session_id}/answers/{qid}",
                json={"answer": value})
            assert response.status_code == 200

    def test_all_yes_report_is_100_everywhere(self, client):
        session_id = upload(client).json()["session_id"]
        self.answer_all(client, session_id)
        report = client.get(f"/api/sessions/{session_id}/report").json()
        assert all(c["percent"] == 100.0 for c in report["categories"])
        assert report["overall"]["percent"] == 100.0
        assert report["failed"] == []

    def test_report_bytes_equal_library_output(self, client, tmp_path):
        session_id = upload(client).json()["session_id"]
        self.answer_all(client, session_id)
        via_api = client.get(f"/api/sessions/{session_id}/report").content
        store = SessionStore(tmp_path / "data")
        session = store.load(session_id)
        assert via_api == report_to_json(build_report(session))

    def test_csv_bytes_equal_library_output(self, client, tmp_path):
        session_id = upload(client).json()["session_id"]
        client.put(f"/api/sessions/{session_id}/answers/Q-PER-003",
                   json={"answer": "no"})
        response = client.get(f"/api/sessions/{session_id}/report.csv")
        assert response.status_code == 200
        assert "attachment" in response.headers["content-disposition"]
        store = SessionStore(tmp_path / "data")
        session = store.load(session_id)
        assert response.content == report_to_csv(build_report(session))


class TestCatalogEndpoints:
    def test_get_catalog(self, client):
        body = client.get("/api/catalog").json()
        assert body["version"] == "1.0"
        assert len(body["questions"]) == 60

    def replacement_catalog(self) -> bytes:
        return json.dumps({"version": "2.0", "questions": [
            {"id": "Q-NEW-001", "category": "Data", "text": "New data ok?"},
        ]}).encode()

    def test_hot_swap_requires_token(self, client):
        response = client.put("/api/catalog",
                              content=self.replacement_catalog())
        assert response.status_code == 401
        assert response.json()["error"] == "unauthorized"

    def test_hot_swap_replaces_catalog(self, client):
        response = client.put("/api/catalog",
                              content=self.replacement_catalog(),
                              headers={"x-admin-token": ADMIN_TOKEN})
        assert response.status_code == 200
        assert client.get("/api/catalog").json()["version"] == "2.0"

    def test_eighth_category_rejected_422_with_diagnostics(self, client):
        bad = json.dumps({"version": "3.0", "questions": [
            {"id": "Q-OTH-001", "category": "Other", "text": "Misc?"},
        ]}).encode()
        response = client.put("/api/catalog", content=bad,
                              headers={"x-admin-token": ADMIN_TOKEN})
        assert response.status_code == 422
        body = response.json()
        assert body["error"] == "invalid_catalog"
        assert any(d["code"] == "unknown-category"
                   for d in body["diagnostics"])
        # Swap must not have happened.
        assert client.get("/api/catalog").json()["version"] == "1.0"

    def test_swap_leaves_existing_session_report_unchanged(self, client):
        session_id = upload(client).json()["session_id"]
        client.put(f"/api/sessions/{session_id}/answers/Q-PER-001",
                   json={"answer": "yes"})
        before = client.get(f"/api/sessions/{session_id}/report").content
        response = client.put("/api/catalog",
                              content=self.replacement_catalog(),
                              headers={"x-admin-token": ADMIN_TOKEN})
        assert response.status_code == 200
        after = client.get(f"/api/sessions/{session_id}/report").content
        assert before == after

    def test_new_session_uses_swapped_catalog(self, client):
        client.put("/api/catalog", content=self.replacement_catalog(),
                   headers={"x-admin-token": ADMIN_TOKEN})
        body = upload(client).json()
        assert list(body["states"]) == ["Q-NEW-001"]

    def test_swap_disabled_without_configured_token(self, tmp_path):
        config = ServiceConfig(data_dir=tmp_path / "d", admin_token=None)
        with TestClient(create_app(config)) as client:
            response = client.put("/api/catalog", content=b"{}")
            assert response.status_code == 403


class TestAutocheckEndpoint:
    BAD_SPEC = json.dumps({
        "title": None,
        "mark": "pie3d",
        "encodings": [
            {"channel": "color", "field": "share", "type": "nominal",
             "scale": {"kind": "continuous_gradient", "stops": [0, 0.9, 1]}},
        ],
    }).encode()

    def test_verdict_list_returned(self, client):
        session_id = upload(client).json()["session_id"]
        response = client.post(f"/api/sessions/{session_id}/autocheck",
                               content=self.BAD_SPEC)
        assert response.status_code == 200
        verdicts = {v["question_id"]: v for v in response.json()}
        assert verdicts["Q-GEO-001"]["verdict"] == "no"
        assert verdicts["Q-GEO-001"]["evidence"] == "decorative_3d"
        assert verdicts["Q-PER-002"]["verdict"] == "no"
        assert verdicts["Q-PER-003"]["verdict"] == "no"
        assert verdicts["Q-GUI-001"]["verdict"] == "no"

    def test_apply_writes_only_yes_no_as_auto(self, client):
        session_id = upload(client).json()["session_id"]
        client.post(f"/api/sessions/{session_id}/autocheck?apply=true",
                    content=self.BAD_SPEC)
        states = client.get(f"/api/sessions/{session_id}").json()["states"]
        assert states["Q-GEO-001"]["answer"] == "no"
        assert states["Q-GEO-001"]["source"] == "auto"
        assert states["Q-PER-004"] is None  # manual-only criterion untouched

    def test_without_apply_session_untouched(self, client):
        session_id = upload(client).json()["session_id"]
        client.post(f"/api/sessions/{session_id}/autocheck",
                    content=self.BAD_SPEC)
        states = client.get(f"/api/sessions/{session_id}").json()["states"]
        assert all(state is None for state in states.values())

    def test_invalid_spec_422(self, client):
        session_id = upload(client).json()["session_id"]
        response = client.post(f"/api/sessions/{session_id}/autocheck",
                               content=b'{"mark": "hologram"}')
        assert response.status_code == 422
        assert response.json()["error"] == "invalid_spec"


class TestExampleEndpoint:
    def test_missing_asset_404(self, client):
        response = client.get("/api/questions/Q-PER-003/examples/good")
        assert response.status_code == 404

    def test_question_without_example_404(self, client):
        response = client.get("/api/questions/Q-SUB-001/examples/good")
        assert response.status_code == 404

    def test_serves_installed_asset(self, client, tmp_path):
        examples = tmp_path / "data" / "examples"
        examples.mkdir(parents=True, exist_ok=True)
        (examples / "colors-distinct-good.png").write_bytes(TINY_PNG)
        response = client.get("/api/questions/Q-PER-003/examples/good")
        assert response.status_code == 200
        assert response.content == TINY_PNG
        assert response.headers["content-type"] == "image/png"

    def test_unknown_question_404(self, client):
        assert client.get(
            "/api/questions/Q-XXX-1/examples/bad").status_code == 404


class TestRestartDurability:
    def test_sessions_survive_app_restart(self, tmp_path):
        config = ServiceConfig(data_dir=tmp_path / "data",
                               admin_token=ADMIN_TOKEN)
        with TestClient(create_app(config)) as first:
            session_id = upload(first).json()["session_id"]
            first.put(f"/api/sessions/{session_id}/answers/Q-DAT-001",
                      json={"answer": "no"})
            report_before = first.get(
                f"/api/sessions/{session_id}/report").content
        with TestClient(create_app(config)) as second:
            states = second.get(
                f"/api/sessions/{session_id}").json()["states"]
            assert states["Q-DAT-001"]["answer"] == "no"
            assert second.get(
                f"/api/sessions/{session_id}/report").content == report_before

    def test_swapped_catalog_survives_restart(self, tmp_path):
        config = ServiceConfig(data_dir=tmp_path / "data",
                               admin_token=ADMIN_TOKEN)
        replacement = json.dumps({"version": "9.9", "questions": [
            {"id": "Q-X-1", "category": "Data", "text": "ok?"}]}).encode()
        with TestClient(create_app(config)) as first:
            first.put("/api/catalog", content=replacement,
                      headers={"x-admin-token": ADMIN_TOKEN})
        with TestClient(create_app(config)) as second:
            assert second.get("/api/catalog").json()["version"] == "9.9"
