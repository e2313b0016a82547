"""In-process checks of the annotation HTTP service."""

from __future__ import annotations

import json
import threading
import urllib.error
import urllib.request

import pytest

from misinfo.annotation import AnnotationStore
from misinfo.server import make_server
from conftest import tweets


class Client:
    def __init__(self, port):
        self.base = f"http://127.0.0.1:{port}"

    def request(self, method, path, body=None):
        data = json.dumps(body).encode() if body is not None else None
        req = urllib.request.Request(self.base + path, data=data,
                                     method=method)
        try:
            with urllib.request.urlopen(req, timeout=5) as resp:
                return resp.status, json.loads(resp.read() or b"{}")
        except urllib.error.HTTPError as exc:
            payload = exc.read()
            return exc.code, json.loads(payload) if payload else {}

    def get(self, path):
        return self.request("GET", path)

    def post(self, path, body):
        return self.request("POST", path, body)


@pytest.fixture
def service(tmp_path):
    ds = tweets(["alpha", "beta", "gamma"])
    store = AnnotationStore(ds, tmp_path / "journal.csv")
    server = make_server(store, tmp_path / "final.jsonl")
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield Client(server.port), store, tmp_path
    server.shutdown()
    server.server_close()
    store.close()


def test_session_next_label_flow(service):
    client, _, _ = service
    status, session = client.get("/api/session")
    assert status == 200
    assert session["dataset_size"] == 3
    assert session["unlabeled"] == 3

    status, nxt = client.get("/api/next?annotator=a1")
    assert status == 200 and nxt["tweet"]["id"] == "t0"

    status, outcome = client.post("/api/labels", {
        "tweet_id": "t0", "annotator_id": "a1", "label": "M"})
    assert status == 200
    assert outcome["decided"] == "M"

    status, nxt = client.get("/api/next?annotator=a1")
    assert nxt["tweet"]["id"] == "t1"

    status, session = client.get("/api/session")
    assert session["decided"] == {"M": 1}
    assert session["unlabeled"] == 2


def test_error_mapping(service):
    client, _, _ = service
    status, body = client.post("/api/labels", {
        "tweet_id": "zz", "annotator_id": "a", "label": "M"})
    assert status == 404 and "zz" in body["error"]
    status, body = client.post("/api/labels", {
        "tweet_id": "t0", "annotator_id": "a", "label": "Q"})
    assert status == 400
    status, body = client.post("/api/labels", {"tweet_id": "t0"})
    assert status == 400 and "annotator_id" in body["error"]
    status, _ = client.get("/api/bogus")
    assert status == 404
    status, _ = client.post("/api/next", {})  # GET-only endpoint
    assert status == 404


def test_tie_blocks_finalize_until_adjudicated(service):
    client, _, tmp_path = service
    client.post("/api/labels", {"tweet_id": "t0", "annotator_id": "a",
                                "label": "M"})
    client.post("/api/labels", {"tweet_id": "t0", "annotator_id": "b",
                                "label": "T"})
    client.post("/api/labels", {"tweet_id": "t1", "annotator_id": "a",
                                "label": "T"})

    status, ties = client.get("/api/ties")
    assert [t["tweet_id"] for t in ties["ties"]] == ["t0"]

    status, body = client.post("/api/finalize", {})
    assert status == 409
    assert body["tweet_ids"] == ["t0"]
    assert not (tmp_path / "final.jsonl").exists()

    status, _ = client.post("/api/adjudications",
                            {"tweet_id": "t0", "label": "M"})
    assert status == 200
    status, body = client.post("/api/finalize", {})
    assert status == 200
    assert body["entries"] == 2
    assert body["class_counts"]["M"] == 1
    written = (tmp_path / "final.jsonl").read_text().splitlines()
    assert len(written) == 2


def test_adjudication_rejects_unsure(service):
    client, _, _ = service
    client.post("/api/labels", {"tweet_id": "t0", "annotator_id": "a",
                                "label": "M"})
    client.post("/api/labels", {"tweet_id": "t0", "annotator_id": "b",
                                "label": "T"})
    status, body = client.post("/api/adjudications",
                               {"tweet_id": "t0", "label": "U"})
    assert status == 400 and "definite" in body["error"]


def test_agreement_endpoint(service):
    client, _, _ = service
    for ann, label in (("a", "M"), ("b", "M")):
        client.post("/api/labels", {"tweet_id": "t0", "annotator_id": ann,
                                    "label": label})
    status, body = client.get("/api/agreement")
    assert status == 200
    assert body["unanimous"] == {"t0": True}
    assert body["pairwise"] == [{"annotators": ["a", "b"], "agreement": 1.0}]


def test_cors_preflight(service):
    client, _, _ = service
    req = urllib.request.Request(client.base + "/api/labels",
                                 method="OPTIONS")
    with urllib.request.urlopen(req, timeout=5) as resp:
        assert resp.status == 204
        assert resp.headers["Access-Control-Allow-Origin"] == "*"


def test_finalize_accepts_inline_adjudications(service):
    client, _, _ = service
    client.post("/api/labels", {"tweet_id": "t0", "annotator_id": "a",
                                "label": "M"})
    client.post("/api/labels", {"tweet_id": "t0", "annotator_id": "b",
                                "label": "T"})
    status, body = client.post("/api/finalize",
                               {"adjudications": {"t0": "T"}})
    assert status == 200 and body["class_counts"]["T"] == 1


def test_journal_survives_restart(tmp_path):
    # the durability contract: kill the service, restart on the same
    # journal, tallies unchanged
    ds = tweets(["alpha", "beta"])
    store = AnnotationStore(ds, tmp_path / "j.csv")
    server = make_server(store, tmp_path / "out.jsonl")
    threading.Thread(target=server.serve_forever, daemon=True).start()
    client = Client(server.port)
    client.post("/api/labels", {"tweet_id": "t0", "annotator_id": "a",
                                "label": "M"})
    client.post("/api/labels", {"tweet_id": "t1", "annotator_id": "a",
                                "label": "U"})
    status, before = client.get("/api/session")
    server.shutdown()
    server.server_close()
    store.close()

    store2 = AnnotationStore(ds, tmp_path / "j.csv")
    server2 = make_server(store2, tmp_path / "out.jsonl")
    threading.Thread(target=server2.serve_forever, daemon=True).start()
    status, after = Client(server2.port).get("/api/session")
    assert after == before
    server2.shutdown()
    server2.server_close()
    store2.close()


def test_static_ui_with_spa_fallback(tmp_path):
    ui = tmp_path / "ui"
    ui.mkdir()
    (ui / "index.html").write_text("<html>app</html>")
    (ui / "app.js").write_text("console.log(1)")
    ds = tweets(["alpha"])
    store = AnnotationStore(ds, tmp_path / "j.csv")
    server = make_server(store, tmp_path / "out.jsonl", ui_dir=ui)
    threading.Thread(target=server.serve_forever, daemon=True).start()
    base = f"http://127.0.0.1:{server.port}"

    def fetch(path):
        try:
            with urllib.request.urlopen(base + path, timeout=5) as resp:
                return resp.status, resp.read().decode(), \
                    resp.headers.get_content_type()
        except urllib.error.HTTPError as exc:
            return exc.code, "", ""

    assert fetch("/") == (200, "<html>app</html>", "text/html")
    assert fetch("/app.js")[1] == "console.log(1)"
    # client-side routes fall back to the app shell
    assert fetch("/review/t0")[1] == "<html>app</html>"
    # path traversal stays inside the UI directory
    code, body, _ = fetch("/../j.csv")
    assert "annotator" not in body
    server.shutdown()
    server.server_close()
    store.close()
