import json
import threading
import urllib.error
import urllib.request
from concurrent.futures import ThreadPoolExecutor

import pytest

from trolldetect.service import ScoringApp, make_server

from conftest import make_score_payload


@pytest.fixture(scope="module")
def server(tiny_bundle):
    app = ScoringApp(tiny_bundle)
    httpd = make_server(app, host="127.0.0.1", port=0)  # ephemeral port
    thread = threading.Thread(target=httpd.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{httpd.server_address[1]}"
    httpd.shutdown()
    httpd.server_close()


def http(method, url, body=None):
    request = urllib.request.Request(url, data=body, method=method)
    if body is not None:
        request.add_header("Content-Type", "application/json")
    try:
        with urllib.request.urlopen(request, timeout=10) as response:
            return response.status, response.read(), dict(response.headers)
    except urllib.error.HTTPError as err:
        return err.code, err.read(), dict(err.headers)


# --- handler level -----------------------------------------------------------


def test_health_ready(tiny_bundle):
    app = ScoringApp(tiny_bundle)
    status, doc = app.handle_health()
    assert status == 200
    assert doc["ready"] is True
    assert "segmenter" in doc["model_versions"]


def test_health_not_ready_before_models_load():
    app = ScoringApp(None)
    status, doc = app.handle_health()
    assert status == 200
    assert doc["ready"] is False


def test_score_without_models_is_503():
    app = ScoringApp(None)
    status, doc = app.handle_score(make_score_payload())
    assert status == 503


def test_score_malformed_body_is_400(tiny_bundle):
    app = ScoringApp(tiny_bundle)
    assert app.handle_score(b"not json")[0] == 400
    assert app.handle_score(b"[]")[0] == 400
    assert app.handle_score(b'{"original_text": "x", "comments": []}')[0] == 400
    assert app.handle_score(b'{"comments": [{}]}')[0] == 400


def test_score_counts_and_rejections(tiny_bundle):
    app = ScoringApp(tiny_bundle)
    payload = json.loads(make_score_payload(4))
    payload["comments"][1]["text"] = "转发微博"
    payload["comments"][3] = {"id": "broken", "text": "x"}  # missing user
    status, doc = app.handle_score(json.dumps(payload).encode())
    assert status == 200
    assert len(doc["scored"]) + len(doc["rejected"]) == 4
    reasons = {r["id"]: r["reason"] for r in doc["rejected"]}
    assert reasons["c1"] == "pure-repost"
    assert reasons["broken"].startswith("bad-element")


# --- over HTTP ---------------------------------------------------------------


def test_http_health(server):
    status, body, headers = http("GET", server + "/health")
    assert status == 200
    doc = json.loads(body)
    assert doc["ready"] is True
    assert headers["Access-Control-Allow-Origin"] == "*"


def test_http_score_ten_comment_fixture(server):
    payload = make_score_payload(10)
    status, body, headers = http("POST", server + "/score", payload)
    assert status == 200
    doc = json.loads(body)
    assert len(doc["scored"]) + len(doc["rejected"]) == 10
    assert headers["Access-Control-Allow-Origin"] == "*"


def test_http_score_byte_identical_repeats(server):
    payload = make_score_payload(10)
    _, first, _ = http("POST", server + "/score", payload)
    _, second, _ = http("POST", server + "/score", payload)
    assert first == second


def test_http_concurrent_identical_requests(server):
    payload = make_score_payload(10)
    with ThreadPoolExecutor(max_workers=8) as pool:
        bodies = list(pool.map(lambda _: http("POST", server + "/score", payload)[1], range(8)))
    assert len(set(bodies)) == 1


def test_http_options_preflight(server):
    status, _, headers = http("OPTIONS", server + "/score")
    assert status == 204
    assert "POST" in headers["Access-Control-Allow-Methods"]


def test_http_unknown_path(server):
    status, _, _ = http("GET", server + "/nope")
    assert status == 404
    status, _, _ = http("POST", server + "/nope", b"{}")
    assert status == 404
