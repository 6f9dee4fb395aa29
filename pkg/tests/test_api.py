"""Tests for API endpoints."""
from core.config import settings


def test_root_endpoint(client):
    """Test GET / endpoint."""
    response = client.get("/")

    assert response.status_code == 200
    data = response.json()
    assert data["status"] == "OK"
    assert "analyze" in data["endpoints"]


def test_health_endpoint(client):
    """Test GET /api/health endpoint."""
    response = client.get("/api/health")

    assert response.status_code == 200
    data = response.json()
    assert data["status"] == "healthy"
    assert data["version"] == settings.APP_VERSION
    assert data["precision_bits"] == settings.CL_PRECISION


def test_analyze_endpoint(client):
    """Test GET /api/analyze on the worked cubic."""
    response = client.get("/api/analyze", params={"polynomial": "x^3+3x^2-6x+1"})

    assert response.status_code == 200
    data = response.json()
    assert data["schema"] == 1
    assert data["galois"]["kind"] == "cyclic"
    assert data["certificate"]["kissing"] == 6
    assert data["determinant"]["det_gram"] == 6561


def test_analyze_reducible_is_422(client):
    """Test that domain errors map to 422 with their code."""
    response = client.get("/api/analyze", params={"polynomial": "x^2+x-2"})

    assert response.status_code == 422
    assert response.json()["code"] == "reducible"


def test_analyze_parse_error_is_422(client):
    """Test malformed polynomial text."""
    response = client.get("/api/analyze", params={"polynomial": "x^^2"})

    assert response.status_code == 422
    assert response.json()["code"] == "parse"


def test_analyze_non_monic_cubic_is_400(client):
    """Test that unsupported input maps to 400."""
    response = client.get("/api/analyze", params={"polynomial": "2x^3+1"})

    assert response.status_code == 400
    assert response.json()["code"] == "unsupported"


def test_analyze_precision_floor(client):
    """Test query validation of the precision parameter."""
    response = client.get("/api/analyze", params={"polynomial": "x^2-2x-1", "precision": 16})

    assert response.status_code == 422


def test_family_endpoint(client):
    """Test POST /api/family."""
    response = client.post("/api/family", json={"n": 3, "count": 2})

    assert response.status_code == 200
    data = response.json()
    assert [m["polynomial"] for m in data] == ["x^3+23x^2-21", "x^3+24x^2-22"]
    assert all(m["verified"]["value"] is True for m in data)


def test_family_count_cap_is_413(client):
    """Test the family size cap."""
    response = client.post("/api/family", json={"n": 3, "count": 51})

    assert response.status_code == 413
    assert response.json()["code"] == "resource"


def test_family_bad_degree_is_422(client):
    """Test a composite family degree."""
    response = client.post("/api/family", json={"n": 4, "count": 1})

    assert response.status_code == 422
    assert response.json()["code"] == "domain"
