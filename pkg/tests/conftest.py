import warnings

import pytest


@pytest.fixture(scope="session")
def client():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

        from fracbubble.api.app import app

        return TestClient(app)
