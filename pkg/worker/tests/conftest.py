import pytest
from fastapi.testclient import TestClient

import automl_worker


@pytest.fixture(scope="session")
def client() -> TestClient:
    return TestClient(automl_worker.create_app())


@pytest.fixture(scope="session")
def blobs():
    """Two Gaussian blobs whose centers sit six standard deviations apart.

    The midplane x0 = 0 is a linear separator; the fixture asserts it scores
    at least 0.95 so the accuracy bar below is backed by a hand oracle, not
    by the estimator under test.
    """
    from sklearn.datasets import make_blobs

    x, y = make_blobs(
        n_samples=200,
        centers=[(-3.0, 0.0), (3.0, 0.0)],
        cluster_std=1.0,
        random_state=7,
    )
    midplane = (x[:, 0] > 0).astype(float)
    assert (midplane == y).mean() >= 0.95
    return x.tolist(), [float(v) for v in y]
