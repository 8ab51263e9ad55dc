import asyncio

import httpx
import pytest

from torlog.chain import CochainComplex
from torlog.linalg import Matrix


@pytest.fixture
def circle() -> CochainComplex:
    """Twisted circle: d_0 = rho(g) - I for the 3-4-5 rotation; acyclic."""
    rot = Matrix([["3/5", "-4/5"], ["4/5", "3/5"]])
    return CochainComplex([2, 2], [rot - Matrix.identity(2)])


@pytest.fixture
def interval() -> CochainComplex:
    """Two vertices, one edge; betti (1, 0)."""
    return CochainComplex([2, 1], [Matrix([[-1, 1]])])


@pytest.fixture
def two_term() -> CochainComplex:
    """Multiplication by 2 in a single pair of degrees; acyclic."""
    return CochainComplex([1, 1], [Matrix([[2]])])


@pytest.fixture
def point() -> CochainComplex:
    return CochainComplex([1], [])


@pytest.fixture
def circle_trivial() -> CochainComplex:
    """Circle with untwisted coefficients: d_0 = 0; betti (1, 1)."""
    return CochainComplex([1, 1], [Matrix([[0]])])


class ServiceClient:
    """Synchronous wrapper over the service app for tests."""

    def __init__(self):
        from torlog.service import create_app
        self.app = create_app()

    def post(self, path: str, body: dict):
        async def go():
            transport = httpx.ASGITransport(app=self.app)
            async with httpx.AsyncClient(transport=transport,
                                         base_url="http://test") as client:
                r = await client.post(path, json=body)
                return r.status_code, r.json()
        return asyncio.run(go())


@pytest.fixture(scope="session")
def svc() -> ServiceClient:
    return ServiceClient()
