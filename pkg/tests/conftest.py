import json
import random
from functools import lru_cache
from pathlib import Path

import pytest

from toughham.graph import Graph, as_mask

DATA = Path(__file__).with_name("data")

# Hand-drawn instance: S = 0..11, three components hanging below it.
# D1 = K2 on 12-13, D2 = K3 on 14-16, D3 on 17..21 with W = {20, 21}.
DRAWN_S = list(range(12))
DRAWN_D1, DRAWN_D2, DRAWN_D3 = [12, 13], [14, 15, 16], [17, 18, 19, 20, 21]
DRAWN_W = [20, 21]
DRAWN_STARS = {
    "D1": [(12, 0), (12, 1), (13, 2), (13, 3)],
    "D2": [(14, 4), (16, 5), (16, 6), (15, 7)],
    "D3": [(17, 8), (20, 9), (21, 10), (19, 11)],
}


def drawn_graph(extra_s_edges=()) -> Graph:
    edges = [(12, 13), (14, 16), (16, 15), (15, 14),
             (17, 20), (20, 18), (18, 21), (21, 19), (19, 20), (17, 21), (21, 20)]
    for stars in DRAWN_STARS.values():
        edges += [(x, d) for d, x in stars]
    edges += list(extra_s_edges)
    return Graph.from_edges(22, edges)


@lru_cache(maxsize=None)
def fixtures() -> dict:
    return json.loads((DATA / "fixtures.json").read_text())


def load(record) -> tuple[Graph, int]:
    return Graph.from_edges(record["n"], [tuple(e) for e in record["edges"]]), as_mask(record["s"])


@pytest.fixture
def rng():
    return random.Random(12345)
