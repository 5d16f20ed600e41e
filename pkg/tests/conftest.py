from __future__ import annotations

import pytest

from lmexposure import scores, taxonomy
from lmexposure.fixtures import fixture_path


@pytest.fixture(scope="session")
def medium_taxonomy() -> taxonomy.Taxonomy:
    return taxonomy.load_taxonomy(fixture_path("taxonomy_medium63.csv"))


@pytest.fixture(scope="session")
def full_taxonomy() -> taxonomy.Taxonomy:
    return taxonomy.load_taxonomy(fixture_path("taxonomy_full_synthetic.csv"))


@pytest.fixture(scope="session")
def score_table() -> scores.ScoreTable:
    return scores.read_score_table(fixture_path("medium63_scores.csv"))
