import pytest

from reqplan.consensus import AssignmentPreferences
from reqplan.project_io import load_fixture

# Group evaluation tables used throughout: requirement -> ratings by
# user1..user4, dimensions relevance (weight 0.75) and risk (weight 0.25).
RELEVANCE = {
    "req1": (1, 4, 5, 2),
    "req2": (10, 6, 1, 7),
    "req3": (2, 6, 5, 2),
    "req4": (1, 1, 3, 7),
    "req5": (7, 8, 6, 5),
}
RISK = {
    "req1": (2, 7, 3, 2),
    "req2": (9, 9, 1, 7),
    "req3": (2, 10, 3, 2),
    "req4": (2, 5, 3, 1),
    "req5": (3, 2, 3, 5),
}
USERS = ("user1", "user2", "user3", "user4")

# Release wishes per stakeholder (columns) and requirement (rows), horizon 4.
RELEASE_WISHES = {
    "req1": (1, 1, 2, 1),
    "req2": (2, 2, 3, 3),
    "req3": (3, 3, 3, 3),
    "req4": (1, 2, 2, 3),
    "req5": (4, 1, 1, 1),
}


@pytest.fixture(scope="session")
def early_doc():
    return load_fixture("early_re.json")


@pytest.fixture(scope="session")
def sparse_doc():
    return load_fixture("sparse_ratings.json")


@pytest.fixture(scope="session")
def basic_doc():
    return load_fixture("basic_planning.json")


@pytest.fixture(scope="session")
def release_doc():
    return load_fixture("release_planning.json")


@pytest.fixture(scope="session")
def keyword_doc():
    return load_fixture("keyword_match.json")


@pytest.fixture()
def wish_prefs():
    return AssignmentPreferences(
        prefs={(USERS[i], rid): rels[i]
               for rid, rels in RELEASE_WISHES.items() for i in range(4)},
        horizon=4,
    )
