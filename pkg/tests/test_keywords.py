import pytest
from hypothesis import given
from hypothesis import strategies as st

from reqplan.errors import UnknownRequirement
from reqplan.keywords import (KeywordProfile, normalize_keywords,
                              recommend_validators, similarity,
                              similarity_matrix, token_similarity)

# Expected stakeholder x requirement similarities (frozen from the published
# comparison table; 0.66 there truncates 2/3).
EXPECTED = {
    ("req1", "user1"): 0.4,
    ("req2", "user2"): 2 / 3,
    ("req3", "user2"): 0.5,
    ("req3", "user3"): 1.0,
    ("req3", "user4"): 0.8,
    ("req4", "user4"): 0.8,
    ("req5", "user1"): 0.4,
    ("req5", "user4"): 0.4,
}


def test_normalize_splits_and_lowercases():
    assert normalize_keywords("registration users") == {"registration", "users"}
    assert normalize_keywords("Credit Card, payment!") == {"credit", "card", "payment"}
    assert normalize_keywords("") == frozenset()


def test_normalize_deduplicates():
    assert normalize_keywords("pay pay PAY") == {"pay"}


def test_normalize_optional_stopwords():
    assert normalize_keywords("the payment", stopwords={"the"}) == {"payment"}


def test_similarity_profile_values():
    user1 = KeywordProfile("user1", frozenset({"registration", "feature",
                                               "database", "connection"}))
    req1 = KeywordProfile("req1", frozenset({"registration", "users"}))
    assert similarity(user1, req1) == pytest.approx(0.4)

    user3 = KeywordProfile("user3", frozenset({"credit", "card", "interfaces"}))
    req3 = KeywordProfile("req3", frozenset({"credit", "card", "payment"}))
    assert similarity(user3, req3) == pytest.approx(1.0)


def test_similarity_identical_nonempty_is_two():
    p = KeywordProfile("a", frozenset({"x", "y"}))
    q = KeywordProfile("b", frozenset({"x", "y"}))
    assert similarity(p, q) == 2.0


def test_similarity_both_empty_is_zero():
    assert token_similarity(frozenset(), frozenset()) == 0.0


def test_union_denominator_not_classic_dice():
    # classic Dice would give 2*1/(4+2) = 1/3 for the first pair; the union
    # form gives 2*1/5 = 0.4, which is what the published table shows
    a = frozenset({"registration", "feature", "database", "connection"})
    b = frozenset({"registration", "users"})
    assert token_similarity(a, b) == pytest.approx(0.4)
    assert token_similarity(a, b) != pytest.approx(1 / 3)


def test_similarity_matrix_reproduces_table(keyword_doc):
    matrix = similarity_matrix(keyword_doc.project)
    assert len(matrix.values) == 20
    for key, value in matrix.values.items():
        assert value == pytest.approx(EXPECTED.get(key, 0.0), abs=0.01)


def test_matrix_empty_profile_gives_zero_column(keyword_doc):
    from reqplan.model import ProjectModel, Stakeholder
    p = keyword_doc.project
    extended = ProjectModel(
        requirements=p.requirements,
        stakeholders=p.stakeholders + (Stakeholder(id="user9"),),
        dimensions=p.dimensions, evaluations=p.evaluations, horizon=p.horizon)
    matrix = similarity_matrix(extended)
    assert all(matrix.values[(r.id, "user9")] == 0.0 for r in p.requirements)


def test_matrix_identical_profiles_hit_two():
    from reqplan.model import ProjectModel, Requirement, Stakeholder
    project = ProjectModel(
        requirements=(Requirement(id="r", keywords=frozenset({"a", "b"})),),
        stakeholders=(Stakeholder(id="s", expertise_keywords=frozenset({"a", "b"})),))
    assert similarity_matrix(project).values[("r", "s")] == 2.0


def test_recommend_req3_top_two(keyword_doc):
    top = recommend_validators(keyword_doc.project, "req3", 2)
    assert [(sid, round(score, 2)) for sid, score in top] == \
        [("user3", 1.0), ("user4", 0.8)]


def test_recommend_req5_tie_breaks_by_id(keyword_doc):
    top = recommend_validators(keyword_doc.project, "req5", 2)
    assert [sid for sid, _ in top] == ["user1", "user4"]
    assert all(score == pytest.approx(0.4) for _, score in top)


def test_recommend_excludes_zero_scores(keyword_doc):
    top = recommend_validators(keyword_doc.project, "req1", 4)
    assert top == [("user1", pytest.approx(0.4))]


def test_recommend_unknown_requirement(keyword_doc):
    with pytest.raises(UnknownRequirement):
        recommend_validators(keyword_doc.project, "req99", 2)


_tokens = st.frozensets(st.sampled_from("abcdefgh"), max_size=6)


@given(_tokens, _tokens)
def test_similarity_symmetric(a, b):
    assert token_similarity(a, b) == token_similarity(b, a)


@given(_tokens, _tokens)
def test_similarity_range_and_extremes(a, b):
    value = token_similarity(a, b)
    assert 0.0 <= value <= 2.0
    assert (value == 0.0) == (not (a & b))
    assert (value == 2.0) == (a == b and bool(a))


@given(_tokens, _tokens, st.sampled_from("xyz"))
def test_foreign_token_never_increases_similarity(a, b, extra):
    if extra not in a and extra not in b:
        assert token_similarity(a | {extra}, b) <= token_similarity(a, b)
