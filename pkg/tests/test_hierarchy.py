import numpy as np
import pytest

from oracles import brute_force_assignment
from topicatlas.hierarchy import (
    HierarchyError,
    assign_subtopics,
    build_hierarchy,
    cosine_distance,
    display_label,
    label_topic,
    topic_weight,
)
from topicatlas.lda import Hyperparams, TopicModel
from topicatlas.textprep import Vocabulary


def make_model(theta, phi=None, terms=None):
    theta = np.asarray(theta, dtype=np.float64)
    k = theta.shape[1]
    if phi is None:
        phi = np.full((k, 3), 1.0 / 3.0)
    phi = np.asarray(phi, dtype=np.float64)
    if terms is None:
        terms = [f"w{i}" for i in range(phi.shape[1])]
    vocab = Vocabulary.build(terms, [1] * len(terms))
    return TopicModel(
        phi=phi, theta=theta,
        hyper=Hyperparams(k=k, iterations=2, burn_in=0),
        vocab=vocab, doc_ids=tuple(str(i) for i in range(theta.shape[0])),
    )


class TestAssignSubtopics:
    def test_identity_when_sub_equals_main(self):
        rng = np.random.default_rng(0)
        theta = rng.dirichlet(np.ones(4), size=6)
        model = make_model(theta)
        assert assign_subtopics(model, model) == (0, 1, 2, 3)

    def test_hand_built_case_matches_brute_force(self):
        theta_main = np.array([
            [0.9, 0.1], [0.8, 0.2], [0.2, 0.8], [0.1, 0.9],
        ])
        theta_sub = np.array([
            [0.7, 0.2, 0.1], [0.2, 0.2, 0.6], [0.1, 0.3, 0.6], [0.0, 0.4, 0.6],
        ])
        main = make_model(theta_main)
        sub = make_model(theta_sub)
        assert list(assign_subtopics(main, sub)) == brute_force_assignment(theta_main, theta_sub)

    def test_random_cases_match_brute_force(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            d = int(rng.integers(2, 12))
            km = int(rng.integers(1, 5))
            ks = int(rng.integers(1, 9))
            main = make_model(rng.dirichlet(np.ones(km), size=d))
            sub = make_model(rng.dirichlet(np.ones(ks), size=d))
            assert list(assign_subtopics(main, sub)) == brute_force_assignment(
                main.theta, sub.theta
            )

    def test_doc_count_mismatch(self):
        main = make_model(np.full((3, 2), 0.5))
        sub = make_model(np.full((4, 2), 0.5))
        with pytest.raises(HierarchyError, match="mismatch"):
            assign_subtopics(main, sub)

    def test_invariant_under_rescaling(self):
        rng = np.random.default_rng(2)
        theta_main = rng.dirichlet(np.ones(3), size=8)
        theta_sub = rng.dirichlet(np.ones(5), size=8)
        base = assign_subtopics(make_model(theta_main), make_model(theta_sub))
        scaled = assign_subtopics(make_model(theta_main * 7.0), make_model(theta_sub * 7.0))
        assert base == scaled

    def test_groups_partition_subtopics(self):
        rng = np.random.default_rng(3)
        main = make_model(rng.dirichlet(np.ones(3), size=10))
        sub = make_model(rng.dirichlet(np.ones(7), size=10))
        hier = build_hierarchy(main, sub)
        all_members = [s for m in range(main.k) for s in hier.group(m)]
        assert sorted(all_members) == list(range(sub.k))


class TestCosineDistance:
    def test_zero_vectors_total(self):
        assert cosine_distance(np.zeros(3), np.ones(3)) == 1.0
        assert cosine_distance(np.zeros(3), np.zeros(3)) == 0.0


class TestLabelTopic:
    def test_one_hot(self):
        phi = np.array([[0.0, 1.0, 0.0]])
        model = make_model(np.array([[1.0]]), phi=phi, terms=["alpha", "virus", "beta"])
        assert label_topic(model, 0, 1) == ("virus",)
        assert display_label(label_topic(model, 0, 1)) == "Virus"

    def test_ordering_by_weight(self):
        phi = np.array([[0.5, 0.3, 0.2]])
        model = make_model(np.array([[1.0]]), phi=phi,
                           terms=["social", "measure", "intervention"])
        assert label_topic(model, 0, 3) == ("social", "measure", "intervention")
        assert display_label(label_topic(model, 0, 3)) == "Social-Measure-Intervention"

    def test_tie_breaks_by_vocab_index(self):
        phi = np.array([[0.4, 0.4, 0.2]])
        model = make_model(np.array([[1.0]]), phi=phi, terms=["zeta", "alpha", "mid"])
        assert label_topic(model, 0, 2) == ("zeta", "alpha")

    def test_range_errors(self):
        model = make_model(np.array([[1.0]]))
        with pytest.raises(IndexError):
            label_topic(model, 1, 1)
        with pytest.raises(IndexError):
            label_topic(model, 0, 0)
        with pytest.raises(IndexError):
            label_topic(model, 0, 99)


class TestTopicWeight:
    def test_single_doc(self):
        model = make_model(np.array([[0.25, 0.75]]))
        assert topic_weight(model, 0) == pytest.approx(0.25)

    def test_hand_sums(self):
        theta = np.array([[0.2, 0.8], [0.5, 0.5], [0.9, 0.1]])
        model = make_model(theta)
        assert topic_weight(model, 0) == pytest.approx(1.6)
        assert topic_weight(model, 1) == pytest.approx(1.4)

    def test_total_equals_doc_count(self):
        rng = np.random.default_rng(4)
        theta = rng.dirichlet(np.ones(5), size=9)
        model = make_model(theta)
        assert sum(topic_weight(model, k) for k in range(5)) == pytest.approx(9.0, abs=1e-6)
