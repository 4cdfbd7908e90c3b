import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from gravlabel.aggregate import majority_vote, training_set
from gravlabel.errors import NoTrainingDataError
from gravlabel.lf import ABSTAIN, LabelMatrix

from .conftest import numeric_dataset
from .reference import ref_majority

label_matrices = arrays(
    np.int8, st.tuples(st.integers(1, 15), st.integers(1, 6)),
    elements=st.sampled_from([-1, 0, 1]),
)


def matrix(rows):
    entries = np.asarray(rows, dtype=np.int8)
    return LabelMatrix(entries=entries,
                       lf_names=tuple(f"lf{j}" for j in range(entries.shape[1])))


class TestMajorityVote:
    def test_unanimous_among_voters(self):
        assert majority_vote(matrix([[1, 1, -1]])).labels.tolist() == [1]

    def test_tie_abstains(self):
        assert majority_vote(matrix([[1, 0, -1]])).labels.tolist() == [-1]

    def test_all_abstain_abstains(self):
        agg = majority_vote(matrix([[-1, -1]]))
        assert agg.labels.tolist() == [-1]
        assert agg.labeled_count == 0

    def test_thousand_random_rows_match_counting_oracle(self):
        rng = np.random.default_rng(21)
        entries = rng.choice([-1, 0, 1], size=(1000, 5)).astype(np.int8)
        got = majority_vote(matrix(entries)).labels.tolist()
        assert got == ref_majority(entries.tolist())

    @settings(max_examples=50, deadline=None)
    @given(entries=label_matrices, seed=st.integers(0, 999))
    def test_column_permutation_invariance(self, entries, seed):
        perm = np.random.default_rng(seed).permutation(entries.shape[1])
        a = majority_vote(matrix(entries)).labels
        b = majority_vote(matrix(entries[:, perm])).labels
        np.testing.assert_array_equal(a, b)

    @settings(max_examples=50, deadline=None)
    @given(entries=label_matrices)
    def test_all_abstain_column_is_neutral(self, entries):
        padded = np.hstack([entries,
                            np.full((entries.shape[0], 1), -1, dtype=np.int8)])
        a = majority_vote(matrix(entries)).labels
        b = majority_vote(matrix(padded)).labels
        np.testing.assert_array_equal(a, b)

    def test_labeled_count_matches_definition(self):
        agg = majority_vote(matrix([[1, 1], [0, 1], [-1, -1], [0, 0]]))
        assert agg.labels.tolist() == [1, -1, -1, 0]
        assert agg.labeled_count == 2
        assert (agg.labels != ABSTAIN).sum() == 2


class TestTrainingSet:
    def test_filters_in_point_order(self):
        d = numeric_dataset([[0.0], [1.0], [2.0]])
        agg = majority_vote(matrix([[1], [-1], [0]]))
        features, labels = training_set(agg, d)
        assert features[:, 0].tolist() == [0.0, 2.0]
        assert labels.tolist() == [1, 0]

    def test_all_abstain_is_an_error(self):
        d = numeric_dataset([[0.0], [1.0]])
        agg = majority_vote(matrix([[-1], [-1]]))
        with pytest.raises(NoTrainingDataError):
            training_set(agg, d)

    def test_text_training_uses_counts(self):
        from gravlabel.data import (Dataset, build_vocabulary,
                                    vectorize_dataset)

        d = Dataset(kind="text", feature_names=(), X=np.zeros((2, 0)),
                    point_ids=np.arange(2), texts=("a a b", "b c"))
        d = vectorize_dataset(d, build_vocabulary(d.texts))
        agg = majority_vote(matrix([[1], [0]]))
        features, _ = training_set(agg, d)
        assert features[0].max() == 2.0  # counts, not presence
