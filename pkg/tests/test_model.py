import io
import math
import random

import pytest
from hypothesis import given, strategies as st

from nounforge import (
    AssociationModel, DomainError, PairCounts, ParseError, Thesaurus, ValidationError, extract_pairs,
    ingest_pair_counts, load_model, raw_affinity, save_model, train,
)
from nounforge.model import affinity_table, dumps_model, extract_pairs_from_text

from synthetic import random_counts, random_thesaurus


def ingest(text):
    return ingest_pair_counts(io.StringIO(text))


def affinity_oracle(c, t, s1, s2):
    """Cross-product sum straight from the definition, with exact division."""
    from fractions import Fraction
    total = Fraction(0)
    for w1 in t.categories[s1].members:
        for w2 in t.categories[s2].members:
            n = c.counts.get((w1, w2), 0)
            total += Fraction(n, len(t.word_index[w1]) * len(t.word_index[w2]))
    return total


def column_sum(model, s2):
    return math.fsum(model.prob(s1, s2) for s1 in model.thesaurus.categories)


class TestIngest:
    def test_single_line(self):
        c = ingest("coffee\tmug\t5\n")
        assert dict(c.counts) == {("coffee", "mug"): 5}
        assert c.total == 5

    def test_duplicates_sum(self):
        assert ingest("coffee\tmug\t5\nCoffee\tMUG\t5\n").counts == {("coffee", "mug"): 10}

    def test_empty(self):
        c = ingest("")
        assert c.total == 0 and len(c) == 0

    def test_zero_counts_not_stored(self):
        assert dict(ingest("# note\na\tb\t0\n").counts) == {}

    @pytest.mark.parametrize("text, lineno", [
        ("a\tb\t1\na\tb\n", 2),
        ("a\tb\t-3\n", 1),
        ("a\tb\tmany\n", 1),
        ("a b\tc\t1\n", 1),
    ])
    def test_errors(self, text, lineno):
        with pytest.raises(ParseError) as err:
            ingest(text)
        assert err.value.lineno == lineno


@given(*[st.dictionaries(st.tuples(st.sampled_from("abc"), st.sampled_from("xyz")),
                         st.integers(0, 20)) for _ in range(3)])
def test_merge_is_associative_and_commutative(a, b, c):
    a, b, c = PairCounts(a), PairCounts(b), PairCounts(c)
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert (a + b).total == a.total + b.total
    assert all(v > 0 for v in (a + b).counts.values())


class TestExtractPairs:
    t = Thesaurus.from_mapping({"drink": ["coffee"], "vessel": ["mug"], "material": ["pottery"]})

    def test_single_run(self):
        assert extract_pairs("the coffee mug broke".split(), self.t).counts == {("coffee", "mug"): 1}

    def test_run_of_three(self):
        assert extract_pairs("pottery coffee mug".split(), self.t).counts == {}

    def test_run_of_four(self):
        assert extract_pairs("coffee mug coffee mug".split(), self.t).counts == {}

    def test_runs_split_by_punctuation_and_lines(self):
        lines = ["Coffee mug, pottery mug.", "coffee", "mug"]
        counts = extract_pairs_from_text(lines, self.t)
        assert counts.counts == {("coffee", "mug"): 1, ("pottery", "mug"): 1}


class TestRawAffinity:
    def test_zero(self):
        t = Thesaurus.from_mapping({"s1": ["a"], "s2": ["b"]})
        assert raw_affinity(PairCounts(), t, "s1", "s2") == 0.0

    def test_spread_over_ambiguity(self):
        t = Thesaurus.from_mapping({"s1": ["a"], "s1b": ["a"], "s2": ["b"], "s2b": ["b"]})
        c = PairCounts({("a", "b"): 4})
        assert affinity_oracle(c, t, "s1", "s2") == 1
        assert raw_affinity(c, t, "s1", "s2") == 1.0
        assert raw_affinity(c, t, "s1b", "s2") == 1.0
        total = sum(raw_affinity(c, t, x, y) for x in t.categories for y in t.categories)
        assert total == 4

    def test_unknown_category(self):
        t = Thesaurus.from_mapping({"s": ["a"]})
        with pytest.raises(DomainError):
            raw_affinity(PairCounts(), t, "s", "nope")

    @pytest.mark.parametrize("seed", range(20))
    def test_table_matches_definition_and_conserves_mass(self, seed):
        rng = random.Random(seed)
        t = random_thesaurus(rng, n_categories=5, n_words=8)
        c = random_counts(rng, t.word_index)
        table = affinity_table(c, t)
        for s1 in t.categories:
            for s2 in t.categories:
                expected = float(affinity_oracle(c, t, s1, s2))
                assert table.get((s1, s2), 0.0) == pytest.approx(expected, rel=1e-12, abs=0)
                assert raw_affinity(c, t, s1, s2) == pytest.approx(expected, rel=1e-12, abs=0)
        assert abs(math.fsum(table.values()) - c.total) <= 1e-9

    def test_unknown_words_skipped(self):
        t = Thesaurus.from_mapping({"s": ["a"]})
        c = PairCounts({("a", "zzz"): 3, ("a", "a"): 1})
        assert affinity_table(c, t) == {("s", "s"): 1.0}


class TestTrain:
    def test_single_category(self):
        t = Thesaurus.from_mapping({"s": ["a", "b"]})
        for c in (PairCounts(), PairCounts({("a", "b"): 7})):
            assert train(c, t).prob("s", "s") == pytest.approx(1.0, abs=1e-15)

    def test_epsilon_limit(self):
        t = Thesaurus.from_mapping({"m1": ["a"], "m2": ["b"], "h": ["c"], "other": ["d"]})
        c = PairCounts({("a", "c"): 3, ("b", "c"): 1})
        # Brute-force normaliser over all modifiers of head h.
        raw = {s1: raw_affinity(c, t, s1, "h") for s1 in t.categories}
        z = sum(raw.values())
        expected = {s1: v / z for s1, v in raw.items()}
        assert expected["m1"] == 0.75 and expected["m2"] == 0.25
        model = train(c, t, epsilon=1e-12)
        for s1 in t.categories:
            assert model.prob(s1, "h") == pytest.approx(expected[s1], abs=1e-10)

    def test_zero_counts_uniform(self):
        t = Thesaurus.from_mapping({"p": ["a"], "q": ["b"], "r": ["c"]})
        model = train(PairCounts(), t)
        for s1 in "pqr":
            for s2 in "pqr":
                assert model.prob(s1, s2) == pytest.approx(1 / 3, abs=1e-15)

    def test_smoothed_values(self):
        t = Thesaurus.from_mapping({"p": ["a"], "q": ["b"], "r": ["c"]})
        eps = 0.5
        model = train(PairCounts({("a", "c"): 2}), t, epsilon=eps)
        denom = 2 + 3 * eps
        assert model.prob("p", "r") == pytest.approx((2 + eps) / denom, rel=1e-12)
        assert model.prob("q", "r") == pytest.approx(eps / denom, rel=1e-12)
        assert model.prob("r", "r") == pytest.approx(eps / denom, rel=1e-12)
        assert dict(model.link_prob) == {("p", "r"): pytest.approx((2 + eps) / denom)}

    def test_bad_inputs(self):
        with pytest.raises(ValidationError):
            train(PairCounts(), Thesaurus({}))
        with pytest.raises(DomainError):
            train(PairCounts(), Thesaurus.from_mapping({"s": ["a"]}), epsilon=0)

    @pytest.mark.parametrize("seed", range(25))
    def test_normalised_and_positive(self, seed):
        rng = random.Random(seed)
        t = random_thesaurus(rng, n_categories=rng.randint(1, 8), n_words=rng.randint(2, 12))
        model = train(random_counts(rng, t.word_index), t, epsilon=10 ** rng.uniform(-8, 0))
        for s2 in t.categories:
            assert abs(column_sum(model, s2) - 1.0) <= 1e-9
            for s1 in t.categories:
                assert 0 < model.prob(s1, s2) <= 1

    @pytest.mark.parametrize("seed", range(30))
    def test_monotone_in_counts(self, seed):
        # Bumping count(w1 w2) adds d to each cats(w1) cell of a head column
        # and ambiguity(w1) * d to its total, so a cell rises exactly when it
        # was below 1 / ambiguity(w1).  Unambiguous modifiers always rise.
        rng = random.Random(seed)
        t = random_thesaurus(rng, n_categories=5, n_words=8)
        c = random_counts(rng, t.word_index)
        w1, w2 = rng.choice(sorted(t.word_index)), rng.choice(sorted(t.word_index))
        bumped = c + PairCounts({(w1, w2): 3})
        before, after = train(c, t), train(bumped, t)
        m = len(t.word_index[w1])
        for s1 in t.word_index[w1]:
            for s2 in t.word_index[w2]:
                if before.prob(s1, s2) < 1 / m - 1e-12:
                    assert after.prob(s1, s2) > before.prob(s1, s2)
                elif before.prob(s1, s2) > 1 / m + 1e-12:
                    assert after.prob(s1, s2) < before.prob(s1, s2)

    @pytest.mark.parametrize("seed", range(10))
    def test_monotone_for_unambiguous_modifier(self, seed):
        rng = random.Random(seed)
        t = random_thesaurus(rng, n_categories=5, n_words=8)
        t = Thesaurus.from_mapping({**{k: v.members for k, v in t.categories.items()}, "solo": ["lonely"]})
        c = random_counts(rng, t.word_index)
        w2 = rng.choice(sorted(t.word_index))
        before, after = train(c, t), train(c + PairCounts({("lonely", w2): 1}), t)
        for s2 in t.word_index[w2]:
            assert after.prob("solo", s2) > before.prob("solo", s2)

    def test_deterministic(self):
        rng = random.Random(3)
        t = random_thesaurus(rng)
        c = random_counts(rng, t.word_index)
        shuffled = PairCounts(dict(reversed(list(c.counts.items()))))
        assert dumps_model(train(c, t)) == dumps_model(train(shuffled, t))

    def test_metadata_records_inputs(self):
        t = Thesaurus.from_mapping({"s": ["a"]})
        c = PairCounts({("a", "a"): 2})
        meta = train(c, t, epsilon=0.25).metadata
        assert c.digest() in meta and "epsilon=0.25" in meta


class TestModelValidation:
    t = Thesaurus.from_mapping({"p": ["a"], "q": ["b"]})

    @pytest.mark.parametrize("cells", [
        {("p", "q"): 0.0},
        {("p", "q"): 1.5},
        {("p", "x"): 0.5},
        {("p", "q"): 0.7, ("q", "q"): 0.7},
        {("p", "q"): 1.0},  # nothing left for the unseen modifier q
    ])
    def test_rejects(self, cells):
        with pytest.raises(ValidationError):
            AssociationModel(self.t, cells)


class TestPersistence:
    def make(self):
        rng = random.Random(11)
        t = random_thesaurus(rng, n_categories=6, n_words=10)
        return train(random_counts(rng, t.word_index), t, epsilon=1e-4), t

    def test_round_trip(self):
        model, t = self.make()
        text = dumps_model(model)
        again = load_model(io.StringIO(text), t)
        assert dict(again.link_prob) == dict(model.link_prob)
        assert again.epsilon == model.epsilon
        assert dict(again.floors) == dict(model.floors)
        assert dumps_model(again) == text

    def test_file_layout(self):
        model, t = self.make()
        lines = dumps_model(model).splitlines()
        assert lines[0] == "nounforge-model v1 epsilon=0.0001 thesaurus_digest=%s" % t.digest()
        cells = [ln.split("\t") for ln in lines[1:] if not ln.startswith("#")]
        assert [(c[1], c[0]) for c in cells] == sorted((c[1], c[0]) for c in cells)
        for c in cells:
            assert float(c[2]) == model.link_prob[c[0], c[1]]

    def test_digest_mismatch(self):
        model, t = self.make()
        other = Thesaurus.from_mapping({"z": ["z"]})
        with pytest.raises(ValidationError):
            load_model(io.StringIO(dumps_model(model)), other)
        edited = dumps_model(model).replace(t.digest(), "0" * 64)
        with pytest.raises(ValidationError):
            load_model(io.StringIO(edited), t)

    @pytest.mark.parametrize("text", ["", "garbage\n", "nounforge-model v1 epsilon=x thesaurus_digest=0\n"])
    def test_bad_header(self, text):
        with pytest.raises(ParseError):
            load_model(io.StringIO(text), Thesaurus.from_mapping({"s": ["a"]}))

    def test_bad_cell_line(self):
        model, t = self.make()
        with pytest.raises(ParseError) as err:
            load_model(io.StringIO(dumps_model(model) + "p\tq\n"), t)
        assert err.value.lineno is not None

    def test_save_to_stream(self):
        model, t = self.make()
        buf = io.StringIO()
        save_model(model, buf)
        assert buf.getvalue() == dumps_model(model)
