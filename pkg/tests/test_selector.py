"""Tests for view generation, candidate scoring, random search and result files."""

import json

import numpy as np
import pytest

from src.augment.chain import sample_chain
from src.augment.distribution import AugDistribution, distribution_to_dict, no_augmentation, sample_distribution
from src.corpus.audio import cut_random_segment
from src.corpus.manifest import Dataset, DatasetEntry, load_dataset_audio, load_manifest
from src.corpus.synthetic import generate_synthetic_corpus
from src.features.mel import pooled_features
from src.kernelstats.dependence import DependenceScore
from src.selector.report import read_search_result, search_result_records, write_search_result
from src.selector.search import (
    ScoredCandidate,
    SearchResult,
    derive_seed,
    random_search,
    score_candidates,
    score_distribution,
    scoring_rng,
    subsample_origins,
)
from src.selector.views import ScoringConfig, generate_views
from src.utils.exceptions import CandidateScoringError, ConfigurationError, DataError


def band_destroyer() -> AugDistribution:
    values = distribution_to_dict(no_augmentation())
    values.update(p_bandreject=1.0, band_scaler=1.0)
    return AugDistribution(**values)


class TestScoringConfig:
    """Test cases for scoring configuration."""

    @pytest.mark.unit
    def test_defaults(self):
        cfg = ScoringConfig()
        assert (cfg.n_views, cfg.epsilon, cfg.max_origins) == (20, 1e-3, 100)

    @pytest.mark.unit
    @pytest.mark.parametrize('field,value', [('n_views', 0), ('epsilon', 0.0), ('max_origins', -1),
                                             ('segment_seconds', 0.0)])
    def test_invalid_values(self, field, value):
        with pytest.raises(ConfigurationError, match=field):
            ScoringConfig(**{field: value})

    @pytest.mark.unit
    def test_dict_round_trip(self):
        cfg = ScoringConfig(n_views=4, epsilon=0.01)
        assert ScoringConfig.from_dict(cfg.to_dict()) == cfg


class TestGenerateViews:
    """Test cases for augmented view sets."""

    @pytest.mark.unit
    def test_view_counts(self, small_dataset):
        ds, audio = small_dataset
        three = ds.subset(ds.ids[:3])
        views = generate_views(three, sample_distribution(np.random.default_rng(0)), 20,
                               np.random.default_rng(1), audio)
        assert len(views) == 60
        assert views.features.shape == (60, 64)
        for entry in three.entries:
            assert views.origin_ids.count(entry.id) == 20
        assert list(views.downstream_labels) == three.labels_of(list(views.origin_ids))

    @pytest.mark.unit
    def test_single_unaugmented_view(self, small_dataset):
        ds, audio = small_dataset
        d = no_augmentation()
        views = generate_views(ds, d, 1, np.random.default_rng(3), audio)

        replay = np.random.default_rng(3)
        expected = []
        for entry in ds.entries:
            segment = cut_random_segment(audio[entry.id], 1.0, replay)
            assert len(sample_chain(d, replay)) == 0
            expected.append(pooled_features(segment))
        np.testing.assert_array_equal(views.features, np.vstack(expected))

    @pytest.mark.unit
    def test_deterministic(self, small_dataset):
        ds, audio = small_dataset
        d = sample_distribution(np.random.default_rng(2))
        a = generate_views(ds, d, 2, np.random.default_rng(4), audio)
        b = generate_views(ds, d, 2, np.random.default_rng(4), audio)
        np.testing.assert_array_equal(a.features, b.features)

    @pytest.mark.unit
    def test_empty_dataset(self):
        with pytest.raises(ConfigurationError):
            generate_views(Dataset(()), no_augmentation(), 1, np.random.default_rng(0), {})


class TestScoreDistribution:
    """Test cases for scoring one distribution."""

    @pytest.mark.unit
    def test_deterministic(self, small_dataset, scoring_config):
        ds, audio = small_dataset
        d = sample_distribution(np.random.default_rng(5))
        first = score_distribution(ds, d, scoring_config, scoring_rng(42), audio)
        second = score_distribution(ds, d, scoring_config, scoring_rng(42), audio)
        assert first.value == second.value
        assert first.n == 12 * scoring_config.n_views
        assert first.epsilon == scoring_config.epsilon

    @pytest.mark.unit
    def test_each_sample_its_own_label_cancels(self, small_dataset):
        ds, audio = small_dataset
        own = Dataset(tuple(DatasetEntry(e.id, e.path, e.id) for e in ds.entries))
        cfg = ScoringConfig(n_views=3, epsilon=1e-6)
        score = score_distribution(own, no_augmentation(), cfg, np.random.default_rng(0), audio)
        assert abs(score.value) < 1e-3

    @pytest.mark.unit
    def test_single_label_rejected(self, small_dataset, scoring_config):
        ds, audio = small_dataset
        one_label = Dataset(tuple(DatasetEntry(e.id, e.path, 'same') for e in ds.entries))
        with pytest.raises(DataError, match='2 labels'):
            score_distribution(one_label, no_augmentation(), scoring_config, np.random.default_rng(0), audio)

    @pytest.mark.unit
    def test_subsample_is_fixed_by_config(self, small_dataset):
        ds, _ = small_dataset
        cfg = ScoringConfig(max_origins=5, subsample_seed=3)
        first = subsample_origins(ds, cfg)
        assert len(first) == 5
        assert first.ids == subsample_origins(ds, cfg).ids
        assert subsample_origins(ds, ScoringConfig(max_origins=50)) is ds


class TestSearchResult:
    """Test cases for result ordering and identity."""

    @pytest.mark.unit
    def test_sorted_ascending(self, search_result_factory):
        result = search_result_factory([0.5, -0.1, 2.0, 0.3])
        assert result.scores == [-0.1, 0.3, 0.5, 2.0]
        assert result.best().index == 1
        assert result.best().score.value == min(result.scores)

    @pytest.mark.unit
    def test_ties_keep_sampling_order(self, search_result_factory):
        result = search_result_factory([1.0, 0.2, 0.2, 0.2])
        assert [c.index for c in result.candidates] == [1, 2, 3, 0]

    @pytest.mark.unit
    def test_identifier_depends_on_content(self, search_result_factory):
        a = search_result_factory([0.1, 0.2], seed=1)
        b = search_result_factory([0.1, 0.2], seed=1)
        c = search_result_factory([0.1, 0.3], seed=1)
        assert a.identifier == b.identifier
        assert a.identifier != c.identifier
        assert len(a.identifier) == 16

    @pytest.mark.unit
    def test_empty_result_has_no_best(self):
        with pytest.raises(DataError):
            SearchResult(()).best()


class TestSeeds:
    """Test cases for per-candidate seed derivation."""

    @pytest.mark.unit
    def test_derive_seed_is_stable_and_distinct(self):
        seeds = [derive_seed(7, i) for i in range(50)]
        assert seeds == [derive_seed(7, i) for i in range(50)]
        assert len(set(seeds)) == 50
        assert derive_seed(7, 0) != derive_seed(8, 0)


class TestScoreCandidates:
    """Test cases for scoring explicit candidate lists."""

    @pytest.mark.unit
    def test_failing_candidate_aborts_with_index(self, small_dataset, scoring_config, mocker):
        ds, audio = small_dataset
        mocker.patch('src.selector.search.score_distribution',
                      side_effect=[DependenceScore(1.0, 36, 1e-3), DataError('degenerate views')])
        with pytest.raises(CandidateScoringError) as excinfo:
            score_candidates(ds, [no_augmentation(), no_augmentation(), no_augmentation()],
                             scoring_config, master_seed=0, audio=audio)
        assert excinfo.value.candidate_index == 1
        assert excinfo.value.exit_code == 2

    @pytest.mark.unit
    def test_empty_list(self, small_dataset, scoring_config):
        ds, audio = small_dataset
        with pytest.raises(ConfigurationError):
            score_candidates(ds, [], scoring_config, master_seed=0, audio=audio)

    @pytest.mark.unit
    def test_config_block_is_embedded(self, small_dataset, scoring_config):
        ds, audio = small_dataset
        result = score_candidates(ds, [no_augmentation()], scoring_config, master_seed=9, audio=audio,
                                  extra_config={'run': 'unit'})
        assert result.config['scoring'] == scoring_config.to_dict()
        assert result.config['master_seed'] == 9
        assert result.config['run'] == 'unit'


class TestRandomSearch:
    """Test cases for random search."""

    @pytest.mark.unit
    def test_single_candidate_is_selected(self, small_dataset, scoring_config):
        ds, audio = small_dataset
        result = random_search(ds, 1, scoring_config, master_seed=3, audio=audio)
        assert len(result) == 1
        assert result.best().index == 0
        assert result.best().distribution == sample_distribution(np.random.default_rng([derive_seed(3, 0), 0]))

    @pytest.mark.unit
    def test_same_seed_same_ranking(self, small_dataset, scoring_config):
        ds, audio = small_dataset
        first = random_search(ds, 3, scoring_config, master_seed=11, audio=audio)
        second = random_search(ds, 3, scoring_config, master_seed=11, audio=audio)
        assert [c.index for c in first.candidates] == [c.index for c in second.candidates]
        assert first.scores == second.scores

    @pytest.mark.integration
    def test_parallel_matches_sequential(self, small_dataset, scoring_config):
        ds, audio = small_dataset
        sequential = random_search(ds, 4, scoring_config, master_seed=2, workers=1, audio=audio)
        parallel = random_search(ds, 4, scoring_config, master_seed=2, workers=2, audio=audio)
        assert parallel.identifier == sequential.identifier

    @pytest.mark.unit
    def test_invalid_count(self, small_dataset, scoring_config):
        ds, audio = small_dataset
        with pytest.raises(ConfigurationError):
            random_search(ds, 0, scoring_config, master_seed=0, audio=audio)


class TestSearchResultFile:
    """Test cases for the line-delimited result file."""

    @pytest.mark.unit
    def test_record_layout(self, search_result_factory):
        result = search_result_factory([0.4, 0.1, 0.3])
        records = search_result_records(result)
        assert len(records) == 1 + 3 + 1
        assert records[0]['record'] == 'header'
        assert records[0]['identifier'] == result.identifier
        assert [r['rank'] for r in records[1:4]] == [1, 2, 3]
        assert records[-1]['record'] == 'selected'
        assert records[-1]['index'] == result.best().index
        assert set(records[1]['distribution']) == set(distribution_to_dict(no_augmentation()))

    @pytest.mark.unit
    def test_round_trip(self, tmp_path, search_result_factory):
        result = search_result_factory([0.4, 0.1, 0.3, -0.2], seed=5)
        restored = read_search_result(write_search_result(result, tmp_path / 'r.jsonl'))
        assert restored.candidates == result.candidates
        assert restored.config == result.config
        assert restored.identifier == result.identifier

    @pytest.mark.unit
    def test_identical_results_give_identical_bytes(self, tmp_path, search_result_factory):
        a = write_search_result(search_result_factory([0.3, 0.2], seed=2), tmp_path / 'a.jsonl')
        b = write_search_result(search_result_factory([0.3, 0.2], seed=2), tmp_path / 'b.jsonl')
        assert a.read_bytes() == b.read_bytes()

    @pytest.mark.unit
    def test_count_mismatch_rejected(self, tmp_path, search_result_factory):
        path = write_search_result(search_result_factory([0.3, 0.2]), tmp_path / 'r.jsonl')
        lines = path.read_text().splitlines()
        path.write_text('\n'.join([lines[0], lines[1], lines[-1]]) + '\n')
        with pytest.raises(DataError, match='announces'):
            read_search_result(path)

    @pytest.mark.unit
    def test_missing_header_rejected(self, tmp_path):
        path = tmp_path / 'r.jsonl'
        path.write_text(json.dumps({'record': 'candidate'}) + '\n')
        with pytest.raises(DataError, match='header'):
            read_search_result(path)

    @pytest.mark.unit
    @pytest.mark.parametrize('line', ['"header"', '[1, 2]', 'null'])
    def test_non_object_line_rejected(self, tmp_path, search_result_factory, line):
        path = write_search_result(search_result_factory([0.3, 0.2]), tmp_path / 'r.jsonl')
        path.write_text(path.read_text() + line + '\n')
        with pytest.raises(DataError, match='JSON object'):
            read_search_result(path)

    @pytest.mark.unit
    def test_invalid_utf8_rejected(self, tmp_path):
        path = tmp_path / 'r.jsonl'
        path.write_bytes(b'{"record": "\xff"}\n')
        with pytest.raises(DataError, match='cannot read'):
            read_search_result(path)


@pytest.mark.slow
class TestSelectionSanity:
    """Desk-scale checks on the two-band synthetic corpus."""

    @pytest.fixture(scope='class')
    def corpus(self, tmp_path_factory):
        manifest = generate_synthetic_corpus(tmp_path_factory.mktemp('sanity'), n_per_class=20, seed=0)
        ds = load_manifest(manifest)
        return ds, load_dataset_audio(ds)

    def test_band_destroying_candidate_is_separated(self, corpus):
        ds, audio = corpus
        cfg = ScoringConfig(n_views=10)
        baseline = [score_distribution(ds, no_augmentation(), cfg, scoring_rng(s), audio).value for s in range(10)]
        destroyed = [score_distribution(ds, band_destroyer(), cfg, scoring_rng(s), audio).value for s in range(10)]
        gap = abs(np.mean(baseline) - np.mean(destroyed))
        assert gap > 5 * max(np.std(baseline), np.std(destroyed))

    def test_search_is_deterministic(self, corpus):
        ds, audio = corpus
        cfg = ScoringConfig(n_views=10)
        first = random_search(ds, 30, cfg, master_seed=1, workers=4, audio=audio)
        second = random_search(ds, 30, cfg, master_seed=1, workers=4, audio=audio)
        assert first.identifier == second.identifier
        assert len(first) == 30
