"""Tests for Mean Extremal Difference and report emission."""

import json

import numpy as np
import pandas as pd
import pytest

from src.analysis.med import MEDReport, compare_med_reports, extremal_groups, med, med_report
from src.analysis.reports import emit_report, read_med_report, search_result_frame, write_med_report
from src.augment.distribution import (
    PARAMETER_NAMES,
    AugDistribution,
    distribution_to_dict,
    no_augmentation,
    sample_distribution,
)
from src.utils.exceptions import ConfigurationError, DataError, ReportError


def with_values(**overrides) -> AugDistribution:
    values = distribution_to_dict(no_augmentation())
    values.update(overrides)
    return AugDistribution(**values)


def brute_med(scores, distributions, k, param):
    order = sorted(range(len(scores)), key=lambda i: (scores[i], i))
    best, worst = order[:k], order[::-1][:k]
    return sum(distributions[b].value(param) - distributions[w].value(param) for b, w in zip(best, worst)) / k


class TestMed:
    """Test cases for the MED statistic."""

    @pytest.mark.unit
    def test_two_candidates_k1(self, search_result_factory):
        low = with_values(p_pitch=0.9, timedrop_max=40.0)
        high = with_values(p_pitch=0.2, timedrop_max=120.0)
        result = search_result_factory([5.0, 1.0], distributions=[high, low])
        assert med(result, 1, 'p_pitch') == pytest.approx(0.7)
        assert med(result, 1, 'timedrop_max') == pytest.approx(-80.0)
        assert med(result, 1, 'p_reverb') == 0.0

    @pytest.mark.unit
    def test_matches_brute_force(self, search_result_factory):
        gen = np.random.default_rng(21)
        scores = list(gen.normal(size=100))
        distributions = [sample_distribution(gen) for _ in scores]
        result = search_result_factory(scores, distributions=distributions)
        for k in (1, 5, 10):
            for name in PARAMETER_NAMES:
                assert med(result, k, name) == pytest.approx(brute_med(scores, distributions, k, name), rel=1e-12)

    @pytest.mark.unit
    def test_reversed_scores_flip_sign(self, search_result_factory):
        gen = np.random.default_rng(3)
        scores = list(gen.normal(size=40))
        distributions = [sample_distribution(gen) for _ in scores]
        forward = med_report(search_result_factory(scores, distributions=distributions), 5)
        backward = med_report(search_result_factory([-s for s in scores], distributions=distributions), 5)
        for name in PARAMETER_NAMES:
            assert backward.values[name] == pytest.approx(-forward.values[name], abs=1e-12)

    @pytest.mark.unit
    def test_monotone_score_transform_keeps_values(self, search_result_factory):
        gen = np.random.default_rng(4)
        scores = list(gen.normal(size=30))
        distributions = [sample_distribution(gen) for _ in scores]
        base = med_report(search_result_factory(scores, distributions=distributions), 3)
        scaled = med_report(search_result_factory([10.0 * s + 2.5 for s in scores], distributions=distributions), 3)
        assert scaled.values == base.values

    @pytest.mark.unit
    def test_identical_candidates_give_zero(self, search_result_factory):
        d = sample_distribution(np.random.default_rng(0))
        result = search_result_factory(list(range(10)), distributions=[d] * 10)
        assert all(v == 0.0 for v in med_report(result, 5).values.values())

    @pytest.mark.unit
    def test_k_too_large(self, search_result_factory):
        result = search_result_factory(list(np.linspace(0, 1, 100)))
        assert med_report(result, 50).k == 50
        with pytest.raises(ConfigurationError, match='too large'):
            med_report(result, 51)

    @pytest.mark.unit
    @pytest.mark.parametrize('k', [0, -2, 1.5, True])
    def test_invalid_k(self, search_result_factory, k):
        with pytest.raises(ConfigurationError):
            med(search_result_factory([0.1, 0.2, 0.3]), k, 'p_clip')

    @pytest.mark.unit
    def test_unknown_parameter(self, search_result_factory):
        with pytest.raises(ConfigurationError, match='unknown parameter'):
            med(search_result_factory([0.1, 0.2]), 1, 'p_echo')

    @pytest.mark.unit
    def test_extremal_groups_order(self, search_result_factory):
        result = search_result_factory([0.5, 0.1, 0.9, 0.3, 0.7])
        best, worst = extremal_groups(result, 2)
        assert [c.index for c in best] == [1, 3]
        assert [c.index for c in worst] == [2, 4]


class TestMedReport:
    """Test cases for the report value object."""

    @pytest.mark.unit
    def test_covers_every_parameter(self, search_result_factory):
        result = search_result_factory(list(np.linspace(0, 1, 20)))
        report = med_report(result, 4)
        assert list(report.values) == list(PARAMETER_NAMES)
        assert report.provenance == result.identifier
        assert report.candidate_count == 20

    @pytest.mark.unit
    def test_series_signs(self):
        values = {name: 0.0 for name in PARAMETER_NAMES}
        values.update(p_pitch=0.3, clip_min=-0.1)
        signs = {name: sign for name, _, sign in MEDReport(1, values, 'abc').series()}
        assert (signs['p_pitch'], signs['clip_min'], signs['p_reverb']) == (1, -1, 0)

    @pytest.mark.unit
    def test_incomplete_values_rejected(self):
        with pytest.raises(DataError):
            MEDReport(1, {'p_pitch': 0.1}, 'abc')

    @pytest.mark.unit
    def test_compare_reports(self, search_result_factory):
        gen = np.random.default_rng(9)
        a = med_report(search_result_factory(list(gen.normal(size=20)), seed=1), 2)
        b = med_report(search_result_factory(list(gen.normal(size=20)), seed=2), 2)
        frame = compare_med_reports({'speaker': a, 'keyword': b})
        assert list(frame.columns) == ['speaker', 'keyword']
        assert list(frame.index) == list(PARAMETER_NAMES)
        assert frame.loc['p_pitch', 'keyword'] == b.values['p_pitch']

    @pytest.mark.unit
    def test_compare_nothing(self):
        with pytest.raises(ConfigurationError):
            compare_med_reports({})


class TestEmitReport:
    """Test cases for writing reports in each format."""

    @pytest.fixture
    def report(self, search_result_factory):
        return med_report(search_result_factory(list(np.linspace(-1, 1, 30)), seed=6), 5)

    @pytest.mark.unit
    def test_csv_has_header_and_one_row_per_parameter(self, tmp_path, report):
        path = emit_report(report, 'csv', tmp_path / 'med.csv')
        lines = path.read_text().strip().splitlines()
        assert lines[0] == 'parameter,med'
        assert len(lines) == 1 + len(PARAMETER_NAMES)
        frame = pd.read_csv(path)
        assert frame['med'].tolist() == pytest.approx([report.values[n] for n in PARAMETER_NAMES])

    @pytest.mark.unit
    def test_jsonl_records(self, tmp_path, report):
        path = emit_report(report, 'jsonl', tmp_path / 'med.jsonl', run_config={'seed': 6})
        records = [json.loads(line) for line in path.read_text().splitlines()]
        assert len(records) == 1 + len(PARAMETER_NAMES)
        assert records[0]['run_config'] == {'seed': 6}
        assert records[0]['k'] == 5

    @pytest.mark.unit
    def test_jsonl_round_trip(self, tmp_path, report):
        restored = read_med_report(write_med_report(report, tmp_path / 'med.jsonl'))
        assert restored == report

    @pytest.mark.unit
    def test_table_mentions_every_parameter(self, tmp_path, report):
        text = emit_report(report, 'table', tmp_path / 'med.txt', run_config={'k': 5}).read_text()
        assert 'k=5' in text
        for name in PARAMETER_NAMES:
            assert name in text

    @pytest.mark.unit
    def test_search_result_csv(self, tmp_path, search_result_factory):
        result = search_result_factory([0.3, 0.1, 0.2])
        path = emit_report(result, 'csv', tmp_path / 'search.csv')
        frame = pd.read_csv(path)
        assert frame['index'].tolist() == [1, 2, 0]
        assert list(frame.columns) == ['rank', 'index', 'seed', 'score', *PARAMETER_NAMES]

    @pytest.mark.unit
    def test_search_result_jsonl(self, tmp_path, search_result_factory):
        result = search_result_factory([0.3, 0.1, 0.2])
        path = emit_report(result, 'jsonl', tmp_path / 'search.jsonl')
        assert len(path.read_text().splitlines()) == 1 + 3 + 1

    @pytest.mark.unit
    def test_search_result_frame(self, search_result_factory):
        frame = search_result_frame(search_result_factory([0.3, 0.1]))
        assert frame['rank'].tolist() == [1, 2]

    @pytest.mark.unit
    def test_unknown_format(self, tmp_path, report):
        with pytest.raises(ConfigurationError, match='format'):
            emit_report(report, 'xml', tmp_path / 'med.xml')

    @pytest.mark.unit
    @pytest.mark.parametrize('fmt', ['table', 'csv', 'jsonl'])
    def test_unwritable_path_names_the_path(self, tmp_path, report, fmt):
        target = tmp_path / 'missing' / 'dir' / f'med.{fmt}'
        with pytest.raises(ReportError) as excinfo:
            emit_report(report, fmt, target)
        assert excinfo.value.path == str(target)
        assert str(target) in str(excinfo.value)

    @pytest.mark.unit
    def test_read_rejects_foreign_file(self, tmp_path):
        path = tmp_path / 'other.jsonl'
        path.write_text(json.dumps({'record': 'header', 'format': 'something-else'}) + '\n')
        with pytest.raises(DataError):
            read_med_report(path)

    @pytest.mark.unit
    def test_read_rejects_record_without_parameter(self, tmp_path, report):
        path = write_med_report(report, tmp_path / 'med.jsonl')
        lines = path.read_text().splitlines()
        broken = json.loads(lines[1])
        del broken['parameter']
        path.write_text('\n'.join([lines[0], json.dumps(broken), *lines[2:]]) + '\n')
        with pytest.raises(DataError, match='malformed'):
            read_med_report(path)

    @pytest.mark.unit
    def test_read_rejects_non_object_line(self, tmp_path, report):
        path = write_med_report(report, tmp_path / 'med.jsonl')
        path.write_text(path.read_text() + '[1, 2]\n')
        with pytest.raises(DataError, match='JSON object'):
            read_med_report(path)
