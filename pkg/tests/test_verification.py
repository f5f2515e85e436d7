import pytest

from minkowski.verification import InvariantSuite


@pytest.fixture
def suite():
    return InvariantSuite(max_level=6, samples=300, extremal_depth=60)


def test_all_checks_pass(suite):
    results = suite.run()
    assert [r.name for r in results] == list(suite.checks)
    assert all(r.passed for r in results), [(r.name, r.detail) for r in results if not r.passed]
    assert suite.passed


def test_summary_and_table(suite):
    suite.run()
    summary = suite.get_summary()
    assert summary['total_checks'] == len(suite.checks)
    assert summary['passed'] == summary['total_checks']
    assert summary['failed'] == []
    frame = suite.to_frame()
    assert list(frame.columns) == ['check', 'passed', 'detail']
    table = suite.render()
    assert 'functional_equation' in table
    assert table.splitlines()[0].startswith('|')


def test_failed_check_is_reported(suite):
    suite.checks = {'always_fails': lambda: (False, "forced")}
    suite.run()
    assert not suite.passed
    assert suite.get_summary()['failed'] == ['always_fails']


def test_raising_check_counts_as_failure(suite):
    def broken():
        raise RuntimeError("boom")

    suite.checks['broken'] = broken
    result = suite.run_check('broken')
    assert not result.passed
    assert result.detail == "RuntimeError: boom"


def test_empty_suite_does_not_pass():
    assert not InvariantSuite(max_level=1).passed


def test_dense_inclusion_covers_every_alpha(suite):
    result = suite.run_check('dense_inclusion')
    assert result.passed, result.detail
    assert result.detail == "levels 1..6, α in {1/2, 1/5, 1, 2}"


def test_sampled_deep_words(suite):
    result = suite.run_check('sampled_deep_words')
    assert result.passed, result.detail
    assert result.detail == "300 random words at levels 15..20"


def test_deep_word_failure_is_reported(suite, monkeypatch):
    monkeypatch.setattr('minkowski.verification.farey_det', lambda f, g: 2)
    result = suite.run_check('sampled_deep_words')
    assert not result.passed
    assert result.detail.endswith("are not Farey neighbours")


@pytest.mark.slow
def test_full_suite_to_level_fourteen():
    suite = InvariantSuite(max_level=14, samples=2_000)
    suite.run()
    assert suite.passed, suite.get_summary()['failed']
