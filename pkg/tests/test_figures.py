from __future__ import annotations

import pytest

from multirec import figures
from multirec.errors import FixtureMissing


def test_every_transcribed_figure_matches():
    reports = figures.verify_figures()
    assert len(reports) == 11
    failed = [r for r in reports if not r.ok]
    assert not failed, failed


@pytest.mark.parametrize(
    "check",
    [
        figures.check_preimage,
        figures.check_surd_not_ssurdo,
        figures.check_sierpinski,
        figures.check_fib_rows,
        figures.check_toeplitz_rows,
        figures.check_der1,
        figures.check_der2,
        figures.check_table_codes,
        figures.check_s5_partition,
        figures.check_s6_subgroups,
        figures.check_s6_partition,
    ],
    ids=lambda f: f.__name__,
)
def test_individual_checks(check):
    report = check()
    assert report.ok, report.detail


def test_preimage_grid_shape_in_the_detail():
    report = figures.check_preimage()
    assert report.detail.startswith("27x8 grid, 0 mismatches")


def test_missing_fixture_is_reported():
    with pytest.raises(FixtureMissing):
        figures._fixture("fig-nonexistent.txt")


def test_block_word_parser():
    blocks = figures.parse_block_word("[1/0][0/1]")
    assert len(blocks) == 2
    assert blocks[0].size == (1, 2)
    # top cell of the text form is the higher y in storage
    assert blocks[0][(0, 1)] == 1 and blocks[0][(0, 0)] == 0
    assert blocks[1][(0, 1)] == 0 and blocks[1][(0, 0)] == 1


def test_table_codes_cover_seventeen_classes():
    table = figures.read_table_codes()
    assert sorted(table) == list(range(17))
