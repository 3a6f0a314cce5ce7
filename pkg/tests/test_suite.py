"""Tests for claim suite files and the bundled suite"""

import pytest

from meanaudit import SuiteFormatError, load_suite, parse_suite
from meanaudit.suite import ClaimEntry

REQUIRED_IDS = [
    "eq2",
    "eq3",
    "eq4",
    "eq5",
    "eq6",
    "eq9",
    "eq10",
    "eq11",
    "eq16",
    "eq17-chain",
    "eq18",
    "eq31",
    "eq32",
    "eq33",
    "eq34",
    "eq35-printed",
    "eq35-printed-tail",
    "eq35-corrected",
    "eq36-chain",
    "eq37",
    "eq40",
    "eq43",
    "eq46",
    "eq49",
    "eq51",
    "eq52",
    "eq53",
    "eq54",
    "eq55",
    "eq56",
    "eq57",
    "eq58",
    "eq59-printed",
    "eq59-corrected",
    "eq60-printed",
    "eq60-middle-printed",
    "eq60-middle-corrected",
    "eq60-corrected",
    "eq61",
    "eq62",
    "t3-le",
    "t3-ge",
    "eq63-printed",
    "eq63-corrected",
    "t4",
]


def test_bundled_suite_contents(suite):
    ids = [e.id for e in suite]
    assert len(ids) == len(set(ids))
    for claim_id in REQUIRED_IDS:
        assert claim_id in ids, claim_id
    assert all(isinstance(e, ClaimEntry) for e in suite)
    assert all(e.source for e in suite)


def test_bundled_amendments(suite):
    by_id = {e.id: e for e in suite}
    for entry in suite:
        if entry.amends is not None:
            assert entry.amends in by_id
            assert entry.expectation == "HOLDS"
            assert by_id[entry.amends].expectation == "FAILS"
    assert by_id["eq35-corrected"].amends == "eq35-printed"
    assert by_id["eq60-middle-corrected"].amends == "eq60-middle-printed"


def test_bundled_expectations(suite):
    by_id = {e.id: e.expectation for e in suite}
    assert by_id["eq17-chain"] == "HOLDS"
    assert by_id["eq35-printed-tail"] == "FAILS"
    assert by_id["t3-le"] == by_id["t3-ge"] == "FAILS"
    assert by_id["t4"] == "HOLDS"


def test_entry_fields():
    [entry] = parse_suite(
        "x1 | A <= S | source=(9) | note one | expect=HOLDS | more\n", origin="inline"
    )
    assert entry.id == "x1"
    assert entry.source == "(9)"
    assert entry.expectation == "HOLDS"
    assert entry.note == "note one | more"
    assert entry.text == "A <= S"
    assert entry.amends is None


def test_comments_and_blank_lines_skipped():
    text = "# header\n\n   \nx | A <= S | expect=HOLDS | source=(1)\n  # trailing\n"
    assert [e.id for e in parse_suite(text)] == ["x"]


def test_empty_suite():
    assert parse_suite("# nothing\n") == ()


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("x | A <= S\n", "expected 'id | expression"),
        ("bad id | A <= S | expect=HOLDS | source=(1)\n", "invalid id"),
        ("x | A <= S | source=(1)\n", "expect must be HOLDS or FAILS"),
        ("x | A <= S | expect=MAYBE | source=(1)\n", "expect must be HOLDS or FAILS"),
        ("x | A <= S | expect=HOLDS\n", "missing source"),
        ("x | A <= Q | expect=HOLDS | source=(1)\n", "unknown symbol 'Q'"),
        ("x | A <= S | expect=HOLDS | expect=FAILS | source=(1)\n", "duplicate field"),
    ],
)
def test_record_errors(text, fragment):
    with pytest.raises(SuiteFormatError, match=fragment) as exc_info:
        parse_suite(text, origin="s.txt")
    assert exc_info.value.line == 1
    assert str(exc_info.value).startswith("s.txt:1: ")


def test_duplicate_id():
    text = "x | A <= S | expect=HOLDS | source=(1)\n" "x | G <= A | expect=HOLDS | source=(2)\n"
    with pytest.raises(SuiteFormatError, match="duplicate id 'x'") as exc_info:
        parse_suite(text)
    assert exc_info.value.line == 2


def test_unknown_amendment():
    text = "x | A <= S | expect=HOLDS | source=(1) | amends=nope\n"
    with pytest.raises(SuiteFormatError, match="amends unknown entry 'nope'"):
        parse_suite(text)


def test_amendment_may_point_forward():
    text = (
        "fixed | G <= A | expect=HOLDS | source=(1) | amends=printed\n"
        "printed | A <= G | expect=FAILS | source=(1)\n"
    )
    assert parse_suite(text)[0].amends == "printed"


def test_load_suite(tmp_path):
    path = tmp_path / "claims.txt"
    path.write_text("x | H <= G | expect=HOLDS | source=(2)\n", encoding="utf-8")
    [entry] = load_suite(path)
    assert entry.id == "x"


def test_load_suite_reports_path(tmp_path):
    path = tmp_path / "broken.txt"
    path.write_text("\n\nx | H <= | expect=HOLDS | source=(2)\n", encoding="utf-8")
    with pytest.raises(SuiteFormatError) as exc_info:
        load_suite(path)
    assert exc_info.value.source == str(path)
    assert exc_info.value.line == 3


def test_load_suite_missing_file(tmp_path):
    with pytest.raises(OSError):
        load_suite(tmp_path / "absent.txt")
