"""Claim suites: line-oriented files of audited inequality chains.

Each non-blank, non-comment line is a record::

    id | expression | expect=HOLDS | source=(17) | amends=other-id | note text

``id``, ``expression``, ``expect`` and ``source`` are required. ``amends`` names
the entry a corrected variant replaces and must refer to an id in the same
suite. Fields after the expression may come in any order; fields that are not
``key=value`` for a known key are joined into the note.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from .dsl import Chain, parse_claim
from .exceptions import ClaimSyntaxError, SuiteFormatError
from .types import Expectation

BUNDLED_SUITE = "bundled_suite.txt"

_ID_RE = re.compile(r"^[A-Za-z0-9][A-Za-z0-9_.-]*$")
_FIELD_RE = re.compile(r"^(expect|source|amends)\s*=\s*(.*)$")


@dataclass(frozen=True)
class ClaimEntry:
    """One audited claim.

    :param id: Unique identifier such as ``"eq35-printed"``.
    :param source: Anchor of the displayed inequality, e.g. ``"(35)"``.
    :param ast: The parsed chain.
    :param expectation: ``HOLDS`` or ``FAILS``.
    :param note: Free text (label mapping, errata commentary).
    :param amends: Id of the printed variant a corrected entry replaces.
    :param text: The expression as written in the suite.
    """

    id: str
    source: str
    ast: Chain
    expectation: Expectation
    note: str = ""
    amends: Optional[str] = None
    text: str = ""


def _parse_record(line: str, lineno: int, origin: str) -> ClaimEntry:
    fields = [f.strip() for f in line.split("|")]
    if len(fields) < 3:
        raise SuiteFormatError("expected 'id | expression | expect=...'", line=lineno, source=origin)
    claim_id, text, *rest = fields
    if not _ID_RE.match(claim_id):
        raise SuiteFormatError(f"invalid id {claim_id!r}", line=lineno, source=origin)

    keyed: Dict[str, str] = {}
    notes: List[str] = []
    for field in rest:
        m = _FIELD_RE.match(field)
        if m is None:
            if field:
                notes.append(field)
            continue
        key, value = m.group(1), m.group(2).strip()
        if key in keyed:
            raise SuiteFormatError(f"duplicate field {key!r}", line=lineno, source=origin)
        keyed[key] = value

    expect = keyed.get("expect")
    if expect not in ("HOLDS", "FAILS"):
        raise SuiteFormatError(
            f"{claim_id}: expect must be HOLDS or FAILS, got {expect!r}", line=lineno, source=origin
        )
    source = keyed.get("source", "")
    if not source:
        raise SuiteFormatError(f"{claim_id}: missing source anchor", line=lineno, source=origin)
    try:
        ast = parse_claim(text)
    except ClaimSyntaxError as e:
        raise SuiteFormatError(f"{claim_id}: {e}", line=lineno, source=origin) from e

    return ClaimEntry(
        id=claim_id,
        source=source,
        ast=ast,
        expectation=expect,  # type: ignore[arg-type]
        note=" | ".join(notes),
        amends=keyed.get("amends") or None,
        text=text,
    )


def parse_suite(text: str, *, origin: str = "<suite>") -> Tuple[ClaimEntry, ...]:
    """Parse suite text.

    :raises SuiteFormatError: For a malformed record, a duplicate id, or an
        ``amends`` reference to an id that is not in the suite.
    """
    entries: List[ClaimEntry] = []
    lines: Dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        entry = _parse_record(line, lineno, origin)
        if entry.id in lines:
            raise SuiteFormatError(
                f"duplicate id {entry.id!r} (first on line {lines[entry.id]})",
                line=lineno,
                source=origin,
            )
        lines[entry.id] = lineno
        entries.append(entry)
    for entry in entries:
        if entry.amends is not None and entry.amends not in lines:
            raise SuiteFormatError(
                f"{entry.id} amends unknown entry {entry.amends!r}",
                line=lines[entry.id],
                source=origin,
            )
    return tuple(entries)


def load_suite(path: Union[str, Path]) -> Tuple[ClaimEntry, ...]:
    """Read and parse a UTF-8 suite file."""
    p = Path(path)
    return parse_suite(p.read_text(encoding="utf-8"), origin=str(p))


def bundled_suite() -> Tuple[ClaimEntry, ...]:
    """The suite shipped in ``meanaudit/data``."""
    text = resources.files("meanaudit").joinpath("data").joinpath(BUNDLED_SUITE).read_text(encoding="utf-8")
    return parse_suite(text, origin=BUNDLED_SUITE)
