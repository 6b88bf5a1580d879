"""Streaming parsers for MediaWiki SQL dumps and edge-list TSV files.

MediaWiki publishes each table as a file of ``INSERT INTO `tbl` VALUES
(...),(...);`` statements, one statement per line. The parsers here
stream those files with memory bounded by a single statement, so a
multi-gigabyte dump never has to fit in RAM. Only two tables matter for
taxonomy extraction:

- ``page``: gives (page_id, namespace, title); categories live in
  namespace 14.
- ``categorylinks``: gives (cl_from, cl_to, cl_type); rows with
  cl_type='subcat' are the child-category -> parent-category edges.

Decompression is the caller's job: hand these functions an
already-decompressed binary stream. Malformed tuples never abort a
parse; they are counted in an :class:`IngestReport` (with the byte
offset of the tuple) and skipped.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import BinaryIO, Iterator

from .errors import DataError

logger = logging.getLogger(__name__)

CATEGORY_NAMESPACE = 14


class Table(Enum):
    PAGE = "page"
    CATEGORYLINKS = "categorylinks"


class LinkType(Enum):
    SUBCAT = "subcat"
    PAGE = "page"
    FILE = "file"


@dataclass(frozen=True)
class PageRecord:
    """One row of the ``page`` table (title already normalized)."""

    page_id: int
    namespace: int
    title: str


@dataclass(frozen=True)
class CategoryLink:
    """One row of the ``categorylinks`` table (target title normalized)."""

    from_page_id: int
    to_category_title: str
    link_type: LinkType


@dataclass(frozen=True)
class RawEdge:
    """A child-category -> parent-category edge, by title."""

    child_title: str
    parent_title: str


@dataclass(frozen=True)
class TableSchema:
    """Column positions for one dump table.

    Dump schemas drift across MediaWiki releases; adjusting the
    positions here tracks that drift without touching the parser.
    `min_fields` is the smallest tuple width that still carries every
    position we read; narrower tuples are reported as mismatches.
    """

    table: Table
    positions: dict[str, int]

    @property
    def min_fields(self) -> int:
        return max(self.positions.values()) + 1


PAGE_SCHEMA = TableSchema(Table.PAGE, {"page_id": 0, "page_namespace": 1, "page_title": 2})
CATEGORYLINKS_SCHEMA = TableSchema(
    Table.CATEGORYLINKS, {"cl_from": 0, "cl_to": 1, "cl_type": 6}
)
DEFAULT_SCHEMAS = {Table.PAGE: PAGE_SCHEMA, Table.CATEGORYLINKS: CATEGORYLINKS_SCHEMA}


@dataclass
class IngestReport:
    """Tallies for one ingest pass; every skipped record lands here."""

    rows: int = 0
    errors: dict[str, int] = field(default_factory=dict)
    # (reason, byte offset / line number / record id) for the first few problems
    samples: list[tuple[str, int]] = field(default_factory=list)
    max_samples: int = 20

    def count_error(self, reason: str, where: int) -> None:
        self.errors[reason] = self.errors.get(reason, 0) + 1
        if len(self.samples) < self.max_samples:
            self.samples.append((reason, where))
            logger.warning("skipped record (%s) at %d", reason, where)
        else:
            logger.debug("skipped record (%s) at %d", reason, where)

    @property
    def error_total(self) -> int:
        return sum(self.errors.values())


# One INSERT tuple: quoted strings (with backslash escapes) or any run of
# characters that is neither a quote nor a closing paren. Quoted ')' and
# ',' are consumed by the string alternative, so tuple boundaries are exact.
_TUPLE_RE = re.compile(rb"\((?:'(?:[^'\\]|\\.)*'|[^)'])*\)")
# One field inside a tuple body: a quoted string, or a bare token (number, NULL).
_FIELD_RE = re.compile(rb"'(?:[^'\\]|\\.)*'|[^,]+")
_INSERT_RE = re.compile(rb"INSERT INTO `?(\w+)`? VALUES ")

_UNESCAPE = {
    b"0": b"\x00",
    b"b": b"\x08",
    b"n": b"\n",
    b"r": b"\r",
    b"t": b"\t",
    b"Z": b"\x1a",
    b"'": b"'",
    b'"': b'"',
    b"\\": b"\\",
}

_ESCAPE = {
    0x00: b"\\0",
    0x08: b"\\b",
    0x0A: b"\\n",
    0x0D: b"\\r",
    0x1A: b"\\Z",
    0x27: b"\\'",
    0x22: b'\\"',
    0x5C: b"\\\\",
}


def _unescape_sql(raw: bytes) -> bytes:
    return re.sub(rb"\\(.)", lambda m: _UNESCAPE.get(m.group(1), m.group(1)), raw)


def _escape_sql(raw: bytes) -> bytes:
    return b"".join(_ESCAPE.get(b, bytes([b])) for b in raw)


def normalize_title(raw: bytes) -> str:
    """Decode a title field: UTF-8, underscores to spaces, trimmed.

    Raises UnicodeDecodeError for non-UTF-8 bytes; dump parsers treat
    that as a recoverable per-record error.
    """
    return raw.decode("utf-8").replace("_", " ").strip()


def _split_fields(tuple_body: bytes) -> list[bytes]:
    return _FIELD_RE.findall(tuple_body)


def parse_sql_dump(
    stream: BinaryIO,
    table: Table,
    schema: TableSchema | None = None,
    report: IngestReport | None = None,
) -> Iterator[PageRecord | CategoryLink]:
    """Stream records of `table` out of a MediaWiki SQL dump.

    Yields PageRecord for Table.PAGE and CategoryLink for
    Table.CATEGORYLINKS. INSERT statements for other tables are skipped
    wholesale. Per-tuple problems (too few fields, bad integers, bad
    UTF-8, unknown link type) are counted in `report` with the byte
    offset of the offending tuple and the record is dropped; the stream
    itself keeps going. An unreadable stream raises the underlying
    OSError.
    """
    if schema is None:
        schema = DEFAULT_SCHEMAS[table]
    if report is None:
        report = IngestReport()
    want = table.value.encode("ascii")
    pos = schema.positions
    offset = 0
    for line in stream:
        line_start = offset
        offset += len(line)
        m = _INSERT_RE.match(line)
        if m is None or m.group(1) != want:
            continue
        for tm in _TUPLE_RE.finditer(line, m.end()):
            tuple_offset = line_start + tm.start()
            fields = _split_fields(tm.group(0)[1:-1])
            if len(fields) < schema.min_fields:
                report.count_error("field_count_mismatch", tuple_offset)
                continue
            try:
                record = _build_record(table, fields, pos)
            except (ValueError, UnicodeDecodeError) as exc:
                report.count_error(type(exc).__name__, tuple_offset)
                continue
            report.rows += 1
            yield record


def _build_record(
    table: Table, fields: list[bytes], pos: dict[str, int]
) -> PageRecord | CategoryLink:
    if table is Table.PAGE:
        return PageRecord(
            page_id=int(fields[pos["page_id"]]),
            namespace=int(fields[pos["page_namespace"]]),
            title=normalize_title(_string_field(fields[pos["page_title"]])),
        )
    link_type_raw = _string_field(fields[pos["cl_type"]]).decode("utf-8")
    try:
        link_type = LinkType(link_type_raw)
    except ValueError:
        raise ValueError(f"unknown link type {link_type_raw!r}") from None
    return CategoryLink(
        from_page_id=int(fields[pos["cl_from"]]),
        to_category_title=normalize_title(_string_field(fields[pos["cl_to"]])),
        link_type=link_type,
    )


def _string_field(raw: bytes) -> bytes:
    if len(raw) >= 2 and raw.startswith(b"'") and raw.endswith(b"'"):
        return _unescape_sql(raw[1:-1])
    if raw == b"NULL":
        raise ValueError("NULL where a string was expected")
    return raw


def read_edge_tsv(stream: BinaryIO, report: IngestReport | None = None) -> Iterator[RawEdge]:
    """Yield RawEdges from UTF-8 ``child<TAB>parent`` lines.

    Blank lines and '#' comments are skipped silently; lines with the
    wrong column count or bad UTF-8 are counted in `report` with their
    1-based line number and skipped.
    """
    if report is None:
        report = IngestReport()
    for lineno, line in enumerate(stream, start=1):
        line = line.rstrip(b"\r\n")
        if not line or line.startswith(b"#"):
            continue
        cols = line.split(b"\t")
        if len(cols) != 2:
            report.count_error("column_count", lineno)
            continue
        try:
            edge = RawEdge(cols[0].decode("utf-8"), cols[1].decode("utf-8"))
        except UnicodeDecodeError:
            report.count_error("UnicodeDecodeError", lineno)
            continue
        report.rows += 1
        yield edge


def write_edge_tsv(edges: list[RawEdge] | Iterator[RawEdge], stream: BinaryIO) -> int:
    """Write edges as ``child<TAB>parent`` lines; returns the row count."""
    n = 0
    for edge in edges:
        stream.write(f"{edge.child_title}\t{edge.parent_title}\n".encode("utf-8"))
        n += 1
    return n


def category_edges_from_dumps(
    pages: Iterator[PageRecord] | list[PageRecord],
    links: Iterator[CategoryLink] | list[CategoryLink],
    report: IngestReport | None = None,
) -> Iterator[RawEdge]:
    """Join page and categorylinks records into category edges.

    categorylinks stores child page id -> parent category title, so the
    child title comes from the page table restricted to namespace 14.
    Only subcat links become edges; page/file links and links whose
    source id has no namespace-14 page record are counted and dropped.

    The namespace-14 id->title map is held in memory (roughly the
    number of categories in the wiki); everything else streams.
    """
    if report is None:
        report = IngestReport()
    titles_by_id: dict[int, str] = {}
    for page in pages:
        if page.namespace == CATEGORY_NAMESPACE:
            titles_by_id[page.page_id] = page.title
    for link in links:
        if link.link_type is not LinkType.SUBCAT:
            report.errors[f"skipped_{link.link_type.value}_link"] = (
                report.errors.get(f"skipped_{link.link_type.value}_link", 0) + 1
            )
            continue
        child_title = titles_by_id.get(link.from_page_id)
        if child_title is None:
            report.count_error("unresolved_page_id", link.from_page_id)
            continue
        # rows already counted when the link was parsed
        yield RawEdge(child_title, link.to_category_title)


# ---------------------------------------------------------------------------
# Serialization back to dump format. Used to round-trip parsed records in
# tests and to synthesize dump fixtures from edge lists.
# ---------------------------------------------------------------------------


def _title_to_sql(title: str) -> bytes:
    return b"'" + _escape_sql(title.replace(" ", "_").encode("utf-8")) + b"'"


def page_record_to_tuple(record: PageRecord) -> bytes:
    """Render one page row at the default schema width (12 fields)."""
    filler = b",0,0,0.5,'20240101000000',NULL,1,100,'wikitext',NULL"
    return (
        b"(%d,%d," % (record.page_id, record.namespace)
        + _title_to_sql(record.title)
        + filler
        + b")"
    )


def category_link_to_tuple(link: CategoryLink) -> bytes:
    """Render one categorylinks row at the default schema width (7 fields)."""
    return (
        b"(%d," % link.from_page_id
        + _title_to_sql(link.to_category_title)
        + b",'','2024-01-01 00:00:00','','uca-default-u-kn','"
        + link.link_type.value.encode("ascii")
        + b"')"
    )


def render_insert_statement(table: Table, tuples: list[bytes]) -> bytes:
    return (
        b"INSERT INTO `" + table.value.encode("ascii") + b"` VALUES " + b",".join(tuples) + b";\n"
    )


def synthesize_dumps(
    edges: list[RawEdge],
    first_page_id: int = 1001,
    tuples_per_statement: int = 50,
) -> tuple[bytes, bytes]:
    """Build (page.sql, categorylinks.sql) bytes realizing an edge list.

    Every title mentioned by the edges gets a namespace-14 page record;
    each edge becomes one subcat link from the child's page id to the
    parent title. Feeding the result back through parse_sql_dump and
    category_edges_from_dumps reproduces the edge set (order included).
    """
    titles = sorted({e.child_title for e in edges} | {e.parent_title for e in edges})
    ids = {t: first_page_id + i for i, t in enumerate(titles)}
    page_tuples = [
        page_record_to_tuple(PageRecord(ids[t], CATEGORY_NAMESPACE, t)) for t in titles
    ]
    link_tuples = [
        category_link_to_tuple(
            CategoryLink(ids[e.child_title], e.parent_title, LinkType.SUBCAT)
        )
        for e in edges
    ]
    page_sql = b"".join(
        render_insert_statement(Table.PAGE, page_tuples[i : i + tuples_per_statement])
        for i in range(0, len(page_tuples), tuples_per_statement)
    )
    links_sql = b"".join(
        render_insert_statement(Table.CATEGORYLINKS, link_tuples[i : i + tuples_per_statement])
        for i in range(0, len(link_tuples), tuples_per_statement)
    )
    return page_sql, links_sql
