"""Cycle certificates and their bit-exact text format.

A certificate file is::

    # optional comment lines, only before the header
    <TAG> <n> <k> <len>
    <len> lines of n-character bitstrings

with TAG one of ``H`` (bipartite Kneser), ``K`` (Kneser), ``Q`` (two cube levels)
or ``MID`` (middle-levels base cycle). Every line is newline-terminated and
carries no trailing whitespace.
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, TextIO, Tuple

from .bitcore import GraphFamily, GraphKind, Vertex, format_subset
from .exceptions import CertificateParseError, ParameterError

CERTIFICATE_TAGS = ("H", "K", "Q", "MID")
LEMMA_TAG = "LEMMA"

_FAMILY_TAGS: Dict[GraphFamily, str] = {
    GraphFamily.BIP_KNESER: "H",
    GraphFamily.KNESER: "K",
    GraphFamily.CUBE_LEVELS: "Q",
}


def graph_for_tag(tag: str, n: int, k: int) -> GraphKind:
    """Graph named by a certificate header."""
    if tag == "H":
        return GraphKind.bip_kneser(n, k)
    if tag == "K":
        return GraphKind.kneser(n, k)
    if tag == "Q":
        return GraphKind.cube_levels(n, k)
    if tag == "MID":
        if n != 2 * k + 1:
            raise ParameterError(f"MID certificates need n = 2k+1, got ({n},{k})")
        return GraphKind.cube_levels(n, k)
    raise ParameterError(f"unknown certificate tag {tag!r}")


@dataclass(frozen=True)
class HCycleCertificate:
    """A cyclic vertex sequence claimed to be a (partial) Hamilton cycle of ``graph``."""

    graph: GraphKind
    order: Tuple[Vertex, ...]
    coverage_claim: Tuple[int, int]
    tag: Optional[str] = None

    @classmethod
    def for_graph(
        cls, graph: GraphKind, order: Sequence[Vertex], tag: Optional[str] = None
    ) -> "HCycleCertificate":
        """Certificate whose coverage claim is computed from ``order`` and ``graph``."""
        order = tuple(order)
        return cls(graph, order, (len(order), graph.vertex_count()), tag)

    @property
    def file_tag(self) -> str:
        if self.tag:
            return self.tag
        if self.graph.family not in _FAMILY_TAGS:
            raise ParameterError(f"no certificate tag for {self.graph}")
        return _FAMILY_TAGS[self.graph.family]

    def __len__(self) -> int:
        return len(self.order)


@dataclass(frozen=True)
class CertificateFile:
    """Parsed header and body of a certificate file."""

    tag: str
    n: int
    k: int
    length: int
    vertices: Tuple[Vertex, ...]
    header_line: int = 1

    def to_certificate(self) -> HCycleCertificate:
        graph = graph_for_tag(self.tag, self.n, self.k)
        return HCycleCertificate(
            graph, self.vertices, (self.length, graph.vertex_count()), self.tag
        )


def split_header(lines: List[str], tags: Sequence[str]) -> Tuple[int, List[str]]:
    """Skip leading ``#`` comments; return the header's 0-based index and fields."""
    index = 0
    while index < len(lines) and lines[index].startswith("#"):
        index += 1
    if index >= len(lines) or not lines[index]:
        raise CertificateParseError("missing header", index + 1)
    fields = lines[index].split(" ")
    if fields[0] not in tags:
        raise CertificateParseError(f"unknown tag {fields[0]!r}", index + 1)
    return index, fields


def parse_int(field: str, line: int) -> int:
    if not (field.isascii() and field.isdigit()):
        raise CertificateParseError(f"bad number {field!r}", line)
    return int(field)


def parse_vertex_line(text: str, n: int, line: int) -> Vertex:
    if len(text) != n:
        raise CertificateParseError("bad length", line)
    if any(c not in "01" for c in text):
        raise CertificateParseError("bad symbol", line)
    return Vertex(n, int(text, 2))


def body_lines(text: str) -> List[str]:
    """Lines of ``text`` without the final newline terminator."""
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return lines


def parse_certificate(text: str) -> CertificateFile:
    """Parse certificate text; raises CertificateParseError with a 1-based line number."""
    lines = body_lines(text)
    index, fields = split_header(lines, CERTIFICATE_TAGS + (LEMMA_TAG,))
    header_line = index + 1
    if fields[0] == LEMMA_TAG:
        raise CertificateParseError("LEMMA dumps are not cycle certificates", header_line)
    if len(fields) != 4:
        raise CertificateParseError("header must be '<TAG> <n> <k> <len>'", header_line)
    tag = fields[0]
    n, k, length = (parse_int(f, header_line) for f in fields[1:])
    if n < 1:
        raise CertificateParseError("n must be positive", header_line)

    body = lines[index + 1 :]
    vertices = []
    for offset, line_text in enumerate(body):
        line_no = header_line + offset + 1
        if offset >= length:
            raise CertificateParseError(f"more than {length} vertex lines", line_no)
        vertices.append(parse_vertex_line(line_text, n, line_no))
    if len(vertices) != length:
        raise CertificateParseError(
            f"header declares {length} vertices, found {len(vertices)}",
            header_line + len(vertices) + 1,
        )
    return CertificateFile(tag, n, k, length, tuple(vertices), header_line)


def decode_stream(stream: TextIO) -> str:
    try:
        return stream.read()
    except UnicodeDecodeError as e:
        raise CertificateParseError(f"not UTF-8 text: {e.reason} at byte {e.start}") from e


def read_text(path: str) -> str:
    """Contents of a certificate or dump file; undecodable bytes are a parse error."""
    with open(path, encoding="utf-8") as f:
        return decode_stream(f)


def read_certificate(stream: TextIO) -> CertificateFile:
    return parse_certificate(decode_stream(stream))


def render_certificate(cert: HCycleCertificate) -> str:
    """Bitstring format with header."""
    graph = cert.graph
    lines = [f"{cert.file_tag} {graph.n} {graph.k} {len(cert.order)}"]
    lines.extend(str(v) for v in cert.order)
    return "\n".join(lines) + "\n"


def render_sets(cert: HCycleCertificate) -> str:
    """Output-only subset format, one ``{i1,i2,...}`` per line, no header."""
    return "".join(format_subset(v) + "\n" for v in cert.order)
