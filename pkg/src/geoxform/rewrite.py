"""Sugar-neutral, exactly invertible literal rewrites.

Each rewritten token is followed by a comment recording what it replaced::

    endobj % objend -> endobj [geoxform:objend-endobj#0~1a2b3c4d]

The comment carries a provenance tag (rule id, occurrence index, checksum)
so it can be found and removed again, restoring the input byte for byte.
A token in the middle of a line gets a line break after its comment, since
comments run to end of line; the tag records that the break was inserted.
"""

import json
import re
import zlib
from dataclasses import dataclass, field, replace
from typing import Optional

MARKER = b"geoxform:"
SIDECAR_VERSION = 1

_TERMINATORS = {b"\n": b"lf", b"\r\n": b"crlf", b"\r": b"cr"}
_TERMINATOR_FLAGS = {v: k for k, v in _TERMINATORS.items()}
_RULE_ID = re.compile(rb"[A-Za-z0-9_.-]+\Z")
_TAG = re.compile(rb"\[geoxform:([A-Za-z0-9_.-]+)#(\d+)(?:/(lf|crlf|cr))?~([0-9a-f]{8})\]")
_HEX_ESCAPE = re.compile(rb"\\x([0-9a-fA-F]{2})|\\(.)", re.S)


class RewriteError(ValueError):
    pass


class RegionOverlapError(RewriteError):
    """A match falls inside a comment, string or stream of the host format."""

    def __init__(self, message, offset):
        super().__init__(message)
        self.offset = offset


class IntegrityError(RewriteError):
    """An annotation is malformed or no longer matches its site."""

    def __init__(self, message, offset):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


class AnnotationConflict(RewriteError):
    pass


class CompositionError(RewriteError):
    def __init__(self, message, pair):
        super().__init__(message)
        self.pair = pair


@dataclass(frozen=True)
class RewriteRule:
    id: str
    pattern: bytes
    replacement: bytes
    comment_style: tuple = (b"%", b"\n")

    def __post_init__(self):
        prefix, term = self.comment_style
        if not _RULE_ID.match(self.id.encode("ascii", "replace")):
            raise RewriteError(f"rule id {self.id!r} must match [A-Za-z0-9_.-]+")
        if not self.pattern:
            raise RewriteError("pattern must be nonempty")
        if self.pattern == self.replacement:
            raise RewriteError("pattern and replacement are identical")
        if term not in _TERMINATORS:
            raise RewriteError(f"unsupported comment terminator {term!r}")
        if not prefix or any(c in b" \r\n" for c in prefix):
            raise RewriteError("comment prefix must be nonempty and contain no whitespace")
        for text in (self.pattern, self.replacement):
            if b"\n" in text or b"\r" in text:
                raise RewriteError("patterns are single-line: no line terminators allowed")


RULES = {
    "objend-endobj": RewriteRule("objend-endobj", b"objend", b"endobj"),
}


def _escape(data: bytes, prefix: bytes) -> bytes:
    out = bytearray()
    for c in data:
        if 0x21 <= c <= 0x7E and c not in b"\\[]" and c not in prefix:
            out.append(c)
        else:
            out += b"\\x%02x" % c
    return bytes(out)


def _unescape(data: bytes) -> bytes:
    def sub(m):
        if m.group(1) is not None:
            return bytes([int(m.group(1), 16)])
        return m.group(2)
    return _HEX_ESCAPE.sub(sub, data)


def _checksum(*parts):
    return b"%08x" % zlib.crc32(b"\x00".join(parts))


@dataclass(frozen=True)
class Annotation:
    rule_id: str
    original: bytes
    replacement: bytes
    occurrence_index: int
    prefix: bytes = b"%"
    # terminator inserted after the comment, if any
    inserted_eol: Optional[bytes] = None
    # byte offsets in the annotated content
    site: Optional[int] = None
    start: Optional[int] = None
    end: Optional[int] = None

    tag = MARKER

    def encode(self) -> bytes:
        flags = b""
        if self.inserted_eol is not None:
            flags = b"/" + _TERMINATORS[self.inserted_eol]
        orig = _escape(self.original, self.prefix)
        repl = _escape(self.replacement, self.prefix)
        rid = self.rule_id.encode("ascii")
        idx = str(self.occurrence_index).encode("ascii")
        crc = _checksum(self.prefix, orig, repl, rid, idx, flags)
        text = b" " + self.prefix + b" " + orig + b" -> " + repl + b" [" + MARKER + rid + b"#" + idx + flags + b"~" + crc + b"]"
        if self.inserted_eol is not None:
            text += self.inserted_eol
        return text

    def to_dict(self):
        return {
            "rule_id": self.rule_id,
            "original": list(self.original),
            "replacement": list(self.replacement),
            "occurrence_index": self.occurrence_index,
            "site": self.site,
        }


def scan_annotations(content: bytes):
    """Parse every inline annotation in ``content``, left to right.

    Raises :class:`IntegrityError` on a malformed or tampered annotation.
    """
    found = []
    pos = 0
    while True:
        m = content.find(b"[" + MARKER, pos)
        if m < 0:
            break
        tag = _TAG.match(content, m)
        if tag is None:
            raise IntegrityError("malformed provenance tag", m)
        rid, idx, flag, crc = tag.groups()
        end = tag.end()
        if content[m - 1:m] != b" ":
            raise IntegrityError("annotation text is damaged", m)
        window = content[:m - 1]
        r = window.rfind(b" ")
        if r < 3 or window[r - 3:r + 1] != b" -> ":
            raise IntegrityError("annotation text is damaged", m)
        repl = window[r + 1:]
        o = window.rfind(b" ", 0, r - 3)
        p = window.rfind(b" ", 0, o) if o > 0 else -1
        if o < 0 or p < 0:
            raise IntegrityError("annotation text is damaged", m)
        orig = window[o + 1:r - 3]
        prefix = window[p + 1:o]
        flags = b"/" + flag if flag else b""
        if _checksum(prefix, orig, repl, rid, idx, flags) != crc:
            raise IntegrityError("annotation checksum mismatch", p)
        eol = None
        if flag:
            eol = _TERMINATOR_FLAGS[flag]
            if content[end:end + len(eol)] != eol:
                raise IntegrityError("inserted line terminator is missing", end)
            end += len(eol)
        replacement = _unescape(repl)
        site = p - len(replacement)
        if site < 0 or content[site:p] != replacement:
            raise IntegrityError("rewritten token no longer precedes its annotation", p)
        ann = Annotation(rid.decode("ascii"), _unescape(orig), replacement, int(idx), prefix,
                         eol, site=site, start=p, end=end)
        if found and site < found[-1].end:
            raise IntegrityError("annotation overlaps the previous one", site)
        found.append(ann)
        pos = tag.end()
    return found


@dataclass
class AnnotatedFile:
    content: bytes
    annotations: list = field(default_factory=list)
    # True when annotations live in a sidecar instead of inline comments
    sidecar: bool = False

    @classmethod
    def from_bytes(cls, content: bytes):
        return cls(content, scan_annotations(content))

    def strip(self) -> bytes:
        """Content with the annotation comments removed and nothing else."""
        if self.sidecar:
            return self.content
        out = bytearray()
        cursor = 0
        for a in self.annotations:
            out += self.content[cursor:a.start]
            cursor = a.end
        out += self.content[cursor:]
        return bytes(out)

    def sidecar_json(self) -> str:
        return json.dumps({"version": SIDECAR_VERSION,
                           "annotations": [a.to_dict() for a in self.annotations]}, indent=2)

    @classmethod
    def from_sidecar(cls, content: bytes, text: str):
        d = json.loads(text)
        if d.get("version") != SIDECAR_VERSION:
            raise IntegrityError("unsupported sidecar version", 0)
        anns = [Annotation(a["rule_id"], bytes(a["original"]), bytes(a["replacement"]),
                           a["occurrence_index"], site=a["site"]) for a in d["annotations"]]
        return cls(content, anns, sidecar=True)


def pdf_regions(content: bytes):
    """Spans of comments, strings and stream bodies in PDF-like content.

    Conservative: an unterminated string or stream runs to end of input.
    """
    spans = []
    i, n = 0, len(content)
    while i < n:
        c = content[i]
        if c == 0x25:  # %
            j = i
            while j < n and content[j] not in (0x0A, 0x0D):
                j += 1
            spans.append((i, j))
            i = j
        elif c == 0x28:  # (
            depth, j = 1, i + 1
            while j < n and depth:
                b = content[j]
                if b == 0x5C:
                    j += 2
                    continue
                if b == 0x28:
                    depth += 1
                elif b == 0x29:
                    depth -= 1
                j += 1
            spans.append((i, min(j, n)))
            i = j
        elif c == 0x3C and content[i + 1:i + 2] != b"<":  # hex string, not a dict
            j = content.find(b">", i)
            j = n if j < 0 else j + 1
            spans.append((i, j))
            i = j
        elif c == 0x3C:
            i += 2
        elif content.startswith(b"stream", i) and content[i + 6:i + 7] in (b"\r", b"\n") \
                and (i == 0 or not content[i - 1:i].isalpha()):
            j = content.find(b"endstream", i + 6)
            j = n if j < 0 else j
            spans.append((i + 6, j))
            i = j + 9 if j < n else n
        else:
            i += 1
    return spans


def _overlaps(a0, a1, spans):
    for s0, s1 in spans:
        if a0 < s1 and s0 < a1:
            return (s0, s1)
    return None


def _protected(annotations):
    return [(a.site, a.end) for a in annotations]


def _apply(f: bytes, rule: RewriteRule, scanner, conflict_owner=None):
    existing = scan_annotations(f)
    if f.count(b"[" + MARKER) != len(existing):
        raise AnnotationConflict("input contains a stray provenance marker")
    rid = rule.id
    ours = [(a.site, a.end, a.rule_id) for a in existing]
    foreign = []
    if scanner is not None:
        # the host scanner sees our own comments too; those spans are guarded separately
        foreign = [s for s in scanner(f) if not _overlaps(s[0], s[1], [(a, b) for a, b, _ in ours])]
    n0 = sum(1 for a in existing if a.rule_id == rid)
    pat = rule.pattern
    sites = []
    i = f.find(pat)
    while i >= 0:
        j = i + len(pat)
        hit = next(((a, b, r) for a, b, r in ours if i < b and a < j), None)
        if hit is not None:
            if conflict_owner is not None and hit[2] != rid:
                raise CompositionError(
                    f"rule {rid!r} matches inside the rewrite of rule {hit[2]!r} at byte {i}",
                    (conflict_owner(hit[2]), conflict_owner(rid)))
            i = f.find(pat, i + 1)
            continue
        span = _overlaps(i, j, foreign)
        if span is not None:
            raise RegionOverlapError(
                f"match of {pat!r} at byte {i} overlaps a protected region {span}", i)
        sites.append(i)
        i = f.find(pat, j)
    if not sites:
        return AnnotatedFile(f, existing)
    prefix, term = rule.comment_style
    out = bytearray()
    cursor = 0
    for k, i in enumerate(sites):
        j = i + len(pat)
        out += f[cursor:i]
        out += rule.replacement
        at_eol = j == len(f) or f[j:j + 1] in (b"\n", b"\r")
        ann = Annotation(rid, pat, rule.replacement, n0 + k, prefix,
                         None if at_eol else term)
        out += ann.encode()
        cursor = j
    out += f[cursor:]
    content = bytes(out)
    annotations = scan_annotations(content)
    if len(annotations) != len(existing) + len(sites):
        raise AnnotationConflict("rewritten content contains stray provenance markers")
    return AnnotatedFile(content, annotations)


def apply_rewrite(f: bytes, rule: RewriteRule, scanner=pdf_regions, inline=True) -> AnnotatedFile:
    """Replace every occurrence of ``rule.pattern`` and annotate each site.

    Occurrences inside this tool's own annotations (or their rewritten
    tokens) are left alone, so applying a rule twice adds nothing.
    ``scanner`` returns host-format regions where rewriting is refused;
    pass None to rewrite anywhere.  With ``inline=False`` the annotations
    are kept out of the content (see :meth:`AnnotatedFile.sidecar_json`).
    """
    f = bytes(f)
    af = _apply(f, rule, scanner)
    if inline:
        return af
    return _to_sidecar(af, f)


def _to_sidecar(af: AnnotatedFile, f: bytes) -> AnnotatedFile:
    if scan_annotations(f):
        raise AnnotationConflict("sidecar mode needs an input without inline annotations")
    content = bytearray()
    anns = []
    cursor = 0
    for a in af.annotations:
        content += af.content[cursor:a.start]
        cursor = a.end
        anns.append(replace(a, site=len(content) - len(a.replacement), start=None, end=None,
                            inserted_eol=None))
    content += af.content[cursor:]
    return AnnotatedFile(bytes(content), anns, sidecar=True)


def invert_rewrite(af) -> bytes:
    """Undo every recorded rewrite, restoring the pre-rewrite bytes exactly."""
    if isinstance(af, (bytes, bytearray)):
        af = AnnotatedFile(bytes(af), scan_annotations(bytes(af)))
    content = af.content
    if af.sidecar:
        anns = sorted(af.annotations, key=lambda a: a.site)
        out = bytearray()
        cursor = 0
        for a in anns:
            j = a.site + len(a.replacement)
            if a.site < cursor or content[a.site:j] != a.replacement:
                raise IntegrityError("sidecar entry does not match the content", a.site)
            out += content[cursor:a.site] + a.original
            cursor = j
        out += content[cursor:]
        return bytes(out)
    # re-scan so edits to the content since annotation are caught
    anns = scan_annotations(content)
    if [(a.rule_id, a.occurrence_index, a.site) for a in anns] != \
            [(a.rule_id, a.occurrence_index, a.site) for a in af.annotations]:
        raise IntegrityError("annotation list does not match the content", anns[0].site if anns else 0)
    out = bytearray()
    cursor = 0
    for a in anns:
        out += content[cursor:a.site] + a.original
        cursor = a.end
    out += content[cursor:]
    return bytes(out)


def annotate_only(f: bytes, rule: RewriteRule, scanner=pdf_regions) -> bytes:
    """The purely syntactic first stage: comments added, tokens untouched."""
    af = apply_rewrite(f, rule, scanner)
    out = bytearray()
    cursor = 0
    for a in af.annotations:
        if a.rule_id != rule.id:
            continue
        out += af.content[cursor:a.site] + a.original + af.content[a.site + len(a.replacement):a.end]
        cursor = a.end
    out += af.content[cursor:]
    return bytes(out)


def rewrite_stages(f: bytes, rule: RewriteRule, scanner=pdf_regions):
    """``(annotated, rewritten)``: the vertical step, then the horizontal one."""
    return annotate_only(f, rule, scanner), apply_rewrite(f, rule, scanner).content


def compose_rewrites(f: bytes, rules, scanner=pdf_regions) -> AnnotatedFile:
    """Apply ``rules`` in order; :func:`invert_rewrite` undoes all of them."""
    rules = list(rules)
    for i, ri in enumerate(rules):
        for j in range(i + 1, len(rules)):
            rj = rules[j]
            if rj.pattern in ri.replacement:
                raise CompositionError(
                    f"pattern of rule {rj.id!r} occurs in the replacement of rule {ri.id!r}", (i, j))
    if len({r.id for r in rules}) != len(rules):
        raise CompositionError("rule ids must be distinct", None)
    order = {r.id: k for k, r in enumerate(rules)}
    af = AnnotatedFile(bytes(f), scan_annotations(bytes(f)))
    for r in rules:
        af = _apply(af.content, r, scanner, conflict_owner=lambda rid: order.get(rid))
    return af
