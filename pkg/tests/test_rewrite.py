import pytest
from hypothesis import given, settings, strategies as st

from geoxform.rewrite import (MARKER, RULES, AnnotatedFile, Annotation, CompositionError,
                              IntegrityError, RegionOverlapError, RewriteError, RewriteRule,
                              apply_rewrite, compose_rewrites, invert_rewrite, pdf_regions, rewrite_stages,
                              scan_annotations)

OBJ = RULES["objend-endobj"]

printable = st.binary(min_size=1, max_size=4).map(lambda b: bytes(0x21 + x % 94 for x in b))


@st.composite
def rewrite_cases(draw):
    pat = draw(printable)
    rep = draw(st.binary(max_size=4).map(lambda b: bytes(0x20 + x % 95 for x in b)))
    if rep == pat:
        rep = pat + b"x"
    chunks = draw(st.lists(st.one_of(st.binary(max_size=12), st.just(pat)), max_size=8))
    return b"".join(chunks), RewriteRule("r", pat, rep)


def test_objend_two_stage_sequence():
    annotated, rewritten = rewrite_stages(b"objend", OBJ)
    assert annotated.startswith(b"objend % objend -> endobj [geoxform:")
    assert rewritten.startswith(b"endobj % objend -> endobj [geoxform:")
    # site at end of input: the comment shares the line, nothing is appended after the tag
    assert rewritten.endswith(b"]")
    assert invert_rewrite(rewritten) == b"objend"


def test_annotation_adjacent_to_token_mid_line():
    af = apply_rewrite(b"1 0 obj\n<< >>\nobjend trailer\n", OBJ)
    line = af.content.split(b"\n")[2]
    assert line.startswith(b"endobj % objend -> endobj [")
    assert af.content.split(b"\n")[3] == b" trailer"
    assert af.annotations[0].inserted_eol == b"\n"
    assert invert_rewrite(af) == b"1 0 obj\n<< >>\nobjend trailer\n"


def test_site_at_line_end_keeps_line_structure():
    src = b"objend\nobjend\r\n"
    af = apply_rewrite(src, OBJ)
    assert af.content.count(b"\n") == 2
    assert all(a.inserted_eol is None for a in af.annotations)


def test_no_occurrence_leaves_input_alone():
    af = apply_rewrite(b"nothing here", OBJ)
    assert af.content == b"nothing here" and af.annotations == []
    assert invert_rewrite(af) == b"nothing here"


def test_occurrence_indices():
    af = apply_rewrite(b"objend x objend", OBJ)
    assert [a.occurrence_index for a in af.annotations] == [0, 1]
    assert [a.original for a in af.annotations] == [b"objend", b"objend"]


def test_tampered_original_is_an_integrity_error():
    af = apply_rewrite(b"a objend\n", OBJ)
    bad = af.content.replace(b"% objend ->", b"% objenx ->")
    with pytest.raises(IntegrityError) as info:
        invert_rewrite(bad)
    assert info.value.offset == bad.index(b" % objenx")


def test_tampered_token_is_an_integrity_error():
    af = apply_rewrite(b"a objend\n", OBJ)
    with pytest.raises(IntegrityError):
        invert_rewrite(af.content.replace(b"a endobj", b"a endobx"))


def test_damaged_tag_is_an_integrity_error():
    af = apply_rewrite(b"a objend\n", OBJ)
    with pytest.raises(IntegrityError):
        scan_annotations(af.content.replace(b"~", b"!"))


def test_refuses_inside_comments_strings_and_streams():
    for src in (b"% objend in a comment\n", b"(objend)", b"<objend>",
                b"stream\nobjend\nendstream"):
        with pytest.raises(RegionOverlapError):
            apply_rewrite(src, OBJ)
    # the scanner can be switched off
    assert invert_rewrite(apply_rewrite(b"(objend)", OBJ, scanner=None)) == b"(objend)"


def test_pdf_regions():
    data = b"1 0 obj (a\\)b) % c\n<< /K <0a> >>\nstream\nxx\nendstream"
    spans = pdf_regions(data)
    assert data[spans[0][0]:spans[0][1]] == b"(a\\)b)"
    assert data[spans[1][0]:spans[1][1]] == b"% c"
    assert data[spans[2][0]:spans[2][1]] == b"<0a>"
    assert data[spans[3][0]:spans[3][1]] == b"\nxx\n"


def test_idempotent_application():
    once = apply_rewrite(b"objend objend\n", OBJ)
    twice = apply_rewrite(once.content, OBJ)
    assert twice.content == once.content
    assert len(twice.annotations) == 2


def test_stray_marker_is_refused():
    with pytest.raises(IntegrityError):
        apply_rewrite(b"objend [" + MARKER + b"junk]", OBJ)


def test_rule_validation():
    with pytest.raises(RewriteError):
        RewriteRule("x", b"", b"a")
    with pytest.raises(RewriteError):
        RewriteRule("x", b"a", b"a")
    with pytest.raises(RewriteError):
        RewriteRule("x", b"a\n", b"b")
    with pytest.raises(RewriteError):
        RewriteRule("bad id", b"a", b"b")


def test_annotation_text_round_trips():
    ann = Annotation("r", b"a b\\[x]", b"%y", 3, b"%", b"\n")
    content = b"%y" + ann.encode()
    (back,) = scan_annotations(content)
    assert (back.original, back.replacement, back.occurrence_index, back.inserted_eol) == \
        (b"a b\\[x]", b"%y", 3, b"\n")


def test_strip_removes_only_annotations():
    af = apply_rewrite(b"x objend y\nobjend", OBJ)
    assert af.strip() == b"x endobj y\nendobj"


def test_sidecar_mode():
    src = b"a objend b objend\n"
    af = apply_rewrite(src, OBJ, inline=False)
    assert af.content == b"a endobj b endobj\n"
    back = AnnotatedFile.from_sidecar(af.content, af.sidecar_json())
    assert invert_rewrite(back) == src
    with pytest.raises(IntegrityError):
        invert_rewrite(AnnotatedFile.from_sidecar(b"a endobx b endobj\n", af.sidecar_json()))


def test_compose_examples():
    src = b"objend foo\n"
    assert compose_rewrites(src, []).content == src
    foo = RewriteRule("foo-bar", b"foo", b"bar")
    af = compose_rewrites(src, [OBJ, foo])
    assert af.strip() == b"endobj bar\n"
    assert invert_rewrite(af) == src
    with pytest.raises(CompositionError) as info:
        compose_rewrites(src, [OBJ, RewriteRule("end-x", b"end", b"x")])
    assert info.value.pair == (0, 1)


def test_matches_inside_previous_annotation_are_a_conflict():
    # "obj" occurs inside the first rule's annotation text
    with pytest.raises(CompositionError):
        compose_rewrites(b"objend\n", [OBJ, RewriteRule("obj-o", b"obj", b"o")])


@settings(max_examples=300)
@given(rewrite_cases())
def test_invert_after_apply_is_identity(case):
    data, rule = case
    af = apply_rewrite(data, rule, scanner=None)
    assert invert_rewrite(af) == data
    assert invert_rewrite(af.content) == data


@settings(max_examples=300)
@given(rewrite_cases())
def test_sugar_neutrality(case):
    data, rule = case
    af = apply_rewrite(data, rule, scanner=None)
    assert af.strip() == data.replace(rule.pattern, rule.replacement)


@settings(max_examples=200)
@given(rewrite_cases())
def test_second_application_adds_nothing(case):
    data, rule = case
    once = apply_rewrite(data, rule, scanner=None)
    assert apply_rewrite(once.content, rule, scanner=None).content == once.content
