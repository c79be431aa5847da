import pytest

from fusionwb.catalog import cyclic, named_group, symmetric
from fusionwb.corpus import corpus_dir, load_corpus, standard_robinson_datum
from fusionwb.errors import CorpusMissing, NonAssociative
from fusionwb.fusion import fusion_equal
from fusionwb.groups import InjHom, full_subgroup
from fusionwb.io import (
    ParseError,
    format_elems,
    load_group,
    parse_elems,
    parse_family,
    parse_fusion_spec,
    parse_group,
    parse_presentation,
    parse_word,
    serialize_family,
    serialize_fusion_spec,
    serialize_group,
    serialize_presentation,
)
from fusionwb.models import (
    hnn_presentation,
    is_identity,
    robinson_presentation,
)
from fusionwb.stable import stable_basis


def test_elems_round_trip():
    assert parse_elems("[0,3,5,6]") == (0, 3, 5, 6)
    assert format_elems((0, 3, 5, 6)) == "[0,3,5,6]"
    assert parse_elems("[]") == ()
    with pytest.raises(ParseError):
        parse_elems("0,1")


def test_group_file_round_trip_all_corpus():
    corpus = load_corpus()
    for name in corpus.names:
        path = corpus.directory / corpus.files[name]
        text = path.read_text()
        G = parse_group(text)
        assert serialize_group(G) == text
        assert G == corpus.groups[name]


def test_perm_mode_parsing():
    text = "group S3 order 6\nmode perm\n(1 2)\n(1 2 3)\n"
    G = parse_group(text)
    assert G.order == 6
    from fusionwb.groups import is_isomorphic
    assert is_isomorphic(G, symmetric(3))


def test_perm_mode_order_mismatch():
    with pytest.raises(ParseError):
        parse_group("group S3 order 7\nmode perm\n(1 2)\n(1 2 3)\n")


def test_corrupted_table_surfaces_nonassociative():
    # swap an intercalate away from row/column 0: the table stays a latin
    # square with identity, so the corruption can only surface as a
    # non-associative triple
    D8 = named_group("D8")
    t = [list(row) for row in D8.table]
    n = D8.order
    found = None
    for i1 in range(1, n):
        for i2 in range(i1 + 1, n):
            for j1 in range(1, n):
                for j2 in range(j1 + 1, n):
                    if t[i1][j1] == t[i2][j2] and t[i1][j2] == t[i2][j1] \
                            and t[i1][j1] != t[i1][j2]:
                        bad = [row[:] for row in t]
                        bad[i1][j1], bad[i1][j2] = bad[i1][j2], bad[i1][j1]
                        bad[i2][j1], bad[i2][j2] = bad[i2][j2], bad[i2][j1]
                        try:
                            parse_group(_table_text(bad))
                        except NonAssociative as exc:
                            found = (bad, exc.triple)
                        if found:
                            break
                if found:
                    break
            if found:
                break
        if found:
            break
    assert found is not None
    bad, (a, b, c) = found
    assert bad[bad[a][b]][c] != bad[a][bad[b][c]]


def _table_text(rows):
    lines = [f"group D8bad order {len(rows)}", "mode table"]
    lines += [" ".join(str(x) for x in row) for row in rows]
    return "\n".join(lines) + "\n"


def test_fusion_spec_round_trip():
    corpus = load_corpus()
    text = (corpus.directory / "c3_inversion.fus").read_text()
    spec = parse_fusion_spec(text, base_dir=corpus.directory)
    assert serialize_fusion_spec(spec) == text
    F = spec.fusion()
    assert len(F.aut_set(F.S)) == 2


def test_fusion_spec_bad_morphism():
    corpus = load_corpus()
    bad = "fusion p=3 S=c3.grp\nphi: [0,1,2] -> [0,1,2] ; images=[0,1,1]\n"
    with pytest.raises(ParseError):
        parse_fusion_spec(bad, base_dir=corpus.directory)


def test_presentation_round_trip_hnn():
    C3 = cyclic(3)
    S = full_subgroup(C3)
    pres = hnn_presentation(S, 3, [InjHom(S, S, [0, 2, 1])])
    text = serialize_presentation(pres)
    again = parse_presentation(text)
    assert serialize_presentation(again) == text
    w = parse_word(again, "t1^-1 g1^1 t1^1 g1^1")
    assert is_identity(w)


def test_presentation_round_trip_amalgam():
    F, datum = standard_robinson_datum(symmetric(4))
    pres = robinson_presentation(datum)
    text = serialize_presentation(pres)
    again = parse_presentation(text)
    assert serialize_presentation(again) == text
    from fusionwb.models import recover_fusion
    got = recover_fusion(again, full_subgroup(again.s_group), 3)
    assert fusion_equal(got, F)


def test_presentation_rejects_edited_relators():
    C3 = cyclic(3)
    S = full_subgroup(C3)
    pres = hnn_presentation(S, 3, [InjHom(S, S, [0, 2, 1])])
    text = serialize_presentation(pres)
    lines = text.splitlines()
    lines = [ln for ln in lines if ln != "rel g1^1 g2^1"]
    with pytest.raises(ParseError):
        parse_presentation("\n".join(lines) + "\n")


def test_family_round_trip():
    corpus = load_corpus()
    spec = parse_fusion_spec(
        (corpus.directory / "v4_rho.fus").read_text(),
        base_dir=corpus.directory)
    F = spec.fusion()
    for fam in stable_basis(F, 3):
        text = serialize_family(fam)
        again = parse_family(F, text)
        assert serialize_family(again) == text
        assert again.degree == 3


def test_family_parse_errors():
    corpus = load_corpus()
    spec = parse_fusion_spec(
        (corpus.directory / "v4_rho.fus").read_text(),
        base_dir=corpus.directory)
    F = spec.fusion()
    with pytest.raises(ParseError):
        parse_family(F, "V=[0,1] ; a1:1\n")      # exterior var at p=2
    with pytest.raises(ParseError):
        parse_family(F, "V=[0,5] ; x1:1\n")      # not a subgroup of S
    with pytest.raises(ParseError):
        parse_family(F, "V=[0,1] ; x1:1\nV=[0,2] ; x1^2:1\n")  # mixed degree


def test_load_corpus_missing(tmp_path):
    with pytest.raises(CorpusMissing):
        load_corpus(tmp_path)


def test_load_group_from_path():
    G = load_group(corpus_dir() / "q8.grp")
    assert G.order == 8 and G.name == "Q8"
