import random

import pytest

from fusionwb.catalog import (
    cyclic,
    dihedral8,
    direct_product,
    klein_four,
    symmetric,
)
from fusionwb.corpus import standard_robinson_datum
from fusionwb.errors import MalformedWord, MismatchedBase, RadiusBoundExceeded
from fusionwb.fusion import (
    fusion_equal,
    fusion_from_group,
    generate_fusion,
    is_subfusion,
)
from fusionwb.groups import (
    InjHom,
    Subgroup,
    full_subgroup,
    sylow_p,
)
from fusionwb.models import (
    AlperinDatum,
    AlperinEntry,
    DatumInvalid,
    ball_enumerate,
    base_element_of,
    hnn_presentation,
    is_identity,
    random_pinch_free_word,
    random_word,
    recover_fusion,
    reduce_word,
    robinson_presentation,
    validate_alperin_datum,
    word_from_syllables,
    words_equal,
)


@pytest.fixture(scope="module")
def c3_model():
    C3 = cyclic(3)
    S = full_subgroup(C3)
    inv = InjHom(S, S, [0, 2, 1])
    return S, inv, hnn_presentation(S, 3, [inv])


@pytest.fixture(scope="module")
def c4_model():
    C4 = cyclic(4)
    S = full_subgroup(C4)
    half = Subgroup(C4, (0, 2))
    phis = [InjHom(half, S, (0, 2)), InjHom(S, S, (0, 3, 2, 1))]
    return S, hnn_presentation(S, 2, phis)


@pytest.fixture(scope="module")
def robinson_s4():
    F, datum = standard_robinson_datum(symmetric(4))
    return F, datum, robinson_presentation(datum)


# ---------------------------------------------------------------------------
# emitters


def test_hnn_c3_shape(c3_model):
    _, _, m = c3_model
    assert m.generators == ("g1", "g2", "t1")
    assert len(m.relators) == 9 + 3


def test_hnn_v4_rho_shape():
    V4 = klein_four()
    S = full_subgroup(V4)
    m = hnn_presentation(S, 2, [InjHom(S, S, [0, 2, 3, 1])])
    assert len(m.generators) == 3 + 1
    assert len(m.relators) == 16 + 4


def test_hnn_no_morphisms_is_s_itself():
    D8 = dihedral8()
    S = full_subgroup(D8)
    m = hnn_presentation(S, 2, [])
    assert len(m.generators) == 7
    assert len(ball_enumerate(m, 2)) <= 8
    assert len(ball_enumerate(m, 4)) == 8


def test_robinson_relator_count(robinson_s4):
    _, _, m = robinson_s4
    assert len(m.generators) == 7 + 23
    assert len(m.relators) == 8 * 8 + 24 * 24 + 8


def test_robinson_single_entry_is_l1():
    D8 = dihedral8()
    F = fusion_from_group(full_subgroup(D8), D8, p=2)
    iota = InjHom(F.S, F.S, F.S.elements)
    datum = AlperinDatum(F, [AlperinEntry(F.S, F.group, iota)])
    m = robinson_presentation(datum)
    assert len(m.factors) == 1 and not m.edges
    assert len(ball_enumerate(m, 3)) == 8


def test_amalgam_over_whole_group_collapses():
    D8 = dihedral8()
    F = fusion_from_group(full_subgroup(D8), D8, p=2)
    iota = InjHom(F.S, F.S, F.S.elements)
    datum = AlperinDatum(F, [AlperinEntry(F.S, F.group, iota),
                             AlperinEntry(F.S, F.group, iota)])
    m = robinson_presentation(datum)
    single = hnn_presentation(F.S, 2, [])
    for r in range(4):
        assert len(ball_enumerate(m, r)) == len(ball_enumerate(single, r))


# ---------------------------------------------------------------------------
# word problem


def test_reduce_pinch(c3_model):
    _, _, m = c3_model
    tid = m.stables[0].name_index
    w = m.word([(tid, -1), (m.s_letter[1], 1), (tid, 1)])
    r = reduce_word(w)
    assert base_element_of(r) == 2      # the inverse of x


def test_free_cancellation(c3_model):
    _, _, m = c3_model
    tid = m.stables[0].name_index
    assert is_identity(m.word([(tid, 1), (tid, -1)]))
    assert not is_identity(m.word([(tid, 1)]))


def test_reduce_idempotent_and_nonincreasing(c4_model):
    _, m = c4_model
    rng = random.Random(7)
    for _ in range(300):
        w = random_word(m, rng)
        r = reduce_word(w)
        assert len(r.letters) <= len(w.letters)
        assert reduce_word(r).letters == r.letters


def test_malformed_word(c3_model):
    _, _, m = c3_model
    with pytest.raises(MalformedWord):
        reduce_word(m.word([(99, 1)]))
    with pytest.raises(MalformedWord):
        reduce_word(m.word([(0, 2)]))


def test_s_letters_never_identified(c4_model):
    S, m = c4_model
    words = [m.s_word([x]) for x in S.elements]
    for i, u in enumerate(words):
        for j, v in enumerate(words):
            assert words_equal(u, v) == (i == j)


def test_ball_radius_cap(c3_model):
    _, _, m = c3_model
    with pytest.raises(RadiusBoundExceeded):
        ball_enumerate(m, 9)


def test_ball_radius_one(c3_model):
    _, _, m = c3_model
    ball = ball_enumerate(m, 1)
    shows = [w.display() for w in ball]
    assert shows == ["", "g1^1", "g2^1", "t1^-1", "t1^1"]


def test_britton_suite(c4_model):
    _, m = c4_model
    rng = random.Random(1898)
    for _ in range(1000):
        w = random_pinch_free_word(m, rng)
        assert any(m.letter_info[g][0] == "stable" for g, _ in w.letters)
        assert not is_identity(w)
    for _ in range(1000):
        w = random_word(m, rng)
        assert is_identity(w.concat(w.inverse()))


def test_mixed_sign_pinch_free_words_exist(c4_model):
    S, m = c4_model
    # t1^-1 x t1 is pinch-free: x is outside the attached C2
    t1 = m.stables[0].name_index
    w = m.word([(t1, -1), (m.s_letter[1], 1), (t1, 1)])
    r = reduce_word(w)
    assert len(r.letters) == 3
    assert not is_identity(w)


# ---------------------------------------------------------------------------
# fusion recovery


def test_recover_radius_zero_is_inner(c3_model):
    S, _, m = c3_model
    R = recover_fusion(m, S, 0)
    assert fusion_equal(R, fusion_from_group(S, S.parent, p=3))


def test_recover_c3_inversion(c3_model):
    S, inv, m = c3_model
    F = generate_fusion(S, 3, [inv])
    R = recover_fusion(m, S, 2)
    assert fusion_equal(R, F)
    assert (0, 2, 1) in {h.images for h in R.aut_set(S)}


def test_recover_monotone_and_sound(c3_model):
    S, inv, m = c3_model
    F = generate_fusion(S, 3, [inv])
    prev = None
    for r in range(5):
        R = recover_fusion(m, S, r)
        assert is_subfusion(R, F)
        if prev is not None:
            assert is_subfusion(prev, R)
        prev = R


def test_recover_robinson(robinson_s4):
    F, _, m = robinson_s4
    R = recover_fusion(m, F.S, 3)
    assert fusion_equal(R, F)
    prev = None
    for r in (1, 2, 4):
        got = recover_fusion(m, F.S, r)
        assert is_subfusion(got, F)
        if prev is not None:
            assert is_subfusion(prev, got)
        prev = got


def test_recover_requires_matching_s(c3_model):
    _, _, m = c3_model
    with pytest.raises(MismatchedBase):
        recover_fusion(m, full_subgroup(klein_four()), 1)


def test_recover_hnn_v4_rho():
    V4 = klein_four()
    S = full_subgroup(V4)
    rho = InjHom(S, S, [0, 2, 3, 1])
    m = hnn_presentation(S, 2, [rho])
    F = generate_fusion(S, 2, [rho])
    assert fusion_equal(recover_fusion(m, S, 2), F)
    from fusionwb.catalog import alternating4
    from fusionwb.groups import sylow_p
    A4 = alternating4()
    assert fusion_equal(F, fusion_from_group(sylow_p(A4, 2), A4))


def test_recover_hnn_two_stable_letters():
    V4 = klein_four()
    S = full_subgroup(V4)
    rho = InjHom(S, S, [0, 2, 3, 1])
    tau = InjHom(S, S, [0, 2, 1, 3])
    m = hnn_presentation(S, 2, [rho, tau])
    F = generate_fusion(S, 2, [rho, tau])
    assert len(m.stables) == 2
    got = recover_fusion(m, S, 2)
    assert fusion_equal(got, F)
    assert len(got.aut_set(S)) == 6


# ---------------------------------------------------------------------------
# Alperin datum validation


def test_standard_datum_valid(robinson_s4):
    _, datum, _ = robinson_s4
    assert validate_alperin_datum(datum).valid


def test_inner_only_datum_fails_generation():
    A4 = klein_four()  # S = V4 with the order-3 fusion needs an outer L
    from fusionwb.catalog import alternating4
    G = alternating4()
    from fusionwb.groups import sylow_p
    F = fusion_from_group(sylow_p(G, 2), G)
    iota = InjHom(F.S, F.S, F.S.elements)
    datum = AlperinDatum(F, [AlperinEntry(F.S, F.group, iota)])
    report = validate_alperin_datum(datum)
    assert not report.valid
    clauses = {f.clause for f in report.failures}
    assert "GenerationFailure" in clauses or "OuterQuotientFailure" in clauses


def test_central_product_entry_fails_centralizer():
    V4 = klein_four()
    F = fusion_from_group(full_subgroup(V4), V4, p=2)
    L = direct_product(V4, cyclic(3))
    iota = InjHom(F.S, full_subgroup(L), [0, 3, 6, 9])
    datum = AlperinDatum(F, [AlperinEntry(F.S, L, iota)])
    report = validate_alperin_datum(datum)
    clauses = {f.clause for f in report.failures}
    assert "CentralizerFailure" in clauses


def test_robinson_refuses_invalid_datum():
    V4 = klein_four()
    F = fusion_from_group(full_subgroup(V4), V4, p=2)
    L = direct_product(V4, cyclic(3))
    iota = InjHom(F.S, full_subgroup(L), [0, 3, 6, 9])
    datum = AlperinDatum(F, [AlperinEntry(F.S, L, iota)])
    with pytest.raises(DatumInvalid):
        robinson_presentation(datum)


def test_datum_structural_checks():
    V4 = klein_four()
    F = fusion_from_group(full_subgroup(V4), V4, p=2)
    iota = InjHom(F.S, F.S, F.S.elements)
    with pytest.raises(ValueError):
        AlperinDatum(F, [])
    c2 = Subgroup(F.group, (0, 1))
    with pytest.raises(ValueError):
        AlperinDatum(F, [AlperinEntry(c2, F.group, iota)])


def test_word_from_syllables_roundtrip(c4_model):
    _, m = c4_model
    w = word_from_syllables(m, [1, 2, 0], [(0, 1), (1, -1)])
    assert reduce_word(w).letters == w.letters


def test_hnn_canonical_form_matches_word_equality(c4_model):
    from fusionwb.models import _reduce_hnn
    _, m = c4_model
    rng = random.Random(23)
    words = [random_word(m, rng, max_letters=6) for _ in range(80)]
    canon = [_reduce_hnn(w, canonical=True).letters for w in words]
    for i, u in enumerate(words):
        for j, v in enumerate(words):
            assert words_equal(u, v) == (canon[i] == canon[j])


# ---------------------------------------------------------------------------
# a genuinely infinite amalgam: S3 *_{C3} S3 realizing inversion on C3


@pytest.fixture(scope="module")
def s3_star_s3():
    S3 = symmetric(3)
    F = fusion_from_group(sylow_p(S3, 3), S3, p=3)   # inversion fusion on C3
    Sgroup, Sfull = F.group, F.S
    emb = sylow_p(S3, 3).elements
    iota = InjHom(Sfull, full_subgroup(S3), emb)
    datum = AlperinDatum(F, [AlperinEntry(Sfull, S3, iota),
                             AlperinEntry(Sfull, S3, iota)])
    return F, datum


def test_infinite_amalgam_datum_valid(s3_star_s3):
    _, datum = s3_star_s3
    assert validate_alperin_datum(datum).valid


def test_infinite_amalgam_recovers_fusion(s3_star_s3):
    F, datum = s3_star_s3
    m = robinson_presentation(datum)
    got = recover_fusion(m, F.S, 3)
    assert fusion_equal(got, F)
    for r in (1, 2):
        assert is_subfusion(recover_fusion(m, F.S, r), F)


def test_infinite_amalgam_has_growing_ball(s3_star_s3):
    _, datum = s3_star_s3
    m = robinson_presentation(datum)
    sizes = [len(ball_enumerate(m, r)) for r in range(5)]
    assert sizes[0] == 1
    # ten nonidentity letters, but the two copies of C3-minus-identity are
    # identified through the edge: 1 + 10 - 2 = 9
    assert sizes[1] == 9
    # the amalgam is infinite: balls keep growing past both factor orders
    assert sizes[2] > sizes[1] and sizes[3] > sizes[2] and sizes[4] > sizes[3]
    assert sizes[4] > 2 * 6


def test_infinite_amalgam_alternating_words_nontrivial(s3_star_s3):
    _, datum = s3_star_s3
    m = robinson_presentation(datum)
    # reflections lie outside the amalgamated C3, so alternating products
    # have infinite order; check a few powers stay nontrivial
    refl1 = next(k for k in range(1, 6)
                 if k not in m.edges[2].left
                 and m.factors[0].element_order(k) == 2)
    refl2 = next(k for k in range(1, 6)
                 if k not in m.edges[2].right
                 and m.factors[1].element_order(k) == 2)
    w = m.word([(m.factor_letter[0][refl1], 1),
                (m.factor_letter[1][refl2], 1)])
    power = w
    for _ in range(4):
        assert not is_identity(power)
        power = power.concat(w)
    assert not is_identity(w.concat(w.inverse()).concat(w))
    assert is_identity(w.concat(w.inverse()))
