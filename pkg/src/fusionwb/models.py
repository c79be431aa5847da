"""Infinite group models realizing a fusion system, with a decidable word problem.

Two constructions are emitted: an iterated HNN extension of S (one stable
letter per generating morphism) and an iterated amalgam of finite groups over
the S-normalizers prescribed by an Alperin datum.  Words are reduced by pinch
elimination (HNN) or by folding letters through the amalgamated copies
(amalgam); a reduced word of length >= 2 is never trivial, which is what makes
the identity test sound.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    MalformedWord,
    MismatchedBase,
    RadiusBoundExceeded,
    WorkbenchError,
)
from .fusion import fusion_equal, generate_fusion, out_f
from .groups import (
    Group,
    InjHom,
    Subgroup,
    centralizer,
    full_subgroup,
    is_isomorphic,
    normalizer,
    p_part,
    quotient_group,
    subgroup_center,
    subgroups,
    sylow_p,
)

MAX_RADIUS = 8


# ---------------------------------------------------------------------------
# presentations and words


@dataclass(frozen=True)
class StableLetter:
    """HNN stable letter t with relation t^-1 u t = phi(u) on u in P."""

    name: str
    name_index: int           # generator index of t
    source: Subgroup          # P <= S
    phi: dict                 # element of P -> element of S
    image: frozenset          # phi(P)

    def phi_inverse(self):
        return {v: k for k, v in self.phi.items()}


@dataclass(frozen=True)
class Edge:
    """Identification of N_S(P_i) inside factor 1 and factor i."""

    factor: int
    left: dict                # element of L_1 -> element of L_i
    right: dict               # element of L_i -> element of L_1


class Presentation:
    """A finitely presented group model of kind 'hnn' or 'amalgam'."""

    def __init__(self, kind, generators, letter_info, relators=(), name="G"):
        self.kind = kind
        self.generators = tuple(generators)
        self.letter_info = tuple(letter_info)
        self.relators = tuple(relators)
        self.name = name
        self.gen_index = {g: i for i, g in enumerate(self.generators)}
        # hnn payload
        self.base = None
        self.stables = ()
        self.s_letter = {}
        # amalgam payload
        self.factors = ()
        self.factor_letter = ()
        self.edges = {}
        self.s_group = None
        self.s_embed = ()
        self.attachments = ()

    def word(self, letters):
        return ModelWord(self, tuple(letters))

    def s_word(self, elems):
        """Word spelling a product of S-elements."""
        letters = []
        for x in elems:
            if x == 0:
                continue
            if self.kind == "hnn":
                letters.append((self.s_letter[x], 1))
            else:
                letters.append((self.factor_letter[0][self.s_embed[x]], 1))
        return ModelWord(self, tuple(letters))

    def __repr__(self):
        return (f"Presentation({self.kind}, {len(self.generators)} generators, "
                f"{len(self.relators)} relators)")


@dataclass(frozen=True)
class ModelWord:
    model: Presentation
    letters: tuple

    def __len__(self):
        return len(self.letters)

    def check(self):
        for gid, exp in self.letters:
            if not 0 <= gid < len(self.model.generators):
                raise MalformedWord(f"letter {gid} out of range")
            if exp not in (1, -1):
                raise MalformedWord(f"exponent {exp} must be +-1")
        return self

    def inverse(self):
        return ModelWord(self.model,
                         tuple((gid, -exp) for gid, exp in reversed(self.letters)))

    def concat(self, other):
        if other.model is not self.model:
            raise MalformedWord("words over different presentations")
        return ModelWord(self.model, self.letters + other.letters)

    def display(self):
        names = self.model.generators
        return " ".join(f"{names[g]}^{e}" for g, e in self.letters)


# ---------------------------------------------------------------------------
# HNN reduction


def _hnn_syllables(word):
    """[s0, (i, e1), s1, ..., (ik, ek), sk] with s-values folded."""
    m = word.model
    base = m.base
    svals = [0]
    ts = []
    for gid, exp in word.letters:
        info = m.letter_info[gid]
        if info[0] == "s":
            x = info[1] if exp == 1 else base.inv(info[1])
            svals[-1] = base.table[svals[-1]][x]
        else:
            ts.append((info[1], exp))
            svals.append(0)
    return svals, ts


def _hnn_eliminate_pinches(m, svals, ts):
    base = m.base
    j = 0
    while j < len(ts) - 1:
        (i1, e1), (i2, e2) = ts[j], ts[j + 1]
        mid = svals[j + 1]
        pinched = None
        if i1 == i2 and e1 == -1 and e2 == 1 and mid in m.stables[i1].phi:
            pinched = m.stables[i1].phi[mid]
        elif i1 == i2 and e1 == 1 and e2 == -1 and mid in m.stables[i1].image:
            pinched = m.stables[i1].phi_inverse()[mid]
        if pinched is None:
            j += 1
            continue
        merged = base.table[base.table[svals[j]][pinched]][svals[j + 2]]
        svals[j:j + 3] = [merged]
        ts[j:j + 2] = []
        j = max(j - 1, 0)
    return svals, ts


def _hnn_letters(m, svals, ts):
    letters = []
    for k, s in enumerate(svals):
        if s != 0:
            letters.append((m.s_letter[s], 1))
        if k < len(ts):
            i, e = ts[k]
            letters.append((m.stables[i].name_index, e))
    return tuple(letters)


def _hnn_canonical(m, svals, ts):
    """Push coset parts leftward through shortlex transversals of P / phi(P)."""
    base = m.base
    svals = list(svals)
    for j in range(len(ts), 0, -1):
        i, e = ts[j - 1]
        st = m.stables[i]
        part = st.image if e == 1 else frozenset(st.phi)
        s = svals[j]
        rep = min(base.table[a][s] for a in part)
        carried = base.table[s][base.inv(rep)]   # s = carried * rep
        svals[j] = rep
        moved = st.phi_inverse()[carried] if e == 1 else st.phi[carried]
        svals[j - 1] = base.table[svals[j - 1]][moved]
    return svals, ts


def _reduce_hnn(word, canonical=False):
    m = word.model
    svals, ts = _hnn_syllables(word)
    svals, ts = _hnn_eliminate_pinches(m, svals, ts)
    if canonical:
        svals, ts = _hnn_canonical(m, svals, ts)
    return ModelWord(m, _hnn_letters(m, svals, ts))


# ---------------------------------------------------------------------------
# amalgam reduction


def _amalgam_letters_in(word):
    m = word.model
    out = []
    for gid, exp in word.letters:
        kind, fi, elem = m.letter_info[gid]
        if exp == -1:
            elem = m.factors[fi - 1].inv(elem)
        out.append((fi, elem))
    return out


def _reduce_amalgam_letters(m, letters):
    letters = list(letters)
    changed = True
    while changed:
        changed = False
        k = 0
        while k < len(letters):
            fi, x = letters[k]
            if x == 0:
                del letters[k]
                changed = True
                continue
            if k + 1 < len(letters) and letters[k + 1][0] == fi:
                letters[k] = (fi, m.factors[fi - 1].table[x][letters[k + 1][1]])
                del letters[k + 1]
                changed = True
                continue
            if fi >= 2 and x in m.edges[fi].right:
                letters[k] = (1, m.edges[fi].right[x])
                changed = True
                continue
            if fi == 1:
                if k > 0:
                    lf = letters[k - 1][0]
                    if lf >= 2 and x in m.edges[lf].left:
                        lx = letters[k - 1][1]
                        letters[k - 1] = (
                            lf, m.factors[lf - 1].table[lx][m.edges[lf].left[x]])
                        del letters[k]
                        changed = True
                        k -= 1
                        continue
                if k + 1 < len(letters):
                    rf = letters[k + 1][0]
                    if rf >= 2 and x in m.edges[rf].left:
                        rx = letters[k + 1][1]
                        letters[k + 1] = (
                            rf, m.factors[rf - 1].table[m.edges[rf].left[x]][rx])
                        del letters[k]
                        changed = True
                        continue
            k += 1
    return letters


def _reduce_amalgam(word):
    m = word.model
    letters = _reduce_amalgam_letters(m, _amalgam_letters_in(word))
    out = []
    for fi, x in letters:
        out.append((m.factor_letter[fi - 1][x], 1))
    return ModelWord(m, tuple(out))


# ---------------------------------------------------------------------------
# public word operations


def reduce_word(word):
    """Pinch-free (HNN) or fold-reduced (amalgam) form of the same element."""
    word.check()
    if word.model.kind == "hnn":
        return _reduce_hnn(word)
    return _reduce_amalgam(word)


def is_identity(word):
    word.check()
    if word.model.kind == "hnn":
        red = _reduce_hnn(word)
        return len(red.letters) == 0
    return len(_reduce_amalgam(word).letters) == 0


def words_equal(u, v):
    return is_identity(u.concat(v.inverse()))


def base_element_of(word):
    """The S-element a word represents, or None if it lies outside S."""
    word.check()
    m = word.model
    if m.kind == "hnn":
        svals, ts = _hnn_eliminate_pinches(m, *_hnn_syllables(word))
        if ts:
            return None
        return svals[0]
    letters = _reduce_amalgam_letters(m, _amalgam_letters_in(word))
    if not letters:
        return 0
    if len(letters) > 1 or letters[0][0] != 1:
        return None
    z = letters[0][1]
    back = {img: x for x, img in enumerate(m.s_embed)}
    return back.get(z)


# ---------------------------------------------------------------------------
# emitters


def hnn_presentation(S, p, phis):
    """HNN extension of S with one stable letter per morphism in phis."""
    base = S.parent
    if S.elements != tuple(range(base.order)):
        raise ValueError("S must be the full subgroup of its p-group")
    if p_part(base.order, p) != base.order:
        raise ValueError(f"|S| = {base.order} is not a power of {p}")
    names = [f"g{k}" for k in range(1, base.order)]
    info = [("s", k) for k in range(1, base.order)]
    s_letter = {k: k - 1 for k in range(1, base.order)}
    stables = []
    for i, phi in enumerate(phis, start=1):
        if phi.source.parent != base or phi.target.parent != base:
            raise ValueError("morphism does not live on S")
        names.append(f"t{i}")
        info.append(("stable", i - 1))
        stables.append(StableLetter(
            name=f"t{i}",
            name_index=len(names) - 1,
            source=phi.source,
            phi={x: phi.image_of(x) for x in phi.source.elements},
            image=frozenset(phi.images)))
    pres = Presentation("hnn", names, info, name=f"HNN({base.name})")
    pres.base = base
    pres.s_letter = s_letter
    pres.s_group = base
    pres.s_embed = tuple(range(base.order))
    pres.stables = tuple(stables)
    relators = []
    for a in range(base.order):
        for b in range(base.order):
            letters = []
            for x in (a, b, base.inv(base.table[a][b])):
                if x != 0:
                    letters.append((s_letter[x], 1))
            relators.append(ModelWord(pres, tuple(letters)))
    for k, st in enumerate(stables):
        tid = base.order - 1 + k
        for u in st.source.elements:
            letters = [(tid, -1)]
            if u != 0:
                letters.append((s_letter[u], 1))
            letters.append((tid, 1))
            v = base.inv(st.phi[u])
            if v != 0:
                letters.append((s_letter[v], 1))
            relators.append(ModelWord(pres, tuple(letters)))
    pres.relators = tuple(relators)
    pres.attachments = tuple((st.source, dict(st.phi)) for st in stables)
    return pres


def amalgam_presentation(factors, edges, s_group, s_embed, name="Amalgam"):
    """Star amalgam of finite factors over identified subgroups of factor 1."""
    names, info = [], []
    factor_letter = []
    for fi, L in enumerate(factors, start=1):
        lmap = {}
        for k in range(1, L.order):
            lmap[k] = len(names)
            names.append(f"L{fi}.g{k}")
            info.append(("factor", fi, k))
        factor_letter.append(lmap)
    pres = Presentation("amalgam", names, info, name=name)
    pres.factors = tuple(factors)
    pres.factor_letter = tuple(factor_letter)
    pres.edges = dict(edges)
    pres.s_group = s_group
    pres.s_embed = tuple(s_embed)
    relators = []
    for fi, L in enumerate(factors, start=1):
        lmap = factor_letter[fi - 1]
        for a in range(L.order):
            for b in range(L.order):
                letters = []
                for x in (a, b, L.inv(L.table[a][b])):
                    if x != 0:
                        letters.append((lmap[x], 1))
                relators.append(ModelWord(pres, tuple(letters)))
    for fi in sorted(pres.edges):
        edge = pres.edges[fi]
        lmap = factor_letter[fi - 1]
        for x1 in sorted(edge.left):
            letters = []
            if x1 != 0:
                letters.append((factor_letter[0][x1], 1))
            xi = edge.left[x1]
            if xi != 0:
                letters.append((lmap[xi], -1))
            relators.append(ModelWord(pres, tuple(letters)))
    pres.relators = tuple(relators)
    return pres


# ---------------------------------------------------------------------------
# Alperin data and the Robinson amalgam


@dataclass(frozen=True)
class AlperinEntry:
    P: Subgroup               # subgroup of the S-group
    L: Group
    iota: InjHom              # N_S(P) -> L (full target)


class AlperinDatum:
    """The (P_i, L_i, iota_i) list feeding the amalgam construction."""

    def __init__(self, F, entries):
        if not entries:
            raise ValueError("entry list must be nonempty")
        if entries[0].P != F.S:
            raise ValueError("the first entry must have P_1 = S")
        for e in entries:
            N = normalizer(F.group, e.P)
            if e.iota.source != N:
                raise ValueError(
                    f"iota source {list(e.iota.source.elements)} is not "
                    f"N_S(P) = {list(N.elements)}")
            if e.iota.target != full_subgroup(e.L):
                raise ValueError("iota target must be the whole of L")
        self.F = F
        self.entries = tuple(entries)


@dataclass(frozen=True)
class DatumFailure:
    entry: int
    clause: str
    detail: str

    def describe(self):
        where = f"entry {self.entry}" if self.entry >= 0 else "datum"
        return f"{self.clause} at {where}: {self.detail}"


@dataclass
class AlperinReport:
    failures: list = field(default_factory=list)

    @property
    def valid(self):
        return not self.failures

    def render(self):
        if self.valid:
            return "valid Alperin datum"
        return "\n".join(["INVALID Alperin datum"]
                         + ["  " + f.describe() for f in self.failures])


class DatumInvalid(WorkbenchError):
    def __init__(self, report):
        self.report = report
        super().__init__(report.render())


def p_core(G, p):
    """O_p(G): the intersection of all Sylow p-subgroups."""
    sylows = sylow_p(G, p, all_conjugates=True)
    core = set(sylows[0].elements)
    for P in sylows[1:]:
        core &= P.as_set()
    return Subgroup(G, sorted(core))


def _pullback_morphisms(F, entry):
    """F_{N_S(P)}(L) pulled back through iota, as morphisms on S-subgroups."""
    N = normalizer(F.group, entry.P)
    L, iota = entry.L, entry.iota
    back = {iota.image_of(x): x for x in N.elements}
    inside = [A for A in F.subgroups if N.contains_subgroup(A)]
    out = []
    for A in inside:
        imgA = [iota.image_of(x) for x in A.elements]
        for B in inside:
            imgB = {iota.image_of(x) for x in B.elements}
            seen = set()
            for g in L.elements():
                images = []
                for y in imgA:
                    z = L.conj(g, y)
                    if z not in imgB:
                        images = None
                        break
                    images.append(back[z])
                if images is not None and tuple(images) not in seen:
                    seen.add(tuple(images))
                    out.append(InjHom(A, B, images))
    return out


def validate_alperin_datum(datum):
    """Check every clause of the Alperin-datum definition, with witnesses."""
    F = datum.F
    p = F.p
    failures = []
    all_pullbacks = []
    for i, e in enumerate(datum.entries, start=1):
        iota_p = {e.iota.image_of(x) for x in e.P.elements}
        core = p_core(e.L, p)
        if iota_p != core.as_set():
            failures.append(DatumFailure(
                i, "PCoreFailure",
                f"iota(P) = {sorted(iota_p)} but O_{p}(L) = "
                f"{list(core.elements)}"))
        iota_psub = Subgroup(e.L, sorted(iota_p))
        cent = centralizer(e.L, iota_psub)
        z_img = {e.iota.image_of(x) for x in subgroup_center(e.P).elements}
        if cent.as_set() != z_img:
            failures.append(DatumFailure(
                i, "CentralizerFailure",
                f"C_L(iota(P)) = {list(cent.elements)} but iota(Z(P)) = "
                f"{sorted(z_img)}"))
        N = normalizer(F.group, e.P)
        if N.order != p_part(e.L.order, p):
            failures.append(DatumFailure(
                i, "SylowEmbeddingFailure",
                f"|N_S(P)| = {N.order} is not the {p}-part of |L| = "
                f"{e.L.order}"))
        try:
            quot, _ = quotient_group(e.L, iota_psub)
            outer = out_f(F, e.P)
            if not is_isomorphic(quot, outer):
                failures.append(DatumFailure(
                    i, "OuterQuotientFailure",
                    f"L/iota(P) of order {quot.order} is not isomorphic to "
                    f"Out_F(P) of order {outer.order}"))
        except ValueError as exc:
            failures.append(DatumFailure(i, "OuterQuotientFailure", str(exc)))
        pulled = _pullback_morphisms(F, e)
        for h in pulled:
            allowed = {m.images for m in F.hom(h.source, h.target)}
            if h.images not in allowed:
                failures.append(DatumFailure(
                    i, "SubfusionFailure",
                    f"pulled-back morphism {h!r} is not in F"))
                break
        else:
            all_pullbacks.extend(pulled)
    if not failures:
        generated = generate_fusion(F.S, p, all_pullbacks)
        if not fusion_equal(generated, F):
            failures.append(DatumFailure(
                -1, "GenerationFailure",
                "the pulled-back subsystems do not generate F"))
    return AlperinReport(failures)


def robinson_presentation(datum):
    """The iterated amalgam of the L_i over the N_S(P_i), left-associated."""
    report = validate_alperin_datum(datum)
    if not report.valid:
        raise DatumInvalid(report)
    F = datum.F
    iota1 = datum.entries[0].iota
    edges = {}
    for fi, e in enumerate(datum.entries[1:], start=2):
        N = normalizer(F.group, e.P)
        left = {iota1.image_of(x): e.iota.image_of(x) for x in N.elements}
        right = {v: k for k, v in left.items()}
        edges[fi] = Edge(fi, left, right)
    pres = amalgam_presentation(
        [e.L for e in datum.entries], edges,
        s_group=F.group,
        s_embed=[iota1.image_of(x) for x in F.S.elements],
        name="Robinson(" + ",".join(e.L.name for e in datum.entries) + ")")
    pres.attachments = tuple(
        (e.P, normalizer(F.group, e.P)) for e in datum.entries)
    return pres


# ---------------------------------------------------------------------------
# ball enumeration and fusion recovery


def _alphabet(pres):
    letters = []
    if pres.kind == "hnn":
        for k in range(1, pres.base.order):
            letters.append((pres.s_letter[k], 1))
        for st in pres.stables:
            letters.append((st.name_index, 1))
            letters.append((st.name_index, -1))
    else:
        for fi, L in enumerate(pres.factors, start=1):
            for k in range(1, L.order):
                letters.append((pres.factor_letter[fi - 1][k], 1))
    return letters


def ball_enumerate(pres, radius):
    """Reduced representatives of all elements spelled by <= radius letters."""
    if radius > MAX_RADIUS:
        raise RadiusBoundExceeded(f"radius {radius} exceeds {MAX_RADIUS}")
    alphabet = _alphabet(pres)
    empty = ModelWord(pres, ())
    if pres.kind == "hnn":
        reps = {(): empty}
        frontier = [empty]
        for _ in range(radius):
            nxt = []
            for w in frontier:
                for letter in alphabet:
                    cand = _reduce_hnn(
                        ModelWord(pres, w.letters + (letter,)), canonical=True)
                    if cand.letters not in reps:
                        reps[cand.letters] = cand
                        nxt.append(cand)
            frontier = nxt
        return sorted(reps.values(), key=lambda w: (len(w.letters), w.letters))
    known = [empty]
    frontier = [empty]
    for _ in range(radius):
        nxt = []
        for w in frontier:
            for letter in alphabet:
                cand = _reduce_amalgam(ModelWord(pres, w.letters + (letter,)))
                if any(words_equal(cand, k) for k in known):
                    continue
                known.append(cand)
                nxt.append(cand)
        frontier = nxt
    return sorted(known, key=lambda w: (len(w.letters), w.letters))


def recover_fusion(pres, S, radius):
    """Conjugation fusion on S seen inside the model, out to the given radius."""
    if radius > MAX_RADIUS:
        raise RadiusBoundExceeded(f"radius {radius} exceeds {MAX_RADIUS}")
    if pres.s_group != S.parent or S.elements != tuple(range(S.parent.order)):
        raise MismatchedBase("S does not match the model's embedded copy")
    base = S.parent
    p = _prime_of(base.order)
    ball = ball_enumerate(pres, radius)
    morphisms = []
    subs = subgroups(base)
    for w in ball:
        winv = w.inverse()
        conj = {0: 0}
        for x in range(1, base.order):
            y = base_element_of(w.concat(pres.s_word([x])).concat(winv))
            if y is not None:
                conj[x] = y
        for P in subs:
            if any(x not in conj for x in P.elements):
                continue
            images = [conj[x] for x in P.elements]
            img_set = set(images)
            for Q in subs:
                if img_set <= Q.as_set():
                    morphisms.append(InjHom(P, Q, images))
    return generate_fusion(S, p, morphisms)


def _prime_of(order):
    p = 2
    while order % p:
        p += 1
    return p


# ---------------------------------------------------------------------------
# seeded word generators for the property suites


def word_from_syllables(pres, svals, ts):
    """Build an HNN word from alternating S-values and stable letters."""
    return ModelWord(pres, _hnn_letters(pres, list(svals), list(ts)))


def random_pinch_free_word(pres, rng, max_stables=4):
    """A random pinch-free HNN word containing at least one stable letter."""
    base = pres.base
    k = rng.randint(1, max_stables)
    svals = [rng.randrange(base.order)]
    ts = []
    for _ in range(k):
        i = rng.randrange(len(pres.stables))
        e = rng.choice((1, -1))
        if ts:
            ip, ep = ts[-1]
            if ip == i and ep == -e:
                bad = (pres.stables[i].phi.keys() if ep == -1
                       else pres.stables[i].image)
                good = [x for x in base.elements() if x not in bad]
                if good:
                    svals[-1] = rng.choice(good)
                else:
                    e = ep
        ts.append((i, e))
        svals.append(rng.randrange(base.order))
    return word_from_syllables(pres, svals, ts)


def random_word(pres, rng, max_letters=10):
    """A uniformly random letter string over the model's alphabet."""
    alphabet = _alphabet(pres)
    n = rng.randint(0, max_letters)
    return ModelWord(pres, tuple(rng.choice(alphabet) for _ in range(n)))
