"""Text formats: group files, fusion generator files, presentations, families.

Serializers emit a canonical form; parsing a serialized file and serializing
again reproduces it byte for byte, which the corpus check relies on.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from .cohomology import CohoElement
from .errors import WorkbenchError
from .fusion import fusion_from_group, generate_fusion
from .groups import (
    Group,
    InjHom,
    Subgroup,
    build_group_from_permutations,
    full_subgroup,
    normalizer,
    sylow_p,
)
from .models import (
    AlperinDatum,
    AlperinEntry,
    Edge,
    amalgam_presentation,
    hnn_presentation,
)
from .stable import StableFamily, fusion_sites


class ParseError(WorkbenchError):
    """A workbench file does not match its grammar."""


def format_elems(elems):
    return "[" + ",".join(str(x) for x in elems) + "]"


def parse_elems(text):
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise ParseError(f"expected [..] element list, got {text!r}")
    inner = text[1:-1].strip()
    if not inner:
        return ()
    return tuple(int(tok) for tok in inner.split(","))


# ---------------------------------------------------------------------------
# group files


def serialize_group(G):
    lines = [f"group {G.name} order {G.order}", "mode table"]
    for row in G.table:
        lines.append(" ".join(str(x) for x in row))
    return "\n".join(lines) + "\n"


def parse_group(text):
    lines = [ln.rstrip() for ln in text.splitlines() if ln.strip()]
    if len(lines) < 2:
        raise ParseError("group file needs a header and a mode line")
    m = re.fullmatch(r"group (\S+) order (\d+)", lines[0])
    if not m:
        raise ParseError(f"bad group header: {lines[0]!r}")
    name, order = m.group(1), int(m.group(2))
    mode = lines[1].strip()
    if mode == "mode table":
        rows = [tuple(int(x) for x in ln.split()) for ln in lines[2:]]
        if len(rows) != order:
            raise ParseError(f"expected {order} table rows, got {len(rows)}")
        return Group(rows, name=name)
    if mode == "mode perm":
        cycles = [_parse_cycles(ln) for ln in lines[2:]]
        if not cycles:
            raise ParseError("perm mode needs at least one generator line")
        degree = max((max((max(c) for c in cyc), default=1)
                      for cyc in cycles), default=1)
        gens = []
        for cyc in cycles:
            perm = list(range(degree))
            for c in cyc:
                for k in range(len(c)):
                    perm[c[k] - 1] = c[(k + 1) % len(c)] - 1
            gens.append(tuple(perm))
        G = build_group_from_permutations(gens, name=name)
        if G.order != order:
            raise ParseError(
                f"declared order {order} but generators close to {G.order}")
        return G
    raise ParseError(f"unknown mode line: {mode!r}")


def _parse_cycles(line):
    line = line.strip()
    if line == "()":
        return []
    if not re.fullmatch(r"(\(\d+( \d+)*\))+", line):
        raise ParseError(f"bad cycle notation: {line!r}")
    return [[int(x) for x in part.split()]
            for part in re.findall(r"\(([^)]*)\)", line)]


def load_group(path):
    return parse_group(Path(path).read_text())


# ---------------------------------------------------------------------------
# fusion generator files


@dataclass
class FusionSpec:
    p: int
    s_ref: str
    group: Group
    phis: list

    def fusion(self):
        return generate_fusion(full_subgroup(self.group), self.p, self.phis)


def serialize_fusion_spec(spec):
    lines = [f"fusion p={spec.p} S={spec.s_ref}"]
    for phi in spec.phis:
        lines.append(
            f"phi: {format_elems(phi.source.elements)} -> "
            f"{format_elems(phi.target.elements)} ; "
            f"images={format_elems(phi.images)}")
    return "\n".join(lines) + "\n"


def parse_fusion_spec(text, base_dir=None):
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    m = re.fullmatch(r"fusion p=(\d+) S=(\S+)", lines[0])
    if not m:
        raise ParseError(f"bad fusion header: {lines[0]!r}")
    p, s_ref = int(m.group(1)), m.group(2)
    group = load_group(Path(base_dir or ".") / s_ref)
    S = full_subgroup(group)
    phis = []
    for ln in lines[1:]:
        m = re.fullmatch(
            r"phi: (\[[\d,]*\]) -> (\[[\d,]*\]) ; images=(\[[\d,]*\])", ln)
        if not m:
            raise ParseError(f"bad phi line: {ln!r}")
        try:
            src = Subgroup(group, parse_elems(m.group(1)))
            tgt = Subgroup(group, parse_elems(m.group(2)))
            phis.append(InjHom(src, tgt, parse_elems(m.group(3))))
        except ValueError as exc:
            raise ParseError(f"invalid morphism {ln!r}: {exc}") from exc
    return FusionSpec(p, s_ref, group, phis)


def load_fusion_spec(path):
    path = Path(path)
    return parse_fusion_spec(path.read_text(), base_dir=path.parent)


# ---------------------------------------------------------------------------
# Alperin datum files


@dataclass
class DatumSpec:
    p: int
    fusion_ref: str
    fusion: FusionSystem
    datum: AlperinDatum


def parse_datum(text, base_dir=None):
    base = Path(base_dir or ".")
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    m = re.fullmatch(r"alperin p=(\d+) fusion=(\S+)", lines[0])
    if not m:
        raise ParseError(f"bad datum header: {lines[0]!r}")
    p, ref = int(m.group(1)), m.group(2)
    F = _fusion_from_ref(ref, p, base)
    Sgroup = F.group
    entries = []
    for ln in lines[1:]:
        m = re.fullmatch(
            r"entry P=(\[[\d,]*\]) L=(\S+) iota=(\[[\d,]*\])", ln)
        if not m:
            raise ParseError(f"bad entry line: {ln!r}")
        try:
            P = Subgroup(Sgroup, parse_elems(m.group(1)))
            lref = m.group(2)
            L = Sgroup if lref == "S" else load_group(base / lref)
            N = normalizer(Sgroup, P)
            iota = InjHom(N, full_subgroup(L), parse_elems(m.group(3)))
        except ValueError as exc:
            raise ParseError(f"invalid entry {ln!r}: {exc}") from exc
        entries.append(AlperinEntry(P, L, iota))
    try:
        return DatumSpec(p, ref, F, AlperinDatum(F, entries))
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def load_datum(path):
    path = Path(path)
    return parse_datum(path.read_text(), base_dir=path.parent)


def _fusion_from_ref(ref, p, base):
    kind, _, target = ref.partition(":")
    if kind == "group":
        G = load_group(base / target)
        return fusion_from_group(sylow_p(G, p), G, p=p)
    if kind == "file":
        spec = load_fusion_spec(base / target)
        if spec.p != p:
            raise ParseError("fusion file prime disagrees with datum header")
        return spec.fusion()
    raise ParseError(f"unknown fusion reference {ref!r}")


# ---------------------------------------------------------------------------
# presentation files


def serialize_presentation(pres):
    lines = [f"presentation kind={pres.kind}"]
    if pres.kind == "hnn":
        lines.append(f"sgroup order {pres.base.order}")
        for row in pres.base.table:
            lines.append(" ".join(str(x) for x in row))
        for st in pres.stables:
            images = [st.phi[x] for x in st.source.elements]
            lines.append(f"stable {st.name} src="
                         f"{format_elems(st.source.elements)} "
                         f"images={format_elems(images)}")
    else:
        lines.append(f"sgroup order {pres.s_group.order}")
        for row in pres.s_group.table:
            lines.append(" ".join(str(x) for x in row))
        lines.append(f"sembed {format_elems(pres.s_embed)}")
        for fi, L in enumerate(pres.factors, start=1):
            lines.append(f"factor {fi} order {L.order}")
            for row in L.table:
                lines.append(" ".join(str(x) for x in row))
        for fi in sorted(pres.edges):
            edge = pres.edges[fi]
            left = sorted(edge.left)
            right = [edge.left[x] for x in left]
            lines.append(f"attach factor={fi} left={format_elems(left)} "
                         f"right={format_elems(right)}")
    for g in pres.generators:
        lines.append(f"gen {g}")
    for rel in pres.relators:
        lines.append(f"rel {rel.display()}".rstrip())
    return "\n".join(lines) + "\n"


def parse_presentation(text):
    lines = [ln.rstrip() for ln in text.splitlines() if ln.strip()]
    m = re.fullmatch(r"presentation kind=(hnn|amalgam)", lines[0])
    if not m:
        raise ParseError(f"bad presentation header: {lines[0]!r}")
    kind = m.group(1)
    idx = 1

    def read_table(idx, header_re):
        m = re.fullmatch(header_re, lines[idx])
        if not m:
            raise ParseError(f"expected table header, got {lines[idx]!r}")
        order = int(m.group(len(m.groups())))
        rows = [tuple(int(x) for x in ln.split())
                for ln in lines[idx + 1:idx + 1 + order]]
        return m, Group(rows), idx + 1 + order

    if kind == "hnn":
        _, base, idx = read_table(idx, r"sgroup order (\d+)")
        S = full_subgroup(base)
        phis = []
        while idx < len(lines) and lines[idx].startswith("stable "):
            m = re.fullmatch(
                r"stable (\S+) src=(\[[\d,]*\]) images=(\[[\d,]*\])",
                lines[idx])
            if not m:
                raise ParseError(f"bad stable line: {lines[idx]!r}")
            src = Subgroup(base, parse_elems(m.group(2)))
            phis.append(InjHom(src, S, parse_elems(m.group(3))))
            idx += 1
        pres = hnn_presentation(S, _prime_of(base.order), phis)
    else:
        _, sgroup, idx = read_table(idx, r"sgroup order (\d+)")
        m = re.fullmatch(r"sembed (\[[\d,]*\])", lines[idx])
        if not m:
            raise ParseError(f"expected sembed line, got {lines[idx]!r}")
        s_embed = parse_elems(m.group(1))
        idx += 1
        factors = []
        while idx < len(lines) and lines[idx].startswith("factor "):
            m, L, idx = read_table(idx, r"factor (\d+) order (\d+)")
            factors.append(L)
        edges = {}
        while idx < len(lines) and lines[idx].startswith("attach "):
            m = re.fullmatch(
                r"attach factor=(\d+) left=(\[[\d,]*\]) right=(\[[\d,]*\])",
                lines[idx])
            if not m:
                raise ParseError(f"bad attach line: {lines[idx]!r}")
            fi = int(m.group(1))
            left = parse_elems(m.group(2))
            right = parse_elems(m.group(3))
            edges[fi] = Edge(fi, dict(zip(left, right)),
                             dict(zip(right, left)))
            idx += 1
        pres = amalgam_presentation(factors, edges, sgroup, s_embed)
    # remaining lines must agree with the regenerated text
    declared_gens = [ln[4:] for ln in lines[idx:] if ln.startswith("gen ")]
    if tuple(declared_gens) != pres.generators:
        raise ParseError("generator lines disagree with the structural data")
    declared_rels = [ln[4:] for ln in lines[idx:]
                     if ln == "rel" or ln.startswith("rel ")]
    have = [r.display() for r in pres.relators]
    if declared_rels != have:
        raise ParseError("relator lines disagree with the structural data")
    return pres


def load_presentation(path):
    return parse_presentation(Path(path).read_text())


def parse_word(pres, text):
    letters = []
    for tok in text.split():
        m = re.fullmatch(r"(\S+)\^(-?1)", tok)
        if not m or m.group(1) not in pres.gen_index:
            raise ParseError(f"bad word letter {tok!r}")
        letters.append((pres.gen_index[m.group(1)], int(m.group(2))))
    return pres.word(letters)


def _prime_of(order):
    p = 2
    while order % p:
        p += 1
    return p


# ---------------------------------------------------------------------------
# family files


def serialize_family(fam):
    lines = []
    for s in fam.sites:
        lines.append(f"V={format_elems(s.key)} ; "
                     f"{fam.components[s.key].describe()}")
    return "\n".join(lines) + "\n"


def parse_family(F, text):
    sites = fusion_sites(F)
    by_key = {s.key: s for s in sites}
    comps = {}
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln:
            continue
        m = re.fullmatch(r"V=(\[[\d,]*\]) ; (.*)", ln)
        if not m:
            raise ParseError(f"bad family line: {ln!r}")
        key = parse_elems(m.group(1))
        if key not in by_key:
            raise ParseError(f"{list(key)} is not an elementary abelian "
                             f"subgroup of S")
        site = by_key[key]
        comps[key] = _parse_terms(site, m.group(2))
    degrees = set()
    for comp in comps.values():
        try:
            d = comp.degree()
        except ValueError as exc:
            raise ParseError(str(exc)) from exc
        if d is not None:
            degrees.add(d)
    if len(degrees) > 1:
        raise ParseError(f"components have mixed degrees {sorted(degrees)}")
    for key in by_key:
        comps.setdefault(key, CohoElement.zero(by_key[key]))
    return StableFamily(F, degrees.pop() if degrees else 0, comps,
                        tuple(sorted(sites, key=lambda s: (s.V.order, s.key))))


def _parse_terms(site, text):
    text = text.strip()
    if text == "0":
        return CohoElement.zero(site)
    terms = {}
    factors = []
    for tok in text.split():
        if ":" in tok:
            last, _, coeff = tok.partition(":")
            factors.append(last)
            mono = _parse_monomial(site, factors)
            terms[mono] = terms.get(mono, 0) + int(coeff)
            factors = []
        else:
            factors.append(tok)
    if factors:
        raise ParseError(f"dangling monomial factors {factors!r}")
    return CohoElement(site, terms)


def _parse_monomial(site, factors):
    n = site.rank
    eps = [0] * n
    alpha = [0] * n
    for f in factors:
        if f == "1":
            continue
        m = re.fullmatch(r"([ax])(\d+)(?:\^(\d+))?", f)
        if not m:
            raise ParseError(f"bad monomial factor {f!r}")
        kind, i, e = m.group(1), int(m.group(2)) - 1, int(m.group(3) or 1)
        if not 0 <= i < n:
            raise ParseError(f"variable index out of range in {f!r}")
        if kind == "a":
            if site.p == 2:
                raise ParseError("exterior generators do not exist at p=2")
            if eps[i] or e != 1:
                raise ParseError(f"exterior square in {f!r}")
            eps[i] = 1
        else:
            alpha[i] += e
    return tuple(eps), tuple(alpha)


def load_family(F, path):
    return parse_family(F, Path(path).read_text())


# ---------------------------------------------------------------------------
# saturation / report helpers shared by cli and corpus


def describe_fusion(F):
    n_morphisms = sum(len(v) for v in F.homsets.values())
    return (f"fusion system on {F.group.name} (order {F.group.order}, "
            f"p={F.p}): {len(F.subgroups)} subgroups, "
            f"{n_morphisms} morphisms")
