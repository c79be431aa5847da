"""Stable elements at the elementary-abelian level.

The ring of stable elements is realized degree by degree as the solution
space of a linear system: one block of unknowns per elementary abelian
subgroup, one block of equations per morphism between them, each equation
saying that the restriction of the larger component equals the smaller one.
For a fusion system the morphisms come from the fusion category; for a finite
group they come from conjugation and inclusion (the Quillen category), which
is what the cross-check compares.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cohomology import (
    CohoElement,
    Site,
    cohomology_basis,
    restrict_element,
)
from .errors import DegreeBoundExceeded, IncompatibleFamily
from .groups import conjugation_hom, elementary_abelians, inclusion_hom

MAX_DEGREE = 40


def fusion_sites(F):
    return [Site(V, F.p) for V in elementary_abelians(F.group, F.p)]


def group_sites(G, p):
    return [Site(V, p) for V in elementary_abelians(G, p)]


def _index_p_inclusions(sites, p):
    homs = []
    for sw in sites:
        for sv in sites:
            if (sv.V.order == p * sw.V.order
                    and sv.V.contains_subgroup(sw.V)):
                homs.append((inclusion_hom(sw.V, sv.V), sw, sv))
    return homs


def fusion_ea_morphisms(F, generating=True):
    """Morphisms between elementary abelian sites: a generating set, or all."""
    sites = fusion_sites(F)
    by_key = {s.key: s for s in sites}
    homs = _index_p_inclusions(sites, F.p) if generating else []
    for sw in sites:
        for sv in sites:
            if generating and sw.V.order != sv.V.order:
                continue
            for h in F.homsets[(sw.V.elements, sv.V.elements)]:
                homs.append((h, sw, sv))
    return sites, homs, by_key


def quillen_morphisms(G, p):
    """Index-p inclusions plus all conjugation isomorphisms between sites."""
    sites = group_sites(G, p)
    by_key = {s.key: s for s in sites}
    homs = _index_p_inclusions(sites, p)
    for sw in sites:
        seen = set()
        for g in G.elements():
            images = tuple(G.conj(g, x) for x in sw.V.elements)
            if images in seen:
                continue
            seen.add(images)
            target = by_key[tuple(sorted(images))]
            homs.append((conjugation_hom(sw.V, target.V, g), sw, target))
    return sites, homs, by_key


def _limit_basis(sites, homs, d, p):
    """Families (one class per site) compatible under every given morphism."""
    from .linalg import nullspace

    sites = sorted(sites, key=lambda s: (s.V.order, s.key))
    bases = {s.key: cohomology_basis(s, d) for s in sites}
    offsets = {}
    total = 0
    for s in sites:
        offsets[s.key] = total
        total += len(bases[s.key])
    rows = []
    for phi, sw, sv in homs:
        basis_v = bases[sv.key]
        basis_w = bases[sw.key]
        if not basis_w and not basis_v:
            continue
        images = [restrict_element(phi, sw, sv, CohoElement.monomial(sv, mono))
                  for mono in basis_v]
        for r, wmono in enumerate(basis_w):
            row = [0] * total
            for c, img in enumerate(images):
                coeff = img.terms.get(wmono, 0)
                if coeff:
                    row[offsets[sv.key] + c] = coeff % p
            row[offsets[sw.key] + r] = (row[offsets[sw.key] + r] - 1) % p
            if any(row):
                rows.append(row)
    families = []
    for vec in nullspace(rows, total, p):
        comps = {}
        for s in sites:
            terms = {}
            for c, mono in enumerate(bases[s.key]):
                coeff = vec[offsets[s.key] + c]
                if coeff:
                    terms[mono] = coeff
            comps[s.key] = CohoElement(s, terms)
        families.append(comps)
    return sites, families


@dataclass
class StableFamily:
    """A compatible family of classes over the elementary abelian subgroups."""

    F: object
    degree: int
    components: dict          # site key -> CohoElement
    sites: tuple

    def component(self, V):
        return self.components[tuple(V.elements)]

    def is_zero(self):
        return all(c.is_zero() for c in self.components.values())

    def describe(self):
        lines = []
        for s in self.sites:
            lines.append(f"V={list(s.key)} ; "
                         f"{self.components[s.key].describe()}")
        return "\n".join(lines)


def stable_basis(F, d, degree_cap=MAX_DEGREE):
    """Basis of the degree-d stable elements of F at the elementary-abelian level."""
    if d > degree_cap:
        raise DegreeBoundExceeded(f"degree {d} exceeds cap {degree_cap}")
    sites, homs, _ = fusion_ea_morphisms(F, generating=True)
    sites, families = _limit_basis(sites, homs, d, F.p)
    return [StableFamily(F, d, comps, tuple(sites)) for comps in families]


def stable_basis_all_morphisms(F, d):
    """Same limit over every fusion morphism; the brute-force cross-check."""
    sites, homs, _ = fusion_ea_morphisms(F, generating=False)
    sites, families = _limit_basis(sites, homs, d, F.p)
    return [StableFamily(F, d, comps, tuple(sites)) for comps in families]


def poincare_series(F, max_degree, degree_cap=MAX_DEGREE):
    if max_degree > degree_cap:
        raise DegreeBoundExceeded(
            f"degree {max_degree} exceeds cap {degree_cap}")
    return [len(stable_basis(F, d, degree_cap)) for d in range(max_degree + 1)]


def family_product(f1, f2):
    comps = {key: f1.components[key].mul(f2.components[key])
             for key in f1.components}
    return StableFamily(f1.F, f1.degree + f2.degree, comps, f1.sites)


def family_power(fam, k):
    out = fam
    for _ in range(k - 1):
        out = family_product(out, fam)
    return out


def check_family(fam):
    """Verify compatibility under every fusion morphism between sites."""
    F = fam.F
    sites, homs, _ = fusion_ea_morphisms(F, generating=False)
    by_key = {s.key: s for s in sites}
    for key, comp in fam.components.items():
        if comp.site.key != key:
            raise IncompatibleFamily("component stored under the wrong site")
    missing = [s.key for s in sites if s.key not in fam.components]
    if missing:
        raise IncompatibleFamily(f"missing components at {missing}")
    for phi, sw, sv in homs:
        got = restrict_element(phi, by_key[sw.key], by_key[sv.key],
                               fam.components[sv.key])
        want = fam.components[sw.key]
        if got.terms != want.terms:
            raise IncompatibleFamily(
                f"restriction along {phi!r} disagrees at {list(sw.key)}")
    return True


def is_nilpotent(fam):
    """True iff every component dies in F_p[V], i.e. some power is zero."""
    check_family(fam)
    return all(c.poly_projection().is_zero()
               for c in fam.components.values())


@dataclass
class QuillenLimit:
    group: object
    p: int
    degree: int
    dimension: int
    families: list
    sites: tuple


def quillen_limit_finite_group(G, p, d, degree_cap=MAX_DEGREE):
    """The same limit over the Quillen category of a finite group."""
    if d > degree_cap:
        raise DegreeBoundExceeded(f"degree {d} exceeds cap {degree_cap}")
    sites, homs, _ = quillen_morphisms(G, p)
    sites, families = _limit_basis(sites, homs, d, p)
    return QuillenLimit(G, p, d, len(families), families, tuple(sites))
