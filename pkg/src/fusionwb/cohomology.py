"""Graded-commutative cohomology of elementary abelian p-groups.

At p = 2 a rank-n site carries the polynomial algebra F_2[x_1..x_n] with the
x_i in degree 1.  At odd p it carries Lambda(a_1..a_n) (x) F_p[x_1..x_n] with
a_i in degree 1 and x_i in degree 2.  A monomial is a pair (eps, alpha) of
exponent tuples for the exterior and polynomial parts; eps stays zero at p=2.
"""

from __future__ import annotations

from .errors import NotElementaryAbelian
from .groups import elementary_basis


class Site:
    """An elementary abelian subgroup with a chosen ordered basis."""

    def __init__(self, V, p):
        G = V.parent
        for x in V.elements:
            if x != 0 and G.element_order(x) != p:
                raise NotElementaryAbelian(
                    f"element {x} has order {G.element_order(x)}, not {p}")
        t = G.table
        for x in V.elements:
            for y in V.elements:
                if t[x][y] != t[y][x]:
                    raise NotElementaryAbelian("subgroup is not abelian")
        self.V = V
        self.p = p
        self.basis = elementary_basis(V, p)
        self.rank = len(self.basis)
        coords = {}
        combos = [((), 0)]
        for b in self.basis:
            new = []
            for vec, elem in combos:
                y = elem
                for c in range(p):
                    new.append((vec + (c,), y))
                    y = t[y][b]
            combos = new
        for vec, elem in combos:
            coords[elem] = vec
        self.coords = coords

    @property
    def key(self):
        return self.V.elements

    def __repr__(self):
        return f"Site({list(self.V.elements)}, p={self.p})"


def monomial_degree(mono, p):
    eps, alpha = mono
    if p == 2:
        return sum(alpha)
    return sum(eps) + 2 * sum(alpha)


def _compositions(total, parts):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def cohomology_basis(site, d):
    """Monomials of total degree d, in decreasing lexicographic order."""
    if d < 0:
        raise ValueError("degree must be nonnegative")
    n = site.rank
    monos = []
    if site.p == 2:
        zero = (0,) * n
        monos = [(zero, alpha) for alpha in _compositions(d, n)]
    else:
        for k in range(min(n, d) + 1):
            if (d - k) % 2:
                continue
            for eps in _eps_tuples(n, k):
                for alpha in _compositions((d - k) // 2, n):
                    monos.append((eps, alpha))
    monos.sort(reverse=True)
    return monos


def _eps_tuples(n, k):
    if k == 0:
        yield (0,) * n
        return
    if n < k:
        return
    for rest in _eps_tuples(n - 1, k):
        yield (0,) + rest
    for rest in _eps_tuples(n - 1, k - 1):
        yield (1,) + rest


def _merge_exterior(e1, e2):
    """Sign and union of exterior exponents; None on a repeated generator."""
    merged = []
    inversions = 0
    seen_right = 0
    for i in range(len(e1)):
        if e1[i] and e2[i]:
            return None
        merged.append(e1[i] | e2[i])
    ones2 = [i for i, v in enumerate(e2) if v]
    for i, v in enumerate(e1):
        if v:
            inversions += sum(1 for j in ones2 if j < i)
    return (-1) ** inversions, tuple(merged)


class CohoElement:
    """A cohomology class on one site: monomials with nonzero F_p coefficients."""

    def __init__(self, site, terms):
        self.site = site
        p = site.p
        clean = {}
        for mono, c in terms.items():
            c %= p
            if c:
                clean[mono] = c
        self.terms = clean

    @classmethod
    def zero(cls, site):
        return cls(site, {})

    @classmethod
    def one(cls, site):
        n = site.rank
        return cls(site, {((0,) * n, (0,) * n): 1})

    @classmethod
    def monomial(cls, site, mono, coeff=1):
        return cls(site, {mono: coeff})

    def is_zero(self):
        return not self.terms

    def degree(self):
        """The common degree of all terms; None when zero."""
        degs = {monomial_degree(m, self.site.p) for m in self.terms}
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError("element is not homogeneous")
        return degs.pop()

    def add(self, other, scale=1):
        terms = dict(self.terms)
        for mono, c in other.terms.items():
            terms[mono] = terms.get(mono, 0) + scale * c
        return CohoElement(self.site, terms)

    def scaled(self, c):
        return CohoElement(self.site,
                           {m: v * c for m, v in self.terms.items()})

    def mul(self, other):
        p = self.site.p
        out = {}
        for (e1, a1), c1 in self.terms.items():
            for (e2, a2), c2 in other.terms.items():
                merged = _merge_exterior(e1, e2)
                if merged is None:
                    continue
                sign, eps = merged
                alpha = tuple(x + y for x, y in zip(a1, a2))
                key = (eps, alpha)
                out[key] = out.get(key, 0) + sign * c1 * c2
        return CohoElement(self.site, out)

    def power(self, k):
        out = CohoElement.one(self.site)
        for _ in range(k):
            out = out.mul(self)
        return out

    def poly_projection(self):
        """Image in F_p[V]: all exterior coordinates set to zero."""
        n = self.site.rank
        zero = (0,) * n
        return CohoElement(self.site, {m: c for m, c in self.terms.items()
                                       if m[0] == zero})

    def coords_in(self, basis):
        return [self.terms.get(mono, 0) for mono in basis]

    def __eq__(self, other):
        if not isinstance(other, CohoElement):
            return NotImplemented
        return self.site.key == other.site.key and self.terms == other.terms

    __hash__ = None

    def describe(self):
        if not self.terms:
            return "0"
        parts = []
        for mono in sorted(self.terms, reverse=True):
            parts.append(f"{format_monomial(mono, self.site.p)}:{self.terms[mono]}")
        return " ".join(parts)

    def __repr__(self):
        return f"CohoElement({self.describe()})"


def format_monomial(mono, p):
    eps, alpha = mono
    factors = []
    for i, e in enumerate(eps):
        if e:
            factors.append(f"a{i + 1}")
    for i, e in enumerate(alpha):
        if e == 1:
            factors.append(f"x{i + 1}")
        elif e > 1:
            factors.append(f"x{i + 1}^{e}")
    return " ".join(factors) if factors else "1"


def hom_matrix(phi, site_w, site_v):
    """Columns are coordinates of phi(w_j) in the target site's basis."""
    cols = []
    for w in site_w.basis:
        cols.append(site_v.coords[phi.image_of(w)])
    # M[i][j] = coefficient of v_i in phi(w_j)
    return [[cols[j][i] for j in range(site_w.rank)]
            for i in range(site_v.rank)]


def restrict_element(phi, site_w, site_v, elem):
    """Pull a class on the target site back along phi: W -> V."""
    p = site_v.p
    m = hom_matrix(phi, site_w, site_v)
    n_w = site_w.rank
    zero = (0,) * n_w
    a_images = []
    x_images = []
    for i in range(site_v.rank):
        a_terms = {}
        x_terms = {}
        for j in range(n_w):
            if m[i][j] % p:
                ej = tuple(1 if t == j else 0 for t in range(n_w))
                aj = tuple(1 if t == j else 0 for t in range(n_w))
                a_terms[(ej, zero)] = m[i][j]
                x_terms[(zero, aj)] = m[i][j]
        a_images.append(CohoElement(site_w, a_terms))
        x_images.append(CohoElement(site_w, x_terms))
    out = CohoElement.zero(site_w)
    power_cache = {}
    for (eps, alpha), coeff in elem.terms.items():
        term = CohoElement.one(site_w)
        for i, e in enumerate(eps):
            if e:
                term = term.mul(a_images[i])
        for i, e in enumerate(alpha):
            if e:
                key = (i, e)
                if key not in power_cache:
                    power_cache[key] = x_images[i].power(e)
                term = term.mul(power_cache[key])
        out = out.add(term, scale=coeff)
    return out


def restriction_map(phi, d, p=None):
    """Matrix of the degree-d restriction along phi, over F_p.

    phi : W -> V is a group monomorphism of elementary abelians; the returned
    matrix sends coordinates in the degree-d basis of the V site to
    coordinates in the degree-d basis of the W site.
    """
    if p is None:
        p = _site_prime(phi.source)
    site_w = Site(phi.source, p)
    site_v = Site(phi.target, p)
    basis_v = cohomology_basis(site_v, d)
    basis_w = cohomology_basis(site_w, d)
    cols = []
    for mono in basis_v:
        image = restrict_element(phi, site_w, site_v,
                                 CohoElement.monomial(site_v, mono))
        cols.append(image.coords_in(basis_w))
    return [[cols[c][r] for c in range(len(basis_v))]
            for r in range(len(basis_w))]


def _site_prime(V):
    if V.order == 1:
        raise NotElementaryAbelian(
            "cannot infer the prime of a trivial subgroup; pass p explicitly")
    return V.parent.element_order(V.elements[1])
