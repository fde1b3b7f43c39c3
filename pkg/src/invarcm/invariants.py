"""Degree-wise bases of the invariant ring of a group representation.

Two engines compute the same basis.  The linear engine (default) applies the
group action to every candidate monomial, reduces modulo the defining ideal
of the group, and solves the resulting linear system over GF(p).  The
Groebner engine homogenizes the defining ideal, adjoins the transformed
monomials, and reads the basis off an elimination Groebner basis; it is much
slower and serves as an independent cross-check on small inputs.

Both engines return the basis in a canonical form: fully row-reduced, monic,
sorted by descending leading monomial.  A torus weight filter (``use_weights``)
restricts the candidate monomials to those of weight zero, which never changes
the result but can shrink the search space substantially.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .polyalg import (
    Budget,
    Monomial,
    Poly,
    Ring,
    elimination_order,
    inv_mod,
    monomials_of_degree,
)
from .groebner import Reducer, buchberger, homogenize
from .gmodule import Representation, reduced_matrix

__all__ = [
    "InvariantBasis",
    "torus_monomials",
    "invariant_basis",
    "homogeneous_module_test",
    "graded_module_span",
    "power_products",
    "LinearSpan",
]


@dataclass(frozen=True)
class InvariantBasis:
    """A K-basis of the degree-``degree`` part of the invariant ring.

    Elements are homogeneous polynomials in the module variables, monic,
    row-reduced against each other, sorted by descending leading monomial.
    """

    degree: int
    elements: tuple[Poly, ...]

    @property
    def dimension(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


# -- candidate monomials -----------------------------------------------------


def _weight_zero_exponents(weights: Sequence[int], d: int) -> list[tuple[int, ...]]:
    """Exponent vectors of total degree d whose weighted sum is zero."""
    n = len(weights)
    lo = [0] * (n + 1)
    hi = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        lo[i] = min(lo[i + 1], weights[i])
        hi[i] = max(hi[i + 1], weights[i])
    out: list[tuple[int, ...]] = []

    def rec(pos: int, remaining: int, wacc: int, exps: tuple[int, ...]):
        # anything still achievable lies in [wacc + r*lo, wacc + r*hi]
        if wacc + remaining * lo[pos] > 0 or wacc + remaining * hi[pos] < 0:
            return
        if pos == n - 1:
            if wacc + remaining * weights[pos] == 0:
                out.append(exps + (remaining,))
            return
        for e in range(remaining + 1):
            rec(pos + 1, remaining - e, wacc + e * weights[pos], exps + (e,))

    if n:
        rec(0, d, 0, ())
    elif d == 0:
        out.append(())
    return out


def torus_monomials(weights: Sequence[int], d: int, ring: Ring) -> list[Monomial]:
    """All degree-d monomials whose weighted exponent sum is zero.

    ``weights`` aligns with ``ring.names``.  Ordered like
    :func:`monomials_of_degree`: grevlex-descending.
    """
    if len(weights) != ring.n:
        raise ValueError("one weight per ring variable required")
    if d < 0:
        return []
    keys = [ring.pack(e) for e in _weight_zero_exponents(weights, d)]
    keys.sort(key=ring.grevlex_key, reverse=True)
    return [Monomial(ring, k) for k in keys]


# -- canonical row reduction ---------------------------------------------------


def _echelon_polys(ring: Ring, rows: Sequence[dict[int, int]]) -> list[Poly]:
    """Reduced echelon form of coefficient rows, as monic polynomials sorted
    by descending leading monomial."""
    kf = ring.grevlex_key
    p = ring.p
    pivots: dict[int, dict[int, int]] = {}
    for src in rows:
        row = dict(src)
        while row:
            lead = max(row, key=kf)
            piv = pivots.get(lead)
            if piv is None:
                ic = inv_mod(row[lead], p)
                pivots[lead] = {k: v * ic % p for k, v in row.items()}
                break
            c = row[lead]
            for k, v in piv.items():
                nv = (row.get(k, 0) - c * v) % p
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
    leads = sorted(pivots, key=kf)
    for i, lead in enumerate(leads):
        row = pivots[lead]
        for big in leads[i + 1 :]:
            other = pivots[big]
            c = other.get(lead)
            if not c:
                continue
            for k, v in row.items():
                nv = (other.get(k, 0) - c * v) % p
                if nv:
                    other[k] = nv
                else:
                    other.pop(k, None)
    return [Poly(ring, pivots[lead]) for lead in sorted(pivots, key=kf, reverse=True)]


# -- the linear engine ---------------------------------------------------------


class _Kernel:
    """Incremental column elimination that records, for each dependent column,
    the combination of earlier columns producing it."""

    __slots__ = ("p", "pivots", "kernel")

    def __init__(self, p: int):
        self.p = p
        self.pivots: dict[int, tuple[dict[int, int], dict[int, int]]] = {}
        self.kernel: list[dict[int, int]] = []

    def add(self, col: dict[int, int], tag: int) -> None:
        p = self.p
        hist = {tag: 1}
        while col:
            lead = max(col)
            piv = self.pivots.get(lead)
            if piv is None:
                ic = inv_mod(col[lead], p)
                self.pivots[lead] = (
                    {k: v * ic % p for k, v in col.items()},
                    {k: v * ic % p for k, v in hist.items()},
                )
                return
            pc, ph = piv
            c = col[lead]
            for k, v in pc.items():
                nv = (col.get(k, 0) - c * v) % p
                if nv:
                    col[k] = nv
                else:
                    col.pop(k, None)
            for k, v in ph.items():
                nv = (hist.get(k, 0) - c * v) % p
                if nv:
                    hist[k] = nv
                else:
                    hist.pop(k, None)
        self.kernel.append(hist)


def _coupling_blocks(mat, n: int) -> list[list[int]]:
    """Connected components of the variable coupling graph: the finest
    partition under which the matrix is block diagonal."""
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(n):
            if i != j and not mat[i][j].is_zero():
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return [groups[k] for k in sorted(groups)]


def _compositions(d: int, m: int) -> Iterator[tuple[int, ...]]:
    if m == 1:
        yield (d,)
        return
    for e in range(d + 1):
        for rest in _compositions(d - e, m - 1):
            yield (e,) + rest


def _linear_engine(
    rep: Representation,
    d: int,
    ring: Ring,
    use_weights: bool,
    budget: Budget | None,
) -> list[Poly]:
    group = rep.group
    p = group.p
    n = rep.n
    labels = rep.basis_labels
    mixed = Ring(p, tuple(group.coords) + tuple(labels))
    red = Reducer([mixed.convert(g) for g in group.gb]) if group.gb else None

    def nf(f: Poly) -> Poly:
        return red.nf(f, budget) if red is not None else f

    mat = reduced_matrix(rep)
    xvars = [mixed.var(nm) for nm in labels]
    psis: list[Poly] = []
    for j in range(n):
        acc = mixed.zero
        for i in range(n):
            e = mat[i][j]
            if not e.is_zero():
                acc = acc + mixed.convert(e) * xvars[i]
        psis.append(acc)

    blocks = _coupling_blocks(mat, n)
    m = len(blocks)
    weights = rep.weights if use_weights else None

    # per block: images[bi][deg] = [(exponents, weight, nf(product of psis))]
    images: list[dict[int, list[tuple[tuple[int, ...], int, Poly]]]] = [
        {} for _ in range(m)
    ]
    lastpow: list[list[Poly]] = [[mixed.one] for _ in range(m)]

    def block_images(bi: int, deg: int):
        got = images[bi].get(deg)
        if got is not None:
            return got
        idxs = blocks[bi]
        k = len(idxs)
        bps = [psis[i] for i in idxs]
        bws = [weights[i] for i in idxs] if weights is not None else None
        pows = lastpow[bi]
        while len(pows) <= deg:
            pows.append(nf(pows[-1] * bps[k - 1]))
        got = []

        def rec(pos: int, remaining: int, exps: tuple[int, ...], acc: Poly):
            if pos == k - 1:
                pw = pows[remaining]
                if not exps or all(e == 0 for e in exps):
                    poly = pw
                elif remaining == 0:
                    poly = acc
                else:
                    poly = nf(acc * pw)
                full = exps + (remaining,)
                w = (
                    sum(e * bws[i] for i, e in enumerate(full))
                    if bws is not None
                    else 0
                )
                got.append((full, w, poly))
                return
            cur = acc
            for e in range(remaining + 1):
                rec(pos + 1, remaining - e, exps + (e,), cur)
                if e < remaining:
                    cur = nf(cur * bps[pos])

        rec(0, deg, (), mixed.one)
        images[bi][deg] = got
        return got

    zero_s = (0,) * len(group.coords)
    rows: list[dict[int, int]] = []
    for comp in _compositions(d, m):
        lists = [block_images(bi, comp[bi]) for bi in range(m)]
        sufmin = [0] * (m + 1)
        sufmax = [0] * (m + 1)
        if weights is not None:
            for bi in range(m - 1, -1, -1):
                ws = [w for (_, w, _) in lists[bi]]
                sufmin[bi] = sufmin[bi + 1] + min(ws)
                sufmax[bi] = sufmax[bi + 1] + max(ws)
            if sufmin[0] > 0 or sufmax[0] < 0:
                continue
        ker = _Kernel(p)

        def assemble(bi: int, wacc: int, parts: tuple, acc: Poly | None):
            if bi == m:
                exps = [0] * n
                for bj, part in enumerate(parts):
                    for i, idx in enumerate(blocks[bj]):
                        exps[idx] = part[i]
                xkey = ring.pack(exps)
                ukey = mixed.pack(zero_s + tuple(exps))
                col = dict(acc.t) if acc is not None else {}
                v = (col.get(ukey, 0) - 1) % p
                if v:
                    col[ukey] = v
                else:
                    col.pop(ukey, None)
                ker.add(col, xkey)
                return
            for exps_b, w, poly in lists[bi]:
                if weights is not None:
                    nw = wacc + w
                    if nw + sufmin[bi + 1] > 0 or nw + sufmax[bi + 1] < 0:
                        continue
                else:
                    nw = 0
                if comp[bi] == 0:
                    nxt = acc
                elif acc is None:
                    nxt = poly
                else:
                    nxt = nf(acc * poly)
                assemble(bi + 1, nw, parts + (exps_b,), nxt)

        assemble(0, 0, (), None)
        rows.extend(ker.kernel)
    return _echelon_polys(ring, rows)


# -- the Groebner engine -------------------------------------------------------


def _fresh_name(base: str, taken: set[str]) -> str:
    if base not in taken:
        return base
    i = 0
    while f"{base}{i}" in taken:
        i += 1
    return f"{base}{i}"


_sat_cache: dict[tuple, list[Poly]] = {}


def _homogenized_group_ideal(
    group, zname: str | None, hname: str, budget: Budget | None
) -> tuple[Ring, list[Poly]]:
    """Groebner basis of the homogenization of the defining ideal (with the
    degree padding relation z - 1 adjoined first when requested), saturated so
    that it is the homogenization of the full ideal, not just of the
    generators."""
    snames = tuple(group.coords) + ((zname,) if zname else ()) + (hname,)
    key = (group.name, group.p, tuple(str(g) for g in group.gb), snames)
    got = _sat_cache.get(key)
    if got is not None:
        return Ring(group.p, snames), got
    sring = Ring(group.p, snames)
    gens = [homogenize(g, hname, sring) for g in group.gb]
    if zname:
        gens.append(sring.var(zname) - sring.var(hname))
    tname = _fresh_name("t", set(snames))
    tring = Ring(group.p, (tname,) + snames)
    tgens = [tring.convert(g) for g in gens]
    tgens.append(tring.var(tname) * tring.var(hname) - tring.one)
    gb = buchberger(tgens, elimination_order(1), budget)
    kf = elimination_order(1).keyfunc(tring)
    fm = tring._field_mask
    tshift = tring._shifts[0]
    sat = [
        sring.convert(g)
        for g in gb
        if all((k >> tshift) & fm == 0 for k in g.t)
    ]
    _sat_cache[key] = sat
    return sring, sat


def _groebner_engine(
    rep: Representation,
    d: int,
    ring: Ring,
    use_weights: bool,
    budget: Budget | None,
) -> list[Poly]:
    group = rep.group
    p = group.p
    n = rep.n
    labels = rep.basis_labels
    mat = reduced_matrix(rep)

    entries = [e for row in mat for e in row if not e.is_zero()]
    degs = {e.degree() for e in entries}
    homog = all(e.is_homogeneous() for e in entries)
    eps = max(degs, default=0)
    need_pad = (not homog) or len(degs) > 1

    taken = set(group.coords) | set(labels)
    zname = _fresh_name("z", taken) if need_pad else None
    if zname:
        taken.add(zname)
    hname = _fresh_name("h", taken)

    sring, sat = _homogenized_group_ideal(group, zname, hname, budget)
    bignames = (
        tuple(group.coords)
        + ((zname,) if zname else ())
        + tuple(labels)
        + (hname,)
    )
    big = Ring(p, bignames)
    block = len(group.coords) + (1 if zname else 0)
    order = elimination_order(block)
    sat_big = [big.convert(g) for g in sat]
    satred = Reducer(sat_big, order) if sat_big else None

    def nf(f: Poly) -> Poly:
        return satred.nf(f, budget) if satred is not None else f

    zvar = big.var(zname) if zname else None
    xvars = [big.var(nm) for nm in labels]
    psis: list[Poly] = []
    for j in range(n):
        acc = big.zero
        for i in range(n):
            e = mat[i][j]
            if e.is_zero():
                continue
            conv = big.zero
            for k in range(e.degree() + 1):
                part = e.homogeneous_part(k)
                if part.is_zero():
                    continue
                padded = big.convert(part)
                if zvar is not None and k < eps:
                    padded = padded * zvar ** (eps - k)
                conv = conv + padded
            acc = acc + conv * xvars[i]
        psis.append(acc)

    if use_weights:
        cands = _weight_zero_exponents(rep.weights, d)
    else:
        cands = [mk.exponents() for mk in monomials_of_degree(ring, d)]

    # evaluate the transformed monomials, reusing partial products along the
    # shared prefix of consecutive exponent vectors
    cands_sorted = sorted(cands)
    prods: list[Poly] = []
    stack: list[Poly] = [big.one]
    prev: tuple[int, ...] = ()
    for exps in cands_sorted:
        pos0 = 0
        shared_units = 0
        applied0 = 0
        if prev:
            while pos0 < len(exps) and prev[pos0] == exps[pos0]:
                shared_units += exps[pos0]
                pos0 += 1
            if pos0 < len(exps):
                applied0 = min(prev[pos0], exps[pos0])
                shared_units += applied0
        del stack[shared_units + 1 :]
        acc = stack[-1]
        for i in range(pos0, len(exps)):
            start = applied0 if i == pos0 else 0
            for _ in range(exps[i] - start):
                acc = nf(acc * psis[i])
                stack.append(acc)
        prods.append(acc)
        prev = tuple(exps)

    delta = eps + 1
    target_deg = d * delta
    gens = prods + sat_big
    for g in gens:
        if not g.is_homogeneous():
            raise RuntimeError("construction lost homogeneity")
    # the ideal is homogeneous, so a degree-truncated basis suffices to read
    # off the slice of degree d * delta
    gb = buchberger(gens, order, budget, degree_cap=target_deg)
    kf = order.keyfunc(big)
    fm = big._field_mask
    first_shifts = big._shifts[:block]
    picked: list[Poly] = []
    for g in gb:
        lm = g.leading(kf)[0]
        if any((lm >> s) & fm for s in first_shifts):
            continue
        if g.degree() != target_deg:
            continue
        f = g.substitute({hname: ring.one}, ring)
        if f.is_zero():
            continue
        if not f.is_homogeneous() or f.degree() != d:
            raise RuntimeError("elimination produced a non-homogeneous element")
        picked.append(f)
    return _echelon_polys(ring, [dict(f.t) for f in picked])


# -- public entry points -------------------------------------------------------


def invariant_basis(
    rep: Representation,
    d: int,
    use_weights: bool = False,
    engine: str = "linear",
    budget: Budget | int | None = None,
) -> InvariantBasis:
    """K-basis of the degree-d invariants of the polynomial ring on which
    ``rep`` acts.

    The matrix of ``rep`` is taken as the action on the polynomial variables
    themselves; to compute the invariants of a module V, pass the
    representation on its dual.  ``use_weights`` restricts candidate monomials
    to torus weight zero (requires ``rep.weights``); the resulting basis is
    the same.  ``budget`` caps reduction steps and raises BudgetExceeded.
    """
    if d < 0:
        raise ValueError("degree must be nonnegative")
    if isinstance(budget, int):
        budget = Budget(budget)
    clash = set(rep.group.coords) & set(rep.basis_labels)
    if clash:
        raise ValueError(f"module labels collide with group coordinates: {sorted(clash)}")
    ring = Ring(rep.group.p, rep.basis_labels)
    if d == 0:
        return InvariantBasis(0, (ring.one,))
    if use_weights and rep.weights is None:
        raise ValueError("module carries no torus weights")
    if engine == "linear":
        elems = _linear_engine(rep, d, ring, use_weights, budget)
    elif engine == "groebner":
        elems = _groebner_engine(rep, d, ring, use_weights, budget)
    else:
        raise ValueError(f"unknown engine {engine!r}")
    return InvariantBasis(d, tuple(elems))


# -- membership in a graded module over a parameter subalgebra ------------------


class LinearSpan:
    """A growing GF(p)-span of polynomials with echelonized pivots."""

    __slots__ = ("p", "pivots")

    def __init__(self, p: int):
        self.p = p
        self.pivots: dict[int, dict[int, int]] = {}

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def _reduce(self, terms: dict[int, int]) -> dict[int, int]:
        p = self.p
        work = dict(terms)
        while work:
            lead = max(work)
            piv = self.pivots.get(lead)
            if piv is None:
                return work
            c = work[lead]
            for k, v in piv.items():
                nv = (work.get(k, 0) - c * v) % p
                if nv:
                    work[k] = nv
                else:
                    work.pop(k, None)
        return work

    def add(self, f: Poly) -> bool:
        """Insert f; True if it was independent of the current span."""
        rem = self._reduce(f.t)
        if not rem:
            return False
        lead = max(rem)
        ic = inv_mod(rem[lead], self.p)
        self.pivots[lead] = {k: v * ic % self.p for k, v in rem.items()}
        return True

    def contains(self, f: Poly) -> bool:
        return not self._reduce(f.t)


def power_products(factors: Sequence[Poly], degree: int) -> list[Poly]:
    """All products of powers of the given homogeneous polynomials with total
    degree exactly ``degree``, sharing partial products across the list."""
    if degree < 0:
        return []
    if any(f.is_zero() or not f.is_homogeneous() or f.degree() < 1 for f in factors):
        raise ValueError("factors must be homogeneous of positive degree")
    if not factors:
        return []
    ring = factors[0].ring
    degs = [f.degree() for f in factors]
    out: list[Poly] = []
    k = len(factors)

    def rec(pos: int, remaining: int, acc: Poly):
        if remaining == 0:
            out.append(acc)
            return
        if pos == k:
            return
        cur = acc
        e = 0
        while e * degs[pos] <= remaining:
            rec(pos + 1, remaining - e * degs[pos], cur)
            e += 1
            if e * degs[pos] <= remaining:
                cur = cur * factors[pos]

    rec(0, degree, ring.one)
    return out


def graded_module_span(
    phsop: Sequence[Poly],
    gens: Sequence[Poly],
    degree: int,
    ring: Ring,
) -> LinearSpan:
    """Span of all products (power product in phsop) * g of the given total
    degree, for g in gens."""
    span = LinearSpan(ring.p)
    for g in gens:
        if g.is_zero():
            continue
        dg = g.degree()
        if dg > degree:
            continue
        if dg == degree:
            span.add(g)
            continue
        for prod in power_products(phsop, degree - dg):
            span.add(prod * g)
    return span


def homogeneous_module_test(
    phsop: Sequence[Poly],
    gens: Sequence[Poly],
    f: Poly,
) -> bool:
    """True iff f lies in the module over K[phsop] generated by gens,
    i.e. f = sum of (polynomial in phsop) * g_i.

    All inputs must be homogeneous; the test enumerates the power products of
    the phsop of matching degree and solves the coefficient system over GF(p).
    """
    if f.is_zero():
        return True
    if not f.is_homogeneous():
        raise ValueError("f must be homogeneous")
    for g in phsop:
        if g.is_zero() or not g.is_homogeneous() or g.degree() < 1:
            raise ValueError("phsop entries must be homogeneous of positive degree")
    for g in gens:
        if not g.is_zero() and not g.is_homogeneous():
            raise ValueError("generators must be homogeneous")
    span = graded_module_span(phsop, gens, f.degree(), f.ring)
    return span.contains(f)
