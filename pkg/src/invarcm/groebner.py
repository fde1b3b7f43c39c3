"""Buchberger's algorithm, normal forms, elimination, and ideal dimension.

All routines are deterministic: given the same generators in the same order
they produce identical output, and the reduced monic basis itself is unique,
so even generator order does not matter for the final result.
"""

from __future__ import annotations

from typing import Sequence

from .polyalg import (
    Budget,
    MonomialOrder,
    Poly,
    Ring,
    grevlex,
    inv_mod,
)

__all__ = [
    "Reducer",
    "normal_form",
    "buchberger",
    "elimination_ideal",
    "ideal_dimension",
    "homogenize",
]


def _as_budget(budget) -> Budget | None:
    if budget is None or isinstance(budget, Budget):
        return budget
    return Budget(int(budget))


class Reducer:
    """A fixed list of reducers with precomputed leading data for fast NF."""

    __slots__ = ("ring", "order", "kf", "polys", "lts")

    def __init__(self, polys: Sequence[Poly], order: MonomialOrder = grevlex):
        polys = [g for g in polys if not g.is_zero()]
        if not polys:
            raise ValueError("empty reducer set")
        self.ring = polys[0].ring
        self.order = order
        self.kf = order.keyfunc(self.ring)
        self.polys = list(polys)
        p = self.ring.p
        self.lts = []
        for g in self.polys:
            lm, lc = g.leading(self.kf)
            tail = [(k, c) for k, c in g.t.items() if k != lm]
            self.lts.append((lm, inv_mod(lc, p), tail))

    def nf(self, f: Poly, budget: Budget | None = None) -> Poly:
        return Poly(self.ring, self.nf_terms(f.t, budget))

    def nf_terms(self, terms: dict[int, int], budget: Budget | None = None) -> dict[int, int]:
        """Normal form of a term dict; returns a new dict."""
        ring = self.ring
        p = ring.p
        kf = self.kf
        divides = ring.mono_divides
        work = dict(terms)
        out: dict[int, int] = {}
        while work:
            k = max(work, key=kf)
            c = work.pop(k)
            for lm, ilc, tail in self.lts:
                if divides(lm, k):
                    if budget is not None:
                        budget.tick()
                    q = k - lm
                    coef = c * ilc % p
                    for km, cm in tail:
                        kk = km + q
                        v = (work.get(kk, 0) - coef * cm) % p
                        if v:
                            work[kk] = v
                        else:
                            work.pop(kk, None)
                    break
            else:
                out[k] = c
        return out


def normal_form(
    f: Poly,
    basis: Sequence[Poly],
    order: MonomialOrder = grevlex,
    budget=None,
) -> Poly:
    """Fully reduce f modulo the given polynomials under the given order."""
    basis = [g for g in basis if not g.is_zero()]
    if not basis:
        return f
    return Reducer(basis, order).nf(f, _as_budget(budget))


def _s_poly(ring: Ring, f: Poly, lmf: int, lcf: int, g: Poly, lmg: int, lcg: int) -> Poly:
    p = ring.p
    lcm = ring.mono_lcm(lmf, lmg)
    a = f.mul_mono(lcm - lmf, inv_mod(lcf, p))
    b = g.mul_mono(lcm - lmg, inv_mod(lcg, p))
    return a - b


def buchberger(
    generators: Sequence[Poly],
    order: MonomialOrder = grevlex,
    budget=None,
    degree_cap: int | None = None,
) -> list[Poly]:
    """Reduced monic Groebner basis of the ideal generated by ``generators``.

    Returns ``[]`` for the zero ideal and ``[1]`` for the unit ideal.  The
    result is sorted by ascending leading monomial.

    ``degree_cap`` skips critical pairs whose lcm degree exceeds the cap.  For
    a homogeneous ideal this yields exactly the elements of the full reduced
    basis with degree at most the cap (a truncated basis); for inhomogeneous
    input it is unsound and the caller is responsible.
    """
    budget = _as_budget(budget)
    gens = [g for g in generators if not g.is_zero()]
    if not gens:
        return []
    ring = gens[0].ring
    for g in gens:
        if g.ring != ring:
            raise ValueError("generators from different rings")
    kf = order.keyfunc(ring)

    G: list[Poly] = []
    lms: list[int] = []
    for g in gens:
        G.append(g.monic(kf))
        lms.append(g.leading(kf)[0])

    def lcm_coprime(i: int, j: int) -> bool:
        return ring.mono_lcm(lms[i], lms[j]) == lms[i] + lms[j]

    ds = ring._deg_shift

    def degree_ok(i: int, j: int) -> bool:
        if degree_cap is None:
            return True
        return (ring.mono_lcm(lms[i], lms[j]) >> ds) <= degree_cap

    pairs = {
        (i, j)
        for i in range(len(G))
        for j in range(i + 1, len(G))
        if degree_ok(i, j)
    }
    done: set[tuple[int, int]] = set()

    while pairs:
        best = min(
            pairs,
            key=lambda ij: (
                ring.mono_lcm(lms[ij[0]], lms[ij[1]]) >> ds,
                kf(ring.mono_lcm(lms[ij[0]], lms[ij[1]])),
                ij,
            ),
        )
        pairs.discard(best)
        done.add(best)
        i, j = best
        if lcm_coprime(i, j):
            continue
        lcm_ij = ring.mono_lcm(lms[i], lms[j])
        skip = False
        for k in range(len(G)):
            if k == i or k == j:
                continue
            if not ring.mono_divides(lms[k], lcm_ij):
                continue
            pik = (min(i, k), max(i, k))
            pjk = (min(j, k), max(j, k))
            if pik in done and pjk in done:
                skip = True
                break
        if skip:
            continue
        s = _s_poly(ring, G[i], lms[i], 1, G[j], lms[j], 1)
        h = Reducer(G, order).nf(s, budget)
        if h.is_zero():
            continue
        h = h.monic(kf)
        m = len(G)
        G.append(h)
        lms.append(h.leading(kf)[0])
        for t in range(m):
            if degree_ok(t, m):
                pairs.add((t, m))

    # minimalize: drop elements whose leading monomial another one divides
    order_idx = sorted(range(len(G)), key=lambda i: kf(lms[i]))
    keep: list[int] = []
    for i in order_idx:
        if not any(ring.mono_divides(lms[k], lms[i]) for k in keep):
            keep.append(i)
    minimal = [G[i] for i in keep]

    if len(minimal) == 1 and minimal[0].degree() == 0:
        return [ring.one]

    # inter-reduce tails
    reduced: list[Poly] = []
    for i, g in enumerate(minimal):
        others = [h for k, h in enumerate(minimal) if k != i]
        if others:
            g = Reducer(others, order).nf(g, budget).monic(kf)
        reduced.append(g)
    reduced.sort(key=lambda g: kf(g.leading(kf)[0]))
    return reduced


def elimination_ideal(
    generators: Sequence[Poly],
    eliminate: int,
    budget=None,
) -> list[Poly]:
    """Groebner basis of the ideal's intersection with the subring obtained by
    removing the first ``eliminate`` variables.

    The returned polynomials still live in the original ring but contain none
    of the eliminated variables.
    """
    gens = [g for g in generators if not g.is_zero()]
    if not gens:
        return []
    from .polyalg import elimination_order

    ring = gens[0].ring
    order = elimination_order(eliminate)
    gb = buchberger(gens, order, budget)
    kf = order.keyfunc(ring)
    fm = ring._field_mask
    first_shifts = ring._shifts[:eliminate]

    def free(key: int) -> bool:
        return all((key >> s) & fm == 0 for s in first_shifts)

    return [g for g in gb if free(g.leading(kf)[0])]


def ideal_dimension(generators: Sequence[Poly], budget=None) -> int:
    """Krull dimension of the quotient by the ideal.

    Computed from a grevlex basis: ``n`` minus the size of a smallest set of
    variables meeting the support of every leading monomial.  The zero ideal
    has dimension ``n``; the unit ideal returns ``-1``.
    """
    gens = [g for g in generators if not g.is_zero()]
    if not gens:
        raise ValueError("need at least one polynomial to identify the ring")
    ring = gens[0].ring
    gb = buchberger(gens, grevlex, budget)
    return dimension_from_basis(ring, gb)


def dimension_from_basis(ring: Ring, gb: Sequence[Poly]) -> int:
    """Dimension computed from an already known grevlex Groebner basis."""
    if not gb:
        return ring.n
    kf = ring.grevlex_key
    supports: list[int] = []
    fm = ring._field_mask
    for g in gb:
        lm = g.leading(kf)[0]
        mask = 0
        for i, s in enumerate(ring._shifts):
            if (lm >> s) & fm:
                mask |= 1 << i
        if mask == 0:
            return -1  # unit ideal: a constant leading monomial
        supports.append(mask)
    # remove supports that contain another support (they are hit for free)
    supports.sort(key=lambda m: bin(m).count("1"))
    minimal: list[int] = []
    for m in supports:
        if not any(m & s == s for s in minimal):
            minimal.append(m)

    best = [ring.n]

    def search(idx: int, chosen: int, size: int):
        if size >= best[0]:
            return
        while idx < len(minimal) and minimal[idx] & chosen:
            idx += 1
        if idx == len(minimal):
            best[0] = size
            return
        m = minimal[idx]
        for i in range(ring.n):
            if (m >> i) & 1:
                search(idx + 1, chosen | (1 << i), size + 1)

    search(0, 0, 0)
    return ring.n - best[0]


def homogenize(f: Poly, hname: str = "h", target: Ring | None = None) -> Poly:
    """Homogenize one polynomial with a fresh variable (appended last)."""
    ring = f.ring
    if hname in ring.index:
        raise ValueError(f"{hname!r} already a variable of the ring")
    if target is None:
        target = Ring(ring.p, ring.names + (hname,))
    hidx = target.index[hname]
    d = f.degree()
    out: dict[int, int] = {}
    for key, c in f.t.items():
        exps = list(ring.unpack(key))
        tgt = [0] * target.n
        for i, e in enumerate(exps):
            tgt[target.index[ring.names[i]]] = e
        tgt[hidx] = d - ring.mono_deg(key)
        out[target.pack(tgt)] = c
    return Poly(target, out)
