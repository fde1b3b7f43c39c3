"""Detection of non-Cohen-Macaulay invariant rings.

The pipeline computes degree-wise bases of the invariant ring, greedily picks
a partial homogeneous system of parameters (phsop) among them, accumulates
module generators over the parameter subalgebra, and compares the Hilbert
series estimated from that data with the actual one.  A mismatch certifies
that the invariant ring is not Cohen-Macaulay; agreement proves nothing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .gmodule import Representation
from .groebner import Reducer, buchberger, dimension_from_basis
from .invariants import InvariantBasis, LinearSpan, invariant_basis, power_products
from .polyalg import Budget, BudgetExceeded, Poly, Ring, grevlex, series_estimate

__all__ = [
    "PhsopResult",
    "CMReport",
    "choose_phsop",
    "generators_up_to_degree",
    "is_not_cohen_macaulay",
]


@dataclass(frozen=True)
class PhsopResult:
    """A partial homogeneous system of parameters chosen greedily.

    Every accepted element cut the dimension of the generated ideal by
    exactly one, so ``residual_dimension`` equals ``n - len(elements)``.
    """

    elements: tuple[Poly, ...]
    degrees: tuple[int, ...]
    residual_dimension: int


@dataclass(frozen=True)
class CMReport:
    """Outcome of one detection run.

    ``verdict`` True means the ring is certainly not Cohen-Macaulay;
    False means no statement could be made up to ``dmax``.  The dimension
    lists are indexed by degree 0..dmax and the estimate dominates the
    actual count in every degree.
    """

    dmax: int
    actual_dims: tuple[int, ...]
    phsop: PhsopResult
    generator_degrees: tuple[int, ...]
    estimated_dims: tuple[int, ...]
    verdict: bool
    first_mismatch_degree: int | None


def choose_phsop(
    candidates: Sequence[Poly],
    ring: Ring,
    budget: Budget | int | None = None,
) -> PhsopResult:
    """Greedy scan over the candidate list, preferring earlier elements.

    A candidate is accepted iff adding it to the ideal generated by the
    elements taken so far drops the dimension by exactly one.  The scan
    never stops early; with an int budget each dimension probe gets a
    fresh allowance.
    """
    for f in candidates:
        if f.ring != ring:
            raise ValueError("candidates must live in the given ring")
        if f.is_zero() or not f.is_homogeneous() or f.degree() < 1:
            raise ValueError("candidates must be homogeneous of positive degree")
    elements: list[Poly] = []
    degrees: list[int] = []
    gb: list[Poly] = []
    reducer = None
    for f in candidates:
        b = Budget(budget) if isinstance(budget, int) else budget
        if reducer is not None and reducer.nf(f, b).is_zero():
            continue  # f lies in the ideal already, cannot drop the dimension
        # gb generates the same ideal as the accepted elements, so probing
        # on top of it is incremental rather than from scratch
        probe = buchberger(gb + [f], grevlex, b)
        if dimension_from_basis(ring, probe) == ring.n - len(elements) - 1:
            elements.append(f)
            degrees.append(f.degree())
            gb = probe
            reducer = Reducer(gb)
    return PhsopResult(tuple(elements), tuple(degrees), ring.n - len(elements))


def _bases_to_polys(
    inv_bases: Mapping[int, InvariantBasis | Sequence[Poly]],
    dmax: int,
) -> dict[int, list[Poly]]:
    out: dict[int, list[Poly]] = {}
    for d in range(1, dmax + 1):
        if d not in inv_bases:
            raise ValueError(f"missing basis for degree {d}")
        b = inv_bases[d]
        polys = list(b.elements) if isinstance(b, InvariantBasis) else list(b)
        for f in polys:
            if f.is_zero() or not f.is_homogeneous() or f.degree() != d:
                raise ValueError(f"degree-{d} basis entries must be homogeneous of degree {d}")
        out[d] = polys
    return out


def generators_up_to_degree(
    inv_bases: Mapping[int, InvariantBasis | Sequence[Poly]],
    phsop: Sequence[Poly],
    dmax: int,
    ring: Ring | None = None,
) -> list[tuple[Poly, int]]:
    """Module generators over K[phsop], found degree by degree.

    Starts from the constant 1 and walks each degree basis in order,
    keeping exactly the elements that are not in the module spanned by the
    generators found so far.  Returns (generator, degree) pairs.
    """
    for g in phsop:
        if g.is_zero() or not g.is_homogeneous() or g.degree() < 1:
            raise ValueError("phsop entries must be homogeneous of positive degree")
    bases = _bases_to_polys(inv_bases, dmax)
    if ring is None:
        if phsop:
            ring = phsop[0].ring
        else:
            for d in range(1, dmax + 1):
                if bases[d]:
                    ring = bases[d][0].ring
                    break
    if ring is None:
        raise ValueError("cannot tell the ambient ring from empty input")

    pp_cache: dict[int, list[Poly]] = {}

    def pp(k: int) -> list[Poly]:
        if k not in pp_cache:
            pp_cache[k] = power_products(list(phsop), k)
        return pp_cache[k]

    gens: list[tuple[Poly, int]] = [(ring.one, 0)]
    for d in range(1, dmax + 1):
        if not bases[d]:
            continue
        span = LinearSpan(ring.p)
        for g, dg in gens:
            if dg == d:
                span.add(g)
            elif dg < d:
                for prod in pp(d - dg):
                    span.add(prod * g)
        for f in bases[d]:
            # a generator added here only contributes itself at this degree,
            # so extending the span by f keeps the scan exact
            if not span.contains(f):
                gens.append((f, d))
                span.add(f)
    return gens


def is_not_cohen_macaulay(
    rep_of_dual: Representation,
    dmax: int,
    *,
    use_weights: bool = False,
    max_phsop_degree: int | None = None,
    multi_pass: int = 1,
    engine: str = "linear",
    budget: int | None = None,
) -> CMReport:
    """Decide whether the invariant ring is certainly not Cohen-Macaulay.

    ``rep_of_dual`` is the representation on the dual module, i.e. the
    action on the polynomial variables.  The group must be reductive,
    which is the caller's responsibility.  ``max_phsop_degree`` caps the
    degree of phsop candidates (default ``dmax``); ``multi_pass`` repeats
    the phsop selection with candidates restricted to degree >= i for
    i = 1..multi_pass and keeps the first run with a positive verdict,
    otherwise the last.  An int ``budget`` caps each degree's invariant
    computation separately and each dimension probe.
    """
    if dmax < 0:
        raise ValueError("dmax must be nonnegative")
    if multi_pass < 1:
        raise ValueError("multi_pass must be at least 1")
    maxdp = dmax if max_phsop_degree is None else max_phsop_degree
    if maxdp < 0:
        raise ValueError("max_phsop_degree must be nonnegative")

    inv_bases: dict[int, InvariantBasis] = {}
    actual = [1]
    for d in range(1, dmax + 1):
        try:
            inv_bases[d] = invariant_basis(
                rep_of_dual, d, use_weights=use_weights, engine=engine, budget=budget
            )
        except BudgetExceeded as e:
            raise BudgetExceeded(f"invariant basis at degree {d}: {e}") from e
        actual.append(len(inv_bases[d]))

    ring = Ring(rep_of_dual.group.p, rep_of_dual.basis_labels)
    candidates = [f for d in range(1, min(maxdp, dmax) + 1) for f in inv_bases[d].elements]

    kept: tuple[PhsopResult, list[tuple[Poly, int]], list[int]] | None = None
    for start in range(1, multi_pass + 1):
        eligible = [f for f in candidates if f.degree() >= start]
        phsop = choose_phsop(eligible, ring, budget)
        gens = generators_up_to_degree(inv_bases, phsop.elements, dmax, ring)
        estimated = series_estimate([dg for _, dg in gens], phsop.degrees, dmax)
        kept = (phsop, gens, estimated)
        if estimated != actual:
            break

    assert kept is not None
    phsop, gens, estimated = kept
    mismatch = next((d for d in range(dmax + 1) if estimated[d] != actual[d]), None)
    return CMReport(
        dmax=dmax,
        actual_dims=tuple(actual),
        phsop=phsop,
        generator_degrees=tuple(dg for _, dg in gens),
        estimated_dims=tuple(estimated),
        verdict=mismatch is not None,
        first_mismatch_degree=mismatch,
    )
