"""One-cocycles on group modules: verification, extensions, coboundary tests,
and the division-relation witnesses behind the Cohen-Macaulay detector.

A 1-cocycle assigns to the generic group element sigma a vector g(sigma) of
polynomials in the group coordinates satisfying g(st) = A(s) g(t) + g(s).
Every law here is discharged symbolically, as a normal form computation
modulo the defining ideal of the group (in two coordinate copies when the
law involves independent elements); point evaluation is never the evidence.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .gmodule import (
    Representation,
    _dual_matrix,
    _kron,
    extract_weights,
    reduced_matrix,
    validate_representation,
)
from .groebner import Reducer
from .invariants import _Kernel, _fresh_name
from .polyalg import Budget, Poly, Ring, inv_mod, monomials_of_degree

__all__ = [
    "AnnihilationReport",
    "Cocycle",
    "CocycleEmbedding",
    "CocycleReport",
    "HauptsatzWitness",
    "check_annihilation",
    "check_cocycle",
    "cocycle_from_invariant",
    "extend_by_cocycle",
    "hauptsatz_witness",
    "is_coboundary",
]


@dataclass(frozen=True)
class Cocycle:
    """A 1-cocycle on ``module``: ``g[i]`` is the coefficient of the i-th
    basis vector in g(sigma), a polynomial in the group coordinates."""

    module: Representation
    g: tuple[Poly, ...]

    def __post_init__(self):
        if len(self.g) != self.module.n:
            raise ValueError("cocycle length does not match module dimension")
        ring = self.module.group.ring
        for gi in self.g:
            if gi.ring != ring:
                raise ValueError("cocycle entries must live in the group coordinate ring")


@dataclass(frozen=True)
class CocycleReport:
    identity_value_ok: bool
    cocycle_identity_ok: bool
    extension_ok: bool
    failures: tuple[str, ...]

    @property
    def passed(self) -> bool:
        return self.identity_value_ok and self.cocycle_identity_ok and self.extension_ok


@dataclass(frozen=True)
class AnnihilationReport:
    equation_ok: bool
    failures: tuple[str, ...]

    @property
    def passed(self) -> bool:
        return self.equation_ok


def _extension(c: Cocycle) -> Representation:
    rep = c.module
    ring = rep.group.ring
    n = rep.n
    rows = [rep.matrix[i] + (c.g[i],) for i in range(n)]
    rows.append((ring.zero,) * n + (ring.one,))
    taken = set(rep.basis_labels) | set(rep.group.coords)
    labels = rep.basis_labels + (_fresh_name("t", taken),)
    return Representation(rep.group, n + 1, tuple(rows), labels, None)


def check_cocycle(c: Cocycle) -> CocycleReport:
    """Verify the cocycle law and that [[A, g], [0, 1]] is a representation.

    The law g(st) = A(s) g(t) + g(s) is checked in two coordinate copies
    modulo the relations of both, and g must vanish at the identity element.
    """
    rep = c.module
    group = rep.group
    n = rep.n
    failures: list[str] = []

    at_identity = dict(zip(group.coords, group.identity))
    identity_value_ok = True
    for i, gi in enumerate(c.g):
        if gi.evaluate(at_identity) != 0:
            identity_value_ok = False
            failures.append(f"identity value: entry {i}")

    r2 = group.ring2
    tau_map = {nm: r2.var(nm + "p") for nm in group.coords}
    mul_map = dict(zip(group.coords, group.mul))
    g_s = [r2.convert(gi) for gi in c.g]
    g_t = [gi.substitute(tau_map, r2) for gi in g_s]
    cocycle_identity_ok = True
    for i in range(n):
        acc = g_s[i]
        for k in range(n):
            acc = acc + r2.convert(rep.matrix[i][k]) * g_t[k]
        composed = c.g[i].substitute(mul_map, r2)
        if not group.nf2(composed - acc).is_zero():
            cocycle_identity_ok = False
            failures.append(f"cocycle law: entry {i}")

    ext_report = validate_representation(_extension(c))
    extension_ok = ext_report.passed
    failures.extend("extension " + f for f in ext_report.failures)

    return CocycleReport(
        identity_value_ok, cocycle_identity_ok, extension_ok, tuple(failures)
    )


def extend_by_cocycle(c: Cocycle) -> Representation:
    """The extension of ``c.module`` by a trivial line: the added basis vector
    t satisfies sigma . t = sum_i g_i(sigma) e_i + t.

    The cocycle is validated first.  Weights carry over with weight 0 for t
    when the torus restriction of the extension stays diagonal."""
    report = check_cocycle(c)
    if not report.passed:
        raise ValueError("invalid cocycle: " + "; ".join(report.failures))
    ext = _extension(c)
    if c.module.weights is not None and ext.group.torus_embed is not None:
        try:
            weights = extract_weights(ext)
        except ValueError:
            weights = None
        if weights is not None:
            ext = Representation(ext.group, ext.n, ext.matrix, ext.basis_labels, weights)
    return ext


def _solve_mod_p(
    p: int, equations: Sequence[tuple[Sequence[int], int]], unknowns: int
) -> tuple[int, ...] | None:
    """One solution of a linear system over GF(p), free unknowns set to zero,
    or None when the system is inconsistent."""
    rows = []
    for coeffs, rhs in equations:
        row = [v % p for v in coeffs] + [rhs % p]
        if any(row):
            rows.append(row)
    pivots: list[int] = []
    rank = 0
    for col in range(unknowns):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        ic = inv_mod(rows[rank][col], p)
        rows[rank] = [v * ic % p for v in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                f = rows[r][col]
                rows[r] = [(v - f * w) % p for v, w in zip(rows[r], rows[rank])]
        pivots.append(col)
        rank += 1
    if any(row[-1] for row in rows[rank:]):
        return None
    sol = [0] * unknowns
    for r, col in enumerate(pivots):
        sol[col] = rows[r][-1]
    return tuple(sol)


def is_coboundary(c: Cocycle) -> tuple[int, ...] | None:
    """A constant vector v with (A(sigma) - 1) v = g(sigma) identically, or
    None.

    The linear system ranges over the coefficient of every standard monomial
    of every entry, so None proves that no constant witness exists."""
    rep = c.module
    group = rep.group
    n = rep.n
    if n == 0:
        return ()
    one = group.ring.one
    mat = reduced_matrix(rep)
    equations: list[tuple[list[int], int]] = []
    for i in range(n):
        delta = [
            group.nf(mat[i][j] - one) if i == j else mat[i][j] for j in range(n)
        ]
        rhs = group.nf(c.g[i])
        keys = set(rhs.t)
        for q in delta:
            keys.update(q.t)
        for key in keys:
            equations.append(
                ([q.t.get(key, 0) for q in delta], rhs.t.get(key, 0))
            )
    return _solve_mod_p(group.p, equations, n)


def cocycle_from_invariant(rep: Representation, invariant_index: int) -> Cocycle:
    """The connecting cocycle attached to an invariant basis vector, read off
    on the dual side.

    The invariant vector must sit last (apply a change of basis first); the
    dual matrix then has the block form [[B, h], [0, 1]] and h is a cocycle
    on the module carried by the remaining dual basis vectors."""
    group = rep.group
    ring = group.ring
    n = rep.n
    if not 0 <= invariant_index < n:
        raise ValueError("invariant index out of range")
    if invariant_index != n - 1:
        raise ValueError(
            "the invariant basis vector must come last; apply a change of basis first"
        )
    for i in range(n):
        want = ring.one if i == invariant_index else ring.zero
        if not group.nf(rep.matrix[i][invariant_index] - want).is_zero():
            raise ValueError(f"basis vector {invariant_index} is not invariant")
    dual = _dual_matrix(group, rep.matrix)
    m = n - 1
    sub = tuple(tuple(dual[i][j] for j in range(m)) for i in range(m))
    labels = tuple(nm + "s" for nm in rep.basis_labels[:m])
    weights = tuple(-w for w in rep.weights[:m]) if rep.weights is not None else None
    module = Representation(group, m, sub, labels, weights)
    return Cocycle(module, tuple(dual[i][m] for i in range(m)))


def check_annihilation(c: Cocycle) -> AnnihilationReport:
    """Verify pi (x) g_sigma = (sigma - 1) x symbolically, where W is the dual
    of the extension by ``c``, x = -(sum_i v_i* (x) v_i) in W (x) V, and pi is
    the dual vector added by the extension.

    This is the mechanism that turns module invariants pairing with pi into
    multipliers sending the cocycle to coboundaries; a failure on a valid
    cocycle indicates an implementation error, not a property of the input."""
    rep = c.module
    group = rep.group
    ring = group.ring
    n = rep.n
    ext = extend_by_cocycle(c)
    wmat = _dual_matrix(group, ext.matrix)
    tmat = _kron(wmat, rep.matrix)
    failures: list[str] = []
    for row in range((n + 1) * n):
        acc = ring.zero
        for i in range(n):
            acc = acc - tmat[row][i * n + i]
        if row < n * n and row % (n + 1) == 0:
            acc = acc + ring.one
        if row >= n * n:
            acc = acc - c.g[row - n * n]
        if not group.nf(acc).is_zero():
            failures.append(f"entry {row}")
    return AnnihilationReport(not failures, tuple(failures))


# -- division relations in the coordinate ring ---------------------------------


@dataclass(frozen=True)
class CocycleEmbedding:
    """A cocycle realized inside the coordinate ring of a module: basis vector
    k of the cocycle module is placed at the homogeneous polynomial
    ``placement[k]`` in the module variables."""

    cocycle: Cocycle
    placement: tuple[Poly, ...]

    def __post_init__(self):
        if len(self.placement) != self.cocycle.module.n:
            raise ValueError("placement length does not match the cocycle module")

    def degree(self) -> int:
        """Common homogeneous degree of the nonzero placement entries."""
        degs = set()
        for f in self.placement:
            if f.is_zero():
                continue
            if not f.is_homogeneous():
                raise ValueError("placement entries must be homogeneous")
            degs.add(f.degree())
        if len(degs) != 1 or min(degs) < 1:
            raise ValueError("placement entries must share one positive degree")
        return degs.pop()


@dataclass(frozen=True)
class HauptsatzWitness:
    """Solutions b_i of (sigma - 1) b_i = a_i g_sigma in the module's
    coordinate ring, together with the invariants u_ij = a_i b_j - a_j b_i
    and the determinant relation u_23 a_1 - u_13 a_2 + u_12 a_3 = 0.

    ``u`` is ordered (u_12, u_13, u_23); ``u_degrees`` are total degrees, for
    comparison against the mismatch-degree bound deg a_1 + deg a_2 + deg a_3
    + cocycle_degree."""

    b: tuple[Poly, Poly, Poly]
    u: tuple[Poly, Poly, Poly]
    u_degrees: tuple[int, int, int]
    relation_ok: bool
    cocycle_degree: int


def hauptsatz_witness(
    polyring_rep: Representation,
    cocycle_embedding: CocycleEmbedding,
    annihilators: Sequence[Poly],
    budget: Budget | int | None = None,
) -> HauptsatzWitness:
    """For three homogeneous invariants a_i that annihilate an embedded
    cocycle, produce b_i with (sigma - 1) b_i = a_i g_sigma and the resulting
    relation among the invariants u_ij = a_i b_j - a_j b_i.

    Each b_i is found by solving a linear system over the monomials of degree
    deg a_i + deg g; no solution means a_i does not annihilate the cocycle
    and raises.  Invariance of the a_i and the cocycle law of the embedded
    g are verified symbolically before solving."""
    group = polyring_rep.group
    p = group.p
    labels = polyring_rep.basis_labels
    if isinstance(budget, int):
        budget = Budget(budget)
    clash = set(group.coords) & set(labels)
    if clash:
        raise ValueError(f"module labels collide with group coordinates: {sorted(clash)}")
    xring = Ring(p, labels)

    if len(annihilators) != 3:
        raise ValueError("exactly three annihilators are required")
    a = [xring.convert(f) for f in annihilators]
    for idx, f in enumerate(a):
        if f.is_zero() or not f.is_homogeneous() or f.degree() < 1:
            raise ValueError(
                f"annihilator {idx + 1} must be homogeneous of positive degree"
            )

    c = cocycle_embedding.cocycle
    if c.module.group.ring != group.ring or c.module.group.name != group.name:
        raise ValueError("cocycle and module belong to different groups")
    e = cocycle_embedding.degree()
    placement = [xring.convert(f) for f in cocycle_embedding.placement]

    mixed = Ring(p, tuple(group.coords) + tuple(labels))
    # appending variables keeps the grevlex order on the old ones, so the
    # group basis is still a Groebner basis here
    gb = [mixed.convert(g) for g in group.gb]
    red = Reducer(gb) if gb else None

    def nf(f: Poly) -> Poly:
        return red.nf(f, budget) if red is not None else f

    mat = reduced_matrix(polyring_rep)
    xvars = [mixed.var(nm) for nm in labels]
    psis: list[Poly] = []
    for j in range(len(labels)):
        acc = mixed.zero
        for i in range(len(labels)):
            entry = mat[i][j]
            if not entry.is_zero():
                acc = acc + mixed.convert(entry) * xvars[i]
        psis.append(acc)
    tmap = dict(zip(labels, psis))

    for idx, f in enumerate(a):
        if not nf(f.substitute(tmap, mixed) - mixed.convert(f)).is_zero():
            raise ValueError(f"annihilator {idx + 1} is not invariant")

    g_emb = mixed.zero
    for k in range(c.module.n):
        g_emb = g_emb + mixed.convert(c.g[k]) * mixed.convert(placement[k])

    # the placement must itself satisfy the cocycle law inside the coordinate
    # ring; checked in two coordinate copies with the action on the variables
    ring3 = Ring(p, tuple(group.ring2.names) + tuple(labels))
    gb3 = [ring3.convert(g) for g in group.gb2]
    red3 = Reducer(gb3) if gb3 else None
    g3 = ring3.convert(g_emb)
    mul_map = {nm: ring3.convert(group.mul[i]) for i, nm in enumerate(group.coords)}
    shift = {nm: ring3.var(nm + "p") for nm in group.coords}
    shift.update({nm: ring3.convert(psis[j]) for j, nm in enumerate(labels)})
    diff = g3.substitute(mul_map, ring3) - g3.substitute(shift, ring3) - g3
    if red3 is not None:
        diff = red3.nf(diff, budget)
    if not diff.is_zero():
        raise ValueError("embedded cocycle fails the cocycle law")

    results: list[Poly] = []
    for idx, f in enumerate(a):
        dtot = f.degree() + e
        rhs = nf(mixed.convert(f) * g_emb)
        ker = _Kernel(p)
        for mono in monomials_of_degree(xring, dtot):
            mf = xring.mono_poly(mono.key)
            col = nf(mf.substitute(tmap, mixed) - mixed.convert(mf))
            ker.add(dict(col.t), mono.key)
        before = len(ker.kernel)
        ker.add(dict(rhs.t), -1)
        sol = None
        if len(ker.kernel) > before:
            hist = ker.kernel[-1]
            lam = hist.get(-1, 0)
            if lam:
                ilam = inv_mod(lam, p)
                sol = xring.from_terms(
                    {k: -v * ilam for k, v in hist.items() if k != -1}
                )
        if sol is None:
            raise ValueError(
                f"annihilator {idx + 1} does not annihilate the cocycle: "
                f"no witness of degree {dtot}"
            )
        results.append(sol)

    b1, b2, b3 = results
    a1, a2, a3 = a
    u = (a1 * b2 - a2 * b1, a1 * b3 - a3 * b1, a2 * b3 - a3 * b2)
    relation = u[2] * a1 - u[1] * a2 + u[0] * a3
    return HauptsatzWitness(
        b=(b1, b2, b3),
        u=u,
        u_degrees=tuple(f.degree() for f in u),
        relation_ok=relation.is_zero(),
        cocycle_degree=e,
    )
