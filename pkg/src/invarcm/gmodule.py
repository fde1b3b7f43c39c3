"""Group representations and the module construction algebra.

A representation assigns to the generic group element an n x n matrix of
polynomials in the group coordinates, column convention:

    sigma . e_j = sum_i A[i][j](sigma) e_i.

Starting from the group's natural module, new modules are described by a
small expression language::

    natural              the defining module
    frobenius k          entrywise p^k-th powers of the natural matrix
    det                  1-dimensional determinant module (GL2 only)
    dual(e)              transpose evaluated at the inverse coordinates
    sum(e1, ..., em)     block-diagonal direct sum
    tensor(e1, e2)       Kronecker product, row-major basis order
    sym(k, e)            k-th symmetric power, canonical monomial basis
    basis(e; S)          change of basis; columns of S are the new basis
    sub(e, k)            leading k-dimensional submodule
    quot(e, k)           quotient by the leading k-dimensional submodule
    glue(e1, e2, k)      amalgamation along a shared leading submodule

Matrices are stored without reduction; comparisons must reduce entrywise
modulo the defining ideal of the group (``reduced_matrix`` helps).
"""

from __future__ import annotations

import re
import string
from dataclasses import dataclass
from typing import Sequence

from .algroup import GroupSpec
from .groebner import Reducer, buchberger
from .polyalg import FieldElement, Poly, Ring, inv_mod, monomials_of_degree

__all__ = [
    "Natural", "Frobenius", "Det", "Dual", "Sum", "Tensor", "Sym",
    "ChangeBasis", "Submodule", "Quotient", "Glue", "ConstructionExpr",
    "Representation", "RepresentationReport", "parse_expr", "construct",
    "validate_representation", "extract_weights", "evaluate_at",
    "reduced_matrix",
]


# -- abstract syntax ---------------------------------------------------------


@dataclass(frozen=True)
class Natural:
    pass


@dataclass(frozen=True)
class Frobenius:
    k: int


@dataclass(frozen=True)
class Det:
    pass


@dataclass(frozen=True)
class Dual:
    inner: "ConstructionExpr"


@dataclass(frozen=True)
class Sum:
    parts: tuple["ConstructionExpr", ...]


@dataclass(frozen=True)
class Tensor:
    left: "ConstructionExpr"
    right: "ConstructionExpr"


@dataclass(frozen=True)
class Sym:
    k: int
    inner: "ConstructionExpr"


@dataclass(frozen=True)
class ChangeBasis:
    inner: "ConstructionExpr"
    rows: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class Submodule:
    inner: "ConstructionExpr"
    first_k: int


@dataclass(frozen=True)
class Quotient:
    inner: "ConstructionExpr"
    first_k: int


@dataclass(frozen=True)
class Glue:
    left: "ConstructionExpr"
    right: "ConstructionExpr"
    k: int


ConstructionExpr = (
    Natural | Frobenius | Det | Dual | Sum | Tensor | Sym
    | ChangeBasis | Submodule | Quotient | Glue
)


# -- parser for the textual form ---------------------------------------------

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_INT_RE = re.compile(r"-?\d+")


def _tokenize_expr(text: str) -> list[tuple[str, str]]:
    toks: list[tuple[str, str]] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "(),;":
            toks.append(("punct", ch))
            i += 1
            continue
        m = _NAME_RE.match(text, i)
        if m:
            toks.append(("name", m.group()))
            i = m.end()
            continue
        m = _INT_RE.match(text, i)
        if m:
            toks.append(("int", m.group()))
            i = m.end()
            continue
        raise ValueError(f"unexpected character {ch!r} in module expression")
    return toks


class _Parser:
    def __init__(self, toks: list[tuple[str, str]]):
        self.toks = toks
        self.i = 0

    def peek(self) -> tuple[str, str]:
        return self.toks[self.i] if self.i < len(self.toks) else ("end", "")

    def take(self, kind: str, value: str | None = None) -> str:
        tok = self.peek()
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value if value is not None else kind
            raise ValueError(
                f"expected {want!r} in module expression, got {tok[1] or 'end of input'!r}"
            )
        self.i += 1
        return tok[1]

    def expr(self) -> ConstructionExpr:
        name = self.take("name")
        if name == "natural":
            return Natural()
        if name == "det":
            return Det()
        if name == "frobenius":
            return Frobenius(int(self.take("int")))
        if name == "dual":
            self.take("punct", "(")
            inner = self.expr()
            self.take("punct", ")")
            return Dual(inner)
        if name == "sum":
            self.take("punct", "(")
            parts = [self.expr()]
            while self.peek() == ("punct", ","):
                self.take("punct", ",")
                parts.append(self.expr())
            self.take("punct", ")")
            return Sum(tuple(parts))
        if name == "tensor":
            self.take("punct", "(")
            left = self.expr()
            self.take("punct", ",")
            right = self.expr()
            self.take("punct", ")")
            return Tensor(left, right)
        if name == "sym":
            self.take("punct", "(")
            k = int(self.take("int"))
            self.take("punct", ",")
            inner = self.expr()
            self.take("punct", ")")
            return Sym(k, inner)
        if name == "basis":
            self.take("punct", "(")
            inner = self.expr()
            self.take("punct", ";")
            rows = self._matrix()
            self.take("punct", ")")
            return ChangeBasis(inner, rows)
        if name in ("sub", "quot"):
            self.take("punct", "(")
            inner = self.expr()
            self.take("punct", ",")
            k = int(self.take("int"))
            self.take("punct", ")")
            return Submodule(inner, k) if name == "sub" else Quotient(inner, k)
        if name == "glue":
            self.take("punct", "(")
            left = self.expr()
            self.take("punct", ",")
            right = self.expr()
            self.take("punct", ",")
            k = int(self.take("int"))
            self.take("punct", ")")
            return Glue(left, right, k)
        raise ValueError(f"unknown module constructor {name!r}")

    def _matrix(self) -> tuple[tuple[int, ...], ...]:
        rows = [self._row()]
        while self.peek() == ("punct", ";"):
            self.take("punct", ";")
            rows.append(self._row())
        return tuple(rows)

    def _row(self) -> tuple[int, ...]:
        entries = [int(self.take("int"))]
        while self.peek() == ("punct", ","):
            self.take("punct", ",")
            entries.append(int(self.take("int")))
        return tuple(entries)


def parse_expr(text: str) -> ConstructionExpr:
    """Parse the textual module-construction language."""
    parser = _Parser(_tokenize_expr(text))
    node = parser.expr()
    if parser.i != len(parser.toks):
        raise ValueError("trailing input after module expression")
    return node


# -- representations ---------------------------------------------------------


@dataclass(frozen=True)
class Representation:
    """A matrix representation of an algebraic group.

    ``matrix[i][j]`` is the coefficient of e_i in sigma . e_j, a polynomial
    in the group coordinates.  ``weights`` lists the torus weight of each
    basis vector when derivable, else None.
    """

    group: GroupSpec
    n: int
    matrix: tuple[tuple[Poly, ...], ...]
    basis_labels: tuple[str, ...]
    weights: tuple[int, ...] | None


@dataclass(frozen=True)
class RepresentationReport:
    identity_ok: bool
    homomorphism_ok: bool
    weights_ok: bool | None
    failures: tuple[str, ...]

    @property
    def passed(self) -> bool:
        return self.identity_ok and self.homomorphism_ok and self.weights_ok is not False


# -- matrix helpers ----------------------------------------------------------


def _dual_matrix(group: GroupSpec, mat) -> tuple[tuple[Poly, ...], ...]:
    inv_map = dict(zip(group.coords, group.inv))
    n = len(mat)
    at_inv = [
        [mat[i][j].substitute(inv_map, group.ring) for j in range(n)]
        for i in range(n)
    ]
    return tuple(tuple(at_inv[j][i] for j in range(n)) for i in range(n))


def _kron(a, b) -> tuple[tuple[Poly, ...], ...]:
    rows = []
    for arow in a:
        for brow in b:
            rows.append(tuple(x * y for x in arow for y in brow))
    return tuple(rows)


def _invert_field_matrix(rows, p: int) -> tuple[tuple[int, ...], ...]:
    n = len(rows)
    aug = [
        [rows[i][j] % p for j in range(n)] + [1 if j == i else 0 for j in range(n)]
        for i in range(n)
    ]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise ValueError("basis matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        scale = inv_mod(aug[col][col], p)
        aug[col] = [v * scale % p for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [(v - f * w) % p for v, w in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


def _permutation_map(rows, p: int) -> list[int] | None:
    """Per column, the row index of its single 1, for permutation matrices."""
    n = len(rows)
    perm = []
    for j in range(n):
        hits = [i for i in range(n) if rows[i][j] % p]
        if len(hits) != 1 or rows[hits[0]][j] % p != 1:
            return None
        perm.append(hits[0])
    return perm if len(set(perm)) == n else None


def _fresh_labels(n: int) -> tuple[str, ...]:
    letters = string.ascii_lowercase
    out = []
    for i in range(n):
        if i < 26:
            out.append("u" + letters[i])
        else:
            out.append("u" + letters[i // 26 - 1] + letters[i % 26])
    return tuple(out)


def _scaled_combination(ring: Ring, polys, coeffs) -> Poly:
    acc = ring.zero
    for f, c in zip(polys, coeffs):
        if c:
            acc = acc + f.scale(c)
    return acc


def _change_basis_matrix(group: GroupSpec, mat, rows) -> tuple[tuple[Poly, ...], ...]:
    ring = group.ring
    p = ring.p
    n = len(mat)
    if len(rows) != n or any(len(r) != n for r in rows):
        raise ValueError(f"basis matrix must be {n}x{n}")
    sinv = _invert_field_matrix(rows, p)
    # A . S, then Sinv . (A . S); S has scalar entries
    asmat = [
        [_scaled_combination(ring, mat[i], [rows[k][j] % p for k in range(n)])
         for j in range(n)]
        for i in range(n)
    ]
    return tuple(
        tuple(
            _scaled_combination(ring, [asmat[k][j] for k in range(n)], sinv[i])
            for j in range(n)
        )
        for i in range(n)
    )


def _basis_weights(weights, rows, p: int) -> tuple[int, ...] | None:
    if weights is None:
        return None
    out = []
    for j in range(len(rows)):
        seen = {weights[i] for i in range(len(rows)) if rows[i][j] % p}
        if len(seen) != 1:
            return None
        out.append(seen.pop())
    return tuple(out)


def _check_invariant_block(group: GroupSpec, mat, k: int) -> None:
    n = len(mat)
    for i in range(k, n):
        for j in range(k):
            if not group.nf(mat[i][j]).is_zero():
                raise ValueError(
                    f"first {k} basis vectors do not span an invariant subspace"
                )


def _sym_power(group: GroupSpec, mat, labels, weights, k: int):
    if k < 1:
        raise ValueError("symmetric power degree must be >= 1")
    ring = group.ring
    n = len(mat)
    r = len(group.coords)
    vnames = tuple(f"v{i}" for i in range(n))
    mixed = Ring(ring.p, group.coords + vnames)
    vpolys = [mixed.var(nm) for nm in vnames]
    images = []
    for j in range(n):
        acc = mixed.zero
        for i in range(n):
            if not mat[i][j].is_zero():
                acc = acc + mixed.convert(mat[i][j]) * vpolys[i]
        images.append(acc)
    monos = monomials_of_degree(mixed, k, vnames)
    row_of = {m.key: idx for idx, m in enumerate(monos)}
    dim = len(monos)
    out = [[ring.zero] * dim for _ in range(dim)]
    for j, mono in enumerate(monos):
        exps = mixed.unpack(mono.key)
        prod = mixed.one
        for i in range(n):
            if exps[r + i]:
                prod = prod * images[i] ** exps[r + i]
        buckets: dict[int, dict[int, int]] = {}
        for key, c in prod.t.items():
            full = mixed.unpack(key)
            vkey = mixed.pack((0,) * r + full[r:])
            buckets.setdefault(vkey, {})[ring.pack(full[:r])] = c
        for vkey, terms in buckets.items():
            out[row_of[vkey]][j] = ring.from_terms(terms)
    out_labels = []
    out_weights: list[int] | None = [] if weights is not None else None
    for mono in monos:
        exps = mixed.unpack(mono.key)[r:]
        out_labels.append("".join(labels[i] * exps[i] for i in range(n)))
        if out_weights is not None:
            out_weights.append(sum(w * e for w, e in zip(weights, exps)))
    return (
        tuple(tuple(row) for row in out),
        tuple(out_labels),
        tuple(out_weights) if out_weights is not None else None,
    )


# -- construction ------------------------------------------------------------


def _build(group: GroupSpec, expr: ConstructionExpr):
    ring = group.ring
    if isinstance(expr, Natural):
        return group.natural_matrix, group.natural_labels, group.natural_weights
    if isinstance(expr, Frobenius):
        if expr.k < 1:
            raise ValueError("frobenius twist exponent must be >= 1")
        q = group.p ** expr.k
        mat = tuple(tuple(e ** q for e in row) for row in group.natural_matrix)
        labels = tuple(l * q for l in group.natural_labels)
        w = group.natural_weights
        return mat, labels, tuple(wi * q for wi in w) if w is not None else None
    if isinstance(expr, Det):
        if group.name != "GL2":
            raise ValueError("det module requires the group GL2")
        # e is 1 on the embedded torus, hence weight 0
        return ((ring.var("e"),),), ("E",), (0,)
    if isinstance(expr, Dual):
        mat, labels, w = _build(group, expr.inner)
        return (
            _dual_matrix(group, mat),
            tuple(l + "s" for l in labels),
            tuple(-x for x in w) if w is not None else None,
        )
    if isinstance(expr, Sum):
        built = [_build(group, part) for part in expr.parts]
        n = sum(len(m) for m, _, _ in built)
        rows = []
        labels: list[str] = []
        weights: list[int] = []
        have_weights = True
        offset = 0
        for m, l, w in built:
            k = len(m)
            for i in range(k):
                rows.append(
                    (ring.zero,) * offset + tuple(m[i]) + (ring.zero,) * (n - offset - k)
                )
            labels.extend(l)
            if w is None:
                have_weights = False
            else:
                weights.extend(w)
            offset += k
        return (
            tuple(rows),
            tuple(labels),
            tuple(weights) if have_weights else None,
        )
    if isinstance(expr, Tensor):
        m1, l1, w1 = _build(group, expr.left)
        m2, l2, w2 = _build(group, expr.right)
        w = None
        if w1 is not None and w2 is not None:
            w = tuple(x + y for x in w1 for y in w2)
        return _kron(m1, m2), tuple(a + b for a in l1 for b in l2), w
    if isinstance(expr, Sym):
        m, l, w = _build(group, expr.inner)
        return _sym_power(group, m, l, w, expr.k)
    if isinstance(expr, ChangeBasis):
        m, l, w = _build(group, expr.inner)
        mat = _change_basis_matrix(group, m, expr.rows)
        perm = _permutation_map(expr.rows, ring.p)
        labels = tuple(l[perm[j]] for j in range(len(m))) if perm else _fresh_labels(len(m))
        return mat, labels, _basis_weights(w, expr.rows, ring.p)
    if isinstance(expr, (Submodule, Quotient)):
        m, l, w = _build(group, expr.inner)
        n = len(m)
        k = expr.first_k
        if isinstance(expr, Submodule) and not 0 < k <= n:
            raise ValueError(f"submodule size must be in 1..{n}")
        if isinstance(expr, Quotient) and not 0 <= k < n:
            raise ValueError(f"quotient must remove 0..{n - 1} leading vectors")
        _check_invariant_block(group, m, k)
        if isinstance(expr, Submodule):
            mat = tuple(tuple(m[i][j] for j in range(k)) for i in range(k))
            return mat, l[:k], w[:k] if w is not None else None
        mat = tuple(tuple(m[i][j] for j in range(k, n)) for i in range(k, n))
        return mat, l[k:], w[k:] if w is not None else None
    if isinstance(expr, Glue):
        m1, l1, w1 = _build(group, expr.left)
        m2, l2, w2 = _build(group, expr.right)
        k = expr.k
        n1, n2 = len(m1), len(m2)
        if not 0 < k <= min(n1, n2):
            raise ValueError("glue needs 1 <= k <= both dimensions")
        _check_invariant_block(group, m1, k)
        _check_invariant_block(group, m2, k)
        for i in range(k):
            for j in range(k):
                if m1[i][j] != m2[i][j]:
                    raise ValueError(
                        "glue requires identical leading blocks in both summands"
                    )
        z = ring.zero
        rows = []
        for i in range(k):
            rows.append(tuple(m1[i][:k]) + tuple(m1[i][k:]) + tuple(m2[i][k:]))
        for i in range(k, n1):
            rows.append((z,) * k + tuple(m1[i][k:]) + (z,) * (n2 - k))
        for i in range(k, n2):
            rows.append((z,) * k + (z,) * (n1 - k) + tuple(m2[i][k:]))
        labels = l1 + l2[k:]
        w = None
        if w1 is not None and w2 is not None and w1[:k] == w2[:k]:
            w = w1 + w2[k:]
        return tuple(rows), labels, w
    raise TypeError(f"not a construction expression: {expr!r}")


def _dedup_labels(labels: Sequence[str]) -> tuple[str, ...]:
    counts: dict[str, int] = {}
    for l in labels:
        counts[l] = counts.get(l, 0) + 1
    seen: dict[str, int] = {}
    out = []
    for l in labels:
        if counts[l] == 1:
            out.append(l)
        else:
            seen[l] = seen.get(l, 0) + 1
            out.append(f"{l}{seen[l]}")
    if len(set(out)) != len(out):
        raise ValueError("basis labels collide after renaming")
    return tuple(out)


def construct(group: GroupSpec, expr: ConstructionExpr | str) -> Representation:
    """Build the representation described by a construction expression."""
    if isinstance(expr, str):
        expr = parse_expr(expr)
    mat, labels, weights = _build(group, expr)
    return Representation(group, len(mat), mat, _dedup_labels(labels), weights)


# -- checks and evaluation ---------------------------------------------------


def validate_representation(rep: Representation) -> RepresentationReport:
    """Check the identity, homomorphism and weight claims of a representation.

    The homomorphism law A(S)A(T) = A(ST) is verified symbolically in two
    sets of coordinates, modulo the relations of both copies.
    """
    g = rep.group
    n = rep.n
    failures: list[str] = []
    at_identity = dict(zip(g.coords, g.identity))
    identity_ok = True
    for i in range(n):
        for j in range(n):
            if rep.matrix[i][j].evaluate(at_identity) != (1 if i == j else 0):
                identity_ok = False
                failures.append(f"identity: entry ({i},{j})")
    r2 = g.ring2
    tau_map = {c: r2.var(c + "p") for c in g.coords}
    mul_map = dict(zip(g.coords, g.mul))
    a_s = [[r2.convert(rep.matrix[i][j]) for j in range(n)] for i in range(n)]
    a_t = [[a_s[i][j].substitute(tau_map, r2) for j in range(n)] for i in range(n)]
    homomorphism_ok = True
    for i in range(n):
        for j in range(n):
            acc = r2.zero
            for k in range(n):
                acc = acc + a_s[i][k] * a_t[k][j]
            composed = rep.matrix[i][j].substitute(mul_map, r2)
            if not g.nf2(acc - composed).is_zero():
                homomorphism_ok = False
                failures.append(f"homomorphism: entry ({i},{j})")
    weights_ok: bool | None = None
    if rep.weights is not None and g.torus_embed is not None:
        try:
            found = extract_weights(rep)
            weights_ok = found == rep.weights
            if not weights_ok:
                failures.append(f"weights: claimed {rep.weights}, torus gives {found}")
        except ValueError as exc:
            weights_ok = False
            failures.append(f"weights: {exc}")
    return RepresentationReport(identity_ok, homomorphism_ok, weights_ok, tuple(failures))


_TORUS_REDUCERS: dict[int, Reducer] = {}


def _torus_reducer(p: int) -> Reducer:
    red = _TORUS_REDUCERS.get(p)
    if red is None:
        ring = Ring(p, ("a", "ai"))
        red = Reducer(buchberger([ring.parse("a*ai - 1")]))
        _TORUS_REDUCERS[p] = red
    return red


def extract_weights(rep: Representation) -> tuple[int, ...]:
    """Torus weights of the basis vectors, via the embedded one-parameter torus.

    Requires the restricted matrix to be diagonal with monomial entries; a
    non-diagonal restriction raises, since picking a diagonalizing basis is
    left to the caller.
    """
    g = rep.group
    if g.torus_embed is None:
        raise ValueError(f"group {g.name} has no torus embedding")
    tring = g.torus_embed[0].ring
    embed_map = dict(zip(g.coords, g.torus_embed))
    red = _torus_reducer(g.p)
    weights = []
    for i in range(rep.n):
        for j in range(rep.n):
            entry = red.nf(rep.matrix[i][j].substitute(embed_map, tring))
            if i != j:
                if not entry.is_zero():
                    raise ValueError(
                        "torus restriction is not diagonal; apply a change of "
                        "basis that diagonalizes the torus action first"
                    )
                continue
            terms = list(entry.t.items())
            if len(terms) != 1 or terms[0][1] % tring.p != 1:
                raise ValueError(
                    "torus restriction is not diagonal with monomial entries; "
                    "apply a change of basis that diagonalizes the torus action first"
                )
            ea, eai = tring.unpack(terms[0][0])
            weights.append(ea - eai)
    return tuple(weights)


def evaluate_at(
    rep: Representation, point: Sequence[int]
) -> tuple[tuple[FieldElement, ...], ...]:
    """Evaluate the representation matrix at a group element."""
    g = rep.group
    if len(point) != len(g.coords):
        raise ValueError(f"point must have {len(g.coords)} coordinates")
    if not g.on_variety(point):
        raise ValueError("point does not satisfy the group relations")
    vals = dict(zip(g.coords, point))
    return tuple(
        tuple(FieldElement(g.p, e.evaluate(vals)) for e in row) for row in rep.matrix
    )


def reduced_matrix(rep: Representation) -> tuple[tuple[Poly, ...], ...]:
    """Entrywise normal form of the matrix modulo the defining ideal."""
    g = rep.group
    return tuple(tuple(g.nf(e) for e in row) for row in rep.matrix)
