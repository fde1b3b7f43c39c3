"""Linear algebraic groups as data: coordinates, defining ideal, and the
group operations (multiplication, inversion, identity) as polynomial maps.

Built-ins: SL2, GL2, SO2_p2 (characteristic 2 only), Torus, AdditiveFp.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .polyalg import Poly, Ring
from .groebner import Reducer, buchberger

__all__ = [
    "GroupSpec",
    "GroupLawReport",
    "builtin_group",
    "validate_group",
    "enumerate_points",
    "BUILTIN_GROUP_NAMES",
]

BUILTIN_GROUP_NAMES = ("SL2", "GL2", "SO2_p2", "Torus", "AdditiveFp")

MAX_ENUM_COORDS = 6


class GroupSpec:
    """An affine algebraic group over GF(p).

    ``mul`` gives the coordinates of a product στ as polynomials in the
    doubled ring (σ coordinates first, τ coordinates suffixed with "p");
    ``inv`` gives the coordinates of σ⁻¹ as polynomials in the coordinates
    of σ.  Instances are immutable; derived data (Groebner bases of the
    defining ideal, doubled rings) is cached lazily.
    """

    __slots__ = (
        "name", "p", "coords", "ring", "ideal", "mul", "inv", "identity",
        "torus_embed", "natural_matrix", "natural_labels", "natural_weights",
        "_gb", "_reducer", "_ring2", "_gb2", "_reducer2",
    )

    def __init__(
        self,
        name: str,
        p: int,
        coords: Sequence[str],
        ideal_texts: Sequence[str],
        mul_texts: Sequence[str],
        inv_texts: Sequence[str],
        identity: Sequence[int],
        torus_embed_texts: Sequence[str] | None,
        natural_rows: Sequence[Sequence[str]],
        natural_labels: Sequence[str],
        natural_weights: Sequence[int] | None,
    ):
        self.name = name
        self.p = p
        self.coords = tuple(coords)
        self.ring = Ring(p, self.coords)
        self.ideal = tuple(self.ring.parse(t) for t in ideal_texts)
        ring2 = Ring(p, self.coords + tuple(c + "p" for c in self.coords))
        self.mul = tuple(ring2.parse(t) for t in mul_texts)
        self.inv = tuple(self.ring.parse(t) for t in inv_texts)
        self.identity = tuple(v % p for v in identity)
        if torus_embed_texts is None:
            self.torus_embed = None
        else:
            tring = Ring(p, ("a", "ai"))
            self.torus_embed = tuple(tring.parse(t) for t in torus_embed_texts)
        self.natural_matrix = tuple(
            tuple(self.ring.parse(t) for t in row) for row in natural_rows
        )
        self.natural_labels = tuple(natural_labels)
        self.natural_weights = (
            tuple(natural_weights) if natural_weights is not None else None
        )
        self._gb = None
        self._reducer = None
        self._ring2 = ring2
        self._gb2 = None
        self._reducer2 = None

    @property
    def r(self) -> int:
        return len(self.coords)

    # -- cached derived data --

    @property
    def gb(self) -> list[Poly]:
        """Reduced grevlex Groebner basis of the defining ideal."""
        if self._gb is None:
            self._gb = buchberger(self.ideal)
        return self._gb

    @property
    def reducer(self) -> Reducer | None:
        if self._reducer is None and self.gb:
            self._reducer = Reducer(self.gb)
        return self._reducer

    @property
    def ring2(self) -> Ring:
        """The doubled coordinate ring (σ coordinates then τ coordinates)."""
        return self._ring2

    @property
    def gb2(self) -> list[Poly]:
        """Basis of the defining relations in both coordinate copies."""
        if self._gb2 is None:
            r2 = self._ring2
            gens = [r2.convert(g) for g in self.ideal]
            remap = {c: r2.var(c + "p") for c in self.coords}
            gens += [r2.convert(g).substitute(remap, r2) for g in self.ideal]
            self._gb2 = buchberger(gens)
        return self._gb2

    @property
    def reducer2(self) -> Reducer | None:
        if self._reducer2 is None and self.gb2:
            self._reducer2 = Reducer(self.gb2)
        return self._reducer2

    # -- helpers --

    def nf(self, f: Poly) -> Poly:
        """Normal form modulo the defining ideal."""
        red = self.reducer
        return red.nf(f) if red is not None else f

    def nf2(self, f: Poly) -> Poly:
        """Normal form modulo the ideal in both coordinate copies."""
        red = self.reducer2
        return red.nf(f) if red is not None else f

    def on_variety(self, point: Sequence[int]) -> bool:
        vals = dict(zip(self.coords, point))
        return all(g.evaluate(vals) == 0 for g in self.ideal)

    def multiply_points(self, s: Sequence[int], t: Sequence[int]) -> tuple[int, ...]:
        vals = dict(zip(self.coords, s))
        vals.update({c + "p": v for c, v in zip(self.coords, t)})
        return tuple(f.evaluate(vals) for f in self.mul)

    def invert_point(self, s: Sequence[int]) -> tuple[int, ...]:
        vals = dict(zip(self.coords, s))
        return tuple(f.evaluate(vals) for f in self.inv)

    def __repr__(self):
        return f"GroupSpec({self.name}, p={self.p})"


def builtin_group(name: str, p: int) -> GroupSpec:
    """One of the built-in groups: SL2, GL2, SO2_p2, Torus, AdditiveFp."""
    if name == "SL2" or name == "SO2_p2":
        if name == "SO2_p2" and p != 2:
            raise ValueError("SO2_p2 is only defined in characteristic 2")
        ideal = ["a*d - b*c - 1"]
        if name == "SO2_p2":
            ideal += ["a*b", "c*d"]
        return GroupSpec(
            name,
            p,
            ("a", "b", "c", "d"),
            ideal,
            (
                "a*ap + b*cp",
                "a*bp + b*dp",
                "c*ap + d*cp",
                "c*bp + d*dp",
            ),
            ("d", "-b", "-c", "a"),
            (1, 0, 0, 1),
            ("a", "0", "0", "ai"),
            (("a", "b"), ("c", "d")),
            ("X", "Y"),
            (1, -1),
        )
    if name == "GL2":
        return GroupSpec(
            name,
            p,
            ("a", "b", "c", "d", "e"),
            ["a*d*e - b*c*e - 1"],
            (
                "a*ap + b*cp",
                "a*bp + b*dp",
                "c*ap + d*cp",
                "c*bp + d*dp",
                "e*ep",
            ),
            ("e*d", "-e*b", "-e*c", "e*a", "a*d - b*c"),
            (1, 0, 0, 1, 1),
            ("a", "0", "0", "ai", "1"),
            (("a", "b"), ("c", "d")),
            ("X", "Y"),
            (1, -1),
        )
    if name == "Torus":
        return GroupSpec(
            name,
            p,
            ("a", "ai"),
            ["a*ai - 1"],
            ("a*ap", "ai*aip"),
            ("ai", "a"),
            (1, 1),
            ("a", "ai"),
            (("a", "0"), ("0", "ai")),
            ("X", "Y"),
            (1, -1),
        )
    if name == "AdditiveFp":
        return GroupSpec(
            name,
            p,
            ("s",),
            [f"s^{p} - s"],
            ("s + sp",),
            ("-s",),
            (0,),
            None,
            (("1", "s"), ("0", "1")),
            ("X", "Y"),
            None,
        )
    raise ValueError(f"unknown group {name!r}")


@dataclass(frozen=True)
class GroupLawReport:
    identity_law: bool
    inverse_law: bool
    closure_mul: bool
    closure_inv: bool
    failures: tuple[str, ...] = field(default=())

    @property
    def passed(self) -> bool:
        return (
            self.identity_law
            and self.inverse_law
            and self.closure_mul
            and self.closure_inv
        )


def validate_group(g: GroupSpec) -> GroupLawReport:
    """Check the group laws as polynomial identities modulo the defining ideal."""
    failures: list[str] = []
    ring = g.ring
    r2 = g.ring2

    # identity point lies on the variety, and mul(σ, e) ≡ σ ≡ mul(e, σ)
    identity_ok = g.on_variety(g.identity)
    if not identity_ok:
        failures.append("identity point violates the defining ideal")
    id_right = {c + "p": ring.const(v) for c, v in zip(g.coords, g.identity)}
    id_left = {c: ring.const(v) for c, v in zip(g.coords, g.identity)}
    id_left.update({c + "p": ring.var(c) for c in g.coords})
    for i, c in enumerate(g.coords):
        fr = g.mul[i].substitute(id_right, ring)
        fl = g.mul[i].substitute(id_left, ring)
        want = ring.var(c)
        if g.nf(fr - want) or g.nf(fl - want):
            identity_ok = False
            failures.append(f"identity law fails in coordinate {c}")

    # mul(σ, inv(σ)) ≡ identity and mul(inv(σ), σ) ≡ identity
    inverse_ok = True
    inv_right = {c + "p": g.inv[i] for i, c in enumerate(g.coords)}
    inv_left = {c: g.inv[i] for i, c in enumerate(g.coords)}
    inv_left.update({c + "p": ring.var(c) for c in g.coords})
    for i, c in enumerate(g.coords):
        fr = g.mul[i].substitute(inv_right, ring)
        fl = g.mul[i].substitute(inv_left, ring)
        want = ring.const(g.identity[i])
        if g.nf(fr - want) or g.nf(fl - want):
            inverse_ok = False
            failures.append(f"inverse law fails in coordinate {c}")

    # defining relations hold at the product coordinates, modulo both copies
    closure_mul_ok = True
    mul_map = {c: g.mul[i] for i, c in enumerate(g.coords)}
    for rel in g.ideal:
        composed = r2.convert(rel).substitute(mul_map, r2)
        if g.nf2(composed):
            closure_mul_ok = False
            failures.append(f"product leaves the variety: relation {rel}")

    # defining relations hold at the inverse coordinates, modulo the ideal
    closure_inv_ok = True
    inv_map = {c: g.inv[i] for i, c in enumerate(g.coords)}
    for rel in g.ideal:
        composed = rel.substitute(inv_map, ring)
        if g.nf(composed):
            closure_inv_ok = False
            failures.append(f"inverse leaves the variety: relation {rel}")

    return GroupLawReport(
        identity_law=identity_ok,
        inverse_law=inverse_ok,
        closure_mul=closure_mul_ok,
        closure_inv=closure_inv_ok,
        failures=tuple(failures),
    )


def enumerate_points(g: GroupSpec, p: int | None = None) -> list[tuple[int, ...]]:
    """All GF(p)-rational points of the group, by exhaustive search."""
    if p is None:
        p = g.p
    if p != g.p:
        raise ValueError("point enumeration must use the group's own prime")
    if g.r > MAX_ENUM_COORDS:
        raise ValueError(f"too many coordinates to enumerate (r={g.r} > {MAX_ENUM_COORDS})")
    pts = []
    for cand in itertools.product(range(p), repeat=g.r):
        if g.on_variety(cand):
            pts.append(cand)
    return pts
