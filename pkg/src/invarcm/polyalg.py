"""Sparse polynomial arithmetic over prime fields GF(p).

Monomials are packed into Python ints: bit-fields ``[deg | e_{n-1} | ... | e_0]``
with one guard bit per field.  Multiplying monomials is integer addition,
divisibility is a guard-bit subtraction test, and graded-reverse-lex comparison
is integer comparison of a derived key.  Polynomials are dicts mapping packed
monomials to coefficients in ``0..p-1``.

Prime fields only; the modulus is carried per element / per ring.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

__all__ = [
    "FieldElement",
    "Ring",
    "Poly",
    "Monomial",
    "MonomialOrder",
    "grevlex",
    "lex",
    "elimination_order",
    "monomials_of_degree",
    "TruncSeries",
    "series_estimate",
    "BudgetExceeded",
    "Budget",
]

_SMALL_PRIMES = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31}

EXP_BITS = 7            # max exponent 127 per variable
FIELD_BITS = EXP_BITS + 1
EXP_CAP = (1 << EXP_BITS) - 1
DEG_BITS = 15
DEG_FIELD_BITS = DEG_BITS + 1


class BudgetExceeded(RuntimeError):
    """Raised when a computation exceeds its step budget."""


class Budget:
    """A shared step counter.  ``tick`` raises BudgetExceeded past the limit."""

    __slots__ = ("limit", "used")

    def __init__(self, limit: int):
        self.limit = int(limit)
        self.used = 0

    def tick(self, n: int = 1) -> None:
        self.used += n
        if self.used > self.limit:
            raise BudgetExceeded(
                f"step budget exceeded ({self.used} > {self.limit})"
            )


def _check_prime(p: int) -> int:
    if p in _SMALL_PRIMES:
        return p
    if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
        raise ValueError(f"modulus must be prime, got {p}")
    return p


class FieldElement:
    """An element of GF(p).  Arithmetic checks that moduli match."""

    __slots__ = ("p", "v")

    def __init__(self, p: int, v: int):
        self.p = _check_prime(p)
        self.v = v % p

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.p != self.p:
                raise ValueError("mixed moduli")
            return other
        if isinstance(other, int):
            return FieldElement(self.p, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else FieldElement(self.p, self.v + o.v)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else FieldElement(self.p, self.v - o.v)

    def __rsub__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else FieldElement(self.p, o.v - self.v)

    def __mul__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else FieldElement(self.p, self.v * o.v)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(self.p, -self.v)

    def inverse(self) -> "FieldElement":
        if self.v == 0:
            raise ZeroDivisionError("inverse of 0 in GF(p)")
        return FieldElement(self.p, pow(self.v, self.p - 2, self.p))

    def __truediv__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else self * o.inverse()

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.p == other.p and self.v == other.v
        if isinstance(other, int):
            return self.v == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.v))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return f"GF({self.p})({self.v})"


def inv_mod(v: int, p: int) -> int:
    """Inverse of v in GF(p) as a plain int."""
    return pow(v, p - 2, p)


class Ring:
    """A polynomial ring GF(p)[names] with packed-int monomials."""

    __slots__ = (
        "p", "names", "n", "index", "_shifts", "_deg_shift",
        "_guard_mask", "_low_mask", "_all_cap", "_field_mask",
    )

    def __init__(self, p: int, names: Sequence[str]):
        self.p = _check_prime(p)
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable names")
        for nm in self.names:
            if not nm.isidentifier():
                raise ValueError(f"bad variable name {nm!r}")
        self.n = len(self.names)
        self.index = {nm: i for i, nm in enumerate(self.names)}
        self._shifts = tuple(FIELD_BITS * i for i in range(self.n))
        self._deg_shift = FIELD_BITS * self.n
        guard = 0
        for s in self._shifts:
            guard |= (1 << (s + EXP_BITS))
        guard |= 1 << (self._deg_shift + DEG_BITS)
        self._guard_mask = guard
        self._low_mask = (1 << self._deg_shift) - 1
        cap = 0
        for s in self._shifts:
            cap |= EXP_CAP << s
        self._all_cap = cap
        self._field_mask = (1 << FIELD_BITS) - 1

    # -- monomial helpers (packed int keys) --

    def pack(self, exps: Sequence[int]) -> int:
        if len(exps) != self.n:
            raise ValueError("wrong exponent count")
        key = 0
        deg = 0
        for e, s in zip(exps, self._shifts):
            if e < 0 or e > EXP_CAP:
                raise ValueError(f"exponent {e} out of range")
            key |= e << s
            deg += e
        return key | (deg << self._deg_shift)

    def unpack(self, key: int) -> tuple[int, ...]:
        fm = self._field_mask
        return tuple((key >> s) & fm for s in self._shifts)

    def mono_deg(self, key: int) -> int:
        return key >> self._deg_shift

    def mono_mul(self, a: int, b: int) -> int:
        return a + b

    def mono_divides(self, a: int, b: int) -> bool:
        """True iff monomial a divides monomial b (fieldwise a <= b)."""
        g = self._guard_mask
        return ((b | g) - a) & g == g

    def mono_div(self, b: int, a: int) -> int:
        """b / a; caller must ensure divisibility."""
        return b - a

    def mono_lcm(self, a: int, b: int) -> int:
        ea = self.unpack(a)
        eb = self.unpack(b)
        return self.pack(tuple(max(x, y) for x, y in zip(ea, eb)))

    def mono_var(self, i: int, e: int = 1) -> int:
        return (e << self._shifts[i]) | (e << self._deg_shift)

    def grevlex_key(self, key: int) -> int:
        """Integer whose natural order equals grevlex on monomials."""
        deg = key >> self._deg_shift
        return (deg << self._deg_shift) | (self._all_cap - (key & self._low_mask))

    def grlex_key(self, key: int):
        """Graded-lex sort key (used for printing)."""
        return (key >> self._deg_shift, self.unpack(key))

    def lex_key(self, key: int):
        return self.unpack(key)

    def mono_str(self, key: int) -> str:
        exps = self.unpack(key)
        parts = []
        for nm, e in zip(self.names, exps):
            if e == 1:
                parts.append(nm)
            elif e > 1:
                parts.append(f"{nm}^{e}")
        return "*".join(parts) if parts else "1"

    # -- polynomial constructors --

    @property
    def zero(self) -> "Poly":
        return Poly(self, {})

    @property
    def one(self) -> "Poly":
        return Poly(self, {0: 1})

    def const(self, c: int) -> "Poly":
        c %= self.p
        return Poly(self, {0: c} if c else {})

    def var(self, name: str) -> "Poly":
        return Poly(self, {self.mono_var(self.index[name]): 1})

    def mono_poly(self, key: int, c: int = 1) -> "Poly":
        c %= self.p
        return Poly(self, {key: c} if c else {})

    def from_terms(self, terms: dict[int, int]) -> "Poly":
        p = self.p
        return Poly(self, {k: v % p for k, v in terms.items() if v % p})

    def gens(self) -> tuple["Poly", ...]:
        return tuple(self.var(nm) for nm in self.names)

    # -- parsing --

    def parse(self, text: str) -> "Poly":
        return _parse_poly(self, text)

    def convert(self, poly: "Poly") -> "Poly":
        """Reinterpret a polynomial from another ring by variable name."""
        if poly.ring is self:
            return poly
        if poly.ring.p != self.p:
            raise ValueError("mixed moduli")
        remap = [self.index[nm] for nm in poly.ring.names if nm in self.index]
        if len(remap) != poly.ring.n:
            missing = [nm for nm in poly.ring.names if nm not in self.index]
            used = set()
            for key in poly.t:
                for i, e in enumerate(poly.ring.unpack(key)):
                    if e:
                        used.add(poly.ring.names[i])
            bad = used.intersection(missing)
            if bad:
                raise ValueError(f"variables {sorted(bad)} not in target ring")
        out: dict[int, int] = {}
        for key, c in poly.t.items():
            exps = poly.ring.unpack(key)
            tgt = [0] * self.n
            for i, e in enumerate(exps):
                if e:
                    tgt[self.index[poly.ring.names[i]]] = e
            out[self.pack(tgt)] = c
        return Poly(self, out)

    def __eq__(self, other):
        return (
            isinstance(other, Ring)
            and other.p == self.p
            and other.names == self.names
        )

    def __hash__(self):
        return hash((self.p, self.names))

    def __repr__(self):
        return f"Ring(GF({self.p}), {','.join(self.names)})"


@dataclass(frozen=True)
class Monomial:
    """A single monomial of a ring, mostly a printing/inspection helper."""

    ring: Ring
    key: int

    def exponents(self) -> tuple[int, ...]:
        return self.ring.unpack(self.key)

    def degree(self) -> int:
        return self.ring.mono_deg(self.key)

    def as_poly(self) -> "Poly":
        return self.ring.mono_poly(self.key)

    def __str__(self):
        return self.ring.mono_str(self.key)


class Poly:
    """Sparse polynomial: dict of packed monomial -> coefficient in 0..p-1."""

    __slots__ = ("ring", "t")

    def __init__(self, ring: Ring, terms: dict[int, int]):
        self.ring = ring
        self.t = terms

    # -- arithmetic --

    def __add__(self, other: "Poly") -> "Poly":
        p = self.ring.p
        out = dict(self.t)
        for k, c in other.t.items():
            v = (out.get(k, 0) + c) % p
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return Poly(self.ring, out)

    def __sub__(self, other: "Poly") -> "Poly":
        p = self.ring.p
        out = dict(self.t)
        for k, c in other.t.items():
            v = (out.get(k, 0) - c) % p
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return Poly(self.ring, out)

    def __neg__(self) -> "Poly":
        p = self.ring.p
        return Poly(self.ring, {k: p - c for k, c in self.t.items()})

    def scale(self, c: int) -> "Poly":
        p = self.ring.p
        c %= p
        if c == 0:
            return Poly(self.ring, {})
        if c == 1:
            return self
        return Poly(self.ring, {k: (v * c) % p for k, v in self.t.items()})

    def mul_mono(self, key: int, c: int = 1) -> "Poly":
        p = self.ring.p
        c %= p
        if c == 0:
            return Poly(self.ring, {})
        if c == 1:
            return Poly(self.ring, {k + key: v for k, v in self.t.items()})
        return Poly(self.ring, {k + key: (v * c) % p for k, v in self.t.items()})

    def __mul__(self, other: "Poly") -> "Poly":
        p = self.ring.p
        a, b = self.t, other.t
        if len(a) > len(b):
            a, b = b, a
        out: dict[int, int] = {}
        get = out.get
        for ka, ca in a.items():
            for kb, cb in b.items():
                k = ka + kb
                v = (get(k, 0) + ca * cb) % p
                if v:
                    out[k] = v
                else:
                    out.pop(k, None)
        return Poly(self.ring, out)

    def __pow__(self, e: int) -> "Poly":
        if e < 0:
            raise ValueError("negative power")
        result = self.ring.one
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ring == other.ring and self.t == other.t

    def __bool__(self):
        return bool(self.t)

    # -- structure --

    def is_zero(self) -> bool:
        return not self.t

    def degree(self) -> int:
        """Total degree (max over terms); -1 for the zero polynomial."""
        if not self.t:
            return -1
        ds = self.ring._deg_shift
        return max(k >> ds for k in self.t)

    def is_homogeneous(self) -> bool:
        if not self.t:
            return True
        ds = self.ring._deg_shift
        it = iter(self.t)
        d0 = next(it) >> ds
        return all(k >> ds == d0 for k in it)

    def homogeneous_part(self, d: int) -> "Poly":
        ds = self.ring._deg_shift
        return Poly(self.ring, {k: c for k, c in self.t.items() if k >> ds == d})

    def leading(self, keyfunc: Callable[[int], object] | None = None) -> tuple[int, int]:
        """(monomial key, coefficient) of the leading term (grevlex default)."""
        if not self.t:
            raise ValueError("zero polynomial has no leading term")
        kf = keyfunc or self.ring.grevlex_key
        k = max(self.t, key=kf)
        return k, self.t[k]

    def monic(self, keyfunc: Callable[[int], object] | None = None) -> "Poly":
        if not self.t:
            return self
        _, c = self.leading(keyfunc)
        return self.scale(inv_mod(c, self.ring.p))

    def coefficient(self, key: int) -> int:
        return self.t.get(key, 0)

    def constant(self) -> int:
        return self.t.get(0, 0)

    def terms_sorted(self, keyfunc: Callable[[int], object] | None = None) -> list[tuple[int, int]]:
        kf = keyfunc or self.ring.grevlex_key
        return sorted(self.t.items(), key=lambda kv: kf(kv[0]), reverse=True)

    def variables(self) -> set[str]:
        used: set[str] = set()
        ring = self.ring
        for key in self.t:
            for i, e in enumerate(ring.unpack(key)):
                if e:
                    used.add(ring.names[i])
        return used

    # -- substitution / evaluation --

    def substitute(self, mapping: dict[str, "Poly"], target: Ring | None = None) -> "Poly":
        """Substitute polynomials for variables.

        Unmapped variables must exist in the target ring (kept as themselves).
        """
        ring = self.ring
        if target is None:
            some = next(iter(mapping.values()), None)
            target = some.ring if some is not None else ring
        if target.p != ring.p:
            raise ValueError("mixed moduli")
        images: list[Poly | None] = []
        for nm in ring.names:
            if nm in mapping:
                img = mapping[nm]
                if img.ring != target:
                    img = target.convert(img)
                images.append(img)
            elif nm in target.index:
                images.append(target.var(nm))
            else:
                images.append(None)
        out = target.zero
        pow_cache: dict[tuple[int, int], Poly] = {}
        for key, c in self.t.items():
            exps = ring.unpack(key)
            term = target.const(c)
            for i, e in enumerate(exps):
                if not e:
                    continue
                img = images[i]
                if img is None:
                    raise ValueError(
                        f"variable {ring.names[i]!r} has no image and is not in target ring"
                    )
                pk = (i, e)
                pe = pow_cache.get(pk)
                if pe is None:
                    pe = img ** e
                    pow_cache[pk] = pe
                term = term * pe
            out = out + term
        return out

    def evaluate(self, values: dict[str, int]) -> int:
        """Full evaluation at integer values (all variables must be given)."""
        ring = self.ring
        p = ring.p
        vals = []
        for nm in ring.names:
            if nm not in values:
                raise ValueError(f"missing value for {nm!r}")
            vals.append(values[nm] % p)
        total = 0
        for key, c in self.t.items():
            v = c
            for i, e in enumerate(ring.unpack(key)):
                if e:
                    v = v * pow(vals[i], e, p) % p
            total = (total + v) % p
        return total

    # -- printing --

    def __str__(self):
        if not self.t:
            return "0"
        ring = self.ring
        parts = []
        for key, c in sorted(self.t.items(), key=lambda kv: ring.grlex_key(kv[0]), reverse=True):
            mono = ring.mono_str(key)
            if key == 0:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts)

    def __repr__(self):
        return f"Poly({self})"


# -- parsing ---------------------------------------------------------------


def _tokenize(text: str) -> Iterator[tuple[str, str]]:
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            yield ("int", text[i:j])
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            yield ("name", text[i:j])
            i = j
        elif ch in "+-*^":
            yield (ch, ch)
            i += 1
        else:
            raise ValueError(f"unexpected character {ch!r} in polynomial")


def _parse_poly(ring: Ring, text: str) -> Poly:
    tokens = list(_tokenize(text))
    if not tokens:
        raise ValueError("empty polynomial text")
    terms: dict[int, int] = {}
    p = ring.p
    pos = 0

    def parse_factor(idx: int) -> tuple[int, int, int]:
        """Return (coef, mono_key, new_idx)."""
        kind, val = tokens[idx]
        if kind == "int":
            coef = int(val) % p
            key = 0
            idx += 1
        elif kind == "name":
            if val not in ring.index:
                raise ValueError(f"unknown variable {val!r}")
            e = 1
            idx += 1
            if idx < len(tokens) and tokens[idx][0] == "^":
                idx += 1
                if idx >= len(tokens) or tokens[idx][0] != "int":
                    raise ValueError("expected integer exponent after '^'")
                e = int(tokens[idx][1])
                idx += 1
            coef = 1
            key = ring.mono_var(ring.index[val], e) if e else 0
        else:
            raise ValueError(f"unexpected token {val!r}")
        return coef, key, idx

    while pos < len(tokens):
        sign = 1
        while pos < len(tokens) and tokens[pos][0] in ("+", "-"):
            if tokens[pos][0] == "-":
                sign = -sign
            pos += 1
        if pos >= len(tokens):
            raise ValueError("dangling sign")
        coef, key, pos = parse_factor(pos)
        while pos < len(tokens) and tokens[pos][0] == "*":
            pos += 1
            c2, k2, pos = parse_factor(pos)
            coef = coef * c2 % p
            key += k2
        v = (terms.get(key, 0) + sign * coef) % p
        if v:
            terms[key] = v
        else:
            terms.pop(key, None)
    return Poly(ring, terms)


# -- monomial orders --------------------------------------------------------


@dataclass(frozen=True)
class MonomialOrder:
    """A term order: ``keyfunc(ring)`` returns a sort-key function on packed keys."""

    name: str
    block: int = 0  # for elimination orders: size of the first (eliminated) block

    def keyfunc(self, ring: Ring) -> Callable[[int], object]:
        if self.name == "grevlex":
            return ring.grevlex_key
        if self.name == "lex":
            return ring.lex_key
        if self.name == "elim":
            k = self.block
            shifts = ring._shifts[:k]
            deg_shift = ring._deg_shift
            fm = ring._field_mask
            cap_first = 0
            for s in range(k):
                cap_first |= EXP_CAP << (FIELD_BITS * s)
            cap_rest = 0
            for s in range(ring.n - k):
                cap_rest |= EXP_CAP << (FIELD_BITS * s)

            def key(m: int, _shifts=shifts, _fm=fm):
                d1 = 0
                low1 = 0
                for j, s in enumerate(_shifts):
                    e = (m >> s) & _fm
                    d1 += e
                    low1 |= e << (FIELD_BITS * j)
                d2 = (m >> deg_shift) - d1
                low2 = (m & ((1 << deg_shift) - 1)) >> (FIELD_BITS * len(_shifts))
                return (
                    (d1 << deg_shift) | (cap_first - low1),
                    (d2 << deg_shift) | (cap_rest - low2),
                )

            return key
        raise ValueError(f"unknown order {self.name}")


grevlex = MonomialOrder("grevlex")
lex = MonomialOrder("lex")


def elimination_order(first_block: int) -> MonomialOrder:
    """Block order: grevlex on the first ``first_block`` variables, then grevlex
    on the rest; any monomial containing an eliminated variable dominates."""
    return MonomialOrder("elim", first_block)


def monomials_of_degree(ring: Ring, d: int, variables: Sequence[str] | None = None) -> list[Monomial]:
    """All degree-d monomials in the given variables, grevlex-descending."""
    if d < 0:
        return []
    idxs = (
        list(range(ring.n))
        if variables is None
        else [ring.index[nm] for nm in variables]
    )
    keys: list[int] = []

    def rec(pos: int, remaining: int, acc: int):
        if pos == len(idxs) - 1:
            keys.append(acc + (remaining << ring._shifts[idxs[pos]]) + (remaining << ring._deg_shift))
            return
        for e in range(remaining + 1):
            rec(pos + 1, remaining - e, acc + (e << ring._shifts[idxs[pos]]) + (e << ring._deg_shift))

    if not idxs:
        return [Monomial(ring, 0)] if d == 0 else []
    rec(0, d, 0)
    keys.sort(key=ring.grevlex_key, reverse=True)
    return [Monomial(ring, k) for k in keys]


# -- truncated power series -------------------------------------------------


class TruncSeries:
    """Integer power series truncated after degree ``dmax``."""

    __slots__ = ("dmax", "c")

    def __init__(self, dmax: int, coeffs: Iterable[int] = ()):
        self.dmax = dmax
        c = list(coeffs)[: dmax + 1]
        c.extend([0] * (dmax + 1 - len(c)))
        self.c = c

    @classmethod
    def one(cls, dmax: int) -> "TruncSeries":
        return cls(dmax, [1])

    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        self._check(other)
        return TruncSeries(self.dmax, [a + b for a, b in zip(self.c, other.c)])

    def __sub__(self, other: "TruncSeries") -> "TruncSeries":
        self._check(other)
        return TruncSeries(self.dmax, [a - b for a, b in zip(self.c, other.c)])

    def __mul__(self, other: "TruncSeries") -> "TruncSeries":
        self._check(other)
        out = [0] * (self.dmax + 1)
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(other.c[: self.dmax + 1 - i]):
                    if b:
                        out[i + j] += a * b
        return TruncSeries(self.dmax, out)

    def divide_by_one_minus_tk(self, k: int) -> "TruncSeries":
        """Multiply by 1/(1 - t^k)."""
        if k <= 0:
            raise ValueError("k must be positive")
        out = list(self.c)
        for i in range(k, self.dmax + 1):
            out[i] += out[i - k]
        return TruncSeries(self.dmax, out)

    def coefficient(self, i: int) -> int:
        return self.c[i]

    def _check(self, other: "TruncSeries") -> None:
        if self.dmax != other.dmax:
            raise ValueError("mixed truncation degrees")

    def __eq__(self, other):
        return (
            isinstance(other, TruncSeries)
            and self.dmax == other.dmax
            and self.c == other.c
        )

    def __repr__(self):
        return f"TruncSeries({self.c})"


def series_estimate(gen_degrees: Sequence[int], phsop_degrees: Sequence[int], dmax: int) -> list[int]:
    """Coefficients 0..dmax of (sum_i t^gen_i) / prod_j (1 - t^phsop_j)."""
    s = TruncSeries(dmax)
    for g in gen_degrees:
        if g < 0:
            raise ValueError("negative generator degree")
        if g <= dmax:
            s.c[g] += 1
    for f in phsop_degrees:
        s = s.divide_by_one_minus_tk(f)
    return list(s.c)
