"""Multisemigroups with multiplicities.

A multi-multisemigroup on a finite carrier ``S`` with bound ``k`` assigns to
every pair ``(s, t)`` a multiplicity function ``mu[s, t]: S -> Card_k``.  The
whole table is kept as a dense ``|S| x |S| x |S|`` integer array indexed
``[s, t, r]``; ``-1`` encodes omega (only possible when ``k`` is OMEGA).
Finite bounds are applied by clamping once at the end of each contraction,
which is exact because truncation at ``n`` is a semiring congruence of the
naturals.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import BoundMismatch, NotAssociative, NotFinitary, UnknownElement, WordTooShort
from .semiring import (
    OMEGA,
    Bound,
    Cardinal,
    bound_le,
    check_bound,
    format_bound,
    parse_cardinal,
)

OMEGA_CODE = -1
_INT64_SAFE = 2**62


def _encode(value: Cardinal, bound: Bound) -> int:
    if value.bound != bound:
        raise BoundMismatch(f"value {value!r} does not live in Card_{format_bound(bound)}")
    return OMEGA_CODE if value.value is OMEGA else value.value


def _decode(code, bound: Bound) -> Cardinal:
    return Cardinal(OMEGA if code == OMEGA_CODE else int(code), bound)


def _coerce(value, bound: Bound) -> Cardinal:
    if isinstance(value, Cardinal):
        return value
    return parse_cardinal(value, bound)


def contract(subscripts: str, a: np.ndarray, b: np.ndarray, bound: Bound) -> np.ndarray:
    """``np.einsum`` over encoded cardinals, with Card_bound semantics.

    A product is omega when one factor is omega and the other is nonzero;
    a sum is omega when any summand is.
    """
    fa = np.where(a == OMEGA_CODE, 0, a)
    fb = np.where(b == OMEGA_CODE, 0, b)
    amax = int(fa.max(initial=0))
    bmax = int(fb.max(initial=0))
    if a.dtype == object or b.dtype == object or amax * bmax * max(a.size, b.size, 1) >= _INT64_SAFE:
        fa, fb = fa.astype(object), fb.astype(object)
    total = np.einsum(subscripts, fa, fb)
    if bound is OMEGA:
        wa, wb = a == OMEGA_CODE, b == OMEGA_CODE
        if wa.any() or wb.any():
            om = np.einsum(subscripts, wa.astype(np.int64), (b != 0).astype(np.int64))
            om = om + np.einsum(subscripts, (a != 0).astype(np.int64), wb.astype(np.int64))
            total = np.where(om > 0, OMEGA_CODE, total)
    else:
        total = np.minimum(total, bound)
    if total.dtype == object and all(int(x) < _INT64_SAFE for x in np.asarray(total).flat):
        total = np.asarray(total).astype(np.int64)
    return np.asarray(total)


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, copy=True)
    arr.setflags(write=False)
    return arr


def _carrier_tuple(carrier: Iterable[str]) -> tuple[str, ...]:
    carrier = tuple(carrier)
    if not carrier:
        raise ValueError("carrier must be non-empty")
    for x in carrier:
        if not isinstance(x, str) or not x or "|" in x:
            raise ValueError(f"bad element name {x!r}: names are non-empty strings without '|'")
    if len(set(carrier)) != len(carrier):
        raise ValueError("carrier has repeated elements")
    return carrier


class _Indexed:
    carrier: tuple[str, ...]
    _index: dict[str, int]

    def index_of(self, x: str) -> int:
        try:
            return self._index[x]
        except (KeyError, TypeError):
            raise UnknownElement(x) from None


class MultiplicityFunction(_Indexed):
    """A function ``carrier -> Card_bound`` (an element of the multi-Boolean)."""

    __slots__ = ("carrier", "bound", "_index", "_codes")

    def __init__(self, carrier: Sequence[str], bound: Bound, values: Mapping | None = None):
        self.carrier = _carrier_tuple(carrier)
        self.bound = check_bound(bound)
        self._index = {x: i for i, x in enumerate(self.carrier)}
        codes = np.zeros(len(self.carrier), dtype=np.int64)
        for x, v in (values or {}).items():
            codes[self.index_of(x)] = _encode(_coerce(v, self.bound), self.bound)
        self._codes = _frozen(codes)

    @classmethod
    def from_codes(cls, carrier, bound, codes, _index=None) -> "MultiplicityFunction":
        f = cls.__new__(cls)
        f.carrier = tuple(carrier)
        f.bound = bound
        f._index = _index if _index is not None else {x: i for i, x in enumerate(f.carrier)}
        f._codes = _frozen(np.asarray(codes))
        return f

    @property
    def codes(self) -> np.ndarray:
        return self._codes

    def __getitem__(self, x: str) -> Cardinal:
        return _decode(self._codes[self.index_of(x)], self.bound)

    def support(self) -> tuple[str, ...]:
        return tuple(x for x, c in zip(self.carrier, self._codes) if c != 0)

    def items(self):
        """Nonzero values in carrier order."""
        return [(x, _decode(c, self.bound)) for x, c in zip(self.carrier, self._codes) if c != 0]

    def as_dict(self) -> dict:
        """``{element: int | "omega"}`` for the nonzero values, in carrier order."""
        return {x: v.to_json() for x, v in self.items()}

    def _check_compatible(self, other: "MultiplicityFunction"):
        if other.bound != self.bound:
            raise BoundMismatch("multiplicity functions have different bounds")
        if other.carrier != self.carrier:
            raise BoundMismatch("multiplicity functions live on different carriers")

    def __add__(self, other: "MultiplicityFunction") -> "MultiplicityFunction":
        self._check_compatible(other)
        a, b = self._codes, other._codes
        total = np.where((a == OMEGA_CODE) | (b == OMEGA_CODE), OMEGA_CODE, a.astype(object) + b)
        if self.bound is not OMEGA:
            total = np.minimum(total, self.bound)
        return MultiplicityFunction.from_codes(self.carrier, self.bound, total.astype(np.int64), self._index)

    def scale(self, c: Cardinal) -> "MultiplicityFunction":
        """``c`` copies of this function added together."""
        code = np.array([_encode(c, self.bound)], dtype=np.int64)
        out = contract("i,j->j", code, self._codes, self.bound)
        return MultiplicityFunction.from_codes(self.carrier, self.bound, out, self._index)

    def __eq__(self, other):
        if not isinstance(other, MultiplicityFunction):
            return NotImplemented
        return (
            self.carrier == other.carrier
            and self.bound == other.bound
            and np.array_equal(self._codes, other._codes)
        )

    __hash__ = None

    def __repr__(self):
        return f"MultiplicityFunction({self.as_dict()}, bound={format_bound(self.bound)})"


def indicator(carrier: Sequence[str], bound: Bound, x: str) -> MultiplicityFunction:
    """The function with value 1 at ``x`` and 0 elsewhere."""
    f = MultiplicityFunction(carrier, bound)
    codes = np.zeros(len(f.carrier), dtype=np.int64)
    codes[f.index_of(x)] = 1
    return MultiplicityFunction.from_codes(f.carrier, f.bound, codes)


def zero_function(carrier: Sequence[str], bound: Bound) -> MultiplicityFunction:
    return MultiplicityFunction(carrier, bound)


class MultiMultisemigroup(_Indexed):
    """A finite carrier, a cardinal bound and the full table ``(s, t) -> mu[s, t]``.

    Construction does not check associativity unless asked to; ``validated``
    records whether the table has been verified.
    """

    def __init__(self, carrier: Sequence[str], bound: Bound, codes, validated: bool = False):
        self.carrier = _carrier_tuple(carrier)
        self.bound = check_bound(bound)
        self._index = {x: i for i, x in enumerate(self.carrier)}
        n = len(self.carrier)
        codes = np.asarray(codes)
        if codes.shape != (n, n, n):
            raise ValueError(f"table must have shape {(n, n, n)}, got {codes.shape}")
        if codes.dtype != object:
            codes = codes.astype(np.int64)
        if (codes < OMEGA_CODE).any():
            raise ValueError("negative multiplicity")
        if self.bound is OMEGA:
            pass
        elif (codes == OMEGA_CODE).any() or (codes > self.bound).any():
            raise BoundMismatch(f"table value exceeds the bound {self.bound}")
        self._codes = _frozen(codes)
        self.validated = validated

    @classmethod
    def from_table(
        cls,
        carrier: Sequence[str],
        bound: Bound,
        table: Mapping[tuple[str, str], Mapping | MultiplicityFunction],
        check: bool = False,
    ) -> "MultiMultisemigroup":
        """Build from ``{(s, t): {r: value}}``; omitted pairs and targets are zero.

        Values are ints, ``"omega"`` or :class:`Cardinal`.  With ``check=True``
        the table is verified and :class:`NotAssociative` raised on failure.
        """
        carrier = _carrier_tuple(carrier)
        bound = check_bound(bound)
        index = {x: i for i, x in enumerate(carrier)}
        n = len(carrier)
        codes = np.zeros((n, n, n), dtype=object)
        for (s, t), values in table.items():
            for x in (s, t):
                if x not in index:
                    raise UnknownElement(x)
            if isinstance(values, MultiplicityFunction):
                if values.carrier != carrier or values.bound != bound:
                    raise BoundMismatch(f"mu[{s}, {t}] has the wrong carrier or bound")
                codes[index[s], index[t]] = values.codes
                continue
            for r, v in values.items():
                if r not in index:
                    raise UnknownElement(r)
                codes[index[s], index[t], index[r]] = _encode(_coerce(v, bound), bound)
        if all(int(c) < _INT64_SAFE for c in codes.flat):
            codes = codes.astype(np.int64)
        m = cls(carrier, bound, codes)
        if check:
            m = m.verified()
        return m

    @property
    def codes(self) -> np.ndarray:
        """The read-only encoded table, indexed ``[s, t, r]``."""
        return self._codes

    @property
    def size(self) -> int:
        return len(self.carrier)

    def mu(self, s: str, t: str) -> MultiplicityFunction:
        return MultiplicityFunction.from_codes(
            self.carrier, self.bound, self._codes[self.index_of(s), self.index_of(t)], self._index
        )

    def value(self, s: str, t: str, r: str) -> Cardinal:
        return _decode(self._codes[self.index_of(s), self.index_of(t), self.index_of(r)], self.bound)

    def table(self) -> dict[tuple[str, str], dict]:
        """``{(s, t): {r: int | "omega"}}`` for the nonzero entries, in carrier order."""
        out = {}
        for s, t in itertools.product(self.carrier, repeat=2):
            f = self.mu(s, t).as_dict()
            if f:
                out[s, t] = f
        return out

    def verified(self) -> "MultiMultisemigroup":
        """Return this table marked as validated, or raise :class:`NotAssociative`."""
        if self.validated:
            return self
        cex = verify_associativity(self)
        if cex is not None:
            raise NotAssociative(str(cex))
        return MultiMultisemigroup(self.carrier, self.bound, self._codes, validated=True)

    def with_value(self, s: str, t: str, r: str, value) -> "MultiMultisemigroup":
        """A copy with one entry replaced (unvalidated)."""
        codes = np.array(self._codes, copy=True)
        codes[self.index_of(s), self.index_of(t), self.index_of(r)] = _encode(_coerce(value, self.bound), self.bound)
        return MultiMultisemigroup(self.carrier, self.bound, codes)

    def renamed(self, names: Mapping[str, str]) -> "MultiMultisemigroup":
        """Rename elements, keeping the carrier order."""
        return MultiMultisemigroup([names.get(x, x) for x in self.carrier], self.bound, self._codes, self.validated)

    def __eq__(self, other):
        if not isinstance(other, MultiMultisemigroup):
            return NotImplemented
        return (
            self.carrier == other.carrier
            and self.bound == other.bound
            and np.array_equal(self._codes, other._codes)
        )

    __hash__ = None

    def __repr__(self):
        return f"MultiMultisemigroup(carrier={list(self.carrier)}, bound={format_bound(self.bound)})"


@dataclass
class Multisemigroup(_Indexed):
    """A finite set with a multivalued operation ``(s, t) -> subset``."""

    carrier: tuple[str, ...]
    products: dict[tuple[str, str], frozenset] = field(default_factory=dict)

    def __post_init__(self):
        self.carrier = _carrier_tuple(self.carrier)
        self._index = {x: i for i, x in enumerate(self.carrier)}
        products = {}
        for (s, t), values in self.products.items():
            self.index_of(s), self.index_of(t)
            values = frozenset(values)
            for r in values:
                self.index_of(r)
            if values:
                products[s, t] = values
        self.products = products

    def __call__(self, s: str, t: str) -> frozenset:
        self.index_of(s), self.index_of(t)
        return self.products.get((s, t), frozenset())

    def ordered(self, subset: Iterable[str]) -> list[str]:
        return sorted(subset, key=self.index_of)

    def associativity_failure(self) -> tuple[str, str, str] | None:
        """First triple ``(a, b, c)`` with ``(a*b)*c != a*(b*c)``, or None."""
        for a, b, c in itertools.product(self.carrier, repeat=3):
            left = frozenset().union(*(self(x, c) for x in self(a, b)))
            right = frozenset().union(*(self(a, y) for y in self(b, c)))
            if left != right:
                return a, b, c
        return None

    def is_associative(self) -> bool:
        return self.associativity_failure() is None

    def __eq__(self, other):
        if not isinstance(other, Multisemigroup):
            return NotImplemented
        return self.carrier == other.carrier and self.products == other.products


@dataclass(frozen=True)
class Counterexample:
    """A violated instance of the associativity law at ``(r, s, t)``.

    ``lhs`` is the value of ``r*(s*t)`` at ``element`` and ``rhs`` that of ``(r*s)*t``.
    """

    r: str
    s: str
    t: str
    element: str
    lhs: Cardinal
    rhs: Cardinal

    def __str__(self):
        return (
            f"associativity fails at ({self.r}, {self.s}, {self.t}): "
            f"r*(s*t) has {self.lhs.to_json()} copies of {self.element}, "
            f"(r*s)*t has {self.rhs.to_json()}"
        )


def mu(m: MultiMultisemigroup, s: str, t: str) -> MultiplicityFunction:
    return m.mu(s, t)


def verify_associativity(m: MultiMultisemigroup) -> Counterexample | None:
    """Check ``sum_i mu[s,t](i) mu[r,i] == sum_j mu[r,s](j) mu[j,t]`` for all triples.

    Returns None when the law holds, else the first violation in
    lexicographic ``(r, s, t, element)`` order of the carrier.
    """
    codes = m.codes
    for r in range(m.size):
        # [s, t, x] slices for this r
        lhs = contract("sti,ix->stx", codes, codes[r], m.bound)
        rhs = contract("sj,jtx->stx", codes[r], codes, m.bound)
        diff = np.argwhere(lhs != rhs)
        if len(diff):
            s, t, x = diff[0]
            return Counterexample(
                m.carrier[r],
                m.carrier[s],
                m.carrier[t],
                m.carrier[x],
                _decode(lhs[s, t, x], m.bound),
                _decode(rhs[s, t, x], m.bound),
            )
    return None


def _word_indices(m: MultiMultisemigroup, word: Sequence[str]) -> list[int]:
    if isinstance(word, str):
        raise TypeError("a word is a sequence of element names, not a single string")
    idx = [m.index_of(x) for x in word]
    if len(idx) < 2:
        raise WordTooShort(f"words must have length at least 2, got {len(idx)}")
    return idx


def evaluate_word_prefix(m: MultiMultisemigroup, word: Sequence[str]) -> MultiplicityFunction:
    """Evaluate ``s x`` as ``sum_a mu_x(a) mu[s, a]``, peeling letters off the front."""
    idx = _word_indices(m, word)
    acc = m.codes[idx[-2], idx[-1]]
    for s in reversed(idx[:-2]):
        acc = contract("a,at->t", acc, m.codes[s], m.bound)
    return MultiplicityFunction.from_codes(m.carrier, m.bound, acc, m._index)


def evaluate_word_suffix(m: MultiMultisemigroup, word: Sequence[str]) -> MultiplicityFunction:
    """Evaluate ``x s`` as ``sum_a mu_x(a) mu[a, s]``, peeling letters off the back."""
    idx = _word_indices(m, word)
    acc = m.codes[idx[0], idx[1]]
    for s in idx[2:]:
        acc = contract("a,at->t", acc, m.codes[:, s], m.bound)
    return MultiplicityFunction.from_codes(m.carrier, m.bound, acc, m._index)


def reduce(m: MultiMultisemigroup, target: Bound) -> MultiMultisemigroup:
    """Apply the reduction homomorphism ``Card_k -> Card_target`` to every table value."""
    check_bound(target)
    if not bound_le(target, m.bound):
        raise BoundMismatch(f"cannot reduce bound {format_bound(m.bound)} to {format_bound(target)}")
    if target == m.bound:
        return m
    codes = np.where(m.codes == OMEGA_CODE, target, np.minimum(m.codes, target)) if target is not OMEGA else m.codes
    # the image of an associative table under a homomorphism is associative
    return MultiMultisemigroup(m.carrier, target, codes, validated=m.validated)


def underlying_multisemigroup(m: MultiMultisemigroup) -> Multisemigroup:
    products = {}
    for (i, s), (j, t) in itertools.product(enumerate(m.carrier), repeat=2):
        support = frozenset(m.carrier[k] for k in np.flatnonzero(m.codes[i, j]))
        if support:
            products[s, t] = support
    return Multisemigroup(m.carrier, products)


def lift_multisemigroup(ms: Multisemigroup, target: Bound) -> MultiMultisemigroup:
    """Give every product of ``ms`` the largest multiplicity of ``Card_target``."""
    check_bound(target)
    failure = ms.associativity_failure()
    if failure is not None:
        raise NotAssociative(f"multisemigroup is not associative at {failure}")
    n = len(ms.carrier)
    top_code = OMEGA_CODE if target is OMEGA else target
    codes = np.zeros((n, n, n), dtype=np.int64)
    for (s, t), values in ms.products.items():
        for r in values:
            codes[ms.index_of(s), ms.index_of(t), ms.index_of(r)] = top_code
    return MultiMultisemigroup(ms.carrier, target, codes, validated=True)


@dataclass
class Verdict:
    """A boolean answer together with the reasons it is negative."""

    ok: bool
    reasons: list[str] = field(default_factory=list)

    def __bool__(self):
        return self.ok


def is_finitary(m: MultiMultisemigroup) -> Verdict:
    reasons = []
    if m.bound is not OMEGA:
        reasons.append(f"bound is {m.bound}, not omega")
    if (m.codes == OMEGA_CODE).any():
        s, t, r = np.argwhere(m.codes == OMEGA_CODE)[0]
        reasons.append(f"mu[{m.carrier[s]}, {m.carrier[t]}]({m.carrier[r]}) is omega")
    # supports are finite because the carrier is
    return Verdict(not reasons, reasons)


@dataclass
class StructureConstantAlgebra:
    """Free module on ``basis`` with ``b_s * b_t = sum_r constants[s, t, r] b_r``."""

    basis: tuple[str, ...]
    constants: np.ndarray

    def __post_init__(self):
        self.basis = _carrier_tuple(self.basis)
        self.constants = np.asarray(self.constants)
        n = len(self.basis)
        if self.constants.shape != (n, n, n):
            raise ValueError(f"constants must have shape {(n, n, n)}")

    def multiply(self, x: Mapping[str, int], y: Mapping[str, int]) -> dict[str, int]:
        """Bilinear product of two integer combinations of basis elements."""
        index = {b: i for i, b in enumerate(self.basis)}
        out = [0] * len(self.basis)
        for s, a in x.items():
            for t, b in y.items():
                if not a or not b:
                    continue
                row = self.constants[index[s], index[t]]
                for r in range(len(self.basis)):
                    out[r] += a * b * int(row[r])
        return {self.basis[r]: c for r, c in enumerate(out) if c}

    def associativity_failure(self) -> tuple[str, str, str] | None:
        """First basis triple with ``(r s) t != r (s t)``, by direct expansion."""
        for r, s, t in itertools.product(self.basis, repeat=3):
            left = self.multiply(self.multiply({r: 1}, {s: 1}), {t: 1})
            right = self.multiply({r: 1}, self.multiply({s: 1}, {t: 1}))
            if left != right:
                return r, s, t
        return None

    def is_associative(self) -> bool:
        return self.associativity_failure() is None


def structure_constants(m: MultiMultisemigroup) -> StructureConstantAlgebra:
    verdict = is_finitary(m)
    if not verdict:
        raise NotFinitary("; ".join(verdict.reasons))
    return StructureConstantAlgebra(m.carrier, np.array(m.codes, copy=True))


def from_structure_constants(alg: StructureConstantAlgebra, check: bool = True) -> MultiMultisemigroup:
    """The finitary multi-multisemigroup of a basis with non-negative integer constants."""
    constants = np.asarray(alg.constants)
    if (constants < 0).any():
        raise ValueError("structure constants must be non-negative")
    m = MultiMultisemigroup(alg.basis, OMEGA, constants)
    return m.verified() if check else m


def diamond_product(
    ms: Multisemigroup, x: Mapping[str, int], y: Mapping[str, int], coefficients: str = "integer"
) -> dict[str, int]:
    """Bilinear extension of ``s <> t = sum of the elements of s*t``.

    ``coefficients`` is ``"integer"`` or ``"boolean"``.  Over the integers
    this product need not be associative.
    """
    if coefficients not in ("integer", "boolean"):
        raise ValueError("coefficients must be 'integer' or 'boolean'")
    out: dict[str, int] = {}
    for s, a in x.items():
        for t, b in y.items():
            for r in ms(s, t):
                out[r] = out.get(r, 0) + a * b
    if coefficients == "boolean":
        out = {r: 1 for r, c in out.items() if c}
    return {r: out[r] for r in ms.ordered(out) if out[r]}


def function_algebra_multiply(
    m: MultiMultisemigroup, f: MultiplicityFunction, g: MultiplicityFunction
) -> MultiplicityFunction:
    """``(f . g)(t) = sum_{s,u} f(s) g(u) mu[s, u](t)`` computed in ``Card_k``."""
    for h in (f, g):
        if h.bound != m.bound:
            raise BoundMismatch("function bound differs from the table bound")
        if h.carrier != m.carrier:
            for x in h.carrier:
                m.index_of(x)
            raise BoundMismatch("function carrier order differs from the table carrier")
    partial = contract("u,sut->st", g.codes, m.codes, m.bound)
    out = contract("s,st->t", f.codes, partial, m.bound)
    return MultiplicityFunction.from_codes(m.carrier, m.bound, out, m._index)
