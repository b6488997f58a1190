"""Example families, each generated from an independent construction.

* dihedral Kazhdan-Lusztig structure constants, computed in the integral
  group ring by explicit group multiplication and then re-expanded;
* projective functors of a finite dimensional algebra from a dimension matrix;
* the Catalan monoid of order-preserving, order-decreasing maps of a chain;
* small hard-coded fixtures (the S3 Kazhdan-Lusztig table, its multisemigroup,
  the two-element table with no deformation, one-element examples).
"""
from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import BoundMismatch, NegativeCoefficient
from .mms import MultiMultisemigroup, Multisemigroup, StructureConstantAlgebra, from_structure_constants
from .semiring import OMEGA, Bound, Cardinal, check_bound, format_bound

_OTHER = {"s": "t", "t": "s"}


# -- dihedral groups ----------------------------------------------------------


@dataclass(frozen=True, order=True)
class DihedralElement:
    """An element of ``D_n`` as its canonical reduced word.

    Words alternate in ``s`` and ``t``.  The longest element has two spellings
    of length ``n``; the one starting with ``s`` is canonical.
    """

    n: int
    word: str = ""

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("dihedral groups need n >= 2")
        w = self.word
        if any(c not in "st" for c in w) or any(a == b for a, b in zip(w, w[1:])):
            raise ValueError(f"{w!r} is not an alternating word in s, t")
        if len(w) > self.n:
            raise ValueError(f"{w!r} is longer than the longest element of D_{self.n}")
        if len(w) == self.n and w[0] == "t":
            object.__setattr__(self, "word", _alternating("s", self.n))

    @classmethod
    def parse(cls, name: str, n: int) -> "DihedralElement":
        """Read any word in ``s``, ``t`` (``e`` or ``""`` is the identity) and reduce it."""
        name = name.strip()
        if name in ("", "e"):
            return cls(n)
        x = cls(n)
        for letter in name:
            if letter not in "st":
                raise ValueError(f"bad letter {letter!r} in {name!r}")
            x = x.times_generator(letter)
        return x

    @property
    def length(self) -> int:
        return len(self.word)

    @property
    def name(self) -> str:
        return self.word or "e"

    def times_generator(self, g: str) -> "DihedralElement":
        """Right multiplication by the generator ``g``, by rewriting with the Coxeter relations."""
        w, n = self.word, self.n
        if not w:
            return DihedralElement(n, g)
        if w[-1] == g:
            return DihedralElement(n, w[:-1])
        longer = len(w) + 1
        if longer <= n:
            return DihedralElement(n, w + g)
        # an alternating word of length L > n equals the one of length 2n - L starting with the other letter
        return DihedralElement(n, _alternating(_OTHER[w[0]], 2 * n - longer))

    def __mul__(self, other: "DihedralElement") -> "DihedralElement":
        return dihedral_group_multiply(self, other, self.n)

    def __repr__(self):
        return f"D{self.n}[{self.name}]"


def _alternating(first: str, length: int) -> str:
    return "".join(first if i % 2 == 0 else _OTHER[first] for i in range(length))


def dihedral_group_multiply(x: DihedralElement, y: DihedralElement, n: int) -> DihedralElement:
    if x.n != n or y.n != n:
        raise ValueError("elements belong to a different dihedral group")
    for letter in y.word:
        x = x.times_generator(letter)
    return x


def dihedral_elements(n: int) -> list[DihedralElement]:
    """``e, s, t, st, ts, sts, tst, ..., w0`` (by length, ``s`` first)."""
    out = [DihedralElement(n)]
    for length in range(1, n):
        out += [DihedralElement(n, _alternating("s", length)), DihedralElement(n, _alternating("t", length))]
    out.append(DihedralElement(n, _alternating("s", n)))
    return out


class GroupAlgebraElement:
    """An integer combination of elements of ``D_n``."""

    def __init__(self, n: int, coefficients=None):
        self.n = n
        self.coefficients = {g: c for g, c in (coefficients or {}).items() if c}

    @classmethod
    def of(cls, g: DihedralElement) -> "GroupAlgebraElement":
        return cls(g.n, {g: 1})

    def __getitem__(self, g: DihedralElement) -> int:
        return self.coefficients.get(g, 0)

    def __add__(self, other):
        out = dict(self.coefficients)
        for g, c in other.coefficients.items():
            out[g] = out.get(g, 0) + c
        return GroupAlgebraElement(self.n, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, k: int) -> "GroupAlgebraElement":
        return GroupAlgebraElement(self.n, {g: k * c for g, c in self.coefficients.items()})

    def __mul__(self, other):
        out: dict[DihedralElement, int] = {}
        for g, a in self.coefficients.items():
            for h, b in other.coefficients.items():
                gh = dihedral_group_multiply(g, h, self.n)
                out[gh] = out.get(gh, 0) + a * b
        return GroupAlgebraElement(self.n, out)

    def __eq__(self, other):
        if not isinstance(other, GroupAlgebraElement):
            return NotImplemented
        return self.n == other.n and self.coefficients == other.coefficients

    __hash__ = None

    def __bool__(self):
        return bool(self.coefficients)

    def __repr__(self):
        terms = " + ".join(f"{c}*{g.name}" for g, c in sorted(self.coefficients.items(), key=lambda kv: (kv[0].length, kv[0].word)))
        return f"GroupAlgebraElement(D{self.n}: {terms or '0'})"


def kl_basis_element(w: DihedralElement, n: int) -> GroupAlgebraElement:
    """``w`` plus every element of strictly smaller length."""
    return GroupAlgebraElement(n, {g: 1 for g in dihedral_elements(n) if g.length < w.length or g == w})


def kl_expand(x: GroupAlgebraElement) -> dict[DihedralElement, int]:
    """Coordinates of ``x`` in the Kazhdan-Lusztig basis.

    The change of basis is unitriangular with respect to length, so peeling off
    the longest terms first gives exact integer coordinates.
    """
    n = x.n
    rest = GroupAlgebraElement(n, x.coefficients)
    out: dict[DihedralElement, int] = {}
    for w in reversed(dihedral_elements(n)):
        c = rest[w]
        if c:
            out[w] = c
            rest = rest - kl_basis_element(w, n).scale(c)
    assert not rest, "unitriangular back-substitution left a remainder"
    return out


def dihedral_kl_mms(n: int) -> MultiMultisemigroup:
    """Structure constants of ``Z[D_n]`` in the Kazhdan-Lusztig basis."""
    if not 3 <= n <= 12:
        raise ValueError("dihedral_kl_mms supports 3 <= n <= 12")
    elements = dihedral_elements(n)
    basis = [kl_basis_element(w, n) for w in elements]
    pos = {w: i for i, w in enumerate(elements)}
    size = len(elements)
    constants = np.zeros((size, size, size), dtype=np.int64)
    for i, j in itertools.product(range(size), repeat=2):
        for u, c in kl_expand(basis[i] * basis[j]).items():
            if c < 0:
                raise NegativeCoefficient(
                    f"coefficient {c} of {u.name} in {elements[i].name}*{elements[j].name} (D_{n})"
                )
            constants[i, j, pos[u]] = c
    alg = StructureConstantAlgebra(tuple(w.name for w in elements), constants)
    return from_structure_constants(alg)


_S3_KL_ROWS = {
    # row x: entries for columns e, s, t, st, ts, sts
    "e": ["e", "s", "t", "st", "ts", "sts"],
    "s": ["s", "2s", "st", "2st", "sts+s", "2sts"],
    "t": ["t", "ts", "2t", "sts+t", "2ts", "2sts"],
    "st": ["st", "sts+s", "2st", "2sts+st", "2sts+2s", "4sts"],
    "ts": ["ts", "2ts", "sts+t", "2sts+2t", "2sts+ts", "4sts"],
    "sts": ["sts", "2sts", "2sts", "4sts", "4sts", "6sts"],
}
S3_CARRIER = ("e", "s", "t", "st", "ts", "sts")


def _parse_combination(text: str) -> dict[str, int]:
    out = {}
    for term in text.split("+"):
        digits = "".join(itertools.takewhile(str.isdigit, term))
        out[term[len(digits):]] = int(digits or 1)
    return out


def s3_kl_fixture() -> MultiMultisemigroup:
    """The Kazhdan-Lusztig multiplication table of ``S_3``, transcribed by hand."""
    table = {}
    for row, entries in _S3_KL_ROWS.items():
        for col, text in zip(S3_CARRIER, entries):
            table[row, col] = _parse_combination(text)
    return MultiMultisemigroup.from_table(S3_CARRIER, OMEGA, table)


_S3_SUPPORT_ROWS = {
    "e": [{"e"}, {"s"}, {"t"}, {"st"}, {"ts"}, {"sts"}],
    "s": [{"s"}, {"s"}, {"st"}, {"st"}, {"sts", "s"}, {"sts"}],
    "t": [{"t"}, {"ts"}, {"t"}, {"sts", "t"}, {"ts"}, {"sts"}],
    "st": [{"st"}, {"sts", "s"}, {"st"}, {"sts", "st"}, {"sts", "s"}, {"sts"}],
    "ts": [{"ts"}, {"ts"}, {"sts", "t"}, {"sts", "t"}, {"sts", "ts"}, {"sts"}],
    "sts": [{"sts"}] * 6,
}


def s3_multisemigroup_fixture() -> Multisemigroup:
    """The multisemigroup of ``S_3`` Soergel bimodules, transcribed by hand."""
    products = {(row, col): value for row, values in _S3_SUPPORT_ROWS.items() for col, value in zip(S3_CARRIER, values)}
    return Multisemigroup(S3_CARRIER, products)


def undeformable_pair_fixture() -> Multisemigroup:
    """The two-element multisemigroup with ``a*a = {a}`` and every other product ``{a, b}``."""
    ab = {"a", "b"}
    return Multisemigroup(("a", "b"), {("a", "a"): {"a"}, ("a", "b"): ab, ("b", "a"): ab, ("b", "b"): ab})


def singleton(value, bound: Bound = OMEGA) -> MultiMultisemigroup:
    """``{a}`` with ``mu[a, a](a) = value``.

    Only ``value < bound`` is documented as valid; ``value == bound`` is
    accepted with a warning.
    """
    check_bound(bound)
    if isinstance(value, Cardinal):
        value = value.value
    if value == "omega":
        value = OMEGA
    finite_bound = bound is not OMEGA
    if finite_bound and (value is OMEGA or value > bound):
        raise BoundMismatch(f"{value} exceeds the bound {format_bound(bound)}")
    if value is OMEGA or (finite_bound and value == bound):
        warnings.warn("singleton value equals the bound; only values below the bound are documented", stacklevel=2)
    lam = Cardinal(value, bound)
    m = MultiMultisemigroup.from_table(("a",), bound, {("a", "a"): {"a": lam}} if lam else {})
    # both sides of the associativity law are value * value
    return MultiMultisemigroup(m.carrier, m.bound, m.codes, validated=True)


# -- projective functors -------------------------------------------------------


def check_dimension_matrix(d: Sequence[Sequence[int]]) -> np.ndarray:
    d = np.asarray(d)
    if d.ndim != 2 or d.shape[0] != d.shape[1] or d.shape[0] < 1:
        raise ValueError("dimension matrix must be a non-empty square matrix")
    if not np.issubdtype(d.dtype, np.integer):
        raise ValueError("dimension matrix entries must be integers")
    d = d.astype(np.int64)
    if (d < 0).any():
        raise ValueError("dimensions must be non-negative")
    if (np.diag(d) < 1).any():
        raise ValueError("diagonal dimensions must be at least 1 (e_i A e_i contains e_i)")
    return d


def functor_name(i: int, j: int) -> str:
    return f"F_{i}_{j}"


def projective_functor_mms(d: Sequence[Sequence[int]]) -> MultiMultisemigroup:
    """Identity plus ``F_i_j`` with ``F_i_j F_i'_j' = dim(e_j A e_i') copies of F_i_j'``.

    ``d[j][i']`` is ``dim e_j A e_i'``, indices starting at 1 in element names.
    """
    d = check_dimension_matrix(d)
    k = d.shape[0]
    pairs = [(i, j) for i in range(k) for j in range(k)]
    names = ["1"] + [functor_name(i + 1, j + 1) for i, j in pairs]
    pos = {p: n + 1 for n, p in enumerate(pairs)}
    size = len(names)
    constants = np.zeros((size, size, size), dtype=np.int64)
    for x in range(size):
        constants[0, x, x] = 1
        constants[x, 0, x] = 1
    for (i, j), (i2, j2) in itertools.product(pairs, repeat=2):
        constants[pos[i, j], pos[i2, j2], pos[i, j2]] = d[j, i2]
    return from_structure_constants(StructureConstantAlgebra(tuple(names), constants))


# -- Catalan monoid ----------------------------------------------------------------


def catalan_maps(m: int) -> Iterator[tuple[int, ...]]:
    """Order-preserving, order-decreasing self-maps of ``1..m`` in lexicographic order."""

    def extend(prefix):
        i = len(prefix) + 1
        if i > m:
            yield tuple(prefix)
            return
        low = prefix[-1] if prefix else 1
        for v in range(low, i + 1):
            yield from extend(prefix + [v])

    yield from extend([])


def catalan_name(f: Sequence[int]) -> str:
    return "".join(str(v) for v in f)


def catalan_monoid_mms(m: int) -> MultiMultisemigroup:
    """The Catalan monoid on a chain of ``m`` elements, with ``mu[f, g](f o g) = 1``."""
    if not 2 <= m <= 7:
        raise ValueError("catalan_monoid_mms supports chain sizes 2..7")
    maps = list(catalan_maps(m))
    pos = {f: i for i, f in enumerate(maps)}
    size = len(maps)
    constants = np.zeros((size, size, size), dtype=np.int64)
    for (i, f), (j, g) in itertools.product(enumerate(maps), repeat=2):
        fg = tuple(f[x - 1] for x in g)
        constants[i, j, pos[fg]] = 1
    alg = StructureConstantAlgebra(tuple(catalan_name(f) for f in maps), constants)
    # composition of maps is associative
    m_ = from_structure_constants(alg, check=False)
    return MultiMultisemigroup(m_.carrier, m_.bound, m_.codes, validated=True)
