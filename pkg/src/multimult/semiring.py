"""Saturating cardinal arithmetic and a handful of small semirings.

``Card_k`` is the set of cardinals not exceeding ``k`` where every result
above ``k`` is identified with ``k``.  Only two kinds of bound occur here: a
positive integer ``n`` and the first infinite cardinal, written ``OMEGA``.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Sequence, Union

from .errors import BoundMismatch


class Omega:
    """The first infinite cardinal.  Use the ``OMEGA`` singleton."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "OMEGA"

    def __str__(self):
        return "omega"

    def __reduce__(self):
        return (Omega, ())


OMEGA = Omega()

Bound = Union[int, Omega]


def check_bound(bound: Bound) -> Bound:
    if bound is OMEGA:
        return bound
    if isinstance(bound, bool) or not isinstance(bound, int):
        raise TypeError(f"a cardinal bound is a positive int or OMEGA, got {bound!r}")
    if bound < 1:
        raise ValueError(f"cardinal bounds must be >= 1, got {bound}")
    return bound


def bound_le(a: Bound, b: Bound) -> bool:
    if b is OMEGA:
        return True
    if a is OMEGA:
        return False
    return a <= b


def parse_bound(token) -> Bound:
    """Parse a serialized bound: a decimal integer or the string ``"omega"``."""
    if token == "omega":
        return OMEGA
    if isinstance(token, str) and token.isdigit():
        token = int(token)
    if isinstance(token, bool) or not isinstance(token, int):
        raise ValueError(f"bad cardinal bound {token!r}")
    return check_bound(token)


def format_bound(bound: Bound):
    return "omega" if bound is OMEGA else bound


@dataclass(frozen=True)
class Cardinal:
    """An element of ``Card_bound``; ``value`` is a non-negative int or ``OMEGA``."""

    value: Union[int, Omega]
    bound: Bound = OMEGA

    def __post_init__(self):
        check_bound(self.bound)
        v = self.value
        if v is OMEGA:
            if self.bound is not OMEGA:
                raise BoundMismatch(f"omega is not an element of Card_{self.bound}")
            return
        if isinstance(v, bool) or not isinstance(v, int) or v < 0:
            raise ValueError(f"cardinal value must be a non-negative int or OMEGA, got {v!r}")
        if self.bound is not OMEGA and v > self.bound:
            raise BoundMismatch(f"{v} exceeds the bound {self.bound}")

    @classmethod
    def clamp(cls, value, bound: Bound) -> "Cardinal":
        """Build a cardinal, identifying everything above ``bound`` with ``bound``."""
        if value is not OMEGA and bound is not OMEGA and value > bound:
            value = bound
        elif value is OMEGA and bound is not OMEGA:
            value = bound
        return cls(value, bound)

    @property
    def is_omega(self) -> bool:
        return self.value is OMEGA

    def __bool__(self):
        return self.value is OMEGA or self.value != 0

    def __add__(self, other):
        return card_add(self, other)

    def __mul__(self, other):
        return card_mul(self, other)

    def __le__(self, other):
        return _value_le(self.value, other.value)

    def __lt__(self, other):
        return self != other and _value_le(self.value, other.value)

    def __repr__(self):
        return f"Cardinal({self.value}, bound={format_bound(self.bound)})"

    def to_json(self):
        return "omega" if self.value is OMEGA else self.value


def _value_le(a, b) -> bool:
    if b is OMEGA:
        return True
    if a is OMEGA:
        return False
    return a <= b


def parse_cardinal(token, bound: Bound) -> Cardinal:
    if token == "omega":
        return Cardinal(OMEGA, bound)
    if isinstance(token, bool) or not isinstance(token, int):
        raise ValueError(f"bad multiplicity {token!r}; expected an integer or 'omega'")
    return Cardinal(token, bound)


def zero(bound: Bound) -> Cardinal:
    return Cardinal(0, bound)


def one(bound: Bound) -> Cardinal:
    return Cardinal(1, bound)


def top(bound: Bound) -> Cardinal:
    """The largest element of ``Card_bound``."""
    return Cardinal(bound, bound)


def _same_bound(a: Cardinal, b: Cardinal) -> Bound:
    if a.bound != b.bound:
        raise BoundMismatch(f"cannot combine Card_{format_bound(a.bound)} with Card_{format_bound(b.bound)}")
    return a.bound


def card_add(a: Cardinal, b: Cardinal) -> Cardinal:
    bound = _same_bound(a, b)
    if a.value is OMEGA or b.value is OMEGA:
        return Cardinal(OMEGA, bound)
    return Cardinal.clamp(a.value + b.value, bound)


def card_mul(a: Cardinal, b: Cardinal) -> Cardinal:
    bound = _same_bound(a, b)
    if a.value == 0 or b.value == 0:
        return Cardinal(0, bound)
    if a.value is OMEGA or b.value is OMEGA:
        return Cardinal(OMEGA, bound)
    return Cardinal.clamp(a.value * b.value, bound)


def card_sum(items: Iterable[Cardinal], bound: Bound | None = None) -> Cardinal:
    """Sum a finite family.  The empty sum is zero (of ``bound``, default OMEGA)."""
    items = list(items)
    if not items:
        return Cardinal(0, OMEGA if bound is None else bound)
    total = items[0]
    if bound is not None and total.bound != bound:
        raise BoundMismatch("summand bound differs from the requested bound")
    for item in items[1:]:
        total = card_add(total, item)
    return total


def phi_reduce(target: Bound, a: Cardinal) -> Cardinal:
    """The canonical homomorphism ``Card_k -> Card_target`` for ``target <= k``.

    Values not exceeding ``target`` are kept; everything else goes to ``target``.
    """
    check_bound(target)
    if not bound_le(target, a.bound):
        raise BoundMismatch(
            f"cannot reduce from Card_{format_bound(a.bound)} to the larger Card_{format_bound(target)}"
        )
    return Cardinal.clamp(a.value, target)


def psi_lift(target: Bound, b: Cardinal) -> Cardinal:
    """Send 0 to 0 and 1 to the largest element of ``Card_target``."""
    check_bound(target)
    if b.bound != 1:
        raise BoundMismatch("psi_lift expects an element of Card_1")
    return top(target) if b.value else zero(target)


# -- semiring instances -----------------------------------------------------


@dataclass(frozen=True)
class SemiringInstance:
    """A unital semiring given by its operations.

    ``elements`` lists the carrier when it is finite; otherwise ``sample``
    draws random elements for a randomized axiom check.
    """

    name: str
    add: Callable[[Any, Any], Any]
    mul: Callable[[Any, Any], Any]
    zero: Any
    one: Any
    elements: tuple | None = None
    sample: Callable[[random.Random], Any] | None = field(default=None, compare=False)


def _card_sampler(bound: Bound):
    def sample(rng: random.Random):
        if bound is OMEGA:
            roll = rng.random()
            if roll < 0.15:
                return Cardinal(OMEGA)
            if roll < 0.3:
                return Cardinal(rng.choice((0, 1)))
            return Cardinal(rng.randrange(0, 50))
        return Cardinal(rng.randrange(0, bound + 1), bound)

    return sample


def card(bound: Bound) -> SemiringInstance:
    """``Card_bound`` as a semiring instance."""
    check_bound(bound)
    elements = None
    if bound is not OMEGA and bound < 64:
        elements = tuple(Cardinal(v, bound) for v in range(bound + 1))
    return SemiringInstance(
        name=f"card({format_bound(bound)})",
        add=card_add,
        mul=card_mul,
        zero=zero(bound),
        one=one(bound),
        elements=elements,
        sample=_card_sampler(bound),
    )


BOOLEAN = SemiringInstance("boolean", lambda a, b: a | b, lambda a, b: a & b, 0, 1, (0, 1))

# boolean multiplication as addition and boolean addition as multiplication
DUAL_BOOLEAN = SemiringInstance("dual_boolean", lambda a, b: a & b, lambda a, b: a | b, 1, 0, (0, 1))


def _tropical_sampler(infinity):
    def sample(rng: random.Random):
        return infinity if rng.random() < 0.15 else rng.randrange(0, 50)

    return sample


# (N u {inf}, min, +, inf, 0)
TROPICAL_MIN = SemiringInstance(
    "tropical_min", min, lambda a, b: a + b, math.inf, 0, sample=_tropical_sampler(math.inf)
)

# (N u {-inf}, max, +, -inf, 0)
TROPICAL_MAX_PLUS = SemiringInstance(
    "tropical_max_plus", max, lambda a, b: a + b, -math.inf, 0, sample=_tropical_sampler(-math.inf)
)


def get_instance(name: str) -> SemiringInstance:
    """Look up a shipped instance: ``boolean``, ``dual_boolean``,
    ``tropical_min``, ``tropical_max_plus`` or ``card:<n|omega>``."""
    fixed = {s.name: s for s in (BOOLEAN, DUAL_BOOLEAN, TROPICAL_MIN, TROPICAL_MAX_PLUS)}
    if name in fixed:
        return fixed[name]
    for prefix in ("card:", "card"):
        if name.startswith(prefix):
            arg = name[len(prefix):].strip("()")
            return card(parse_bound(arg))
    raise KeyError(f"unknown semiring {name!r}")


# -- axiom checking ---------------------------------------------------------


@dataclass(frozen=True)
class AxiomFailure:
    axiom: str
    witness: tuple


@dataclass
class AxiomReport:
    instance: str
    exhaustive: bool
    checked: int
    failures: list[AxiomFailure]

    @property
    def ok(self) -> bool:
        return not self.failures

    def failed_axioms(self) -> set[str]:
        return {f.axiom for f in self.failures}


def _axiom_violations(R: SemiringInstance, a, b, c):
    add, mul, z, u = R.add, R.mul, R.zero, R.one
    checks = (
        ("additive associativity", add(add(a, b), c) == add(a, add(b, c))),
        ("additive commutativity", add(a, b) == add(b, a)),
        ("additive identity", add(z, a) == a and add(a, z) == a),
        ("multiplicative associativity", mul(mul(a, b), c) == mul(a, mul(b, c))),
        ("multiplicative identity", mul(u, a) == a and mul(a, u) == a),
        ("left distributivity", mul(a, add(b, c)) == add(mul(a, b), mul(a, c))),
        ("right distributivity", mul(add(a, b), c) == add(mul(a, c), mul(b, c))),
        ("zero absorbs", mul(z, a) == z and mul(a, z) == z),
    )
    return [name for name, held in checks if not held]


def check_semiring_axioms(
    instance: SemiringInstance, samples: int = 5000, seed: int = 0, exhaustive_limit: int = 64
) -> AxiomReport:
    """Check the unital semiring axioms on ``instance``.

    Carriers with at most ``exhaustive_limit`` elements are checked on every
    triple; otherwise ``samples`` random triples are drawn.  Each failing
    axiom is reported once, with the first witness triple found.
    """
    failures: dict[str, AxiomFailure] = {}
    if instance.zero == instance.one:
        failures["zero differs from one"] = AxiomFailure("zero differs from one", (instance.zero, instance.one))

    exhaustive = instance.elements is not None and len(instance.elements) <= exhaustive_limit
    if exhaustive:
        triples: Iterable[Sequence] = itertools.product(instance.elements, repeat=3)
    else:
        if instance.sample is None:
            raise ValueError(f"{instance.name}: carrier is too large to enumerate and has no sampler")
        rng = random.Random(seed)
        special = [instance.zero, instance.one]
        triples = (
            tuple(rng.choice(special) if rng.random() < 0.2 else instance.sample(rng) for _ in range(3))
            for _ in range(samples)
        )

    checked = 0
    for a, b, c in triples:
        checked += 1
        for axiom in _axiom_violations(instance, a, b, c):
            failures.setdefault(axiom, AxiomFailure(axiom, (a, b, c)))
    return AxiomReport(instance.name, exhaustive, checked, list(failures.values()))
