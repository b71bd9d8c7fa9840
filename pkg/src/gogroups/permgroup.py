"""Permutations of {0..n-1} and brute-force generated-group enumeration.

Composition is left-to-right throughout the package: ``(p * q)(i) = q(p(i))``,
so words act on points by applying their letters in reading order.  No
stabilizer-chain machinery; desk-scale groups are enumerated by breadth-first
closure under a hard cap.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .words import Presentation


class PermError(ValueError):
    pass


class GroupTooLargeError(RuntimeError):
    """Raised when a closure enumeration exceeds its element cap."""


@dataclass(frozen=True)
class Perm:
    image: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.image) != list(range(len(self.image))):
            raise PermError("image table is not a bijection")

    @classmethod
    def identity(cls, degree: int) -> "Perm":
        return cls(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, degree: int, cycles) -> "Perm":
        image = list(range(degree))
        for cycle in cycles:
            for a, b in zip(cycle, cycle[1:] + cycle[:1]):
                if not 0 <= a < degree:
                    raise PermError(f"point {a} out of range for degree {degree}")
                image[a] = b
        return cls(tuple(image))

    @classmethod
    def from_mapping(cls, degree: int, mapping) -> "Perm":
        image = list(range(degree))
        for a, b in mapping.items():
            image[a] = b
        return cls(tuple(image))

    @property
    def degree(self) -> int:
        return len(self.image)

    def __call__(self, i: int) -> int:
        return self.image[i]

    def __mul__(self, other: "Perm") -> "Perm":
        if self.degree != other.degree:
            raise PermError("degree mismatch")
        return Perm(tuple(other.image[j] for j in self.image))

    def inv(self) -> "Perm":
        out = [0] * self.degree
        for i, j in enumerate(self.image):
            out[j] = i
        return Perm(tuple(out))

    def __pow__(self, n: int) -> "Perm":
        if n < 0:
            return self.inv() ** (-n)
        result = Perm.identity(self.degree)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.image))

    def order(self) -> int:
        k, q = 1, self
        while not q.is_identity():
            q = q * self
            k += 1
        return k

    def cycles(self) -> list[tuple[int, ...]]:
        seen: set[int] = set()
        out = []
        for i in range(self.degree):
            if i in seen or self.image[i] == i:
                continue
            cycle = [i]
            j = self.image[i]
            while j != i:
                seen.add(j)
                cycle.append(j)
                j = self.image[j]
            out.append(tuple(cycle))
        return out

    def __str__(self) -> str:
        cycles = self.cycles()
        if not cycles:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cycles)


def parse_cycles(text: str, degree: int) -> Perm:
    """Parse cycle notation like ``(0 1 2)(3 4)``; ``()`` is the identity."""
    text = text.strip()
    if text in ("", "()"):
        return Perm.identity(degree)
    if text.count("(") != text.count(")"):
        raise PermError(f"unbalanced cycle notation: {text!r}")
    cycles = []
    for chunk in text.replace(")", ")\n").split("\n"):
        chunk = chunk.strip()
        if not chunk:
            continue
        if not (chunk.startswith("(") and chunk.endswith(")")):
            raise PermError(f"bad cycle chunk: {chunk!r}")
        body = chunk[1:-1].replace(",", " ").split()
        if body:
            cycles.append([int(x) for x in body])
    return Perm.from_cycles(degree, cycles)


DEFAULT_CAP = 10**6


def closure(gens: list[Perm], cap: int = DEFAULT_CAP) -> frozenset[Perm]:
    """Breadth-first closure of a generating set under products.

    Returns the full element set (identity included) or raises
    GroupTooLargeError once more than ``cap`` elements appear.
    """
    if cap < 1:
        raise PermError("cap must be >= 1")
    if not gens:
        raise PermError("need at least one generator (or an explicit identity)")
    degree = gens[0].degree
    for g in gens:
        if g.degree != degree:
            raise PermError("generators have mixed degrees")
    elements = {Perm.identity(degree)}
    frontier = list(elements)
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = x * g
                if y not in elements:
                    elements.add(y)
                    if len(elements) > cap:
                        raise GroupTooLargeError("group larger than cap")
                    new.append(y)
        frontier = new
    return frozenset(elements)


@dataclass(frozen=True)
class PermGroup:
    """Group generated by permutations, enumerated on demand."""

    degree: int
    gens: tuple[Perm, ...]
    cap: int = DEFAULT_CAP

    def __post_init__(self):
        for g in self.gens:
            if g.degree != self.degree:
                raise PermError("generator degree mismatch")

    @classmethod
    def generated(cls, *gens: Perm, cap: int = DEFAULT_CAP) -> "PermGroup":
        if not gens:
            raise PermError("need at least one generator")
        return cls(gens[0].degree, tuple(gens), cap)

    @cached_property
    def elements(self) -> frozenset[Perm]:
        if not self.gens:
            return frozenset({Perm.identity(self.degree)})
        return closure(list(self.gens), self.cap)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, p: Perm) -> bool:
        return p in self.elements

    def identity(self) -> Perm:
        return Perm.identity(self.degree)


def is_p_power(n: int, p: int) -> bool:
    if n < 1:
        return False
    while n % p == 0:
        n //= p
    return n == 1


def is_p_group(g: PermGroup, p: int) -> bool:
    """True iff the enumerated order is a power of the prime p."""
    return is_p_power(g.order, p)


def exponent_divides(g: PermGroup, n: int) -> bool:
    """True iff x^n is the identity for every enumerated element x."""
    return all((x ** n).is_identity() for x in g.elements)


def verify_hom(src: Presentation, images: dict) -> bool:
    """Check that mapping each generator to its image kills every relator.

    Images may be Perm instances or any elements with ``*``, ``.inv()``
    and equality; a degree mismatch between Perm images is an error.
    """
    for g in src.generators:
        if g not in images:
            raise PermError(f"no image for generator {g!r}")
    degrees = {x.degree for x in images.values() if isinstance(x, Perm)}
    if len(degrees) > 1:
        raise PermError("image degree mismatch")
    if not src.generators:
        return True
    some = next(iter(images.values()))
    ident = some * some.inv()
    for relator in src.relators:
        value = ident
        for gen, sign in relator.letters:
            x = images[gen]
            value = value * (x if sign == 1 else x.inv())
        if value != ident:
            return False
    return True


def _subgroup_check(x: PermGroup, subset: frozenset[Perm] | set[Perm], name: str) -> frozenset[Perm]:
    subset = frozenset(subset)
    if not subset <= x.elements:
        raise PermError(f"{name} is not contained in the group")
    if Perm.identity(x.degree) not in subset:
        raise PermError(f"{name} does not contain the identity")
    for a in subset:
        if a.inv() not in subset:
            raise PermError(f"{name} is not closed under inverses")
        for b in subset:
            if a * b not in subset:
                raise PermError(f"{name} is not closed under products")
    return subset


def check_prop_3_1(x: PermGroup, y_normal, z, p: int) -> bool:
    """Closure of p-power index under intersection with a subgroup.

    Given Y normal in X of p-power index and Z a subgroup of X, decide
    whether the index [Z : Y meet Z] is again a power of p.
    """
    y = _subgroup_check(x, y_normal, "Y")
    z = _subgroup_check(x, z, "Z")
    for g in x.elements:
        gi = g.inv()
        for a in y:
            if gi * a * g not in y:
                raise PermError("Y is not normal in X")
    if x.order % len(y) != 0 or not is_p_power(x.order // len(y), p):
        raise PermError("Y does not have p-power index in X")
    meet = y & z
    return is_p_power(len(z) // len(meet), p)
