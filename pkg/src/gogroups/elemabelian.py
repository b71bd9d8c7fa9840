"""Index bijections and elementary abelian groups of exponent p.

Two families of bijections are provided, a finite one on {0..n-1} with
n = p^l and an infinite one on all of Z:

    lam(i)  = (i+1) mod n             lam_inf(i) = i + 1
    mu(i)   = i+1        if i % p != p-1       (same formula for mu_inf,
            = i-(p-1)    if i % p == p-1        without the mod n wrap)

Composite bijections are stored as words in these primitives and evaluated
pointwise, left to right; no closed-form simplification is attempted.
Vectors over Z/p indexed by the same sets carry the induced automorphisms
c_i -> c_{sigma(i)}, again as right actions.
"""

from __future__ import annotations

from dataclasses import dataclass


class IndexDomainError(ValueError):
    pass


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def is_p_power_modulus(n: int, p: int) -> bool:
    """True iff n = p^l with l >= 1."""
    if n < p:
        return False
    while n % p == 0:
        n //= p
    return n == 1


@dataclass(frozen=True)
class IndexBijection:
    """A word in the cycle/block-cycle bijections, finite or infinite kind.

    ``modulus`` is n = p^l for the finite kind and None for the kind acting
    on Z.  ``word`` is a tuple of ("lam" | "mu", +1 | -1) letters applied in
    reading order.
    """

    p: int
    modulus: int | None
    word: tuple[tuple[str, int], ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise IndexDomainError(f"{self.p} is not prime")
        if self.modulus is not None and not is_p_power_modulus(self.modulus, self.p):
            raise IndexDomainError(f"modulus {self.modulus} is not a power of {self.p}")
        for name, sign in self.word:
            if name not in ("lam", "mu") or sign not in (1, -1):
                raise IndexDomainError(f"bad bijection letter {(name, sign)!r}")

    def _step(self, name: str, sign: int, i: int) -> int:
        p, n = self.p, self.modulus
        if name == "lam":
            j = i + sign
            return j % n if n is not None else j
        if sign == 1:
            j = i + 1 if i % p != p - 1 else i - (p - 1)
        else:
            j = i - 1 if i % p != 0 else i + (p - 1)
        return j

    def __call__(self, i: int) -> int:
        if self.modulus is not None and not 0 <= i < self.modulus:
            raise IndexDomainError(f"index {i} outside 0..{self.modulus - 1}")
        for name, sign in self.word:
            i = self._step(name, sign, i)
        return i

    def _compatible(self, other: "IndexBijection"):
        if (self.p, self.modulus) != (other.p, other.modulus):
            raise IndexDomainError("bijection parameter mismatch")

    def __mul__(self, other: "IndexBijection") -> "IndexBijection":
        """Left-to-right composition: (a * b)(i) = b(a(i))."""
        self._compatible(other)
        return IndexBijection(self.p, self.modulus, self.word + other.word)

    def inverse(self) -> "IndexBijection":
        return IndexBijection(
            self.p, self.modulus, tuple((g, -s) for g, s in reversed(self.word))
        )

    def __pow__(self, k: int) -> "IndexBijection":
        if k < 0:
            return self.inverse() ** (-k)
        return IndexBijection(self.p, self.modulus, self.word * k)

    def tag(self) -> str:
        suffix = "" if self.modulus is not None else "_inf"
        if not self.word:
            return "id"
        return " ".join(f"{g}{suffix}" + ("" if s == 1 else "^-1") for g, s in self.word)

    def equal_on_window(self, other: "IndexBijection", bound: int) -> bool:
        self._compatible(other)
        if self.modulus is not None:
            return all(self(i) == other(i) for i in range(self.modulus))
        return all(self(i) == other(i) for i in range(-bound, bound + 1))


def identity_bijection(p: int, modulus: int | None = None) -> IndexBijection:
    return IndexBijection(p, modulus, ())


def lam(p: int, n: int) -> IndexBijection:
    return IndexBijection(p, n, (("lam", 1),))


def mu(p: int, n: int) -> IndexBijection:
    return IndexBijection(p, n, (("mu", 1),))


def lam_inf(p: int) -> IndexBijection:
    return IndexBijection(p, None, (("lam", 1),))


def mu_inf(p: int) -> IndexBijection:
    return IndexBijection(p, None, (("mu", 1),))


def commutator(a: IndexBijection, b: IndexBijection) -> IndexBijection:
    return a.inverse() * b.inverse() * a * b


def eval_bijection(b: IndexBijection, i: int) -> int:
    return b(i)


def check_lambda_mu_identities(p: int, n: int) -> bool:
    """Pointwise identities tying lam to mu on {0..n-1}.

    Checks, for every i: lam agrees with mu off the block boundaries and
    with mu lam^p on them; the mirrored pair for lam^-1; mu^p = 1; and
    lam^p commutes with mu.
    """
    if not is_p_power_modulus(n, p):
        raise IndexDomainError(f"n = {n} must be a power of p = {p}")
    l_, m_ = lam(p, n), mu(p, n)
    ident = identity_bijection(p, n)
    for i in range(n):
        if i % p != p - 1:
            if l_(i) != m_(i):
                return False
        else:
            if l_(i) != (m_ * l_ ** p)(i):
                return False
        if i % p != 0:
            if l_.inverse()(i) != m_.inverse()(i):
                return False
        else:
            if l_.inverse()(i) != (l_ ** -p * m_.inverse())(i):
                return False
    if not (m_ ** p).equal_on_window(ident, n):
        return False
    if not commutator(l_ ** p, m_).equal_on_window(ident, n):
        return False
    return True


def commutator_shift_check(p: int, bound: int) -> bool:
    """[mu_inf, lam_inf] shifts every index divisible by p up by p."""
    if bound < 1:
        raise IndexDomainError("bound must be >= 1")
    shift = commutator(mu_inf(p), lam_inf(p))
    return all(shift(i) == i + p for i in range(-bound, bound + 1) if i % p == 0)


@dataclass(frozen=True)
class FpVector:
    """Finitely supported exponent vector over Z/p.

    ``window`` is n for vectors indexed by {0..n-1} and None for vectors
    indexed by Z.  Entries store only non-zero exponents in {1..p-1}.
    """

    p: int
    window: int | None
    entries: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise IndexDomainError(f"{self.p} is not prime")
        seen = set()
        for idx, exp in self.entries:
            if not 1 <= exp <= self.p - 1:
                raise IndexDomainError(f"exponent {exp} not in 1..{self.p - 1}")
            if idx in seen:
                raise IndexDomainError(f"duplicate index {idx}")
            if self.window is not None and not 0 <= idx < self.window:
                raise IndexDomainError(f"index {idx} outside window 0..{self.window - 1}")
            seen.add(idx)
        object.__setattr__(self, "entries", tuple(sorted(self.entries)))

    @classmethod
    def zero(cls, p: int, window: int | None = None) -> "FpVector":
        return cls(p, window, ())

    @classmethod
    def basis(cls, p: int, index: int, exp: int = 1, window: int | None = None) -> "FpVector":
        return cls(p, window, ((index, exp % p),) if exp % p else ())

    @classmethod
    def from_dict(cls, p: int, data: dict[int, int], window: int | None = None) -> "FpVector":
        entries = tuple((i, e % p) for i, e in data.items() if e % p)
        return cls(p, window, entries)

    def to_dict(self) -> dict[int, int]:
        return dict(self.entries)

    def is_zero(self) -> bool:
        return not self.entries

    def support(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.entries)

    def _compatible(self, other: "FpVector"):
        if (self.p, self.window) != (other.p, other.window):
            raise IndexDomainError("vector parameter mismatch")

    def __add__(self, other: "FpVector") -> "FpVector":
        self._compatible(other)
        out = dict(self.entries)
        for i, e in other.entries:
            s = (out.get(i, 0) + e) % self.p
            if s:
                out[i] = s
            else:
                out.pop(i, None)
        return FpVector(self.p, self.window, tuple(out.items()))

    def __neg__(self) -> "FpVector":
        return FpVector(self.p, self.window, tuple((i, self.p - e) for i, e in self.entries))

    def __sub__(self, other: "FpVector") -> "FpVector":
        return self + (-other)


@dataclass(frozen=True)
class InducedAutomorphism:
    """Automorphism of a vector group given by permuting basis indices."""

    bijection: IndexBijection

    def apply(self, v: FpVector) -> FpVector:
        b = self.bijection
        if v.p != b.p or v.window != b.modulus:
            raise IndexDomainError("automorphism and vector index sets differ")
        return FpVector(v.p, v.window, tuple((b(i), e) for i, e in v.entries))

    def inverse(self) -> "InducedAutomorphism":
        return InducedAutomorphism(self.bijection.inverse())

    def __mul__(self, other: "InducedAutomorphism") -> "InducedAutomorphism":
        return InducedAutomorphism(self.bijection * other.bijection)


def apply_automorphism(a: InducedAutomorphism, v: FpVector) -> FpVector:
    return a.apply(v)


def infinite_order_witness(p: int, steps: int) -> bool:
    """Iterate the commutator-induced automorphism on c_0.

    Each application moves the support index up by p, so after s steps the
    image is c_{p s}; the automorphism therefore has infinite order.  True
    iff the orbit behaves exactly that way for all 1 <= s <= steps.
    """
    if steps < 1:
        raise IndexDomainError("steps must be >= 1")
    shift = InducedAutomorphism(commutator(mu_inf(p), lam_inf(p)))
    start = FpVector.basis(p, 0)
    v = start
    for s in range(1, steps + 1):
        v = shift.apply(v)
        if v != FpVector.basis(p, p * s) or v == start:
            return False
    return True


def mod_intertwines(inf_bij: IndexBijection, fin_bij: IndexBijection, bound: int) -> bool:
    """Index reduction mod n commutes with the two bijections on a window."""
    if inf_bij.modulus is not None or fin_bij.modulus is None:
        raise IndexDomainError("expected an infinite and a finite bijection")
    n = fin_bij.modulus
    return all(inf_bij(i) % n == fin_bij(i % n) for i in range(-bound, bound + 1))
