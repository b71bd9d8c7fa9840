"""Exact word problems for free products, amalgams, and HNN-extensions.

Everything here works over *handles*: groups with a decidable equality,
a multiplication, an inverse, and (for the finite ones) an enumerated
element universe.  Elements are plain hashable values (ints, tuples).
At desk scale the associated/amalgamated subgroups are enumerated up
front, which keeps every membership test a set lookup and every rewrite
step exactly justified by a defining relation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .words import GroupWord


class NormalFormError(ValueError):
    pass


class FiniteGroup:
    """An explicitly enumerated finite group handle.

    Elements must be hashable and mutually comparable; the sorted element
    order is the fixed enumeration order used to pick coset transversals.
    """

    def __init__(self, name, elements, mul, inv, identity, generators=None, check=True):
        self.name = name
        self.elements = tuple(sorted(elements))
        self.element_set = frozenset(self.elements)
        self.mul = mul
        self.inv = inv
        self.identity = identity
        self.generators = dict(generators or {})
        if len(self.element_set) != len(self.elements):
            raise NormalFormError(f"{name}: duplicate elements")
        if identity not in self.element_set:
            raise NormalFormError(f"{name}: identity not among elements")
        for label, g in self.generators.items():
            if g not in self.element_set:
                raise NormalFormError(f"{name}: generator {label!r} not an element")
        if check:
            self._check_axioms()

    def _check_axioms(self):
        for x in self.elements:
            if self.inv(x) not in self.element_set:
                raise NormalFormError(f"{self.name}: not closed under inverse")
            if self.mul(x, self.inv(x)) != self.identity:
                raise NormalFormError(f"{self.name}: bad inverse for {x!r}")
            for y in self.elements:
                if self.mul(x, y) not in self.element_set:
                    raise NormalFormError(f"{self.name}: not closed under product")

    @property
    def order(self) -> int:
        return len(self.elements)

    def contains(self, x) -> bool:
        return x in self.element_set

    def element_order(self, x) -> int:
        k, y = 1, x
        while y != self.identity:
            y = self.mul(y, x)
            k += 1
        return k

    def power(self, x, n: int):
        if n < 0:
            return self.power(self.inv(x), -n)
        out = self.identity
        for _ in range(n):
            out = self.mul(out, x)
        return out

    def closure_of(self, subset) -> frozenset:
        """Subgroup generated by a subset of elements."""
        elems = {self.identity}
        frontier = [self.identity]
        gens = list(subset) + [self.inv(x) for x in subset]
        while frontier:
            new = []
            for x in frontier:
                for g in gens:
                    y = self.mul(x, g)
                    if y not in elems:
                        elems.add(y)
                        new.append(y)
            frontier = new
        return frozenset(elems)

    def element_words(self) -> dict:
        """Each element as a word in the named generators (BFS, shortest first).

        Raises if the named generators do not generate the whole universe.
        """
        if not self.generators and self.order > 1:
            raise NormalFormError(f"{self.name}: no generators named")
        words = {self.identity: GroupWord.empty()}
        frontier = [self.identity]
        steps = [(label, 1, g) for label, g in sorted(self.generators.items())]
        steps += [(label, -1, self.inv(g)) for label, g in sorted(self.generators.items())]
        while frontier:
            new = []
            for x in frontier:
                for label, sign, g in steps:
                    y = self.mul(x, g)
                    if y not in words:
                        words[y] = words[x] * GroupWord(((label, sign),))
                        new.append(y)
            frontier = new
        if len(words) != self.order:
            raise NormalFormError(f"{self.name}: named generators do not generate")
        return words

    def evaluate(self, word: GroupWord, images=None):
        """Evaluate a word; by default letters are looked up in ``generators``."""
        images = images if images is not None else self.generators
        out = self.identity
        for label, sign in word.letters:
            try:
                g = images[label]
            except KeyError:
                raise NormalFormError(f"{self.name}: unknown generator {label!r}") from None
            out = self.mul(out, g if sign == 1 else self.inv(g))
        return out

    def __repr__(self):
        return f"FiniteGroup({self.name!r}, order={self.order})"


class FreeFactor:
    """Infinite cyclic factor handle (integers under addition).

    Only what free-product reduction needs: no enumeration.
    """

    def __init__(self, name):
        self.name = name
        self.identity = 0

    def mul(self, x, y):
        return x + y

    def inv(self, x):
        return -x

    def contains(self, x) -> bool:
        return isinstance(x, int)


def cyclic_group(m: int, label: str = "a") -> FiniteGroup:
    return FiniteGroup(
        f"C{m}",
        range(m),
        lambda x, y: (x + y) % m,
        lambda x: (-x) % m,
        0,
        generators={label: 1 % m} if m > 1 else {},
    )


def elementary_abelian_group(p: int, n: int, label: str = "c") -> FiniteGroup:
    """(Z/p)^n with basis generators labelled ``c0 .. c{n-1}``."""
    from itertools import product

    def basis(i):
        return tuple(1 if j == i else 0 for j in range(n))

    return FiniteGroup(
        f"E({p}^{n})",
        product(range(p), repeat=n),
        lambda x, y: tuple((a + b) % p for a, b in zip(x, y)),
        lambda x: tuple((-a) % p for a in x),
        (0,) * n,
        generators={f"{label}{i}": basis(i) for i in range(n)},
        check=p**n <= 1024,
    )


# ---------------------------------------------------------------------------
# free products


@dataclass(frozen=True)
class FreeProductWord:
    """Normal form in a free product: alternating non-identity syllables."""

    syllables: tuple[tuple[str, object], ...]

    def is_trivial(self) -> bool:
        return not self.syllables

    def __len__(self) -> int:
        return len(self.syllables)


def free_product_reduce(factors: dict, raw, trace: list | None = None) -> FreeProductWord:
    """Reduce a raw syllable list to free-product normal form.

    Adjacent syllables from the same factor are multiplied; identity
    syllables vanish and the merge cascades.  The result is empty exactly
    when the word represents the identity.
    """
    stack: list[tuple[str, object]] = []
    for fid, x in raw:
        if fid not in factors:
            raise NormalFormError(f"unknown factor id {fid!r}")
        factor = factors[fid]
        if not factor.contains(x):
            raise NormalFormError(f"element {x!r} not in factor {fid!r}")
        if x == factor.identity:
            continue
        if stack and stack[-1][0] == fid:
            z = factor.mul(stack[-1][1], x)
            stack.pop()
            if z != factor.identity:
                stack.append((fid, z))
            elif trace is not None:
                trace.append({"rule": "cancel", "factor": fid, "position": len(stack)})
        else:
            stack.append((fid, x))
    return FreeProductWord(tuple(stack))


def free_product_mul(factors: dict, u: FreeProductWord, v: FreeProductWord) -> FreeProductWord:
    return free_product_reduce(factors, u.syllables + v.syllables)


# ---------------------------------------------------------------------------
# amalgamated products of two factors


@dataclass(frozen=True)
class AmalgamNormalForm:
    """Head element of the amalgamated subgroup, then alternating coset reps."""

    head: object
    syllables: tuple[tuple[str, object], ...]

    def is_trivial(self, amalgam: "Amalgam") -> bool:
        return self.head == amalgam.subgroup.identity and not self.syllables


class Amalgam:
    """Two finite factors glued along a common subgroup.

    ``embeddings`` maps each factor id to a dict sending subgroup elements
    to factor elements; both are checked to be injective homomorphisms by
    enumeration.  Coset representatives are the minimal elements of the
    right cosets (image * x) under the fixed element order, with the
    identity representing the subgroup itself, so normal forms are unique.
    """

    def __init__(self, factors: dict[str, FiniteGroup], subgroup: FiniteGroup, embeddings: dict[str, dict]):
        if len(factors) != 2:
            raise NormalFormError("an amalgam needs exactly two factors")
        self.factors = dict(factors)
        self.subgroup = subgroup
        self.embeddings = {fid: dict(emb) for fid, emb in embeddings.items()}
        self.images: dict[str, frozenset] = {}
        self.inverse_embeddings: dict[str, dict] = {}
        self._decomp: dict[str, dict] = {}
        for fid, factor in self.factors.items():
            emb = self.embeddings.get(fid)
            if emb is None:
                raise NormalFormError(f"missing embedding for factor {fid!r}")
            self._check_embedding(fid, factor, emb)
            self.images[fid] = frozenset(emb.values())
            self.inverse_embeddings[fid] = {v: k for k, v in emb.items()}
            self._decomp[fid] = self._coset_tables(fid, factor)

    def _check_embedding(self, fid, factor, emb):
        h = self.subgroup
        if set(emb) != set(h.elements):
            raise NormalFormError(f"embedding into {fid!r} not total on the subgroup")
        if len(set(emb.values())) != h.order:
            raise NormalFormError(f"embedding into {fid!r} is not injective")
        for x in h.elements:
            if emb[x] not in factor.element_set:
                raise NormalFormError(f"embedding into {fid!r} leaves the factor")
            for y in h.elements:
                if emb[h.mul(x, y)] != factor.mul(emb[x], emb[y]):
                    raise NormalFormError(f"embedding into {fid!r} is not a homomorphism")

    def _coset_tables(self, fid, factor):
        emb = self.embeddings[fid]
        image = self.images[fid]
        decomp = {}
        seen = set()
        for x in factor.elements:
            if x in seen:
                continue
            coset = sorted(factor.mul(emb[h], x) for h in self.subgroup.elements)
            rep = factor.identity if x in image else min(coset)
            rep_inv = factor.inv(rep)
            for y in coset:
                seen.add(y)
                decomp[y] = (rep, self.inverse_embeddings[fid][factor.mul(y, rep_inv)])
        return decomp

    def decompose(self, fid: str, x):
        """Split a factor element as (coset rep, subgroup part): x = emb(h) * rep."""
        try:
            return self._decomp[fid][x]
        except KeyError:
            raise NormalFormError(f"element {x!r} outside factor {fid!r}") from None


def amalgam_reduce(amalgam: Amalgam, raw) -> AmalgamNormalForm:
    """Unique normal form of a raw word in the two factors.

    Letters are absorbed right to left: the running form is
    head * syl_1 * ... * syl_m, and prepending a letter only ever touches
    the head and the first syllable, so each step is constant-time in the
    word length.
    """
    raw = list(raw)
    h = amalgam.subgroup.identity
    syllables: list[tuple[str, object]] = []
    for fid, y in reversed(raw):
        if fid not in amalgam.factors:
            raise NormalFormError(f"unknown factor id {fid!r}")
        factor = amalgam.factors[fid]
        if y not in factor.element_set:
            raise NormalFormError(f"element {y!r} outside factor {fid!r}")
        x = factor.mul(y, amalgam.embeddings[fid][h])
        if syllables and syllables[0][0] == fid:
            x = factor.mul(x, syllables[0][1])
            syllables.pop(0)
        rep, h = amalgam.decompose(fid, x)
        if rep != factor.identity:
            syllables.insert(0, (fid, rep))
    return AmalgamNormalForm(h, tuple(syllables))


def amalgam_to_letters(amalgam: Amalgam, nf: AmalgamNormalForm, head_factor: str | None = None):
    """Flatten a normal form back to raw letters (head embedded in a factor)."""
    letters = []
    if nf.head != amalgam.subgroup.identity:
        fid = head_factor or min(amalgam.factors)
        letters.append((fid, amalgam.embeddings[fid][nf.head]))
    letters.extend(nf.syllables)
    return letters


# ---------------------------------------------------------------------------
# HNN-extensions over free-product bases


@dataclass(frozen=True)
class StableLetter:
    """One stable letter with its associated-subgroup isomorphism.

    The relation is  t^-1 x t = plus_to_minus[x]  for x in the plus
    subgroup (inside factor ``plus_factor``), equivalently
    t y t^-1 = minus_to_plus[y] for y in the minus subgroup.
    """

    plus_factor: str
    minus_factor: str
    plus_to_minus: tuple[tuple[object, object], ...]

    @classmethod
    def build(cls, plus_factor, minus_factor, mapping: dict) -> "StableLetter":
        return cls(plus_factor, minus_factor, tuple(sorted(mapping.items())))

    def forward(self) -> dict:
        return dict(self.plus_to_minus)

    def backward(self) -> dict:
        return {v: k for k, v in self.plus_to_minus}


class HnnExtension:
    """HNN-extension of a free product of finite groups.

    ``factors`` maps factor ids to FiniteGroup handles; ``stable`` maps
    stable-letter ids to StableLetter data.  Each associated subgroup must
    be an actual subgroup of its factor and each isomorphism a bijective
    homomorphism; both are verified by enumeration.
    """

    def __init__(self, factors: dict[str, FiniteGroup], stable: dict[str, StableLetter]):
        self.factors = dict(factors)
        self.stable = dict(stable)
        for lid, st in self.stable.items():
            fwd = st.forward()
            self._check_assoc(lid, st.plus_factor, set(fwd))
            self._check_assoc(lid, st.minus_factor, set(fwd.values()))
            if len(set(fwd.values())) != len(fwd):
                raise NormalFormError(f"stable letter {lid!r}: map not injective")
            fplus = self.factors[st.plus_factor]
            fminus = self.factors[st.minus_factor]
            if fwd[fplus.identity] != fminus.identity:
                raise NormalFormError(f"stable letter {lid!r}: identity not preserved")
            for x in fwd:
                for y in fwd:
                    if fwd[fplus.mul(x, y)] != fminus.mul(fwd[x], fwd[y]):
                        raise NormalFormError(f"stable letter {lid!r}: map not a homomorphism")

    def _check_assoc(self, lid, fid, subset):
        if fid not in self.factors:
            raise NormalFormError(f"stable letter {lid!r}: unknown factor {fid!r}")
        factor = self.factors[fid]
        for x in subset:
            if x not in factor.element_set:
                raise NormalFormError(f"stable letter {lid!r}: {x!r} outside factor {fid!r}")
            if factor.inv(x) not in subset:
                raise NormalFormError(f"stable letter {lid!r}: subgroup not closed")
            for y in subset:
                if factor.mul(x, y) not in subset:
                    raise NormalFormError(f"stable letter {lid!r}: subgroup not closed")


def hnn_letter(kind: str, *args):
    """Construct an HNN word letter: ('g', factor, element) or ('t', letter, sign)."""
    if kind == "g":
        fid, elem = args
        return ("g", fid, elem)
    if kind == "t":
        lid, sign = args
        if sign not in (1, -1):
            raise NormalFormError(f"stable letter sign must be +1/-1, got {sign}")
        return ("t", lid, sign)
    raise NormalFormError(f"unknown letter kind {kind!r}")


def _push_base(spec, stack, fid, elem, trace):
    factor = spec.factors[fid]
    if elem == factor.identity:
        return
    if stack and stack[-1][0] == "g" and stack[-1][1] == fid:
        z = factor.mul(stack[-1][2], elem)
        stack.pop()
        if z != factor.identity:
            stack.append(("g", fid, z))
        elif trace is not None:
            trace.append({"rule": "cancel", "factor": fid, "position": len(stack)})
    else:
        stack.append(("g", fid, elem))


def britton_reduce(spec: HnnExtension, word, trace: list | None = None):
    """Britton reduction: eliminate pinches until none remain.

    A pinch is a subword  t^-1 g t  with g in the plus subgroup (rewritten
    to its minus image) or  t g t^-1  with g in the minus subgroup
    (rewritten to its plus image); here g is the base segment between the
    two stable letters, which qualifies only when it collapses to a single
    syllable of the right factor (or to the identity).  The returned word
    is empty iff the input represents the identity.
    """
    stack: list[tuple] = []
    for letter in word:
        if letter[0] == "g":
            _, fid, elem = letter
            if fid not in spec.factors:
                raise NormalFormError(f"unknown factor id {fid!r}")
            if elem not in spec.factors[fid].element_set:
                raise NormalFormError(f"element {elem!r} outside factor {fid!r}")
            _push_base(spec, stack, fid, elem, trace)
            continue
        if letter[0] != "t":
            raise NormalFormError(f"malformed letter {letter!r}")
        _, lid, sign = letter
        if lid not in spec.stable:
            raise NormalFormError(f"unknown stable letter {lid!r}")
        st = spec.stable[lid]
        # collect the base segment sitting on top of the stack
        depth = len(stack)
        while depth > 0 and stack[depth - 1][0] == "g":
            depth -= 1
        segment = stack[depth:]
        prev = stack[depth - 1] if depth > 0 else None
        pinched = None
        if prev is not None and prev[1] == lid and prev[2] == -sign:
            if sign == 1:
                inside, mapping = st.plus_factor, st.forward()
            else:
                inside, mapping = st.minus_factor, st.backward()
            if not segment:
                pinched = (inside, spec.factors[inside].identity)
            elif len(segment) == 1 and segment[0][1] == inside and segment[0][2] in mapping:
                pinched = (inside, segment[0][2])
            if pinched is not None:
                del stack[depth - 1 :]
                target = st.minus_factor if sign == 1 else st.plus_factor
                image = mapping[pinched[1]]
                if trace is not None:
                    trace.append(
                        {
                            "rule": "pinch",
                            "letter": lid,
                            "sign": sign,
                            "position": depth - 1,
                            "element": repr(pinched[1]),
                        }
                    )
                _push_base(spec, stack, target, image, trace)
                continue
        stack.append(("t", lid, sign))
    return tuple(stack)


def is_britton_reduced(spec: HnnExtension, word) -> bool:
    """No pinch pattern occurs anywhere in the word."""
    return britton_reduce(spec, word) == tuple(word)


def stable_letter_counts(word) -> dict:
    counts: dict[str, int] = {}
    for letter in word:
        if letter[0] == "t":
            counts[letter[1]] = counts.get(letter[1], 0) + 1
    return counts
