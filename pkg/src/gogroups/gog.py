"""Graphs of groups and the presentation of their fundamental groups.

A graph of groups assigns a group to every vertex, a group and a pair of
injections to every edge.  Over a chosen maximal tree this yields the
standard presentation: all vertex generators, one stable letter per
non-tree edge, the vertex relators, and for every edge the relators
identifying (tree edge) or conjugating (non-tree edge) the two images of
the edge group.  Edge relators are imposed for the *generators* of the
edge group only; homomorphy extends them to the whole group, so the
normal closure is unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .elemabelian import FpVector, IndexBijection, identity_bijection
from .multigraph import Multigraph, SpanningTree
from .normalform import FiniteGroup, elementary_abelian_group
from .permgroup import Perm
from .words import GroupWord, Presentation


class GogError(ValueError):
    pass


UNPRESENTABLE = "presentation requires finitely generated specs"


# ---------------------------------------------------------------------------
# group specs


class GroupSpec:
    """A vertex or edge group given in one of a few concrete shapes."""

    is_finite = True

    def generator_labels(self) -> tuple[str, ...]:
        raise NotImplementedError

    def to_presentation(self) -> Presentation:
        raise NotImplementedError

    def enumerate_group(self) -> FiniteGroup | None:
        """FiniteGroup handle, or None when the spec is not enumerable."""
        return None


@dataclass(frozen=True)
class PresentationSpec(GroupSpec):
    presentation: Presentation

    def generator_labels(self):
        return self.presentation.generators

    def to_presentation(self):
        return self.presentation

    def enumerate_group(self):
        if not self.presentation.generators:
            return FiniteGroup("1", [0], lambda x, y: 0, lambda x: 0, 0)
        return None


def trivial_spec() -> PresentationSpec:
    return PresentationSpec(Presentation((), ()))


@dataclass(frozen=True)
class PermGroupSpec(GroupSpec):
    """Finite permutation group with named generators (stored as image tuples)."""

    degree: int
    generators: tuple[tuple[str, tuple[int, ...]], ...]

    @classmethod
    def build(cls, degree: int, generators: dict[str, Perm]) -> "PermGroupSpec":
        gens = tuple(sorted((label, p.image) for label, p in generators.items()))
        return cls(degree, gens)

    def generator_labels(self):
        return tuple(label for label, _ in self.generators)

    def _as_group(self) -> FiniteGroup:
        n = self.degree

        def mul(x, y):
            return tuple(y[i] for i in x)

        def inv(x):
            out = [0] * n
            for i, j in enumerate(x):
                out[j] = i
            return tuple(out)

        ident = tuple(range(n))
        elements = {ident}
        frontier = [ident]
        gen_tuples = [g for _, g in self.generators]
        while frontier:
            new = []
            for x in frontier:
                for g in gen_tuples:
                    y = mul(x, g)
                    if y not in elements:
                        elements.add(y)
                        new.append(y)
            frontier = new
        return FiniteGroup(
            f"perm(deg {n})", elements, mul, inv, ident,
            generators=dict(self.generators), check=False,
        )

    def enumerate_group(self):
        return self._as_group()

    def to_presentation(self):
        """Multiplication-table presentation over all non-identity elements.

        Sound for any finite group; the named generators keep their labels
        and every other element gets a positional one.
        """
        group = self._as_group()
        label_of = {g: label for label, g in self.generators}
        names = {}
        counter = 0
        for x in group.elements:
            if x == group.identity:
                continue
            if x in label_of:
                names[x] = label_of[x]
            else:
                names[x] = f"x{counter}"
                counter += 1

        def word(x):
            if x == group.identity:
                return GroupWord.empty()
            return GroupWord.gen(names[x])

        relators = []
        for a in group.elements:
            for b in group.elements:
                if a == group.identity or b == group.identity:
                    continue
                rel = word(a) * word(b) * word(group.mul(a, b)).inverse()
                relators.append(rel)
        return Presentation(tuple(sorted(names.values())), tuple(relators))


def cyclic_spec(m: int, label: str = "a") -> PermGroupSpec:
    """Cyclic group of order m realized as the m-cycle."""
    cycle = Perm(tuple((i + 1) % m for i in range(m)))
    return PermGroupSpec.build(m, {label: cycle})


@dataclass(frozen=True)
class WindowSpec(GroupSpec):
    """Elementary abelian group on basis c_0 .. c_{n-1} over Z/p."""

    p: int
    n: int

    def generator_labels(self):
        return tuple(f"c{i}" for i in range(self.n))

    def to_presentation(self):
        gens = self.generator_labels()
        relators = [GroupWord.gen(g) ** self.p for g in gens]
        for i in range(self.n):
            for j in range(i + 1, self.n):
                a, b = GroupWord.gen(gens[i]), GroupWord.gen(gens[j])
                relators.append(a * b * a.inverse() * b.inverse())
        return Presentation(gens, tuple(relators))

    def enumerate_group(self):
        return elementary_abelian_group(self.p, self.n)


@dataclass(frozen=True)
class InfiniteWindowSpec(GroupSpec):
    """Elementary abelian group on basis c_i, i in Z; not finitely generated."""

    p: int
    is_finite = False

    def generator_labels(self):
        raise GogError(UNPRESENTABLE)

    def to_presentation(self):
        raise GogError(UNPRESENTABLE)


def _bijection_order(b: IndexBijection, probe: int = 64) -> int:
    """Order of a finite-kind bijection as a permutation of {0..n-1}."""
    n = b.modulus
    order = 1
    current = b
    while any(current(i) != i for i in range(n)):
        current = current * b
        order += 1
        if order > probe * n:
            raise GogError("bijection order too large")
    return order


@dataclass(frozen=True)
class SplitExtensionSpec(GroupSpec):
    """Vector group extended by a cyclic group acting by an index bijection.

    ``window`` is n for H_n-based extensions and None for the infinite
    family; ``order`` is the order of the acting letter.
    """

    p: int
    window: int | None
    letter: str
    bijection: IndexBijection
    order: int

    def __post_init__(self):
        if self.bijection.modulus != self.window or self.bijection.p != self.p:
            raise GogError("bijection does not act on the declared window")
        if self.window is not None:
            object.__setattr__(self, "is_finite", True)
            actual = _bijection_order(self.bijection)
            if self.order % actual != 0 or actual == 0:
                raise GogError(f"declared order {self.order} incompatible with action order {actual}")
        else:
            object.__setattr__(self, "is_finite", False)

    def generator_labels(self):
        if self.window is None:
            raise GogError(UNPRESENTABLE)
        return tuple(f"c{i}" for i in range(self.window)) + (self.letter,)

    def to_presentation(self):
        if self.window is None:
            raise GogError(UNPRESENTABLE)
        n = self.window
        cgens = [f"c{i}" for i in range(n)]
        relators = [GroupWord.gen(g) ** self.p for g in cgens]
        for i in range(n):
            for j in range(i + 1, n):
                a, b = GroupWord.gen(cgens[i]), GroupWord.gen(cgens[j])
                relators.append(a * b * a.inverse() * b.inverse())
        x = GroupWord.gen(self.letter)
        relators.append(x ** self.order)
        for i in range(n):
            target = GroupWord.gen(f"c{self.bijection(i)}")
            relators.append(x.inverse() * GroupWord.gen(cgens[i]) * x * target.inverse())
        return Presentation(tuple(cgens) + (self.letter,), tuple(relators))

    def enumerate_group(self):
        if self.window is None:
            return None
        return split_extension_group(self.p, self.window, self.bijection, self.letter, self.order)


def split_extension_group(p: int, n: int, bijection: IndexBijection, letter: str, order: int) -> FiniteGroup:
    """H_n semidirect a cyclic group: elements (vector tuple, exponent).

    Pairs (v, k) stand for v * x^k with x^-1 c_i x = c_{sigma(i)}, so the
    product rule moves the right vector through x^k1 by sigma^(-k1).
    """
    sigma = [bijection(i) for i in range(n)]

    def act(v, times):
        # apply sigma `times` times (right action on basis indices)
        out = list(v)
        for _ in range(times % order):
            moved = [0] * n
            for i in range(n):
                moved[sigma[i]] = out[i]
            out = moved
        return tuple(out)

    def mul(x, y):
        (v1, k1), (v2, k2) = x, y
        return (tuple((a + b) % p for a, b in zip(v1, act(v2, -k1 % order))), (k1 + k2) % order)

    def inv(x):
        v, k = x
        return (tuple((-a) % p for a in act(v, k)), (-k) % order)

    ident = ((0,) * n, 0)
    elements = [
        (vec, k) for vec in product(range(p), repeat=n) for k in range(order)
    ]
    gens = {f"c{i}": (tuple(1 if j == i else 0 for j in range(n)), 0) for i in range(n)}
    gens[letter] = ((0,) * n, 1)
    return FiniteGroup(
        f"E({p}^{n}):C{order}", elements, mul, inv, ident, generators=gens,
        check=(p ** n) * order <= 512,
    )


# ---------------------------------------------------------------------------
# edge data


@dataclass(frozen=True)
class WordInjection:
    """Injection given by generator -> image word over the target's generators."""

    images: tuple[tuple[str, GroupWord], ...]

    @classmethod
    def build(cls, images: dict[str, GroupWord | str]) -> "WordInjection":
        out = []
        for label, w in images.items():
            out.append((label, w if isinstance(w, GroupWord) else GroupWord.parse(w)))
        return cls(tuple(sorted(out)))

    def image_map(self) -> dict[str, GroupWord]:
        return dict(self.images)


@dataclass(frozen=True)
class BijectionInjection:
    """Injection of a vector group given on basis indices: c_i -> c_{sigma(i)}."""

    bijection: IndexBijection

    def apply_vector(self, v: FpVector) -> FpVector:
        b = self.bijection
        return FpVector(v.p, b.modulus, tuple((b(i), e) for i, e in v.entries))


Injection = WordInjection | BijectionInjection


def identity_injection(p: int, window: int | None = None) -> BijectionInjection:
    return BijectionInjection(identity_bijection(p, window))


@dataclass(frozen=True)
class EdgeData:
    group: GroupSpec
    plus: Injection
    minus: Injection

    def injection(self, sign: int) -> Injection:
        return self.plus if sign == 1 else self.minus


@dataclass(frozen=True)
class SubgroupImage:
    """One edge subgroup: generator images and, when finite, the element set."""

    generator_images: tuple[tuple[str, object], ...]
    elements: frozenset | None
    description: str


# ---------------------------------------------------------------------------
# the graph of groups


class GraphOfGroups:
    def __init__(self, graph: Multigraph, vertex_groups: dict[str, GroupSpec], edge_data: dict[str, EdgeData]):
        self.graph = graph
        self.vertex_groups = dict(vertex_groups)
        self.edge_data = dict(edge_data)
        for v in graph.vertices:
            if v not in self.vertex_groups:
                raise GogError(f"vertex {v!r} has no group assigned")
        for e in graph.edges:
            if e.id not in self.edge_data:
                raise GogError(f"edge {e.id!r} has no edge data")
        unknown = set(self.vertex_groups) - set(graph.vertices)
        if unknown:
            raise GogError(f"groups assigned to unknown vertices {sorted(unknown)}")
        unknown = set(self.edge_data) - {e.id for e in graph.edges}
        if unknown:
            raise GogError(f"data assigned to unknown edges {sorted(unknown)}")
        self._verify_injections()

    def _verify_injections(self):
        for e in self.graph.edges:
            data = self.edge_data[e.id]
            for sign in (1, -1):
                inj = data.injection(sign)
                target = self.vertex_groups[e.endpoint(sign)]
                if isinstance(inj, BijectionInjection):
                    # a bijection of indices is invertible by construction;
                    # just make sure the index sets line up
                    self._check_bijection_compat(e.id, inj, data.group, target)
                else:
                    self._check_word_injection(e.id, inj, data.group, target)

    @staticmethod
    def _check_bijection_compat(eid, inj, source, target):
        for spec in (source, target):
            if isinstance(spec, (WindowSpec, InfiniteWindowSpec)):
                window = getattr(spec, "n", None)
            elif isinstance(spec, SplitExtensionSpec):
                window = spec.window
            else:
                raise GogError(f"edge {eid!r}: bijection injection into non-vector spec")
            if window != inj.bijection.modulus:
                raise GogError(f"edge {eid!r}: bijection window mismatch")

    def _check_word_injection(self, eid, inj, source, target):
        images = inj.image_map()
        src_group = source.enumerate_group()
        labels = set(source.generator_labels()) if src_group is not None else set(images)
        if set(images) != labels:
            raise GogError(f"edge {eid!r}: injection not given on all generators")
        tgt_group = target.enumerate_group()
        if src_group is None or tgt_group is None:
            return  # not enumerable; injectivity cannot be checked here
        imgs = {}
        for x, word in src_group.element_words().items():
            imgs[x] = tgt_group.evaluate(word, {l: tgt_group.evaluate(w) for l, w in images.items()})
        if len(set(imgs.values())) != src_group.order:
            raise GogError(f"edge {eid!r}: injection is not injective")

    def edge_subgroup_images(self, edge_id: str) -> tuple[SubgroupImage, SubgroupImage]:
        e = self.graph.edge(edge_id)
        data = self.edge_data[edge_id]
        out = []
        for sign in (1, -1):
            inj = data.injection(sign)
            target = self.vertex_groups[e.endpoint(sign)]
            if isinstance(inj, BijectionInjection):
                gen_images = ((f"c_i", f"c_{{{inj.bijection.tag()}(i)}}"),)
                out.append(
                    SubgroupImage(
                        gen_images,
                        None,
                        "whole vector group, basis re-indexed by "
                        f"{inj.bijection.tag() or 'id'} (supply an index window to list generators)",
                    )
                )
                continue
            images = inj.image_map()
            tgt_group = target.enumerate_group()
            elements = None
            if tgt_group is not None:
                gen_elems = {l: tgt_group.evaluate(w) for l, w in images.items()}
                elements = tgt_group.closure_of(gen_elems.values())
            out.append(
                SubgroupImage(
                    tuple(sorted((l, str(w)) for l, w in images.items())),
                    elements,
                    f"subgroup of the group at vertex {e.endpoint(sign)!r}",
                )
            )
        return out[0], out[1]


def stable_letter(edge_id: str) -> str:
    return f"t.{edge_id}"


def _namespaced(vertex: str, w: GroupWord) -> GroupWord:
    return GroupWord(tuple((f"{vertex}.{g}", s) for g, s in w.letters))


def build_presentation(g: GraphOfGroups, t: SpanningTree) -> Presentation:
    """Presentation of the fundamental group over the maximal tree t.

    Generators: every vertex generator (namespaced ``vertex.gen``) plus one
    stable letter ``t.<edge>`` per non-tree edge.  Relators: the vertex
    relators; for each tree edge and each edge-group generator h the
    identification (h+)(h-)^-1; for each non-tree edge the conjugation
    t^-1 (h+) t (h-)^-1.
    """
    if t.graph is not g.graph and t.graph != g.graph:
        raise GogError("spanning tree belongs to a different graph")
    generators: list[str] = []
    relators: list[GroupWord] = []
    for v in g.graph.vertices:
        spec = g.vertex_groups[v]
        pres = spec.to_presentation()
        generators.extend(f"{v}.{label}" for label in pres.generators)
        relators.extend(_namespaced(v, r) for r in pres.relators)
    non_tree = [e for e in g.graph.edges if not t.contains(e.id)]
    generators.extend(stable_letter(e.id) for e in non_tree)
    if len(set(generators)) != len(generators):
        raise GogError("generator label collision between vertices and stable letters")

    for e in g.graph.edges:
        data = g.edge_data[e.id]
        spec = data.group
        labels = spec.generator_labels()
        plus_images = _injection_words(data.plus, spec)
        minus_images = _injection_words(data.minus, spec)
        for h in labels:
            w_plus = _namespaced(e.plus, plus_images[h])
            w_minus = _namespaced(e.minus, minus_images[h])
            if t.contains(e.id):
                relators.append(w_plus * w_minus.inverse())
            else:
                te = GroupWord.gen(stable_letter(e.id))
                relators.append(te.inverse() * w_plus * te * w_minus.inverse())
    return Presentation(tuple(generators), tuple(relators))


def _injection_words(inj: Injection, spec: GroupSpec) -> dict[str, GroupWord]:
    if isinstance(inj, WordInjection):
        return inj.image_map()
    labels = spec.generator_labels()  # raises for infinite specs
    out = {}
    for label in labels:
        if not label.startswith("c"):
            raise GogError(f"bijection injection cannot map generator {label!r}")
        i = int(label[1:])
        out[label] = GroupWord.gen(f"c{inj.bijection(i)}")
    return out


def edge_subgroup_images(g: GraphOfGroups, edge_id: str):
    return g.edge_subgroup_images(edge_id)


# ---------------------------------------------------------------------------
# description files


def gog_from_dict(data: dict) -> tuple[GraphOfGroups, Multigraph]:
    """Parse the graph-of-groups description schema.

    Extends the multigraph schema with ``vertex_groups`` (presentations),
    ``edge_groups`` (presentations) and ``injections`` (per edge, ``plus``
    and ``minus`` generator -> word maps).  Omitted vertex groups, edge
    groups, and injections default to trivial.
    """
    graph = Multigraph.from_dict(data)
    vgroups = {}
    for v in graph.vertices:
        spec = (data.get("vertex_groups") or {}).get(v)
        if spec is None:
            vgroups[v] = trivial_spec()
        else:
            vgroups[v] = PresentationSpec(
                Presentation.build(spec.get("generators", []), spec.get("relators", []))
            )
    edata = {}
    for e in graph.edges:
        espec = (data.get("edge_groups") or {}).get(e.id)
        if espec is None:
            group = trivial_spec()
        else:
            group = PresentationSpec(
                Presentation.build(espec.get("generators", []), espec.get("relators", []))
            )
        injections = (data.get("injections") or {}).get(e.id, {})
        plus = WordInjection.build(injections.get("plus", {}))
        minus = WordInjection.build(injections.get("minus", {}))
        edata[e.id] = EdgeData(group, plus, minus)
    return GraphOfGroups(graph, vgroups, edata), graph
