"""Words over signed generator alphabets and finite presentations.

A word is a sequence of (generator id, sign) letters with sign +1 or -1;
exponents are kept as runs of signed letters rather than collected powers.
The text form is whitespace-separated tokens ``g`` / ``g^-1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


Letter = tuple[str, int]


class WordError(ValueError):
    pass


@dataclass(frozen=True)
class GroupWord:
    letters: tuple[Letter, ...]

    def __post_init__(self):
        for gen, sign in self.letters:
            if sign not in (1, -1):
                raise WordError(f"letter sign must be +1 or -1, got {sign}")
            if not isinstance(gen, str) or not gen:
                raise WordError(f"bad generator id {gen!r}")

    @classmethod
    def from_letters(cls, letters) -> "GroupWord":
        return cls(tuple(letters))

    @classmethod
    def empty(cls) -> "GroupWord":
        return cls(())

    @classmethod
    def gen(cls, name: str, sign: int = 1) -> "GroupWord":
        return cls(((name, sign),))

    @classmethod
    def parse(cls, text: str) -> "GroupWord":
        """Parse whitespace-separated tokens ``g`` / ``g^-1``."""
        letters = []
        for token in text.split():
            if token.endswith("^-1"):
                letters.append((token[:-3], -1))
            else:
                letters.append((token, 1))
        return cls(tuple(letters))

    def __str__(self) -> str:
        return " ".join(g if s == 1 else f"{g}^-1" for g, s in self.letters)

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        return GroupWord(self.letters + other.letters)

    def inverse(self) -> "GroupWord":
        return GroupWord(tuple((g, -s) for g, s in reversed(self.letters)))

    def __pow__(self, n: int) -> "GroupWord":
        if n < 0:
            return self.inverse() ** (-n)
        return GroupWord(self.letters * n)

    def __len__(self) -> int:
        return len(self.letters)

    def is_empty(self) -> bool:
        return not self.letters

    def generators(self) -> set[str]:
        return {g for g, _ in self.letters}

    def exponent_sums(self) -> dict[str, int]:
        sums: dict[str, int] = {}
        for g, s in self.letters:
            sums[g] = sums.get(g, 0) + s
        return sums


def reduce(w: GroupWord) -> GroupWord:
    """Free reduction: cancel adjacent mutually inverse letters until none remain."""
    stack: list[Letter] = []
    for letter in w.letters:
        if stack and stack[-1][0] == letter[0] and stack[-1][1] == -letter[1]:
            stack.pop()
        else:
            stack.append(letter)
    return GroupWord(tuple(stack))


def is_reduced(w: GroupWord) -> bool:
    return reduce(w).letters == w.letters


@dataclass(frozen=True)
class Presentation:
    """Finitely many generators and relator words over them."""

    generators: tuple[str, ...]
    relators: tuple[GroupWord, ...]

    def __post_init__(self):
        if len(set(self.generators)) != len(self.generators):
            raise WordError("duplicate generator ids")
        gens = set(self.generators)
        for r in self.relators:
            missing = r.generators() - gens
            if missing:
                raise WordError(f"relator mentions unknown generators {sorted(missing)}")

    @classmethod
    def build(cls, generators, relators) -> "Presentation":
        rel = tuple(r if isinstance(r, GroupWord) else GroupWord.parse(r) for r in relators)
        return cls(tuple(generators), rel)

    def to_text(self) -> str:
        lines = ["generators: " + " ".join(self.generators), "relators:"]
        lines += ["  " + str(r) for r in self.relators]
        return "\n".join(lines) + "\n"

    def exponent_matrix(self) -> list[list[int]]:
        """Relator-by-generator matrix of exponent sums."""
        rows = []
        for r in self.relators:
            sums = r.exponent_sums()
            rows.append([sums.get(g, 0) for g in self.generators])
        return rows


def smith_normal_form(matrix: list[list[int]]) -> list[int]:
    """Diagonal of the Smith normal form of an integer matrix.

    Returns the invariant factors d_1 | d_2 | ... (non-negative, zeros
    trailing).  Exact over Python integers, so no overflow is possible;
    intended for the tiny matrices produced by presentations.
    """
    a = [row[:] for row in matrix]
    if not a or not a[0]:
        return []
    rows, cols = len(a), len(a[0])
    diag = []
    r = c = 0
    while r < rows and c < cols:
        # pivot: smallest non-zero magnitude in the remaining block
        pivot = None
        for i in range(r, rows):
            for j in range(c, cols):
                if a[i][j] != 0 and (pivot is None or abs(a[i][j]) < abs(a[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        i, j = pivot
        a[r], a[i] = a[i], a[r]
        for row in a:
            row[c], row[j] = row[j], row[c]
        done = False
        while not done:
            done = True
            for i in range(r + 1, rows):
                if a[i][c]:
                    q = a[i][c] // a[r][c]
                    for j in range(c, cols):
                        a[i][j] -= q * a[r][j]
                    if a[i][c]:
                        a[r], a[i] = a[i], a[r]
                        done = False
            for j in range(c + 1, cols):
                if a[r][j]:
                    q = a[r][j] // a[r][c]
                    for i in range(r, rows):
                        a[i][j] -= q * a[i][c]
                    if a[r][j]:
                        for row in a:
                            row[c], row[j] = row[j], row[c]
                        done = False
        diag.append(abs(a[r][c]))
        r += 1
        c += 1
    # enforce the divisibility chain d_k | d_{k+1}
    for i in range(len(diag)):
        for j in range(i + 1, len(diag)):
            if diag[i] and diag[j] % diag[i] != 0:
                g = math.gcd(diag[i], diag[j])
                diag[j] = diag[i] * diag[j] // g
                diag[i] = g
    return diag


def abelianization_rank(p: Presentation) -> int:
    """Free rank of the abelianized group, via Smith normal form."""
    matrix = p.exponent_matrix()
    if not matrix:
        return len(p.generators)
    diag = smith_normal_form(matrix)
    nonzero = sum(1 for d in diag if d != 0)
    return len(p.generators) - nonzero
