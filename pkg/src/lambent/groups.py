"""Finite orthogonal matrix groups and their conjugation action on vector fields."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .exact import ExactMatrix, QuadExt
from .trig import SymFun, VecField


class ClosureTooLarge(RuntimeError):
    pass


@dataclass(frozen=True)
class GroupElement:
    matrix: ExactMatrix
    label: str = field(default="", compare=False)

    def __post_init__(self):
        if not self.matrix.is_orthogonal():
            raise ValueError(f"group element {self.label or self.matrix!r} is not orthogonal")

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(self.matrix @ other.matrix)

    def inverse(self) -> "GroupElement":
        return GroupElement(self.matrix.T, f"{self.label}^-1" if self.label else "")

    def __pow__(self, k: int) -> "GroupElement":
        return GroupElement(self.matrix ** k)

    @property
    def n(self) -> int:
        return self.matrix.n

    @property
    def d(self) -> int:
        return self.matrix.d


@dataclass(frozen=True)
class FiniteGroup:
    name: str
    elements: tuple[GroupElement, ...]

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[GroupElement]:
        return iter(self.elements)

    def __contains__(self, g) -> bool:
        m = g.matrix if isinstance(g, GroupElement) else g
        return m in self.matrices()

    def matrices(self) -> frozenset:
        return frozenset(g.matrix for g in self.elements)

    def issubset(self, other: "FiniteGroup") -> bool:
        return self.matrices() <= other.matrices()

    @property
    def dimension(self) -> int:
        return self.elements[0].n

    @property
    def d(self) -> int:
        return self.elements[0].d


def generate_closure(generators: Sequence[GroupElement], cap: int = 240, name: str = "") -> FiniteGroup:
    """Breadth-first closure of ``generators`` under multiplication."""
    gens = list(generators)
    if not gens:
        raise ValueError("need at least one generator")
    n, d = gens[0].n, gens[0].d
    if any(g.n != n or g.d != d for g in gens):
        raise ValueError("generators differ in dimension or discriminant")
    identity = ExactMatrix.identity(n, d)
    seen = {identity: GroupElement(identity, "I")}
    queue = deque([identity])
    while queue:
        m = queue.popleft()
        for g in gens:
            p = m @ g.matrix
            if p not in seen:
                seen[p] = GroupElement(p)
                if len(seen) > cap:
                    raise ClosureTooLarge(f"closure exceeds {cap} elements; check the generators")
                queue.append(p)
    # a finite set closed under multiplication by generators is closed under inverses as well
    return FiniteGroup(name, tuple(seen.values()))


# -- named generators -------------------------------------------------------

def alpha(d: int = 5) -> GroupElement:
    return GroupElement(ExactMatrix([[1, 0, 0], [0, -1, 0], [0, 0, -1]], d), "alpha")


def beta(d: int = 5) -> GroupElement:
    return GroupElement(ExactMatrix([[0, 1, 0], [1, 0, 0], [0, 0, 1]], d), "beta")


def gamma(d: int = 5) -> GroupElement:
    return GroupElement(ExactMatrix([[0, 1, 0], [0, 0, 1], [1, 0, 0]], d), "gamma")


def delta(d: int = 5) -> GroupElement:
    return GroupElement(ExactMatrix([[0, 1, 0], [1, 0, 0], [0, 0, -1]], d), "delta")


def eta() -> GroupElement:
    phi = QuadExt.phi()
    h = Fraction(1, 2)
    inv2phi = (2 * phi).inverse()
    rows = [
        [h, -phi * h, inv2phi],
        [phi * h, inv2phi, -h],
        [inv2phi, h, phi * h],
    ]
    return GroupElement(ExactMatrix(rows, 5), "eta")


def dihedral_alpha() -> GroupElement:
    s = QuadExt.sqrt(3)
    h = Fraction(1, 2)
    return GroupElement(ExactMatrix([[-h, -s * h], [s * h, -h]], 3), "alpha")


def dihedral_beta() -> GroupElement:
    return GroupElement(ExactMatrix([[0, 1], [1, 0]], 3), "beta")


def swap_yz(d: int = 5) -> GroupElement:
    return GroupElement(ExactMatrix([[1, 0, 0], [0, 0, 1], [0, 1, 0]], d), "swap_yz")


# -- named groups -----------------------------------------------------------

def tetrahedral(d: int = 5) -> FiniteGroup:
    return generate_closure([alpha(d), gamma(d)], name="T")


def full_tetrahedral(d: int = 5) -> FiniteGroup:
    return generate_closure([alpha(d), beta(d), gamma(d)], name="T_hat")


def octahedral(d: int = 5) -> FiniteGroup:
    return generate_closure([alpha(d), gamma(d), delta(d)], name="O")


def klein(d: int = 5) -> FiniteGroup:
    mats = [[1, -1, -1], [-1, 1, -1], [-1, -1, 1], [1, 1, 1]]
    elems = []
    for diag in mats:
        m = ExactMatrix([[diag[i] if i == j else 0 for j in range(3)] for i in range(3)], d)
        elems.append(GroupElement(m))
    return FiniteGroup("K", tuple(elems))


def icosahedral() -> FiniteGroup:
    return generate_closure([alpha(5), gamma(5), eta()], name="I")


def dihedral3() -> FiniteGroup:
    return generate_closure([dihedral_alpha(), dihedral_beta()], name="D3")


GROUPS = {
    "T": tetrahedral,
    "T_hat": full_tetrahedral,
    "O": octahedral,
    "K": klein,
    "I": lambda d=5: icosahedral(),
    "D3": lambda d=3: dihedral3(),
}


def named_group(name: str, d: int | None = None) -> FiniteGroup:
    try:
        make = GROUPS[name]
    except KeyError:
        raise KeyError(f"unknown group {name!r}; choose from {sorted(GROUPS)}") from None
    return make() if d is None else make(d)


# -- action on fields -------------------------------------------------------

def conjugate_field(F: VecField, eps: GroupElement | ExactMatrix) -> VecField:
    """``x -> eps^{-1} F(eps x)``."""
    M = eps.matrix if isinstance(eps, GroupElement) else eps
    if M.n != F.nvars:
        raise ValueError(f"{M.n}x{M.n} matrix cannot act on a field in R^{F.nvars}")
    if M.d != F.d:
        M = M.retag(F.d)
    pulled = [c.substitute_linear(M) for c in F.components]
    inv = M.inverse()
    out = []
    for i in range(M.n):
        acc = SymFun.zero(F.nvars, F.d)
        for j, pj in enumerate(pulled):
            c = inv[i, j]
            if c:
                acc = acc + pj.scale(c)
        out.append(acc)
    return VecField(out)


def is_invariant(F: VecField, G: FiniteGroup | Iterable[GroupElement]) -> tuple[bool, list[GroupElement]]:
    failing = [g for g in G if conjugate_field(F, g) != F]
    return not failing, failing


def galois_map(f: SymFun, perm: Sequence[int]) -> SymFun:
    """``tau(f)`` evaluated at the permuted coordinates ``x_{perm[i]}``."""
    return f.permute(perm).galois_conj()


def galois_map_field(F: VecField | SymFun, perm: Sequence[int]) -> VecField | SymFun:
    """Galois-twisted coordinate permutation.

    For a scalar this is ``tau(f)(x_perm)``; for a field the permutation acts
    by conjugation, ``tau(P^{-1} F(P x))`` with ``P`` the permutation matrix.
    """
    if isinstance(F, SymFun):
        return galois_map(F, perm)
    n = F.nvars
    P = ExactMatrix([[int(j == perm[i]) for j in range(n)] for i in range(n)], F.d)
    return conjugate_field(F, P).map(SymFun.galois_conj)
