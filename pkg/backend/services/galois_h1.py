"""
H^1 of Z/2 with coefficients in a finite involutive group, by enumeration.

Cocycles are the elements a with a * theta(a) = e, and a ~ b * a * theta(b)^-1.
For the torus R^n / Z^n with an involution g the level-L shadow
((1/L) Z)^n / Z^n = (Z/L)^n gives H^1 = ker(1 + g) / im(g - 1), and the
inclusion into level 2L is v -> 2v.
"""

from itertools import product as cartesian
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy.combinatorics import Permutation, PermutationGroup
from sympy.combinatorics.named_groups import (
    AbelianGroup, CyclicGroup, DihedralGroup, SymmetricGroup
)

from ..models.group_models import (
    CocycleClassSet, FiniteInvolutiveGroup, TorusActionSpec, TorusColimitResult
)
from ..utils.exceptions import CohomologyError, InvalidGroupError
from ..utils.logging_config import LoggingMixin, log_performance

# the three tori with answers Z/2, 0, 0
TORUS_CASES: Tuple[Tuple[str, Tuple[Tuple[int, ...], ...], int], ...] = (
    ("trivial-circle", ((1,),), 2),
    ("inverted-circle", ((-1,),), 1),
    ("twisted-plane", ((1, 1), (0, -1)), 1),
)


def _orbit_classes(candidates: Sequence[int], orbit_of: Callable[[int], np.ndarray]) -> Tuple[Tuple[int, ...], ...]:
    seen = set()
    classes = []
    for a in sorted(candidates):
        if a in seen:
            continue
        members = tuple(sorted(set(int(x) for x in orbit_of(a))))
        seen.update(members)
        classes.append(members)
    return tuple(classes)


def cocycles(group: FiniteInvolutiveGroup) -> List[int]:
    e = group.identity
    table, theta = group.table, group.theta
    return [a for a in range(group.order) if table[a, theta[a]] == e]


def h1(group: FiniteInvolutiveGroup) -> CocycleClassSet:
    """Cocycle classes under a ~ b a theta(b)^-1"""
    table, theta, inverses = group.table, group.theta, group.inverses
    twisted_inverse = inverses[theta]

    def orbit(a: int) -> np.ndarray:
        return table[table[:, a], twisted_inverse]

    return CocycleClassSet(group.name, _orbit_classes(cocycles(group), orbit))


def involution_classes(group: FiniteInvolutiveGroup) -> Tuple[Tuple[int, ...], ...]:
    """Conjugacy classes of elements g with g^2 = e"""
    e, table, inverses = group.identity, group.table, group.inverses
    involutions = [g for g in range(group.order) if table[g, g] == e]

    def conjugates(g: int) -> np.ndarray:
        return table[table[:, g], inverses]

    return _orbit_classes(involutions, conjugates)


def h1_trivial_action(group: FiniteInvolutiveGroup) -> int:
    """Number of conjugacy classes of elements of order at most 2; theta is ignored"""
    return len(involution_classes(group))


def h1_trivial_action_sympy(group: PermutationGroup) -> int:
    """Same count read off sympy's conjugacy classes"""
    return sum(
        1 for conjugacy_class in group.conjugacy_classes()
        if (next(iter(conjugacy_class)) ** 2).is_Identity
    )


def abelian_quotient_count(group: FiniteInvolutiveGroup) -> int:
    """
    |ker(1 + theta)| / |im(theta - 1)| for abelian groups.

    Raises:
        InvalidGroupError: the group is not abelian
        CohomologyError: the quotient is not an integer
    """
    if not group.is_abelian():
        raise InvalidGroupError(f"{group.name} is not abelian", error_code="NOT_ABELIAN")
    table, theta, inverses = group.table, group.theta, group.inverses
    kernel = len(cocycles(group))
    image = len({int(table[theta[b], inverses[b]]) for b in range(group.order)})
    if kernel % image:
        raise CohomologyError(
            f"{group.name}: coboundaries ({image}) do not divide cocycles ({kernel})",
            details={'kernel': kernel, 'image': image}
        )
    return kernel // image


# -- torus shadows -------------------------------------------------------------

def _level_vectors(n: int, level: int) -> np.ndarray:
    return np.array(list(cartesian(range(level), repeat=n)), dtype=np.int64).reshape(-1, n)


class _TorusLevel:
    """H^1 of Z/2 acting on (Z/level)^n through g"""

    def __init__(self, spec: TorusActionSpec, level: int):
        self.level = level
        n = spec.n
        identity = np.eye(n, dtype=np.int64)
        vectors = _level_vectors(n, level)
        kernel_mask = ((vectors @ (identity + spec.matrix).T) % level == 0).all(axis=1)
        self.kernel = vectors[kernel_mask]
        self.coboundaries = np.unique((vectors @ (spec.matrix - identity).T) % level, axis=0)
        self.weights = level ** np.arange(n, dtype=np.int64)

    def class_code(self, vector: np.ndarray) -> int:
        """Smallest base-level code in the coset vector + coboundaries"""
        return int(((((vector + self.coboundaries) % self.level) @ self.weights)).min())

    def classes(self) -> Dict[int, np.ndarray]:
        result: Dict[int, np.ndarray] = {}
        for vector in self.kernel:
            result.setdefault(self.class_code(vector), vector)
        return result


def doubling_chain(n_max: int) -> List[int]:
    """2, 4, 8, ... ending exactly at n_max"""
    if n_max < 2 or n_max & (n_max - 1):
        raise ValueError(f"doubling chain needs a power of two >= 2, got {n_max}")
    levels = [2]
    while levels[-1] * 2 <= n_max:
        levels.append(levels[-1] * 2)
    return levels


def h1_torus_level(spec: TorusActionSpec, level: int) -> int:
    return len(_TorusLevel(spec, level).classes())


def h1_torus_colimit(spec: TorusActionSpec, n_max: int) -> TorusColimitResult:
    """
    Image sizes of H^1 at level L inside level 2L along 2, 4, 8, ... up to n_max.

    Raises:
        ValueError: n_max not a power of two or below 4
    """
    if n_max < 4 or n_max & (n_max - 1):
        raise ValueError(f"torus level must be a power of two >= 4, got {n_max}")
    levels = doubling_chain(n_max)
    shadows = [_TorusLevel(spec, level) for level in levels]
    h1_sizes = tuple(len(shadow.classes()) for shadow in shadows)
    image_sizes = []
    for lower, upper in zip(shadows, shadows[1:]):
        images = {upper.class_code(2 * vector) for vector in lower.classes().values()}
        image_sizes.append(len(images))
    return TorusColimitResult(spec.name, tuple(levels), h1_sizes, tuple(image_sizes))


# -- corpus --------------------------------------------------------------------

def _quaternion_group() -> PermutationGroup:
    # left-regular action on 1, -1, i, -i, j, -j, k, -k
    i = Permutation([2, 3, 1, 0, 6, 7, 5, 4])
    j = Permutation([4, 5, 7, 6, 1, 0, 2, 3])
    return PermutationGroup([i, j])


def _inversion(p: Permutation) -> Permutation:
    return p ** -1


def _conjugation_by(c: Permutation) -> Callable[[Permutation], Permutation]:
    def automorphism(p: Permutation) -> Permutation:
        return c * p * c ** -1
    return automorphism


def permutation_corpus() -> Dict[str, PermutationGroup]:
    """Small groups of order at most 24"""
    return {
        "Z2": CyclicGroup(2),
        "Z4": CyclicGroup(4),
        "Z6": CyclicGroup(6),
        "Z2xZ2": AbelianGroup(2, 2),
        "Z2xZ4": AbelianGroup(2, 4),
        "S3": SymmetricGroup(3),
        "D4": DihedralGroup(4),
        "D6": DihedralGroup(6),
        "Q8": _quaternion_group(),
        "S4": SymmetricGroup(4),
    }


def group_corpus() -> List[FiniteInvolutiveGroup]:
    """Trivial-theta tables of the permutation corpus plus a few twisted actions"""
    groups = [
        FiniteInvolutiveGroup.from_permutation_group(group, name=name)
        for name, group in permutation_corpus().items()
    ]
    groups.append(FiniteInvolutiveGroup.from_permutation_group(CyclicGroup(4), _inversion, "Z4/inversion"))
    groups.append(FiniteInvolutiveGroup.from_permutation_group(AbelianGroup(2, 4), _inversion, "Z2xZ4/inversion"))
    s3 = SymmetricGroup(3)
    groups.append(
        FiniteInvolutiveGroup.from_permutation_group(s3, _conjugation_by(Permutation([1, 0, 2])), "S3/conjugation")
    )
    d4 = DihedralGroup(4)
    reflection = next(p for p in d4.generators if p.order() == 2)
    groups.append(FiniteInvolutiveGroup.from_permutation_group(d4, _conjugation_by(reflection), "D4/conjugation"))
    return groups


def cyclic_inversion(n: int) -> FiniteInvolutiveGroup:
    """Z/n with theta(a) = -a, built directly from modular tables"""
    elements = np.arange(n)
    table = (elements[:, None] + elements[None, :]) % n
    return FiniteInvolutiveGroup.from_table(table, (-elements) % n, f"Z{n}/inversion")


class GaloisCohomologyService(LoggingMixin):
    """Enumeration front end used by the cohomology suite and the h1 command"""

    @log_performance
    def classes(self, group: FiniteInvolutiveGroup) -> CocycleClassSet:
        result = h1(group)
        self.log_operation("h1", group=group.name, order=group.order, count=result.count)
        return result

    def trivial_action_agreement(self, groups: Optional[Sequence[FiniteInvolutiveGroup]] = None) -> Dict[str, Tuple[int, int]]:
        """(h1 with trivial theta, involution class count) per group"""
        groups = groups if groups is not None else group_corpus()
        return {
            group.name: (h1(group.trivialized()).count, h1_trivial_action(group))
            for group in groups if group.has_trivial_theta()
        }

    def abelian_agreement(self, groups: Optional[Sequence[FiniteInvolutiveGroup]] = None) -> Dict[str, Tuple[int, int]]:
        """(enumerated count, quotient formula) per abelian group"""
        groups = groups if groups is not None else group_corpus()
        return {
            group.name: (h1(group).count, abelian_quotient_count(group))
            for group in groups if group.is_abelian()
        }

    def sympy_agreement(self) -> Dict[str, Tuple[int, int]]:
        """Table-based involution count against sympy's conjugacy classes"""
        return {
            name: (
                h1_trivial_action(FiniteInvolutiveGroup.from_permutation_group(group, name=name)),
                h1_trivial_action_sympy(group)
            )
            for name, group in permutation_corpus().items()
        }

    @log_performance
    def torus_cases(self, n_max: int) -> List[TorusColimitResult]:
        results = [
            h1_torus_colimit(TorusActionSpec.of(matrix, name), n_max)
            for name, matrix, _ in TORUS_CASES
        ]
        self.log_operation("torus_cases", n_max=n_max, values=[r.value for r in results])
        return results
