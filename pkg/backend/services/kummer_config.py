"""
The double Kummer pencil as a lattice.

Twenty-four (-2)-curves E_i, F_j, C_ij with C_ij meeting exactly E_i and F_j,
the four named fiber divisors, and the automorphisms tau, nu, sigma, epsilon
realized as checked isometries of the intersection table.
"""

from typing import Dict, FrozenSet, Mapping, Optional, Sequence, Tuple

import numpy as np
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from ..models.lattice_models import (
    CURVE_COUNT, AutomorphismData, ConfigAutomorphism, CurveId, DivisorClass,
    IntersectionTable, PartialAction, expected_pairing
)
from ..utils.cache import cache_result, construction_cache, make_key
from ..utils.exceptions import IsometryViolationError, MissingFlagError
from ..utils.logging_config import LoggingMixin, log_performance
from .elliptic_legendre import EllipticLegendreService
from .exact_field import S, T

# Declared component orders; cycles are read off these
NAMED_DIVISORS: Dict[str, Tuple[str, ...]] = {
    "D1": ("F0", "C10", "E1", "C13", "F3", "C23", "E2", "C20"),
    "D1'": ("E0", "C01", "F1", "C31", "E3", "C32", "F2", "C02"),
    "D2": ("F0", "C30", "E3", "C31", "F1", "C21", "E2", "C20"),
    "D2'": ("E0", "C03", "F3", "C13", "E1", "C12", "F2", "C02"),
}

AUTOMORPHISM_ALIASES = {
    "tau": "tau", "τ": "tau",
    "nu": "nu", "ν": "nu",
    "sigma": "sigma", "σ": "sigma",
    "epsilon": "epsilon", "ε": "epsilon",
}

# action on the 2-form
CHARACTERS = {"tau": 1, "nu": 1, "sigma": -1, "epsilon": -1, "psi": -1}

# 2-torsion index k on (E, F) whose translation induces the automorphism
TRANSLATION_INDICES = {"tau": (3, 3), "nu": (1, 1), "sigma": (2, 1)}


@cache_result(construction_cache, key_func=lambda: make_key("intersection_table"))
def build_intersection_table() -> IntersectionTable:
    """Table of the incidence rule, built entry by entry"""
    ids = CurveId.ordered()
    matrix = np.zeros((CURVE_COUNT, CURVE_COUNT), dtype=np.int64)
    for a in ids:
        for b in ids:
            matrix[a.index, b.index] = expected_pairing(a, b)
    return IntersectionTable(matrix)


def named_divisor(name: str) -> DivisorClass:
    try:
        labels = NAMED_DIVISORS[name]
    except KeyError:
        raise ValueError(f"Unknown fiber divisor {name!r}; expected one of {sorted(NAMED_DIVISORS)}") from None
    return DivisorClass.from_components((CurveId[label] for label in labels), name)


def declared_components(name: str) -> Tuple[CurveId, ...]:
    return tuple(CurveId[label] for label in NAMED_DIVISORS[name])


def rational_rank(matrix: np.ndarray) -> int:
    """Rank over Q of an integer matrix"""
    if matrix.size == 0:
        return 0
    rows = [[int(x) for x in row] for row in matrix.tolist()]
    return DomainMatrix.from_list(rows, QQ).rank()


def _is_index_permutation(values: Sequence[int]) -> bool:
    return sorted(values) == [0, 1, 2, 3]


class KummerConfigService(LoggingMixin):
    """Divisor arithmetic and automorphisms over one intersection table"""

    def __init__(
        self,
        table: Optional[IntersectionTable] = None,
        legendre: Optional[EllipticLegendreService] = None
    ):
        self._table = table
        self.legendre = legendre or EllipticLegendreService()

    def intersection_matrix(self) -> IntersectionTable:
        return self._table if self._table is not None else build_intersection_table()

    @property
    def is_overridden(self) -> bool:
        return self._table is not None

    def gram_rank(self, ids: Optional[Sequence[CurveId]] = None) -> int:
        """Rank over Q of the Gram matrix, optionally restricted to some curves"""
        table = self.intersection_matrix()
        matrix = table.matrix if ids is None else table.submatrix(ids)
        return rational_rank(matrix)

    def pair(self, a: DivisorClass, b: DivisorClass) -> int:
        gram = self.intersection_matrix().matrix
        return int(a.vector() @ gram @ b.vector())

    def divisor(self, name: str) -> DivisorClass:
        return named_divisor(name)

    def sections_of(self, fiber_class: DivisorClass) -> FrozenSet[CurveId]:
        """Curves meeting the fiber class once that are not fiber components"""
        table = self.intersection_matrix()
        sections = set()
        for curve in CurveId.ordered():
            if curve in fiber_class:
                continue
            if table[curve, curve] == -2 and self.pair(DivisorClass.of(curve), fiber_class) == 1:
                sections.add(curve)
        return frozenset(sections)

    # -- automorphisms -------------------------------------------------

    def automorphism_data(self, name: str) -> AutomorphismData:
        """Index permutations read off the 2-torsion translations of E and F"""
        name = self._canonical(name)
        if name == "epsilon":
            return AutomorphismData(source={'rule': 'E_i <-> F_i, C_ij <-> C_ji'})
        k_e, k_f = TRANSLATION_INDICES[name]
        # sigma only exists when E = F, so both curves carry the same parameter
        e_curve = self.legendre.curve(S, name="E")
        f_curve = self.legendre.curve(S if name == "sigma" else T, name="F")
        return AutomorphismData(
            e_permutation=self.legendre.translation_permutation(e_curve, k_e),
            f_permutation=self.legendre.translation_permutation(f_curve, k_f),
            e_equals_f=(name == "sigma"),
            source={'k_E': k_e, 'k_F': k_f}
        )

    @log_performance
    def make_automorphism(self, name: str, data: Optional[AutomorphismData] = None) -> ConfigAutomorphism:
        """
        Build tau, nu, sigma or epsilon and check that it is an isometry.

        Raises:
            MissingFlagError: sigma without the E = F flag
            IsometryViolationError: the permutation does not preserve the table
        """
        name = self._canonical(name)
        if data is None:
            data = self.automorphism_data(name)

        if name == "epsilon":
            mapping = self._epsilon_mapping()
        else:
            if not (_is_index_permutation(data.e_permutation) and _is_index_permutation(data.f_permutation)):
                raise IsometryViolationError(
                    f"{name}: index data is not a pair of permutations of 0..3",
                    details={'e': list(data.e_permutation), 'f': list(data.f_permutation)}
                )
            if name == "sigma":
                if not data.e_equals_f:
                    raise MissingFlagError(
                        "sigma exchanges E and F and is only defined when E = F",
                        error_code="MISSING_E_EQUALS_F"
                    )
                mapping = self._sigma_mapping(data.e_permutation, data.f_permutation)
            else:
                mapping = self._translation_mapping(data.e_permutation, data.f_permutation)

        automorphism = ConfigAutomorphism.from_mapping(name, mapping, CHARACTERS[name])
        self.require_isometry(automorphism)
        self.log_operation("make_automorphism", name=name, character=automorphism.character)
        return automorphism

    def is_isometry(self, automorphism: ConfigAutomorphism) -> bool:
        gram = self.intersection_matrix().matrix
        p = list(automorphism.permutation)
        return bool(np.array_equal(gram[np.ix_(p, p)], gram))

    def require_isometry(self, automorphism: ConfigAutomorphism) -> None:
        if not self.is_isometry(automorphism):
            raise IsometryViolationError(
                f"{automorphism.name} does not preserve the intersection table",
                error_code="ISOMETRY_VIOLATION",
                details={'automorphism': automorphism.name}
            )

    def compose(self, a: ConfigAutomorphism, b: ConfigAutomorphism) -> ConfigAutomorphism:
        """a after b; characters multiply"""
        permutation = tuple(a.permutation[b.permutation[i]] for i in range(CURVE_COUNT))
        return ConfigAutomorphism(f"{a.name}*{b.name}", permutation, a.character * b.character)

    def psi_partial_action(self) -> PartialAction:
        """psi is pinned down only on E2, C20, C21, C23, C32"""
        pairs = (
            ("E2", "E2"),
            ("C20", "C21"),
            ("C21", "C20"),
            ("C23", "C23"),
            ("C32", "C32"),
        )
        return PartialAction(
            "psi",
            tuple((CurveId[a], CurveId[b]) for a, b in pairs),
            CHARACTERS["psi"]
        )

    # -- permutation rules ----------------------------------------------

    @staticmethod
    def _canonical(name: str) -> str:
        try:
            return AUTOMORPHISM_ALIASES[name]
        except KeyError:
            raise ValueError(f"Unknown automorphism {name!r}") from None

    @staticmethod
    def _translation_mapping(e_perm: Sequence[int], f_perm: Sequence[int]) -> Mapping[CurveId, CurveId]:
        """E_i -> E_t(i), F_j -> F_t'(j), C_ij -> C_t(i)t'(j)"""
        mapping = {}
        for i in range(4):
            mapping[CurveId.E(i)] = CurveId.E(e_perm[i])
            mapping[CurveId.F(i)] = CurveId.F(f_perm[i])
            for j in range(4):
                mapping[CurveId.C(i, j)] = CurveId.C(e_perm[i], f_perm[j])
        return mapping

    @staticmethod
    def _sigma_mapping(s_perm: Sequence[int], s_prime: Sequence[int]) -> Mapping[CurveId, CurveId]:
        """E_i -> F_s(i), F_j -> E_s'(j), C_ij -> C_s'(j)s(i)"""
        mapping = {}
        for i in range(4):
            mapping[CurveId.E(i)] = CurveId.F(s_perm[i])
            mapping[CurveId.F(i)] = CurveId.E(s_prime[i])
            for j in range(4):
                mapping[CurveId.C(i, j)] = CurveId.C(s_prime[j], s_perm[i])
        return mapping

    @staticmethod
    def _epsilon_mapping() -> Mapping[CurveId, CurveId]:
        mapping = {}
        for i in range(4):
            mapping[CurveId.E(i)] = CurveId.F(i)
            mapping[CurveId.F(i)] = CurveId.E(i)
            for j in range(4):
                mapping[CurveId.C(i, j)] = CurveId.C(j, i)
        return mapping
