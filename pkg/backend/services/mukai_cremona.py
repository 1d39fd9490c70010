"""
Mukai's Enriques involution at the level of P^1 x P^1 in P^3.

The sixteen points p_ij are Segre images of pairs of Legendre 2-torsion
x-coordinates. A projective frame sends p00, p11, p22, p33 to the coordinate
points and rescales so that the Segre quadric becomes

    a1 w2 w3 + a2 w1 w3 + a3 w1 w2 + (w1 + w2 + w3) w4 = 0

on which the Cremona map
[a1 w2 w3 w4 : a2 w1 w3 w4 : a3 w1 w2 w4 : a1 a2 a3 w1 w2 w3] is checked
symbolically over Q(s, t).
"""

from typing import Any, Dict, List, Optional, Sequence, Tuple

from sympy.polys.orderings import grlex
from sympy.polys.matrices import DomainMatrix
from sympy.polys.rings import PolyElement, ring

from ..models.curve_models import INFINITY, Coordinate
from ..models.projective_models import AlphaTriple, Matrix4, MukaiFrame, ProjPoint3, QuadricForm, lift
from ..utils.cache import construction_cache, make_key
from ..utils.exceptions import (
    CoplanarityError, ErrorHandler, IndeterminacyError, TemplateUnreachableError
)
from ..utils.logging_config import LoggingMixin, log_performance
from .exact_field import DOMAIN, ONE, ZERO, RationalFunction, S, Scalar, T, rf, to_text

W_RING, W1, W2, W3, W4 = ring("w1,w2,w3,w4", DOMAIN, grlex)
U_RING, U = ring("u", DOMAIN)

FRAME_POINTS = ((0, 0), (1, 1), (2, 2), (3, 3))


def values_of(parameter: Scalar) -> Tuple[Coordinate, ...]:
    return (ZERO, ONE, rf(parameter), INFINITY)


def _homogeneous(value: Any) -> Tuple[Any, Any]:
    """[a : b] for an affine value, [1 : 0] for infinity"""
    if value is INFINITY:
        return ONE, ZERO
    if isinstance(value, tuple):
        return value
    return value, lift(ONE, value) if isinstance(value, PolyElement) else ONE


def segre(u: Any, v: Any) -> ProjPoint3:
    """([a:b], [c:d]) -> [ac : ad : bc : bd]"""
    a, b = _homogeneous(u)
    c, d = _homogeneous(v)
    if isinstance(a, PolyElement) or isinstance(c, PolyElement):
        like = a if isinstance(a, PolyElement) else c
        a, b, c, d = (x if isinstance(x, PolyElement) else lift(rf(x), like) for x in (a, b, c, d))
    return ProjPoint3((a * c, a * d, b * c, b * d))


def smoothness_disc(alpha: AlphaTriple) -> RationalFunction:
    a1, a2, a3 = alpha.as_tuple()
    return a1 * a1 + a2 * a2 + a3 * a3 - 2 * a1 * a2 - 2 * a1 * a3 - 2 * a2 * a3


def cremona(alpha: AlphaTriple, w: ProjPoint3) -> ProjPoint3:
    """
    [a1 w2 w3 w4 : a2 w1 w3 w4 : a3 w1 w2 w4 : a1 a2 a3 w1 w2 w3]

    Raises:
        IndeterminacyError: every product vanishes
    """
    w1, w2, w3, w4 = w.coords
    a1, a2, a3 = (lift(a, w1) for a in alpha.as_tuple())
    image = (a1 * w2 * w3 * w4, a2 * w1 * w3 * w4, a3 * w1 * w2 * w4, a1 * a2 * a3 * w1 * w2 * w3)
    if all(not c for c in image):
        raise IndeterminacyError(
            "Cremona map is undefined at this point",
            error_code="INDETERMINACY",
            details=w.to_dict()
        )
    return ProjPoint3(image)


def apply_matrix(matrix: Matrix4, w: ProjPoint3) -> ProjPoint3:
    coords = []
    for row in matrix:
        total = None
        for entry, x in zip(row, w.coords):
            if entry.is_zero():
                continue
            term = lift(entry, x) * x
            total = term if total is None else total + term
        coords.append(total if total is not None else ZERO)
    if any(isinstance(c, PolyElement) for c in coords):
        like = next(c for c in coords if isinstance(c, PolyElement))
        coords = [c if isinstance(c, PolyElement) else lift(c, like) for c in coords]
    return ProjPoint3(tuple(coords))


def _domain_matrix(rows: Sequence[Sequence[RationalFunction]]) -> DomainMatrix:
    return DomainMatrix([[rf(x).frac for x in row] for row in rows], (len(rows), len(rows[0])), DOMAIN)


def _from_domain_matrix(matrix: DomainMatrix) -> Matrix4:
    return tuple(tuple(rf(x) for x in row) for row in matrix.to_list())


def transpose(matrix: Matrix4) -> Matrix4:
    return tuple(zip(*matrix))


def matmul(a: Matrix4, b: Matrix4) -> Matrix4:
    return _from_domain_matrix(_domain_matrix(a).matmul(_domain_matrix(b)))


def transform_quadric(quadric: QuadricForm, inverse: Matrix4) -> QuadricForm:
    """The form q(inverse . y) in the new coordinates y"""
    return QuadricForm(matmul(matmul(transpose(inverse), quadric.matrix), inverse))


def template_equation(alpha: AlphaTriple) -> str:
    a1, a2, a3 = (to_text(a) for a in alpha.as_tuple())
    return f"{a1}*w2*w3 + {a2}*w1*w3 + {a3}*w1*w2 + (w1+w2+w3)*w4 = 0"


class MukaiCremonaService(LoggingMixin):
    """Frames, template coefficients and symbolic Cremona identities"""

    def sixteen_points(self, s: Scalar = S, t: Scalar = T) -> Dict[Tuple[int, int], ProjPoint3]:
        """p_ij = segre(value_i(s), value_j(t)); s, t must avoid 0 and 1"""
        s, t = rf(s), rf(t)
        ErrorHandler.validate_construction_parameters(s, t, allow_diagonal=True)
        e_values, f_values = values_of(s), values_of(t)
        return {(i, j): segre(e_values[i], f_values[j]) for i in range(4) for j in range(4)}

    def frame_basis(self, points: Dict[Tuple[int, int], ProjPoint3]) -> Matrix4:
        """Matrix whose columns are p00, p11, p22, p33"""
        columns = [points[key].coords for key in FRAME_POINTS]
        return transpose(tuple(tuple(column) for column in columns))

    def non_coplanar_det(self, s: Scalar = S, t: Scalar = T) -> RationalFunction:
        basis = self.frame_basis(self.sixteen_points(s, t))
        return rf(_domain_matrix(basis).det())

    @log_performance
    def frame_and_alphas(self, s: Scalar = S, t: Scalar = T) -> MukaiFrame:
        """
        Frame M with M p_kk on the k-th coordinate point and the template
        coefficients of the transformed Segre quadric.

        Raises:
            ForbiddenParameterError: s or t in {0, 1}
            CoplanarityError: p00, p11, p22, p33 lie on a plane (s = t)
            TemplateUnreachableError: a w_k w4 coefficient vanishes
        """
        s, t = rf(s), rf(t)
        key = make_key("mukai_frame", to_text(s), to_text(t))
        cached = construction_cache.get(key)
        if cached is not None:
            return cached

        points = self.sixteen_points(s, t)
        basis = self.frame_basis(points)
        basis_matrix = _domain_matrix(basis)
        determinant = rf(basis_matrix.det())
        if determinant.is_zero():
            raise CoplanarityError(
                "p00, p11, p22, p33 are coplanar",
                error_code="COPLANAR",
                details={'s': to_text(s), 't': to_text(t)}
            )

        segre_form = QuadricForm.segre()
        frame = [points[key].coords for key in FRAME_POINTS]
        c = {
            (i, j): segre_form.polar(frame[i - 1], frame[j - 1])
            for i in range(1, 5) for j in range(i + 1, 5)
        }
        for k in (1, 2, 3):
            if c[(k, 4)].is_zero():
                raise TemplateUnreachableError(
                    f"Coefficient of w{k}w4 vanishes; a line of the frame lies in the quadric",
                    error_code="TEMPLATE_UNREACHABLE",
                    details={'k': k}
                )

        # M = diag(c14, c24, c34, 1) B^-1 makes every w_k w4 coefficient 1
        scaling = tuple(
            tuple(c[(i + 1, 4)] if i == j and i < 3 else (ONE if i == j else ZERO) for j in range(4))
            for i in range(4)
        )
        basis_inverse = _from_domain_matrix(basis_matrix.inv())
        matrix = matmul(scaling, basis_inverse)
        inverse = _from_domain_matrix(_domain_matrix(matrix).inv())

        alphas = AlphaTriple(
            c[(2, 3)] / (c[(2, 4)] * c[(3, 4)]),
            c[(1, 3)] / (c[(1, 4)] * c[(3, 4)]),
            c[(1, 2)] / (c[(1, 4)] * c[(2, 4)]),
        )
        result = MukaiFrame(
            s=s, t=t,
            points=tuple(sorted(points.items())),
            determinant=determinant,
            matrix=matrix,
            inverse=inverse,
            alphas=alphas
        )
        self.log_operation("frame_and_alphas", s=to_text(s), t=to_text(t))
        construction_cache.put(key, result)
        return result

    # -- checks ----------------------------------------------------------------

    def transformed_quadric(self, frame: MukaiFrame) -> QuadricForm:
        return transform_quadric(QuadricForm.segre(), frame.inverse)

    def template_identity(self, frame: MukaiFrame, alpha: Optional[AlphaTriple] = None) -> bool:
        """Transformed Segre quadric equals the template with the given coefficients"""
        return self.transformed_quadric(frame) == QuadricForm.template(alpha or frame.alphas)

    def frame_is_standard(self, frame: MukaiFrame) -> bool:
        return all(
            apply_matrix(frame.matrix, frame.point(*key)).is_standard(k)
            for k, key in enumerate(FRAME_POINTS, start=1)
        )

    def generic_point(self) -> ProjPoint3:
        return ProjPoint3((W1, W2, W3, W4))

    def verify_cremona_preserves_quadric(self, alpha: AlphaTriple, quadric: Optional[QuadricForm] = None) -> bool:
        """q(cremona(w)) is a nonzero multiple of q(w) for symbolic w"""
        return self.preservation_cofactor(alpha, quadric) is not None

    def preservation_cofactor(self, alpha: AlphaTriple, quadric: Optional[QuadricForm] = None) -> Optional[PolyElement]:
        quadric = quadric or QuadricForm.template(alpha)
        w = self.generic_point()
        original = quadric.evaluate(w.coords)
        image = quadric.evaluate(cremona(alpha, w).coords)
        if not original:
            return None
        quotient, remainder = image.div(original)
        if remainder or not quotient:
            return None
        return quotient

    def verify_cremona_involution(self, alpha: AlphaTriple) -> bool:
        w = self.generic_point()
        return cremona(alpha, cremona(alpha, w)).same_point(w)

    def verify_pij_swap(self, s: Scalar = S, t: Scalar = T) -> bool:
        return all(self.pij_swap_results(self.frame_and_alphas(s, t)).values())

    def pij_swap_results(self, frame: MukaiFrame, alpha: Optional[AlphaTriple] = None) -> Dict[str, bool]:
        """cremona(M p_ij) = M p_ji for every i != j"""
        alpha = alpha or frame.alphas
        results = {}
        for i in range(4):
            for j in range(4):
                if i == j:
                    continue
                source = apply_matrix(frame.matrix, frame.point(i, j))
                target = apply_matrix(frame.matrix, frame.point(j, i))
                try:
                    results[f"p{i}{j}"] = cremona(alpha, source).same_point(target)
                except IndeterminacyError:
                    results[f"p{i}{j}"] = False
        return results

    def diagonal_indeterminacy(self, frame: MukaiFrame) -> Dict[str, bool]:
        """Each M p_kk is an indeterminacy point"""
        results = {}
        for i in range(4):
            try:
                cremona(frame.alphas, apply_matrix(frame.matrix, frame.point(i, i)))
                results[f"p{i}{i}"] = False
            except IndeterminacyError:
                results[f"p{i}{i}"] = True
        return results

    def conic_point(self, alpha: AlphaTriple, k: int) -> ProjPoint3:
        """Parametrized point of the template quadric on the plane w_k = 0"""
        a1, a2, a3 = (lift(a, U) for a in alpha.as_tuple())
        one = U_RING.one
        zero = U_RING.zero
        if k == 1:
            return ProjPoint3((zero, one + U, U * (one + U), -a1 * U))
        if k == 2:
            return ProjPoint3((one + U, zero, U * (one + U), -a2 * U))
        if k == 3:
            return ProjPoint3((one + U, U * (one + U), zero, -a3 * U))
        if k == 4:
            return ProjPoint3((a1 * U + a2, U * (a1 * U + a2), -a3 * U, zero))
        raise ValueError(f"conic index must be 1..4, got {k}")

    def verify_conic_contraction(self, alpha: AlphaTriple) -> Dict[str, bool]:
        """The conic Q with w_k = 0 collapses onto the k-th coordinate point"""
        template = QuadricForm.template(alpha)
        results = {}
        for k in range(1, 5):
            point = self.conic_point(alpha, k)
            on_quadric = not template.evaluate(point.coords)
            results[f"w{k}"] = on_quadric and cremona(alpha, point).is_standard(k)
        return results

    def ruling_lines(self, frame: MukaiFrame, i: int) -> Tuple[ProjPoint3, ProjPoint3]:
        """The two lines of Q through M p_ii, parametrized by u"""
        e_value = values_of(frame.s)[i]
        f_value = values_of(frame.t)[i]
        first = segre(e_value, (U, U_RING.one))
        second = segre((U, U_RING.one), f_value)
        return apply_matrix(frame.matrix, first), apply_matrix(frame.matrix, second)

    @staticmethod
    def _on_line(point: ProjPoint3, a: ProjPoint3, b: ProjPoint3) -> bool:
        """point lies on the line through a and b: every 3x3 minor vanishes"""
        rows = [point.coords] + [[lift(x, point.coords[0]) for x in p.coords] for p in (a, b)]
        for skip in range(4):
            cols = [c for c in range(4) if c != skip]
            m = [[row[c] for c in cols] for row in rows]
            minor = (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                     - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                     + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))
            if minor:
                return False
        return True

    def verify_line_swap(self, frame: MukaiFrame) -> Dict[str, bool]:
        """cremona exchanges the two ruling lines through each M p_ii"""
        results = {}
        for i in range(4):
            first, second = self.ruling_lines(frame, i)
            e_value = values_of(frame.s)[i]
            f_value = values_of(frame.t)[i]
            first_span = [apply_matrix(frame.matrix, segre(e_value, x)) for x in (ZERO, ONE)]
            second_span = [apply_matrix(frame.matrix, segre(x, f_value)) for x in (ZERO, ONE)]
            forward = self._on_line(cremona(frame.alphas, first), *second_span)
            backward = self._on_line(cremona(frame.alphas, second), *first_span)
            results[f"p{i}{i}"] = forward and backward
        return results

    def specialize_frame(self, s0, t0) -> MukaiFrame:
        """Frame at a rational point; rejects 0, 1 and s0 = t0"""
        ErrorHandler.validate_construction_parameters(s0, t0)
        return self.frame_and_alphas(rf(s0), rf(t0))

    def pij_swap_pairs(self, frame: MukaiFrame) -> List[Tuple[Tuple[int, int], Tuple[int, int]]]:
        """(i, j) -> (k, l) with cremona(M p_ij) = M p_kl, read off the points"""
        images = {
            key: apply_matrix(frame.matrix, point)
            for key, point in frame.points
        }
        pairs = []
        for (i, j), source in images.items():
            if i == j:
                continue
            image = cremona(frame.alphas, source)
            for key, candidate in images.items():
                if image.same_point(candidate):
                    pairs.append(((i, j), key))
                    break
        return pairs
