import pytest
from hypothesis import given, settings, strategies as st

from backend.models.lattice_models import CurveId
from backend.models.projective_models import AlphaTriple, ProjPoint3, QuadricForm, lift
from backend.services.exact_field import ONE, S, T, substitute
from backend.services.mukai_cremona import (
    W1, W2, W3, W4, MukaiCremonaService, apply_matrix, cremona, segre, smoothness_disc,
    template_equation
)
from backend.utils.exceptions import (
    CoplanarityError, ForbiddenParameterError, IndeterminacyError, ZeroInputError
)


@pytest.mark.unit
class TestPoints:
    def test_sixteen_points_on_segre_quadric(self, mukai_service):
        points = mukai_service.sixteen_points()
        assert len(points) == 16
        segre_form = QuadricForm.segre()
        assert all(not segre_form.evaluate(p.coords) for p in points.values())

    def test_named_points(self, mukai_service):
        points = mukai_service.sixteen_points()
        assert points[(0, 0)].same_point(ProjPoint3((0, 0, 0, 1)))
        assert points[(3, 3)].same_point(ProjPoint3((1, 0, 0, 0)))
        assert points[(2, 2)].same_point(ProjPoint3((S * T, S, T, ONE)))

    def test_forbidden_parameters(self, mukai_service):
        with pytest.raises(ForbiddenParameterError):
            mukai_service.sixteen_points(0, T)
        with pytest.raises(ForbiddenParameterError):
            mukai_service.specialize_frame(2, 2)

    def test_projective_point_validation(self):
        with pytest.raises(ValueError):
            ProjPoint3((0, 0, 0, 0))
        with pytest.raises(ValueError):
            ProjPoint3((1, 2, 3))
        assert ProjPoint3((2, 4, 0, 2)).same_point(ProjPoint3((1, 2, 0, 1)))


@pytest.mark.unit
class TestFrame:
    def test_determinant(self, mukai_service):
        det = mukai_service.non_coplanar_det()
        assert det == S - T
        assert substitute(det, t=S).is_zero()

    def test_coplanar_on_diagonal(self, mukai_service):
        with pytest.raises(CoplanarityError):
            mukai_service.frame_and_alphas(S, S)

    def test_symbolic_alphas(self, mukai_frame_symbolic):
        alpha = mukai_frame_symbolic.alphas
        assert alpha.as_tuple() == ((1 - S) * (1 - T), S * T, ONE)

    def test_alphas_at_2_3(self, mukai_frame_23):
        assert mukai_frame_23.alphas.as_tuple() == (2, 6, 1)
        assert mukai_frame_23.determinant == -1

    def test_frame_is_standard(self, mukai_service, mukai_frame_symbolic):
        assert mukai_service.frame_is_standard(mukai_frame_symbolic)

    def test_template_identity(self, mukai_service, mukai_frame_symbolic):
        assert mukai_service.template_identity(mukai_frame_symbolic)
        assert not mukai_service.template_identity(mukai_frame_symbolic, AlphaTriple.of(1, 1, 1))

    def test_template_equation_text(self, mukai_frame_23):
        equation = template_equation(mukai_frame_23.alphas)
        assert equation.endswith("(w1+w2+w3)*w4 = 0")
        assert equation.startswith("((2))/((1))*w2*w3")


@pytest.mark.unit
class TestCremona:
    def test_smoothness(self, mukai_frame_symbolic):
        assert not smoothness_disc(mukai_frame_symbolic.alphas).is_zero()
        assert smoothness_disc(AlphaTriple.of(1, 1, 1)) == -3
        assert smoothness_disc(AlphaTriple.of(1, 1, 4)).is_zero()

    def test_cofactor(self, mukai_service, mukai_frame_symbolic):
        alpha = mukai_frame_symbolic.alphas
        cofactor = mukai_service.preservation_cofactor(alpha)
        assert cofactor == lift(alpha.product(), W1) * W1 * W2 * W3 * W4

    def test_perturbed_quadric_not_preserved(self, mukai_service):
        alpha = AlphaTriple.of(2, 6, 1)
        perturbed = QuadricForm.template(alpha) + QuadricForm.from_monomials({(1, 1): 1})
        assert not mukai_service.verify_cremona_preserves_quadric(alpha, perturbed)

    def test_involution(self, mukai_service, mukai_frame_symbolic):
        assert mukai_service.verify_cremona_involution(mukai_frame_symbolic.alphas)

    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_indeterminate_at_coordinate_points(self, k):
        coords = [0, 0, 0, 0]
        coords[k - 1] = 1
        with pytest.raises(IndeterminacyError):
            cremona(AlphaTriple.of(2, 6, 1), ProjPoint3(tuple(coords)))

    def test_pij_swap(self, mukai_service, mukai_frame_symbolic):
        results = mukai_service.pij_swap_results(mukai_frame_symbolic)
        assert len(results) == 12
        assert all(results.values())

    def test_verify_pij_swap_at_rational_point(self, mukai_service):
        assert mukai_service.verify_pij_swap(2, 3)

    def test_pij_swap_fails_for_wrong_alphas(self, mukai_service, mukai_frame_23):
        results = mukai_service.pij_swap_results(mukai_frame_23, AlphaTriple.of(1, 1, 1))
        assert not all(results.values())

    def test_diagonal_indeterminacy(self, mukai_service, mukai_frame_23):
        assert all(mukai_service.diagonal_indeterminacy(mukai_frame_23).values())

    def test_conic_contraction(self, mukai_service, mukai_frame_symbolic):
        results = mukai_service.verify_conic_contraction(mukai_frame_symbolic.alphas)
        assert results == {'w1': True, 'w2': True, 'w3': True, 'w4': True}
        with pytest.raises(ValueError):
            mukai_service.conic_point(mukai_frame_symbolic.alphas, 5)

    def test_line_swap(self, mukai_service, mukai_frame_23):
        assert all(mukai_service.verify_line_swap(mukai_frame_23).values())

    def test_induces_epsilon(self, mukai_service, kummer_service, mukai_frame_23):
        epsilon = kummer_service.make_automorphism("epsilon")
        pairs = mukai_service.pij_swap_pairs(mukai_frame_23)
        assert len(pairs) == 12
        for (i, j), (k, l) in pairs:
            assert epsilon(CurveId.C(i, j)) is CurveId.C(k, l)

    def test_frame_maps_segre_points(self, mukai_frame_23):
        image = apply_matrix(mukai_frame_23.matrix, segre(ONE, 3))
        assert image.same_point(apply_matrix(mukai_frame_23.matrix, mukai_frame_23.point(1, 2)))

    def test_zero_alpha_rejected(self):
        with pytest.raises(ZeroInputError):
            AlphaTriple.of(0, 1, 1)


nonzero = st.fractions(min_value=-9, max_value=9, max_denominator=6).filter(lambda x: x != 0)


@pytest.mark.property
@settings(max_examples=15, deadline=None)
@given(nonzero, nonzero, nonzero)
def test_any_template_is_preserved(a1, a2, a3):
    service = MukaiCremonaService()
    alpha = AlphaTriple.of(a1, a2, a3)
    assert service.verify_cremona_preserves_quadric(alpha)
    assert service.verify_cremona_involution(alpha)
