import random

import pytest
from hypothesis import given, settings, strategies as st

from helpers import rand_poly
from lfdspectrum.errors import (
    ExactDivisionError,
    NotHomogeneous,
    PolyParseError,
    ResourceCapExceeded,
)
from lfdspectrum.poly import (
    SparsePoly,
    apply_derivation,
    emit,
    exact_divide,
    linear_form,
    parse,
    poly_arith,
    rational_roots,
    squarefree_test,
    uni_coeffs,
    uni_from_coeffs,
)
from lfdspectrum.linalg import RationalMatrix
from lfdspectrum.rational import Q, rat


def v(nvars, i):
    return SparsePoly.variable(nvars, i)


# deterministic random polynomial pool for property loops
def poly_pool(seed, count, nvars, **kw):
    rng = random.Random(seed)
    return [rand_poly(rng, nvars, **kw) for _ in range(count)]


class TestArithmetic:
    def test_difference_of_squares(self):
        x1, x2 = v(2, 0), v(2, 1)
        assert (x1 + x2) * (x1 - x2) == x1 * x1 - x2 * x2

    def test_add_zero_is_identity(self):
        p = parse("3*x1^2 - 1/2*x2^1", 2)
        assert p + SparsePoly.zero(2) == p

    def test_square_expansion(self):
        x1, x2 = v(2, 0), v(2, 1)
        p = (x1 + x2) * (x1 + x2)
        assert p == SparsePoly.from_terms(
            2, [((2, 0), 1), ((1, 1), 2), ((0, 2), 1)]
        )

    def test_poly_arith_dispatch(self):
        x1, x2 = v(2, 0), v(2, 1)
        assert poly_arith(x1, x2, "add") == x1 + x2
        assert poly_arith(x1, x2, "sub") == x1 - x2
        assert poly_arith(x1, x2, "mul") == x1 * x2
        assert poly_arith(x1, Q(3), "scale") == x1.scale(3)
        with pytest.raises(ValueError):
            poly_arith(x1, x2, "div")

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(ValueError):
            v(2, 0) + v(3, 0)

    def test_canonical_form_is_stable(self):
        # rebuilding from the emitted terms is a no-op, and no zero
        # coefficients are ever stored
        for p in poly_pool(1, 30, 3):
            q = p - p
            assert q.is_zero() and not q.terms
            rebuilt = SparsePoly.from_terms(3, p.terms_grevlex())
            assert rebuilt == p
            assert all(c for c in p.terms.values())

    def test_pow(self):
        x1 = v(1, 0)
        p = x1 + SparsePoly.constant(1, 1)
        assert uni_coeffs(p**3) == [rat(1), rat(3), rat(3), rat(1)]
        assert (p**0) == SparsePoly.constant(1, 1)

    def test_degree_cap_enforced(self):
        big = SparsePoly.from_terms(1, [((250,), 1)])
        small = SparsePoly.from_terms(1, [((10,), 1)])
        with pytest.raises(ResourceCapExceeded):
            big * small
        with pytest.raises(ResourceCapExceeded):
            SparsePoly.from_terms(1, [((256,), 1)])

    def test_mul_matches_evaluation(self):
        rng = random.Random(7)
        for _ in range(20):
            p = rand_poly(rng, 3)
            q = rand_poly(rng, 3)
            point = [Q(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(3)]
            assert (p * q).evaluate(point) == p.evaluate(point) * q.evaluate(point)


class TestDerivation:
    def test_euler_field_scales_by_degree(self):
        p = parse("2*x1^3 - 5*x1^1*x2^2", 2)
        E = RationalMatrix.identity(2)
        assert apply_derivation(E, p) == p.scale(3)

    def test_annihilating_field(self):
        A = RationalMatrix.diagonal([1, -1])
        p = v(2, 0) * v(2, 1)
        assert apply_derivation(A, p).is_zero()

    def test_single_variable_scaling(self):
        A = RationalMatrix.diagonal([1, 0])
        p = v(2, 0) * v(2, 1)
        assert apply_derivation(A, p) == p

    def test_leibniz_rule(self):
        rng = random.Random(11)
        for _ in range(15):
            p = rand_poly(rng, 3)
            q = rand_poly(rng, 3)
            A = RationalMatrix(
                [[Q(rng.randint(-3, 3)) for _ in range(3)] for _ in range(3)]
            )
            lhs = apply_derivation(A, p * q)
            rhs = apply_derivation(A, p) * q + p * apply_derivation(A, q)
            assert lhs == rhs

    def test_preserves_homogeneous_degree(self):
        A = RationalMatrix([[0, 1, 0], [2, 0, 0], [0, 0, 1]])
        p = parse("1*x1^2*x3^1 - 4*x2^3", 3)
        out = apply_derivation(A, p)
        assert out.is_homogeneous() and out.hom_degree() == 3


class TestSubstitution:
    def test_subst_var_scaled_identity(self):
        rng = random.Random(3)
        for _ in range(25):
            p = rand_poly(rng, 4, max_deg=4)
            a, q = rng.sample(range(4), 2)
            gamma = Q(rng.randint(-3, 3), rng.randint(1, 3))
            s, k = p.subst_var_scaled(a, gamma, q)
            assert a not in s.vars_used()
            witness = SparsePoly.variable(4, a) - linear_form(
                4, [gamma if i == q else 0 for i in range(4)]
            )
            assert s + witness * k == p

    def test_compose_linear(self):
        # p(x1+x2, x1-x2) for p = y1*y2 gives x1^2 - x2^2
        p = v(2, 0) * v(2, 1)
        out = p.compose([linear_form(2, [1, 1]), linear_form(2, [1, -1])])
        assert out == parse("1*x1^2 - 1*x2^2", 2)

    def test_exact_divide(self):
        x1, x2 = v(2, 0), v(2, 1)
        p = (x1 + x2) * (x1 - x2)
        assert exact_divide(p, x1 + x2) == x1 - x2
        with pytest.raises(ExactDivisionError):
            exact_divide(x1 * x1 + x2, x1 + x2)
        with pytest.raises(ZeroDivisionError):
            exact_divide(p, SparsePoly.zero(2))

    def test_exact_divide_random_products(self):
        rng = random.Random(23)
        checked = 0
        while checked < 20:
            p = rand_poly(rng, 3)
            q = rand_poly(rng, 3)
            if q.is_zero():
                continue
            assert exact_divide(p * q, q) == p
            checked += 1


class TestTextFormat:
    def test_golden_emission(self):
        h = parse("1*x1^1*x2^2 - 1*x1^2*x3^1", 3)
        x, y, z = (v(3, i) for i in range(3))
        assert h == x * y * y - x * x * z
        assert emit(h) == "1*x1^1*x2^2 - 1*x1^2*x3^1"

    def test_grevlex_term_order(self):
        # descending grevlex on the degree-3 monomials in three variables
        names = [
            "1*x1^3", "1*x1^2*x2^1", "1*x1^1*x2^2", "1*x2^3",
            "1*x1^2*x3^1", "1*x1^1*x2^1*x3^1", "1*x2^2*x3^1",
            "1*x1^1*x3^2", "1*x2^1*x3^2", "1*x3^3",
        ]
        total = SparsePoly.zero(3)
        for name in names:
            total = total + parse(name, 3)
        assert emit(total) == " + ".join(names)

    def test_zero_and_constants(self):
        assert emit(SparsePoly.zero(2)) == "0"
        assert parse("0", 2).is_zero()
        assert emit(SparsePoly.constant(2, Q(-3, 4))) == "-3/4"
        assert parse("-3/4", 2) == SparsePoly.constant(2, Q(-3, 4))

    def test_roundtrip_random(self):
        for p in poly_pool(5, 40, 3):
            assert parse(emit(p), 3) == p

    def test_custom_prefix(self):
        p = v(2, 1).scale(Q(1, 2))
        assert emit(p, var_prefix="y") == "1/2*y2^1"
        assert parse("1/2*y2^1", 2, var_prefix="y") == p

    @pytest.mark.parametrize(
        "bad",
        ["", "x1", "2x1", "3*x1^0", "3*x1", "1.5*x1^1", "3*x9^1", "3*y1^1",
         "0*x1^1", "- 3", "3 *x1^1"],
    )
    def test_malformed_rejected(self, bad):
        with pytest.raises(PolyParseError):
            parse(bad, 2)

    @given(st.lists(st.tuples(st.integers(-20, 20), st.integers(1, 9)), max_size=5))
    @settings(max_examples=40, deadline=None)
    def test_univariate_roundtrip_hypothesis(self, pairs):
        p = SparsePoly.from_terms(
            1, [((i,), Q(a, b)) for i, (a, b) in enumerate(pairs)]
        )
        assert parse(emit(p), 1) == p


class TestQueries:
    def test_degree_and_homogeneity(self):
        p = parse("1*x1^2*x2^1 - 2*x3^3", 3)
        assert p.degree() == 3
        assert p.is_homogeneous() and p.hom_degree() == 3
        q = p + SparsePoly.constant(3, 1)
        assert not q.is_homogeneous()
        with pytest.raises(NotHomogeneous):
            q.hom_degree()
        assert SparsePoly.zero(3).degree() == -1

    def test_evaluate(self):
        p = parse("1*x1^1*x2^2 - 1*x1^2*x3^1", 3)
        assert p.evaluate([2, 0, 1]) == rat(-4)
        assert p.evaluate([Q(1), Q(1), Q(0)]) == rat(1)

    def test_gradient(self):
        p = parse("1*x1^1*x2^2 - 1*x1^2*x3^1", 3)
        gx, gy, gz = p.gradient()
        assert gx == parse("1*x2^2 - 2*x1^1*x3^1", 3)
        assert gy == parse("2*x1^1*x2^1", 3)
        assert gz == parse("-1*x1^2", 3)


class TestSquarefree:
    def test_examples(self):
        x, y, z = (v(3, i) for i in range(3))
        assert squarefree_test(v(2, 0) * v(2, 1))
        assert not squarefree_test(v(2, 0) * v(2, 0))
        # x*(xz - y^2), the three-dimensional non-reductive equation
        p = x * (x * z - y * y)
        assert squarefree_test(p)
        assert not squarefree_test(p * x)

    def test_multivariate_square(self):
        x1, x2 = v(2, 0), v(2, 1)
        assert not squarefree_test((x1 + x2) * (x1 + x2))
        assert squarefree_test((x1 + x2) * (x1 - x2))

    def test_univariate_path(self):
        p = uni_from_coeffs([1, 2, 1])  # (x+1)^2
        assert not squarefree_test(p)
        assert squarefree_test(uni_from_coeffs([1, 0, 1]))

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            squarefree_test(SparsePoly.zero(2))


class TestRationalRoots:
    def test_simple_factored(self):
        p = uni_from_coeffs([2, -3, 1])  # (x-1)(x-2)
        assert rational_roots(p) == {Q(1): 1, Q(2): 1}

    def test_multiplicity(self):
        # (x-1)^2 (x+3)
        p = uni_from_coeffs([3, -5, 1, 1])
        assert rational_roots(p) == {Q(1): 2, Q(-3): 1}

    def test_fractional_root(self):
        # (4x-3)(x^2+1)
        p = uni_from_coeffs([-3, 4]) * uni_from_coeffs([1, 0, 1])
        assert rational_roots(p) == {Q(3, 4): 1}

    def test_no_rational_roots(self):
        assert rational_roots(uni_from_coeffs([1, 0, 1])) == {}
        assert rational_roots(uni_from_coeffs([5])) == {}

    def test_zero_root_stripped(self):
        # x^3 (x-5)
        p = uni_from_coeffs([0, 0, 0, -5, 1])
        assert rational_roots(p) == {Q(0): 3, Q(5): 1}

    def test_rational_coefficients(self):
        # (x - 1/2)(x - 2/3) scaled by 1/7
        p = uni_from_coeffs([Q(1, 3), Q(-7, 6), 1]).scale(Q(1, 7))
        assert rational_roots(p) == {Q(1, 2): 1, Q(2, 3): 1}

    def test_zero_polynomial_rejected(self):
        with pytest.raises(ValueError):
            rational_roots(SparsePoly.zero(1))

    @given(st.lists(st.integers(-6, 6), min_size=1, max_size=4),
           st.integers(1, 5))
    @settings(max_examples=40, deadline=None)
    def test_planted_roots_found(self, roots, lead):
        p = SparsePoly.constant(1, lead)
        x = SparsePoly.variable(1, 0)
        for r in roots:
            p = p * (x - SparsePoly.constant(1, r))
        found = rational_roots(p)
        expect = {}
        for r in roots:
            expect[Q(r)] = expect.get(Q(r), 0) + 1
        assert found == expect

    def test_highly_composite_constant(self):
        # The constant term is the product of the first 18 primes, so it
        # has 2^18 divisors and the candidate grid is off the table; the
        # factorization route must find the planted roots anyway.
        primes = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29,
                  31, 37, 41, 43, 47, 53, 59, 61]
        big = 1
        for q in primes:
            big *= q
        x = SparsePoly.variable(1, 0)
        one = SparsePoly.constant(1, 1)
        p = (x - SparsePoly.constant(1, big)) * (x.scale(Q(8)) - one)
        assert rational_roots(p) == {Q(big): 1, Q(1, 8): 1}

    def test_factorization_route_matches_divisor_route(self):
        from lfdspectrum.poly import _roots_by_factorization

        # (x-1)^2 (x+3) (3x+1) (x^2+x+1), integer model
        p = uni_from_coeffs([3, -5, 1, 1]) * uni_from_coeffs([1, 3])
        p = p * uni_from_coeffs([1, 1, 1])
        ints = [int(c) for c in uni_coeffs(p)]
        assert _roots_by_factorization(ints) == rational_roots(p)
