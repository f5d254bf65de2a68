#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "vnlab/io.hpp"
#include "vnlab/norm.hpp"
#include "vnlab/rng.hpp"
#include "vnlab/steiner.hpp"

using namespace vnlab;
using poly::HomogeneousPolynomial;

namespace {

HomogeneousPolynomial chain(int r)
{
    HomogeneousPolynomial p(r, 2);
    for (int j = 1; j < r; j += 2) p.add({j, j + 1}, 1.0);
    return p;
}

HomogeneousPolynomial monomial(int k)
{
    HomogeneousPolynomial p(k, k);
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i + 1;
    p.add(idx, 1.0);
    return p;
}

CVector random_sphere_point(Rng& rng, int n, const Exponent& q)
{
    CVector z(n);
    for (auto& v : z) v = rng.complex_normal();
    const double r = norm::lq_norm(z, q);
    for (auto& v : z) v /= r;
    return z;
}

norm::AscentOptions options(std::uint64_t seed, int restarts = 16)
{
    norm::AscentOptions o;
    o.seed = seed;
    o.restarts = restarts;
    return o;
}

}  // namespace

TEST_CASE("sum of disjoint products on the l2 ball is 1/2")
{
    for (int r : {2, 4, 6, 10}) {
        const auto p = chain(r);
        CHECK(norm::exact_norm_quadratic_l2(p) == doctest::Approx(0.5).epsilon(1e-14));
        const auto est = norm::estimate_norm(p, Exponent::finite(2), options(r));
        CHECK(std::abs(est.lower - 0.5) <= 1e-6);
        CHECK(est.upper == doctest::Approx(0.5).epsilon(1e-10));
        CHECK(est.lower <= est.upper);
    }
}

TEST_CASE("quadratic oracle examples")
{
    HomogeneousPolynomial sq(1, 2);
    sq.add({1, 1}, 1.0);
    CHECK(norm::exact_norm_quadratic_l2(sq) == doctest::Approx(1.0));
    HomogeneousPolynomial xy(2, 2);
    xy.add({1, 2}, 1.0);
    CHECK(norm::exact_norm_quadratic_l2(xy) == doctest::Approx(0.5));
    CHECK_THROWS_AS(norm::exact_norm_quadratic_l2(monomial(3)), std::invalid_argument);
}

TEST_CASE("monomial norm k^{-k/2} on the l2 ball")
{
    for (int k : {2, 3, 4}) {
        const double exact = std::pow(static_cast<double>(k), -k / 2.0);
        const auto est = norm::estimate_norm(monomial(k), Exponent::finite(2), options(k));
        CHECK(std::abs(est.lower - exact) <= 1e-4);
        CHECK(est.upper >= exact);
        CHECK(exact <= 1.0 / k);
    }
    CHECK(std::pow(3.0, -1.5) == doctest::Approx(0.192450).epsilon(1e-6));
}

TEST_CASE("sup norm on the polydisc")
{
    const auto est = norm::estimate_norm(chain(4), Exponent::infinity(), options(3));
    CHECK(est.lower == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(est.upper == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(est.lower_method == "polytorus-ascent");
}

TEST_CASE("polytorus ascent against a brute-force grid")
{
    // n = 3, z_1 = 1 by rotation invariance; 360 x 360 grid of the other phases
    Rng rng(21);
    for (int trial = 0; trial < 4; ++trial) {
        HomogeneousPolynomial p(3, 3);
        for (int t = 0; t < 5; ++t) {
            p.add({1 + static_cast<int>(rng.below(3)), 1 + static_cast<int>(rng.below(3)),
                   1 + static_cast<int>(rng.below(3))},
                  rng.complex_normal());
        }
        double grid = 0.0;
        const int steps = 360;
        for (int a = 0; a < steps; ++a) {
            for (int b = 0; b < steps; ++b) {
                const CVector z{1.0, std::polar(1.0, 2.0 * std::numbers::pi * a / steps),
                                std::polar(1.0, 2.0 * std::numbers::pi * b / steps)};
                grid = std::max(grid, std::abs(poly::evaluate(p, z)));
            }
        }
        const auto est = norm::estimate_norm(p, Exponent::infinity(), options(trial));
        CHECK(est.lower >= grid * (1.0 - 1e-3));
        CHECK(grid <= est.upper);
    }
}

TEST_CASE("witness realizes the lower value")
{
    Rng rng(22);
    const auto sys = steiner::greedy_generate(8, 3, 2, 4);
    const auto p = poly::random_steiner_polynomial(sys, std::nullopt, 4);
    for (const char* qs : {"1", "3/2", "2", "3", "4", "inf"}) {
        const auto q = Exponent::parse(qs);
        const auto est = norm::estimate_norm(p, q, options(7, 8));
        CHECK(norm::lq_norm(est.witness, q) <= 1.0 + 1e-12);
        CHECK(std::abs(poly::evaluate(p, est.witness)) == doctest::Approx(est.lower).epsilon(1e-12));
        CHECK(est.lower <= est.upper);
    }
}

TEST_CASE("certified uppers are never beaten by random sphere points")
{
    Rng rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 5 + trial % 3;
        const auto sys = steiner::greedy_generate(n, 3, 2, trial);
        const auto p = poly::random_steiner_polynomial(sys, std::nullopt, trial);
        for (const char* qs : {"1", "3/2", "2", "3", "4", "6", "inf"}) {
            const auto q = Exponent::parse(qs);
            const double upper = norm::certified_upper(p, q).value;
            for (int s = 0; s < 200; ++s) {
                const auto z = random_sphere_point(rng, n, q);
                CHECK(std::abs(poly::evaluate(p, z)) <= upper);
            }
        }
    }
}

TEST_CASE("l2 norm is monotone in the ball and the sup bound is attained on the coefficient sum")
{
    // an l_q ball contains the l_r ball for r < q, so the norm grows with q
    const auto sys = steiner::greedy_generate(9, 3, 2, 1);
    const auto p = poly::random_steiner_polynomial(sys, std::nullopt, 1);
    double previous = 0.0;
    for (const char* qs : {"1", "2", "4", "inf"}) {
        const auto est = norm::estimate_norm(p, Exponent::parse(qs), options(5, 8));
        CHECK(est.lower >= previous * (1.0 - 1e-9));
        previous = est.lower;
    }
    CHECK(norm::certified_upper(p, Exponent::infinity()).value <= poly::coefficient_sum(p) * (1.0 + 1e-11));
}

TEST_CASE("zero polynomial")
{
    const HomogeneousPolynomial zero(4, 3);
    const auto est = norm::estimate_norm(zero, Exponent::finite(2), options(1, 2));
    CHECK(est.lower == 0.0);
    CHECK(est.upper == 0.0);
}

TEST_CASE("lambda constants")
{
    CHECK(norm::lambda_constant(3, Exponent::finite(2)) == 1.0);
    CHECK(norm::lambda_constant(3, Exponent::infinity()) ==
          doctest::Approx(std::pow(3.0, 1.5) * 16.0 / (8.0 * 6.0)).epsilon(1e-14));
    CHECK(norm::lambda_constant(3, Exponent::infinity()) == doctest::Approx(1.7320508).epsilon(1e-7));
    CHECK(norm::lambda_constant(3, Exponent::finite(4)) == doctest::Approx(4.5));
}

TEST_CASE("interpolation formulas")
{
    CHECK(norm::interpolation_upper(Exponent::finite(4), 1.0, 2.0, 3) ==
          doctest::Approx(std::sqrt(2.0 * std::sqrt(3.0))).epsilon(1e-12));
    CHECK(norm::interpolation_upper(Exponent::finite(4), 1.0, 2.0, 3) == doctest::Approx(1.86121).epsilon(1e-5));
    CHECK(norm::interpolation_upper(Exponent::finite(4), 0.0, 0.0, 3) == 0.0);
    CHECK(norm::interpolation_upper(Exponent::finite(Rational(2001, 1000)), 0.7, 3.0, 3) ==
          doctest::Approx(0.7).epsilon(2e-3));

    CHECK(norm::interpolation_upper_low(Exponent::finite(Rational(3, 2)), 1.0 / 6.0, 1.0, 3) ==
          doctest::Approx(std::cbrt(4.5 / 6.0)).epsilon(1e-12));
    CHECK(norm::interpolation_upper_low(Exponent::finite(Rational(3, 2)), 1.0 / 6.0, 1.0, 3) ==
          doctest::Approx(0.9086).epsilon(1e-4));
    CHECK(norm::interpolation_upper_low(Exponent::finite(Rational(3, 2)), 0.0, 0.0, 3) == 0.0);
    CHECK(norm::interpolation_upper_low(Exponent::finite(Rational(1999, 1000)), 0.2, 0.7, 3) ==
          doctest::Approx(0.7).epsilon(2e-3));

    CHECK_THROWS(norm::interpolation_upper(Exponent::finite(2), 1.0, 1.0, 3));
    CHECK_THROWS(norm::interpolation_upper_low(Exponent::finite(3), 1.0, 1.0, 3));
}

TEST_CASE("KSZ reference")
{
    CHECK(norm::ksz_reference(7, 7, 1.0, 3, 1.0) == doctest::Approx(std::sqrt(49.0 * std::log(3.0))));
    CHECK(norm::ksz_reference(7, 7, 1.0, 3, 1.0) == doctest::Approx(7.3365).epsilon(1e-4));
    CHECK(norm::ksz_reference(7, 7, 0.0, 3, 1.0) == 0.0);
}

TEST_CASE("multilinear and polynomial norms agree at q = 2")
{
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto sys = steiner::greedy_generate(6 + static_cast<int>(seed % 2), 3, 2, seed);
        const auto p = poly::random_steiner_polynomial(sys, std::nullopt, seed);
        const auto pe = norm::estimate_norm(p, Exponent::finite(2), options(seed));
        const auto me = norm::estimate_multilinear_norm(p, Exponent::finite(2), options(seed));
        CHECK(std::abs(pe.lower - me.lower) <= 1e-3);
        for (const auto& w : me.witness) CHECK(norm::lq_norm(w, Exponent::finite(2)) <= 1.0 + 1e-12);
        CHECK(std::abs(poly::polarize_evaluate(p, me.witness)) == doctest::Approx(me.lower).epsilon(1e-10));
    }
}

TEST_CASE("lq norm and Holder maximizer")
{
    const CVector v{cplx{3.0, 0.0}, cplx{0.0, 4.0}};
    CHECK(norm::lq_norm(v, Exponent::finite(2)) == doctest::Approx(5.0));
    CHECK(norm::lq_norm(v, Exponent::finite(1)) == doctest::Approx(7.0));
    CHECK(norm::lq_norm(v, Exponent::infinity()) == doctest::Approx(4.0));

    Rng rng(24);
    for (const char* qs : {"1", "3/2", "2", "3", "inf"}) {
        const auto q = Exponent::parse(qs);
        CVector w(5);
        for (auto& x : w) x = rng.complex_normal();
        const auto z = norm::holder_maximizer(w, q);
        CHECK(norm::lq_norm(z, q) == doctest::Approx(1.0));
        cplx pairing = 0.0;
        for (int j = 0; j < 5; ++j) pairing += w[j] * z[j];
        // dual norm of w with 1/q + 1/q' = 1
        const Exponent dual = q.is_infinite()            ? Exponent::finite(1)
                              : q.equals(1)              ? Exponent::infinity()
                                                         : Exponent::finite(Rational(1) / q.conjugate_inverse());
        CHECK(std::abs(pairing) == doctest::Approx(norm::lq_norm(w, dual)).epsilon(1e-12));
    }
}

TEST_CASE("exponent parsing")
{
    CHECK(Exponent::parse("1.5") == Exponent::finite(Rational(3, 2)));
    CHECK(Exponent::parse("inf").is_infinite());
    CHECK(Exponent::parse("2").equals(2));
    CHECK(Exponent::finite(Rational(3, 2)).conjugate_inverse() == Rational(1, 3));
    CHECK_THROWS(Exponent::parse("1/2"));
    CHECK_THROWS(Exponent::parse("abc"));
}
