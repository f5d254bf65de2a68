#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "vnlab/bounds.hpp"
#include "vnlab/io.hpp"
#include "vnlab/steiner.hpp"

using namespace vnlab;
using bounds::Rate;

namespace {

bounds::PipelineOptions fast()
{
    bounds::PipelineOptions o;
    o.ascent.restarts = 8;
    o.row_trials = 5;
    return o;
}

void check_rate(const std::optional<Rate>& r, Rational power, Rational log_power)
{
    REQUIRE(r.has_value());
    CHECK(r->power == power);
    CHECK(r->log_power == log_power);
}

}  // namespace

TEST_CASE("reference exponents at q = 2")
{
    const auto e = bounds::reference_exponents(3, Exponent::finite(2));
    check_rate(e.mt_upper, Rational(1, 2), 0);
    check_rate(e.improved_lower, Rational(1, 2), Rational(-3, 2));
    check_rate(e.d_upper, 2, 0);
    check_rate(e.d_lower, 2, Rational(-15, 4));
    check_rate(e.c_upper, Rational(1, 2), 0);
    // k/2 - (floor(k/2) + 1)/2
    check_rate(e.mt_lower, Rational(1, 2), 0);

    const auto e5 = bounds::reference_exponents(5, Exponent::finite(2));
    check_rate(e5.mt_lower, Rational(1), 0);
    check_rate(e5.mt_upper, Rational(3, 2), 0);
    check_rate(e5.d_upper, 4, 0);
    check_rate(e5.d_lower, 4, Rational(-21, 4));
}

TEST_CASE("reference exponents at q = inf")
{
    const auto e = bounds::reference_exponents(3, Exponent::infinity());
    check_rate(e.c_upper, Rational(1, 2), 0);
    check_rate(e.improved_lower, Rational(1, 2), 0);
    check_rate(e.d_upper, 1, 0);
    CHECK_FALSE(e.mt_lower.has_value());
    CHECK_FALSE(e.mt_upper.has_value());
    CHECK_FALSE(e.d_lower.has_value());
}

TEST_CASE("reference exponents for other q")
{
    const auto e4 = bounds::reference_exponents(4, Exponent::finite(4));
    check_rate(e4.improved_lower, 1, Rational(-3, 4));
    check_rate(e4.d_upper, Rational(9, 4), 0);
    check_rate(e4.mt_upper, 1, 0);

    // q = 3/2, q' = 3
    const auto low = bounds::reference_exponents(4, Exponent::finite(Rational(3, 2)));
    check_rate(low.mt_lower, 0, 0);
    check_rate(low.mt_upper, Rational(2, 3), 0);
    check_rate(low.c_upper, Rational(2, 3), 0);
    check_rate(low.d_upper, Rational(5, 2), 0);
    CHECK_FALSE(low.improved_lower.has_value());
}

TEST_CASE("power-law fit")
{
    std::vector<std::pair<double, double>> square, flat;
    for (int n = 7; n <= 25; n += 2) {
        square.emplace_back(n, 3.0 * n * n);
        flat.emplace_back(n, 4.2);
    }
    const auto s = bounds::fit_power_law(square);
    CHECK(s.slope == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(s.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-10));
    CHECK(s.residual == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(s.inversions == 0);
    CHECK(bounds::fit_power_law(flat).slope == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(bounds::fit_power_law({{2, 5.0}, {3, 4.0}, {4, 6.0}, {5, 1.0}}).inversions == 2);
    CHECK_THROWS_AS(bounds::fit_power_law({{2, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(bounds::fit_power_law({{2, 1.0}, {3, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(bounds::fit_power_law({{2, 1.0}, {2, 3.0}}), std::invalid_argument);
}

TEST_CASE("median")
{
    CHECK(bounds::median({3.0, 1.0, 2.0}) == 2.0);
    CHECK(bounds::median({4.0, 1.0, 2.0, 3.0}) == 2.5);
    CHECK_THROWS(bounds::median({}));
}

TEST_CASE("A_{k,q} reference")
{
    const auto a3 = bounds::a_kq_reference(3, Exponent::finite(4), 1.0, 1.0, 1.0);
    const double oracle = std::sqrt(std::sqrt(3.0) * std::sqrt(std::log(3.0)) / std::sqrt(6.0)) * std::sqrt(3.0);
    CHECK(a3.lambda_form == doctest::Approx(oracle).epsilon(1e-12));
    // 4^{4/3} in place of 4^2 inside the power 1/2
    CHECK(a3.printed_form == doctest::Approx(oracle * std::sqrt(std::pow(4.0, 4.0 / 3.0) / 16.0)).epsilon(1e-12));
    const auto a10 = bounds::a_kq_reference(10, Exponent::finite(4), 1.0, 1.0, 1.0);
    CHECK(a10.lambda_form < a3.lambda_form);
    CHECK(a10.printed_form < a3.printed_form);
    const auto doubled = bounds::a_kq_reference(3, Exponent::finite(4), 2.0, 2.0, 2.0);
    CHECK(doubled.lambda_form == doctest::Approx(2.0 * a3.lambda_form));
    CHECK(bounds::a_kq_reference(3, Exponent::finite(4), 1.0, 5.0, 2.0).lambda_form ==
          doctest::Approx(5.0 * a3.lambda_form));
    CHECK_THROWS(bounds::a_kq_reference(3, Exponent::finite(2), 1.0, 1.0, 1.0));
    CHECK_THROWS(bounds::a_kq_reference(3, Exponent::infinity(), 1.0, 1.0, 1.0));
    CHECK_THROWS(bounds::a_kq_reference(3, Exponent::finite(4), 0.0, 1.0, 1.0));
}

TEST_CASE("D pipeline on the Fano fixture")
{
    const auto fano = io::load_system(VNLAB_FIXTURES "/fano.txt");
    const auto rec = bounds::lower_bound_D(fano, 17, fast());
    CHECK(rec.cardinality == 7);
    CHECK(rec.certification.passed);
    CHECK(rec.certification.max_commutator <= 1e-12);
    CHECK(rec.certification.scaled_row_condition <= 1.0 + 1e-9);
    CHECK(rec.scale <= rec.certification.recipe_scale);
    CHECK(rec.direct >= rec.analytic - 1e-9);
    CHECK(rec.analytic * rec.norm_l2.upper == doctest::Approx(std::pow(rec.scale, 3) * 7.0).epsilon(1e-12));
    CHECK(rec.norm_l2.lower <= rec.norm_l2.upper);
    // (1 + U)^{-1/2} with U = 1 gives 7 / 2^{3/2}
    CHECK(std::pow(1.0 + 1.0, -1.5) * 7.0 == doctest::Approx(2.4749).epsilon(1e-4));

    const auto again = bounds::lower_bound_D(fano, 17, fast());
    CHECK(again.analytic == rec.analytic);
    CHECK(again.direct == rec.direct);
    CHECK(again.norm_l2.upper == rec.norm_l2.upper);
}

TEST_CASE("direct value dominates the analytic one")
{
    for (int n = 5; n <= 11; n += 2) {
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            const auto d = bounds::lower_bound_D(3, n, seed, fast());
            CHECK(d.direct >= d.analytic - 1e-9);
            for (const char* qs : {"2", "4", "inf"}) {
                const auto c = bounds::lower_bound_C(3, Exponent::parse(qs), n, seed, fast());
                CHECK(c.direct >= c.analytic - 1e-9);
                CHECK(c.certification.passed);
            }
        }
    }
}

TEST_CASE("C pipeline scaling")
{
    const auto fano = steiner::fano_plane();
    const auto inf = bounds::lower_bound_C(fano, Exponent::infinity(), 3, fast());
    CHECK(inf.scale == 1.0);
    CHECK(inf.analytic * inf.norm_inf.upper == doctest::Approx(7.0).epsilon(1e-12));
    CHECK(7.0 / 3.0 == doctest::Approx(2.333).epsilon(1e-3));

    const auto two = bounds::lower_bound_C(fano, Exponent::finite(2), 3, fast());
    CHECK(two.scale == doctest::Approx(1.0 / std::sqrt(7.0)));
    CHECK(two.analytic * two.norm_l2.upper == doctest::Approx(std::pow(7.0, -1.5) * 7.0).epsilon(1e-12));

    // k = 4: ||T_l|| can exceed 1, the scale absorbs the Schur bound
    const auto four = bounds::lower_bound_C(4, Exponent::infinity(), 8, 2, fast());
    CHECK(four.certification.scaled_row_condition <= 1.0 + 1e-9);
    CHECK(four.scale * four.certification.max_op_norm <= 1.0 + 1e-10);
}

TEST_CASE("sweep is deterministic across thread counts")
{
    const std::vector<int> ns{5, 7, 9};
    const auto one = bounds::scaling_sweep(3, Exponent::finite(2), ns, 2, bounds::Which::D, 99, fast(), 1);
    const auto many = bounds::scaling_sweep(3, Exponent::finite(2), ns, 2, bounds::Which::D, 99, fast(), 4);
    REQUIRE(one.records.size() == many.records.size());
    for (std::size_t i = 0; i < one.records.size(); ++i) {
        CHECK(one.records[i].n == many.records[i].n);
        CHECK(one.records[i].seed == many.records[i].seed);
        CHECK(one.records[i].analytic == many.records[i].analytic);
        CHECK(one.records[i].estimate == many.records[i].estimate);
    }
    CHECK(one.fit.slope == many.fit.slope);
    CHECK(one.fit.points.size() == 3);
    CHECK(one.warnings.empty());

    CHECK_THROWS_AS(bounds::scaling_sweep(3, Exponent::finite(4), ns, 2, bounds::Which::D, 1, fast(), 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(bounds::scaling_sweep(3, Exponent::finite(2), {9, 7}, 2, bounds::Which::D, 1, fast(), 1),
                    std::invalid_argument);
}

TEST_CASE("cell seeds are distinct")
{
    std::set<std::uint64_t> seen;
    for (int n = 3; n < 40; ++n) {
        for (int s = 0; s < 10; ++s) seen.insert(bounds::cell_seed(7, n, s));
    }
    CHECK(seen.size() == 370);
}

TEST_CASE("which parsing")
{
    CHECK(bounds::parse_which("C") == bounds::Which::C);
    CHECK(bounds::parse_which("D") == bounds::Which::D);
    CHECK(bounds::to_string(bounds::Which::D) == "D");
    CHECK_THROWS_AS(bounds::parse_which("E"), std::invalid_argument);
}
