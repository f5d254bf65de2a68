#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "vnlab/dixon.hpp"
#include "vnlab/norm.hpp"
#include "vnlab/rng.hpp"
#include "vnlab/steiner.hpp"

using namespace vnlab;
using dixon::SparseMatrix;
using dixon::Vector;

namespace {

dixon::DixonTuple tuple_for(const steiner::PartialSteinerSystem& sys, std::uint64_t seed)
{
    return dixon::build_tuple(sys, poly::random_steiner_polynomial(sys, std::nullopt, seed));
}

SparseMatrix from_dense(const Eigen::MatrixXcd& m)
{
    return m.sparseView();
}

int layer_of(const dixon::DixonBasis& basis, std::size_t pos)
{
    for (int l = 0; l < basis.layer_count(); ++l) {
        const auto [b, e] = basis.layer_range(l);
        if (pos >= b && pos < e) return l;
    }
    return -1;
}

}  // namespace

TEST_CASE("basis dimensions")
{
    CHECK(dixon::build_basis(5, 3).dimension() == 12);
    CHECK(dixon::build_basis(4, 4).dimension() == 20);
    CHECK(dixon::build_basis(3, 3).dimension() == 8);
    for (int k = 3; k <= 5; ++k) {
        for (int n = k; n <= 9; ++n) {
            const auto b = dixon::build_basis(n, k);
            // 2 + n + sum_m binom(n+m-1, m) counted independently
            std::size_t expected = 2 + static_cast<std::size_t>(n);
            for (int m = 1; m <= k - 2; ++m) expected += steiner::binomial(n + m - 1, m);
            CHECK(b.dimension() == expected);
            CHECK(dixon::DixonBasis::dimension_formula(n, k) == expected);
        }
    }
    const auto b = dixon::build_basis(4, 4);
    CHECK(b.tuple({3, 1}) == b.tuple({1, 3}));
    CHECK(b.labels()[b.f(2)].to_string() == "f2");
    CHECK(b.labels()[b.g()].kind == dixon::Label::Kind::G);
}

TEST_CASE("operator norm examples")
{
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(2, 2);
    d(0, 0) = 3.0;
    d(1, 1) = 1.0;
    CHECK(dixon::operator_norm(from_dense(d)).value == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(dixon::operator_norm(SparseMatrix(4, 4)).value == 0.0);

    Rng rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(12, 9);
        for (int i = 0; i < 12; ++i) {
            for (int j = 0; j < 9; ++j) {
                if (rng.uniform() < 0.3) m(i, j) = rng.complex_normal();
            }
        }
        const auto s = from_dense(m);
        const double svd = Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues()(0);
        CHECK(dixon::operator_norm(s).value == doctest::Approx(svd).epsilon(1e-9));
        CHECK(dixon::dense_operator_norm(s) == doctest::Approx(svd).epsilon(1e-12));
        CHECK(dixon::schur_bound(s) >= svd * (1.0 - 1e-12));
    }
}

TEST_CASE("Fano tuple identities")
{
    const auto fano = steiner::fano_plane();
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const auto t = tuple_for(fano, seed);
        CHECK(t.basis.dimension() == 16);
        CHECK(dixon::check_commuting(t) <= 1e-12);
        for (double v : dixon::operator_norms(t)) CHECK(std::abs(v - 1.0) <= 1e-10);
        const auto e = dixon::basis_vector(t.basis, t.basis.e());
        const auto g = dixon::basis_vector(t.basis, t.basis.g());
        CHECK((dixon::apply_polynomial(t.source, t, e) - 7.0 * g).norm() == 0.0);
        CHECK(dixon::apply_polynomial(t.source, t, g).norm() == 0.0);
        const auto pt = dixon::polynomial_matrix(t.source, t);
        CHECK((pt * e - 7.0 * g).norm() == 0.0);
        CHECK(dixon::operator_norm(pt).value == doctest::Approx(7.0).epsilon(1e-12));
    }
}

TEST_CASE("single block tuple")
{
    for (int k = 3; k <= 5; ++k) {
        const auto one = steiner::greedy_generate(k, k, k - 1, 0);
        for (std::uint64_t seed = 0; seed < 4; ++seed) {
            const auto t = tuple_for(one, seed);
            CHECK(dixon::check_commuting(t) <= 1e-12);
            const auto e = dixon::basis_vector(t.basis, t.basis.e());
            const auto g = dixon::basis_vector(t.basis, t.basis.g());
            CHECK((dixon::apply_polynomial(t.source, t, e) - g).norm() == 0.0);
        }
    }
}

TEST_CASE("commutation and p(T)e on random systems")
{
    for (int k = 3; k <= 4; ++k) {
        for (int n = k; n <= 10; ++n) {
            const auto sys = steiner::greedy_generate(n, k, k - 1, static_cast<std::uint64_t>(n));
            const auto t = tuple_for(sys, static_cast<std::uint64_t>(n));
            CHECK(dixon::check_commuting(t) <= 1e-12);
            const auto e = dixon::basis_vector(t.basis, t.basis.e());
            const auto g = dixon::basis_vector(t.basis, t.basis.g());
            const double card = static_cast<double>(sys.blocks.size());
            CHECK((dixon::apply_polynomial(t.source, t, e) - card * g).norm() == 0.0);
        }
    }
}

TEST_CASE("operator norms: 1 for k = 3, power iteration matches the dense SVD")
{
    for (int n = 3; n <= 10; ++n) {
        const auto t = tuple_for(steiner::greedy_generate(n, 3, 2, 3), 3);
        for (double v : dixon::operator_norms(t)) CHECK(std::abs(v - 1.0) <= 1e-10);
    }
    for (int n = 4; n <= 9; ++n) {
        const auto sys = steiner::greedy_generate(n, 4, 3, 5);
        const auto t = tuple_for(sys, 5);
        double top = 0.0;
        for (std::size_t l = 0; l < t.ops.size(); ++l) {
            const double dense = dixon::dense_operator_norm(t.ops[l]);
            CHECK(dixon::operator_norm(t.ops[l]).value == doctest::Approx(dense).epsilon(1e-10));
            CHECK(dixon::schur_bound(t.ops[l]) >= dense * (1.0 - 1e-12));
            top = std::max(top, dense);
        }
        // ||T_l||^2 is the largest number of blocks through a pair {l, j}
        CHECK(top * top == doctest::Approx(std::max(1, steiner::max_pair_multiplicity(sys))).epsilon(1e-10));
    }
}

TEST_CASE("layer structure")
{
    const auto sys = steiner::greedy_generate(7, 4, 3, 2);
    const auto t = tuple_for(sys, 2);
    const auto& basis = t.basis;
    for (std::size_t l = 0; l < t.ops.size(); ++l) {
        const auto& op = t.ops[l];
        for (int col = 0; col < op.outerSize(); ++col) {
            for (SparseMatrix::InnerIterator it(op, col); it; ++it) {
                CHECK(layer_of(basis, static_cast<std::size_t>(it.row())) ==
                      layer_of(basis, static_cast<std::size_t>(it.col())) + 1);
            }
        }
    }
    // any k + 1 operators kill e
    Rng rng(32);
    for (int trial = 0; trial < 50; ++trial) {
        Vector v = dixon::basis_vector(basis, basis.e());
        for (int s = 0; s <= basis.k(); ++s) v = t.ops[rng.below(t.ops.size())] * v;
        CHECK(v.norm() == 0.0);
    }
}

TEST_CASE("corrupted entry breaks commutation")
{
    const auto t = tuple_for(steiner::fano_plane(), 1);
    const auto& b = t.basis;
    // T_1 e = e(1); send it to e(2) as well
    const auto bad = dixon::corrupt_operator(t, 1, b.tuple({2}), b.e(), 1.0);
    CHECK(dixon::check_commuting(bad) > 1e-3);
    CHECK(dixon::check_commuting(t) <= 1e-12);
}

TEST_CASE("build_tuple preconditions")
{
    const auto fano = steiner::fano_plane();
    auto p = poly::random_steiner_polynomial(fano, std::nullopt, 1);
    poly::HomogeneousPolynomial missing(7, 3);
    missing.add(fano.blocks[0].points, 1.0);
    CHECK_THROWS_AS(dixon::build_tuple(fano, missing), std::invalid_argument);
    auto scaled = p;
    scaled.add(fano.blocks[0].points, p.coefficient(poly::Monomial{fano.blocks[0].points}));
    CHECK_THROWS_AS(dixon::build_tuple(fano, scaled), std::invalid_argument);
    auto outside = p;
    outside.add({1, 1, 2}, 1.0);
    CHECK_THROWS_AS(dixon::build_tuple(fano, outside), std::invalid_argument);
    auto wrong_t = fano;
    wrong_t.t = 1;
    CHECK_THROWS_AS(dixon::build_tuple(wrong_t, p), std::invalid_argument);
}

TEST_CASE("row condition bounds")
{
    const auto fano = steiner::fano_plane();
    const auto t = tuple_for(fano, 6);
    const auto zero = dixon::check_row_condition(t, 0.0, 5, 1);
    CHECK(zero.value == 0.0);
    CHECK(zero.certified_upper == 0.0);

    const auto r = dixon::check_row_condition(t, 1.0, 20, 1);
    // alpha = e_1 gives ||T_1|| = 1
    CHECK(r.value >= 1.0 - 1e-12);
    CHECK(r.optimized <= r.certified_upper);
    CHECK(r.trial_max <= r.certified_upper);
    CHECK(r.value == std::max(r.trial_max, r.optimized));

    const auto half = dixon::check_row_condition(t, 0.5, 20, 1);
    CHECK(half.certified_upper == doctest::Approx(0.5 * r.certified_upper).epsilon(1e-12));

    // random alpha through a dense SVD never exceed the certificate
    Rng rng(33);
    for (int trial = 0; trial < 200; ++trial) {
        SparseMatrix sum(t.basis.dimension(), t.basis.dimension());
        double norm2 = 0.0;
        std::vector<cplx> alpha(t.ops.size());
        for (auto& a : alpha) {
            a = rng.complex_normal();
            norm2 += std::norm(a);
        }
        for (std::size_t j = 0; j < t.ops.size(); ++j) sum += (alpha[j] / std::sqrt(norm2)) * t.ops[j];
        CHECK(dixon::dense_operator_norm(sum) <= r.certified_upper);
    }
}

TEST_CASE("row condition of one block")
{
    // the top layer form is the symmetric 3-tensor with entries 1 on {1,2,3};
    // its spectral norm is 2/sqrt(3)
    const auto one = steiner::greedy_generate(3, 3, 2, 0);
    const auto t = tuple_for(one, 0);
    const auto r = dixon::check_row_condition(t, 1.0, 20, 2);
    CHECK(r.optimized == doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-9));
    CHECK(r.certified_upper >= r.optimized);
    // it exceeds sqrt(1 + ||p||_2) = sqrt(1 + 3^{-3/2})
    CHECK(r.optimized > std::sqrt(1.0 + std::pow(3.0, -1.5)));
}

TEST_CASE("row condition is reproducible")
{
    const auto t = tuple_for(steiner::greedy_generate(9, 3, 2, 1), 1);
    const auto a = dixon::check_row_condition(t, 0.8, 10, 4);
    const auto b = dixon::check_row_condition(t, 0.8, 10, 4);
    CHECK(a.value == b.value);
    CHECK(a.certified_upper == b.certified_upper);
    CHECK(a.layer_optimized == b.layer_optimized);
}
