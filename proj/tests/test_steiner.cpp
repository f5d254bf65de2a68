#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <bit>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "vnlab/io.hpp"
#include "vnlab/steiner.hpp"

using namespace vnlab;
using steiner::Block;
using steiner::PartialSteinerSystem;

namespace {

// Counts every t-subset over all blocks by brute force.
std::map<std::vector<int>, int> subset_counts(const PartialSteinerSystem& s)
{
    std::map<std::vector<int>, int> counts;
    for (const auto& b : s.blocks) {
        const int k = static_cast<int>(b.points.size());
        for (unsigned mask = 0; mask < (1u << k); ++mask) {
            if (std::popcount(mask) != s.t) continue;
            std::vector<int> sub;
            for (int i = 0; i < k; ++i) {
                if (mask & (1u << i)) sub.push_back(b.points[i]);
            }
            ++counts[sub];
        }
    }
    return counts;
}

bool brute_force_valid(const PartialSteinerSystem& s)
{
    for (const auto& [sub, c] : subset_counts(s)) {
        if (c > 1) return false;
    }
    return true;
}

PartialSteinerSystem make(int n, int k, int t, std::vector<std::vector<int>> blocks)
{
    PartialSteinerSystem s{n, k, t, {}};
    for (auto& b : blocks) s.blocks.push_back(Block{std::move(b)});
    return s;
}

}  // namespace

TEST_CASE("Fano plane covers each of the 21 pairs exactly once")
{
    const auto fano = make(7, 3, 2, {{1, 2, 3}, {1, 4, 5}, {1, 6, 7}, {2, 4, 6}, {2, 5, 7}, {3, 4, 7}, {3, 5, 6}});
    const auto counts = subset_counts(fano);
    CHECK(counts.size() == 21);
    for (const auto& [pair, c] : counts) CHECK(c == 1);
    CHECK(steiner::validate(fano).valid);
    CHECK(steiner::validate(steiner::fano_plane()).valid);
    CHECK(steiner::fano_plane().blocks.size() == 7);
}

TEST_CASE("shared pair is reported")
{
    const auto r = steiner::validate(make(4, 3, 2, {{1, 2, 3}, {1, 2, 4}}));
    CHECK_FALSE(r.valid);
    REQUIRE(r.violations.size() == 1);
    CHECK(r.violations[0].subset == std::vector<int>{1, 2});
}

TEST_CASE("empty block set is valid")
{
    CHECK(steiner::validate(make(5, 3, 2, {})).valid);
    CHECK(steiner::validate(make(9, 4, 1, {})).valid);
}

TEST_CASE("structural errors")
{
    CHECK_FALSE(steiner::validate(make(5, 3, 2, {{1, 2, 6}})).valid);
    CHECK_FALSE(steiner::validate(make(5, 3, 2, {{1, 2}})).valid);
    CHECK_FALSE(steiner::validate(make(5, 3, 2, {{1, 1, 2}})).valid);
    CHECK_FALSE(steiner::validate(make(5, 3, 2, {{1, 2, 3}, {1, 2, 3}})).valid);
}

TEST_CASE("greedy examples")
{
    for (std::uint64_t seed : {0ULL, 1ULL, 77ULL, 123456789ULL}) {
        CHECK(steiner::greedy_generate(6, 2, 1, seed).blocks.size() == 3);
        const auto s = steiner::greedy_generate(7, 3, 2, seed);
        CHECK(steiner::validate(s).valid);
        CHECK(s.blocks.size() <= 7);
        for (int k = 2; k <= 5; ++k) {
            const auto one = steiner::greedy_generate(k, k, k - 1, seed);
            REQUIRE(one.blocks.size() == 1);
            std::vector<int> all(k);
            for (int i = 0; i < k; ++i) all[i] = i + 1;
            CHECK(one.blocks[0].points == all);
        }
    }
}

TEST_CASE("greedy output is valid, below the ceiling and maximal")
{
    for (int n = 4; n <= 11; ++n) {
        for (auto [k, t] : {std::pair{3, 2}, std::pair{4, 3}, std::pair{4, 2}}) {
            if (n < k) continue;
            for (std::uint64_t seed = 0; seed < 4; ++seed) {
                const auto s = steiner::greedy_generate(n, k, t, seed);
                CHECK(brute_force_valid(s));
                CHECK(steiner::validate(s).valid);
                CHECK(Rational(static_cast<std::int64_t>(s.blocks.size())) <= steiner::max_cardinality(n, k, t));
                // no further k-subset fits
                const auto used = subset_counts(s);
                for (unsigned mask = 0; mask < (1u << n); ++mask) {
                    if (std::popcount(mask) != k) continue;
                    std::vector<int> pts;
                    for (int i = 0; i < n; ++i) {
                        if (mask & (1u << i)) pts.push_back(i + 1);
                    }
                    bool fits = true;
                    for (const auto& sub : steiner::subsets(pts, t)) fits = fits && !used.contains(sub);
                    CHECK_FALSE(fits);
                }
            }
        }
    }
}

TEST_CASE("greedy is deterministic in the seed")
{
    CHECK(steiner::greedy_generate(12, 3, 2, 5).blocks == steiner::greedy_generate(12, 3, 2, 5).blocks);
}

TEST_CASE("max_cardinality")
{
    CHECK(steiner::max_cardinality(7, 3, 2) == Rational(7));
    CHECK(steiner::max_cardinality(6, 2, 1) == Rational(3));
    for (int n = 4; n <= 12; ++n) {
        CHECK(steiner::max_cardinality(n, 4, 4) == Rational(static_cast<std::int64_t>(steiner::binomial(n, 4))));
    }
    CHECK(steiner::max_cardinality(8, 3, 2) == Rational(28, 3));
    CHECK_THROWS_AS(steiner::max_cardinality(3, 4, 2), std::invalid_argument);
}

TEST_CASE("psi_reference")
{
    CHECK(steiner::psi_reference(3, 100, 1.0) ==
          doctest::Approx(1650.0 * (1.0 - std::pow(std::log(100.0), 1.5) / 10.0)).epsilon(1e-12));
    // 1650 (1 - 9.8825/10); rounding the log factor to 9.883 first gives 19.30
    CHECK(steiner::psi_reference(3, 100, 1.0) == doctest::Approx(19.381).epsilon(1e-4));
    for (int n = 4; n <= 20; ++n) {
        CHECK(steiner::psi_reference(4, n, 0.0) == static_cast<double>(steiner::binomial(n, 3)) / 4.0);
    }
    // log^{3/2}(n) / sqrt(n) peaks near n = e^3 at about 1.16
    CHECK(steiner::psi_reference(3, 20, 1.0) < 0.0);
    CHECK(steiner::psi_reference(3, 4, 1.0) == doctest::Approx(2.0 * (1.0 - std::pow(std::log(4.0), 1.5) / 2.0)));
    CHECK(steiner::psi_reference(3, 4, 1.0) > 0.0);
    CHECK_THROWS_AS(steiner::psi_reference(2, 10, 1.0), std::invalid_argument);
}

TEST_CASE("system file round trip and parse errors")
{
    const auto s = steiner::greedy_generate(10, 3, 2, 9);
    std::stringstream ss;
    steiner::write_system(ss, s);
    const auto back = steiner::read_system(ss);
    CHECK(back.n == s.n);
    CHECK(back.k == s.k);
    CHECK(back.t == s.t);
    CHECK(back.blocks == s.blocks);

    std::istringstream bad("7 3 2\n1 2 x\n");
    CHECK_THROWS_AS(steiner::read_system(bad), std::invalid_argument);
    std::istringstream empty("");
    CHECK_THROWS_AS(steiner::read_system(empty), std::invalid_argument);
}

TEST_CASE("fixture file")
{
    const auto s = io::load_system(VNLAB_FIXTURES "/fano.txt");
    CHECK(s.blocks.size() == 7);
    CHECK(brute_force_valid(s));
    CHECK(steiner::validate(s).valid);
    CHECK(steiner::max_pair_multiplicity(s) == 1);
}

TEST_CASE("pair multiplicity")
{
    CHECK(steiner::max_pair_multiplicity(make(5, 3, 2, {{1, 2, 3}, {1, 2, 4}, {1, 2, 5}})) == 3);
    CHECK(steiner::max_pair_multiplicity(make(5, 3, 2, {})) == 0);
    CHECK(steiner::max_pair_multiplicity(make(6, 4, 3, {{1, 2, 3, 4}, {1, 2, 5, 6}})) == 2);
}
