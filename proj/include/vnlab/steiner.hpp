#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "vnlab/rational.hpp"

namespace vnlab::steiner {

/// A block: strictly increasing points of {1, ..., n}.
struct Block {
    std::vector<int> points;

    [[nodiscard]] std::size_t size() const { return points.size(); }
    friend auto operator<=>(const Block&, const Block&) = default;
    friend bool operator==(const Block&, const Block&) = default;
};

/// S_p(t, k, n): k-subsets of {1..n} such that every t-subset lies in at most
/// one block. Blocks are kept sorted; `validate` is the only authority on the
/// uniqueness property.
struct PartialSteinerSystem {
    int n = 0;
    int k = 0;
    int t = 0;
    std::vector<Block> blocks;
};

struct Violation {
    std::vector<int> subset;  ///< the t-subset contained in both blocks
    Block first;
    Block second;
};

struct ValidationResult {
    bool valid = true;
    std::vector<std::string> structural_errors;  ///< malformed parameters or blocks
    std::vector<Violation> violations;           ///< t-subsets in two distinct blocks
};

ValidationResult validate(const PartialSteinerSystem& system);

/// Shuffle all k-subsets with `seed`, then accept first fit. The result is a
/// maximal packing: no further k-subset can be added.
PartialSteinerSystem greedy_generate(int n, int k, int t, std::uint64_t seed);

/// binom(n, t) / binom(k, t), the packing ceiling.
Rational max_cardinality(int n, int k, int t);

/// Reference lower cardinality psi(k, n) for S_p(k-1, k, n) systems, natural log.
/// May be negative for small n, meaning no guarantee.
double psi_reference(int k, int n, double c = 1.0);

/// Fano plane S(2, 3, 7).
PartialSteinerSystem fano_plane();

std::uint64_t binomial(int n, int k);

/// Header line "n k t", then one block per line as ascending integers.
void write_system(std::ostream& out, const PartialSteinerSystem& system);
PartialSteinerSystem read_system(std::istream& in);

/// Largest number of blocks sharing one pair of points.
int max_pair_multiplicity(const PartialSteinerSystem& system);

/// Every size-t subset of `points` (ascending, lexicographic).
std::vector<std::vector<int>> subsets(const std::vector<int>& points, int t);

}  // namespace vnlab::steiner
