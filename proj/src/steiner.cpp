#include "vnlab/steiner.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "vnlab/rng.hpp"

namespace vnlab::steiner {

namespace {

constexpr int kMaxPoints = 64;

void require_parameters(int n, int k, int t)
{
    if (!(1 <= t && t <= k && k <= n)) {
        throw std::invalid_argument("need 1 <= t <= k <= n, got n=" + std::to_string(n) + " k=" + std::to_string(k) +
                                    " t=" + std::to_string(t));
    }
}

std::string describe(const Block& b)
{
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < b.points.size(); ++i) os << (i ? "," : "") << b.points[i];
    os << '}';
    return os.str();
}

// Calls f(mask) for every t-subset of the block.
template <typename F>
void for_each_subset_mask(const std::vector<int>& points, int t, F&& f)
{
    const int k = static_cast<int>(points.size());
    std::vector<int> idx(static_cast<std::size_t>(t));
    for (int i = 0; i < t; ++i) idx[static_cast<std::size_t>(i)] = i;
    for (;;) {
        std::uint64_t m = 0;
        for (int i : idx) m |= std::uint64_t{1} << (points[static_cast<std::size_t>(i)] - 1);
        f(m);
        int pos = t - 1;
        while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == k - t + pos) --pos;
        if (pos < 0) return;
        ++idx[static_cast<std::size_t>(pos)];
        for (int j = pos + 1; j < t; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
}

std::vector<int> points_of(std::uint64_t mask)
{
    std::vector<int> out;
    for (int p = 1; mask != 0; ++p, mask >>= 1) {
        if (mask & 1U) out.push_back(p);
    }
    return out;
}

}  // namespace

std::uint64_t binomial(int n, int k)
{
    if (k < 0 || n < 0 || k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
        if (r > std::numeric_limits<std::uint64_t>::max()) throw std::overflow_error("binomial overflow");
    }
    return static_cast<std::uint64_t>(r);
}

std::vector<std::vector<int>> subsets(const std::vector<int>& points, int t)
{
    std::vector<std::vector<int>> out;
    const int k = static_cast<int>(points.size());
    if (t < 0 || t > k) return out;
    if (t == 0) return {{}};
    std::vector<int> idx(static_cast<std::size_t>(t));
    for (int i = 0; i < t; ++i) idx[static_cast<std::size_t>(i)] = i;
    for (;;) {
        std::vector<int> s;
        s.reserve(idx.size());
        for (int i : idx) s.push_back(points[static_cast<std::size_t>(i)]);
        out.push_back(std::move(s));
        int pos = t - 1;
        while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == k - t + pos) --pos;
        if (pos < 0) return out;
        ++idx[static_cast<std::size_t>(pos)];
        for (int j = pos + 1; j < t; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
}

ValidationResult validate(const PartialSteinerSystem& system)
{
    ValidationResult result;
    const auto& [n, k, t, blocks] = system;
    if (!(1 <= t && t <= k && k <= n)) {
        result.structural_errors.push_back("parameters violate 1 <= t <= k <= n (n=" + std::to_string(n) +
                                           " k=" + std::to_string(k) + " t=" + std::to_string(t) + ")");
    }
    if (n > kMaxPoints) result.structural_errors.push_back("n exceeds the supported maximum of 64 points");
    if (!result.structural_errors.empty()) {
        result.valid = false;
        return result;
    }

    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const auto& pts = blocks[b].points;
        if (static_cast<int>(pts.size()) != k) {
            result.structural_errors.push_back("block " + std::to_string(b) + " " + describe(blocks[b]) +
                                               " has length " + std::to_string(pts.size()) + ", expected " +
                                               std::to_string(k));
            continue;
        }
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (pts[i] < 1 || pts[i] > n) {
                result.structural_errors.push_back("block " + std::to_string(b) + " " + describe(blocks[b]) +
                                                   " has point " + std::to_string(pts[i]) + " outside [1, " +
                                                   std::to_string(n) + "]");
                break;
            }
            if (i > 0 && pts[i] <= pts[i - 1]) {
                result.structural_errors.push_back("block " + std::to_string(b) + " " + describe(blocks[b]) +
                                                   " is not strictly increasing");
                break;
            }
        }
    }
    if (!result.structural_errors.empty()) {
        result.valid = false;
        return result;
    }

    std::unordered_map<std::uint64_t, std::size_t> owner;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        for_each_subset_mask(blocks[b].points, t, [&](std::uint64_t m) {
            auto [it, inserted] = owner.emplace(m, b);
            if (!inserted) result.violations.push_back({points_of(m), blocks[it->second], blocks[b]});
        });
    }
    result.valid = result.violations.empty();
    return result;
}

int max_pair_multiplicity(const PartialSteinerSystem& system)
{
    std::map<std::pair<int, int>, int> count;
    int best = 0;
    for (const auto& block : system.blocks) {
        const auto& pts = block.points;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::max(best, ++count[{pts[i], pts[j]}]);
        }
    }
    return best;
}

PartialSteinerSystem greedy_generate(int n, int k, int t, std::uint64_t seed)
{
    require_parameters(n, k, t);
    if (n > kMaxPoints) throw std::invalid_argument("n exceeds the supported maximum of 64 points");
    if (binomial(n, k) > 20'000'000ULL) throw std::invalid_argument("too many candidate blocks for greedy generation");

    std::vector<std::vector<int>> candidates;
    candidates.reserve(binomial(n, k));
    std::vector<int> all(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i + 1;
    candidates = subsets(all, k);

    Rng rng(derive_seed(seed, "steiner.greedy"));
    rng.shuffle(candidates);

    std::unordered_set<std::uint64_t> occupied;
    PartialSteinerSystem out{n, k, t, {}};
    std::vector<std::uint64_t> masks;
    for (auto& cand : candidates) {
        masks.clear();
        for_each_subset_mask(cand, t, [&](std::uint64_t m) { masks.push_back(m); });
        const bool fits = std::none_of(masks.begin(), masks.end(), [&](std::uint64_t m) { return occupied.count(m) != 0; });
        if (!fits) continue;
        occupied.insert(masks.begin(), masks.end());
        out.blocks.push_back(Block{std::move(cand)});
    }
    std::sort(out.blocks.begin(), out.blocks.end());
    return out;
}

Rational max_cardinality(int n, int k, int t)
{
    require_parameters(n, k, t);
    const auto num = binomial(n, t);
    const auto den = binomial(k, t);
    if (num > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
        throw std::overflow_error("max_cardinality: binomial too large");
    }
    return {static_cast<std::int64_t>(num), static_cast<std::int64_t>(den)};
}

double psi_reference(int k, int n, double c)
{
    if (k < 3) throw std::invalid_argument("psi_reference needs k >= 3");
    if (n < k) throw std::invalid_argument("psi_reference needs n >= k");
    if (!(c >= 0.0)) throw std::invalid_argument("psi_reference needs c >= 0");
    const double base = static_cast<double>(binomial(n, k - 1)) / k;
    const double root = std::pow(static_cast<double>(n), 1.0 / (k - 1));
    const double correction = k == 3 ? c * std::pow(std::log(static_cast<double>(n)), 1.5) / root : c / root;
    return base * (1.0 - correction);
}

PartialSteinerSystem fano_plane()
{
    return {7, 3, 2, {{{1, 2, 3}}, {{1, 4, 5}}, {{1, 6, 7}}, {{2, 4, 6}}, {{2, 5, 7}}, {{3, 4, 7}}, {{3, 5, 6}}}};
}

void write_system(std::ostream& out, const PartialSteinerSystem& system)
{
    out << system.n << ' ' << system.k << ' ' << system.t << '\n';
    for (const auto& b : system.blocks) {
        for (std::size_t i = 0; i < b.points.size(); ++i) out << (i ? " " : "") << b.points[i];
        out << '\n';
    }
}

PartialSteinerSystem read_system(std::istream& in)
{
    PartialSteinerSystem sys;
    std::string line;
    bool header = false;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ls(line);
        if (!header) {
            if (!(ls >> sys.n >> sys.k >> sys.t)) throw std::invalid_argument("system file: bad header on line " + std::to_string(lineno));
            header = true;
            continue;
        }
        Block b;
        int p = 0;
        while (ls >> p) b.points.push_back(p);
        if (!ls.eof()) throw std::invalid_argument("system file: non-integer token on line " + std::to_string(lineno));
        sys.blocks.push_back(std::move(b));
    }
    if (!header) throw std::invalid_argument("system file: missing 'n k t' header");
    std::sort(sys.blocks.begin(), sys.blocks.end());
    return sys;
}

}  // namespace vnlab::steiner
