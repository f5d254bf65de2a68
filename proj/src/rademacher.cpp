#include "vnlab/rademacher.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace vnlab::rademacher {

namespace {

cplx monomial(const steiner::Block& block, std::span<const cplx> z)
{
    cplx v{1.0, 0.0};
    for (int j : block.points) v *= z[static_cast<std::size_t>(j - 1)];
    return v;
}

void require_point(const RademacherProcess& process, std::span<const cplx> z)
{
    if (static_cast<int>(z.size()) != process.system.n) {
        throw std::invalid_argument("point has length " + std::to_string(z.size()) + ", expected " +
                                    std::to_string(process.system.n));
    }
}

double excess(std::span<const double> draws, double c)
{
    double sum = 0.0;
    for (double x : draws) sum += std::expm1(x * x / (c * c));
    return sum / static_cast<double>(draws.size());
}

double psi2_bisect(std::span<const double> draws)
{
    double second = 0.0;
    for (double x : draws) second += x * x;
    const double l2 = std::sqrt(second / static_cast<double>(draws.size()));
    if (l2 == 0.0) return 0.0;
    double lo = l2 / 10.0;
    double hi = 100.0 * l2;
    if (excess(draws, lo) <= 1.0) return lo;
    if (!(excess(draws, hi) <= 1.0)) return std::numeric_limits<double>::infinity();
    while (hi - lo > 1e-3 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (excess(draws, mid) <= 1.0) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

}  // namespace

RademacherProcess make_process(const steiner::PartialSteinerSystem& system,
                               const std::optional<std::map<steiner::Block, cplx>>& weights)
{
    if (system.t != system.k - 1) throw std::invalid_argument("Rademacher process needs a system with t = k - 1");
    if (!steiner::validate(system).valid) throw std::invalid_argument("Rademacher process needs a valid system");
    RademacherProcess out{system, {}, system.k};
    out.weights.reserve(system.blocks.size());
    for (const auto& block : system.blocks) {
        if (!weights) {
            out.weights.emplace_back(1.0);
            continue;
        }
        const auto it = weights->find(block);
        out.weights.push_back(it == weights->end() ? cplx{} : it->second);
    }
    if (weights) {
        for (const auto& [block, a] : *weights) {
            if (!std::binary_search(system.blocks.begin(), system.blocks.end(), block)) {
                throw std::invalid_argument("weight given for a set that is not a block");
            }
        }
    }
    return out;
}

double max_weight(const RademacherProcess& process)
{
    double m = 0.0;
    for (const auto& a : process.weights) m = std::max(m, std::abs(a));
    return m;
}

poly::HomogeneousPolynomial signed_polynomial(const RademacherProcess& process, std::span<const int> signs)
{
    if (signs.size() != process.weights.size()) throw std::invalid_argument("one sign per block is required");
    poly::HomogeneousPolynomial p(process.system.n, process.k);
    for (std::size_t b = 0; b < signs.size(); ++b) {
        const cplx c = static_cast<double>(signs[b]) * process.weights[b] / static_cast<double>(process.k);
        if (c != cplx{}) p.add(process.system.blocks[b].points, c);
    }
    return p;
}

std::vector<int> draw_signs(const RademacherProcess& process, std::uint64_t sign_seed)
{
    Rng rng(derive_seed(sign_seed, "rademacher.signs"));
    std::vector<int> signs(process.weights.size());
    for (auto& s : signs) s = rng.sign();
    return signs;
}

double sample_sup(const RademacherProcess& process, std::uint64_t sign_seed, const norm::AscentOptions& options)
{
    const auto p = signed_polynomial(process, draw_signs(process, sign_seed));
    if (p.empty()) return 0.0;
    return norm::estimate_norm(p, Exponent::finite(2), options).lower;
}

double l2_distance(const RademacherProcess& process, std::span<const cplx> z, std::span<const cplx> zp)
{
    require_point(process, z);
    require_point(process, zp);
    double sum = 0.0;
    for (std::size_t b = 0; b < process.weights.size(); ++b) {
        const auto& block = process.system.blocks[b];
        sum += std::norm(process.weights[b]) * std::norm(monomial(block, z) - monomial(block, zp));
    }
    return std::sqrt(sum) / static_cast<double>(process.k);
}

OrliczEstimate psi2_norm(std::span<const double> draws)
{
    if (draws.empty()) throw std::invalid_argument("psi2_norm needs at least one draw");
    OrliczEstimate out;
    out.samples = draws.size();
    out.value = psi2_bisect(draws);
    if (out.value == 0.0) return out;
    const std::size_t half = draws.size() / 2;
    if (half == 0) return out;
    const double a = psi2_bisect(draws.first(half));
    const double b = psi2_bisect(draws.subspan(half));
    out.standard_error = 0.5 * std::abs(a - b);
    out.unstable = !std::isfinite(out.value) || !(std::abs(a - b) <= 0.1 * out.value);
    return out;
}

OrliczEstimate psi2_norm_mc(const std::function<double(Rng&)>& sampler, std::size_t samples, std::uint64_t seed)
{
    if (samples < 1000) throw std::invalid_argument("psi2_norm_mc needs at least 1000 samples");
    Rng rng(derive_seed(seed, "rademacher.psi2"));
    std::vector<double> draws(samples);
    for (auto& d : draws) d = sampler(rng);
    return psi2_norm(draws);
}

CVector random_ball_point(Rng& rng, int n)
{
    CVector z(static_cast<std::size_t>(n));
    double norm2 = 0.0;
    do {
        norm2 = 0.0;
        for (auto& v : z) {
            v = rng.complex_normal();
            norm2 += std::norm(v);
        }
    } while (norm2 == 0.0);
    const double radius = std::pow(rng.uniform(), 1.0 / (2.0 * n));
    const double s = radius / std::sqrt(norm2);
    for (auto& v : z) v *= s;
    return z;
}

LipschitzReport lipschitz_check(const RademacherProcess& process, int pairs, std::uint64_t seed, int psi_pairs,
                                std::size_t psi_samples)
{
    if (pairs < 1) throw std::invalid_argument("lipschitz_check needs pairs >= 1");
    const int n = process.system.n;
    const double a_max = max_weight(process);
    LipschitzReport report;
    report.pairs = pairs;
    report.min_psi2_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < pairs; ++i) {
        Rng rng(derive_seed(seed, "rademacher.lipschitz", static_cast<std::uint64_t>(i)));
        const CVector z = random_ball_point(rng, n);
        const CVector zp = random_ball_point(rng, n);
        double sup_diff = 0.0;
        for (int j = 0; j < n; ++j) {
            sup_diff = std::max(sup_diff, std::abs(z[static_cast<std::size_t>(j)] - zp[static_cast<std::size_t>(j)]));
        }
        LipschitzRow row;
        row.l2 = l2_distance(process, z, zp);
        row.bound = a_max * sup_diff;
        if (row.bound == 0.0) {
            ++report.skipped;
            continue;
        }
        row.ratio = row.l2 / row.bound;
        report.max_ratio = std::max(report.max_ratio, row.ratio);
        if (row.ratio > 1.0 + 1e-12) ++report.violations;
        if (i < psi_pairs && row.l2 > 0.0) {
            std::vector<cplx> diff(process.weights.size());
            for (std::size_t b = 0; b < diff.size(); ++b) {
                const auto& block = process.system.blocks[b];
                diff[b] = process.weights[b] * (monomial(block, z) - monomial(block, zp)) /
                          static_cast<double>(process.k);
            }
            const auto sampler = [&](Rng& r) {
                cplx y{};
                for (const auto& d : diff) y += static_cast<double>(r.sign()) * d;
                return std::abs(y);
            };
            row.psi2 = psi2_norm_mc(sampler, psi_samples,
                                    derive_seed(seed, "rademacher.lipschitz.psi2", static_cast<std::uint64_t>(i)))
                           .value;
            report.min_psi2_ratio = std::min(report.min_psi2_ratio, row.psi2 / row.l2);
            report.max_psi2_ratio = std::max(report.max_psi2_ratio, row.psi2 / row.l2);
        }
        report.rows.push_back(row);
    }
    if (!std::isfinite(report.min_psi2_ratio)) report.min_psi2_ratio = 0.0;
    return report;
}

double IncrementCheck::z_score() const
{
    if (standard_error == 0.0) return monte_carlo == closed_form ? 0.0 : std::numeric_limits<double>::infinity();
    return std::abs(monte_carlo - closed_form) / standard_error;
}

IncrementCheck increment_check(const RademacherProcess& process, std::span<const cplx> z, std::span<const cplx> zp,
                               std::size_t samples, std::uint64_t seed)
{
    require_point(process, z);
    require_point(process, zp);
    if (samples < 2) throw std::invalid_argument("increment_check needs at least 2 samples");
    std::vector<cplx> diff(process.weights.size());
    for (std::size_t b = 0; b < diff.size(); ++b) {
        const auto& block = process.system.blocks[b];
        diff[b] = process.weights[b] * (monomial(block, z) - monomial(block, zp)) / static_cast<double>(process.k);
    }
    Rng rng(derive_seed(seed, "rademacher.increment"));
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
        cplx y{};
        for (const auto& d : diff) y += static_cast<double>(rng.sign()) * d;
        const double m = std::norm(y);
        sum += m;
        sum_sq += m * m;
    }
    const double count = static_cast<double>(samples);
    const double mean = sum / count;
    const double var = std::max(0.0, (sum_sq - count * mean * mean) / (count - 1.0));
    IncrementCheck out;
    out.closed_form = l2_distance(process, z, zp);
    out.monte_carlo = std::sqrt(mean);
    out.standard_error = out.monte_carlo > 0.0 ? std::sqrt(var / count) / (2.0 * out.monte_carlo) : 0.0;
    return out;
}

}  // namespace vnlab::rademacher
