#include "vnlab/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "vnlab/rng.hpp"

namespace vnlab::poly {

HomogeneousPolynomial::HomogeneousPolynomial(int n, int k) : n_(n), k_(k)
{
    if (n < 1) throw std::invalid_argument("polynomial needs n >= 1");
    if (k < 1) throw std::invalid_argument("polynomial needs k >= 1");
}

cplx HomogeneousPolynomial::coefficient(const Monomial& m) const
{
    const auto it = terms_.find(m);
    return it == terms_.end() ? cplx{} : it->second;
}

void HomogeneousPolynomial::add(std::vector<int> indices, cplx c)
{
    if (static_cast<int>(indices.size()) != k_) {
        throw std::invalid_argument("monomial has " + std::to_string(indices.size()) + " indices, degree is " +
                                    std::to_string(k_));
    }
    for (int j : indices) {
        if (j < 1 || j > n_) throw std::invalid_argument("monomial index " + std::to_string(j) + " outside [1, n]");
    }
    std::sort(indices.begin(), indices.end());
    Monomial key{std::move(indices)};
    auto [it, inserted] = terms_.try_emplace(std::move(key), cplx{});
    it->second += c;
    if (it->second == cplx{}) terms_.erase(it);
}

cplx evaluate(const HomogeneousPolynomial& p, std::span<const cplx> z)
{
    if (static_cast<int>(z.size()) != p.n()) {
        throw std::invalid_argument("evaluate: vector has length " + std::to_string(z.size()) + ", expected " +
                                    std::to_string(p.n()));
    }
    cplx sum{};
    for (const auto& [m, c] : p.terms()) {
        cplx prod = c;
        for (int j : m.indices) prod *= z[static_cast<std::size_t>(j - 1)];
        sum += prod;
    }
    return sum;
}

CVector gradient(const HomogeneousPolynomial& p, std::span<const cplx> z)
{
    if (static_cast<int>(z.size()) != p.n()) throw std::invalid_argument("gradient: dimension mismatch");
    CVector g(z.size());
    const int k = p.k();
    for (const auto& [m, c] : p.terms()) {
        for (int u = 0; u < k; ++u) {
            cplx prod = c;
            for (int v = 0; v < k; ++v) {
                if (v != u) prod *= z[static_cast<std::size_t>(m.indices[static_cast<std::size_t>(v)] - 1)];
            }
            g[static_cast<std::size_t>(m.indices[static_cast<std::size_t>(u)] - 1)] += prod;
        }
    }
    return g;
}

std::vector<int> steiner_signs(std::size_t count, std::uint64_t seed)
{
    Rng rng(derive_seed(seed, "poly.signs"));
    std::vector<int> out(count);
    for (auto& s : out) s = rng.sign();
    return out;
}

HomogeneousPolynomial random_steiner_polynomial(const steiner::PartialSteinerSystem& system,
                                                const std::optional<std::map<steiner::Block, cplx>>& weights,
                                                std::uint64_t seed)
{
    if (system.t != system.k - 1) {
        throw std::invalid_argument("random_steiner_polynomial needs t = k - 1, got t=" + std::to_string(system.t) +
                                    " k=" + std::to_string(system.k));
    }
    const auto signs = steiner_signs(system.blocks.size(), seed);
    HomogeneousPolynomial p(system.n, system.k);
    for (std::size_t b = 0; b < system.blocks.size(); ++b) {
        cplx a{1.0, 0.0};
        if (weights) {
            const auto it = weights->find(system.blocks[b]);
            a = it == weights->end() ? cplx{} : it->second;
        }
        p.add(system.blocks[b].points, static_cast<double>(signs[b]) * a);
    }
    return p;
}

double factorial(int k)
{
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

cplx polarize_evaluate(const HomogeneousPolynomial& p, std::span<const CVector> args)
{
    const int k = p.k();
    if (static_cast<int>(args.size()) != k) throw std::invalid_argument("polarize_evaluate: need exactly k vectors");
    for (const auto& a : args) {
        if (static_cast<int>(a.size()) != p.n()) throw std::invalid_argument("polarize_evaluate: dimension mismatch");
    }
    const std::size_t n = static_cast<std::size_t>(p.n());
    CVector point(n);
    cplx sum{};
    for (std::uint32_t pattern = 0; pattern < (1U << k); ++pattern) {
        std::fill(point.begin(), point.end(), cplx{});
        int parity = 1;
        for (int j = 0; j < k; ++j) {
            const double eps = (pattern >> j) & 1U ? -1.0 : 1.0;
            if (eps < 0) parity = -parity;
            const auto& v = args[static_cast<std::size_t>(j)];
            for (std::size_t i = 0; i < n; ++i) point[i] += eps * v[i];
        }
        sum += static_cast<double>(parity) * evaluate(p, point);
    }
    return sum / (std::ldexp(1.0, k) * factorial(k));
}

double multiplicity_factorial(const Monomial& m)
{
    double out = 1.0;
    std::size_t i = 0;
    while (i < m.indices.size()) {
        std::size_t j = i;
        while (j < m.indices.size() && m.indices[j] == m.indices[i]) ++j;
        out *= factorial(static_cast<int>(j - i));
        i = j;
    }
    return out;
}

double l1_ball_upper_bound(const HomogeneousPolynomial& p)
{
    const double kf = factorial(p.k());
    double best = 0.0;
    for (const auto& [m, c] : p.terms()) best = std::max(best, std::abs(c) * multiplicity_factorial(m) / kf);
    return best;
}

double coefficient_sum(const HomogeneousPolynomial& p)
{
    double s = 0.0;
    for (const auto& [m, c] : p.terms()) s += std::abs(c);
    return s;
}

}  // namespace vnlab::poly
