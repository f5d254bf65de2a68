#pragma once

#include <complex>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "vnlab/steiner.hpp"

namespace vnlab {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

}  // namespace vnlab

namespace vnlab::poly {

/// z_{j1} ... z_{jk} with j1 <= ... <= jk, 1-based.
struct Monomial {
    std::vector<int> indices;

    friend auto operator<=>(const Monomial&, const Monomial&) = default;
    friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Sparse k-homogeneous polynomial in n complex variables. Zero coefficients
/// are never stored.
class HomogeneousPolynomial {
public:
    HomogeneousPolynomial(int n, int k);

    [[nodiscard]] int n() const { return n_; }
    [[nodiscard]] int k() const { return k_; }
    [[nodiscard]] std::size_t size() const { return terms_.size(); }
    [[nodiscard]] bool empty() const { return terms_.empty(); }
    [[nodiscard]] const std::map<Monomial, cplx>& terms() const { return terms_; }
    [[nodiscard]] cplx coefficient(const Monomial& m) const;

    /// Adds c to the coefficient of the monomial with these indices (any
    /// order; they are sorted). Throws on out-of-range or wrong-length input.
    void add(std::vector<int> indices, cplx c);

    friend bool operator==(const HomogeneousPolynomial&, const HomogeneousPolynomial&) = default;

private:
    int n_;
    int k_;
    std::map<Monomial, cplx> terms_;
};

cplx evaluate(const HomogeneousPolynomial& p, std::span<const cplx> z);

/// Holomorphic gradient (dp/dz_1, ..., dp/dz_n) at z.
CVector gradient(const HomogeneousPolynomial& p, std::span<const cplx> z);

/// Coefficient of block J is eps_J * a_J with independent fair signs drawn
/// from `seed` (a_J = 1 without weights). Requires t = k - 1.
HomogeneousPolynomial random_steiner_polynomial(const steiner::PartialSteinerSystem& system,
                                                const std::optional<std::map<steiner::Block, cplx>>& weights,
                                                std::uint64_t seed);

/// The signs eps_J used by random_steiner_polynomial for `seed`, in block order.
std::vector<int> steiner_signs(std::size_t count, std::uint64_t seed);

/// Symmetric k-linear form L with L(z, ..., z) = p(z), evaluated through the
/// polarization identity (2^k evaluations of p).
cplx polarize_evaluate(const HomogeneousPolynomial& p, std::span<const CVector> args);

/// max over monomials of |a_alpha| alpha! / k!; certifies the l_1-ball norm.
double l1_ball_upper_bound(const HomogeneousPolynomial& p);

/// sum |c_J|; certifies the norm on every l_q ball.
double coefficient_sum(const HomogeneousPolynomial& p);

/// alpha! for the exponent vector of a sorted index tuple.
double multiplicity_factorial(const Monomial& m);

double factorial(int k);

}  // namespace vnlab::poly
