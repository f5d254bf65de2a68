#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vnlab/exponent.hpp"
#include "vnlab/polynomial.hpp"

namespace vnlab::norm {

struct AscentOptions {
    int restarts = 32;
    int max_iter = 2000;
    double tol = 1e-10;  ///< relative objective change that counts as stalled
    std::uint64_t seed = 0;
    bool relax_magnitudes = false;  ///< q = inf only: also optimize |z_j| in [0, 1]
    int threads = 1;
};

struct UpperBound {
    double value = 0.0;
    std::string method;
};

/// Two-sided estimate of sup{|p(z)| : ||z||_q <= 1}. `lower` is realized by
/// `witness`; `upper` is the smallest applicable certificate.
struct NormEstimate {
    Exponent q = Exponent::finite(2);
    double lower = 0.0;
    CVector witness;
    std::string lower_method;
    double upper = 0.0;
    std::string upper_method;
};

NormEstimate estimate_norm(const poly::HomogeneousPolynomial& p, const Exponent& q, const AscentOptions& options = {},
                           const std::optional<UpperBound>& caller_bound = std::nullopt);

/// Smallest of the certificates available for (p, q): coefficient sum,
/// flattening of the symmetric tensor, the exact quadratic oracle, ball
/// embeddings and interpolation chains.
UpperBound certified_upper(const poly::HomogeneousPolynomial& p, const Exponent& q);

/// Largest singular value of the complex symmetric coefficient matrix; the
/// exact l_2-ball norm of a 2-homogeneous polynomial.
double exact_norm_quadratic_l2(const poly::HomogeneousPolynomial& p);

/// Upper bound on the l_2 multilinear norm of the symmetric form of p (hence
/// on its l_2 polynomial norm) from spectral norms of tensor unfoldings.
double flattening_bound(const poly::HomogeneousPolynomial& p);

/// Upper bound on lambda(k, q): 1 at q = 2, the polydisc constant at
/// q = inf and k^k / k! otherwise.
double lambda_constant(int k, const Exponent& q);

/// (lambda(k,2) n2)^(2/q) (lambda(k,inf) ninf)^((q-2)/q) for 2 < q < inf.
double interpolation_upper(const Exponent& q, double norm2_upper, double norminf_upper, int k);

/// (lambda(k,1) n1)^((2-q)/q) (lambda(k,2) n2)^((2q-2)/q) for 1 < q < 2.
double interpolation_upper_low(const Exponent& q, double norm1_upper, double norm2_upper, int k);

/// D (n |J| max_a^2 log k)^(1/2): l_inf reference for random-sign polynomials.
double ksz_reference(int n, int card, double max_a, int k, double D);

struct MultilinearEstimate {
    double lower = 0.0;
    std::vector<CVector> witness;
};

/// Alternating maximization of |L(z1, ..., zk)| over k independent vectors on
/// the l_q sphere, with L evaluated through polarization.
MultilinearEstimate estimate_multilinear_norm(const poly::HomogeneousPolynomial& p, const Exponent& q,
                                              const AscentOptions& options = {});

double lq_norm(std::span<const cplx> z, const Exponent& q);

/// Unit l_q vector z maximizing |sum v_j z_j|.
CVector holder_maximizer(std::span<const cplx> v, const Exponent& q);

}  // namespace vnlab::norm
