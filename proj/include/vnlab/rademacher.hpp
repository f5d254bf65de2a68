#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "vnlab/norm.hpp"
#include "vnlab/polynomial.hpp"
#include "vnlab/rng.hpp"
#include "vnlab/steiner.hpp"

namespace vnlab::rademacher {

/// Y_z = (1/k) sum_J eps_J a_J z_J over the blocks of an S_p(k-1, k, n) system.
struct RademacherProcess {
    steiner::PartialSteinerSystem system;
    std::vector<cplx> weights;  ///< a_J in block order
    int k = 0;
};

/// Unit weights when `weights` is empty; blocks missing from the map get 0.
RademacherProcess make_process(const steiner::PartialSteinerSystem& system,
                               const std::optional<std::map<steiner::Block, cplx>>& weights = std::nullopt);

double max_weight(const RademacherProcess& process);

/// (1/k) sum_J eps_J a_J z_J as a polynomial.
poly::HomogeneousPolynomial signed_polynomial(const RademacherProcess& process, std::span<const int> signs);

std::vector<int> draw_signs(const RademacherProcess& process, std::uint64_t sign_seed);

/// Estimated sup over the unit l_2 ball of |Y_z| for one sign draw.
double sample_sup(const RademacherProcess& process, std::uint64_t sign_seed, const norm::AscentOptions& options);

/// Exact L_2 distance ||Y_z - Y_z'||: (1/k) (sum_J |a_J|^2 |z_J - z'_J|^2)^(1/2).
double l2_distance(const RademacherProcess& process, std::span<const cplx> z, std::span<const cplx> zp);

struct OrliczEstimate {
    double value = 0.0;
    std::size_t samples = 0;
    double standard_error = 0.0;  ///< half the gap between the two half-sample estimates
    bool unstable = false;        ///< half-sample estimates disagree by more than 10%
};

/// Smallest c with mean(exp(|Z|^2 / c^2) - 1) <= 1 over the given draws,
/// bisected to relative 1e-3 inside [L2 / 10, 100 L2].
OrliczEstimate psi2_norm(std::span<const double> draws);

/// psi2_norm over `samples` draws of `sampler`, fed from the stream of `seed`.
OrliczEstimate psi2_norm_mc(const std::function<double(Rng&)>& sampler, std::size_t samples, std::uint64_t seed);

/// Uniform point of the complex unit l_2 ball in C^n.
CVector random_ball_point(Rng& rng, int n);

struct LipschitzRow {
    double l2 = 0.0;        ///< left side, ||Y_z - Y_z'||_{L_2}
    double bound = 0.0;     ///< right side, max|a_J| ||z - z'||_inf
    double ratio = 0.0;
    double psi2 = -1.0;     ///< Monte Carlo psi_2 norm of |Y_z - Y_z'|, -1 when not sampled
};

struct LipschitzReport {
    int pairs = 0;
    int skipped = 0;  ///< pairs with z = z'
    int violations = 0;
    double max_ratio = 0.0;
    double min_psi2_ratio = 0.0;  ///< psi_2 / L_2 over the sampled pairs
    double max_psi2_ratio = 0.0;
    std::vector<LipschitzRow> rows;
};

/// Checks the L_2 Lipschitz inequality on `pairs` random ball pairs. The
/// first `psi_pairs` pairs also get a psi_2 estimate from `psi_samples` draws.
LipschitzReport lipschitz_check(const RademacherProcess& process, int pairs, std::uint64_t seed, int psi_pairs = 0,
                                std::size_t psi_samples = 10000);

struct IncrementCheck {
    double closed_form = 0.0;
    double monte_carlo = 0.0;     ///< root mean square of Y_z - Y_z' over the draws
    double standard_error = 0.0;  ///< delta-method error of `monte_carlo`
    [[nodiscard]] double z_score() const;
};

/// Monte Carlo estimate of ||Y_z - Y_z'||_{L_2} against the closed form.
IncrementCheck increment_check(const RademacherProcess& process, std::span<const cplx> z, std::span<const cplx> zp,
                               std::size_t samples, std::uint64_t seed);

}  // namespace vnlab::rademacher
