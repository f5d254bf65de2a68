#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vnlab/exponent.hpp"
#include "vnlab/norm.hpp"
#include "vnlab/rational.hpp"
#include "vnlab/steiner.hpp"

namespace vnlab::bounds {

/// n^power * log(n)^log_power.
struct Rate {
    Rational power;
    Rational log_power;

    friend bool operator==(const Rate&, const Rate&) = default;
};

struct ReferenceExponents {
    std::optional<Rate> mt_lower;        ///< published C_{k,q} lower rate, q < inf
    std::optional<Rate> mt_upper;        ///< published C_{k,q} upper rate, q < inf
    std::optional<Rate> improved_lower;  ///< C_{k,q} lower rate for 2 <= q <= inf
    Rate c_upper;
    Rate d_upper;
    std::optional<Rate> d_lower;  ///< q = 2 only
};

ReferenceExponents reference_exponents(int k, const Exponent& q);

enum class Which { C, D };

std::string to_string(Which which);
Which parse_which(const std::string& s);

struct NormBracket {
    double lower = 0.0;
    double upper = 0.0;
    std::string upper_method;
};

/// Checks that make the emitted bound a valid lower bound.
struct Certification {
    double max_commutator = 0.0;
    double max_op_norm = 0.0;          ///< power iteration, unscaled
    double max_op_norm_upper = 0.0;    ///< Schur test, unscaled
    double row_sup_lower = 0.0;        ///< sup_alpha ||sum alpha_j T_j||, optimized, unscaled
    double row_sup_upper = 0.0;        ///< certified, unscaled
    double scaled_row_condition = 0.0; ///< row_sup_upper times the scale (D) or the scaled operator sum bound (C)
    double recipe_scale = 0.0;         ///< (1 + ||p||_2 upper)^(-1/2) for D, n^(-1/q) for C
    bool recipe_scale_certified = false;
    bool passed = false;
    std::string failure;
};

struct BoundRecord {
    Which which = Which::D;
    int k = 0;
    Exponent q = Exponent::finite(2);
    int n = 0;
    std::uint64_t seed = 0;
    std::size_t cardinality = 0;
    NormBracket norm_l2;
    NormBracket norm_q;
    NormBracket norm_inf;
    double scale = 0.0;
    double direct = 0.0;    ///< ||p(sT)|| / ||p||_q upper
    double analytic = 0.0;  ///< s^k |J| / ||p||_q upper
    double estimate = 0.0;  ///< recipe with ascent norms in place of certificates; not a bound
    Certification certification;
};

struct PipelineOptions {
    norm::AscentOptions ascent;
    int row_trials = 20;
};

/// Thrown when a tuple fails a check that the emitted bound depends on.
class CertificationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Certified lower bound for D_{k,2}(n) from one greedy Steiner system and
/// sign draw, both derived from `seed`.
BoundRecord lower_bound_D(int k, int n, std::uint64_t seed, const PipelineOptions& options = {});
BoundRecord lower_bound_D(const steiner::PartialSteinerSystem& system, std::uint64_t seed,
                          const PipelineOptions& options = {});

/// Certified lower bound for C_{k,q}(n).
BoundRecord lower_bound_C(int k, const Exponent& q, int n, std::uint64_t seed, const PipelineOptions& options = {});
BoundRecord lower_bound_C(const steiner::PartialSteinerSystem& system, const Exponent& q, std::uint64_t seed,
                          const PipelineOptions& options = {});

struct ScalingFit {
    std::vector<std::pair<double, double>> points;  ///< (n, value)
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  ///< RMS of log residuals
    int inversions = 0;     ///< consecutive decreases of value
};

/// Least squares fit of log(value) against log(n). Needs two or more points
/// with distinct n and positive values.
ScalingFit fit_power_law(const std::vector<std::pair<double, double>>& points);

struct SweepResult {
    std::vector<BoundRecord> records;  ///< ordered by (n, seed index)
    std::vector<std::string> warnings;
    ScalingFit fit;           ///< per-n median of the certified bound
    ScalingFit estimate_fit;  ///< per-n median of the uncertified estimate
};

SweepResult scaling_sweep(int k, const Exponent& q, const std::vector<int>& n_list, int seeds_per_n, Which which,
                          std::uint64_t root_seed, const PipelineOptions& options = {}, int threads = 1);

/// Seed of sweep cell (n, s) under `root_seed`.
std::uint64_t cell_seed(std::uint64_t root_seed, int n, int s);

struct AkqReference {
    double lambda_form = 0.0;   ///< with (k+1)^((k+1)/2), as in lambda(k, inf)
    double printed_form = 0.0;  ///< with (k+1)^((k+1)/k)
};

/// max{M, K, D} (k^(k/2) (k+1)^e sqrt(ln k) / (2^k k! sqrt(k!)))^((q-2)/q) k^(2/q)
/// for both readings of the exponent e.
AkqReference a_kq_reference(int k, const Exponent& q, double M, double K, double D);

double median(std::vector<double> values);

}  // namespace vnlab::bounds
