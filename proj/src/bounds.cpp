#include "vnlab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "vnlab/dixon.hpp"
#include "vnlab/parallel.hpp"
#include "vnlab/polynomial.hpp"
#include "vnlab/rng.hpp"

namespace vnlab::bounds {

namespace {

struct Instance {
    steiner::PartialSteinerSystem system;
    poly::HomogeneousPolynomial p;
    dixon::DixonTuple tuple;
};

Instance make_instance(const steiner::PartialSteinerSystem& system, std::uint64_t seed)
{
    if (system.k < 3) throw std::invalid_argument("bound pipelines need k >= 3");
    if (system.n < system.k) throw std::invalid_argument("bound pipelines need n >= k");
    auto p = poly::random_steiner_polynomial(system, std::nullopt, derive_seed(seed, "bounds.signs"));
    auto tuple = dixon::build_tuple(system, p);
    return {system, std::move(p), std::move(tuple)};
}

steiner::PartialSteinerSystem generate(int k, int n, std::uint64_t seed)
{
    if (k < 3) throw std::invalid_argument("bound pipelines need k >= 3");
    if (n < k) throw std::invalid_argument("bound pipelines need n >= k");
    return steiner::greedy_generate(n, k, k - 1, derive_seed(seed, "bounds.steiner"));
}

NormBracket bracket(const poly::HomogeneousPolynomial& p, const Exponent& q, const norm::AscentOptions& base,
                    std::uint64_t seed, std::string_view stream)
{
    norm::AscentOptions opts = base;
    opts.seed = derive_seed(seed, stream);
    const auto est = norm::estimate_norm(p, q, opts);
    return {est.lower, est.upper, est.upper_method};
}

double scaled_poly_norm(const Instance& inst, double s)
{
    const auto m = dixon::polynomial_matrix(inst.p, inst.tuple);
    return std::pow(s, inst.system.k) * dixon::operator_norm(m).value;
}

void fill_operator_checks(const Instance& inst, Certification& cert)
{
    cert.max_commutator = dixon::check_commuting(inst.tuple);
    for (const auto& t : inst.tuple.ops) {
        cert.max_op_norm = std::max(cert.max_op_norm, dixon::operator_norm(t).value);
        cert.max_op_norm_upper = std::max(cert.max_op_norm_upper, dixon::schur_bound(t));
    }
}

Rate rate(Rational power, Rational log_power = 0) { return {power, log_power}; }

}  // namespace

ReferenceExponents reference_exponents(int k, const Exponent& q)
{
    if (k < 3) throw std::invalid_argument("reference exponents need k >= 3");
    const Rational inv = q.inverse();
    const Rational conj = q.conjugate_inverse();
    const Rational half(1, 2);
    const Rational kk(k);
    const Rational floor_half(k / 2);
    const bool at_least_two = q.is_infinite() || q.rational() >= Rational(2);

    ReferenceExponents out;
    if (q.is_finite()) {
        if (at_least_two) {
            out.mt_lower = rate(kk * half - (floor_half + 1) * half);
            out.mt_upper = rate((kk - 2) * half);
        } else {
            out.mt_lower = rate((kk - 1) * conj - floor_half * half);
            out.mt_upper = rate((kk - 2) * conj);
        }
    }
    if (at_least_two) {
        out.improved_lower = rate((kk - 2) * half, Rational(-3) * inv);
        out.c_upper = rate((kk - 2) * half);
        out.d_upper = rate((kk - 1) * (half + inv));
    } else {
        out.c_upper = rate((kk - 2) * conj);
        out.d_upper = rate((kk - 1) * (half + conj));
    }
    if (q.equals(2)) out.d_lower = rate(kk - 1, Rational(-3, 4) * (kk + 2));
    return out;
}

std::string to_string(Which which) { return which == Which::C ? "C" : "D"; }

Which parse_which(const std::string& s)
{
    if (s == "C" || s == "c") return Which::C;
    if (s == "D" || s == "d") return Which::D;
    throw std::invalid_argument("expected C or D, got '" + s + "'");
}

BoundRecord lower_bound_D(int k, int n, std::uint64_t seed, const PipelineOptions& options)
{
    return lower_bound_D(generate(k, n, seed), seed, options);
}

BoundRecord lower_bound_D(const steiner::PartialSteinerSystem& system, std::uint64_t seed,
                          const PipelineOptions& options)
{
    const Instance inst = make_instance(system, seed);
    const int k = system.k;
    BoundRecord rec;
    rec.which = Which::D;
    rec.k = k;
    rec.q = Exponent::finite(2);
    rec.n = system.n;
    rec.seed = seed;
    rec.cardinality = system.blocks.size();
    rec.norm_l2 = bracket(inst.p, Exponent::finite(2), options.ascent, seed, "bounds.norm.l2");
    rec.norm_q = rec.norm_l2;
    rec.norm_inf = bracket(inst.p, Exponent::infinity(), options.ascent, seed, "bounds.norm.linf");

    auto& cert = rec.certification;
    fill_operator_checks(inst, cert);
    const auto row = dixon::check_row_condition(inst.tuple, 1.0, options.row_trials, derive_seed(seed, "bounds.row"));
    cert.row_sup_lower = row.value;
    cert.row_sup_upper = row.certified_upper;

    const double upper = rec.norm_l2.upper;
    cert.recipe_scale = 1.0 / std::sqrt(1.0 + upper);
    cert.recipe_scale_certified = cert.recipe_scale * cert.row_sup_upper <= 1.0 + 1e-9;
    rec.scale = std::min(cert.recipe_scale, 1.0 / cert.row_sup_upper);
    cert.scaled_row_condition = rec.scale * cert.row_sup_upper;

    if (cert.max_commutator > 1e-12) {
        cert.failure = "commutator norm " + std::to_string(cert.max_commutator) + " exceeds 1e-12";
    } else if (rec.scale * cert.max_op_norm_upper > 1.0 + 1e-10) {
        cert.failure = "scaled operator is not a contraction";
    } else if (cert.scaled_row_condition > 1.0 + 1e-9) {
        cert.failure = "scaled row condition " + std::to_string(cert.scaled_row_condition) + " exceeds 1";
    } else if (!(upper > 0.0) || !std::isfinite(upper)) {
        cert.failure = "no finite positive norm certificate";
    }
    cert.passed = cert.failure.empty();
    if (!cert.passed) throw CertificationError("D pipeline n=" + std::to_string(rec.n) + ": " + cert.failure);

    const double card = static_cast<double>(rec.cardinality);
    rec.direct = scaled_poly_norm(inst, rec.scale) / upper;
    rec.analytic = std::pow(rec.scale, k) * card / upper;
    const double est = rec.norm_l2.lower;
    rec.estimate = est > 0.0 ? std::pow(1.0 + est, -0.5 * k) * card / est : 0.0;
    return rec;
}

BoundRecord lower_bound_C(int k, const Exponent& q, int n, std::uint64_t seed, const PipelineOptions& options)
{
    return lower_bound_C(generate(k, n, seed), q, seed, options);
}

BoundRecord lower_bound_C(const steiner::PartialSteinerSystem& system, const Exponent& q, std::uint64_t seed,
                          const PipelineOptions& options)
{
    const Instance inst = make_instance(system, seed);
    const int k = system.k;
    const int n = system.n;
    BoundRecord rec;
    rec.which = Which::C;
    rec.k = k;
    rec.q = q;
    rec.n = n;
    rec.seed = seed;
    rec.cardinality = system.blocks.size();
    rec.norm_l2 = bracket(inst.p, Exponent::finite(2), options.ascent, seed, "bounds.norm.l2");
    rec.norm_inf = bracket(inst.p, Exponent::infinity(), options.ascent, seed, "bounds.norm.linf");
    if (q == Exponent::finite(2)) {
        rec.norm_q = rec.norm_l2;
    } else if (q.is_infinite()) {
        rec.norm_q = rec.norm_inf;
    } else {
        rec.norm_q = bracket(inst.p, q, options.ascent, seed, "bounds.norm.lq");
    }

    auto& cert = rec.certification;
    fill_operator_checks(inst, cert);
    const double inv = q.inverse().to_double();
    cert.recipe_scale = std::pow(static_cast<double>(n), -inv);
    cert.recipe_scale_certified = cert.max_op_norm_upper <= 1.0 + 1e-10;
    rec.scale = cert.recipe_scale / std::max(1.0, cert.max_op_norm_upper);

    // sum_j ||s T_j||^q (max_j at q = inf), from the Schur bounds.
    double budget = 0.0;
    for (const auto& t : inst.tuple.ops) {
        const double v = rec.scale * dixon::schur_bound(t);
        budget = q.is_infinite() ? std::max(budget, v) : budget + std::pow(v, q.to_double());
    }
    cert.scaled_row_condition = budget;

    const double upper = rec.norm_q.upper;
    if (cert.max_commutator > 1e-12) {
        cert.failure = "commutator norm " + std::to_string(cert.max_commutator) + " exceeds 1e-12";
    } else if (budget > 1.0 + 1e-9) {
        cert.failure = "scaled operator norms exceed the l_q budget";
    } else if (!(upper > 0.0) || !std::isfinite(upper)) {
        cert.failure = "no finite positive norm certificate";
    }
    cert.passed = cert.failure.empty();
    if (!cert.passed) throw CertificationError("C pipeline n=" + std::to_string(n) + ": " + cert.failure);

    const double card = static_cast<double>(rec.cardinality);
    rec.direct = scaled_poly_norm(inst, rec.scale) / upper;
    rec.analytic = std::pow(rec.scale, k) * card / upper;
    const double est = rec.norm_q.lower;
    rec.estimate = est > 0.0 ? std::pow(cert.recipe_scale, k) * card / est : 0.0;
    return rec;
}

ScalingFit fit_power_law(const std::vector<std::pair<double, double>>& points)
{
    if (points.size() < 2) throw std::invalid_argument("power-law fit needs at least 2 points");
    ScalingFit fit;
    fit.points = points;
    double sx = 0.0;
    double sy = 0.0;
    for (const auto& [n, v] : points) {
        if (!(n > 0.0) || !(v > 0.0)) throw std::invalid_argument("power-law fit needs positive n and values");
        sx += std::log(n);
        sy += std::log(v);
    }
    const double m = static_cast<double>(points.size());
    const double mx = sx / m;
    const double my = sy / m;
    double sxx = 0.0;
    double sxy = 0.0;
    for (const auto& [n, v] : points) {
        const double dx = std::log(n) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(v) - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("power-law fit needs two distinct n");
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double rss = 0.0;
    for (const auto& [n, v] : points) {
        const double r = std::log(v) - (fit.intercept + fit.slope * std::log(n));
        rss += r * r;
    }
    fit.residual = std::sqrt(rss / m);
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (points[i].second < points[i - 1].second) ++fit.inversions;
    }
    return fit;
}

double median(std::vector<double> values)
{
    if (values.empty()) throw std::invalid_argument("median of an empty set");
    std::sort(values.begin(), values.end());
    const std::size_t h = values.size() / 2;
    return values.size() % 2 ? values[h] : 0.5 * (values[h - 1] + values[h]);
}

std::uint64_t cell_seed(std::uint64_t root_seed, int n, int s)
{
    return derive_seed(derive_seed(root_seed, "bounds.cell", static_cast<std::uint64_t>(n)), "bounds.cell.seed",
                       static_cast<std::uint64_t>(s));
}

SweepResult scaling_sweep(int k, const Exponent& q, const std::vector<int>& n_list, int seeds_per_n, Which which,
                          std::uint64_t root_seed, const PipelineOptions& options, int threads)
{
    if (seeds_per_n < 1) throw std::invalid_argument("sweep needs at least one seed per n");
    if (!std::is_sorted(n_list.begin(), n_list.end())) throw std::invalid_argument("sweep n list must be ascending");
    for (int n : n_list) {
        if (n < k) throw std::invalid_argument("sweep n=" + std::to_string(n) + " is below k");
    }
    if (which == Which::D && !q.equals(2)) throw std::invalid_argument("the D pipeline is implemented for q = 2");

    const std::size_t cells = n_list.size() * static_cast<std::size_t>(seeds_per_n);
    std::vector<std::optional<BoundRecord>> results(cells);
    std::vector<std::string> errors(cells);
    PipelineOptions cell_options = options;
    cell_options.ascent.threads = 1;
    parallel_for(cells, threads, [&](std::size_t i) {
        const int n = n_list[i / static_cast<std::size_t>(seeds_per_n)];
        const int s = static_cast<int>(i % static_cast<std::size_t>(seeds_per_n));
        const std::uint64_t seed = cell_seed(root_seed, n, s);
        try {
            results[i] = which == Which::D ? lower_bound_D(k, n, seed, cell_options)
                                           : lower_bound_C(k, q, n, seed, cell_options);
        } catch (const std::exception& e) {
            errors[i] = "n=" + std::to_string(n) + " seed index " + std::to_string(s) + " excluded: " + e.what();
        }
    });

    SweepResult out;
    std::map<int, std::vector<double>> bound_by_n;
    std::map<int, std::vector<double>> estimate_by_n;
    for (std::size_t i = 0; i < cells; ++i) {
        if (!results[i]) {
            out.warnings.push_back(errors[i]);
            continue;
        }
        bound_by_n[results[i]->n].push_back(results[i]->analytic);
        estimate_by_n[results[i]->n].push_back(results[i]->estimate);
        out.records.push_back(std::move(*results[i]));
    }
    std::vector<std::pair<double, double>> medians;
    std::vector<std::pair<double, double>> estimates;
    for (const auto& [n, v] : bound_by_n) medians.emplace_back(n, median(v));
    for (const auto& [n, v] : estimate_by_n) estimates.emplace_back(n, median(v));
    if (medians.size() < 2) throw std::runtime_error("sweep left fewer than 2 n values with certified runs");
    out.fit = fit_power_law(medians);
    out.estimate_fit = fit_power_law(estimates);
    return out;
}

AkqReference a_kq_reference(int k, const Exponent& q, double M, double K, double D)
{
    if (k < 3) throw std::invalid_argument("A_{k,q} reference needs k >= 3");
    if (q.is_infinite() || q.rational() <= Rational(2)) throw std::invalid_argument("A_{k,q} reference needs 2 < q < inf");
    if (!(M > 0.0 && K > 0.0 && D > 0.0)) throw std::invalid_argument("A_{k,q} constants must be positive");
    const double qd = q.to_double();
    const double kd = k;
    const double kfact = poly::factorial(k);
    const double common = std::pow(kd, kd / 2.0) * std::sqrt(std::log(kd)) / (std::ldexp(1.0, k) * kfact * std::sqrt(kfact));
    const double lead = std::max({M, K, D}) * std::pow(kd, 2.0 / qd);
    const double power = (qd - 2.0) / qd;
    AkqReference out;
    out.lambda_form = lead * std::pow(common * std::pow(kd + 1.0, (kd + 1.0) / 2.0), power);
    out.printed_form = lead * std::pow(common * std::pow(kd + 1.0, (kd + 1.0) / kd), power);
    return out;
}

}  // namespace vnlab::bounds
