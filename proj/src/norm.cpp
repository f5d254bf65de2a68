#include "vnlab/norm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

#include <Eigen/Dense>

#include "vnlab/parallel.hpp"
#include "vnlab/rng.hpp"

namespace vnlab::norm {

namespace {

constexpr double kCertificateSlack = 1e-12;

// Contiguous copy of the terms for the inner loops of the ascent.
struct FlatPolynomial {
    int n = 0;
    int k = 0;
    std::vector<int> indices;  // 0-based, k per term
    std::vector<cplx> coeffs;

    explicit FlatPolynomial(const poly::HomogeneousPolynomial& p) : n(p.n()), k(p.k())
    {
        for (const auto& [m, c] : p.terms()) {
            for (int j : m.indices) indices.push_back(j - 1);
            coeffs.push_back(c);
        }
    }

    cplx value(std::span<const cplx> z) const
    {
        cplx sum{};
        for (std::size_t t = 0; t < coeffs.size(); ++t) {
            cplx prod = coeffs[t];
            const int* ix = &indices[t * static_cast<std::size_t>(k)];
            for (int u = 0; u < k; ++u) prod *= z[static_cast<std::size_t>(ix[u])];
            sum += prod;
        }
        return sum;
    }

    // Returns p(z) and writes the holomorphic gradient into grad.
    cplx value_and_gradient(std::span<const cplx> z, std::span<cplx> grad) const
    {
        std::fill(grad.begin(), grad.end(), cplx{});
        cplx sum{};
        cplx prefix[16];
        for (std::size_t t = 0; t < coeffs.size(); ++t) {
            const int* ix = &indices[t * static_cast<std::size_t>(k)];
            prefix[0] = coeffs[t];
            for (int u = 0; u < k; ++u) prefix[u + 1] = prefix[u] * z[static_cast<std::size_t>(ix[u])];
            sum += prefix[k];
            cplx suffix{1.0, 0.0};
            for (int u = k - 1; u >= 0; --u) {
                grad[static_cast<std::size_t>(ix[u])] += prefix[u] * suffix;
                suffix *= z[static_cast<std::size_t>(ix[u])];
            }
        }
        return sum;
    }
};

double softplus(double u) { return u > 30.0 ? u : std::log1p(std::exp(u)); }
double sigmoid(double u) { return 1.0 / (1.0 + std::exp(-u)); }

// Smooth unconstrained coordinates for points of the l_q sphere (or the
// polytorus at q = inf): z_j = m_j e^{i theta_j}.
class SphereChart {
public:
    SphereChart(int n, const Exponent& q, bool relax) : n_(n), q_(q), relax_(relax)
    {
        if (q.is_finite()) qd_ = q.to_double();
    }

    [[nodiscard]] std::size_t dimension() const
    {
        return static_cast<std::size_t>(has_magnitudes() ? 2 * n_ : n_);
    }

    [[nodiscard]] bool has_magnitudes() const { return q_.is_finite() || relax_; }

    void random_start(Rng& rng, std::span<double> x) const
    {
        const std::size_t nn = static_cast<std::size_t>(n_);
        if (has_magnitudes()) {
            for (std::size_t j = 0; j < nn; ++j) x[j] = rng.normal();
            for (std::size_t j = 0; j < nn; ++j) x[nn + j] = 2.0 * std::numbers::pi * rng.uniform();
        } else {
            for (std::size_t j = 0; j < nn; ++j) x[j] = 2.0 * std::numbers::pi * rng.uniform();
        }
    }

    // z = chart(x); also caches magnitudes for the pullback.
    void point(std::span<const double> x, std::span<cplx> z)
    {
        const std::size_t nn = static_cast<std::size_t>(n_);
        if (!has_magnitudes()) {
            for (std::size_t j = 0; j < nn; ++j) z[j] = std::polar(1.0, x[j]);
            return;
        }
        mag_.resize(nn);
        if (q_.is_infinite()) {
            for (std::size_t j = 0; j < nn; ++j) mag_[j] = sigmoid(x[j]);
        } else {
            soft_.resize(nn);
            double top = 0.0;
            for (std::size_t j = 0; j < nn; ++j) {
                soft_[j] = softplus(x[j]);
                top = std::max(top, soft_[j]);
            }
            double acc = 0.0;
            for (std::size_t j = 0; j < nn; ++j) acc += std::pow(soft_[j] / top, qd_);
            norm_ = top * std::pow(acc, 1.0 / qd_);
            for (std::size_t j = 0; j < nn; ++j) mag_[j] = soft_[j] / norm_;
        }
        for (std::size_t j = 0; j < nn; ++j) z[j] = std::polar(mag_[j], x[nn + j]);
    }

    // Gradient of |p|^2 in chart coordinates from p(z) and dp/dz.
    void pullback(std::span<const double> x, std::span<const cplx> z, cplx value, std::span<const cplx> grad_z,
                  std::span<double> grad_x) const
    {
        const std::size_t nn = static_cast<std::size_t>(n_);
        const cplx pbar = std::conj(value);
        const std::size_t phase_offset = has_magnitudes() ? nn : 0;
        for (std::size_t j = 0; j < nn; ++j) grad_x[phase_offset + j] = -2.0 * std::imag(pbar * grad_z[j] * z[j]);
        if (!has_magnitudes()) return;

        std::vector<double> gm(nn);
        for (std::size_t j = 0; j < nn; ++j) gm[j] = 2.0 * std::real(pbar * grad_z[j] * std::polar(1.0, x[nn + j]));
        if (q_.is_infinite()) {
            for (std::size_t j = 0; j < nn; ++j) {
                const double s = mag_[j];
                grad_x[j] = gm[j] * s * (1.0 - s);
            }
            return;
        }
        double dot = 0.0;
        for (std::size_t j = 0; j < nn; ++j) dot += gm[j] * mag_[j];
        for (std::size_t j = 0; j < nn; ++j) {
            const double gs = (gm[j] - std::pow(mag_[j], qd_ - 1.0) * dot) / norm_;
            grad_x[j] = gs * sigmoid(x[j]);
        }
    }

private:
    int n_;
    Exponent q_;
    bool relax_;
    double qd_ = 2.0;
    double norm_ = 1.0;
    std::vector<double> mag_;
    std::vector<double> soft_;
};

struct AscentResult {
    double value = 0.0;  // |p(z)|
    CVector z;
};

// Gradient ascent on |p(z)|^2 with Barzilai-Borwein trial steps and Armijo
// backtracking.
AscentResult ascend(const FlatPolynomial& fp, const Exponent& q, const AscentOptions& opt, std::uint64_t stream)
{
    SphereChart chart(fp.n, q, opt.relax_magnitudes);
    const std::size_t dim = chart.dimension();
    const std::size_t nn = static_cast<std::size_t>(fp.n);
    Rng rng(stream);

    std::vector<double> x(dim), x_new(dim), g(dim), g_new(dim);
    CVector z(nn), grad_z(nn);
    chart.random_start(rng, x);

    auto evaluate = [&](std::span<const double> at, std::span<double> grad_out) {
        chart.point(at, z);
        const cplx v = fp.value_and_gradient(z, grad_z);
        chart.pullback(at, z, v, grad_z, grad_out);
        return std::norm(v);
    };

    double f = evaluate(x, g);
    double step = 1.0;
    int stalled = 0;
    for (int iter = 0; iter < opt.max_iter; ++iter) {
        double gg = 0.0;
        for (double gi : g) gg += gi * gi;
        if (!(gg > 0.0)) break;
        if (iter == 0) step = 1.0 / std::sqrt(gg);

        double f_new = 0.0;
        bool accepted = false;
        while (step > 1e-20) {
            for (std::size_t i = 0; i < dim; ++i) x_new[i] = x[i] + step * g[i];
            f_new = evaluate(x_new, g_new);
            if (std::isfinite(f_new) && f_new >= f + 1e-4 * step * gg) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;

        double ss = 0.0, sy = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            const double s = x_new[i] - x[i];
            const double y = g_new[i] - g[i];
            ss += s * s;
            sy += s * y;
        }
        const double change = std::abs(f_new - f) / std::max(f_new, std::numeric_limits<double>::min());
        x.swap(x_new);
        g.swap(g_new);
        f = f_new;
        step = sy < 0.0 ? ss / -sy : 2.0 * step;
        step = std::clamp(step, 1e-12, 1e12);

        stalled = change < opt.tol ? stalled + 1 : 0;
        if (stalled >= 3) break;
    }

    AscentResult out;
    out.z.resize(nn);
    chart.point(x, out.z);
    const double len = lq_norm(out.z, q);
    if (len > 1.0) {
        for (auto& zj : out.z) zj /= len;
    }
    out.value = std::abs(fp.value(out.z));
    return out;
}

void require_finite(const poly::HomogeneousPolynomial& p)
{
    for (const auto& [m, c] : p.terms()) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
            throw std::invalid_argument("polynomial has a non-finite coefficient");
        }
    }
}

double max_eigenvalue(const Eigen::MatrixXcd& hermitian)
{
    if (hermitian.rows() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hermitian, Eigen::EigenvaluesOnly);
    return std::max(0.0, solver.eigenvalues().maxCoeff());
}

// Distinct orderings of a sorted tuple.
std::vector<std::vector<int>> orderings(std::vector<int> sorted)
{
    std::vector<std::vector<int>> out;
    do {
        out.push_back(sorted);
    } while (std::next_permutation(sorted.begin(), sorted.end()));
    return out;
}

std::uint64_t encode(std::span<const int> tuple, int base)
{
    std::uint64_t key = 0;
    for (int j : tuple) key = key * static_cast<std::uint64_t>(base) + static_cast<std::uint64_t>(j);
    return key;
}

// Spectral norm of the unfolding of the symmetric coefficient tensor that
// puts the first `split` indices on the rows.
double unfolding_norm(const poly::HomogeneousPolynomial& p, int split)
{
    const int k = p.k();
    const int n = p.n();
    const double kf = poly::factorial(k);
    // group entries by the column tuple; Gram = sum over columns of r r^H
    std::unordered_map<std::uint64_t, std::vector<std::pair<std::uint64_t, cplx>>> by_column;
    std::unordered_map<std::uint64_t, Eigen::Index> row_index;
    for (const auto& [m, c] : p.terms()) {
        const cplx entry = c * poly::multiplicity_factorial(m) / kf;
        for (const auto& ord : orderings(m.indices)) {
            std::span<const int> all(ord);
            const std::uint64_t row = encode(all.first(static_cast<std::size_t>(split)), n + 1);
            const std::uint64_t col = encode(all.subspan(static_cast<std::size_t>(split)), n + 1);
            row_index.try_emplace(row, static_cast<Eigen::Index>(row_index.size()));
            by_column[col].emplace_back(row, entry);
        }
    }
    const auto rows = static_cast<Eigen::Index>(row_index.size());
    Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(rows, rows);
    for (const auto& [col, entries] : by_column) {
        for (const auto& [r1, v1] : entries) {
            const Eigen::Index i1 = row_index.at(r1);
            for (const auto& [r2, v2] : entries) gram(i1, row_index.at(r2)) += v1 * std::conj(v2);
        }
    }
    return std::sqrt(max_eigenvalue(gram));
}

}  // namespace

double lq_norm(std::span<const cplx> z, const Exponent& q)
{
    if (q.is_infinite()) {
        double m = 0.0;
        for (const auto& v : z) m = std::max(m, std::abs(v));
        return m;
    }
    const double qd = q.to_double();
    double top = 0.0;
    for (const auto& v : z) top = std::max(top, std::abs(v));
    if (top == 0.0) return 0.0;
    double acc = 0.0;
    for (const auto& v : z) acc += std::pow(std::abs(v) / top, qd);
    return top * std::pow(acc, 1.0 / qd);
}

CVector holder_maximizer(std::span<const cplx> v, const Exponent& q)
{
    CVector z(v.size());
    auto phase = [](cplx c) { return std::abs(c) > 0.0 ? std::conj(c) / std::abs(c) : cplx{1.0, 0.0}; };
    if (q.is_infinite()) {
        for (std::size_t j = 0; j < v.size(); ++j) z[j] = phase(v[j]);
        return z;
    }
    if (q.equals(1)) {
        std::size_t best = 0;
        for (std::size_t j = 1; j < v.size(); ++j) {
            if (std::abs(v[j]) > std::abs(v[best])) best = j;
        }
        if (!v.empty()) z[best] = phase(v[best]);
        return z;
    }
    const double power = 1.0 / (q.to_double() - 1.0);
    double top = 0.0;
    for (const auto& c : v) top = std::max(top, std::abs(c));
    if (top == 0.0) {
        if (!z.empty()) z[0] = 1.0;
        return z;
    }
    for (std::size_t j = 0; j < v.size(); ++j) z[j] = std::pow(std::abs(v[j]) / top, power) * phase(v[j]);
    const double len = lq_norm(z, q);
    for (auto& c : z) c /= len;
    return z;
}

double exact_norm_quadratic_l2(const poly::HomogeneousPolynomial& p)
{
    if (p.k() != 2) throw std::invalid_argument("exact_norm_quadratic_l2 needs k = 2");
    const Eigen::Index n = p.n();
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
    for (const auto& [m, c] : p.terms()) {
        const Eigen::Index i = m.indices[0] - 1;
        const Eigen::Index j = m.indices[1] - 1;
        if (i == j) {
            a(i, i) += c;
        } else {
            a(i, j) += c / 2.0;
            a(j, i) += c / 2.0;
        }
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
    return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

double flattening_bound(const poly::HomogeneousPolynomial& p)
{
    if (p.empty()) return 0.0;
    double best = unfolding_norm(p, 1);
    const int k = p.k();
    if (k >= 4) {
        const int split = k / 2;
        if (std::pow(static_cast<double>(p.n()), split) <= 2500.0) best = std::min(best, unfolding_norm(p, split));
    }
    return best;
}

double lambda_constant(int k, const Exponent& q)
{
    if (k < 2) throw std::invalid_argument("lambda_constant needs k >= 2");
    const double kd = k;
    if (q.equals(2)) return 1.0;
    if (q.is_infinite()) {
        return std::pow(kd, kd / 2.0) * std::pow(kd + 1.0, (kd + 1.0) / 2.0) / (std::ldexp(1.0, k) * poly::factorial(k));
    }
    return std::pow(kd, kd) / poly::factorial(k);
}

double interpolation_upper(const Exponent& q, double norm2_upper, double norminf_upper, int k)
{
    if (q.is_infinite() || q.rational() <= Rational(2)) {
        throw std::invalid_argument("interpolation_upper needs 2 < q < inf, got q=" + q.to_string());
    }
    if (norm2_upper < 0.0 || norminf_upper < 0.0) throw std::invalid_argument("interpolation_upper: negative bound");
    const double qd = q.to_double();
    return std::pow(lambda_constant(k, Exponent::finite(2)) * norm2_upper, 2.0 / qd) *
           std::pow(lambda_constant(k, Exponent::infinity()) * norminf_upper, (qd - 2.0) / qd);
}

double interpolation_upper_low(const Exponent& q, double norm1_upper, double norm2_upper, int k)
{
    if (q.is_infinite() || q.rational() <= Rational(1) || q.rational() >= Rational(2)) {
        throw std::invalid_argument("interpolation_upper_low needs 1 < q < 2, got q=" + q.to_string());
    }
    if (norm1_upper < 0.0 || norm2_upper < 0.0) throw std::invalid_argument("interpolation_upper_low: negative bound");
    const double qd = q.to_double();
    return std::pow(lambda_constant(k, Exponent::finite(1)) * norm1_upper, (2.0 - qd) / qd) *
           std::pow(lambda_constant(k, Exponent::finite(2)) * norm2_upper, (2.0 * qd - 2.0) / qd);
}

double ksz_reference(int n, int card, double max_a, int k, double D)
{
    if (k < 2) throw std::invalid_argument("ksz_reference needs k >= 2");
    if (n <= 0 || card < 0 || max_a < 0.0 || D < 0.0) throw std::invalid_argument("ksz_reference: negative argument");
    return D * std::sqrt(static_cast<double>(n) * card * max_a * max_a * std::log(static_cast<double>(k)));
}

UpperBound certified_upper(const poly::HomogeneousPolynomial& p, const Exponent& q)
{
    require_finite(p);
    if (p.empty()) return {0.0, "zero-polynomial"};
    // witnesses on the polytorus can overshoot an exact certificate by rounding
    UpperBound best{poly::coefficient_sum(p) * (1.0 + kCertificateSlack), "coefficient-sum"};
    auto consider = [&](double value, const char* method) {
        value *= 1.0 + kCertificateSlack;
        if (std::isfinite(value) && value < best.value) best = {value, method};
    };

    const int k = p.k();
    const double n = p.n();
    const double sum = poly::coefficient_sum(p);
    // multilinear l_2 norm dominates the polynomial l_2 norm
    const double flat = flattening_bound(p) * (1.0 + kCertificateSlack);
    double norm2 = flat;
    if (k == 2) norm2 = std::min(norm2, exact_norm_quadratic_l2(p) * (1.0 + kCertificateSlack));

    if (q.equals(2)) {
        consider(flat, "flattening");
        if (k == 2) consider(norm2, "quadratic-exact");
        return best;
    }
    if (q.is_infinite()) {
        // l_inf ball sits inside sqrt(n) times the l_2 ball
        consider(std::pow(n, k / 2.0) * norm2, "l2-embedding");
        return best;
    }
    const double qd = q.to_double();
    if (q.rational() < Rational(2)) {
        consider(norm2, "l2-embedding");
        if (q.equals(1)) {
            consider(poly::l1_ball_upper_bound(p), "l1-coefficient");
        } else if (k >= 2) {
            consider(interpolation_upper_low(q, poly::l1_ball_upper_bound(p), norm2, k), "interpolation-l1-l2");
        }
        return best;
    }
    consider(std::pow(n, k * (0.5 - 1.0 / qd)) * norm2, "l2-embedding");
    if (k >= 2) {
        consider(interpolation_upper(q, norm2, sum, k), "interpolation-l2-linf");
        // the same chain with the multilinear norms bounded directly
        consider(std::pow(flat, 2.0 / qd) * std::pow(sum, (qd - 2.0) / qd), "multilinear-interpolation");
    }
    return best;
}

NormEstimate estimate_norm(const poly::HomogeneousPolynomial& p, const Exponent& q, const AscentOptions& options,
                           const std::optional<UpperBound>& caller_bound)
{
    require_finite(p);
    if (options.restarts < 1) throw std::invalid_argument("estimate_norm needs restarts >= 1");

    NormEstimate est;
    est.q = q;
    const UpperBound certificate = certified_upper(p, q);
    est.upper = certificate.value;
    est.upper_method = certificate.method;
    if (caller_bound && caller_bound->value < est.upper) {
        est.upper = caller_bound->value;
        est.upper_method = caller_bound->method;
    }

    const FlatPolynomial fp(p);
    std::vector<AscentResult> results(static_cast<std::size_t>(options.restarts));
    parallel_for(results.size(), options.threads, [&](std::size_t r) {
        results[r] = ascend(fp, q, options, derive_seed(options.seed, "norm.restart", r));
    });
    const auto best = std::max_element(results.begin(), results.end(),
                                       [](const AscentResult& a, const AscentResult& b) { return a.value < b.value; });
    est.witness = best->z;
    est.lower = std::abs(poly::evaluate(p, est.witness));
    est.lower_method = q.is_infinite() && !options.relax_magnitudes ? "polytorus-ascent" : "sphere-ascent";
    if (est.lower > est.upper) {
        throw std::logic_error("estimate_norm: witness value exceeds certified upper bound (" + std::to_string(est.lower) +
                               " > " + std::to_string(est.upper) + ", method " + est.upper_method + ")");
    }
    return est;
}

MultilinearEstimate estimate_multilinear_norm(const poly::HomogeneousPolynomial& p, const Exponent& q,
                                              const AscentOptions& options)
{
    require_finite(p);
    const int k = p.k();
    const std::size_t n = static_cast<std::size_t>(p.n());
    MultilinearEstimate best;
    const int sweeps = std::min(options.max_iter, 500);

    for (int r = 0; r < options.restarts; ++r) {
        Rng rng(derive_seed(options.seed, "norm.multilinear", static_cast<std::uint64_t>(r)));
        std::vector<CVector> args(static_cast<std::size_t>(k), CVector(n));
        for (auto& v : args) {
            CVector g(n);
            for (auto& c : g) c = rng.complex_normal();
            v = holder_maximizer(g, q);
        }
        double value = std::abs(poly::polarize_evaluate(p, args));
        CVector coeffs(n);
        for (int sweep = 0; sweep < sweeps; ++sweep) {
            const double before = value;
            for (std::size_t slot = 0; slot < args.size(); ++slot) {
                const CVector saved = args[slot];
                for (std::size_t j = 0; j < n; ++j) {
                    std::fill(args[slot].begin(), args[slot].end(), cplx{});
                    args[slot][j] = 1.0;
                    coeffs[j] = poly::polarize_evaluate(p, args);
                }
                bool zero = std::all_of(coeffs.begin(), coeffs.end(), [](cplx c) { return c == cplx{}; });
                args[slot] = zero ? saved : holder_maximizer(coeffs, q);
            }
            value = std::abs(poly::polarize_evaluate(p, args));
            if (value - before <= options.tol * std::max(value, 1e-300)) break;
        }
        if (value > best.lower) {
            best.lower = value;
            best.witness = args;
        }
    }
    return best;
}

}  // namespace vnlab::norm
