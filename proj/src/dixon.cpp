#include "vnlab/dixon.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "vnlab/rng.hpp"

namespace vnlab::dixon {

namespace {

using Dense = Eigen::MatrixXcd;

// Nondecreasing m-tuples over {1..n} in lexicographic order.
void enumerate_tuples(int n, int m, std::vector<int>& prefix, std::vector<std::vector<int>>& out)
{
    if (static_cast<int>(prefix.size()) == m) {
        out.push_back(prefix);
        return;
    }
    const int start = prefix.empty() ? 1 : prefix.back();
    for (int j = start; j <= n; ++j) {
        prefix.push_back(j);
        enumerate_tuples(n, m, prefix, out);
        prefix.pop_back();
    }
}

double largest_eigenvalue(const Dense& hermitian)
{
    if (hermitian.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Dense> solver(hermitian, Eigen::EigenvaluesOnly);
    return std::max(0.0, solver.eigenvalues().maxCoeff());
}

// sup |sum_j alpha_j y^H B_j x| over unit alpha, x, y, from one start. Each
// sweep takes a few power steps for (x, y) and then the optimal alpha, so the
// attained value never decreases.
double maximize_trilinear(const std::vector<Dense>& blocks, Eigen::VectorXcd alpha, Eigen::VectorXcd x)
{
    const auto n = static_cast<Eigen::Index>(blocks.size());
    double best = 0.0;
    int stalls = 0;
    for (int iter = 0; iter < 3000 && stalls < 3; ++iter) {
        Dense m = Dense::Zero(blocks[0].rows(), blocks[0].cols());
        for (Eigen::Index j = 0; j < n; ++j) m += alpha(j) * blocks[static_cast<std::size_t>(j)];
        Eigen::VectorXcd y = m * x;
        for (int step = 0; step < 4 && y.norm() > 0.0; ++step) {
            x = m.adjoint() * y;
            x.normalize();
            y = m * x;
        }
        if (y.norm() == 0.0) return best;
        y.normalize();
        Eigen::VectorXcd beta(n);
        for (Eigen::Index j = 0; j < n; ++j) beta(j) = y.dot(blocks[static_cast<std::size_t>(j)] * x);
        const double value = beta.norm();
        if (value == 0.0) return best;
        alpha = beta.conjugate() / value;
        stalls = value - best <= 1e-12 * value ? stalls + 1 : 0;
        best = std::max(best, value);
    }
    return best;
}

}  // namespace

std::string Label::to_string() const
{
    switch (kind) {
    case Kind::E: return "e";
    case Kind::F: return "f" + std::to_string(index);
    case Kind::G: return "g";
    case Kind::Tuple: {
        std::string s = "e(";
        for (std::size_t i = 0; i < tuple.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(tuple[i]);
        }
        return s + ")";
    }
    }
    return {};
}

DixonBasis::DixonBasis(int n, int k) : n_(n), k_(k)
{
    if (k < 3) throw std::invalid_argument("Dixon basis needs k >= 3, got " + std::to_string(k));
    if (n < k) throw std::invalid_argument("Dixon basis needs n >= k, got n=" + std::to_string(n));
    layer_begin_.push_back(0);
    labels_.push_back(Label{Label::Kind::E, {}, 0});
    for (int m = 1; m <= k - 2; ++m) {
        layer_begin_.push_back(labels_.size());
        std::vector<std::vector<int>> tuples;
        std::vector<int> prefix;
        enumerate_tuples(n, m, prefix, tuples);
        for (auto& t : tuples) {
            tuple_index_.emplace(t, labels_.size());
            labels_.push_back(Label{Label::Kind::Tuple, std::move(t), 0});
        }
    }
    layer_begin_.push_back(labels_.size());
    for (int i = 1; i <= n; ++i) labels_.push_back(Label{Label::Kind::F, {}, i});
    layer_begin_.push_back(labels_.size());
    labels_.push_back(Label{Label::Kind::G, {}, 0});
    layer_begin_.push_back(labels_.size());
}

std::size_t DixonBasis::tuple(std::vector<int> points) const
{
    std::sort(points.begin(), points.end());
    const auto it = tuple_index_.find(points);
    if (it == tuple_index_.end()) throw std::out_of_range("no basis vector for this tuple");
    return it->second;
}

std::size_t DixonBasis::f(int i) const
{
    if (i < 1 || i > n_) throw std::out_of_range("f index outside [1, n]");
    return layer_begin_[static_cast<std::size_t>(k_ - 1)] + static_cast<std::size_t>(i - 1);
}

std::pair<std::size_t, std::size_t> DixonBasis::layer_range(int layer) const
{
    if (layer < 0 || layer > k_) throw std::out_of_range("layer outside [0, k]");
    return {layer_begin_[static_cast<std::size_t>(layer)], layer_begin_[static_cast<std::size_t>(layer) + 1]};
}

std::size_t DixonBasis::dimension_formula(int n, int k)
{
    std::size_t d = 2 + static_cast<std::size_t>(n);
    for (int m = 1; m <= k - 2; ++m) d += steiner::binomial(n + m - 1, m);
    return d;
}

DixonBasis build_basis(int n, int k) { return DixonBasis(n, k); }

DixonTuple build_tuple(const steiner::PartialSteinerSystem& system, const poly::HomogeneousPolynomial& p)
{
    const int n = system.n;
    const int k = system.k;
    if (system.t != k - 1) throw std::invalid_argument("Dixon tuple needs a system with t = k - 1");
    if (p.n() != n || p.k() != k) throw std::invalid_argument("polynomial and system disagree on (n, k)");
    const auto check = steiner::validate(system);
    if (!check.valid) throw std::invalid_argument("Dixon tuple needs a valid partial Steiner system");

    std::map<steiner::Block, cplx> gamma;
    for (const auto& block : system.blocks) {
        const cplx c = p.coefficient(poly::Monomial{block.points});
        if (c == cplx{}) throw std::invalid_argument("no sign for a block of the system");
        if (std::abs(std::abs(c) - 1.0) > 1e-12) throw std::invalid_argument("block coefficient is not unimodular");
        gamma.emplace(block, c);
    }
    for (const auto& [m, c] : p.terms()) {
        if (!gamma.contains(steiner::Block{m.indices})) {
            throw std::invalid_argument("polynomial has a monomial outside the system's blocks");
        }
    }

    DixonBasis basis(n, k);
    const auto dim = static_cast<Eigen::Index>(basis.dimension());
    std::vector<SparseMatrix> ops;
    ops.reserve(static_cast<std::size_t>(n));
    const auto [top_begin, top_end] = basis.layer_range(k - 2);

    for (int l = 1; l <= n; ++l) {
        std::vector<Eigen::Triplet<cplx>> entries;
        const auto add = [&](std::size_t row, std::size_t col, cplx v) {
            entries.emplace_back(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col), v);
        };
        add(basis.tuple({l}), basis.e(), 1.0);
        for (int m = 1; m < k - 2; ++m) {
            const auto [begin, end] = basis.layer_range(m);
            for (std::size_t col = begin; col < end; ++col) {
                auto extended = basis.labels()[col].tuple;
                extended.push_back(l);
                add(basis.tuple(extended), col, 1.0);
            }
        }
        for (std::size_t col = top_begin; col < top_end; ++col) {
            for (int i = 1; i <= n; ++i) {
                auto set = basis.labels()[col].tuple;
                set.push_back(l);
                set.push_back(i);
                std::sort(set.begin(), set.end());
                const auto it = gamma.find(steiner::Block{set});
                if (it != gamma.end()) add(basis.f(i), col, it->second);
            }
        }
        add(basis.g(), basis.f(l), 1.0);
        SparseMatrix t(dim, dim);
        t.setFromTriplets(entries.begin(), entries.end());
        t.makeCompressed();
        ops.push_back(std::move(t));
    }
    return DixonTuple{std::move(basis), std::move(ops), std::move(gamma), p};
}

OperatorNorm operator_norm(const SparseMatrix& a, int max_iter, double rel_tol)
{
    if (a.nonZeros() == 0 || a.cols() == 0 || a.rows() == 0) return {};
    Rng rng(derive_seed(0, "dixon.power"));
    Vector x(a.cols());
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = rng.complex_normal();
    x.normalize();
    double prev = 0.0;
    OperatorNorm out;
    out.converged = false;
    for (int it = 1; it <= max_iter; ++it) {
        const Vector y = a * x;
        const double sigma = y.norm();
        out.value = sigma;
        out.iterations = it;
        const Vector w = a.adjoint() * y;
        const double wn = w.norm();
        if (wn == 0.0 || std::abs(sigma - prev) <= rel_tol * sigma) {
            out.converged = true;
            break;
        }
        x = w / wn;
        prev = sigma;
    }
    return out;
}

double dense_operator_norm(const SparseMatrix& a)
{
    if (a.rows() == 0 || a.cols() == 0) return 0.0;
    const Dense d(a);
    Eigen::JacobiSVD<Dense> svd(d);
    return svd.singularValues()(0);
}

double schur_bound(const SparseMatrix& a)
{
    Eigen::VectorXd rows = Eigen::VectorXd::Zero(a.rows());
    Eigen::VectorXd cols = Eigen::VectorXd::Zero(a.cols());
    for (Eigen::Index c = 0; c < a.outerSize(); ++c) {
        for (SparseMatrix::InnerIterator it(a, c); it; ++it) {
            rows(it.row()) += std::abs(it.value());
            cols(it.col()) += std::abs(it.value());
        }
    }
    if (a.nonZeros() == 0) return 0.0;
    return std::sqrt(rows.maxCoeff() * cols.maxCoeff());
}

double check_commuting(const DixonTuple& tuple)
{
    double worst = 0.0;
    const auto& ops = tuple.ops;
    for (std::size_t l = 0; l < ops.size(); ++l) {
        for (std::size_t m = l + 1; m < ops.size(); ++m) {
            SparseMatrix c = SparseMatrix(ops[l] * ops[m]) - SparseMatrix(ops[m] * ops[l]);
            c.prune([](Eigen::Index, Eigen::Index, const cplx& v) { return v != cplx{}; });
            if (c.nonZeros() == 0) continue;
            worst = std::max(worst, operator_norm(c).value);
        }
    }
    return worst;
}

std::vector<double> operator_norms(const DixonTuple& tuple)
{
    std::vector<double> out;
    out.reserve(tuple.ops.size());
    for (const auto& t : tuple.ops) out.push_back(operator_norm(t).value);
    return out;
}

Vector apply_polynomial(const poly::HomogeneousPolynomial& p, const DixonTuple& tuple, const Vector& v)
{
    if (p.n() != tuple.basis.n() || p.k() != tuple.basis.k()) {
        throw std::invalid_argument("apply_polynomial: polynomial and tuple disagree on (n, k)");
    }
    if (static_cast<std::size_t>(v.size()) != tuple.basis.dimension()) {
        throw std::invalid_argument("apply_polynomial: vector length " + std::to_string(v.size()) +
                                    " differs from dimension " + std::to_string(tuple.basis.dimension()));
    }
    Vector acc = Vector::Zero(v.size());
    for (const auto& [m, c] : p.terms()) {
        Vector w = v;
        for (auto it = m.indices.rbegin(); it != m.indices.rend(); ++it) {
            w = tuple.ops[static_cast<std::size_t>(*it - 1)] * w;
        }
        acc += c * w;
    }
    return acc;
}

Vector basis_vector(const DixonBasis& basis, std::size_t position)
{
    Vector v = Vector::Zero(static_cast<Eigen::Index>(basis.dimension()));
    v(static_cast<Eigen::Index>(position)) = 1.0;
    return v;
}

SparseMatrix polynomial_matrix(const poly::HomogeneousPolynomial& p, const DixonTuple& tuple)
{
    const std::size_t dim = tuple.basis.dimension();
    std::vector<Eigen::Triplet<cplx>> entries;
    for (std::size_t col = 0; col < dim; ++col) {
        const Vector image = apply_polynomial(p, tuple, basis_vector(tuple.basis, col));
        for (Eigen::Index row = 0; row < image.size(); ++row) {
            if (image(row) != cplx{}) entries.emplace_back(row, static_cast<Eigen::Index>(col), image(row));
        }
    }
    SparseMatrix out(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    out.setFromTriplets(entries.begin(), entries.end());
    out.makeCompressed();
    return out;
}

RowConditionReport check_row_condition(const DixonTuple& tuple, double scale, int trials, std::uint64_t seed)
{
    if (scale < 0.0 || !std::isfinite(scale)) throw std::invalid_argument("row condition scale must be >= 0");
    RowConditionReport report;
    report.scale = scale;
    report.trials = trials;
    const int n = tuple.basis.n();
    const auto n_idx = static_cast<Eigen::Index>(n);

    Rng rng(derive_seed(seed, "dixon.row"));
    for (int trial = 0; trial < trials; ++trial) {
        Eigen::VectorXcd alpha(n_idx);
        for (Eigen::Index j = 0; j < n_idx; ++j) alpha(j) = rng.complex_normal();
        alpha.normalize();
        SparseMatrix sum = alpha(0) * tuple.ops[0];
        for (Eigen::Index j = 1; j < n_idx; ++j) sum += alpha(j) * tuple.ops[static_cast<std::size_t>(j)];
        report.trial_max = std::max(report.trial_max, scale * operator_norm(sum).value);
    }

    std::vector<Dense> full;
    full.reserve(tuple.ops.size());
    for (const auto& t : tuple.ops) full.emplace_back(t);

    Rng starts(derive_seed(seed, "dixon.row.starts"));
    for (int layer = 0; layer < tuple.basis.k(); ++layer) {
        const auto [in_begin, in_end] = tuple.basis.layer_range(layer);
        const auto [out_begin, out_end] = tuple.basis.layer_range(layer + 1);
        const auto rows = static_cast<Eigen::Index>(out_end - out_begin);
        const auto cols = static_cast<Eigen::Index>(in_end - in_begin);
        std::vector<Dense> blocks;
        blocks.reserve(full.size());
        for (const auto& t : full) {
            blocks.push_back(t.block(static_cast<Eigen::Index>(out_begin), static_cast<Eigen::Index>(in_begin), rows, cols));
        }

        Dense row_gram = Dense::Zero(rows, rows);
        Dense col_gram = Dense::Zero(cols, cols);
        Dense index_gram(n_idx, n_idx);
        for (Eigen::Index j = 0; j < n_idx; ++j) {
            const auto& bj = blocks[static_cast<std::size_t>(j)];
            row_gram += bj * bj.adjoint();
            col_gram += bj.adjoint() * bj;
            for (Eigen::Index i = 0; i < n_idx; ++i) {
                index_gram(j, i) = (blocks[static_cast<std::size_t>(i)].array() *
                                    bj.array().conjugate()).sum();
            }
        }
        const double upper = std::sqrt(std::min(
            {largest_eigenvalue(row_gram), largest_eigenvalue(col_gram), largest_eigenvalue(index_gram)}));
        report.layer_upper.push_back(scale * upper * (1.0 + 1e-12));

        const auto random_unit = [&](Eigen::Index size) {
            Eigen::VectorXcd v(size);
            for (Eigen::Index j = 0; j < size; ++j) v(j) = starts.complex_normal();
            return Eigen::VectorXcd(v.normalized());
        };
        double best = maximize_trilinear(blocks, Eigen::VectorXcd::Constant(n_idx, 1.0 / std::sqrt(n)),
                                         Eigen::VectorXcd::Constant(cols, 1.0 / std::sqrt(static_cast<double>(cols))));
        for (int r = 0; r < 16; ++r) {
            Eigen::VectorXcd alpha = random_unit(n_idx);
            best = std::max(best, maximize_trilinear(blocks, alpha, random_unit(cols)));
        }
        report.layer_optimized.push_back(scale * best);
    }
    report.optimized = *std::max_element(report.layer_optimized.begin(), report.layer_optimized.end());
    report.certified_upper = *std::max_element(report.layer_upper.begin(), report.layer_upper.end());
    report.value = std::max(report.trial_max, report.optimized);
    return report;
}

DixonTuple corrupt_operator(DixonTuple tuple, int l, std::size_t row, std::size_t col, cplx value)
{
    if (l < 1 || l > static_cast<int>(tuple.ops.size())) throw std::out_of_range("operator index outside [1, n]");
    auto& t = tuple.ops[static_cast<std::size_t>(l - 1)];
    t.coeffRef(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = value;
    t.makeCompressed();
    return tuple;
}

}  // namespace vnlab::dixon
