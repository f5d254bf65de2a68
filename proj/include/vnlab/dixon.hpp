#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "vnlab/polynomial.hpp"
#include "vnlab/steiner.hpp"

namespace vnlab::dixon {

using SparseMatrix = Eigen::SparseMatrix<cplx>;
using Vector = Eigen::VectorXcd;

struct Label {
    enum class Kind { E, Tuple, F, G };
    Kind kind = Kind::E;
    std::vector<int> tuple;  ///< nondecreasing, Kind::Tuple only
    int index = 0;           ///< i of f_i, Kind::F only

    [[nodiscard]] std::string to_string() const;
};

/// Orthonormal basis e; e(j1..jm) for 1 <= m <= k-2 over nondecreasing
/// tuples; f_1..f_n; g. Canonical order: e, tuples by length then
/// lexicographic, f_1..f_n, g.
///
/// Layers: 0 holds e, m in [1, k-2] holds the m-tuples, k-1 the f_i and k
/// holds g. Every T_l maps layer m into layer m+1.
class DixonBasis {
public:
    DixonBasis(int n, int k);

    [[nodiscard]] int n() const { return n_; }
    [[nodiscard]] int k() const { return k_; }
    [[nodiscard]] std::size_t dimension() const { return labels_.size(); }
    [[nodiscard]] const std::vector<Label>& labels() const { return labels_; }

    [[nodiscard]] std::size_t e() const { return 0; }
    /// Position of e[tuple]; the tuple is reordered first.
    [[nodiscard]] std::size_t tuple(std::vector<int> points) const;
    [[nodiscard]] std::size_t f(int i) const;
    [[nodiscard]] std::size_t g() const { return labels_.size() - 1; }

    [[nodiscard]] int layer_count() const { return k_ + 1; }
    /// [begin, end) positions of a layer.
    [[nodiscard]] std::pair<std::size_t, std::size_t> layer_range(int layer) const;

    /// 2 + n + sum_{m=1}^{k-2} binom(n+m-1, m).
    static std::size_t dimension_formula(int n, int k);

private:
    int n_;
    int k_;
    std::vector<Label> labels_;
    std::map<std::vector<int>, std::size_t> tuple_index_;
    std::vector<std::size_t> layer_begin_;
};

/// Commuting n-tuple built from a signed S_p(k-1, k, n) system.
struct DixonTuple {
    DixonBasis basis;
    std::vector<SparseMatrix> ops;  ///< ops[l-1] = T_l
    std::map<steiner::Block, cplx> gamma;
    poly::HomogeneousPolynomial source;
};

DixonBasis build_basis(int n, int k);

/// T_l e = e(l); T_l e(j..) = e[l, j..] below the top tuple layer;
/// T_l e(j1..j_{k-2}) = sum_i gamma_{i,l,j1..} f_i; T_l f_i = delta_li g;
/// T_l g = 0. `p` supplies the signs c_J on the blocks.
DixonTuple build_tuple(const steiner::PartialSteinerSystem& system, const poly::HomogeneousPolynomial& p);

struct OperatorNorm {
    double value = 0.0;
    bool converged = true;
    int iterations = 0;
};

/// Largest singular value by power iteration on A^H A from a fixed start.
OperatorNorm operator_norm(const SparseMatrix& a, int max_iter = 100000, double rel_tol = 1e-12);

/// Largest singular value from a dense SVD, for cross-checks.
double dense_operator_norm(const SparseMatrix& a);

/// sqrt(max column abs sum * max row abs sum), an upper bound on ||A||.
double schur_bound(const SparseMatrix& a);

/// max over l < m of ||T_l T_m - T_m T_l||.
double check_commuting(const DixonTuple& tuple);

std::vector<double> operator_norms(const DixonTuple& tuple);

/// sum_J c_J T_{j1} ... T_{jk} v, applying T_{jk} first.
Vector apply_polynomial(const poly::HomogeneousPolynomial& p, const DixonTuple& tuple, const Vector& v);

/// Full matrix of p(T_1, ..., T_n), assembled column by column.
SparseMatrix polynomial_matrix(const poly::HomogeneousPolynomial& p, const DixonTuple& tuple);

Vector basis_vector(const DixonBasis& basis, std::size_t position);

/// sup over unit alpha in l_2^n of ||sum_j alpha_j scale T_j||.
///
/// The operator sum_j alpha_j T_j is block diagonal over layer transitions,
/// so the supremum is the largest, over layers, of a trilinear form norm.
/// `optimized` maximizes each form by alternating updates (a lower bound),
/// `certified_upper` takes the smallest of its three unfolding norms.
struct RowConditionReport {
    double scale = 0.0;
    int trials = 0;
    double trial_max = 0.0;        ///< best of the random unit alpha
    double optimized = 0.0;        ///< alternating maximization over alpha
    double certified_upper = 0.0;  ///< valid for every alpha
    double value = 0.0;            ///< max(trial_max, optimized)
    std::vector<double> layer_optimized;
    std::vector<double> layer_upper;
};

RowConditionReport check_row_condition(const DixonTuple& tuple, double scale, int trials, std::uint64_t seed);

/// Copy of the tuple with one entry of T_l overwritten, used as a negative
/// control for the commutation check.
DixonTuple corrupt_operator(DixonTuple tuple, int l, std::size_t row, std::size_t col, cplx value);

}  // namespace vnlab::dixon
