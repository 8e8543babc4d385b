#include "conbqa/regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "conbqa/errors.hpp"

namespace conbqa {

double Weights::max() const {
  double m = 0.0;
  for (double v : w) m = std::max(m, v);
  return m;
}

std::vector<double> minmax_normalize(std::span<const double> ys) {
  if (ys.empty()) throw InvalidParameter("minmax_normalize: need at least one value");
  const auto [lo, hi] = std::minmax_element(ys.begin(), ys.end());
  const double range = *hi - *lo;
  std::vector<double> out(ys.size(), 0.0);
  if (!(range > 0.0)) return out;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    out[i] = std::clamp((ys[i] - *lo) / range, 0.0, 1.0);
  }
  return out;
}

namespace {

Weights lawson_hanson(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const NnlsOptions& options) {
  const Eigen::Index n = a.rows();
  const Eigen::Index m = a.cols();
  if (!a.allFinite() || !b.allFinite()) throw NumericError("fit_nnls: non-finite input");

  Eigen::VectorXd x = Eigen::VectorXd::Zero(m);
  std::vector<bool> passive(static_cast<std::size_t>(m), false);

  const double tol = 10.0 * std::numeric_limits<double>::epsilon() *
                     std::max<double>(1.0, a.cwiseAbs().colwise().sum().maxCoeff()) *
                     static_cast<double>(std::max(n, m));
  const std::size_t max_outer = options.max_outer_factor * static_cast<std::size_t>(m);

  auto solve_passive = [&](Eigen::VectorXd& s) {
    std::vector<Eigen::Index> cols;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (passive[static_cast<std::size_t>(j)]) cols.push_back(j);
    }
    s.setZero(m);
    if (cols.empty()) return;
    Eigen::MatrixXd ap(n, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) ap.col(static_cast<Eigen::Index>(c)) = a.col(cols[c]);
    const Eigen::VectorXd sp = ap.colPivHouseholderQr().solve(b);
    for (std::size_t c = 0; c < cols.size(); ++c) s(cols[c]) = sp(static_cast<Eigen::Index>(c));
  };

  Eigen::VectorXd s(m);
  // Columns whose entry came back nonpositive at the current x; retried once x moves.
  std::vector<bool> blocked(static_cast<std::size_t>(m), false);
  for (std::size_t outer = 0; outer < max_outer; ++outer) {
    const Eigen::VectorXd dual = a.transpose() * (b - a * x);
    Eigen::Index best = -1;
    double best_val = tol;
    for (Eigen::Index j = 0; j < m; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      if (!passive[uj] && !blocked[uj] && dual(j) > best_val) {
        best_val = dual(j);
        best = j;
      }
    }
    if (best < 0) break;
    passive[static_cast<std::size_t>(best)] = true;

    solve_passive(s);
    if (s(best) <= 0.0) {
      // Rounding made the entering column look useful; it is not.
      passive[static_cast<std::size_t>(best)] = false;
      blocked[static_cast<std::size_t>(best)] = true;
      continue;
    }
    std::fill(blocked.begin(), blocked.end(), false);

    for (bool first = true;; first = false) {
      if (!first) solve_passive(s);
      solve_passive(s);
      double alpha = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < m; ++j) {
        if (passive[static_cast<std::size_t>(j)] && s(j) <= 0.0) {
          alpha = std::min(alpha, x(j) / (x(j) - s(j)));
        }
      }
      if (!std::isfinite(alpha)) break;
      x += alpha * (s - x);
      for (Eigen::Index j = 0; j < m; ++j) {
        if (passive[static_cast<std::size_t>(j)] && x(j) <= tol) {
          passive[static_cast<std::size_t>(j)] = false;
          x(j) = 0.0;
        }
      }
    }
    x = s;
  }

  Weights out;
  out.w.resize(static_cast<std::size_t>(m));
  for (Eigen::Index j = 0; j < m; ++j) out.w[static_cast<std::size_t>(j)] = std::max(0.0, x(j));
  return out;
}

}  // namespace

Weights fit_nnls(std::span<const BitVector> zs, std::span<const double> ys, const NnlsOptions& options) {
  if (zs.empty()) throw InvalidParameter("fit_nnls: need at least one row");
  if (zs.size() != ys.size()) throw ContractError("fit_nnls: design and target sizes differ");
  const std::size_t m = zs.front().size();
  if (m == 0) throw InvalidParameter("fit_nnls: need at least one column");
  Eigen::MatrixXd a(static_cast<Eigen::Index>(zs.size()), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < zs.size(); ++i) {
    if (zs[i].size() != m) throw ContractError("fit_nnls: ragged design");
    for (std::size_t k = 0; k < m; ++k) {
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = zs[i][k] ? 1.0 : 0.0;
    }
  }
  const Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(ys.data(), static_cast<Eigen::Index>(ys.size()));
  return lawson_hanson(a, b, options);
}

Weights fit_nnls(std::span<const double> design, std::size_t rows, std::size_t cols,
                 std::span<const double> ys, const NnlsOptions& options) {
  if (rows == 0 || cols == 0) throw InvalidParameter("fit_nnls: empty design");
  if (design.size() != rows * cols || ys.size() != rows) {
    throw ContractError("fit_nnls: design shape does not match data");
  }
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const Eigen::MatrixXd a = Eigen::Map<const RowMajor>(design.data(), static_cast<Eigen::Index>(rows),
                                                       static_cast<Eigen::Index>(cols));
  const Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(ys.data(), static_cast<Eigen::Index>(rows));
  return lawson_hanson(a, b, options);
}

std::vector<double> nnls_gradient(std::span<const BitVector> zs, std::span<const double> ys,
                                  const Weights& weights) {
  std::vector<double> grad(weights.size(), 0.0);
  for (std::size_t i = 0; i < zs.size(); ++i) {
    double r = -ys[i];
    for (std::size_t k = 0; k < weights.size(); ++k) {
      if (zs[i][k]) r += weights.w[k];
    }
    for (std::size_t k = 0; k < weights.size(); ++k) {
      if (zs[i][k]) grad[k] += r;
    }
  }
  return grad;
}

double acquisition(const Weights& weights, const BitVector& z) {
  if (z.size() != weights.size()) throw ContractError("acquisition: code length != number of weights");
  double g = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) {
    if (z[k]) g += weights.w[k];
  }
  return g;
}

}  // namespace conbqa
