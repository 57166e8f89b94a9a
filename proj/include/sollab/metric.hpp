#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sollab/expr.hpp"
#include "sollab/jet.hpp"

namespace sollab {

inline constexpr std::size_t kMaxChartDim = 8;
inline constexpr double kSingularDeterminant = 1e-12;

// Multiset of eigenvalue signs, e.g. (-,+,+) for a 3-dim Lorentzian metric.
struct Signature {
  int negative = 0;
  int positive = 0;

  static Signature riemannian(int n) { return {0, n}; }
  static Signature lorentzian(int n) { return {1, n - 1}; }
  static Signature neutral(int n) { return {n / 2, n - n / 2}; }

  // Accepts "-++", "(-,+,+)" and similar sign lists.
  static Signature parse(std::string_view text);

  int dim() const noexcept { return negative + positive; }
  std::string to_string() const;

  friend bool operator==(const Signature&, const Signature&) = default;
};

Signature operator+(const Signature& a, const Signature& b);

// Symmetric matrix of scalar fields over a named chart. Only one expression
// is stored per unordered index pair, so symmetry holds by construction.
class MetricField {
public:
  MetricField(std::vector<std::string> coords, const std::vector<std::vector<Expr>>& components,
              Signature expected);

  static MetricField from_strings(std::vector<std::string> coords,
                                  const std::vector<std::vector<std::string>>& components,
                                  Signature expected);
  static MetricField diagonal(std::vector<std::string> coords, const std::vector<Expr>& diag,
                              Signature expected);
  // Constant diag(signs) metric, e.g. flat(names, {-1, 1, 1}).
  static MetricField flat(std::vector<std::string> coords, const std::vector<double>& diag);

  std::size_t dim() const noexcept { return coords_.size(); }
  const std::vector<std::string>& coords() const noexcept { return coords_; }
  const Signature& signature() const noexcept { return signature_; }
  const Expr& component(std::size_t i, std::size_t j) const;

private:
  std::vector<std::string> coords_;
  std::vector<Expr> packed_;  // upper triangle, row-major
  Signature signature_;
};

// Dense rank-3 / rank-4 arrays of equal extent n.
class Tensor3 {
public:
  explicit Tensor3(std::size_t n = 0) : n_(n), data_(n * n * n, 0.0) {}
  double& operator()(std::size_t a, std::size_t b, std::size_t c) { return data_[(a * n_ + b) * n_ + c]; }
  double operator()(std::size_t a, std::size_t b, std::size_t c) const {
    return data_[(a * n_ + b) * n_ + c];
  }
  std::size_t dim() const noexcept { return n_; }

private:
  std::size_t n_;
  std::vector<double> data_;
};

class Tensor4 {
public:
  explicit Tensor4(std::size_t n = 0) : n_(n), data_(n * n * n * n, 0.0) {}
  double& operator()(std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
    return data_[((a * n_ + b) * n_ + c) * n_ + d];
  }
  double operator()(std::size_t a, std::size_t b, std::size_t c, std::size_t d) const {
    return data_[((a * n_ + b) * n_ + c) * n_ + d];
  }
  std::size_t dim() const noexcept { return n_; }

private:
  std::size_t n_;
  std::vector<double> data_;
};

struct MetricAtPoint {
  Matrix g;
  Matrix g_inv;
  Tensor3 dg;   // dg(k, i, j) = d_k g_ij
  Tensor4 d2g;  // d2g(k, l, i, j) = d_k d_l g_ij

  std::size_t dim() const noexcept { return static_cast<std::size_t>(g.rows()); }
};

// Components, inverse and first/second partials at p. Throws SingularMetric
// when |det g| < 1e-12 and SignatureMismatch when the eigenvalue signs differ
// from m.signature().
MetricAtPoint metric_at(const MetricField& m, const CoordinatePoint& p);

}  // namespace sollab
