#pragma once

// Shannon information quantities over small dense probability tables.
// All logarithms are base 2 and every result is in bits.

#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "coopsearch/errors.hpp"

namespace coopsearch::info {

inline constexpr double kExactTolerance = 1e-9;
inline constexpr double kQuadratureTolerance = 1e-8;

namespace detail {

// -p log2 p with 0 log 0 = 0.
inline double plogp(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

inline void check_probabilities(std::span<const double> probs, double tol, const char* what) {
  if (probs.empty()) throw ValidationError(std::string(what) + ": empty table");
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p))
      throw ValidationError(std::string(what) + ": negative or non-finite entry");
    total += p;
  }
  if (std::abs(total - 1.0) > tol)
    throw ValidationError(std::string(what) + ": total mass " + std::to_string(total) +
                          " is not 1");
}

}  // namespace detail

class DiscreteDistribution {
 public:
  DiscreteDistribution(std::vector<std::string> outcomes, std::vector<double> probs,
                       double tol = kExactTolerance)
      : outcomes_(std::move(outcomes)), probs_(std::move(probs)) {
    if (outcomes_.size() != probs_.size())
      throw ValidationError("DiscreteDistribution: outcomes and probs differ in length");
    detail::check_probabilities(probs_, tol, "DiscreteDistribution");
  }

  // Unlabelled outcomes 0..n-1.
  explicit DiscreteDistribution(std::vector<double> probs, double tol = kExactTolerance)
      : probs_(std::move(probs)) {
    outcomes_.reserve(probs_.size());
    for (std::size_t i = 0; i < probs_.size(); ++i) outcomes_.push_back(std::to_string(i));
    detail::check_probabilities(probs_, tol, "DiscreteDistribution");
  }

  const std::vector<std::string>& outcomes() const { return outcomes_; }
  std::span<const double> probs() const { return probs_; }
  std::size_t size() const { return probs_.size(); }

 private:
  std::vector<std::string> outcomes_;
  std::vector<double> probs_;
};

class JointTable2 {
 public:
  JointTable2(std::size_t n1, std::size_t n2, std::vector<double> probs,
              double tol = kExactTolerance)
      : n1_(n1), n2_(n2), probs_(std::move(probs)) {
    if (n1_ == 0 || n2_ == 0 || probs_.size() != n1_ * n2_)
      throw ValidationError("JointTable2: dims do not match entry count");
    detail::check_probabilities(probs_, tol, "JointTable2");
  }

  std::size_t n1() const { return n1_; }
  std::size_t n2() const { return n2_; }
  double operator()(std::size_t i, std::size_t j) const { return probs_[i * n2_ + j]; }
  std::span<const double> probs() const { return probs_; }

  std::vector<double> marginal1() const {
    std::vector<double> m(n1_, 0.0);
    for (std::size_t i = 0; i < n1_; ++i)
      for (std::size_t j = 0; j < n2_; ++j) m[i] += (*this)(i, j);
    return m;
  }
  std::vector<double> marginal2() const {
    std::vector<double> m(n2_, 0.0);
    for (std::size_t i = 0; i < n1_; ++i)
      for (std::size_t j = 0; j < n2_; ++j) m[j] += (*this)(i, j);
    return m;
  }

  JointTable2 transposed() const {
    std::vector<double> t(probs_.size());
    for (std::size_t i = 0; i < n1_; ++i)
      for (std::size_t j = 0; j < n2_; ++j) t[j * n1_ + i] = (*this)(i, j);
    return JointTable2(n2_, n1_, std::move(t), 1.0);
  }

 private:
  std::size_t n1_, n2_;
  std::vector<double> probs_;
};

// P(x1, x2, x3). The third axis may be a quadrature grid, in which case the
// entries already carry the quadrature weights.
class JointTable3 {
 public:
  JointTable3(std::size_t n1, std::size_t n2, std::size_t n3, std::vector<double> probs,
              double tol = kQuadratureTolerance)
      : n1_(n1), n2_(n2), n3_(n3), probs_(std::move(probs)) {
    if (n1_ == 0 || n2_ == 0 || n3_ == 0 || probs_.size() != n1_ * n2_ * n3_)
      throw ValidationError("JointTable3: dims do not match entry count");
    detail::check_probabilities(probs_, tol, "JointTable3");
  }

  std::size_t n1() const { return n1_; }
  std::size_t n2() const { return n2_; }
  std::size_t n3() const { return n3_; }
  double operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return probs_[(i * n2_ + j) * n3_ + k];
  }
  std::span<const double> probs() const { return probs_; }

  // P(x1, x2) with x3 summed out.
  JointTable2 marginal12() const {
    std::vector<double> m(n1_ * n2_, 0.0);
    for (std::size_t i = 0; i < n1_; ++i)
      for (std::size_t j = 0; j < n2_; ++j)
        for (std::size_t k = 0; k < n3_; ++k) m[i * n2_ + j] += (*this)(i, j, k);
    return JointTable2(n1_, n2_, std::move(m), kQuadratureTolerance);
  }

  double mass3(std::size_t k) const {
    double s = 0.0;
    for (std::size_t i = 0; i < n1_; ++i)
      for (std::size_t j = 0; j < n2_; ++j) s += (*this)(i, j, k);
    return s;
  }

  // P(x1, x2 | x3 = k). Throws when the slice carries no mass.
  JointTable2 slice3(std::size_t k) const {
    const double mass = mass3(k);
    if (!(mass > 0.0)) throw ValidationError("JointTable3: slice has zero mass");
    std::vector<double> s(n1_ * n2_);
    for (std::size_t i = 0; i < n1_; ++i)
      for (std::size_t j = 0; j < n2_; ++j) s[i * n2_ + j] = (*this)(i, j, k) / mass;
    return JointTable2(n1_, n2_, std::move(s), kExactTolerance);
  }

 private:
  std::size_t n1_, n2_, n3_;
  std::vector<double> probs_;
};

inline double entropy(std::span<const double> probs, double tol = kExactTolerance) {
  detail::check_probabilities(probs, tol, "entropy");
  double s = 0.0;
  for (double p : probs) s += detail::plogp(p);
  return s;
}

inline double entropy(const DiscreteDistribution& d) {
  double s = 0.0;
  for (double p : d.probs()) s += detail::plogp(p);
  return s;
}

inline double joint_entropy(const JointTable2& j) {
  double s = 0.0;
  for (double p : j.probs()) s += detail::plogp(p);
  return s;
}

// S(X1 | X2).
inline double conditional_entropy(const JointTable2& j) {
  const auto px2 = j.marginal2();
  double s = 0.0;
  for (std::size_t a = 0; a < j.n1(); ++a)
    for (std::size_t b = 0; b < j.n2(); ++b) {
      const double p = j(a, b);
      if (p > 0.0 && px2[b] > 0.0) s -= p * std::log2(p / px2[b]);
    }
  return s < 0.0 ? 0.0 : s;
}

// I(X1; X2) = S(X1) - S(X1 | X2).
inline double mutual_information(const JointTable2& j) {
  double s1 = 0.0;
  for (double p : j.marginal1()) s1 += detail::plogp(p);
  return s1 - conditional_entropy(j);
}

// I(X1; X2 | X3), summed cell by cell over the three-way table.
inline double conditional_mutual_information(const JointTable3& j) {
  double total = 0.0;
  std::vector<double> m1(j.n1()), m2(j.n2());
  for (std::size_t k = 0; k < j.n3(); ++k) {
    const double pk = j.mass3(k);
    if (!(pk > 0.0)) continue;
    std::fill(m1.begin(), m1.end(), 0.0);
    std::fill(m2.begin(), m2.end(), 0.0);
    for (std::size_t a = 0; a < j.n1(); ++a)
      for (std::size_t b = 0; b < j.n2(); ++b) {
        m1[a] += j(a, b, k);
        m2[b] += j(a, b, k);
      }
    for (std::size_t a = 0; a < j.n1(); ++a)
      for (std::size_t b = 0; b < j.n2(); ++b) {
        const double p = j(a, b, k);
        if (p > 0.0) total += p * std::log2(p * pk / (m1[a] * m2[b]));
      }
  }
  return total;
}

// R = I(X1; X2) - I(X1; X2 | X3). Positive is redundant, negative synergetic.
inline double redundancy(const JointTable3& j) {
  return mutual_information(j.marginal12()) - conditional_mutual_information(j);
}

}  // namespace coopsearch::info
