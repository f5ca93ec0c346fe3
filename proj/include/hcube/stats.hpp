#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace hcube {

struct MeanCI {
  double mean;
  double half_width;  // 95%: 1.96 s / sqrt(n)
};

/// Sorted sample of non-negative observations plus a count of right-censored
/// observations (known only to exceed `censor_point`).
class EmpiricalDist {
 public:
  /// Throws std::invalid_argument on negative or non-finite samples.
  explicit EmpiricalDist(std::vector<double> samples, std::size_t censored_count = 0,
                         std::optional<double> censor_point = std::nullopt);

  const std::vector<double>& samples() const noexcept { return samples_; }
  std::size_t censored_count() const noexcept { return censored_; }
  std::size_t total() const noexcept { return samples_.size() + censored_; }
  std::optional<double> censor_point() const noexcept { return censor_point_; }

  /// Fraction of observations exceeding t, counting censored ones as
  /// exceeding. Throws std::domain_error without data, or when t is at or
  /// beyond the censoring point while censored observations exist.
  double survival(double t) const;

  /// Kolmogorov-Smirnov distance to the Exp(1) CDF, evaluated at both edges
  /// of every step. Throws std::domain_error on censored or empty input.
  double ks_exp1() const;

  /// Throws std::domain_error for n < 2 or censored input.
  MeanCI mean_ci() const;

  /// Every sample multiplied by `factor` (> 0); censoring point scaled too.
  EmpiricalDist scaled(double factor) const;

 private:
  std::vector<double> samples_;
  std::size_t censored_;
  std::optional<double> censor_point_;
};

}  // namespace hcube
