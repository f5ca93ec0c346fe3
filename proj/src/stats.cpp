#include "hcube/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hcube {

EmpiricalDist::EmpiricalDist(std::vector<double> samples, std::size_t censored_count,
                             std::optional<double> censor_point)
    : samples_(std::move(samples)), censored_(censored_count), censor_point_(censor_point) {
  for (double x : samples_) {
    if (!std::isfinite(x) || x < 0.0) {
      throw std::invalid_argument("EmpiricalDist: samples must be finite and non-negative");
    }
  }
  std::sort(samples_.begin(), samples_.end());
}

double EmpiricalDist::survival(double t) const {
  if (total() == 0) throw std::domain_error("survival: no data");
  if (censored_ > 0 && censor_point_ && t >= *censor_point_) {
    throw std::domain_error("survival: t at or beyond the censoring point");
  }
  const auto above = samples_.end() - std::upper_bound(samples_.begin(), samples_.end(), t);
  return static_cast<double>(static_cast<std::size_t>(above) + censored_) /
         static_cast<double>(total());
}

double EmpiricalDist::ks_exp1() const {
  if (censored_ > 0) throw std::domain_error("ks_exp1: censored observations present");
  if (samples_.empty()) throw std::domain_error("ks_exp1: no data");
  const double n = static_cast<double>(samples_.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < samples_.size()) {
    const double x = samples_[i];
    std::size_t j = i;
    while (j < samples_.size() && samples_[j] == x) ++j;
    const double cdf = 1.0 - std::exp(-x);
    d = std::max(d, std::abs(cdf - static_cast<double>(i) / n));  // left limit
    d = std::max(d, std::abs(static_cast<double>(j) / n - cdf));  // right limit
    i = j;
  }
  return d;
}

MeanCI EmpiricalDist::mean_ci() const {
  if (censored_ > 0) throw std::domain_error("mean_ci: censored observations present");
  if (samples_.size() < 2) throw std::domain_error("mean_ci: need at least two samples");
  const double n = static_cast<double>(samples_.size());
  double mean = 0.0;
  for (double x : samples_) mean += x;
  mean /= n;
  double ss = 0.0;
  for (double x : samples_) ss += (x - mean) * (x - mean);
  const double s = std::sqrt(ss / (n - 1.0));
  return {mean, 1.96 * s / std::sqrt(n)};
}

EmpiricalDist EmpiricalDist::scaled(double factor) const {
  if (!(factor > 0.0)) throw std::invalid_argument("scaled: factor must be positive");
  std::vector<double> out(samples_);
  for (double& x : out) x *= factor;
  std::optional<double> point;
  if (censor_point_) point = *censor_point_ * factor;
  return EmpiricalDist(std::move(out), censored_, point);
}

}  // namespace hcube
