#include "fracdelay/fractional_kernel.hpp"

#include <cmath>
#include <mutex>
#include <string>

#include "fracdelay/errors.hpp"

namespace fracdelay {

namespace {

// Extends `out` from its current length to `length`.  The running product is
// carried in long double (`acc` holds it between calls) so the rounding
// accumulated over 1e5 steps stays near 1e-14.
void extend_recurrence(double alpha, std::vector<double>& out, long double& acc, std::size_t length) {
  if (out.size() >= length) return;
  out.reserve(length);
  if (out.empty()) {
    acc = 1.0L;
    out.push_back(1.0);
  }
  for (std::size_t n = out.size(); n < length; ++n) {
    acc *= (static_cast<long double>(n) - 1.0L + alpha) / static_cast<long double>(n);
    out.push_back(static_cast<double>(acc));
  }
}

}  // namespace

void require_order(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw DomainError("fractional order alpha must lie in (0, 1], got " + std::to_string(alpha));
  }
}

double kernel_coefficient(double alpha, long long n) {
  require_order(alpha);
  if (n < 0) throw DomainError("kernel index must be nonnegative, got " + std::to_string(n));
  long double c = 1.0L;
  for (long long k = 1; k <= n; ++k) {
    c *= (static_cast<long double>(k) - 1.0L + alpha) / static_cast<long double>(k);
  }
  return static_cast<double>(c);
}

std::vector<double> kernel_prefix(double alpha, std::size_t length) {
  require_order(alpha);
  if (length < 1) throw DomainError("kernel prefix length must be >= 1");
  std::vector<double> out;
  long double acc = 1.0L;
  extend_recurrence(alpha, out, acc, length);
  return out;
}

double check_z_identity(double alpha, std::complex<double> z, int truncation) {
  require_order(alpha);
  if (!(std::abs(z) > 1.0)) throw DomainError("check_z_identity needs |z| > 1");
  if (truncation < 1) throw DomainError("truncation must be >= 1");
  const std::complex<double> zinv = 1.0 / z;
  std::complex<double> sum = 0.0;
  std::complex<double> power = 1.0;
  long double c = 1.0L;
  for (int j = 0; j <= truncation; ++j) {
    if (j > 0) {
      c *= (static_cast<long double>(j) - 1.0L + alpha) / static_cast<long double>(j);
      power *= zinv;
    }
    sum += static_cast<double>(c) * power;
  }
  const std::complex<double> closed = std::pow(1.0 - zinv, -alpha);
  return std::abs(sum - closed);
}

FractionalKernel::FractionalKernel(double alpha) : alpha_(alpha) {
  require_order(alpha);
  auto initial = std::make_shared<std::vector<double>>();
  extend_recurrence(alpha_, *initial, tail_, 64);
  cache_ = std::move(initial);
}

FractionalKernel::Snapshot FractionalKernel::coefficients(std::size_t length) const {
  {
    std::shared_lock lock(mutex_);
    if (cache_->size() >= length) return cache_;
  }
  std::unique_lock lock(mutex_);
  if (cache_->size() >= length) return cache_;
  auto grown = std::make_shared<std::vector<double>>(*cache_);
  std::size_t target = cache_->size();
  while (target < length) target *= 2;
  extend_recurrence(alpha_, *grown, tail_, target);
  cache_ = std::move(grown);
  return cache_;
}

std::vector<double> FractionalKernel::prefix(std::size_t length) const {
  if (length < 1) throw DomainError("kernel prefix length must be >= 1");
  auto snap = coefficients(length);
  return {snap->begin(), snap->begin() + static_cast<std::ptrdiff_t>(length)};
}

std::size_t FractionalKernel::cached() const {
  std::shared_lock lock(mutex_);
  return cache_->size();
}

}  // namespace fracdelay
