#pragma once

// Convolution coefficients of the discrete fractional sum (step h = 1, origin 0):
//
//   phi_alpha(n) = Gamma(n + alpha) / (Gamma(alpha) Gamma(n + 1)),  phi_alpha(0) = 1,
//
// generated by the multiplicative recurrence phi(n) = phi(n-1) (n - 1 + alpha) / n.
// Direct Gamma quotients overflow long before the history lengths used here.

#include <complex>
#include <cstddef>
#include <memory>
#include <shared_mutex>
#include <vector>

namespace fracdelay {

/// Throws DomainError unless 0 < alpha <= 1.
void require_order(double alpha);

/// phi_alpha(n) by recurrence.  O(n).
double kernel_coefficient(double alpha, long long n);

/// [phi_alpha(0), ..., phi_alpha(length - 1)].
std::vector<double> kernel_prefix(double alpha, std::size_t length);

/// |sum_{j=0}^{N} phi_alpha(j) z^-j - (1 - 1/z)^-alpha| for |z| > 1.
double check_z_identity(double alpha, std::complex<double> z, int truncation);

/// Order alpha plus an append-only coefficient cache shared by every
/// trajectory that runs at this order.
///
/// coefficients() hands out immutable snapshots.  Growing the cache builds a
/// longer vector and publishes it under a write lock, so a snapshot already
/// held by another thread never changes underneath it.
class FractionalKernel {
 public:
  using Snapshot = std::shared_ptr<const std::vector<double>>;

  explicit FractionalKernel(double alpha);

  double alpha() const noexcept { return alpha_; }

  /// Snapshot holding at least `length` coefficients.
  Snapshot coefficients(std::size_t length) const;

  /// Copy of the first `length` coefficients.
  std::vector<double> prefix(std::size_t length) const;

  double operator[](std::size_t n) const { return (*coefficients(n + 1))[n]; }

  /// Number of coefficients currently cached.
  std::size_t cached() const;

 private:
  double alpha_;
  mutable std::shared_mutex mutex_;
  mutable Snapshot cache_;
  mutable long double tail_ = 1.0L;
};

}  // namespace fracdelay
