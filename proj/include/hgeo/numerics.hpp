#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace hgeo {

/// Execution policy for the grid kernels. Serial is the reference
/// implementation; Parallel distributes independent grid points with
/// OpenMP and must reproduce the serial result bit for bit.
enum class Exec { Serial, Parallel };

/// Calls body(i) for i in [0, n). Results must be written to
/// preallocated, index-addressed storage so the reduction order is fixed.
void for_each_index(Exec exec, std::size_t n, const std::function<void(std::size_t)>& body);

/// Worker count used by Exec::Parallel (HGEO_NUM_THREADS overrides).
int worker_count();

namespace quad {

struct Result {
  double value = 0.0;
  double error = 0.0;
};

/// Adaptive Gauss-Kronrod (15 point) on [a, b].
Result gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                     double abs_tol = 1e-10, double rel_tol = 1e-12, unsigned max_depth = 20);

/// Tanh-sinh quadrature on [a, b]; tolerates integrable endpoint singularities.
Result tanh_sinh(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-12);

/// Trapezoidal rule on a (possibly non-uniform) grid.
double trapezoid(std::span<const double> x, std::span<const double> y);

}  // namespace quad

/// Gauss hypergeometric function 2F1(a, b; c; z) for real z < 1.
/// Negative arguments are mapped into [0, 1) with the Pfaff transformation.
double hyp2f1(double a, double b, double c, double z);

std::vector<double> linspace(double a, double b, std::size_t n);
std::vector<double> logspace(double log10_a, double log10_b, std::size_t n);

/// SplitMix64 finaliser; used for counter-based per-sample seeding.
std::uint64_t splitmix64(std::uint64_t x);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

/// Least-squares polynomial fit, coefficients in ascending powers.
std::vector<double> fit_polynomial(std::span<const double> x, std::span<const double> y,
                                   int degree);

}  // namespace hgeo
