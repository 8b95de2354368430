#include "hgeo/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <queue>

#include <Eigen/Dense>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/hypergeometric_pFq.hpp>
#include <omp.h>

#include "hgeo/error.hpp"

namespace hgeo {

int worker_count() {
  if (const char* env = std::getenv("HGEO_NUM_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && n > 0) return static_cast<int>(n);
  }
  return omp_get_max_threads();
}

void for_each_index(Exec exec, std::size_t n, const std::function<void(std::size_t)>& body) {
  if (exec == Exec::Serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  // Keep the exception of the lowest failing index so errors are reproducible.
  std::exception_ptr first;
  std::size_t first_index = n;
  std::mutex guard;
  const long long count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(worker_count())
  for (long long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(guard);
      if (static_cast<std::size_t>(i) < first_index) {
        first_index = static_cast<std::size_t>(i);
        first = std::current_exception();
      }
    }
  }
  if (first) std::rethrow_exception(first);
}

namespace quad {

namespace {

// 7-point Gauss / 15-point Kronrod nodes on [-1, 1]
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double resk = fc * kWgk[7];
  double resg = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double s = f(c - dx) + f(c + dx);
    resk += kWgk[j] * s;
    if (j % 2 == 1) resg += kWg[j / 2] * s;
  }
  return {a, b, resk * h, std::abs((resk - resg) * h)};
}

}  // namespace

Result gauss_kronrod(const std::function<double(double)>& f, double a, double b, double abs_tol,
                     double rel_tol, unsigned max_depth) {
  if (a == b) return {};
  // Global adaptive bisection; max_depth bounds the number of bisections
  // at 2^max_depth / 64 to keep pathological integrands cheap.
  const std::size_t max_segments = std::max<std::size_t>(64, (std::size_t{1} << std::min(max_depth, 24u)) / 64);
  std::priority_queue<Segment> heap;
  Segment first = gk15(f, a, b);
  heap.push(first);
  double total = first.value;
  double err = first.error;
  std::size_t segments = 1;
  while (err > std::max(abs_tol, rel_tol * std::abs(total)) && segments < max_segments) {
    Segment worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;
    heap.pop();
    const Segment left = gk15(f, worst.a, mid);
    const Segment right = gk15(f, mid, worst.b);
    heap.push(left);
    heap.push(right);
    ++segments;
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
  }
  if (segments > 1) {
    // resum to drop the drift of the running updates
    std::vector<Segment> all;
    all.reserve(heap.size());
    while (!heap.empty()) {
      all.push_back(heap.top());
      heap.pop();
    }
    std::sort(all.begin(), all.end(), [](const Segment& l, const Segment& r) { return l.a < r.a; });
    total = 0.0;
    err = 0.0;
    for (const auto& s : all) {
      total += s.value;
      err += s.error;
    }
  }
  if (!std::isfinite(total)) throw_numerics("NonConvergent", "quadrature produced a non-finite value");
  return {total, err};
}

Result tanh_sinh(const std::function<double(double)>& f, double a, double b, double rel_tol) {
  if (a == b) return {};
  static thread_local boost::math::quadrature::tanh_sinh<double> integrator;
  Result r;
  double l1 = 0.0;
  r.value = integrator.integrate(f, a, b, rel_tol, &r.error, &l1);
  if (!std::isfinite(r.value)) throw_numerics("NonConvergent", "tanh-sinh quadrature produced a non-finite value");
  return r;
}

double trapezoid(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) s += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  return s;
}

}  // namespace quad

double hyp2f1(double a, double b, double c, double z) {
  if (!(z < 1.0)) throw_numerics("NonConvergent", "hyp2f1 requires z < 1");
  if (z < 0.0) {
    const double w = z / (z - 1.0);
    return std::pow(1.0 - z, -a) * hyp2f1(a, c - b, c, w);
  }
  return boost::math::hypergeometric_pFq({a, b}, {c}, z);
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = a;
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  out.back() = b;
  return out;
}

std::vector<double> logspace(double log10_a, double log10_b, std::size_t n) {
  auto e = linspace(log10_a, log10_b, n);
  for (auto& v : e) v = std::pow(10.0, v);
  return e;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  const auto c = fit_polynomial(x, y, 1);
  LinearFit fit{c[1], c[0], 0.0};
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double ss_tot = 0.0;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += r * r;
    ss_tot += (y[i] - mean) * (y[i] - mean);
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

std::vector<double> fit_polynomial(std::span<const double> x, std::span<const double> y, int degree) {
  if (x.size() != y.size() || x.size() < static_cast<std::size_t>(degree + 1))
    throw_numerics("IllConditioned", "not enough points for the requested fit degree");
  Eigen::MatrixXd v(x.size(), degree + 1);
  Eigen::VectorXd rhs(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double p = 1.0;
    for (int k = 0; k <= degree; ++k) {
      v(i, k) = p;
      p *= x[i];
    }
    rhs(i) = y[i];
  }
  const Eigen::VectorXd c = v.colPivHouseholderQr().solve(rhs);
  return {c.data(), c.data() + c.size()};
}

}  // namespace hgeo
