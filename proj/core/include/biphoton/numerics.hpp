#pragma once

// Generic numerical machinery: adaptive Gauss-Kronrod quadrature, nested 2D
// quadrature over truncated domains, grid scans with extremum refinement and
// golden-section maximization.

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <limits>
#include <span>
#include <thread>
#include <vector>

namespace biphoton {

struct QuadSpec {
  double rel_tol = 1e-9;
  double abs_tol = 1e-15;         ///< in units of the (scaled) integral
  int max_depth = 48;
  double truncation_eps = 1e-12;  ///< envelope-intensity cutoff, relative to peak

  void validate() const;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  bool empty() const { return !(hi > lo); }
};

/// Sorted union of disjoint closed intervals.
class IntervalSet {
 public:
  IntervalSet() = default;
  explicit IntervalSet(Interval iv) { add(iv); }

  void add(Interval iv);
  IntervalSet shifted(double offset) const;
  IntervalSet intersect(const IntervalSet& other) const;
  IntervalSet clipped(Interval window) const;

  bool empty() const { return parts_.empty(); }
  Interval hull() const;
  std::span<const Interval> parts() const { return parts_; }

 private:
  std::vector<Interval> parts_;
};

using Integrand = std::function<double(double)>;
using Integrand2D = std::function<double(double, double)>;

/// Adaptive G10/K21 quadrature on [a, b]. The loop stops when the summed
/// error estimate drops below max(abs_tol, rel_tol * |I|). Throws
/// QuadratureError (carrying the best estimate) when a segment would exceed
/// spec.max_depth bisections.
QuadResult integrate_1d(const Integrand& f, double a, double b, const QuadSpec& spec = {});

/// Same, starting from the consecutive segments between sorted breakpoints.
QuadResult integrate_1d(const Integrand& f, std::span<const double> breakpoints,
                        const QuadSpec& spec = {});

/// Same, over an arbitrary set of disjoint segments; gaps contribute zero.
QuadResult integrate_segments(const Integrand& f, std::span<const Interval> segments,
                              const QuadSpec& spec = {});

/// Outer adaptive pass over [a, b]; for every outer abscissa x the inner
/// integral runs over inner_domain(x), which the caller truncates. Inner
/// passes use a tolerance ten times tighter; the reported error adds the
/// outer estimate and (b - a) times the worst inner estimate.
QuadResult integrate_2d_nested(const Integrand2D& f, double a, double b,
                               const std::function<IntervalSet(double)>& inner_domain,
                               const QuadSpec& spec = {},
                               std::span<const double> outer_breakpoints = {});

/// Split points at the half-periods pi/|omega| of cos(omega t) inside [a, b]
/// when |omega| (b - a) exceeds 10 pi. The result always contains a and b.
std::vector<double> oscillation_breakpoints(double a, double b, double omega);

/// Sorted, de-duplicated union of breakpoint lists clipped to [a, b].
std::vector<double> merge_breakpoints(double a, double b,
                                      std::initializer_list<std::span<const double>> lists);

struct GridSpec {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t n = 2;

  void validate() const;
  double step() const { return (hi - lo) / static_cast<double>(n - 1); }
  double at(std::size_t i) const {
    return i + 1 == n ? hi : lo + static_cast<double>(i) * step();
  }
  std::vector<double> points() const;
};

enum class ExtremumKind { kMinimum, kMaximum, kPlateau };

struct Extremum {
  double location = 0.0;
  double value = 0.0;
  ExtremumKind kind = ExtremumKind::kMinimum;
};

/// Interior local extrema of sampled data. A strict sign change of the
/// discrete slope marks an extremum at that sample; when `f` is given the
/// location is refined by golden-section search on the two neighbouring
/// cells to `refine_tol`. A run of equal samples between opposite slopes is
/// reported as a plateau.
std::vector<Extremum> locate_extrema(std::span<const double> xs, std::span<const double> ys,
                                     const Integrand& f = {}, double refine_tol = 0.0);

/// Samples f on the grid and refines each extremum to 1e-4 of the step.
std::vector<Extremum> scan_extrema(const Integrand& f, const GridSpec& grid);

struct ScalarOptimum {
  double argument = 0.0;
  double value = 0.0;
};

/// Golden-section search for the minimum of f on [a, b].
ScalarOptimum golden_section_minimize(const Integrand& f, double a, double b, double tol);

/// Golden-section maximization of a unimodal f on [a, b]. Throws
/// NotUnimodalError when an interior sample falls below both bracket ends.
ScalarOptimum maximize_scalar(const Integrand& f, double a, double b, double tol);

/// Runs body(i) for i in [0, n) on up to `threads` workers. Each index is
/// processed exactly once and independently, so results written to slot i
/// do not depend on the thread count. The exception from the lowest failing
/// index is rethrown.
template <class Body>
void parallel_for(std::size_t n, unsigned threads, Body&& body) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(threads, n);
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::size_t> error_index(workers, std::numeric_limits<std::size_t>::max());
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < n; i += workers) {
          try {
            body(i);
          } catch (...) {
            errors[w] = std::current_exception();
            error_index[w] = i;
            return;
          }
        }
      });
    }
  }
  std::size_t first = workers;
  for (std::size_t w = 0; w < workers; ++w) {
    if (errors[w] && (first == workers || error_index[w] < error_index[first])) first = w;
  }
  if (first != workers) std::rethrow_exception(errors[first]);
}

}  // namespace biphoton
