#include "biphoton/numerics.hpp"

#include <array>
#include <cmath>
#include <queue>
#include <string>

#include "biphoton/error.hpp"

namespace biphoton {

namespace {

// QUADPACK qk21 abscissae and weights. Odd entries of kXgk are the 10-point
// Gauss nodes.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525420338, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

constexpr double kEpsMach = std::numeric_limits<double>::epsilon();
constexpr double kUnderflow = std::numeric_limits<double>::min();
constexpr std::size_t kMaxSegments = 200000;

struct Segment {
  double a;
  double b;
  double value;
  double error;
  int depth;
  bool at_roundoff = false;  // error is the rounding floor; splitting cannot help
};

struct WorstFirst {
  bool operator()(const Segment& x, const Segment& y) const {
    if (x.error != y.error) return x.error < y.error;
    return x.a > y.a;
  }
};

double checked(double v, double x) {
  if (!std::isfinite(v)) {
    throw NumericalError("integrand is not finite at x = " + std::to_string(x));
  }
  return v;
}

Segment gauss_kronrod21(const Integrand& f, double a, double b, int depth) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = checked(f(center), center);

  double resg = 0.0;
  double resk = kWgk[10] * fc;
  double resabs = std::abs(resk);
  std::array<double, 10> fv1{};
  std::array<double, 10> fv2{};
  for (std::size_t j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    const double x1 = center - dx;
    const double x2 = center + dx;
    fv1[j] = checked(f(x1), x1);
    fv2[j] = checked(f(x2), x2);
    const double sum = fv1[j] + fv2[j];
    resk += kWgk[j] * sum;
    resabs += kWgk[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
    if (j % 2 == 1) resg += kWg[j / 2] * sum;
  }
  const double reskh = 0.5 * resk;
  double resasc = kWgk[10] * std::abs(fc - reskh);
  for (std::size_t j = 0; j < 10; ++j) {
    resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
  }
  const double ahalf = std::abs(half);
  resk *= half;
  resg *= half;
  resabs *= ahalf;
  resasc *= ahalf;

  double err = std::abs(resk - resg);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  bool at_roundoff = false;
  if (resabs > kUnderflow / (50.0 * kEpsMach)) {
    const double floor = 50.0 * kEpsMach * resabs;
    at_roundoff = err <= floor;
    err = std::max(floor, err);
  }
  return Segment{a, b, resk, err, depth, at_roundoff};
}

double sum_values(std::vector<Segment>& segs, double* error) {
  std::sort(segs.begin(), segs.end(), [](const Segment& x, const Segment& y) { return x.a < y.a; });
  double value = 0.0;
  double err = 0.0;
  for (const auto& s : segs) {
    value += s.value;
    err += s.error;
  }
  *error = err;
  return value;
}

}  // namespace

void QuadSpec::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw DomainError("quadrature tolerances must be positive");
  }
  if (max_depth < 1) throw DomainError("quadrature max_depth must be >= 1");
  if (!(truncation_eps > 0.0) || !(truncation_eps < 1.0)) {
    throw DomainError("truncation_eps must lie in (0, 1)");
  }
}

void IntervalSet::add(Interval iv) {
  if (iv.empty()) return;
  std::vector<Interval> merged;
  merged.reserve(parts_.size() + 1);
  bool placed = false;
  for (const auto& p : parts_) {
    if (p.hi < iv.lo) {
      merged.push_back(p);
    } else if (iv.hi < p.lo) {
      if (!placed) {
        merged.push_back(iv);
        placed = true;
      }
      merged.push_back(p);
    } else {
      iv.lo = std::min(iv.lo, p.lo);
      iv.hi = std::max(iv.hi, p.hi);
    }
  }
  if (!placed) merged.push_back(iv);
  parts_ = std::move(merged);
}

IntervalSet IntervalSet::shifted(double offset) const {
  IntervalSet out;
  out.parts_.reserve(parts_.size());
  for (const auto& p : parts_) out.parts_.push_back({p.lo + offset, p.hi + offset});
  return out;
}

IntervalSet IntervalSet::intersect(const IntervalSet& other) const {
  IntervalSet out;
  for (const auto& p : parts_) {
    for (const auto& q : other.parts_) {
      Interval iv{std::max(p.lo, q.lo), std::min(p.hi, q.hi)};
      if (!iv.empty()) out.add(iv);
    }
  }
  return out;
}

IntervalSet IntervalSet::clipped(Interval window) const { return intersect(IntervalSet(window)); }

Interval IntervalSet::hull() const {
  if (parts_.empty()) return {};
  return {parts_.front().lo, parts_.back().hi};
}

QuadResult integrate_segments(const Integrand& f, std::span<const Interval> segments,
                              const QuadSpec& spec) {
  spec.validate();
  std::priority_queue<Segment, std::vector<Segment>, WorstFirst> heap;
  std::vector<Segment> done;
  QuadResult result;
  double total = 0.0;
  double total_err = 0.0;

  for (const auto& iv : segments) {
    if (!(iv.hi > iv.lo)) continue;
    Segment s = gauss_kronrod21(f, iv.lo, iv.hi, 0);
    result.evaluations += 21;
    total += s.value;
    total_err += s.error;
    heap.push(s);
  }

  std::size_t iterations = 0;
  while (!heap.empty()) {
    const double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
    if (total_err <= tol) break;

    Segment worst = heap.top();
    if (worst.at_roundoff) {
      heap.pop();
      done.push_back(worst);
      continue;
    }
    const double mid = 0.5 * (worst.a + worst.b);
    const bool too_narrow = !(mid > worst.a && mid < worst.b);
    if (worst.depth >= spec.max_depth || too_narrow ||
        heap.size() + done.size() >= kMaxSegments) {
      std::vector<Segment> all = std::move(done);
      while (!heap.empty()) {
        all.push_back(heap.top());
        heap.pop();
      }
      double err = 0.0;
      const double best = sum_values(all, &err);
      throw QuadratureError("adaptive quadrature exhausted subdivision depth on [" +
                                std::to_string(worst.a) + ", " + std::to_string(worst.b) +
                                "]; achieved error " + std::to_string(err),
                            best, err);
    }
    heap.pop();
    Segment left = gauss_kronrod21(f, worst.a, mid, worst.depth + 1);
    Segment right = gauss_kronrod21(f, mid, worst.b, worst.depth + 1);
    result.evaluations += 42;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);

    // Running sums drift when errors span many decades; refresh them.
    if (++iterations % 64 == 0) {
      auto copy = heap;
      total = 0.0;
      total_err = 0.0;
      while (!copy.empty()) {
        total += copy.top().value;
        total_err += copy.top().error;
        copy.pop();
      }
      for (const auto& s : done) {
        total += s.value;
        total_err += s.error;
      }
    }
  }

  std::vector<Segment> all = std::move(done);
  while (!heap.empty()) {
    all.push_back(heap.top());
    heap.pop();
  }
  result.value = sum_values(all, &result.error);
  return result;
}

QuadResult integrate_1d(const Integrand& f, std::span<const double> breakpoints,
                        const QuadSpec& spec) {
  if (breakpoints.size() < 2) return {};
  std::vector<Interval> segs;
  segs.reserve(breakpoints.size() - 1);
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (breakpoints[i + 1] < breakpoints[i]) {
      throw DomainError("quadrature breakpoints must be sorted");
    }
    segs.push_back({breakpoints[i], breakpoints[i + 1]});
  }
  return integrate_segments(f, segs, spec);
}

QuadResult integrate_1d(const Integrand& f, double a, double b, const QuadSpec& spec) {
  if (b < a) throw DomainError("integrate_1d requires a <= b");
  const Interval iv{a, b};
  return integrate_segments(f, std::span<const Interval>(&iv, 1), spec);
}

QuadResult integrate_2d_nested(const Integrand2D& f, double a, double b,
                               const std::function<IntervalSet(double)>& inner_domain,
                               const QuadSpec& spec, std::span<const double> outer_breakpoints) {
  if (b < a) throw DomainError("integrate_2d_nested requires a <= b");
  if (!(b > a)) return {};
  QuadSpec inner = spec;
  inner.rel_tol = 0.1 * spec.rel_tol;
  inner.abs_tol = 0.1 * spec.abs_tol;

  double worst_inner = 0.0;
  std::size_t inner_evals = 0;
  const Integrand outer = [&](double x) {
    const IntervalSet dom = inner_domain(x);
    if (dom.empty()) return 0.0;
    const QuadResult r =
        integrate_segments([&](double y) { return f(x, y); }, dom.parts(), inner);
    worst_inner = std::max(worst_inner, r.error);
    inner_evals += r.evaluations;
    return r.value;
  };

  QuadResult r;
  if (outer_breakpoints.empty()) {
    r = integrate_1d(outer, a, b, spec);
  } else {
    const double ab[2] = {a, b};
    const auto pts = merge_breakpoints(a, b, {std::span<const double>(ab), outer_breakpoints});
    r = integrate_1d(outer, pts, spec);
  }
  r.error += (b - a) * worst_inner;
  r.evaluations += inner_evals;
  return r;
}

std::vector<double> oscillation_breakpoints(double a, double b, double omega) {
  std::vector<double> pts{a};
  const double w = std::abs(omega);
  if (w * (b - a) > 10.0 * 3.14159265358979323846) {
    const double half_period = 3.14159265358979323846 / w;
    const double k0 = std::floor(a / half_period) + 1.0;
    for (double k = k0;; k += 1.0) {
      const double x = k * half_period;
      if (!(x < b)) break;
      if (x > a) pts.push_back(x);
    }
  }
  pts.push_back(b);
  return pts;
}

std::vector<double> merge_breakpoints(double a, double b,
                                      std::initializer_list<std::span<const double>> lists) {
  std::vector<double> pts{a, b};
  for (const auto& list : lists) {
    for (double x : list) {
      if (x > a && x < b) pts.push_back(x);
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

void GridSpec::validate() const {
  if (n < 2) throw DomainError("grid needs at least 2 points");
  if (!(lo < hi)) throw DomainError("grid requires lo < hi");
}

std::vector<double> GridSpec::points() const {
  validate();
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i) xs[i] = at(i);
  return xs;
}

ScalarOptimum golden_section_minimize(const Integrand& f, double a, double b, double tol) {
  constexpr double kInvPhi = 0.6180339887498948482;
  if (b < a) std::swap(a, b);
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? ScalarOptimum{c, fc} : ScalarOptimum{d, fd};
}

ScalarOptimum maximize_scalar(const Integrand& f, double a, double b, double tol) {
  constexpr double kInvPhi = 0.6180339887498948482;
  if (b < a) std::swap(a, b);
  if (!(tol > 0.0)) throw DomainError("maximize_scalar requires tol > 0");
  double fa = f(a);
  double fb = f(b);
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  const auto check = [](double inner, double lo_end, double hi_end, double x) {
    if (inner < lo_end && inner < hi_end) {
      throw NotUnimodalError("function is not unimodal on the bracket (interior sample at " +
                             std::to_string(x) + " below both ends); re-bracket");
    }
  };
  check(fc, fa, fb, c);
  check(fd, fa, fb, d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      fb = fd;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
      check(fc, fa, fb, c);
    } else {
      a = c;
      fa = fc;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
      check(fd, fa, fb, d);
    }
  }
  ScalarOptimum best{a, fa};
  for (auto [x, v] : {std::pair{c, fc}, std::pair{d, fd}, std::pair{b, fb}}) {
    if (v > best.value) best = {x, v};
  }
  return best;
}

std::vector<Extremum> locate_extrema(std::span<const double> xs, std::span<const double> ys,
                                     const Integrand& f, double refine_tol) {
  if (xs.size() != ys.size()) throw DomainError("locate_extrema: size mismatch");
  std::vector<Extremum> out;
  const std::size_t n = xs.size();
  if (n < 3) return out;

  int last_sign = 0;
  std::size_t last_index = 0;  // index of the slope that set last_sign
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double dy = ys[k + 1] - ys[k];
    const int s = (dy > 0.0) - (dy < 0.0);
    if (s == 0) continue;
    if (last_sign != 0 && s != last_sign) {
      if (last_index + 1 == k) {
        const bool is_max = last_sign > 0;
        Extremum e{xs[k], ys[k], is_max ? ExtremumKind::kMaximum : ExtremumKind::kMinimum};
        if (f) {
          const double sign = is_max ? -1.0 : 1.0;
          const auto opt = golden_section_minimize([&](double x) { return sign * f(x); },
                                                   xs[k - 1], xs[k + 1], refine_tol);
          if (sign * opt.value <= sign * e.value) {
            e.location = opt.argument;
            e.value = sign * opt.value;
          }
        }
        out.push_back(e);
      } else {
        const std::size_t mid = (last_index + 1 + k) / 2;
        out.push_back({0.5 * (xs[last_index + 1] + xs[k]), ys[mid], ExtremumKind::kPlateau});
      }
    }
    last_sign = s;
    last_index = k;
  }
  return out;
}

std::vector<Extremum> scan_extrema(const Integrand& f, const GridSpec& grid) {
  const auto xs = grid.points();
  std::vector<double> ys(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) ys[i] = f(xs[i]);
  return locate_extrema(xs, ys, f, 1e-4 * grid.step());
}

}  // namespace biphoton
