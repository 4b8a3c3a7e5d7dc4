#include "fxt_mvi/prox.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace fxt_mvi {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream os;
    os << what << " must be positive and finite, got " << v;
    throw Error(ErrorCode::invalid_argument, os.str());
  }
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

Vector prox_l1(const Vector& x, double tau) {
  require_positive(tau, "prox_l1 tau");
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double shrunk = std::abs(x[i]) - tau;
    r[i] = shrunk > 0.0 ? std::copysign(shrunk, x[i]) : 0.0;
  }
  return Vector(std::move(r));
}

Vector project_ball(const Vector& x, const Vector& center, double radius) {
  require_positive(radius, "ball radius");
  require_same_dimension(x, center, "project_ball");
  const Vector d = x - center;
  const double n = euclidean_norm(d);
  if (n <= radius) return x;
  // Pull the result inside the ball as measured by euclidean_norm, so that
  // projecting it again returns it unchanged.
  double s = radius / n;
  Vector p = center + s * d;
  while (distance(p, center) > radius) {
    s = std::nextafter(s, 0.0);
    p = center + s * d;
  }
  return p;
}

Vector project_box(const Vector& x, const Vector& lo, const Vector& hi) {
  require_same_dimension(x, lo, "project_box");
  require_same_dimension(lo, hi, "project_box");
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (lo[i] > hi[i]) {
      throw Error(ErrorCode::invalid_argument, "box lower bound exceeds upper bound");
    }
    r[i] = std::min(std::max(x[i], lo[i]), hi[i]);
  }
  return Vector(std::move(r));
}

Vector prox_oracle_separable(const std::function<double(double)>& g_1d, const Vector& x,
                             double tau) {
  require_positive(tau, "oracle tau");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    auto g_checked = [&](double y) {
      const double g = g_1d(y);
      if (!std::isfinite(g)) {
        std::ostringstream os;
        os << "g_1d returned a non-finite value at y = " << y;
        throw Error(ErrorCode::non_finite, os.str());
      }
      return g;
    };
    // objective(u) - objective(v), formed term by term so that the comparison
    // stays meaningful after the quadratic part drops below one ulp of the
    // objective value.
    auto difference = [&](double u, double gu, double v, double gv) {
      return tau * (gu - gv) + 0.5 * (v - u) * ((xi - u) + (xi - v));
    };
    const double half = 10.0 * tau * (1.0 + std::abs(xi));
    double lo = xi - half;
    double hi = xi + half;
    double m1 = hi - inv_phi * (hi - lo);
    double m2 = lo + inv_phi * (hi - lo);
    double g1 = g_checked(m1);
    double g2 = g_checked(m2);
    while (hi - lo > 1e-10) {
      if (difference(m1, g1, m2, g2) <= 0.0) {
        hi = m2;
        m2 = m1;
        g2 = g1;
        m1 = hi - inv_phi * (hi - lo);
        g1 = g_checked(m1);
      } else {
        lo = m1;
        m1 = m2;
        g1 = g2;
        m2 = lo + inv_phi * (hi - lo);
        g2 = g_checked(m2);
      }
    }
    out[i] = 0.5 * (lo + hi);
  }
  return Vector(std::move(out));
}

ProxHandle ProxHandle::l1(double weight) {
  require_positive(weight, "l1 weight");
  return ProxHandle(L1{weight});
}

ProxHandle ProxHandle::ball(Vector center, double radius) {
  require_positive(radius, "ball radius");
  return ProxHandle(Ball{std::move(center), radius});
}

ProxHandle ProxHandle::box(Vector lower, Vector upper) {
  require_same_dimension(lower, upper, "box bounds");
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (lower[i] > upper[i]) {
      throw Error(ErrorCode::invalid_argument, "box lower bound exceeds upper bound");
    }
  }
  return ProxHandle(Box{std::move(lower), std::move(upper)});
}

ProxHandle ProxHandle::zero() { return ProxHandle(Zero{}); }

Vector ProxHandle::operator()(double tau, const Vector& x) const {
  require_positive(tau, "prox parameter tau");
  return std::visit(overloaded{
                        [&](const L1& k) { return prox_l1(x, tau * k.weight); },
                        [&](const Ball& k) { return project_ball(x, k.center, k.radius); },
                        [&](const Box& k) { return project_box(x, k.lower, k.upper); },
                        [&](const Zero&) { return prox_zero(x); },
                    },
                    kind_);
}

double ProxHandle::value(const Vector& x) const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return std::visit(overloaded{
                        [&](const L1& k) {
                          double s = 0.0;
                          for (double v : x) s += std::abs(v);
                          return k.weight * s;
                        },
                        [&](const Ball& k) {
                          return distance(x, k.center) <= k.radius ? 0.0 : inf;
                        },
                        [&](const Box& k) {
                          require_same_dimension(x, k.lower, "box indicator");
                          for (std::size_t i = 0; i < x.size(); ++i) {
                            if (x[i] < k.lower[i] || x[i] > k.upper[i]) return inf;
                          }
                          return 0.0;
                        },
                        [&](const Zero&) { return 0.0; },
                    },
                    kind_);
}

const char* ProxHandle::kind_name() const {
  return std::visit(overloaded{
                        [](const L1&) { return "l1"; },
                        [](const Ball&) { return "ball_indicator"; },
                        [](const Box&) { return "box_indicator"; },
                        [](const Zero&) { return "zero"; },
                    },
                    kind_);
}

}  // namespace fxt_mvi
