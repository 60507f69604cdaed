#include "gv/radial_ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>

#include "gv/errors.hpp"

namespace gv {

using std::numbers::pi;
namespace odeint = boost::numeric::odeint;

namespace {

using State = std::array<double, 3>;  // f, f', accumulated area weight

struct Rhs {
  int degree;
  double tau, alpha, volume, c_prime;

  void operator()(const State& y, State& dy, double s) const {
    const double sech = 1.0 / std::cosh(s);
    const double sech2 = sech * sech;
    const double psi = std::exp(2.0 * y[0]) * std::pow(sech, degree);
    const double e2u =
        std::exp(2.0 * (2.0 * alpha * tau * y[0] - alpha * psi + c_prime));
    dy[0] = y[1];
    dy[1] = volume / (4.0 * pi) * sech2 *
            (0.5 * e2u * (psi - tau) + 2.0 * pi * degree / volume);
    dy[2] = sech2 * e2u;
  }
};

struct Shot {
  double slope = 0.0;
  double area = 0.0;
  double f_far = 0.0;
};

class Shooter {
 public:
  Shooter(int degree, double tau, double alpha, double volume,
          const RadialOracleOptions& o)
      : degree_(degree), tau_(tau), alpha_(alpha), volume_(volume), o_(o) {}

  Shot shoot(double f0, double cp, const std::vector<double>& times = {},
             std::vector<double>* values = nullptr) const {
    const Rhs rhs{degree_, tau_, alpha_, volume_, cp};
    State y{f0, 0.0, 0.0};
    auto stepper = odeint::make_controlled(o_.tolerance * 1e-2,
                                           o_.tolerance * 1e-2,
                                           odeint::runge_kutta_fehlberg78<State>());
    if (values) {
      std::vector<double> t = times;
      t.insert(t.begin(), 0.0);
      t.push_back(o_.horizon);
      values->clear();
      odeint::integrate_times(stepper, rhs, y, t.begin(), t.end(), 1e-3,
                              [&](const State& st, double) {
                                values->push_back(st[0]);
                              });
    } else {
      odeint::integrate_adaptive(stepper, rhs, y, 0.0, o_.horizon, 1e-3);
    }
    return {y[1], volume_ * y[2], y[0]};
  }

 private:
  int degree_;
  double tau_, alpha_, volume_;
  RadialOracleOptions o_;
};

}  // namespace

RadialProfile radial_ode_oracle(int degree, double tau, double alpha,
                                double volume,
                                const std::vector<double>& samples,
                                const RadialOracleOptions& options) {
  if (degree < 2 || degree % 2 != 0)
    throw ConfigurationError("radial oracle needs an even degree N >= 2");
  if (!(tau > 0.0) || !(volume > 0.0))
    throw ConfigurationError("tau and volume must be positive");
  const Shooter shooter(degree, tau, alpha, volume, options);
  const bool free_cp = !options.c_prime.has_value();

  // Starting point: constant f with u = 0 on average.
  const double mean_density =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
          [&](double s) { return std::pow(1.0 / std::cosh(s), degree + 2); },
          0.0, 40.0);
  const double area = free_cp ? options.target_volume : volume;
  const double level =
      std::max(tau - 4.0 * pi * degree / area, 1e-3 * tau);
  double f0 = 0.5 * std::log(level / mean_density);
  double cp = free_cp ? -2.0 * alpha * tau * f0 + alpha * level
                      : *options.c_prime;

  auto defect = [&](double a, double b) {
    const Shot s = shooter.shoot(a, b);
    return std::array<double, 2>{
        s.slope, free_cp ? (s.area - options.target_volume) / volume : 0.0};
  };
  auto norm = [](const std::array<double, 2>& g) { return std::hypot(g[0], g[1]); };

  std::array<double, 2> g = defect(f0, cp);
  int it = 0;
  const double h = 1e-7;
  for (; it < 100 && norm(g) > options.tolerance; ++it) {
    std::array<double, 2> ga = defect(f0 + h, cp), gb = defect(f0 - h, cp);
    const double j00 = (ga[0] - gb[0]) / (2 * h);
    const double j10 = (ga[1] - gb[1]) / (2 * h);
    double d0, d1 = 0.0;
    if (free_cp) {
      ga = defect(f0, cp + h);
      gb = defect(f0, cp - h);
      const double j01 = (ga[0] - gb[0]) / (2 * h);
      const double j11 = (ga[1] - gb[1]) / (2 * h);
      const double det = j00 * j11 - j01 * j10;
      if (det == 0.0 || !std::isfinite(det)) break;
      d0 = -(j11 * g[0] - j01 * g[1]) / det;
      d1 = -(-j10 * g[0] + j00 * g[1]) / det;
    } else {
      if (j00 == 0.0 || !std::isfinite(j00)) break;
      d0 = -g[0] / j00;
    }
    double t = 1.0;
    bool moved = false;
    while (t > 1e-6) {
      const std::array<double, 2> trial = defect(f0 + t * d0, cp + t * d1);
      if (std::isfinite(norm(trial)) && norm(trial) < norm(g)) {
        f0 += t * d0;
        cp += t * d1;
        g = trial;
        moved = true;
        break;
      }
      t *= 0.5;
    }
    if (!moved) break;
  }
  if (!(norm(g) <= options.tolerance))
    throw ConvergenceFailure("radial shooting did not converge", norm(g), it,
                             {});

  RadialProfile out;
  out.s = samples;
  out.horizon = options.horizon;
  out.c_prime = cp;
  out.f_center = f0;
  out.shooting_iterations = it;

  // integrate once through the sorted |s| and map back to the samples
  std::vector<double> abs_s(samples.size());
  std::transform(samples.begin(), samples.end(), abs_s.begin(),
                 [](double s) { return std::abs(s); });
  std::vector<double> order = abs_s;
  std::sort(order.begin(), order.end());
  order.erase(std::unique(order.begin(), order.end()), order.end());
  order.erase(std::remove_if(order.begin(), order.end(),
                             [&](double s) {
                               return s <= 0.0 || s >= options.horizon;
                             }),
              order.end());
  std::vector<double> values;
  const Shot shot = shooter.shoot(f0, cp, order, &values);
  out.end_slope = shot.slope;
  out.volume = shot.area;
  out.f_far = shot.f_far;
  out.f.resize(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double a = abs_s[i];
    if (a <= 0.0) {
      out.f[i] = f0;
    } else if (a >= options.horizon) {
      out.f[i] = shot.f_far;
    } else {
      const auto pos = std::lower_bound(order.begin(), order.end(), a);
      out.f[i] = values[std::size_t(pos - order.begin()) + 1];
    }
  }
  return out;
}

}  // namespace gv
