#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fftw_util.hpp"
#include "gv/spectral.hpp"

namespace gv {

using std::numbers::pi;

struct TorusBasis::LevelData {
  int m = 0;  // points per side
  detail::Plan forward;
  detail::Plan backward;
};

TorusBasis::TorusBasis(int n, std::complex<double> modulus, double volume)
    : n_(n),
      modulus_(modulus),
      volume_(volume),
      scale_(std::sqrt(volume / modulus.imag())) {
  const int kmax = n / 2 - 1;
  for (int k = 0; k <= kmax; ++k) {
    for (int l = -kmax; l <= kmax; ++l) {
      if (k == 0 && l <= 0) continue;
      pair_k_.push_back(k);
      pair_l_.push_back(l);
    }
  }
  const Eigen::Index count = 1 + 2 * Eigen::Index(pair_k_.size());
  eigenvalues_.resize(count);
  eigenvalues_[0] = 0.0;
  const double tr = modulus.real(), ti = modulus.imag();
  const double factor = 4.0 * pi * pi / (scale_ * scale_);
  for (std::size_t p = 0; p < pair_k_.size(); ++p) {
    const double k = pair_k_[p], l = pair_l_[p];
    const double ky = (l - tr * k) / ti;
    const double ev = factor * (k * k + ky * ky);
    eigenvalues_[1 + 2 * Eigen::Index(p)] = ev;
    eigenvalues_[2 + 2 * Eigen::Index(p)] = ev;
  }

  auto build = [&](int m, QuadratureGrid& grid) {
    auto data = std::make_unique<LevelData>();
    data->m = m;
    grid.rows = m;
    grid.cols = m;
    const std::size_t total = std::size_t(m) * m;
    grid.first.resize(total);
    grid.second.resize(total);
    grid.z.resize(total);
    grid.weights = Eigen::ArrayXd::Constant(Eigen::Index(total), volume / double(total));
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        const std::size_t p = std::size_t(i) * m + j;
        const double a = double(i) / m, b = double(j) / m;
        grid.first[p] = a;
        grid.second[p] = b;
        grid.z[p] = a + b * modulus;
      }
    }
    std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
    auto buf = detail::fftw_buffer<std::complex<double>>(total);
    data->forward.reset(fftw_plan_dft_2d(m, m, detail::as_fftw(buf.get()),
                                         detail::as_fftw(buf.get()),
                                         FFTW_FORWARD, FFTW_ESTIMATE));
    data->backward.reset(fftw_plan_dft_2d(m, m, detail::as_fftw(buf.get()),
                                          detail::as_fftw(buf.get()),
                                          FFTW_BACKWARD, FFTW_ESTIMATE));
    if (!data->forward || !data->backward)
      throw std::runtime_error("FFTW planning failed");
    return data;
  };
  base_data_ = build(n, base_);
  fine_data_ = build((3 * n) / 2, fine_);
}

TorusBasis::~TorusBasis() = default;

const TorusBasis::LevelData& TorusBasis::level_data(Level level) const {
  return level == Level::Base ? *base_data_ : *fine_data_;
}

Eigen::VectorXd TorusBasis::analyze(const Eigen::ArrayXd& values,
                                    Level level) const {
  const LevelData& d = level_data(level);
  const int m = d.m;
  const std::size_t total = std::size_t(m) * m;
  if (std::size_t(values.size()) != total)
    throw std::invalid_argument("sample count does not match grid");
  auto buf = detail::fftw_buffer<std::complex<double>>(total);
  for (std::size_t p = 0; p < total; ++p) buf[p] = values[Eigen::Index(p)];
  fftw_execute_dft(d.forward.get(), detail::as_fftw(buf.get()),
                   detail::as_fftw(buf.get()));

  auto at = [&](int k, int l) {
    return buf[std::size_t((k % m + m) % m) * m + std::size_t((l % m + m) % m)];
  };
  Eigen::VectorXd c(size());
  const double norm = double(total);
  c[0] = std::sqrt(volume_) / norm * at(0, 0).real();
  const double s = std::sqrt(2.0 * volume_) / norm;
  for (std::size_t p = 0; p < pair_k_.size(); ++p) {
    const std::complex<double> f = at(pair_k_[p], pair_l_[p]);
    c[1 + 2 * Eigen::Index(p)] = s * f.real();
    c[2 + 2 * Eigen::Index(p)] = -s * f.imag();
  }
  return c;
}

Eigen::ArrayXd TorusBasis::synthesize(const Eigen::VectorXd& coeffs,
                                      Level level) const {
  const LevelData& d = level_data(level);
  const int m = d.m;
  if (coeffs.size() != size())
    throw std::invalid_argument("coefficient count does not match basis");
  const std::size_t total = std::size_t(m) * m;
  auto buf = detail::fftw_buffer<std::complex<double>>(total);
  std::fill(buf.get(), buf.get() + total, std::complex<double>(0.0, 0.0));
  auto at = [&](int k, int l) -> std::complex<double>& {
    return buf[std::size_t((k % m + m) % m) * m + std::size_t((l % m + m) % m)];
  };
  at(0, 0) = coeffs[0] / std::sqrt(volume_);
  const double s = 1.0 / std::sqrt(2.0 * volume_);
  for (std::size_t p = 0; p < pair_k_.size(); ++p) {
    const std::complex<double> g(coeffs[1 + 2 * Eigen::Index(p)] * s,
                                 -coeffs[2 + 2 * Eigen::Index(p)] * s);
    at(pair_k_[p], pair_l_[p]) = g;
    at(-pair_k_[p], -pair_l_[p]) = std::conj(g);
  }
  fftw_execute_dft(d.backward.get(), detail::as_fftw(buf.get()),
                   detail::as_fftw(buf.get()));
  Eigen::ArrayXd out(static_cast<Eigen::Index>(total));
  for (std::size_t p = 0; p < total; ++p) out[Eigen::Index(p)] = buf[p].real();
  return out;
}

}  // namespace gv
