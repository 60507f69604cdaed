#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fftw_util.hpp"
#include "gv/spectral.hpp"

namespace gv {

using std::numbers::pi;

void gauss_legendre(int n, std::vector<double>& nodes,
                    std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess for the i-th largest root.
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[n - 1 - i] = x;
    nodes[i] = -x;
    weights[n - 1 - i] = w;
    weights[i] = w;
  }
}

struct SphereBasis::LevelData {
  int nlat = 0;
  int nlon = 0;
  int nfreq = 0;  // nlon / 2 + 1
  // legendre[(j * (L + 1) + m) ...] packed per latitude: for each m, l = m..L
  std::vector<double> legendre;
  std::vector<std::size_t> m_offset;  // start of order m inside a latitude
  std::size_t per_lat = 0;
  std::vector<double> lat_weight;  // GL weight * 2 pi / nlon * R^2
  detail::Plan forward;
  detail::Plan backward;
};

namespace {

// Orthonormal (w.r.t. solid angle) associated Legendre functions
// N_lm(x) for 0 <= m <= l <= L, packed by order then degree.
void fill_legendre(int L, double x, double* out,
                   const std::vector<std::size_t>& m_offset) {
  const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
  double nmm = std::sqrt(1.0 / (4.0 * pi));
  for (int m = 0; m <= L; ++m) {
    if (m > 0) nmm *= -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s;
    double* col = out + m_offset[m];
    col[0] = nmm;
    if (m + 1 <= L) col[1] = std::sqrt(2.0 * m + 3.0) * x * nmm;
    for (int l = m + 2; l <= L; ++l) {
      const double a = std::sqrt((4.0 * l * l - 1.0) / (double(l) * l - double(m) * m));
      const double b = std::sqrt(((l - 1.0) * (l - 1.0) - double(m) * m) /
                                 (4.0 * (l - 1.0) * (l - 1.0) - 1.0));
      col[l - m] = a * (x * col[l - m - 1] - b * col[l - m - 2]);
    }
  }
}

}  // namespace

SphereBasis::SphereBasis(int bandlimit, double volume)
    : bandlimit_(bandlimit), radius_(std::sqrt(volume / (4.0 * pi))) {
  const int L = bandlimit;
  const Eigen::Index count = Eigen::Index(L + 1) * (L + 1);
  degree_.resize(count);
  order_.resize(count);
  parity_.resize(count);
  cos_offset_.assign(L + 1, 0);
  sin_offset_.assign(L + 1, 0);
  eigenvalues_.resize(count);

  Eigen::Index idx = 0;
  for (int m = 0; m <= L; ++m) {
    cos_offset_[m] = idx;
    for (int l = m; l <= L; ++l, ++idx) {
      degree_[idx] = l;
      order_[idx] = m;
      parity_[idx] = 1;
    }
    if (m == 0) continue;
    sin_offset_[m] = idx;
    for (int l = m; l <= L; ++l, ++idx) {
      degree_[idx] = l;
      order_[idx] = m;
      parity_[idx] = -1;
    }
  }
  for (Eigen::Index i = 0; i < count; ++i) {
    const double l = degree_[i];
    eigenvalues_[i] = l * (l + 1.0) / (radius_ * radius_);
  }

  const int fine_L = (3 * L + 1) / 2;
  auto build = [&](int grid_L, QuadratureGrid& grid) {
    auto data = std::make_unique<LevelData>();
    data->nlat = grid_L + 1;
    data->nlon = 2 * grid_L + 2;
    data->nfreq = data->nlon / 2 + 1;
    std::vector<double> x, w;
    gauss_legendre(data->nlat, x, w);
    // Ascending colatitude: x descending.
    std::reverse(x.begin(), x.end());
    std::reverse(w.begin(), w.end());

    data->m_offset.assign(L + 1, 0);
    std::size_t off = 0;
    for (int m = 0; m <= L; ++m) {
      data->m_offset[m] = off;
      off += std::size_t(L - m + 1);
    }
    data->per_lat = off;
    data->legendre.assign(off * data->nlat, 0.0);
    data->lat_weight.resize(data->nlat);
    const double r2 = radius_ * radius_;
    for (int j = 0; j < data->nlat; ++j) {
      fill_legendre(L, x[j], data->legendre.data() + j * off, data->m_offset);
      data->lat_weight[j] = w[j] * 2.0 * pi / data->nlon * r2;
    }

    grid.rows = data->nlat;
    grid.cols = data->nlon;
    const std::size_t n = std::size_t(data->nlat) * data->nlon;
    grid.first.resize(n);
    grid.second.resize(n);
    grid.z.resize(n);
    grid.weights.resize(Eigen::Index(n));
    for (int j = 0; j < data->nlat; ++j) {
      const double theta = std::acos(x[j]);
      for (int k = 0; k < data->nlon; ++k) {
        const std::size_t p = std::size_t(j) * data->nlon + k;
        const double phi = 2.0 * pi * k / data->nlon;
        grid.first[p] = theta;
        grid.second[p] = phi;
        grid.z[p] = std::polar(std::tan(0.5 * theta), phi);
        grid.weights[Eigen::Index(p)] = data->lat_weight[j];
      }
    }

    std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
    auto in = detail::fftw_buffer<double>(n);
    auto out = detail::fftw_buffer<std::complex<double>>(
        std::size_t(data->nlat) * data->nfreq);
    int len[1] = {data->nlon};
    data->forward.reset(fftw_plan_many_dft_r2c(
        1, len, data->nlat, in.get(), nullptr, 1, data->nlon,
        detail::as_fftw(out.get()), nullptr, 1, data->nfreq, FFTW_ESTIMATE));
    data->backward.reset(fftw_plan_many_dft_c2r(
        1, len, data->nlat, detail::as_fftw(out.get()), nullptr, 1,
        data->nfreq, in.get(), nullptr, 1, data->nlon, FFTW_ESTIMATE));
    if (!data->forward || !data->backward)
      throw std::runtime_error("FFTW planning failed");
    return data;
  };
  base_data_ = build(L, base_);
  fine_data_ = build(fine_L, fine_);
}

SphereBasis::~SphereBasis() = default;

const SphereBasis::LevelData& SphereBasis::level_data(Level level) const {
  return level == Level::Base ? *base_data_ : *fine_data_;
}

Eigen::Index SphereBasis::index(int l, int m, int parity) const {
  if (m == 0 || parity > 0) return cos_offset_[m] + (l - m);
  return sin_offset_[m] + (l - m);
}

std::vector<Eigen::Index> SphereBasis::degree_one_modes() const {
  return {index(1, 0), index(1, 1, 1), index(1, 1, -1)};
}

Eigen::VectorXd SphereBasis::analyze(const Eigen::ArrayXd& values,
                                     Level level) const {
  const LevelData& d = level_data(level);
  const int L = bandlimit_;
  const std::size_t n = std::size_t(d.nlat) * d.nlon;
  if (std::size_t(values.size()) != n)
    throw std::invalid_argument("sample count does not match grid");

  auto in = detail::fftw_buffer<double>(n);
  auto out = detail::fftw_buffer<std::complex<double>>(std::size_t(d.nlat) *
                                                       d.nfreq);
  std::copy(values.data(), values.data() + n, in.get());
  fftw_execute_dft_r2c(d.forward.get(), in.get(), detail::as_fftw(out.get()));

  Eigen::VectorXd c = Eigen::VectorXd::Zero(size());
  const double sqrt2 = std::sqrt(2.0);
  for (int j = 0; j < d.nlat; ++j) {
    const double* leg = d.legendre.data() + j * d.per_lat;
    const std::complex<double>* row = out.get() + std::size_t(j) * d.nfreq;
    const double wr = d.lat_weight[j] * radius_ / (radius_ * radius_);
    // c = R * sum w_gl (2pi/nlon) F Y ; lat_weight already carries R^2.
    for (int m = 0; m <= L; ++m) {
      const double* col = leg + d.m_offset[m];
      if (m == 0) {
        const double re = row[0].real() * wr;
        for (int l = 0; l <= L; ++l) c[cos_offset_[0] + l] += col[l] * re;
      } else {
        const double re = sqrt2 * row[m].real() * wr;
        const double im = -sqrt2 * row[m].imag() * wr;
        double* cc = c.data() + cos_offset_[m];
        double* cs = c.data() + sin_offset_[m];
        for (int l = m; l <= L; ++l) {
          cc[l - m] += col[l - m] * re;
          cs[l - m] += col[l - m] * im;
        }
      }
    }
  }
  return c;
}

Eigen::ArrayXd SphereBasis::synthesize(const Eigen::VectorXd& coeffs,
                                       Level level) const {
  const LevelData& d = level_data(level);
  const int L = bandlimit_;
  if (coeffs.size() != size())
    throw std::invalid_argument("coefficient count does not match basis");
  const std::size_t n = std::size_t(d.nlat) * d.nlon;

  auto spec = detail::fftw_buffer<std::complex<double>>(std::size_t(d.nlat) *
                                                        d.nfreq);
  auto out = detail::fftw_buffer<double>(n);
  std::fill(spec.get(), spec.get() + std::size_t(d.nlat) * d.nfreq,
            std::complex<double>(0.0, 0.0));
  const double inv_r = 1.0 / radius_;
  const double half_sqrt2 = std::sqrt(2.0) * 0.5;
  for (int j = 0; j < d.nlat; ++j) {
    const double* leg = d.legendre.data() + j * d.per_lat;
    std::complex<double>* row = spec.get() + std::size_t(j) * d.nfreq;
    for (int m = 0; m <= L; ++m) {
      const double* col = leg + d.m_offset[m];
      if (m == 0) {
        double a = 0.0;
        for (int l = 0; l <= L; ++l) a += col[l] * coeffs[cos_offset_[0] + l];
        row[0] = a * inv_r;
      } else {
        double a = 0.0, b = 0.0;
        const double* cc = coeffs.data() + cos_offset_[m];
        const double* cs = coeffs.data() + sin_offset_[m];
        for (int l = m; l <= L; ++l) {
          a += col[l - m] * cc[l - m];
          b += col[l - m] * cs[l - m];
        }
        row[m] = std::complex<double>(a, -b) * (half_sqrt2 * inv_r);
      }
    }
  }
  fftw_execute_dft_c2r(d.backward.get(), detail::as_fftw(spec.get()),
                       out.get());
  return Eigen::Map<const Eigen::ArrayXd>(out.get(), Eigen::Index(n));
}

}  // namespace gv
