#include "optomech/fit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "optomech/synth.hpp"

namespace optomech {

namespace {

using Vec4 = std::array<double, 4>;
using Mat4 = std::array<double, 16>;  // row-major

// Flat index of the upper triangle of a symmetric 4x4:
// (0,0)(0,1)(0,2)(0,3)(1,1)(1,2)(1,3)(2,2)(2,3)(3,3)
constexpr int kTri[4][4] = {{0, 1, 2, 3}, {1, 4, 5, 6}, {2, 5, 7, 8}, {3, 6, 8, 9}};

bool cholesky(const Mat4& a, Mat4& l) {
  l.fill(0.0);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = a[i * 4 + j];
      for (int k = 0; k < j; ++k) s -= l[i * 4 + k] * l[j * 4 + k];
      if (i == j) {
        if (!(s > 0) || !std::isfinite(s)) return false;
        l[i * 4 + i] = std::sqrt(s);
      } else {
        l[i * 4 + j] = s / l[j * 4 + j];
      }
    }
  }
  return true;
}

Vec4 cholesky_solve(const Mat4& l, const Vec4& b) {
  Vec4 y{};
  for (int i = 0; i < 4; ++i) {
    double s = b[i];
    for (int k = 0; k < i; ++k) s -= l[i * 4 + k] * y[k];
    y[i] = s / l[i * 4 + i];
  }
  Vec4 x{};
  for (int i = 3; i >= 0; --i) {
    double s = y[i];
    for (int k = i + 1; k < 4; ++k) s -= l[k * 4 + i] * x[k];
    x[i] = s / l[i * 4 + i];
  }
  return x;
}

Mat4 cholesky_inverse(const Mat4& l) {
  Mat4 inv{};
  for (int c = 0; c < 4; ++c) {
    Vec4 e{};
    e[c] = 1.0;
    const Vec4 col = cholesky_solve(l, e);
    for (int r = 0; r < 4; ++r) inv[r * 4 + c] = col[r];
  }
  return inv;
}

Mat4 mat_mul(const Mat4& a, const Mat4& b) {
  Mat4 c{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      double s = 0;
      for (int k = 0; k < 4; ++k) s += a[i * 4 + k] * b[k * 4 + j];
      c[i * 4 + j] = s;
    }
  }
  return c;
}

// Internal parameterization q = {floor, ln height, center, ln linewidth},
// with floor/height in units of the data maximum.
struct Problem {
  std::span<const double> freqs;
  const std::vector<double>& y;  // values scaled by 1/vmax
  Exec exec;

  double cost(const Vec4& q) const {
    const double h = std::exp(q[1]);
    const double g = std::exp(q[3]);
    const double f0 = q[2];
    const double b = q[0];
    auto acc = blocked_sum<1>(y.size(), exec, [&](std::size_t lo, std::size_t hi, double* a) {
      for (std::size_t k = lo; k < hi; ++k) {
        const double z = 2.0 * (freqs[k] - f0) / g;
        const double lor = 1.0 / (1.0 + z * z);
        const double r = b + h * lor - y[k];
        a[0] += r * r;
      }
    });
    return acc[0];
  }

  // [0..9] upper triangle of JtJ, [10..13] Jt r, [14] sum r^2.
  std::array<double, 15> normal_equations(const Vec4& q) const {
    const double h = std::exp(q[1]);
    const double g = std::exp(q[3]);
    const double f0 = q[2];
    const double b = q[0];
    return blocked_sum<15>(y.size(), exec, [&](std::size_t lo, std::size_t hi, double* a) {
      for (std::size_t k = lo; k < hi; ++k) {
        const double z = 2.0 * (freqs[k] - f0) / g;
        const double lor = 1.0 / (1.0 + z * z);
        const double hl = h * lor;
        const double r = b + hl - y[k];
        const double j1 = hl;                     // d/d(ln height)
        const double j2 = 4.0 * z * lor * hl / g; // d/d(center)
        const double j3 = 2.0 * z * z * lor * hl; // d/d(ln linewidth)
        a[0] += 1.0;
        a[1] += j1;
        a[2] += j2;
        a[3] += j3;
        a[4] += j1 * j1;
        a[5] += j1 * j2;
        a[6] += j1 * j3;
        a[7] += j2 * j2;
        a[8] += j2 * j3;
        a[9] += j3 * j3;
        a[10] += r;
        a[11] += j1 * r;
        a[12] += j2 * r;
        a[13] += j3 * r;
        a[14] += r * r;
      }
    });
  }

  // Jt Sigma J with Sigma = diag((rel_sd * model)^2), upper triangle.
  std::array<double, 10> weighted_cross(const Vec4& q, double rel_sd) const {
    const double h = std::exp(q[1]);
    const double g = std::exp(q[3]);
    const double f0 = q[2];
    const double b = q[0];
    return blocked_sum<10>(y.size(), exec, [&](std::size_t lo, std::size_t hi, double* a) {
      for (std::size_t k = lo; k < hi; ++k) {
        const double z = 2.0 * (freqs[k] - f0) / g;
        const double lor = 1.0 / (1.0 + z * z);
        const double hl = h * lor;
        const double model = b + hl;
        const double sig = rel_sd * model;
        const double w = sig * sig;
        const double j1 = hl;
        const double j2 = 4.0 * z * lor * hl / g;
        const double j3 = 2.0 * z * z * lor * hl;
        a[0] += w;
        a[1] += j1 * w;
        a[2] += j2 * w;
        a[3] += j3 * w;
        a[4] += j1 * j1 * w;
        a[5] += j1 * j2 * w;
        a[6] += j1 * j3 * w;
        a[7] += j2 * j2 * w;
        a[8] += j2 * j3 * w;
        a[9] += j3 * j3 * w;
      }
    });
  }
};

Mat4 upper_to_full(const double* tri) {
  Mat4 m{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) m[i * 4 + j] = tri[kTri[i][j]];
  }
  return m;
}

// Inverse of a symmetric PSD matrix via diagonal equilibration, with an
// escalating ridge so the routine always returns something usable even for
// nearly singular normal matrices (flat-spectrum fits).
Mat4 robust_inverse(const Mat4& a) {
  Vec4 d{};
  for (int j = 0; j < 4; ++j) d[j] = 1.0 / std::sqrt(std::max(a[j * 4 + j], 1e-30));
  Mat4 ahat{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) ahat[i * 4 + j] = a[i * 4 + j] * d[i] * d[j];
  }
  Mat4 l{};
  double ridge = 0.0;
  for (;;) {
    Mat4 m = ahat;
    for (int j = 0; j < 4; ++j) m[j * 4 + j] += ridge;
    if (cholesky(m, l)) break;
    ridge = ridge == 0.0 ? 1e-12 : ridge * 100.0;
  }
  const Mat4 hinv = cholesky_inverse(l);
  Mat4 inv{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) inv[i * 4 + j] = d[i] * hinv[i * 4 + j] * d[j];
  }
  return inv;
}

void check_grid(std::span<const double> freqs, std::span<const double> values) {
  if (freqs.size() != values.size()) {
    throw std::invalid_argument("fit input arrays differ in length");
  }
  if (freqs.size() < 50) throw std::invalid_argument("lorentzian fit needs at least 50 bins");
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    if (!std::isfinite(freqs[i]) || !std::isfinite(values[i])) {
      throw std::invalid_argument("fit input must be finite");
    }
    if (i > 0 && !(freqs[i] > freqs[i - 1])) {
      throw std::invalid_argument("fit grid must increase strictly");
    }
  }
}

}  // namespace

LorentzianFit initial_guess(std::span<const double> freqs_hz, std::span<const double> values) {
  check_grid(freqs_hz, values);
  const std::size_t n = values.size();

  std::vector<double> tmp(values.begin(), values.end());
  const std::size_t mid = n / 2;
  std::nth_element(tmp.begin(), tmp.begin() + mid, tmp.end());
  double median = tmp[mid];
  if (n % 2 == 0) {
    const double below = *std::max_element(tmp.begin(), tmp.begin() + mid);
    median = 0.5 * (median + below);
  }

  std::size_t imax = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (values[i] > values[imax]) imax = i;  // ties keep the lower frequency
  }

  const double span = freqs_hz.back() - freqs_hz.front();
  LorentzianFit guess;
  guess.floor = median;
  guess.center = freqs_hz[imax];
  guess.height = values[imax] - median;

  double width = span / 100.0;
  if (guess.height > 0) {
    const double thresh = median + 0.5 * guess.height;
    std::size_t j = imax;
    while (j > 0 && values[j - 1] > thresh) --j;
    std::size_t k = imax;
    while (k + 1 < n && values[k + 1] > thresh) ++k;
    const bool left_ok = j > 0;
    const bool right_ok = k + 1 < n;
    if (left_ok && right_ok) {
      const double xl = freqs_hz[j - 1] + (thresh - values[j - 1]) *
                                              (freqs_hz[j] - freqs_hz[j - 1]) /
                                              (values[j] - values[j - 1]);
      const double xr = freqs_hz[k] + (values[k] - thresh) * (freqs_hz[k + 1] - freqs_hz[k]) /
                                          (values[k] - values[k + 1]);
      if (xr > xl) width = xr - xl;
    }
  }
  guess.linewidth = width;
  return guess;
}

LorentzianFit initial_guess(const Spectrum& spec) {
  spec.validate();
  return initial_guess(spec.freqs_hz, spec.values);
}

LorentzianFit fit_lorentzian(std::span<const double> freqs_hz, std::span<const double> values,
                             const FitOptions& options, const std::optional<LorentzianFit>& init,
                             Exec exec) {
  check_grid(freqs_hz, values);
  const std::size_t n = values.size();

  double vmax = 0;
  for (double v : values) vmax = std::max(vmax, std::abs(v));
  if (!(vmax > 0)) throw std::invalid_argument("degenerate spectrum: all values are zero");

  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = values[i] / vmax;
  const Problem prob{freqs_hz, y, exec};

  const LorentzianFit start = init ? *init : initial_guess(freqs_hz, values);
  double h0 = start.height / vmax;
  if (!(h0 > 0) || !std::isfinite(h0)) h0 = 1e-6;
  double f00 = std::clamp(start.center, freqs_hz.front(), freqs_hz.back());
  double w0 = start.linewidth;
  if (!(w0 > 0) || !std::isfinite(w0)) w0 = (freqs_hz.back() - freqs_hz.front()) / 100.0;
  Vec4 q{start.floor / vmax, std::log(h0), f00, std::log(w0)};
  if (!std::isfinite(q[0])) q[0] = 0.0;

  double lambda = 1e-3;
  bool converged = false;
  int iters_used = 0;

  for (int iter = 1; iter <= options.max_iter; ++iter) {
    iters_used = iter;
    const auto ne = prob.normal_equations(q);
    const double ssr = ne[14];
    const Mat4 a = upper_to_full(ne.data());

    Vec4 d{};
    for (int j = 0; j < 4; ++j) d[j] = 1.0 / std::sqrt(std::max(a[j * 4 + j], 1e-30));
    Mat4 ahat{};
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) ahat[i * 4 + j] = a[i * 4 + j] * d[i] * d[j];
    }
    Vec4 ghat{};
    for (int j = 0; j < 4; ++j) ghat[j] = -ne[10 + j] * d[j];

    bool stuck = false;
    for (;;) {
      Mat4 m = ahat;
      for (int j = 0; j < 4; ++j) m[j * 4 + j] += lambda;
      Mat4 l{};
      if (cholesky(m, l)) {
        const Vec4 dh = cholesky_solve(l, ghat);
        Vec4 delta{};
        Vec4 trial{};
        for (int j = 0; j < 4; ++j) {
          delta[j] = dh[j] * d[j];
          trial[j] = q[j] + delta[j];
        }
        const double trial_cost = prob.cost(trial);
        if (std::isfinite(trial_cost) && trial_cost <= ssr) {
          double rel_step = 0;
          for (int j = 0; j < 4; ++j) {
            rel_step = std::max(rel_step, std::abs(delta[j]) / std::max(std::abs(trial[j]), 1.0));
          }
          const double rel_dec = (ssr - trial_cost) / std::max(ssr, 1e-300);
          q = trial;
          lambda = std::max(lambda * 0.1, 1e-12);
          if (rel_step < options.step_tol || rel_dec < options.cost_tol) converged = true;
          break;
        }
      }
      lambda *= 10.0;
      if (lambda > 1e15) {
        stuck = true;  // no acceptable step at any damping: stop unconverged
        break;
      }
    }
    if (stuck || converged) break;
  }

  LorentzianFit fit;
  const double height_scaled = std::exp(q[1]);
  fit.floor = q[0] * vmax;
  fit.height = height_scaled * vmax;
  fit.center = q[2];
  fit.linewidth = std::exp(q[3]);
  fit.n_iter = iters_used;
  fit.converged = converged && std::isfinite(fit.floor) && std::isfinite(fit.height) &&
                  std::isfinite(fit.center) && std::isfinite(fit.linewidth);

  const auto ne_final = prob.normal_equations(q);
  fit.residual_norm = std::sqrt(ne_final[14] / static_cast<double>(n)) / height_scaled;

  const Mat4 a = upper_to_full(ne_final.data());
  const Mat4 ainv = robust_inverse(a);
  Mat4 cov_int{};
  if (options.rel_bin_sd > 0) {
    const auto bw = prob.weighted_cross(q, options.rel_bin_sd);
    cov_int = mat_mul(ainv, mat_mul(upper_to_full(bw.data()), ainv));
  } else {
    const double s2 = ne_final[14] / std::max(1.0, static_cast<double>(n) - 4.0);
    for (int i = 0; i < 16; ++i) cov_int[i] = s2 * ainv[i];
  }
  // Map from internal {floor/vmax, ln h, f0, ln w} to reported linear space.
  const Vec4 t{vmax, fit.height, 1.0, fit.linewidth};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const double sym = 0.5 * (cov_int[i * 4 + j] + cov_int[j * 4 + i]);
      fit.covariance[i][j] = sym * (t[i] * t[j]);
    }
  }
  return fit;
}

LorentzianFit fit_lorentzian(const Spectrum& spec, const std::optional<LorentzianFit>& init,
                             Exec exec) {
  spec.validate();
  FitOptions options;
  options.rel_bin_sd = relative_bin_sd(spec.n_avg);
  return fit_lorentzian(spec.freqs_hz, spec.values, options, init, exec);
}

bool linewidth_guard(const LorentzianFit& fit, const OptomechSystem& sys) {
  sys.validate();
  if (!fit.converged) {
    throw std::invalid_argument("linewidth guard requires a converged fit");
  }
  return std::abs(fit.linewidth - sys.mech_linewidth_hz) <= 0.05 * sys.mech_linewidth_hz;
}

}  // namespace optomech
