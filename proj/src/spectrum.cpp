#include "mcp/spectrum.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mcp::dyn {

std::string to_string(Signal s) { return s == Signal::CenterOfMass ? "com" : "site-summed"; }

Signal signal_from_string(const std::string& s) {
  if (s == "com") return Signal::CenterOfMass;
  if (s == "site-summed") return Signal::SiteSummed;
  throw ModelError("unknown signal '" + s + "' (expected com or site-summed)");
}

namespace {

struct FftwPlan {
  int n;
  double* in;
  fftw_complex* out;
  fftw_plan plan;
  explicit FftwPlan(int n_) : n(n_) {
    in = fftw_alloc_real(static_cast<size_t>(n));
    out = fftw_alloc_complex(static_cast<size_t>(n / 2 + 1));
    plan = fftw_plan_dft_r2c_1d(n, in, out, FFTW_ESTIMATE);
  }
  ~FftwPlan() {
    fftw_destroy_plan(plan);
    fftw_free(in);
    fftw_free(out);
  }
  FftwPlan(const FftwPlan&) = delete;
  FftwPlan& operator=(const FftwPlan&) = delete;
};

}  // namespace

Spectrum power_spectrum(const Mat& series, double dt, const SpectrumOptions& opt) {
  const int n = static_cast<int>(series.rows());
  if (n < 4) throw ModelError("spectrum needs at least four samples");
  if (!(dt > 0.0)) throw ModelError("sampling interval must be positive");
  const int nf = n / 2 + 1;
  Spectrum s;
  s.bin = 2.0 * std::numbers::pi / (n * dt);
  s.omega.resize(static_cast<size_t>(nf));
  s.power.assign(static_cast<size_t>(nf), 0.0);
  for (int k = 0; k < nf; ++k) s.omega[static_cast<size_t>(k)] = k * s.bin;

  std::vector<double> win(static_cast<size_t>(n));
  for (int t = 0; t < n; ++t) win[static_cast<size_t>(t)] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * t / (n - 1));

  FftwPlan fp(n);
  double time_energy = 0.0, freq_energy = 0.0;
  for (int64_t c = 0; c < series.cols(); ++c) {
    const double mean = series.col(c).mean();
    for (int t = 0; t < n; ++t) {
      const double x = (series(t, c) - mean) * win[static_cast<size_t>(t)];
      fp.in[t] = x;
      time_energy += x * x;
    }
    fftw_execute(fp.plan);
    for (int k = 0; k < nf; ++k) {
      const double p = fp.out[k][0] * fp.out[k][0] + fp.out[k][1] * fp.out[k][1];
      s.power[static_cast<size_t>(k)] += p;
      const bool edge = k == 0 || (n % 2 == 0 && k == n / 2);
      freq_energy += (edge ? 1.0 : 2.0) * p;
    }
  }
  freq_energy /= n;
  s.parseval_error = time_energy > 0.0 ? std::abs(freq_energy - time_energy) / time_energy : 0.0;

  const double wmax = opt.omega_max < 0.0 ? s.omega.back() : opt.omega_max;
  auto in_range = [&](int k) { return k > 0 && s.omega[static_cast<size_t>(k)] >= opt.omega_min &&
                                      s.omega[static_cast<size_t>(k)] <= wmax; };
  double pmax = 0.0;
  for (int k = 1; k < nf; ++k)
    if (in_range(k)) pmax = std::max(pmax, s.power[static_cast<size_t>(k)]);
  if (pmax > 0.0) {
    for (int k = 1; k + 1 < nf; ++k) {
      if (!in_range(k)) continue;
      const double a = s.power[static_cast<size_t>(k - 1)], b = s.power[static_cast<size_t>(k)],
                   c = s.power[static_cast<size_t>(k + 1)];
      if (!(b > a && b >= c) || b < opt.threshold * pmax) continue;
      const double den = a - 2.0 * b + c;
      const double delta = den != 0.0 ? 0.5 * (a - c) / den : 0.0;
      s.peaks.push_back({(k + delta) * s.bin, b - 0.25 * (a - c) * delta, k});
    }
    std::stable_sort(s.peaks.begin(), s.peaks.end(), [](const Peak& x, const Peak& y) { return x.power > y.power; });
  }
  if (!s.peaks.empty()) {
    const double period = 2.0 * std::numbers::pi / s.peaks.front().omega;
    s.resolution_warning = n * dt < 2.0 * period;
  } else {
    s.resolution_warning = true;
  }
  return s;
}

Spectrum spectrum(const Trajectory& tr, Signal sig, const SpectrumOptions& opt) {
  if (tr.times.size() < 2) throw ModelError("trajectory too short for a spectrum");
  const double dt = tr.times[1] - tr.times[0];
  for (size_t n = 1; n < tr.times.size(); ++n)
    if (std::abs(tr.times[n] - tr.times[n - 1] - dt) > 1e-9 * std::max(1.0, dt))
      throw ModelError("spectrum needs uniform sampling");
  if (sig == Signal::SiteSummed) return power_spectrum(tr.rho, dt, opt);
  Mat x(static_cast<int64_t>(tr.com.size()), 1);
  for (size_t n = 0; n < tr.com.size(); ++n) x(static_cast<int64_t>(n), 0) = tr.com[n];
  return power_spectrum(x, dt, opt);
}

}  // namespace mcp::dyn
