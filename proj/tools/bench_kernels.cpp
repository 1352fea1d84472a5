// Timing harness for the serial reference kernels vs the OpenMP versions.
// Also verifies on every run that both paths agree bit for bit.

#include <chrono>
#include <cstdio>
#include <cstring>

#include <omp.h>

#include "optomech/budget.hpp"
#include "optomech/fit.hpp"
#include "optomech/physics.hpp"
#include "optomech/synth.hpp"

using optomech::Exec;

namespace {

optomech::OptomechSystem device() {
  return {6.707e9, 10.56e6, 9.357e6, 24.4, 230.0, 8.5e-14};
}

optomech::MeasurementConfig measurement(std::size_t n_bins) {
  optomech::MeasurementConfig cfg;
  cfg.power_w = 1e-13;
  cfg.efficiency = 0.02;
  cfg.temperature_k = 0.04;
  cfg.n_avg = 500;
  cfg.freq_start_hz = 9.357e6 - 50.0 * 24.4;
  cfg.freq_stop_hz = 9.357e6 + 50.0 * 24.4;
  cfg.n_bins = n_bins;
  return cfg;
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

bool identical(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

void report(const char* name, double serial_ms, double parallel_ms, bool same) {
  std::printf("%-18s serial %9.2f ms   parallel %9.2f ms   speedup %5.2fx   %s\n", name,
              serial_ms, parallel_ms, serial_ms / parallel_ms, same ? "bit-identical" : "MISMATCH");
}

}  // namespace

int main() {
  const auto sys = device();
  std::printf("threads available: %d\n\n", omp_get_max_threads());

  {
    const auto cfg = measurement(1 << 22);
    auto t0 = std::chrono::steady_clock::now();
    const auto serial = optomech::displacement_spectrum(sys, cfg, Exec::serial);
    const double ts = ms_since(t0);
    t0 = std::chrono::steady_clock::now();
    const auto parallel = optomech::displacement_spectrum(sys, cfg, Exec::parallel);
    const double tp = ms_since(t0);
    report("model spectrum", ts, tp, identical(serial.values, parallel.values));
  }

  {
    const auto cfg = measurement(1 << 20);
    const optomech::SynthRequest req{sys, cfg, 42};
    auto t0 = std::chrono::steady_clock::now();
    const auto serial = optomech::synthesize(req, Exec::serial);
    const double ts = ms_since(t0);
    t0 = std::chrono::steady_clock::now();
    const auto parallel = optomech::synthesize(req, Exec::parallel);
    const double tp = ms_since(t0);
    report("synthesis", ts, tp, identical(serial.values, parallel.values));
  }

  {
    const auto cfg = measurement(1 << 18);
    const optomech::SynthRequest req{sys, cfg, 42};
    const auto spec = optomech::synthesize(req, Exec::parallel);
    auto t0 = std::chrono::steady_clock::now();
    const auto serial = optomech::fit_lorentzian(spec, {}, Exec::serial);
    const double ts = ms_since(t0);
    t0 = std::chrono::steady_clock::now();
    const auto parallel = optomech::fit_lorentzian(spec, {}, Exec::parallel);
    const double tp = ms_since(t0);
    const bool same = std::memcmp(&serial.floor, &parallel.floor, sizeof(double)) == 0 &&
                      serial.height == parallel.height && serial.center == parallel.center &&
                      serial.linewidth == parallel.linewidth && serial.n_iter == parallel.n_iter;
    report("lorentzian fit", ts, tp, same);
  }

  {
    const auto cfg = measurement(1 << 14);
    const std::vector<double> powers = {1e-14, 1e-13, 1e-12, 1e-11, 1e-10, 1e-9, 7.8e-9};
    auto t0 = std::chrono::steady_clock::now();
    const auto serial = optomech::run_sweep(sys, cfg, powers, 7, Exec::serial);
    const double ts = ms_since(t0);
    t0 = std::chrono::steady_clock::now();
    const auto parallel = optomech::run_sweep(sys, cfg, powers, 7, Exec::parallel);
    const double tp = ms_since(t0);
    bool same = serial.points.size() == parallel.points.size();
    for (std::size_t i = 0; same && i < serial.points.size(); ++i) {
      same = serial.points[i].fit.floor == parallel.points[i].fit.floor &&
             serial.points[i].fit.height == parallel.points[i].fit.height &&
             serial.points[i].fit.linewidth == parallel.points[i].fit.linewidth;
    }
    report("power sweep", ts, tp, same);
  }

  return 0;
}
