// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "mcp/dynamics.hpp"
#include "mcp/free_fermion.hpp"
#include "mcp/perturbation.hpp"
#include "mcp/polaron.hpp"
#include "mcp/spectrum.hpp"
#include "mcp/validation.hpp"

using namespace mcp;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("failed: ") + what;
    }
  }
  void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

ModelParams params(int M, double d) {
  ModelParams p;
  p.M = M;
  p.d = d;
  return p;
}

const std::vector<double> kTrendGrid{0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 2.5, 3.0};

// drifts of every trajectory produced here, for criterion 10
std::vector<std::pair<std::string, dyn::Trajectory>> g_runs;

Outcome oracle_equivalence() {
  Outcome o;
  const auto t0 = Clock::now();
  double de = 0.0, dn = 0.0;
  for (int M : {5, 7, 9, 11})
    for (double d : {0.5, 1.0, 2.5}) {
      const auto r = check::compare_fixed_monopole(params(M, d));
      de = std::max(de, r.energy_diff);
      dn = std::max(dn, r.density_diff);
    }
  const double t = seconds_since(t0);
  o.require(de <= 1e-8, "energy within 1e-8");
  o.require(dn <= 1e-8, "density within 1e-8");
  o.require(t < 30.0, "runtime under 30 s");
  o.note(fmt("max |dE| = %.2e", de) + fmt(", max |dn| = %.2e", dn) + fmt(", %.1f s", t));
  return o;
}

Outcome mapping_exactness() {
  Outcome o;
  double worst = 0.0;
  int sectors = 0;
  for (int M : {3, 4})
    for (double d : {0.0, 0.5, 1.0, 2.5})
      for (int Nf = 0; Nf <= 2 * M; ++Nf) {
        const auto r = check::compare_mapping(params(M, d), Nf);
        o.require(r.dim_fh == r.dim_heff, "sector dimensions equal");
        worst = std::max(worst, r.max_gap_diff);
        ++sectors;
      }
  o.require(worst <= 1e-10, "gaps within 1e-10");
  o.note(std::to_string(sectors) + " sectors" + fmt(", max gap difference %.2e", worst));
  return o;
}

Outcome density_profile() {
  Outcome o;
  const int M = 11;
  const auto r = check::compare_fixed_monopole(params(M, 2.5), 0);
  const Vec& n = r.density_ff;
  const int peak = static_cast<int>(std::max_element(n.data(), n.data() + M) - n.data());
  o.require(peak == 1 || peak == M - 1, "peak at |r| = 1");
  for (int k = 1; k < (M - 1) / 2; ++k) {
    o.require(n(k + 1) < n(k), "monotone decay to the right");
    o.require(n(M - k - 1) < n(M - k), "monotone decay to the left");
  }
  o.require(n.sum() < 1.0, "total magnon number below one");
  o.require(r.density_diff <= 1e-6, "JW and ED profiles within 1e-6");
  o.note(fmt("n(1) = %.4f", n(1)) + fmt(", total %.4f", n.sum()) + fmt(", |JW - ED| = %.1e", r.density_diff));
  return o;
}

Outcome perturbation_ordering() {
  Outcome o;
  std::vector<double> dev;
  for (double d : {0.25, 0.5, 1.0, 2.0, 3.0}) {
    const auto p = params(11, d);
    dev.push_back(pt::relative_deviation(pt::density(pt::mcp_second_order(p, 0)),
                                         ff::magnon_density(p, {{0, spin::Pole::South}})));
  }
  o.require(dev[0] <= 0.02, "deviation at d = 0.25 at most 2%");
  for (size_t i = 1; i < dev.size(); ++i) o.require(dev[i] > dev[i - 1], "strictly increasing deviation");
  std::string s = "deviations";
  for (double x : dev) s += fmt(" %.4f", x);
  o.note(s);
  return o;
}

std::vector<polaron::McPModel> trend_models() {
  std::vector<polaron::McPModel> ms;
  for (double d : kTrendGrid) ms.push_back(polaron::build_mcp_model(params(11, d)));
  return ms;
}

Outcome binding_energy(const std::vector<polaron::McPModel>& ms) {
  Outcome o;
  for (size_t i = 0; i < ms.size(); ++i) {
    o.require(ms[i].E_B < 0.0, "E_B negative");
    if (i) o.require(ms[i].E_B < ms[i - 1].E_B, "E_B strictly decreasing");
  }
  const double small = polaron::build_mcp_model(params(11, 0.05)).E_B;
  o.require(std::abs(small) < 1e-3, "|E_B(0.05)| below 1e-3");
  o.note(fmt("E_B(0.25) = %.6f", ms.front().E_B) + fmt(", E_B(3) = %.6f", ms.back().E_B) +
         fmt(", E_B(0.05) = %.2e", small));
  return o;
}

Outcome anti_trapping(const std::vector<polaron::McPModel>& ms) {
  Outcome o;
  const double J1 = ModelParams{}.J1;
  for (size_t i = 0; i < ms.size(); ++i) {
    const double dressed = ms[i].channels[1] + ms[i].channels[2] + ms[i].channels[3];
    if (kTrendGrid[i] >= 0.5) o.require(4 * ms[i].J_McP > 2 * J1, "McP bandwidth above 2 J1");
    if (!i) continue;
    const double prev = ms[i - 1].channels[1] + ms[i - 1].channels[2] + ms[i - 1].channels[3];
    o.require(ms[i].J_McP > ms[i - 1].J_McP, "J_McP strictly increasing");
    o.require(ms[i].channels[0] < ms[i - 1].channels[0], "CH1 strictly decreasing");
    o.require(dressed > prev, "CH2+CH3+CH4 strictly increasing");
  }
  const double j0 = polaron::build_mcp_model(params(11, 0.01)).J_McP;
  o.require(std::abs(j0 - J1 / 2) < 1e-4, "J_McP(d -> 0) within 1e-4 of J1/2");
  o.note(fmt("J_McP(0.25) = %.6f", ms.front().J_McP) + fmt(", J_McP(3) = %.6f", ms.back().J_McP) +
         fmt(", J_McP(0.01) - J1/2 = %.1e", j0 - J1 / 2));
  return o;
}

dyn::Trajectory run(const std::string& name, const ModelParams& p, const dyn::BlochOptions& opt) {
  auto tr = dyn::run_bloch(p, opt);
  g_runs.push_back({name, tr});
  return tr;
}

double com_amplitude(const dyn::Trajectory& tr) {
  const auto [lo, hi] = std::minmax_element(tr.com.begin(), tr.com.end());
  return *hi - *lo;
}

double g_linear_com_amplitude = 0.0;

Outcome bloch_oscillation() {
  Outcome o;
  const auto t0 = Clock::now();
  ModelParams p = params(11, 2.5);
  p.g1 = 0.01;
  dyn::BlochOptions opt;
  opt.T = 2e4;
  opt.dt = 1.0;
  const auto eff = run("effective M=11 linear", p, opt);
  g_linear_com_amplitude = com_amplitude(eff);
  const auto se = dyn::spectrum(eff, dyn::Signal::SiteSummed);
  o.require(!se.peaks.empty(), "effective spectrum has a peak");
  const double we = se.peaks.empty() ? 0.0 : se.peaks[0].omega;
  o.require(std::abs(we - 2 * p.g1) <= se.bin, "effective peak within one bin of 2 g1");

  ModelParams q = p;
  q.M = 7;
  dyn::BlochOptions full;
  full.engine = dyn::Engine::FullED;
  full.T = 2e4;
  full.dt = 10.0;
  const auto fe = run("full-ed M=7 linear", q, full);
  const auto sf = dyn::spectrum(fe, dyn::Signal::SiteSummed);
  o.require(!sf.peaks.empty(), "full-ED spectrum has a peak");
  const double wf = sf.peaks.empty() ? 0.0 : sf.peaks[0].omega;
  o.require(std::abs(wf - 2 * p.g1) <= 2 * sf.bin, "full-ED peak within two bins of 2 g1");
  const double t = seconds_since(t0);
  o.require(t < 120.0, "runtime under 2 min");
  o.note(fmt("effective %.6f", we) + fmt(", full-ED %.6f", wf) + fmt(", bin %.2e", se.bin) + fmt(", %.1f s", t));
  return o;
}

Outcome generalized_bloch() {
  Outcome o;
  ModelParams p = params(11, 2.5);
  p.g1 = 0.01;
  p.g2 = p.g1 / 100;
  dyn::BlochOptions opt;
  opt.T = 1e6;
  opt.dt = 5.0;
  const auto tr = run("effective M=11 quadratic", p, opt);
  dyn::SpectrumOptions so;
  so.omega_min = 0.015;
  so.omega_max = 0.035;
  const auto s = dyn::spectrum(tr, dyn::Signal::SiteSummed, so);
  std::vector<double> w;
  for (const auto& pk : s.peaks) w.push_back(pk.omega);
  std::sort(w.begin(), w.end());
  o.require(w.size() >= 3, "at least three peaks");
  if (w.size() >= 3) {
    std::vector<double> gaps;
    for (size_t i = 1; i < w.size(); ++i) gaps.push_back(w[i] - w[i - 1]);
    double mean = 0.0;
    for (double g : gaps) mean += g / gaps.size();
    for (double g : gaps) o.require(std::abs(g - mean) <= 0.1 * mean, "equidistant peaks");
    double centre = 0.0;
    for (double x : w) centre += x / w.size();
    o.require(std::abs(mean - 8 * p.g2) <= 0.1 * 8 * p.g2, "spacing within 10% of 8 g2");
    const double c0 = 2 * p.g1 + 46 * p.g2;
    o.require(std::abs(centre - c0) <= 0.1 * c0, "centre within 10% of 2 g1 + 46 g2");
    o.note(std::to_string(w.size()) + " peaks" + fmt(", spacing %.3e", mean) + fmt(" (8 g2 = %.1e)", 8 * p.g2) +
           fmt(", centre %.5f", centre) + fmt(" (target %.5f)", c0));
  }
  const double amp = com_amplitude(tr);
  o.require(amp > 0.1, "centre of mass oscillates");
  o.require(amp > 10 * g_linear_com_amplitude, "oscillation absent without g2");
  o.note(fmt("com amplitude %.3f", amp) + fmt(" (linear tilt %.1e)", g_linear_com_amplitude));
  return o;
}

Outcome bipolaron() {
  Outcome o;
  const int M = 11, rmax = 5;
  const auto K = polaron::center_of_mass_grid(M);
  for (double d : {0.2, 0.8}) {
    const auto m = polaron::build_two_polaron_model(params(M, d), rmax);
    o.require(m.V.at(0) > 0.0, fmt("V(0) > 0 at d = %.1f", d));
    o.require(m.V.at(1) < 0.0 && m.V.at(-1) < 0.0, fmt("V(+-1) < 0 at d = %.1f", d));
    const auto s = polaron::bipolaron_spectrum(m, K);
    for (const auto& b : s.blocks)
      for (double par : b.parity) o.require(std::abs(std::abs(par) - 1.0) <= 1e-6, "definite parity");
    const auto& b0 = s.blocks.front();
    if (d < 0.5) {
      o.require(b0.n_branches == 1, "one bound branch at d = 0.2");
      if (b0.n_bound >= 2) {
        const double split = b0.energies(1) - b0.energies(0);
        const double gap = b0.continuum_edge - b0.energies(1);
        o.require(split < 0.1 * gap, "quasi-degenerate doublet at K = 0 (splitting < 10% of binding gap)");
        o.note(fmt("d = 0.2, K = 0: splitting %.2e", split) + fmt(", binding gap %.2e", gap) +
               fmt(" (ratio %.2f)", split / gap));
        int ok = 0, with_doublet = 0;
        for (const auto& b : s.blocks) {
          if (b.n_bound < 2) continue;
          ++with_doublet;
          ok += (b.energies(1) - b.energies(0)) < 0.1 * (b.continuum_edge - b.energies(1));
        }
        o.note(std::to_string(ok) + "/" + std::to_string(with_doublet) + " K blocks meet the 10% ratio");
      }
    } else {
      o.require(b0.n_branches >= 2, "at least two bound branches at d = 0.8");
      o.note("d = 0.8, K = 0: " + std::to_string(b0.n_branches) + " branches");
    }
  }
  const auto p7 = params(7, 0.2);
  const auto m7 = polaron::build_two_polaron_model(p7, 3);
  const auto b7 = polaron::bipolaron_spectrum(m7, {0.0}).blocks.front();
  const auto exact = polaron::exact_pair_levels(p7, 2);
  o.require(exact.size() == 2 && b7.n_bound >= 2, "two bound levels on both sides at M = 7");
  if (exact.size() == 2 && b7.energies.size() >= 2)
    for (int i = 0; i < 2; ++i) {
      const double rel = std::abs(b7.energies(i) - exact[i]) / std::abs(exact[i]);
      o.require(rel <= 0.1, "effective vs exact pair level within 10%");
      o.note(fmt("M = 7 level %.0f: ", i) + fmt("effective %.5f", b7.energies(i)) + fmt(", exact %.5f", exact[i]) +
             fmt(" (%.1f%%)", 100 * rel));
    }
  return o;
}

Outcome propagator_health() {
  Outcome o;
  double nd = 0.0, ed = 0.0;
  for (const auto& [name, tr] : g_runs) {
    o.require(tr.max_norm_drift < 1e-9, name + " norm drift");
    o.require(tr.max_energy_drift < 1e-9, name + " energy drift");
    nd = std::max(nd, tr.max_norm_drift);
    ed = std::max(ed, tr.max_energy_drift);
  }
  o.require(!g_runs.empty(), "dynamics runs recorded");
  o.note(std::to_string(g_runs.size()) + " runs" + fmt(", max norm drift %.1e", nd) + fmt(", max energy drift %.1e", ed));
  return o;
}

}  // namespace

int main() {
  int failed = 0;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& fn) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += !o.pass;
    std::printf("criterion %2d [%s]: %s  %s\n", id, name, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  };
  report(1, "free fermion vs ED", oracle_equivalence);
  report(2, "mapping exactness", mapping_exactness);
  report(3, "magnon density profile", density_profile);
  report(4, "perturbation ordering", perturbation_ordering);
  const auto ms = trend_models();
  report(5, "binding energy", [&] { return binding_energy(ms); });
  report(6, "anti-trapping", [&] { return anti_trapping(ms); });
  report(7, "Bloch oscillation", bloch_oscillation);
  report(8, "generalized Bloch oscillation", generalized_bloch);
  report(9, "bipolaron structure", bipolaron);
  report(10, "propagator health", propagator_health);
  std::printf("%d of 10 criteria passed\n", 10 - failed);
  return failed ? 1 : 0;
}
