#include "mcp/dynamics.hpp"

#include <cmath>

#include "mcp/fock.hpp"
#include "mcp/free_fermion.hpp"
#include "mcp/polaron.hpp"

namespace mcp::dyn {

std::string to_string(Engine e) { return e == Engine::FullED ? "full-ed" : "effective"; }

Engine engine_from_string(const std::string& s) {
  if (s == "full-ed") return Engine::FullED;
  if (s == "effective") return Engine::EffectiveMcP;
  throw ModelError("unknown engine '" + s + "' (expected full-ed or effective)");
}

std::string to_string(Initial i) { return i == Initial::Bare ? "bare" : "dressed"; }

Initial initial_from_string(const std::string& s) {
  if (s == "bare") return Initial::Bare;
  if (s == "dressed") return Initial::Dressed;
  throw ModelError("unknown initial state '" + s + "' (expected bare or dressed)");
}

CVec fock_monopole_state(const ModelParams& p, int site, bool dressed) {
  validate(p);
  if (site < 0 || site >= p.M) throw ModelError("monopole site out of range");
  const fock::SectorBasis basis(p.M, p.M - 1);
  std::vector<int> cells;
  Vec amp = Vec::Ones(1);
  if (dressed) {
    const auto w = ff::mcp_state(p, {{site, spin::Pole::South}});
    cells = w.cells;
    amp = w.amplitudes;
  } else {
    for (int t = 1; t < p.M; ++t) cells.push_back((site + t) % p.M);
  }
  const int L = static_cast<int>(cells.size());
  const double h = std::sqrt(0.5);
  CVec psi = CVec::Zero(basis.size());
  // each spin cell holds one fermion in its left (choice 0) or right well
  for (int64_t m = 0; m < amp.size(); ++m) {
    if (amp(m) == 0.0) continue;
    for (std::uint64_t choice = 0; choice < (std::uint64_t{1} << L); ++choice) {
      fock::Bits bits = 0;
      double a = amp(m);
      for (int k = 0; k < L; ++k) {
        const bool right = (choice >> k) & 1;
        const bool magnon = (m >> k) & 1;
        bits |= fock::Bits{1} << (2 * cells[k] + (right ? 1 : 0));
        // |->> = (U + D)/sqrt2, |<-> = (D - U)/sqrt2
        a *= (magnon && !right) ? -h : h;
      }
      const int64_t i = basis.index(bits);
      if (i < 0) throw NumericalError("monopole state outside the fermion sector");
      psi(i) += a;
    }
  }
  return psi / psi.norm();
}

Mat effective_engine_hamiltonian(const ModelParams& p, double J_McP) {
  const auto tilt = polaron::tilt_to_mcp_potential(p.g1, p.g2, p.M);
  const double twist = p.boundary == Boundary::Periodic ? polaron::single_monopole_twist(p.M) : 0.0;
  return polaron::effective_mcp_hamiltonian(J_McP, tilt.v, twist);
}

namespace {

std::vector<double> sample_times(const BlochOptions& opt) {
  if (!(opt.dt > 0.0) || !(opt.T > 0.0)) throw ModelError("T and dt must be positive");
  const double ns = std::floor(opt.T / opt.dt + 1e-9);
  if (ns > 5e7) throw ModelError("too many samples for T / dt");
  std::vector<double> t(static_cast<size_t>(ns) + 1);
  for (size_t n = 0; n < t.size(); ++n) t[n] = static_cast<double>(n) * opt.dt;
  return t;
}

// Calls obs(sample index, state) for every sample time.
template <class Energy, class Obs>
void propagate(const Mat* dense, const CsrMatrix* sparse, const CVec& psi0, const std::vector<double>& times,
               EvolveMethod method, int batch, Trajectory& tr, Energy energy, Obs obs) {
  const double e0 = energy(psi0);
  auto log = [&](size_t n, const CVec& psi) {
    const double nr = psi.norm();
    const double e = energy(psi);
    tr.norm[n] = nr;
    tr.energy[n] = e;
    tr.max_norm_drift = std::max(tr.max_norm_drift, std::abs(nr - 1.0));
    tr.max_energy_drift = std::max(tr.max_energy_drift, std::abs(e - e0));
    obs(n, psi);
  };
  const int64_t dim = psi0.size();
  if (method == EvolveMethod::Auto) method = dim <= 4096 ? EvolveMethod::Exact : EvolveMethod::Krylov;
  if (method == EvolveMethod::Krylov && !sparse) method = EvolveMethod::Exact;
  if (method == EvolveMethod::Exact) {
    tr.method = "exact";
    const SpectralPropagator sp(dense ? *dense : sparse->to_dense());
    const CVec c = sp.coefficients(psi0);
    for (size_t s = 0; s < times.size(); s += static_cast<size_t>(batch)) {
      const size_t e = std::min(times.size(), s + static_cast<size_t>(batch));
      const std::vector<double> tb(times.begin() + static_cast<std::ptrdiff_t>(s),
                                   times.begin() + static_cast<std::ptrdiff_t>(e));
      const CMat st = sp.states(c, tb);
      for (size_t j = 0; j < tb.size(); ++j) log(s + j, st.col(static_cast<int64_t>(j)));
    }
  } else {
    tr.method = "krylov";
    KrylovPropagator kp(*sparse);
    CVec psi = psi0;
    log(0, psi);
    for (size_t n = 1; n < times.size(); ++n) {
      kp.step(psi, times[n] - times[n - 1]);
      log(n, psi);
    }
  }
}

}  // namespace

Trajectory run_bloch(const ModelParams& p, const BlochOptions& opt) {
  validate(p);
  const int site = opt.site < 0 ? (p.M - 1) / 2 : opt.site;
  if (site >= p.M) throw ModelError("start cell out of range");
  if (opt.batch < 1) throw ModelError("batch must be positive");
  Trajectory tr;
  tr.engine = opt.engine;
  tr.M = p.M;
  tr.times = sample_times(opt);
  const size_t ns = tr.times.size();
  tr.rho = Mat::Zero(static_cast<int64_t>(ns), p.M);
  tr.com.assign(ns, 0.0);
  tr.norm.assign(ns, 0.0);
  tr.energy.assign(ns, 0.0);

  if (opt.engine == Engine::EffectiveMcP) {
    tr.J_McP = polaron::build_mcp_model(p).J_McP;
    const Mat H = effective_engine_hamiltonian(p, tr.J_McP);
    tr.dim = p.M;
    CVec psi0 = CVec::Zero(p.M);
    if (opt.psi0) {
      psi0 = *opt.psi0;
    } else {
      psi0(site) = 1.0;
    }
    if (psi0.size() != p.M) throw ModelError("initial state has the wrong dimension");
    if (std::abs(psi0.norm() - 1.0) > 1e-10) throw ModelError("initial state must be normalized");
    const CMat Hc = H.cast<cplx>();
    propagate(
        &H, nullptr, psi0, tr.times, EvolveMethod::Exact, opt.batch, tr,
        [&](const CVec& v) { return v.dot(Hc * v).real(); },
        [&](size_t n, const CVec& v) {
          double c = 0.0;
          for (int x = 0; x < p.M; ++x) {
            const double r = std::norm(v(x));
            tr.rho(static_cast<int64_t>(n), x) = r;
            c += (x + 1) * r;
          }
          tr.com[n] = c;
        });
    return tr;
  }

  const fock::SectorBasis basis(p.M, p.M - 1);
  if (basis.size() > opt.max_dim) throw ModelError("fermion sector exceeds the configured cap");
  tr.dim = basis.size();
  const auto tilt = fock::tilt_profile(p);
  const CsrMatrix H = fock::build_hfh(p, basis, &tilt);
  CVec psi0 = opt.psi0 ? *opt.psi0 : fock_monopole_state(p, site, opt.initial == Initial::Dressed);
  if (psi0.size() != basis.size()) throw ModelError("initial state has the wrong dimension");
  if (std::abs(psi0.norm() - 1.0) > 1e-10) throw ModelError("initial state must be normalized");
  // cell occupation of every basis state
  Mat occ(basis.size(), p.M);
  for (int64_t i = 0; i < basis.size(); ++i) {
    const fock::Bits b = basis.state(i);
    for (int x = 0; x < p.M; ++x) occ(i, x) = static_cast<double>(((b >> (2 * x)) & 1) + ((b >> (2 * x + 1)) & 1));
  }
  propagate(
      nullptr, &H, psi0, tr.times, opt.method, opt.batch, tr, [&](const CVec& v) { return H.expectation(v); },
      [&](size_t n, const CVec& v) {
        const Vec pr = v.cwiseAbs2();
        const Vec o = occ.transpose() * pr;
        const double tot = pr.sum();
        double c = 0.0;
        for (int x = 0; x < p.M; ++x) {
          const double r = tot - o(x);
          tr.rho(static_cast<int64_t>(n), x) = r;
          c += (x + 1) * r;
        }
        tr.com[n] = c;
      });
  return tr;
}

}  // namespace mcp::dyn
