#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "mcp/eigensolve.hpp"
#include "mcp/polaron.hpp"
#include "mcp/spin_map.hpp"

using namespace mcp;
using namespace mcp::polaron;

namespace {

ModelParams params(int M, double d) {
  ModelParams p;
  p.M = M;
  p.d = d;
  return p;
}

const std::vector<double> kGrid{0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 2.5, 3.0};

double channel_sum(const McPModel& m) { return m.channels[0] + m.channels[1] + m.channels[2] + m.channels[3]; }

}  // namespace

TEST(Polaron, UndressedLimit) {
  const auto p = params(11, 0.0);
  const auto m = build_mcp_model(p);
  EXPECT_NEAR(m.E_B, 0.0, 1e-14);
  EXPECT_NEAR(m.J_McP, p.J1 / 2, 1e-14);
  for (int k = 1; k < 4; ++k) EXPECT_NEAR(m.channels[k], 0.0, 1e-14);
}

TEST(Polaron, ChannelDecompositionIsExact) {
  for (double d : {0.3, 1.0, 2.7}) {
    const auto m = build_mcp_model(params(9, d));
    EXPECT_LT(std::abs(m.J_McP - channel_sum(m)), 1e-12) << d;
  }
}

TEST(Polaron, AntiTrappingTrends) {
  std::vector<McPModel> ms;
  for (double d : kGrid) ms.push_back(build_mcp_model(params(11, d)));
  for (size_t i = 0; i < ms.size(); ++i) {
    EXPECT_LT(ms[i].E_B, 0.0);
    EXPECT_GT(ms[i].projection_norm, 1e-8);
    if (!i) continue;
    EXPECT_GT(ms[i].J_McP, ms[i - 1].J_McP);
    EXPECT_LT(ms[i].E_B, ms[i - 1].E_B);
    EXPECT_LT(ms[i].channels[0], ms[i - 1].channels[0]);
    EXPECT_GT(ms[i].J_McP - ms[i].channels[0], ms[i - 1].J_McP - ms[i - 1].channels[0]);
  }
}

TEST(Polaron, BindingEnergyVanishesQuadratically) {
  const double a = build_mcp_model(params(11, 0.05)).E_B, b = build_mcp_model(params(11, 0.1)).E_B;
  EXPECT_LT(std::abs(a), 1e-3);
  EXPECT_NEAR(b / a, 4.0, 0.05);
}

TEST(Polaron, MirrorChannelsEqual) {
  const auto m = build_mcp_model(params(9, 1.2));
  EXPECT_NEAR(m.channels[1], m.channels[2], 1e-12);
}

TEST(Polaron, Dispersion) {
  const auto p = params(11, 1.0);
  const auto m = build_mcp_model(p);
  const auto k = uniform_k_grid(33);
  ASSERT_EQ(k.size(), 33u);
  const auto ds = dispersion(m, p.J1, k);
  for (size_t i = 0; i < k.size(); ++i) {
    EXPECT_NEAR(ds.mcp[i], m.E_B - 2 * m.J_McP * std::cos(k[i]), 1e-15);
    EXPECT_NEAR(ds.bare[i], -p.J1 * std::cos(k[i]), 1e-15);
    EXPECT_NEAR(ds.mcp[i], ds.mcp[k.size() - 1 - i], 1e-14);
  }
  const size_t zero = std::min_element(ds.mcp.begin(), ds.mcp.end()) - ds.mcp.begin();
  EXPECT_NEAR(k[zero], 0.0, 1e-12);
  EXPECT_NEAR(ds.mcp_bandwidth, 4 * m.J_McP, 1e-15);
  EXPECT_NEAR(ds.bare_bandwidth, 2 * p.J1, 1e-15);
  for (double d : {0.5, 1.0, 3.0}) {
    const auto x = dispersion(build_mcp_model(params(11, d)), p.J1, k);
    EXPECT_GT(x.mcp_bandwidth, x.bare_bandwidth);
  }
}

TEST(Polaron, SingleMonopoleBandOfFullSector) {
  // lowest M levels of the Nf = M - 1 sector against the McP band with the ring twist
  const int M = 7;
  for (double d : {0.25, 0.5, 1.0}) {
    const auto p = params(M, d);
    const auto em = spin::build_heff(p, spin::enumerate_fermion_sector(M, M - 1));
    EigenOptions opt;
    opt.dense_cutoff = 0;
    const auto r = lowest_eigenpairs(em.H, M, opt);
    const auto m = build_mcp_model(p);
    const Mat h = effective_mcp_hamiltonian(m.J_McP, std::vector<double>(M, 0.0), single_monopole_twist(M));
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    std::vector<double> want;
    for (int n = 0; n < M; ++n) want.push_back(-2 * m.J_McP * std::cos(2 * std::numbers::pi * (n + 0.5) / M));
    std::sort(want.begin(), want.end());
    const double bw = 4 * m.J_McP;
    for (int n = 0; n < M; ++n) {
      EXPECT_NEAR(es.eigenvalues()(n), want[n], 1e-14);
      EXPECT_LT(std::abs((r.values(n) - r.values(0)) - (want[n] - want[0])), 0.05 * bw) << d << " " << n;
    }
  }
}

TEST(Polaron, RingTwist) {
  EXPECT_EQ(single_monopole_twist(7), -1.0);
  EXPECT_EQ(single_monopole_twist(8), 1.0);
  const Mat h = effective_mcp_hamiltonian(0.3, {0.1, 0.2, 0.3, 0.4}, 1.0);
  EXPECT_EQ(h(0, 3), -0.3);
  EXPECT_EQ(h(2, 2), 0.3);
  EXPECT_EQ(h(1, 2), -0.3);
}

TEST(Polaron, TiltPotential) {
  const auto lin = tilt_to_mcp_potential(0.01, 0.0, 11);
  ASSERT_EQ(lin.v.size(), 11u);
  EXPECT_NEAR(lin.v[0], -0.02, 1e-17);
  for (size_t j = 1; j < lin.v.size(); ++j) EXPECT_NEAR(lin.v[j] - lin.v[j - 1], -0.02, 1e-15);
  const auto q = tilt_to_mcp_potential(0.01, 1e-4, 11);
  for (int j = 1; j <= 11; ++j) EXPECT_NEAR(q.v[j - 1], -2 * (0.01 - 1e-4) * j - 4e-4 * j * j, 1e-15);
  // second difference isolates the quadratic coefficient
  EXPECT_NEAR(q.v[2] - 2 * q.v[1] + q.v[0], 2 * -4e-4, 1e-15);
}

TEST(TwoPolaron, Pseudobarrier) {
  EXPECT_DOUBLE_EQ(pseudobarrier({1.0, 2.0, 1.0}), 1.0);
  EXPECT_DOUBLE_EQ(pseudobarrier({2.0, 4.0, 4.0}), 4.0);
  EXPECT_THROW(pseudobarrier({1.0, 1.0, 1.0}), NumericalError);
}

TEST(TwoPolaron, IntermediateGapsFromHandDiagonals) {
  // contact pair S0 N1 costs 2J + 3d/2 - d/4 over the vacuum; one and two magnons add 2J each
  for (double d : {0.2, 0.8}) {
    const auto m = build_two_polaron_model(params(7, d), 3);
    const double contact = 2.0 + 1.25 * d;
    EXPECT_NEAR(m.gaps.E_v, -contact, 1e-14);
    EXPECT_NEAR(m.gaps.E_m, 2.0 - contact, 1e-14);
    EXPECT_NEAR(m.gaps.E_mm, 4.0 - contact, 1e-14);
    EXPECT_NEAR(m.V.at(0), 1.0 / (1.0 / m.gaps.E_v - 2.0 / m.gaps.E_m + 1.0 / m.gaps.E_mm), 1e-14);
  }
}

TEST(TwoPolaron, InteractionShape) {
  double prev_well = 0.0;
  for (double d : {0.2, 0.8}) {
    const int M = 11, rmax = 5;
    const auto m = build_two_polaron_model(params(M, d), rmax);
    ASSERT_EQ(m.V.size(), 11u);
    for (int r = 1; r <= rmax; ++r) EXPECT_NEAR(m.V.at(r), m.V.at(-r), 1e-12);
    EXPECT_NEAR(m.V.at(rmax), 0.0, 1e-14);
    EXPECT_GT(m.V.at(0), 0.0);
    EXPECT_LT(m.V.at(1), 0.0);
    EXPECT_LT(m.V.at(1), prev_well);
    prev_well = m.V.at(1);
  }
  EXPECT_THROW(build_two_polaron_model(params(10, 0.2), 3), ModelError);
  EXPECT_THROW(build_two_polaron_model(params(7, 0.2), 4), ModelError);
}

TEST(TwoPolaron, NoInteractionNoBoundStates) {
  auto m = build_two_polaron_model(params(11, 0.5), 5);
  for (auto& [r, v] : m.V) v = 0.0;
  const auto s = bipolaron_spectrum(m, center_of_mass_grid(11));
  for (const auto& b : s.blocks) {
    EXPECT_EQ(b.n_bound, 0) << b.K;
    EXPECT_GE(b.energies.minCoeff(), b.continuum_edge - 1e-12);
    EXPECT_LE(b.energies.maxCoeff(), -b.continuum_edge + 1e-12);
  }
}

TEST(TwoPolaron, ReflectionSymmetry) {
  const auto m = build_two_polaron_model(params(11, 0.8), 5);
  const int n = 11;
  Mat P = Mat::Zero(n, n);
  for (int a = 0; a < n; ++a) P(a, n - 1 - a) = 1.0;
  EXPECT_EQ((P * P - Mat::Identity(n, n)).cwiseAbs().maxCoeff(), 0.0);
  for (double K : center_of_mass_grid(11)) {
    const Mat H = relative_hamiltonian(m, K);
    EXPECT_LT((P * H - H * P).cwiseAbs().maxCoeff(), 1e-12);
  }
  for (const auto& b : bipolaron_spectrum(m, center_of_mass_grid(11)).blocks)
    for (double par : b.parity) EXPECT_NEAR(std::abs(par), 1.0, 1e-6);
}

TEST(TwoPolaron, BoundBranches) {
  const auto weak = bipolaron_spectrum(build_two_polaron_model(params(11, 0.2), 5), {0.0}).blocks[0];
  EXPECT_EQ(weak.n_branches, 1);
  EXPECT_EQ(weak.n_bound, 2);
  EXPECT_NEAR(weak.parity[0] * weak.parity[1], -1.0, 1e-6);

  const auto strong = bipolaron_spectrum(build_two_polaron_model(params(11, 0.8), 5), {0.0}).blocks[0];
  ASSERT_GE(strong.n_branches, 2);
  // nodes on one side of the barrier: none in the lower branch, one in the upper
  auto nodes = [&](int col) {
    int n = 0;
    Vec v = strong.states.col(col);
    for (int r = 2; r <= 5; ++r)
      if (v(5 + r) * v(5 + r - 1) < 0 && std::abs(v(5 + r)) > 1e-8) ++n;
    return n;
  };
  EXPECT_EQ(nodes(0), 0);
  EXPECT_EQ(nodes(1), 0);
  EXPECT_EQ(nodes(2), 1);
  EXPECT_EQ(nodes(3), 1);
}
