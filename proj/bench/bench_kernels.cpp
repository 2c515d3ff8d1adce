#include <benchmark/benchmark.h>

#include "mcp/fock.hpp"
#include "mcp/propagate.hpp"

using namespace mcp;

namespace {

struct Sector {
  ModelParams p;
  fock::SectorBasis basis;
  CsrMatrix H;
  explicit Sector(int M) : basis(M, M) {
    p.M = M;
    p.d = 1.0;
    H = fock::build_hfh(p, basis);
  }
};

const Sector& sector(int M) {
  static Sector s7(7), s8(8), s9(9);
  return M == 7 ? s7 : M == 8 ? s8 : s9;
}

void BM_MatvecParallel(benchmark::State& st) {
  const auto& s = sector(static_cast<int>(st.range(0)));
  Vec x = Vec::Ones(s.H.dim()), y(s.H.dim());
  for (auto _ : st) {
    s.H.matvec(x.data(), y.data());
    benchmark::DoNotOptimize(y.data());
  }
  st.SetItemsProcessed(st.iterations() * s.H.nnz());
}

void BM_MatvecSerial(benchmark::State& st) {
  const auto& s = sector(static_cast<int>(st.range(0)));
  Vec x = Vec::Ones(s.H.dim()), y(s.H.dim());
  for (auto _ : st) {
    s.H.matvec_serial(x.data(), y.data());
    benchmark::DoNotOptimize(y.data());
  }
  st.SetItemsProcessed(st.iterations() * s.H.nnz());
}

void BM_BuildHfh(benchmark::State& st) {
  ModelParams p;
  p.M = static_cast<int>(st.range(0));
  p.d = 1.0;
  const fock::SectorBasis basis(p.M, p.M);
  fock::BuildOptions opt;
  opt.parallel = st.range(1) != 0;
  for (auto _ : st) benchmark::DoNotOptimize(fock::build_hfh(p, basis, nullptr, opt).nnz());
}

void BM_KrylovStep(benchmark::State& st) {
  const auto& s = sector(static_cast<int>(st.range(0)));
  CVec psi = CVec::Zero(s.H.dim());
  psi(s.H.dim() / 2) = 1.0;
  KrylovPropagator kp(s.H);
  for (auto _ : st) kp.step(psi, 1.0);
  st.counters["substeps"] = kp.substeps();
}

}  // namespace

BENCHMARK(BM_MatvecParallel)->Arg(7)->Arg(8)->Arg(9);
BENCHMARK(BM_MatvecSerial)->Arg(7)->Arg(8)->Arg(9);
BENCHMARK(BM_BuildHfh)->Args({8, 1})->Args({8, 0});
BENCHMARK(BM_KrylovStep)->Arg(8);

BENCHMARK_MAIN();
