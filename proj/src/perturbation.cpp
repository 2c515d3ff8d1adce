#include "mcp/perturbation.hpp"

#include <cmath>

namespace mcp::pt {

namespace {

class Builder {
 public:
  Builder(const ModelParams& p, int site, int order) {
    validate(p);
    if (!(p.d < 4.0 * p.J)) throw ModelError("perturbative states need d < 4J");
    if (site < 0 || site >= p.M) throw ModelError("monopole site out of range");
    s_.order = order;
    s_.M = p.M;
    s_.site = site;
    ring_ = p.boundary == Boundary::Periodic;
  }

  // Adds v to the configuration with magnons on site+offsets; hard-core and
  // monopole-overlapping configurations are dropped.
  void add(std::vector<int> offsets, double v) {
    std::uint64_t key = 0;
    for (int o : offsets) {
      int c = s_.site + o;
      if (ring_) {
        c = ((c % s_.M) + s_.M) % s_.M;
      } else if (c < 0 || c >= s_.M) {
        return;
      }
      if (c == s_.site) return;
      const std::uint64_t bit = std::uint64_t{1} << c;
      if (key & bit) return;
      key |= bit;
    }
    raw_[key] += v;
  }

  // Offsets j (relative to the site) of pairs (j, j+1) avoiding the monopole.
  std::vector<int> pair_offsets() const {
    std::vector<int> out;
    if (ring_) {
      for (int j = 1; j + 1 <= s_.M - 1; ++j) out.push_back(j);
    } else {
      for (int j = -s_.site; j + 1 < s_.M - s_.site; ++j)
        if (j != 0 && j != -1) out.push_back(j);
    }
    return out;
  }

  // Offsets j with j, j+1, j+2 all off the monopole.
  std::vector<int> triple_offsets() const {
    std::vector<int> out;
    if (ring_) {
      for (int j = 1; j + 2 <= s_.M - 1; ++j) out.push_back(j);
    } else {
      for (int j = -s_.site; j + 2 < s_.M - s_.site; ++j)
        if (j > 0 || j + 2 < 0) out.push_back(j);
    }
    return out;
  }

  PerturbativeMcP finish() {
    double n2 = 0.0;
    for (auto& [k, v] : raw_) n2 += v * v;
    s_.norm = std::sqrt(n2);
    for (auto& [k, v] : raw_)
      if (v != 0.0) s_.amplitudes[k] = v / s_.norm;
    return s_;
  }

 private:
  PerturbativeMcP s_;
  std::map<std::uint64_t, double> raw_;
  bool ring_ = true;
};

void first_order_terms(Builder& b, double d) {
  b.add({}, 1.0);
  b.add({-1}, -d / 8.0);
  b.add({+1}, d / 8.0);
}

}  // namespace

PerturbativeMcP mcp_first_order(const ModelParams& p, int site) {
  Builder b(p, site, 1);
  const double d = p.d;
  first_order_terms(b, d);
  for (int j : b.pair_offsets()) b.add({j, j + 1}, d / 16.0);
  return b.finish();
}

PerturbativeMcP mcp_second_order(const ModelParams& p, int site) {
  Builder b(p, site, 2);
  const double d = p.d, d2 = p.d * p.d;
  first_order_terms(b, d);
  b.add({-2}, -3.0 * d2 / 64.0);
  b.add({+2}, 3.0 * d2 / 64.0);
  b.add({-1, +1}, -d2 / 256.0);
  const auto pairs = b.pair_offsets();
  for (int j : pairs) {
    b.add({j, j + 1}, d / 16.0);
    b.add({-1, j, j + 1}, -d2 / 192.0);
    b.add({+1, j, j + 1}, d2 / 192.0);
  }
  // next-nearest pairs (j, j+2) with j, j+1, j+2 all off the monopole
  for (int j : b.triple_offsets()) b.add({j, j + 2}, d2 / 512.0);
  for (size_t a = 0; a < pairs.size(); ++a)
    for (size_t c = a + 1; c < pairs.size(); ++c)
      b.add({pairs[a], pairs[a] + 1, pairs[c], pairs[c] + 1}, d2 / 256.0);
  return b.finish();
}

double raw_coefficient(const PerturbativeMcP& s, const std::vector<int>& cells) {
  std::uint64_t key = 0;
  for (int c : cells) key |= std::uint64_t{1} << (((c % s.M) + s.M) % s.M);
  auto it = s.amplitudes.find(key);
  return it == s.amplitudes.end() ? 0.0 : it->second * s.norm;
}

Vec density(const PerturbativeMcP& s) {
  Vec n = Vec::Zero(s.M);
  for (auto& [k, v] : s.amplitudes)
    for (int c = 0; c < s.M; ++c)
      if ((k >> c) & 1) n(c) += v * v;
  return n;
}

Vec chain_vector(const PerturbativeMcP& s) {
  const int L = s.M - 1;
  Vec v = Vec::Zero(int64_t{1} << L);
  for (auto& [k, a] : s.amplitudes) {
    std::uint64_t idx = 0;
    for (int t = 0; t < L; ++t) {
      const int c = (s.site + 1 + t) % s.M;
      if ((k >> c) & 1) idx |= std::uint64_t{1} << t;
    }
    v(static_cast<int64_t>(idx)) = a;
  }
  return v;
}

double relative_deviation(const Vec& a, const Vec& b) { return (a - b).norm() / b.norm(); }

}  // namespace mcp::pt
