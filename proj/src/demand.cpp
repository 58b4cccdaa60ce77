#include "tourguide/demand.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "tourguide/grid.hpp"

namespace tourguide {

DemandMatrix::DemandMatrix(int clients, int aois)
    : clients_(clients), aois_(aois),
      a_(static_cast<std::size_t>(std::max(clients, 0)) * std::max(aois, 0), 0) {
  if (clients < 0 || aois < 0) throw Error("demand matrix dimensions must be non-negative");
}

std::size_t DemandMatrix::index(int client, int aoi) const {
  if (client < 0 || client >= clients_ || aoi < 0 || aoi >= aois_)
    throw Error("demand index out of range");
  return static_cast<std::size_t>(client) * aois_ + aoi;
}

std::vector<int> DemandMatrix::requests(int client) const {
  std::vector<int> out;
  for (int i = 0; i < aois_; ++i)
    if (requested(client, i)) out.push_back(i);
  return out;
}

std::vector<int> DemandMatrix::aoi_counts() const {
  std::vector<int> out(aois_, 0);
  for (int l = 0; l < clients_; ++l)
    for (int i = 0; i < aois_; ++i) out[i] += a_[static_cast<std::size_t>(l) * aois_ + i];
  return out;
}

int DemandMatrix::total() const {
  return static_cast<int>(std::count(a_.begin(), a_.end(), std::uint8_t{1}));
}

std::vector<double> popularity_pmf(int n, double sigma) {
  if (n < 1) throw Error("pmf needs at least one rank");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw Error("sigma must be positive");
  const double scale = 1.0 / (sigma * std::numbers::sqrt2);
  // P(|g| >= k) = erfc(k / (sigma * sqrt 2)).
  std::vector<double> p(n);
  for (int k = 0; k + 1 < n; ++k) p[k] = std::erfc(k * scale) - std::erfc((k + 1) * scale);
  p[n - 1] = std::erfc((n - 1) * scale);
  return p;
}

RankSampler::RankSampler(int n, double sigma) : pmf_(popularity_pmf(n, sigma)), cdf_(pmf_.size()) {
  double acc = 0.0;
  for (std::size_t k = 0; k < pmf_.size(); ++k) {
    acc += pmf_[k];
    cdf_[k] = acc;
  }
  cdf_.back() = 1.0;
}

int RankSampler::operator()(Rng& rng) const {
  const double u = uniform01(rng);
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  return static_cast<int>(std::min<std::ptrdiff_t>(it - cdf_.begin(), cdf_.size() - 1));
}

std::vector<int> aois_by_rank(const std::vector<int>& popularity_rank) {
  const int n = static_cast<int>(popularity_rank.size());
  std::vector<int> out(n, -1);
  for (int i = 0; i < n; ++i) {
    const int r = popularity_rank[i];
    if (r < 0 || r >= n || out[r] >= 0) throw Error("popularity ranks must be a permutation of 0..N-1");
    out[r] = i;
  }
  return out;
}

DemandMatrix sample_demands(int n_clients, const std::vector<int>& aoi_of_rank, double sigma,
                            std::uint64_t seed, std::vector<int>* draws) {
  if (n_clients < 1) throw Error("need at least one client");
  const int n = static_cast<int>(aoi_of_rank.size());
  const RankSampler sampler(n, sigma);
  Rng rng(seed);
  DemandMatrix d(n_clients, n);
  for (int l = 0; l < n_clients; ++l) {
    for (int k = 0; k < kDrawsPerClient; ++k) {
      const int rank = sampler(rng);
      if (draws) draws->push_back(rank);
      d.set(l, aoi_of_rank[rank]);
    }
  }
  return d;
}

DemandMatrix sample_demands(int n_clients, int n, double sigma, std::uint64_t seed,
                            std::vector<int>* draws) {
  std::vector<int> identity(std::max(n, 0));
  for (int i = 0; i < n; ++i) identity[i] = i;
  return sample_demands(n_clients, identity, sigma, seed, draws);
}

std::string format_demands(const DemandMatrix& d) {
  std::string out;
  for (int l = 0; l < d.clients(); ++l) {
    bool first = true;
    for (int i : d.requests(l)) {
      if (!first) out += ' ';
      out += std::to_string(i + 1);
      first = false;
    }
    out += '\n';
  }
  return out;
}

DemandMatrix parse_demands(std::string_view content, int aois) {
  std::vector<std::vector<int>> rows;
  std::istringstream in{std::string(content)};
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    std::vector<int> row;
    std::string tok;
    while (ls >> tok) {
      char* end = nullptr;
      const long id = std::strtol(tok.c_str(), &end, 10);
      if (end != tok.c_str() + tok.size()) throw Error("bad site id in demand line: '" + tok + "'");
      if (id < 1 || id > aois) throw Error("demanded site " + tok + " out of range");
      row.push_back(static_cast<int>(id));
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  DemandMatrix d(static_cast<int>(rows.size()), aois);
  for (int l = 0; l < static_cast<int>(rows.size()); ++l)
    for (int id : rows[l]) d.set(l, id - 1);
  return d;
}

}  // namespace tourguide
