#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tourguide/rng.hpp"

namespace tourguide {

// Client requests over AOIs. Column i is AOI index i, which is tour site i + 1.
class DemandMatrix {
 public:
  DemandMatrix() = default;
  DemandMatrix(int clients, int aois);

  int clients() const { return clients_; }
  int aois() const { return aois_; }
  bool requested(int client, int aoi) const { return a_[index(client, aoi)] != 0; }
  void set(int client, int aoi, bool value = true) { a_[index(client, aoi)] = value ? 1 : 0; }

  // AOI indices requested by one client, ascending.
  std::vector<int> requests(int client) const;
  // Number of clients requesting each AOI.
  std::vector<int> aoi_counts() const;
  int total() const;

  bool operator==(const DemandMatrix& other) const = default;

 private:
  std::size_t index(int client, int aoi) const;

  int clients_ = 0;
  int aois_ = 0;
  std::vector<std::uint8_t> a_;
};

// P(floor(|g|) = k), g ~ N(0, sigma^2), tail mass folded onto n - 1.
std::vector<double> popularity_pmf(int n, double sigma);

class RankSampler {
 public:
  RankSampler(int n, double sigma);
  int operator()(Rng& rng) const;
  const std::vector<double>& pmf() const { return pmf_; }

 private:
  std::vector<double> pmf_;
  std::vector<double> cdf_;
};

inline constexpr int kDrawsPerClient = 5;
inline constexpr int kMaxClients = 10;

// Each client draws kDrawsPerClient ranks and keeps the distinct ones.
// `aoi_of_rank[k]` is the AOI index holding popularity rank k. Raw draws are
// appended to `draws` when given.
DemandMatrix sample_demands(int n_clients, const std::vector<int>& aoi_of_rank, double sigma,
                            std::uint64_t seed, std::vector<int>* draws = nullptr);
// AOI index equals popularity rank.
DemandMatrix sample_demands(int n_clients, int n, double sigma, std::uint64_t seed,
                            std::vector<int>* draws = nullptr);

// Inverse of a rank permutation: result[rank] = AOI index.
std::vector<int> aois_by_rank(const std::vector<int>& popularity_rank);

// One line per client listing requested site ids (AOI index + 1).
std::string format_demands(const DemandMatrix& d);
DemandMatrix parse_demands(std::string_view content, int aois);

}  // namespace tourguide
