#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "ftfp/matrix.hpp"

namespace ftfp {

using Demand = std::int64_t;

/// A fault-tolerant facility placement instance.
///
/// Any number of facilities may be built at a site; client j must be connected
/// to r_j distinct facilities. `dist(i, j)` is the cost of one connection from
/// client j to a facility at site i.
struct Instance {
  std::vector<double> site_costs;  // f_i
  std::vector<Demand> demands;     // r_j
  Matrix<double> dist;             // n x m
  std::string name;

  std::size_t num_sites() const noexcept { return site_costs.size(); }
  std::size_t num_clients() const noexcept { return demands.size(); }
  Demand max_demand() const;  // P
  Demand min_demand() const;  // R
  bool all_demands_zero() const;

  bool operator==(const Instance&) const = default;
};

struct GenParams {
  int sites = 1;
  int clients = 1;
  Demand demand_min = 1;
  Demand demand_max = 1;
  double cost_min = 0.0;
  double cost_max = 1.0;
  std::uint64_t seed = 0;
};

struct Violation {
  std::string kind;     // e.g. "metric", "negative_cost"
  std::string message;  // names the indices (1-based) and the inequality
};

/// Parses the `ftfp 1` text format. Does not validate.
Instance parse_instance(std::istream& in);
Instance parse_instance_string(std::string_view text);
Instance read_instance_file(const std::string& path);

/// Writes the `ftfp 1` format with shortest round-trip reals.
void write_instance(std::ostream& out, const Instance& inst);
std::string serialize_instance(const Instance& inst);

/// Returns every violated invariant. Empty means ok.
///
/// The metric is checked in bipartite form: d_ij <= d_il + d_kl + d_kj for all
/// sites i,k and clients j,l, with a relative tolerance of 1e-9.
std::vector<Violation> validate(const Instance& inst);

/// Euclidean unit-square instance from a seeded mt19937_64 stream.
Instance generate(const GenParams& p);

/// Copy of `inst` with every demand set to `s`.
Instance uniform_demand_copy(const Instance& inst, Demand s);

/// Copy of `inst` with the given demands.
Instance with_demands(const Instance& inst, std::vector<Demand> demands);

/// Shortest decimal form that parses back to the same double.
std::string format_real(double v);

}  // namespace ftfp
