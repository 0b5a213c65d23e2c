#pragma once

#include <vector>

#include "ftfp/decompose.hpp"
#include "ftfp/instance.hpp"
#include "ftfp/solution.hpp"

namespace ftfp {

/// How many single-facility copies each site is split into.
struct SplitMap {
  std::vector<Demand> copies;            // per original site
  std::size_t total_copies = 0;
  std::vector<std::size_t> copy_to_site;  // copies are laid out site by site

  static SplitMap from_copies(std::vector<Demand> copies);
};

/// An instance where site i may host at most caps[i] facilities. Costs equal
/// those of the instance where site i is split into caps[i] unit copies.
struct CappedInstance {
  Instance base;
  std::vector<Demand> caps;
};

/// max(Pbar, 2) copies per site when the residual is non-empty, else zeros.
/// Requires a keep-one-back decomposition.
std::vector<Demand> split_count_reduce(const Decomposition& dec);

/// max(n - 1, 1) copies per site when `residual` has any positive demand, else zeros.
std::vector<Demand> split_count_large(const Instance& residual);

CappedInstance to_capped(const Instance& inst, std::vector<Demand> copies);

/// The literally split single-facility instance; one site per copy.
Instance materialize_split(const Instance& inst, const SplitMap& map);

/// Maps a solution over copies back onto the original sites by summation.
///
/// Accepts either a solution over `map.total_copies` unit sites or one already
/// in capped form over the original sites (checked against the copy counts).
/// Throws PreconditionError when `s` is not feasible for that shape.
IntegralSolution merge_solution(const IntegralSolution& s, const SplitMap& map);

}  // namespace ftfp
