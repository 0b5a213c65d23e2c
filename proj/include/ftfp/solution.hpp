#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ftfp/instance.hpp"

namespace ftfp {

/// Facility counts per site and connection counts per (site, client).
struct IntegralSolution {
  std::vector<Demand> y;
  Matrix<Demand> x;
  double cost = 0;

  bool operator==(const IntegralSolution&) const = default;
};

/// All-zero solution shaped for n sites and m clients.
IntegralSolution empty_solution(std::size_t n, std::size_t m);

/// sum_i f_i y_i + sum_ij d_ij x_ij
double solution_cost(const Instance& inst, const IntegralSolution& s);

/// `ftfp-sol 1` text format: header, `n m`, the y row, then n rows of x.
void write_solution(std::ostream& out, const IntegralSolution& s);
IntegralSolution parse_solution(std::istream& in);
IntegralSolution read_solution_file(const std::string& path);

}  // namespace ftfp
