#include "ftfp/solution.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "ftfp/errors.hpp"

namespace ftfp {

IntegralSolution empty_solution(std::size_t n, std::size_t m) {
  IntegralSolution s;
  s.y.assign(n, 0);
  s.x = Matrix<Demand>(n, m);
  return s;
}

double solution_cost(const Instance& inst, const IntegralSolution& s) {
  double c = 0;
  for (std::size_t i = 0; i < inst.num_sites(); ++i) {
    c += inst.site_costs[i] * static_cast<double>(s.y[i]);
    for (std::size_t j = 0; j < inst.num_clients(); ++j) c += inst.dist(i, j) * static_cast<double>(s.x(i, j));
  }
  return c;
}

void write_solution(std::ostream& out, const IntegralSolution& s) {
  out << "ftfp-sol 1\n" << s.x.rows() << ' ' << s.x.cols() << '\n';
  for (std::size_t i = 0; i < s.y.size(); ++i) out << (i ? " " : "") << s.y[i];
  out << '\n';
  for (std::size_t i = 0; i < s.x.rows(); ++i) {
    for (std::size_t j = 0; j < s.x.cols(); ++j) out << (j ? " " : "") << s.x(i, j);
    out << '\n';
  }
}

IntegralSolution parse_solution(std::istream& in) {
  std::string line;
  int lineno = 0;
  std::vector<std::pair<std::string, int>> tokens;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) tokens.emplace_back(tok, lineno);
  }
  std::size_t pos = 0;
  auto next = [&](const char* what) -> const std::pair<std::string, int>& {
    if (pos >= tokens.size()) throw ParseError(lineno, std::string("unexpected end of input, expected ") + what);
    return tokens[pos++];
  };
  auto next_int = [&](const char* what) {
    const auto& [tok, ln] = next(what);
    Demand v = 0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
      throw ParseError(ln, std::string("expected an integer for ") + what + ", got '" + tok + "'");
    }
    return v;
  };
  if (const auto& [tok, ln] = next("header"); tok != "ftfp-sol") throw ParseError(ln, "malformed header: expected 'ftfp-sol'");
  if (const auto& [tok, ln] = next("version"); tok != "1") throw ParseError(ln, "unsupported version '" + tok + "'");
  const Demand n = next_int("site count");
  const Demand m = next_int("client count");
  if (n < 0 || m < 0) throw ParseError(tokens[pos - 1].second, "negative dimension");
  IntegralSolution s = empty_solution(static_cast<std::size_t>(n), static_cast<std::size_t>(m));
  for (auto& v : s.y) v = next_int("facility count");
  for (auto& v : s.x.data()) v = next_int("connection count");
  if (pos < tokens.size()) throw ParseError(tokens[pos].second, "unexpected trailing token '" + tokens[pos].first + "'");
  return s;
}

IntegralSolution read_solution_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open solution file '" + path + "'");
  return parse_solution(in);
}

}  // namespace ftfp
