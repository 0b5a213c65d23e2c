#include "ftfp/instance.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <random>
#include <sstream>

#include "ftfp/errors.hpp"

namespace ftfp {

Demand Instance::max_demand() const {
  return demands.empty() ? 0 : *std::max_element(demands.begin(), demands.end());
}

Demand Instance::min_demand() const {
  return demands.empty() ? 0 : *std::min_element(demands.begin(), demands.end());
}

bool Instance::all_demands_zero() const {
  return std::all_of(demands.begin(), demands.end(), [](Demand r) { return r == 0; });
}

std::string format_real(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

struct Token {
  std::string text;
  int line;
};

class Tokenizer {
 public:
  explicit Tokenizer(std::istream& in) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      last_line_ = lineno;
      auto hash = line.find('#');
      if (hash != std::string::npos) {
        std::string_view comment(line);
        comment.remove_prefix(hash + 1);
        while (!comment.empty() && comment.front() == ' ') comment.remove_prefix(1);
        if (tokens_.empty() && comment.starts_with("name:")) {
          comment.remove_prefix(5);
          while (!comment.empty() && comment.front() == ' ') comment.remove_prefix(1);
          name_ = std::string(comment);
        }
        line.resize(hash);
      }
      std::istringstream ls(line);
      std::string tok;
      while (ls >> tok) tokens_.push_back({tok, lineno});
    }
  }

  const Token& next(const char* expecting) {
    if (pos_ >= tokens_.size()) {
      throw ParseError(last_line_, std::string("unexpected end of input, expected ") + expecting);
    }
    return tokens_[pos_++];
  }

  void expect_end() const {
    if (pos_ < tokens_.size()) {
      throw ParseError(tokens_[pos_].line, "unexpected trailing token '" + tokens_[pos_].text + "'");
    }
  }

  const std::string& name() const { return name_; }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  int last_line_ = 0;
  std::string name_;
};

template <class T>
bool parse_number(const std::string& s, T& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last;
}

double read_real(Tokenizer& tz, const char* what) {
  const Token& t = tz.next(what);
  double v = 0;
  if (!parse_number(t.text, v) || !std::isfinite(v)) {
    throw ParseError(t.line, std::string("expected a real for ") + what + ", got '" + t.text + "'");
  }
  if (v < 0) throw ParseError(t.line, std::string("negative value for ") + what);
  return v;
}

std::int64_t read_int(Tokenizer& tz, const char* what) {
  const Token& t = tz.next(what);
  std::int64_t v = 0;
  if (!parse_number(t.text, v)) {
    double d = 0;
    if (parse_number(t.text, d)) {
      throw ParseError(t.line, std::string("non-integer value for ") + what + ": '" + t.text + "'");
    }
    throw ParseError(t.line, std::string("expected an integer for ") + what + ", got '" + t.text + "'");
  }
  if (v < 0) throw ParseError(t.line, std::string("negative value for ") + what);
  return v;
}

}  // namespace

Instance parse_instance(std::istream& in) {
  Tokenizer tz(in);
  const Token& magic = tz.next("header 'ftfp'");
  if (magic.text != "ftfp") throw ParseError(magic.line, "malformed header: expected 'ftfp'");
  const Token& version = tz.next("format version");
  if (version.text != "1") throw ParseError(version.line, "unsupported version '" + version.text + "'");

  const std::int64_t n = read_int(tz, "site count");
  const std::int64_t m = read_int(tz, "client count");

  Instance inst;
  inst.name = tz.name();
  inst.site_costs.resize(static_cast<std::size_t>(n));
  inst.demands.resize(static_cast<std::size_t>(m));
  for (auto& f : inst.site_costs) f = read_real(tz, "site cost");
  for (auto& r : inst.demands) r = read_int(tz, "demand");
  inst.dist = Matrix<double>(static_cast<std::size_t>(n), static_cast<std::size_t>(m));
  for (auto& d : inst.dist.data()) d = read_real(tz, "distance");
  tz.expect_end();
  return inst;
}

Instance parse_instance_string(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_instance(in);
}

Instance read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file '" + path + "'");
  return parse_instance(in);
}

void write_instance(std::ostream& out, const Instance& inst) {
  if (!inst.name.empty()) out << "# name: " << inst.name << '\n';
  out << "ftfp 1\n" << inst.num_sites() << ' ' << inst.num_clients() << '\n';
  auto join = [&out](const auto& values, auto fmt) {
    bool first = true;
    for (const auto& v : values) {
      if (!first) out << ' ';
      out << fmt(v);
      first = false;
    }
    out << '\n';
  };
  join(inst.site_costs, format_real);
  join(inst.demands, [](Demand r) { return std::to_string(r); });
  for (std::size_t i = 0; i < inst.num_sites(); ++i) join(inst.dist.row(i), format_real);
}

std::string serialize_instance(const Instance& inst) {
  std::ostringstream out;
  write_instance(out, inst);
  return out.str();
}

std::vector<Violation> validate(const Instance& inst) {
  std::vector<Violation> out;
  const std::size_t n = inst.num_sites();
  const std::size_t m = inst.num_clients();
  if (n == 0) out.push_back({"shape", "instance has no sites"});
  if (m == 0) out.push_back({"shape", "instance has no clients"});
  if (inst.dist.rows() != n || inst.dist.cols() != m) {
    out.push_back({"shape", "distance matrix is not n x m"});
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double f = inst.site_costs[i];
    if (!(f >= 0) || !std::isfinite(f)) {
      out.push_back({"site_cost", "f_" + std::to_string(i + 1) + " = " + format_real(f) + " is not a finite non-negative real"});
    }
  }
  for (std::size_t j = 0; j < m; ++j) {
    if (inst.demands[j] < 0) {
      out.push_back({"demand", "r_" + std::to_string(j + 1) + " = " + std::to_string(inst.demands[j]) + " is negative"});
    }
  }
  double scale = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double d = inst.dist(i, j);
      if (!(d >= 0) || !std::isfinite(d)) {
        out.push_back({"distance", "d_" + std::to_string(i + 1) + std::to_string(j + 1) + " = " + format_real(d) +
                                       " is not a finite non-negative real"});
      } else {
        scale = std::max(scale, d);
      }
    }
  }
  if (!out.empty()) return out;

  // d_ij <= d_il + d_kl + d_kj over all (i, k, j, l).
  const double tol = 1e-9 * (1.0 + scale);
  auto idx = [](std::size_t a, std::size_t b) {
    return std::to_string(a + 1) + "," + std::to_string(b + 1);
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double lhs = inst.dist(i, j);
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i) continue;
        for (std::size_t l = 0; l < m; ++l) {
          if (l == j) continue;
          const double rhs = inst.dist(i, l) + inst.dist(k, l) + inst.dist(k, j);
          if (lhs > rhs + tol) {
            out.push_back({"metric", "d_" + idx(i, j) + " <= d_" + idx(i, l) + " + d_" + idx(k, l) + " + d_" + idx(k, j) +
                                         " fails (" + format_real(lhs) + " > " + format_real(inst.dist(i, l)) + "+" +
                                         format_real(inst.dist(k, l)) + "+" + format_real(inst.dist(k, j)) + ")"});
          }
        }
      }
    }
  }
  return out;
}

namespace {

double unit_real(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % bound;
}

}  // namespace

Instance generate(const GenParams& p) {
  if (p.sites < 1 || p.clients < 1) throw PreconditionError("generate: sites and clients must be positive");
  if (p.demand_min < 0 || p.demand_min > p.demand_max) {
    throw PreconditionError("generate: need 0 <= demand_min <= demand_max");
  }
  if (!(p.cost_min >= 0) || !(p.cost_min <= p.cost_max) || !std::isfinite(p.cost_max)) {
    throw PreconditionError("generate: need 0 <= cost_min <= cost_max");
  }
  const auto n = static_cast<std::size_t>(p.sites);
  const auto m = static_cast<std::size_t>(p.clients);
  std::mt19937_64 rng(p.seed);
  std::vector<std::pair<double, double>> site_pts(n), client_pts(m);
  for (auto& [x, y] : site_pts) {
    x = unit_real(rng);
    y = unit_real(rng);
  }
  for (auto& [x, y] : client_pts) {
    x = unit_real(rng);
    y = unit_real(rng);
  }
  Instance inst;
  inst.name = "gen-seed" + std::to_string(p.seed);
  inst.site_costs.resize(n);
  for (auto& f : inst.site_costs) f = p.cost_min + (p.cost_max - p.cost_min) * unit_real(rng);
  inst.demands.resize(m);
  const auto span = static_cast<std::uint64_t>(p.demand_max - p.demand_min) + 1;
  for (auto& r : inst.demands) r = p.demand_min + static_cast<Demand>(uniform_below(rng, span));
  inst.dist = Matrix<double>(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      inst.dist(i, j) = std::hypot(site_pts[i].first - client_pts[j].first, site_pts[i].second - client_pts[j].second);
    }
  }
  return inst;
}

Instance uniform_demand_copy(const Instance& inst, Demand s) {
  return with_demands(inst, std::vector<Demand>(inst.num_clients(), s));
}

Instance with_demands(const Instance& inst, std::vector<Demand> demands) {
  if (demands.size() != inst.num_clients()) throw PreconditionError("with_demands: demand vector has wrong length");
  Instance out = inst;
  out.demands = std::move(demands);
  return out;
}

}  // namespace ftfp
