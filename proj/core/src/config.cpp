#include "heckepair/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "heckepair/error.hpp"

namespace heckepair {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size())
    throw InvalidInput("config: bad value for " + std::string(key) + ": '" + std::string(value) + "'");
  return out;
}

double parse_double(std::string_view key, std::string_view value) {
  std::string s(value);
  std::size_t used = 0;
  double out = 0;
  try {
    out = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw InvalidInput("config: bad value for " + std::string(key) + ": '" + s + "'");
  return out;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void PairConfig::validate() const {
  switch (family) {
    case Family::sl2_s_integers: {
      if (params.primes.empty()) throw InvalidInput("config: sl2_s_integers needs a nonempty prime set");
      std::set<int> seen;
      for (int p : params.primes) {
        if (!is_prime(p)) throw InvalidInput("config: " + std::to_string(p) + " is not prime");
        if (!seen.insert(p).second) throw InvalidInput("config: repeated prime " + std::to_string(p));
      }
      break;
    }
    case Family::baumslag_solitar:
      if (params.m < 1 || params.n < 1) throw InvalidInput("config: baumslag_solitar needs m, n >= 1");
      break;
    case Family::lamplighter:
      if (params.lamp_order < 2) throw InvalidInput("config: lamplighter needs lamp_order >= 2");
      if (params.lamp_window < 1) throw InvalidInput("config: lamplighter needs lamp_window >= 1");
      break;
    case Family::free2:
      break;
  }
  if (budgets.max_ball < 1 || budgets.max_orbit < 1) throw InvalidInput("config: budgets must be positive");
  if (budgets.max_radius < 0) throw InvalidInput("config: max_radius must be >= 0");
  if (!(tol >= 0)) throw InvalidInput("config: tol must be >= 0");
}

PairPresentation PairConfig::presentation() const {
  validate();
  return PairPresentation(family, params, budgets);
}

std::string PairConfig::canonical_text() const {
  std::ostringstream out;
  out << "family=" << family_name(family) << "\n";
  switch (family) {
    case Family::sl2_s_integers: {
      out << "primes=";
      for (std::size_t i = 0; i < params.primes.size(); ++i) out << (i ? " " : "") << params.primes[i];
      out << "\n";
      break;
    }
    case Family::baumslag_solitar:
      out << "m=" << params.m << "\nn=" << params.n << "\n";
      break;
    case Family::lamplighter:
      out << "lamp_order=" << params.lamp_order << "\nlamp_window=" << params.lamp_window << "\n";
      break;
    case Family::free2:
      break;
  }
  out << "max_ball=" << budgets.max_ball << "\nmax_orbit=" << budgets.max_orbit << "\nmax_radius=" << budgets.max_radius
      << "\ntol=" << format_double(tol) << "\n";
  return out.str();
}

std::uint64_t PairConfig::hash() const {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : canonical_text()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

PairConfig parse_config(std::string_view text) {
  PairConfig cfg;
  std::set<std::string> seen;
  bool have_family = false;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw InvalidInput("config line " + std::to_string(line_no) + ": expected key=value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) throw InvalidInput("config: duplicate key " + key);

    if (key == "family") {
      const auto f = parse_family(value);
      if (!f) throw InvalidInput("config: unknown family '" + std::string(value) + "'");
      cfg.family = *f;
      have_family = true;
    } else if (key == "primes") {
      cfg.params.primes.clear();
      std::string buf(value);
      for (char& c : buf)
        if (c == ',') c = ' ';
      std::istringstream in(buf);
      std::string tok;
      while (in >> tok) cfg.params.primes.push_back(parse_number<int>(key, tok));
    } else if (key == "m") {
      cfg.params.m = parse_number<int>(key, value);
    } else if (key == "n") {
      cfg.params.n = parse_number<int>(key, value);
    } else if (key == "lamp_order") {
      cfg.params.lamp_order = parse_number<int>(key, value);
    } else if (key == "lamp_window") {
      cfg.params.lamp_window = parse_number<int>(key, value);
    } else if (key == "max_ball") {
      cfg.budgets.max_ball = parse_number<std::size_t>(key, value);
    } else if (key == "max_orbit") {
      cfg.budgets.max_orbit = parse_number<std::size_t>(key, value);
    } else if (key == "max_radius") {
      cfg.budgets.max_radius = parse_number<int>(key, value);
    } else if (key == "tol") {
      cfg.tol = parse_double(key, value);
    } else {
      throw InvalidInput("config: unknown key '" + key + "'");
    }
  }
  if (!have_family) throw InvalidInput("config: missing family");
  cfg.validate();
  return cfg;
}

PairConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot read config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace heckepair
