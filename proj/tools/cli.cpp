#include "cli.hpp"

#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "heckepair/cache.hpp"
#include "heckepair/config.hpp"
#include "heckepair/hecke_algebra.hpp"
#include "heckepair/kernels.hpp"
#include "heckepair/schlichting.hpp"
#include "matrix_io.hpp"

namespace heckepair::cli {

namespace {

using ojson = nlohmann::ordered_json;

ojson integer_json(const Integer& x) {
  if (x >= std::numeric_limits<std::int64_t>::min() && x <= std::numeric_limits<std::int64_t>::max())
    return static_cast<std::int64_t>(x);
  return x.str();
}

std::string join(const std::vector<Generator>& gens) {
  std::string s;
  for (const auto& g : gens) s += (s.empty() ? "" : ", ") + g.name;
  return s;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    out.push_back(item.substr(b, item.find_last_not_of(" \t") - b + 1));
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw InvalidInput("cannot write file " + path.string());
  f << text;
  if (!f) throw InvalidInput("cannot write file " + path.string());
}

std::string cycles_string(const Permutation& p, const std::vector<CosetId>& carrier) {
  std::string s;
  for (const auto& cycle : p.cycles()) {
    s += "(";
    for (std::size_t i = 0; i < cycle.size(); ++i) s += (i ? " " : "") + std::to_string(carrier[cycle[i]]);
    s += ")";
  }
  return s.empty() ? "()" : s;
}

struct Options {
  std::string config;
  std::string cache;
  int radius = 0;
  std::string dot;
  std::vector<std::string> mul;
  bool table = false;
  std::string probe;
  std::string matrix;
  bool cnd = false;
  bool pos = false;
  std::optional<double> tol;
  std::size_t base = 0;
  std::string to_psi;
  std::string to_kernel;
  std::string out_path;
};

class Runner {
 public:
  Runner(const Options& o, std::ostream& out) : o_(o), out_(out) {}

  BallTable table(const PairConfig& cfg, int radius) const {
    if (o_.cache.empty()) return expand_ball(cfg.presentation(), radius);
    return cached_expand_ball(o_.cache, cfg, radius);
  }

  int pair_describe() {
    const PairConfig cfg = load_config(o_.config);
    const PairPresentation pres = cfg.presentation();
    const auto known = known_completion(pres);
    out_ << "pair: " << pres.describe() << "\n"
         << "family: " << family_name(pres.family()) << "\n"
         << "gamma_generators: " << join(pres.gamma_generators()) << "\n"
         << "lambda_generators: " << join(pres.lambda_generators()) << "\n"
         << "known_completion: " << known.value_or("none") << "\n";
    return kExitOk;
  }

  int ball() {
    const PairConfig cfg = load_config(o_.config);
    const BallTable t = table(cfg, o_.radius);
    if (!o_.dot.empty()) {
      std::ostringstream dot;
      write_dot(t, dot);
      write_text_file(o_.dot, dot.str());
    }
    try {
      write_growth_csv(growth(t, o_.radius), out_);
    } catch (const BudgetExceeded& e) {
      out_ << "# partial: " << e.what() << "; rows complete up to radius " << e.completed_radius() << "\n";
      if (e.completed_radius() >= 0) write_growth_csv(growth(t, e.completed_radius()), out_);
      return kExitBudget;
    }
    return kExitOk;
  }

  int orbits() {
    const PairConfig cfg = load_config(o_.config);
    const BallTable t = table(cfg, o_.radius);
    std::vector<DoubleCoset> list;
    bool partial = false;
    try {
      list = double_cosets_up_to(t, o_.radius);
    } catch (const BudgetExceeded& e) {
      partial = true;
      out_ << "# partial: " << e.what() << "; " << t.incomplete_cosets().size()
           << " cosets of the layer ball have unclosed orbits (max_orbit = " << cfg.budgets.max_orbit << ")\n";
      for (const auto& dc : t.orbits())
        if (dc.depth <= o_.radius) list.push_back(dc);
    }
    // min_layer is blank when every member lies beyond the Schreier layer ball
    out_ << "id,rep,degree,depth,min_layer\n";
    for (const auto& dc : list) {
      out_ << dc.id << "," << t.rep_word(dc.rep_coset) << "," << dc.degree << "," << dc.depth << ",";
      if (dc.min_layer >= 0) out_ << dc.min_layer;
      out_ << "\n";
    }
    return partial ? kExitBudget : kExitOk;
  }

  int hecke() {
    const PairConfig cfg = load_config(o_.config);
    const BallTable t = table(cfg, 2 * o_.radius);
    if (o_.mul.empty()) {
      write_multiplication_table_csv(t, o_.radius, out_);
      return kExitOk;
    }
    const auto& pres = t.presentation();
    const auto locate = [&](const std::string& word) -> const DoubleCoset& {
      const auto c = t.find(pres.parse_word(word));
      const auto o = c ? t.orbit_of(*c) : std::nullopt;
      if (!o || t.orbits()[*o].depth > o_.radius)
        throw OutOfRange("hecke: double coset of '" + word + "' has depth above --radius " + std::to_string(o_.radius),
                         -1);
      return t.orbits()[*o];
    };
    const DoubleCoset& a = locate(o_.mul[0]);
    const DoubleCoset& b = locate(o_.mul[1]);
    ojson j;
    j["a"] = a.id;
    j["b"] = b.id;
    j["terms"] = ojson::array();
    for (const auto& [d, c] : convolve(a, b, t).terms) j["terms"].push_back(ojson{{"d", d}, {"coeff", integer_json(c)}});
    out_ << j.dump(2) << "\n";
    return kExitOk;
  }

  int schlichting() {
    const PairConfig cfg = load_config(o_.config);
    const BallTable t = table(cfg, o_.radius);
    const auto& pres = t.presentation();
    const FiniteLevelCompletion flc = level_action(t, o_.radius);
    ojson j;
    j["level"] = o_.radius;
    j["carrier_size"] = flc.carrier().size();
    ojson names = ojson::array(), cycles = ojson::array();
    for (std::size_t g = 0; g < flc.generators().size(); ++g) {
      names.push_back(pres.lambda_generators()[g].name);
      cycles.push_back(cycles_string(flc.generators()[g], flc.carrier()));
    }
    j["generators"] = names;
    j["generator_cycles"] = cycles;
    j["order"] = integer_json(flc.order());
    if (o_.radius > 0) j["restricts_to_previous"] = restriction_check(flc, level_action(t, o_.radius - 1));
    const auto known = known_completion(pres);
    j["known_completion"] = known ? ojson(*known) : ojson(nullptr);
    if (!o_.probe.empty()) {
      const auto words = split_list(o_.probe);
      std::vector<GroupElement> elements;
      for (const auto& w : words) elements.push_back(pres.parse_word(w));
      const CorePolicyReport report = core_probe(t, elements, o_.radius);
      ojson probes = ojson::array();
      for (std::size_t i = 0; i < words.size(); ++i) {
        const auto& p = report.probes[i];
        probes.push_back(ojson{{"element", words[i]},
                               {"nontrivial_at", p.nontrivial_at ? ojson(*p.nontrivial_at) : ojson(nullptr)}});
      }
      j["probes"] = probes;
    }
    out_ << j.dump(2) << "\n";
    return kExitOk;
  }

  int kernel_check() {
    const KernelMatrix k = load_kernel(o_.matrix, kDefaultTolerance);
    const double tol = o_.tol.value_or(k.tol);
    const bool positive = o_.pos;
    const KernelVerdict v = positive ? is_positive_type(k, tol) : is_cnd(k, tol);
    ojson j;
    j["test"] = positive ? "positive_type" : "cnd";
    j["size"] = k.size();
    j["tol"] = tol;
    j["yes"] = v.yes;
    j["eigenvalue"] = v.eigenvalue;
    j["witness"] = v.yes ? ojson(nullptr) : ojson(v.witness);
    j["witness_value"] = v.yes ? ojson(nullptr) : ojson(v.witness_value);
    out_ << j.dump(2) << "\n";
    return kExitOk;
  }

  int kernel_embed(std::ostream& err) {
    const KernelMatrix k = load_kernel(o_.matrix, kDefaultTolerance);
    try {
      write_rows_csv(schoenberg_embed(k, o_.base, o_.tol.value_or(k.tol)), out_);
    } catch (const KernelRejected& e) {
      err << "error: " << e.what() << "\nwitness: " << ojson(e.witness()).dump() << "\n";
      return kExitInvalid;
    }
    return kExitOk;
  }

  int kernel_transfer() {
    const PairConfig cfg = load_config(o_.config);
    const BallTable t = table(cfg, 2 * o_.radius);
    if (!o_.to_psi.empty()) return to_psi(cfg, t);
    return to_kernel(t);
  }

 private:
  int to_psi(const PairConfig& cfg, const BallTable& t) {
    KernelMatrix k = load_kernel(o_.to_psi, cfg.tol);
    if (!std::filesystem::exists(sidecar_path(o_.to_psi))) {
      auto points = ball_points(t, o_.radius);
      if (points.size() != k.size())
        throw InvalidInput("kernel transfer: matrix has " + std::to_string(k.size()) + " rows but B(Lambda," +
                           std::to_string(o_.radius) + ") has " + std::to_string(points.size()) +
                           " points; give a sidecar with the coset ids");
      k.points = std::move(points);
    }
    const double tol = o_.tol.value_or(k.tol);
    const auto result = kernel_to_biinvariant(k, t, tol);
    ojson j;
    if (const auto* bad = std::get_if<TransferViolation>(&result)) {
      j["violation"] = ojson{{"double_coset", bad->double_coset},
                             {"first", {bad->first.first, bad->first.second}},
                             {"second", {bad->second.first, bad->second.second}},
                             {"first_value", bad->first_value},
                             {"second_value", bad->second_value}};
      out_ << j.dump(2) << "\n";
      return kExitInvalid;
    }
    const auto& psi = std::get<BiinvariantFunction>(result);
    j["radius"] = o_.radius;
    j["support_radius"] = psi.support_radius;
    j["propagation"] = propagation(k, t);
    j["values"] = ojson::array();
    for (const auto& [d, v] : psi.values)
      j["values"].push_back(ojson{{"d", d}, {"rep", t.rep_word(t.orbits()[d].rep_coset)}, {"value", v}});
    emit(j.dump(2) + "\n");
    return kExitOk;
  }

  int to_kernel(const BallTable& t) {
    ojson j;
    try {
      j = ojson::parse(read_file(o_.to_kernel));
    } catch (const nlohmann::json::exception& e) {
      throw InvalidInput("psi file " + o_.to_kernel + ": " + e.what());
    }
    BiinvariantFunction psi;
    psi.support_radius = 2 * o_.radius;
    const auto& pres = t.presentation();
    try {
      for (const auto& entry : j.at("values")) {
        std::size_t d = 0;
        if (entry.contains("rep")) {
          const auto c = t.find(pres.parse_word(entry.at("rep").get<std::string>()));
          const auto o = c ? t.orbit_of(*c) : std::nullopt;
          if (!o) throw OutOfRange("psi value outside the table", 2 * o_.radius);
          d = *o;
        } else {
          d = entry.at("d").get<std::size_t>();
          if (d >= t.orbits().size()) throw OutOfRange("psi double coset id out of range", -1);
        }
        const double v = entry.at("value").get<double>();
        if (v != 0.0) psi.values[d] = v;
      }
    } catch (const nlohmann::json::exception& e) {
      throw InvalidInput("psi file " + o_.to_kernel + ": " + e.what());
    }
    const KernelMatrix k = biinvariant_to_kernel(psi, t, o_.radius);
    std::ostringstream csv;
    write_matrix_csv(k.values, csv);
    emit(csv.str());
    if (!o_.out_path.empty()) {
      std::ostringstream side;
      write_sidecar(k, side);
      write_text_file(sidecar_path(o_.out_path), side.str());
    }
    return kExitOk;
  }

  void emit(const std::string& text) {
    if (o_.out_path.empty()) out_ << text;
    else write_text_file(o_.out_path, text);
  }

  const Options& o_;
  std::ostream& out_;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite-scale computations on Hecke pairs"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--cache", o.cache, "Ball-table cache directory");

  auto* pair = app.add_subcommand("pair", "Pair information");
  pair->require_subcommand(1);
  auto* describe = pair->add_subcommand("describe", "Family, generators and known completion");
  describe->add_option("config", o.config)->required();

  auto* ball = app.add_subcommand("ball", "Growth of B(Lambda, R)");
  ball->add_option("config", o.config)->required();
  ball->add_option("--radius", o.radius)->required()->check(CLI::NonNegativeNumber);
  ball->add_option("--dot", o.dot, "Write the Schreier graph in DOT format");

  auto* orbits = app.add_subcommand("orbits", "Double cosets of depth <= R");
  orbits->add_option("config", o.config)->required();
  orbits->add_option("--radius", o.radius)->required()->check(CLI::NonNegativeNumber);

  auto* hecke = app.add_subcommand("hecke", "Hecke algebra structure constants on double cosets of depth <= R");
  hecke->add_option("config", o.config)->required();
  hecke->add_option("--radius", o.radius)->required()->check(CLI::NonNegativeNumber);
  auto* mul = hecke->add_option("--mul", o.mul, "Two words A B")->expected(2);
  hecke->add_flag("--table", o.table, "Full multiplication table as CSV (default)")->excludes(mul);

  auto* schl = app.add_subcommand("schlichting", "Finite level K_R of the Schlichting completion");
  schl->add_option("config", o.config)->required();
  schl->add_option("--level", o.radius)->required()->check(CLI::NonNegativeNumber);
  schl->add_option("--probe", o.probe, "Comma-separated words in Lambda");

  auto* kernel = app.add_subcommand("kernel", "Kernels on the coset space");
  kernel->require_subcommand(1);
  auto* check = kernel->add_subcommand("check", "Positive type / conditionally negative type verdict");
  check->add_option("matrix", o.matrix)->required();
  auto* cnd = check->add_flag("--cnd", o.cnd, "Conditionally negative type (default)");
  check->add_flag("--pos", o.pos, "Positive type")->excludes(cnd);
  check->add_option("--tol", o.tol);
  auto* embed = kernel->add_subcommand("embed", "Schoenberg embedding coordinates");
  embed->add_option("matrix", o.matrix)->required();
  embed->add_option("--base", o.base);
  embed->add_option("--tol", o.tol);
  auto* transfer = kernel->add_subcommand("transfer", "Kernel <-> bi-invariant function");
  transfer->add_option("config", o.config)->required();
  transfer->add_option("--radius", o.radius)->required()->check(CLI::NonNegativeNumber);
  auto* to_psi = transfer->add_option("--to-psi", o.to_psi, "Kernel CSV on B(Lambda, R)");
  auto* to_kernel = transfer->add_option("--to-kernel", o.to_kernel, "Bi-invariant function JSON");
  to_psi->excludes(to_kernel);
  transfer->add_option("--out", o.out_path);
  transfer->add_option("--tol", o.tol);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }
  if (transfer->parsed() && o.to_psi.empty() && o.to_kernel.empty()) {
    err << "error: kernel transfer needs --to-psi or --to-kernel\n";
    return kExitInvalid;
  }

  Runner r(o, out);
  try {
    if (describe->parsed()) return r.pair_describe();
    if (ball->parsed()) return r.ball();
    if (orbits->parsed()) return r.orbits();
    if (hecke->parsed()) return r.hecke();
    if (schl->parsed()) return r.schlichting();
    if (check->parsed()) return r.kernel_check();
    if (embed->parsed()) return r.kernel_embed(err);
    if (transfer->parsed()) return r.kernel_transfer();
  } catch (const BudgetExceeded& e) {
    out << "# partial: " << e.what() << "\n";
    err << "budget exhausted: " << e.what() << "\n";
    return kExitBudget;
  } catch (const OutOfRange& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}

}  // namespace heckepair::cli
