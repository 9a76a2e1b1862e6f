#include <gmp.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rado/bohr.hpp"
#include "rado/colouring.hpp"
#include "rado/constants.hpp"
#include "rado/equation.hpp"
#include "rado/fourier.hpp"
#include "rado/increment.hpp"
#include "rado/lemmas/suite.hpp"
#include "rado/matrix_game.hpp"
#include "rado/search.hpp"

#ifndef RADO_VERSION
#define RADO_VERSION "dev"
#endif

using nlohmann::json;
using namespace rado;

namespace {

constexpr int kOk = 0, kFailed = 1, kBadInput = 2, kBudget = 3;

// Nested JSON objects become CLI11 sections: {"trace": {"zp": {"N": 50}}}.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
    return dump(app, default_also).dump(2) + "\n";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw CLI::ConversionError(std::string("config file is not JSON: ") + e.what());
    }
    std::vector<CLI::ConfigItem> out;
    flatten(j, {}, out);
    return out;
  }

 private:
  static std::string scalar(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

  static void flatten(const json& j, const std::vector<std::string>& parents, std::vector<CLI::ConfigItem>& out) {
    if (!j.is_object()) throw CLI::ConversionError("config sections must be JSON objects");
    for (const auto& [k, v] : j.items()) {
      if (v.is_object()) {
        auto p = parents;
        p.push_back(k);
        flatten(v, p, out);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = k;
      if (v.is_array())
        for (const auto& e : v) item.inputs.push_back(scalar(e));
      else
        item.inputs.push_back(scalar(v));
      out.push_back(std::move(item));
    }
  }

  static json dump(const CLI::App* app, bool default_also) {
    json j = json::object();
    for (const auto* opt : app->get_options()) {
      if (opt->get_lnames().empty() || opt->get_configurable() == false) continue;
      const auto& name = opt->get_lnames().front();
      if (opt->count() > 0) {
        j[name] = opt->results().size() == 1 ? json(opt->results()[0]) : json(opt->results());
      } else if (default_also && !opt->get_default_str().empty()) {
        j[name] = opt->get_default_str();
      }
    }
    for (const auto* sub : app->get_subcommands({}))
      if (sub->parsed() || default_also) j[sub->get_name()] = dump(sub, default_also);
    return j;
  }
};

std::vector<std::int64_t> parse_ints(const std::string& text, const char* what) {
  std::vector<std::int64_t> out;
  if (text.empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoll(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument("trailing");
    } catch (const std::logic_error&) {
      throw InputError(std::string(what) + ": bad integer '" + item + "'");
    }
  }
  return out;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError("'" + path + "' is not JSON: " + e.what());
  }
}

GroupSubset subset_from(const FiniteGroup& g, const std::vector<std::int64_t>& xs) {
  GroupSubset s(g);
  for (auto x : xs) {
    if (g.is_cyclic()) {
      s.insert(g.from_int(x));
    } else {
      if (x < 0 || static_cast<std::size_t>(x) >= g.order()) throw InputError("element index out of range");
      s.insert(static_cast<std::size_t>(x));
    }
  }
  return s;
}

struct Globals {
  bool json_out = false, csv_out = false, timing = false;
  unsigned threads = 1;
  std::uint64_t seed = 0;
  std::string book_path, out_path;
  std::optional<ConstantBook> book_override;  // set by replay

  ConstantBook book() const {
    if (book_override) return *book_override;
    if (book_path.empty()) return {};
    return ConstantBook::from_json(read_json_file(book_path));
  }
};

// Emitted output: the payload for --json, rows for --csv, a human line otherwise.
struct Emit {
  json payload;
  std::string csv;
  std::string text;
};

class Cli {
 public:
  Cli() : app_("Rado numbers, Bohr sets and density-increment tracers", "rado") {
    app_.set_version_flag("--version", RADO_VERSION);
    app_.config_formatter(std::make_shared<JsonConfig>());
    app_.set_config("--config", "", "JSON config file (flags override it)");
    app_.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app_.fallthrough();
    app_.require_subcommand(1);
    auto* js = flag(&app_, "--json", g_.json_out, "emit JSON");
    flag(&app_, "--csv", g_.csv_out, "emit CSV")->excludes(js);
    flag(&app_, "--timing", g_.timing, "report wall time on stderr");
    app_.add_option("--threads", g_.threads, "worker threads")->check(CLI::Range(1u, 1024u));
    app_.add_option("--seed", g_.seed, "RNG seed")->envname("RADO_SEED");
    app_.add_option("--book", g_.book_path, "ConstantBook JSON file");
    app_.add_option("--out", g_.out_path, "write output to a file instead of stdout");
    add_regular();
    add_rado();
    add_count();
    add_bohr();
    add_lemma();
    add_trace();
    add_book();
    add_replay();
  }

  int run(std::vector<std::string> args) {
    std::reverse(args.begin(), args.end());  // CLI11 consumes a reversed vector
    try {
      app_.parse(args);
    } catch (const CLI::CallForHelp& e) {
      return app_.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
      return app_.exit(e);
    } catch (const CLI::CallForVersion& e) {
      return app_.exit(e);
    } catch (const CLI::ParseError& e) {
      std::cerr << "error: " << e.what() << "\n\n" << app_.help();
      return kBadInput;
    }
    const auto t0 = std::chrono::steady_clock::now();
    int code = kOk;
    try {
      code = action_();
    } catch (const InputError& e) {
      std::cerr << "input error: " << e.what() << "\n";
      code = kBadInput;
    } catch (const ContractError& e) {
      std::cerr << "input error: " << e.what() << "\n";
      code = kBadInput;
    } catch (const BudgetError& e) {
      std::cerr << "budget exceeded: " << e.what() << "\n";
      code = kBudget;
    } catch (const HypothesisFail& e) {
      std::cerr << "hypothesis failed: " << e.what() << "\n";
      code = kFailed;
    } catch (const ConstantsMismatch& e) {
      std::cerr << "constants mismatch: " << e.what() << "\n";
      code = kFailed;
    } catch (const LemmaViolation& e) {
      std::cerr << "verification failed: " << e.what() << "\n";
      code = kFailed;
    } catch (const std::overflow_error& e) {
      std::cerr << "input error: " << e.what() << "\n";
      code = kBadInput;
    }
    if (g_.timing)
      std::cerr << "wall_time_s " << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()
                << "\n";
    return code;
  }

  void override_book(ConstantBook b) { g_.book_override = std::move(b); }

 private:
  // ---- manifest ----

  std::vector<const CLI::App*> chain() const {
    std::vector<const CLI::App*> c{&app_};
    while (true) {
      const auto subs = c.back()->get_subcommands();
      if (subs.empty()) break;
      c.push_back(subs.front());
    }
    return c;
  }

  // Canonical argv: every option that received a value from any source, the
  // seed always, and neither --config, --book, --out nor --timing.
  json manifest() const {
    static const std::set<std::string> skip{"--config", "--book", "--out", "--timing", "--help", "--version"};
    std::vector<std::string> argv;
    json config = json::object();
    std::string path;
    for (const auto* a : chain()) {
      if (a != &app_) {
        argv.push_back(a->get_name());
        path += (path.empty() ? "" : " ") + a->get_name();
      }
      for (const auto* opt : a->get_options()) {
        const std::string name = opt->get_lnames().empty() ? opt->get_name(true) : "--" + opt->get_lnames().front();
        if (skip.count(name) || name == "--seed") continue;
        if (opt->count() == 0) {
          if (!opt->get_default_str().empty()) config[name] = opt->get_default_str();
          continue;
        }
        const bool is_flag = flags_.count(opt) > 0;
        std::string joined;
        for (const auto& r : opt->results()) joined += (joined.empty() ? "" : ",") + r;
        config[name] = is_flag ? "true" : joined;
        if (opt->get_lnames().empty()) {
          for (const auto& r : opt->results()) argv.push_back(r);
        } else if (is_flag) {
          argv.push_back(name);
        } else {
          for (const auto& r : opt->results()) {
            argv.push_back(name);
            argv.push_back(r);
          }
        }
      }
    }
    argv.push_back("--seed");
    argv.push_back(std::to_string(g_.seed));
    const ConstantBook b = g_.book();
    return {{"tool", "rado"},
            {"subcommand", path},
            {"argv", argv},
            {"config", config},
            {"seed", g_.seed},
            {"book_hash", b.hash()},
            {"book", b.to_json()},
            {"versions",
             {{"rado", RADO_VERSION},
              {"cli11", CLI11_VERSION},
              {"nlohmann_json",
               std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." + std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                   std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
              {"gmp", gmp_version}}}};
  }

  void write(const Emit& e) const {
    std::ostringstream os;
    if (g_.json_out) {
      json j{{"manifest", manifest()}, {"result", e.payload}};
      os << j.dump(2) << "\n";
    } else if (g_.csv_out) {
      os << "# manifest " << manifest().dump() << "\n" << e.csv;
    } else {
      os << e.text;
    }
    if (g_.out_path.empty()) {
      std::cout << os.str();
    } else {
      std::ofstream f(g_.out_path);
      if (!f) throw InputError("cannot write '" + g_.out_path + "'");
      f << os.str();
    }
  }

  CLI::Option* flag(CLI::App* app, const std::string& name, bool& var, const std::string& desc) {
    auto* o = app->add_flag(name, var, desc);
    flags_.insert(o);
    return o;
  }

  // ---- regular ----

  void add_regular() {
    auto* reg = app_.add_subcommand("regular", "partition regularity of a single equation");
    reg->require_subcommand(1);
    auto* check = reg->add_subcommand("check", "Rado's criterion with a zero-sum witness");
    check->add_option("coefficients", eq_, "comma-separated coefficients, e.g. 1,1,-1")->required();
    check->callback([this] { action_ = [this] { return regular_check(); }; });
  }

  int regular_check() {
    const auto a = CoefficientVector::parse(eq_);
    const auto w = is_partition_regular(a);
    Emit e;
    e.payload = {{"coefficients", a.entries()}, {"regular", w.has_value()}, {"invariant", is_invariant(a)}};
    e.csv = "coefficients,regular,index_set,pivot,residual\n\"" + a.str() + "\"," + (w ? "true" : "false") + ",";
    if (w) {
      e.payload["witness"] = {{"index_set", w->index_set}, {"pivot", w->pivot}, {"residual", w->residual}};
      std::string idx;
      for (auto i : w->index_set) idx += (idx.empty() ? "" : ";") + std::to_string(i);
      e.csv += idx + "," + std::to_string(w->pivot) + "," + std::to_string(w->residual) + "\n";
      e.text = "regular: witness I = {" + idx + "}, pivot " + std::to_string(w->pivot) + ", residual " +
               std::to_string(w->residual) + "\n";
    } else {
      e.csv += ",,\n";
      e.text = "not partition regular\n";
    }
    write(e);
    return w ? kOk : kFailed;
  }

  // ---- rado ----

  void add_rado() {
    auto* rado = app_.add_subcommand("rado", "Rado numbers by exhaustive colouring search");
    rado->require_subcommand(1);
    auto* num = rado->add_subcommand("number", "least N forcing a monochromatic solution");
    num->add_option("--eq", eq_, "coefficients")->required();
    num->add_option("--colours", colours_, "number of colours")->required();
    num->add_option("--max", n_max_, "search cap on N")->required();
    flag(num, "--distinct", distinct_, "require distinct coordinates");
    num->callback([this] { action_ = [this] { return rado_number_cmd(); }; });
    auto* wit = rado->add_subcommand("witness", "a colouring of [N] avoiding monochromatic solutions");
    wit->add_option("--eq", eq_, "coefficients")->required();
    wit->add_option("--colours", colours_, "number of colours")->required();
    wit->add_option("--n", n_, "N")->required();
    flag(wit, "--distinct", distinct_, "require distinct coordinates");
    wit->callback([this] { action_ = [this] { return rado_witness_cmd(); }; });
  }

  int rado_number_cmd() {
    const auto a = CoefficientVector::parse(eq_);
    const auto res = rado_number(a, colours_, n_max_, g_.threads, distinct_);
    bool verified = true;
    if (res.certificate && find_mono_solution(*res.certificate, a, distinct_)) verified = false;
    Emit e;
    e.payload = {{"coefficients", a.entries()}, {"colours", colours_},       {"max", n_max_},
                 {"distinct", distinct_},       {"nodes", res.nodes_explored}, {"certificate_verified", verified}};
    e.payload["value"] = res.value ? json(*res.value) : json(nullptr);
    if (res.certificate) e.payload["certificate"] = res.certificate->to_json();
    e.csv = "coefficients,colours,max,value,nodes,certificate_verified\n\"" + a.str() + "\"," +
            std::to_string(colours_) + "," + std::to_string(n_max_) + "," +
            (res.value ? std::to_string(*res.value) : "") + "," + std::to_string(res.nodes_explored) + "," +
            (verified ? "true" : "false") + "\n";
    e.text = res.value ? std::to_string(*res.value) + "\n"
                       : "inconclusive: an avoiding colouring of [" + std::to_string(n_max_) + "] exists\n";
    write(e);
    if (!verified) return kFailed;
    return res.value ? kOk : kBudget;
  }

  int rado_witness_cmd() {
    const auto a = CoefficientVector::parse(eq_);
    const auto c = witness_colouring(a, colours_, n_, distinct_);
    const bool ok = c && !find_mono_solution(*c, a, distinct_);
    Emit e;
    e.payload = {{"coefficients", a.entries()}, {"colours", colours_}, {"n", n_}, {"found", c.has_value()}};
    if (c) e.payload["colouring"] = c->to_json();
    e.csv = "x,colour\n";
    if (c)
      for (std::int64_t x = c->lo(); x <= c->hi(); ++x) e.csv += std::to_string(x) + "," + std::to_string(c->colour(x)) + "\n";
    e.text = c ? c->to_json().dump() + "\n" : "no avoiding colouring of [" + std::to_string(n_) + "]\n";
    write(e);
    if (c && !ok) return kFailed;
    return c ? kOk : kFailed;
  }

  // ---- count ----

  void add_count() {
    auto* cnt = app_.add_subcommand("count", "solutions of ax - ay = bz inside a set");
    cnt->add_option("--group", group_, "zp:P or fq:Q^N; omit to count in the integers");
    cnt->add_option("--set", set_, "comma-separated elements (use --set=-3,1 for a leading minus)")->required();
    cnt->add_option("--a", a_, "coefficient a")->capture_default_str();
    cnt->add_option("--b", b_, "coefficient b")->capture_default_str();
    cnt->callback([this] { action_ = [this] { return count_cmd(); }; });
  }

  int count_cmd() {
    const auto xs = parse_ints(set_, "--set");
    std::uint64_t count = 0, oracle = 0;
    Emit e;
    if (group_.empty()) {
      std::vector<std::int64_t> s = xs;
      std::sort(s.begin(), s.end());
      s.erase(std::unique(s.begin(), s.end()), s.end());
      count = count_solutions_interval(s, a_, b_);
      for (auto x : s)
        for (auto y : s)
          for (auto z : s) oracle += checked::mul(a_, x - y) == checked::mul(b_, z);
      e.payload = {{"domain", "integers"}};
    } else {
      const auto g = FiniteGroup::parse(group_);
      const auto s = subset_from(g, xs);
      count = count_triples(s, a_, b_);
      oracle = pair_loop_count(s, a_, b_);
      e.payload = {{"domain", g.name()}};
    }
    e.payload.update({{"a", a_}, {"b", b_}, {"size", xs.size()}, {"count", count}, {"oracle", oracle}});
    e.csv = "domain,a,b,count,oracle\n" + e.payload["domain"].get<std::string>() + "," + std::to_string(a_) + "," +
            std::to_string(b_) + "," + std::to_string(count) + "," + std::to_string(oracle) + "\n";
    e.text = std::to_string(count) + "\n";
    write(e);
    return count == oracle ? kOk : kFailed;
  }

  // ---- bohr ----

  void add_bohr() {
    auto* bohr = app_.add_subcommand("bohr", "Bohr sets in Z/pZ");
    bohr->require_subcommand(1);
    auto common = [this](CLI::App* s) {
      s->add_option("--p", p_, "prime modulus")->required();
      s->add_option("--freqs", freqs_, "comma-separated frequencies")->required();
      s->add_option("--width", width_, "width")->required();
    };
    auto* build = bohr->add_subcommand("build", "members of B(freqs, width)");
    common(build);
    build->callback([this] { action_ = [this] { return bohr_build(); }; });
    auto* growth = bohr->add_subcommand("growth", "|B(2w)| / |B(w)| against 100^d");
    common(growth);
    growth->callback([this] { action_ = [this] { return bohr_growth(); }; });
    auto* reg = bohr->add_subcommand("regular", "search a regular pair");
    common(reg);
    reg->add_option("--l", l_, "sumset multiple")->capture_default_str();
    reg->add_option("--eta", eta_, "growth slack")->capture_default_str();
    reg->add_option("--grid", grid_, "candidate count")->capture_default_str();
    reg->callback([this] { action_ = [this] { return bohr_regular(); }; });
    auto* game = bohr->add_subcommand("game", "hereditary density: min over measures on S of sup 1_A * nu");
    game->add_option("--group", group_, "zp:P or fq:Q^N")->required();
    game->add_option("--set", set_, "elements of A")->required();
    game->add_option("--support", support_, "elements of S")->required();
    game->callback([this] { action_ = [this] { return bohr_game(); }; });
  }

  BohrSet bohr_from_flags() const {
    return BohrSet(FiniteGroup::cyclic(p_), parse_ints(freqs_, "--freqs"), width_);
  }

  int bohr_build() {
    const auto b = bohr_from_flags();
    Emit e;
    e.payload = b.to_json();
    std::vector<std::int64_t> centred;
    for (auto x : b.members().members()) centred.push_back(b.group().centred(x));
    std::sort(centred.begin(), centred.end());
    e.payload["members"] = centred;
    e.csv = "x\n";
    for (auto x : centred) e.csv += std::to_string(x) + "\n";
    e.text = "size " + std::to_string(b.size()) + "\n";
    write(e);
    return kOk;
  }

  int bohr_growth() {
    const auto g = FiniteGroup::cyclic(p_);
    const auto f = parse_ints(freqs_, "--freqs");
    const ConstantBook book = g_.book();
    const double ratio = growth_ratio(g, f, width_, book);
    const double size = BohrSet(g, f, width_).density();
    const double lower = bohr_size_lower_bound(f.size(), width_, book["growth"]);
    Emit e;
    e.payload = {{"ratio", ratio}, {"bound", std::pow(book["growth"], static_cast<double>(f.size()))},
                 {"density", size}, {"density_lower_bound", lower}};
    e.csv = "ratio,bound,density,density_lower_bound\n" + json(ratio).dump() + "," + e.payload["bound"].dump() + "," +
            json(size).dump() + "," + json(lower).dump() + "\n";
    e.text = "growth " + json(ratio).dump() + "\n";
    write(e);
    return size >= lower * (1 - 1e-12) ? kOk : kFailed;
  }

  int bohr_regular() {
    const auto pr = find_regular_pair(FiniteGroup::cyclic(p_), parse_ints(freqs_, "--freqs"), width_, l_, eta_, grid_);
    Emit e;
    e.payload = pr.to_json();
    e.csv = "delta_star,delta_prime,l,eta,ratio,candidate,star_size,sum_size\n" + json(pr.delta_star).dump() + "," +
            json(pr.delta_prime).dump() + "," + json(pr.l).dump() + "," + json(pr.eta).dump() + "," +
            json(pr.measured_ratio).dump() + "," + std::to_string(pr.candidate) + "," + std::to_string(pr.star_size) +
            "," + std::to_string(pr.sum_size) + "\n";
    e.text = "delta* " + json(pr.delta_star).dump() + " delta' " + json(pr.delta_prime).dump() + " ratio " +
             json(pr.measured_ratio).dump() + "\n";
    write(e);
    return kOk;
  }

  int bohr_game() {
    const auto g = FiniteGroup::parse(group_);
    const auto gv = game_density(subset_from(g, parse_ints(set_, "--set")), subset_from(g, parse_ints(support_, "--support")));
    Emit e;
    e.payload = {{"value", gv.value}, {"lower", gv.lower}, {"upper", gv.upper},
                 {"gap", gv.gap},     {"exact", gv.exact}, {"points", gv.points}, {"nu", gv.nu}};
    if (gv.exact) e.payload["exact_value"] = gv.exact_value;
    e.csv = "value,lower,upper,gap,exact\n" + json(gv.value).dump() + "," + json(gv.lower).dump() + "," +
            json(gv.upper).dump() + "," + json(gv.gap).dump() + "," + (gv.exact ? gv.exact_value : "") + "\n";
    e.text = (gv.exact ? gv.exact_value : json(gv.value).dump()) + "\n";
    write(e);
    return kOk;
  }

  // ---- lemma ----

  void add_lemma() {
    auto* lem = app_.add_subcommand("lemma", "randomized verification suites for the lemma engines");
    lem->add_option("name", lemma_, "specpos | sift | chang | cs | propd | itstep")
        ->required()
        ->check(CLI::IsMember(suite_lemmas()));
    lem->add_option("--p", lemma_p_, "prime modulus")->capture_default_str();
    lem->add_option("--instances", instances_, "number of instances")->capture_default_str();
    lem->callback([this] { action_ = [this] { return lemma_cmd(); }; });
  }

  int lemma_cmd() {
    const auto rep = run_lemma_suite(lemma_, FiniteGroup::cyclic(lemma_p_), instances_, g_.seed, g_.book(), g_.threads);
    Emit e;
    json entries = json::array();
    e.csv = "index,seed,status,lhs,rhs\n";
    for (const auto& en : rep.entries) {
      entries.push_back({{"index", en.index}, {"seed", en.seed}, {"status", en.status}, {"result", en.result}});
      std::string lhs, rhs;
      if (en.result.contains("verdict")) {
        lhs = en.result["verdict"]["lhs"].dump();
        rhs = en.result["verdict"]["rhs"].dump();
      }
      e.csv += std::to_string(en.index) + "," + std::to_string(en.seed) + "," + en.status + "," + lhs + "," + rhs + "\n";
      e.text += lemma_ + " #" + std::to_string(en.index) + ": " + en.status +
                (lhs.empty() ? " (" + en.result.value("error", std::string()) + ")" : " lhs " + lhs + " rhs " + rhs) +
                "\n";
    }
    e.payload = {{"summary", rep.summary()}, {"entries", entries}};
    e.text += rep.summary().dump() + "\n";
    write(e);
    if (rep.all_pass()) return kOk;
    if (rep.count("pass") + rep.count("budget") == rep.entries.size()) return kBudget;
    return kFailed;
  }

  // ---- trace ----

  void add_trace() {
    auto* tr = app_.add_subcommand("trace", "density-increment tracers");
    tr->require_subcommand(1);
    auto* toy = tr->add_subcommand("toy", "subspace iteration in F_q^n");
    toy->add_option("--q", q_, "field size (prime)")->capture_default_str();
    toy->add_option("--n", toy_n_, "dimension")->capture_default_str();
    toy->add_option("--colours", trace_colours_, "random colouring with this many colours")->capture_default_str();
    toy->add_option("--colouring", colouring_path_, "JSON {\"colours\": [...]} indexed by group element");
    toy->add_option("--a", a_, "coefficient a")->capture_default_str();
    toy->add_option("--b", b_, "coefficient b")->capture_default_str();
    toy->add_option("--codim-budget", budget_, "kernels per increment search (0: n)")->capture_default_str();
    toy->callback([this] { action_ = [this] { return trace_toy(); }; });
    auto* zp = tr->add_subcommand("zp", "Bohr-set iteration in Z/pZ");
    zp->add_option("--N", zp_n_, "colour {-N..N}")->capture_default_str();
    zp->add_option("--colours", trace_colours_, "random colouring with this many colours")->capture_default_str();
    zp->add_option("--colouring", colouring_path_, "JSON colouring {\"n\", \"signed\": true, \"classes\"}");
    zp->add_option("--a", a_, "coefficient a")->capture_default_str();
    zp->add_option("--b", b_, "coefficient b")->capture_default_str();
    zp->add_option("--grid", grid_, "regular-pair candidates")->capture_default_str();
    zp->callback([this] { action_ = [this] { return trace_zp(); }; });
  }

  int emit_trace(const TraceRecord& t) {
    Emit e;
    e.payload = t.to_json();
    e.csv = t.to_csv();
    // NDJSON is the default: manifest line first.
    e.text = json{{"type", "manifest"}, {"manifest", manifest()}}.dump() + "\n" + t.to_ndjson();
    write(e);
    if (t.terminated()) return kOk;
    const auto& k = t.outcome.kind;
    return k == "hypothesis" || k == "constants" ? kFailed : kBudget;
  }

  int trace_toy() {
    const auto g = FiniteGroup::vector_space(q_, static_cast<int>(toy_n_));
    std::vector<int> colour;
    if (!colouring_path_.empty()) {
      const auto j = read_json_file(colouring_path_);
      if (!j.contains("colours")) throw InputError("toy colouring needs a 'colours' array");
      colour = j["colours"].get<std::vector<int>>();
    } else {
      colour = random_colouring(g, trace_colours_, g_.seed);
    }
    ToyConfig cfg;
    cfg.book = g_.book();
    cfg.codim_budget = budget_;
    return emit_trace(toy_iterate(g, colour, a_, b_, cfg));
  }

  int trace_zp() {
    std::optional<IntervalColouring> col;
    if (!colouring_path_.empty()) {
      col = IntervalColouring::from_json(read_json_file(colouring_path_));
    } else {
      if (trace_colours_ < 1) throw InputError("--colours must be at least 1");
      if (zp_n_ < 1) throw InputError("--N must be at least 1");
      std::mt19937_64 rng(g_.seed);
      std::vector<std::vector<std::int64_t>> cls(static_cast<std::size_t>(trace_colours_));
      for (std::int64_t z = -zp_n_; z <= zp_n_; ++z) cls[rng() % cls.size()].push_back(z);
      col = IntervalColouring::from_classes(zp_n_, true, cls);
    }
    ZpConfig cfg;
    cfg.book = g_.book();
    cfg.grid = grid_;
    cfg.seed = g_.seed;
    return emit_trace(zp_iterate(*col, a_, b_, cfg));
  }

  // ---- book ----

  void add_book() {
    auto* book = app_.add_subcommand("book", "print or edit the ConstantBook");
    book->require_subcommand(1);
    auto* print = book->add_subcommand("print", "base and derived constants");
    print->callback([this] { action_ = [this] { return book_print(); }; });
    auto* set = book->add_subcommand("set", "apply key=value edits and emit the edited book");
    set->add_option("assignments", assignments_, "key=value pairs")->required();
    set->callback([this] { action_ = [this] { return book_set(); }; });
  }

  int book_print() {
    const auto b = g_.book();
    Emit e;
    e.payload = {{"values", b.to_json()}, {"derived", b.derived_json()}, {"hash", b.hash()}};
    e.csv = "key,value,kind\n";
    for (const auto& [k, v] : e.payload["values"].items()) e.csv += k + "," + v.dump() + ",base\n";
    for (const auto& [k, v] : e.payload["derived"].items()) e.csv += k + "," + v.dump() + ",derived\n";
    e.text = b.to_json().dump(2) + "\n";
    write(e);
    return kOk;
  }

  int book_set() {
    auto b = g_.book();
    for (const auto& a : assignments_) {
      const auto eq = a.find('=');
      if (eq == std::string::npos) throw InputError("expected key=value, got '" + a + "'");
      double v = 0;
      try {
        v = std::stod(a.substr(eq + 1));
      } catch (const std::logic_error&) {
        throw InputError("bad value in '" + a + "'");
      }
      b.set(a.substr(0, eq), v);
    }
    Emit e;
    e.payload = b.to_json();
    e.csv = "key,value\n";
    for (const auto& [k, v] : e.payload.items()) e.csv += k + "," + v.dump() + "\n";
    e.text = e.payload.dump(2) + "\n";
    write(e);
    return kOk;
  }

  // ---- replay ----

  void add_replay() {
    auto* rep = app_.add_subcommand("replay", "re-run a manifest (from a --json output or a manifest file)");
    rep->add_option("manifest", replay_path_, "JSON file holding a manifest")->required();
    rep->callback([this] { action_ = [this] { return replay_cmd(); }; });
  }

  int replay_cmd() {
    json j = read_json_file(replay_path_);
    if (j.contains("manifest")) j = j["manifest"];
    if (!j.contains("argv") || !j.contains("book")) throw InputError("no manifest in '" + replay_path_ + "'");
    auto argv = j["argv"].get<std::vector<std::string>>();
    if (!argv.empty() && argv.front() == "replay") throw InputError("a manifest cannot replay itself");
    if (!g_.out_path.empty()) {
      argv.push_back("--out");
      argv.push_back(g_.out_path);
    }
    Cli inner;
    inner.override_book(ConstantBook::from_json(j["book"]));
    return inner.run(argv);
  }

  CLI::App app_;
  Globals g_;
  std::set<const CLI::Option*> flags_;
  std::function<int()> action_ = [] { return kOk; };

  std::string eq_, group_, set_, support_, freqs_, lemma_, colouring_path_, replay_path_;
  std::vector<std::string> assignments_;
  int colours_ = 2, trace_colours_ = 2;
  std::int64_t n_max_ = 0, n_ = 0, p_ = 0, lemma_p_ = 401, q_ = 3, toy_n_ = 4, zp_n_ = 50, a_ = 1, b_ = 1;
  bool distinct_ = false;
  double width_ = 0, eta_ = 0.25, l_ = 1;
  std::size_t grid_ = 64, instances_ = 50, budget_ = 0;
};

}  // namespace

int main(int argc, char** argv) {
  Cli cli;
  return cli.run(std::vector<std::string>(argv + 1, argv + argc));
}
