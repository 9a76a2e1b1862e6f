#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "rado/lemmas/instances.hpp"
#include "rado/lemmas/itstep.hpp"

namespace rado {

// Outcome of one instance: "pass", "fail" (verdict false), or the exception
// class that stopped it ("hypothesis", "constants", "budget", "violation").
struct SuiteEntry {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::string status;
  nlohmann::json result;
};

struct SuiteReport {
  std::string lemma;
  std::string group;
  std::uint64_t seed = 0;
  std::size_t requested = 0;
  GeneratorStats generator;
  std::vector<SuiteEntry> entries;

  std::size_t count(const std::string& status) const {
    std::size_t n = 0;
    for (const auto& e : entries) n += e.status == status;
    return n;
  }
  bool all_pass() const { return entries.size() == requested && count("pass") == requested; }
  bool short_of_instances() const { return entries.size() < requested; }

  nlohmann::json summary() const {
    return {{"lemma", lemma},
            {"group", group},
            {"seed", seed},
            {"requested", requested},
            {"generated", entries.size()},
            {"generator", generator.to_json()},
            {"pass", count("pass")},
            {"fail", count("fail")},
            {"hypothesis", count("hypothesis")},
            {"constants", count("constants")},
            {"budget", count("budget")},
            {"violation", count("violation")},
            {"error", count("error")}};
  }
};

inline const std::vector<std::string>& suite_lemmas() {
  static const std::vector<std::string> names{"specpos", "sift", "chang", "cs", "propd", "itstep"};
  return names;
}

// Draws `instances` conforming instances from one mt19937_64(seed) stream (at most
// 50 attempts each) and runs the engine on each with seed + index. Evaluation uses
// up to `threads` workers; results are stored by index, so output is thread-independent.
inline SuiteReport run_lemma_suite(const std::string& lemma, const FiniteGroup& g, std::size_t instances,
                                   std::uint64_t seed, const ConstantBook& book = {}, unsigned threads = 1) {
  if (std::find(suite_lemmas().begin(), suite_lemmas().end(), lemma) == suite_lemmas().end())
    throw InputError("unknown lemma '" + lemma + "'");
  if (!g.is_cyclic()) throw InputError("lemma suites run in Z/pZ");
  SuiteReport rep;
  rep.lemma = lemma;
  rep.group = g.name();
  rep.seed = seed;
  rep.requested = instances;

  std::mt19937_64 rng(seed);
  using Job = std::function<nlohmann::json(std::uint64_t)>;
  std::vector<Job> jobs;
  const std::size_t max_draws = 50 * std::max<std::size_t>(instances, 1);
  auto accept = [&](auto&& make) {
    while (jobs.size() < instances && rep.generator.drawn < max_draws) {
      ++rep.generator.drawn;
      if (auto job = make()) {
        ++rep.generator.accepted;
        jobs.push_back(std::move(*job));
      }
    }
  };
  auto verdict_json = [](const LemmaVerdict& v, nlohmann::json extra) {
    extra["verdict"] = v.to_json();
    return extra;
  };

  if (lemma == "specpos") {
    accept([&]() -> std::optional<Job> {
      auto in = draw_specpos_instance(g, rng);
      if (!in) return std::nullopt;
      return Job([in = *in, &book, verdict_json](std::uint64_t) {
        return verdict_json(verify_specpos(in.a, in.b0, in.b1, in.mu, in.d, in.k, in.epsilon, in.eta, book), {});
      });
    });
  } else if (lemma == "sift") {
    accept([&]() -> std::optional<Job> {
      auto in = draw_sift_instance(g, rng, book);
      if (!in) return std::nullopt;
      return Job([in = *in, &book](std::uint64_t s) {
        return sift(in.a, in.b0, in.b1, in.b2, in.k, in.alpha, in.epsilon, in.kappa, s, book).to_json();
      });
    });
  } else if (lemma == "chang") {
    accept([&]() -> std::optional<Job> {
      auto in = draw_chang_instance(g, rng, book);
      if (!in) return std::nullopt;
      return Job([in = *in, &book, verdict_json](std::uint64_t) {
        const auto r = local_chang(in.a, in.b0, in.b1, in.b2, in.epsilon, in.delta, static_cast<double>(in.k), book);
        return verdict_json(r.verdict, {{"lambda", r.lambda}, {"k", in.k}, {"B3", r.b3.to_json()}});
      });
    });
  } else if (lemma == "cs") {
    accept([&]() -> std::optional<Job> {
      auto in = draw_cs_instance(g, rng);
      if (!in) return std::nullopt;
      return Job([in = *in, &book](std::uint64_t s) {
        return croot_sisask(in.f, in.s, in.t, in.b0, in.p, in.l, in.k, in.epsilon, s, book).to_json();
      });
    });
  } else if (lemma == "propd") {
    accept([&]() -> std::optional<Job> {
      auto in = draw_propd_instance(g, rng, book);
      if (!in) return std::nullopt;
      return Job([in = *in, &book](std::uint64_t s) {
        return prop_d_pipeline(in.s, in.t, in.d, in.b0, in.b1, in.b2, in.b3, in.b4, in.epsilon, in.sigma, in.tau,
                               in.l, in.m, s, book)
            .to_json();
      });
    });
  } else {
    accept([&]() -> std::optional<Job> {
      auto in = draw_itstep_instance(g, rng, false, book);
      if (!in) return std::nullopt;
      return Job([in = *in, &book](std::uint64_t s) {
        return iteration_step(in.a, in.d, in.b0, in.b1, in.b2, in.b3, in.b4, in.b5, in.k, in.l, in.m, in.alpha,
                              in.delta, s, book)
            .to_json();
      });
    });
  }

  rep.entries.resize(jobs.size());
  auto run = [&](std::size_t i) {
    SuiteEntry& e = rep.entries[i];
    e.index = i;
    e.seed = seed + i;
    try {
      e.result = jobs[i](e.seed);
      const auto& v = e.result["verdict"];
      e.status = v["pass"].get<bool>() ? "pass" : "fail";
    } catch (const HypothesisFail& ex) {
      e.status = "hypothesis";
      e.result = {{"error", ex.what()}};
    } catch (const ConstantsMismatch& ex) {
      e.status = "constants";
      e.result = {{"error", ex.what()}};
    } catch (const BudgetError& ex) {
      e.status = "budget";
      e.result = {{"error", ex.what()}};
    } catch (const LemmaViolation& ex) {
      e.status = "violation";
      e.result = {{"error", ex.what()}};
    } catch (const std::exception& ex) {  // a generator handed over a malformed instance
      e.status = "error";
      e.result = {{"error", ex.what()}};
    }
  };
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();) run(i);
  };
  const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(jobs.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rep;
}

}  // namespace rado
