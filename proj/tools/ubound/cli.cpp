#include "cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "unionbound/bounds_classic.hpp"
#include "unionbound/bounds_new.hpp"
#include "unionbound/errors.hpp"
#include "unionbound/lp.hpp"
#include "unionbound/problem_file.hpp"
#include "unionbound/report.hpp"
#include "unionbound/weights.hpp"

namespace ubound {

namespace ub = unionbound;

namespace {

const std::vector<std::string> kAllBounds = {"dc", "gk", "kat", "yat2", "lnew3", "lnew4", "unew4", "unew5", "opt"};

// UB_MAX_N lifts the atom-level cap. Past 24 the atom tables grow
// beyond desk-scale memory, so this is at the caller's risk.
std::size_t max_events() {
  const char* env = std::getenv("UB_MAX_N");
  if (env == nullptr || *env == '\0') return ub::kDefaultMaxAtomEvents;
  char* end = nullptr;
  const unsigned long v = std::strtoul(env, &end, 10);
  if (*end != '\0' || v == 0) throw ub::ArgumentError(std::string("UB_MAX_N must be a positive integer, got '") + env + "'");
  return v;
}

struct CommonOptions {
  std::string input;
  std::string format = "table";
  std::string out;
  double eps_clip = 1e-6;
  double fptas_eps = 0.0;
};

struct ComputeOptions {
  std::string bounds = "all";
  std::string weights = "ones";
};

struct CompareOptions {
  std::size_t trials = 100000;
  std::uint64_t seed = 0;
  std::string kappa = "-1:1:0.005";
  unsigned threads = 0;
};

struct GenOptions {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::string model = "dirichlet";
  std::string out;
  std::string label;
};

ub::SolveMode solve_mode(double eps) {
  if (eps == 0.0) return ub::SolveMode::exact();
  if (!(eps > 0.0 && eps < 1.0)) throw ub::ArgumentError("--fptas-eps must be 0 or lie in (0, 1)");
  return ub::SolveMode::fptas(eps);
}

std::set<std::string> parse_selector(const std::string& spec) {
  if (spec == "all") return {kAllBounds.begin(), kAllBounds.end()};
  std::set<std::string> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (std::find(kAllBounds.begin(), kAllBounds.end(), item) == kAllBounds.end()) {
      throw ub::ArgumentError("--bounds: unknown bound '" + item + "'");
    }
    out.insert(item);
  }
  if (out.empty()) throw ub::ArgumentError("--bounds: empty selection");
  return out;
}

struct ResolvedWeights {
  std::string strategy;
  std::vector<double> values;
};

ResolvedWeights resolve_weights(const std::string& source, const ub::PartialInfo& info, double eps_clip) {
  const std::size_t n = info.event_count();
  if (source == "ones") return {"ones", std::vector<double>(n, 1.0)};
  if (source == "gk") return {"gk", ub::gk_bound(info).weights};
  if (source == "gk+") {
    const ub::WeightVector w = ub::gk_clipped(info, eps_clip);
    return {"gk+", {w.values().begin(), w.values().end()}};
  }
  if (source.rfind("file:", 0) == 0) {
    std::vector<double> c = ub::load_weights(source.substr(5));
    if (c.size() != n) {
      throw ub::ValidationError("weights file has " + std::to_string(c.size()) + " entries, expected " +
                                std::to_string(n));
    }
    return {"file", std::move(c)};
  }
  throw ub::ArgumentError("--weights must be ones, gk, gk+ or file:PATH");
}

template <class F>
void add(ub::BoundReport& report, const std::string& name, const std::string& strategy, ub::BoundKind kind, F&& f) {
  try {
    report.entries.push_back(ub::make_entry(f(), strategy));
  } catch (const ub::InconsistentInfo&) {
    throw;
  } catch (const ub::Error& e) {
    ub::ReportEntry entry;
    entry.name = name;
    entry.strategy = strategy;
    entry.kind = kind;
    entry.status = e.what();
    report.entries.push_back(std::move(entry));
  }
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    out.flush();
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ub::ArgumentError("cannot write '" + path + "'");
  file << text;
  if (!file.flush()) throw ub::ArgumentError("failed writing '" + path + "'");
}

std::string render(const ub::BoundReport& report, const std::string& format, std::optional<double> seconds) {
  if (format == "json-lines") return ub::to_json_lines(report);
  std::string text = ub::to_table(report);
  if (seconds) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "\nelapsed: %.3f s\n", *seconds);
    text += buf;
  }
  return text;
}

int cmd_compute(const CommonOptions& common, const ComputeOptions& opts, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const std::set<std::string> selected = parse_selector(opts.bounds);
  const ub::SolveMode mode = solve_mode(common.fptas_eps);
  const ub::ProblemFile problem = ub::load_problem(common.input, max_events());
  const ub::PartialInfo info = problem.info();
  const std::size_t n = info.event_count();
  const ResolvedWeights rw = resolve_weights(opts.weights, info, common.eps_clip);

  ub::BoundReport report;
  report.label = problem.label;
  report.n = n;
  report.input_form = problem.has_atoms() ? "atoms" : "partial";
  auto weights = [&] { return ub::WeightVector(rw.values); };
  auto on = [&](const char* name) { return selected.count(name) > 0; };
  using ub::BoundKind;

  if (on("dc")) add(report, "dc", "", BoundKind::Lower, [&] { return ub::dc_bound(info); });
  if (on("gk")) add(report, "gk", "", BoundKind::Lower, [&] { return ub::gk_bound(info).bound; });
  if (on("kat")) add(report, "kat", "", BoundKind::Lower, [&] { return ub::kat_bound(info); });
  if (on("yat2")) add(report, "yat2", "", BoundKind::Lower, [&] { return ub::yat2_bound(info); });
  if (on("lnew3")) add(report, "lnew3", rw.strategy, BoundKind::Lower, [&] { return ub::lnew3(info, weights(), mode); });
  if (on("lnew4")) add(report, "lnew4", rw.strategy, BoundKind::Lower, [&] { return ub::lnew4(info, weights(), mode); });
  if (on("opt")) {
    for (const auto sense : {ub::BoundSense::Lower, ub::BoundSense::Upper}) {
      const bool lower = sense == ub::BoundSense::Lower;
      const char* name = lower ? "opt" : "opt_upper";
      const BoundKind kind = lower ? BoundKind::Lower : BoundKind::Upper;
      add(report, name, rw.strategy, kind, [&] {
        const ub::WeightVector w = weights();
        return ub::BoundValue{name, ub::optimal_inclass_bound(info, w, sense), kind, w, {}};
      });
    }
  }
  if (on("unew4")) add(report, "unew4", rw.strategy, BoundKind::Upper, [&] { return ub::unew4(info, weights()); });
  if (on("unew5")) add(report, "unew5", rw.strategy, BoundKind::Upper, [&] { return ub::unew5(info, weights()); });
  if (const auto* space = problem.space()) ub::annotate_validity(report, ub::exact_union(*space));

  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  emit(render(report, common.format, elapsed.count()), common.out, out);
  return kExitOk;
}

int cmd_compare(const CommonOptions& common, const CompareOptions& opts, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  if (opts.trials == 0) throw ub::ArgumentError("--trials must be at least 1");
  const ub::KappaGrid grid = ub::KappaGrid::parse(opts.kappa);
  if (!(common.eps_clip > 0.0)) throw ub::ArgumentError("--eps-clip must be positive");
  const ub::ProblemFile problem = ub::load_problem(common.input, max_events());
  const ub::PartialInfo info = problem.info();

  ub::SearchConfig config;
  config.strategies = {ub::GkExact{}, ub::GkClipped{common.eps_clip}, ub::KappaLine{grid},
                       ub::RandomPositive{opts.trials, opts.seed}};
  config.family = ub::BoundFamily::Both;
  config.threads = opts.threads;
  config.mode = solve_mode(common.fptas_eps);
  ub::BoundReport report = ub::compare_all(info, config, problem.space());
  report.label = problem.label;

  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  emit(render(report, common.format, elapsed.count()), common.out, out);
  return kExitOk;
}

ub::SpaceModel parse_model(const std::string& spec) {
  if (spec == "dirichlet") return ub::SpaceModel::dirichlet();
  if (spec.rfind("sparse:", 0) == 0) {
    const std::string k = spec.substr(7);
    char* end = nullptr;
    const unsigned long long v = std::strtoull(k.c_str(), &end, 10);
    if (!k.empty() && *end == '\0' && k[0] != '-') return ub::SpaceModel::sparse(v);
  }
  throw ub::ArgumentError("--model must be dirichlet or sparse:K, got '" + spec + "'");
}

int cmd_gen(const GenOptions& opts, std::ostream& out) {
  const ub::SpaceModel model = parse_model(opts.model);
  const ub::EventSpace space = ub::generate_random_space(opts.n, opts.seed, model, max_events());
  emit(ub::serialize_atoms(space, opts.label), opts.out, out);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bounds on the probability of a union from partial information", "ubound"};
  app.require_subcommand(1);

  CommonOptions common;
  ComputeOptions compute;
  CompareOptions compare;
  GenOptions gen;
  const std::vector<std::string> formats = {"table", "json-lines"};

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--input", common.input, "Problem file (ub-v1 JSON)")->required();
    sub->add_option("--format", common.format, "Output format")->check(CLI::IsMember(formats));
    sub->add_option("--out", common.out, "Write the report here instead of standard output");
    sub->add_option("--eps-clip", common.eps_clip, "Lower clip for GK weights");
    sub->add_option("--fptas-eps", common.fptas_eps, "Subset-selection approximation (0 = exact)");
  };

  CLI::App* c = app.add_subcommand("compute", "Evaluate selected bounds for one weight vector");
  add_common(c);
  c->add_option("--bounds", compute.bounds, "all or a comma list of dc,gk,kat,yat2,lnew3,lnew4,unew4,unew5,opt");
  c->add_option("--weights", compute.weights, "ones, gk, gk+ or file:PATH");

  CLI::App* k = app.add_subcommand("compare", "Compare bounds across weight strategies");
  add_common(k);
  k->add_option("--trials", compare.trials, "Random positive weight vectors");
  k->add_option("--seed", compare.seed, "Seed for the random search");
  k->add_option("--kappa", compare.kappa, "Line-search grid lo:hi:step around the GK weights");
  k->add_option("--threads", compare.threads, "Worker threads (0 = hardware concurrency)");

  CLI::App* g = app.add_subcommand("gen", "Write a random atom-level problem file");
  g->add_option("--n", gen.n, "Number of events")->required();
  g->add_option("--seed", gen.seed, "Generator seed");
  g->add_option("--model", gen.model, "dirichlet or sparse:K");
  g->add_option("--out", gen.out, "Output path (default standard output)");
  g->add_option("--label", gen.label, "Label stored in the file");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (c->parsed()) return cmd_compute(common, compute, out);
    if (k->parsed()) return cmd_compare(common, compare, out);
    return cmd_gen(gen, out);
  } catch (const ub::InconsistentInfo& e) {
    err << "ubound: inconsistent input: " << e.what() << "\n";
    return kExitInconsistent;
  } catch (const ub::Error& e) {
    err << "ubound: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "ubound: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace ubound
