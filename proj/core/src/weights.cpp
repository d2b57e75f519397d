#include "unionbound/weights.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

#include "unionbound/bounds_classic.hpp"
#include "unionbound/errors.hpp"
#include "unionbound/lp.hpp"
#include "unionbound/random.hpp"

namespace unionbound {

const char* to_string(BoundFamily f) {
  switch (f) {
    case BoundFamily::Lnew3: return "lnew3";
    case BoundFamily::Lnew4: return "lnew4";
    case BoundFamily::Both: return "both";
  }
  return "?";
}

WeightVector clip_weights(std::span<const double> c, double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw ArgumentError("clip epsilon must be positive");
  std::vector<double> out(c.begin(), c.end());
  for (double& v : out) v = std::max(v, eps);
  return WeightVector(std::move(out));
}

WeightVector gk_clipped(const PartialInfo& info, double eps) { return clip_weights(gk_bound(info).weights, eps); }

std::size_t KappaGrid::count() const {
  if (!(step > 0.0) || !std::isfinite(step)) throw ArgumentError("kappa step must be positive");
  if (!std::isfinite(lo) || !std::isfinite(hi) || hi < lo) throw ArgumentError("kappa range must satisfy lo <= hi");
  return static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
}

KappaGrid KappaGrid::parse(const std::string& spec) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t colon = spec.find(':', start);
    parts.push_back(spec.substr(start, colon - start));
    if (colon == std::string::npos) break;
    start = colon + 1;
  }
  if (parts.size() != 3) throw ArgumentError("kappa grid must look like lo:hi:step, got '" + spec + "'");
  double v[3];
  for (int k = 0; k < 3; ++k) {
    std::size_t used = 0;
    try {
      v[k] = std::stod(parts[static_cast<std::size_t>(k)], &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != parts[static_cast<std::size_t>(k)].size()) {
      throw ArgumentError("kappa grid field '" + parts[static_cast<std::size_t>(k)] + "' is not a number");
    }
  }
  KappaGrid g{v[0], v[1], v[2]};
  g.count();
  return g;
}

namespace {

bool wants3(BoundFamily f) { return f != BoundFamily::Lnew4; }
bool wants4(BoundFamily f) { return f != BoundFamily::Lnew3; }

void require_single(BoundFamily f) {
  if (f == BoundFamily::Both) throw ArgumentError("pick lnew3 or lnew4; random_search_both covers both");
}

std::string kappa_id(double kappa) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "kappa=%.6g", kappa);
  return buf;
}

// Runs fn(t) for every trial on a pool of threads. Results must be written
// to per-trial slots; the exception from the lowest failing trial wins.
template <class Fn>
void for_each_trial(std::size_t trials, unsigned threads, Fn fn) {
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, trials));
  constexpr std::size_t kChunk = 64;
  std::atomic<std::size_t> next{0};
  std::mutex failure_mutex;
  std::size_t failed_trial = trials;
  std::exception_ptr failure;
  auto worker = [&] {
    for (;;) {
      const std::size_t begin = next.fetch_add(kChunk);
      if (begin >= trials) return;
      const std::size_t end = std::min(trials, begin + kChunk);
      for (std::size_t t = begin; t < end; ++t) {
        try {
          fn(t);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (t < failed_trial) {
            failed_trial = t;
            failure = std::current_exception();
          }
          return;
        }
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
}

struct TrialValues {
  double v3 = 0.0;
  double v4 = 0.0;
};

// Sequential reduction in trial order: strict improvement keeps the
// lowest trial index among ties.
SearchResult reduce(const std::vector<TrialValues>& values, bool use4, const RandomSearchOptions& opts,
                    std::size_t n) {
  SearchResult r;
  std::size_t best_trial = 0;
  for (std::size_t t = 0; t < values.size(); ++t) {
    const double v = use4 ? values[t].v4 : values[t].v3;
    ++r.evaluations;
    if (opts.keep_trace) r.trace.push_back({"trial:" + std::to_string(t), v});
    if (v > r.best_value) {
      r.best_value = v;
      best_trial = t;
    }
  }
  if (!values.empty()) {
    r.best_weights = random_trial_weights(n, opts.seed, best_trial);
    r.best_id = "trial:" + std::to_string(best_trial);
  }
  return r;
}

std::vector<TrialValues> run_trials(const PartialInfo& info, const RandomSearchOptions& opts, bool do3, bool do4) {
  if (opts.trials == 0) throw ArgumentError("random search needs at least one trial");
  const std::size_t n = info.event_count();
  std::vector<TrialValues> values(opts.trials);
  for_each_trial(opts.trials, opts.threads, [&](std::size_t t) {
    const WeightVector c = random_trial_weights(n, opts.seed, t);
    if (do3) values[t].v3 = lnew3(info, c, opts.mode).value;
    if (do4) values[t].v4 = lnew4(info, c, opts.mode).value;
  });
  return values;
}

}  // namespace

SearchResult kappa_line_search(const PartialInfo& info, std::span<const double> base, const KappaGrid& grid,
                               BoundFamily family, SolveMode mode) {
  require_single(family);
  if (base.size() != info.event_count()) throw DimensionMismatch("base weight length differs from event count");
  const std::size_t count = grid.count();
  SearchResult r;
  for (std::size_t j = 0; j < count; ++j) {
    const double kappa = grid.at(j);
    std::vector<double> c(base.begin(), base.end());
    for (double& v : c) v += kappa;
    std::optional<double> value;
    try {
      const WeightVector w(std::move(c));
      const bool usable = family == BoundFamily::Lnew4 ? w.all_positive() : w.valid();
      if (usable) {
        value = family == BoundFamily::Lnew4 ? lnew4(info, w, mode).value : lnew3(info, w, mode).value;
        if (*value > r.best_value) {
          r.best_value = *value;
          r.best_weights = w;
          r.best_id = kappa_id(kappa);
        }
      }
    } catch (const ArgumentError&) {
      // Mixed-sign weights beyond the enumeration limit: not evaluable.
      value.reset();
    }
    if (value) {
      ++r.evaluations;
    } else {
      ++r.skipped;
    }
    r.trace.push_back({kappa_id(kappa), value});
  }
  return r;
}

WeightVector random_trial_weights(std::size_t n, std::uint64_t seed, std::size_t trial) {
  Rng rng(seed, trial);
  std::vector<double> c(n);
  for (double& v : c) v = rng.uniform_open_closed();
  return WeightVector(std::move(c));
}

SearchResult random_search(const PartialInfo& info, const RandomSearchOptions& opts, BoundFamily family) {
  require_single(family);
  const bool use4 = family == BoundFamily::Lnew4;
  return reduce(run_trials(info, opts, !use4, use4), use4, opts, info.event_count());
}

RandomSearchOutcome random_search_both(const PartialInfo& info, const RandomSearchOptions& opts) {
  const std::vector<TrialValues> values = run_trials(info, opts, true, true);
  RandomSearchOutcome out;
  out.lnew3 = reduce(values, false, opts, info.event_count());
  out.lnew4 = reduce(values, true, opts, info.event_count());
  FamilyComparison& cmp = out.comparison;
  cmp.trials = values.size();
  double ratio_sum = 0.0;
  for (const auto& v : values) {
    if (v.v4 > v.v3 + 1e-12) ++cmp.improved;
    if (v.v3 > 0.0) {
      ++cmp.ratio_trials;
      ratio_sum += v.v4 / v.v3;
    }
  }
  cmp.improved_percent = 100.0 * static_cast<double>(cmp.improved) / static_cast<double>(cmp.trials);
  cmp.mean_ratio = cmp.ratio_trials == 0 ? 0.0 : ratio_sum / static_cast<double>(cmp.ratio_trials);
  return out;
}

namespace {

template <class F>
void add_entry(BoundReport& report, const std::string& strategy, const std::string& name, BoundKind kind, F&& f) {
  try {
    report.entries.push_back(make_entry(f(), strategy));
  } catch (const InconsistentInfo&) {
    throw;
  } catch (const Error& e) {
    ReportEntry entry;
    entry.name = name;
    entry.strategy = strategy;
    entry.kind = kind;
    entry.status = e.what();
    report.entries.push_back(std::move(entry));
  }
}

BoundValue from_search(const SearchResult& r, const char* name) {
  if (!r.best_weights) throw DegenerateWeights("no evaluable weights in the search");
  BoundValue b{name, r.best_value, BoundKind::Lower, r.best_weights, {r.best_id}};
  if (r.skipped > 0) b.notes.push_back(std::to_string(r.skipped) + " points skipped");
  return b;
}

void check_oracle(const PartialInfo& info, const EventSpace& oracle) {
  const PartialInfo derived = derive_partial_info(oracle);
  if (derived.event_count() != info.event_count()) throw ValidationError("oracle space has a different event count");
  const auto a = derived.pairwise_matrix();
  const auto b = info.pairwise_matrix();
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (std::abs(a[k] - b[k]) > 1e-9) throw ValidationError("oracle space does not match the partial information");
  }
}

}  // namespace

BoundReport compare_all(const PartialInfo& info, const SearchConfig& config, const EventSpace* oracle) {
  const std::size_t n = info.event_count();
  for (const Strategy& s : config.strategies) {
    if (const auto* clip = std::get_if<GkClipped>(&s); clip && !(clip->eps > 0.0)) {
      throw ArgumentError("clip epsilon must be positive");
    }
    if (const auto* line = std::get_if<KappaLine>(&s)) line->grid.count();
    if (const auto* rnd = std::get_if<RandomPositive>(&s); rnd && rnd->trials == 0) {
      throw ArgumentError("random search needs at least one trial");
    }
  }
  if (oracle) check_oracle(info, *oracle);
  BoundReport report;
  report.n = n;
  report.input_form = oracle ? "atoms" : "partial";

  const auto ones = WeightVector::ones(n);
  add_entry(report, "", "dc", BoundKind::Lower, [&] { return dc_bound(info); });
  add_entry(report, "", "gk", BoundKind::Lower, [&] { return gk_bound(info).bound; });
  add_entry(report, "", "kat", BoundKind::Lower, [&] { return kat_bound(info); });
  add_entry(report, "", "yat2", BoundKind::Lower, [&] { return yat2_bound(info); });
  if (n <= config.opt_max_events) {
    add_entry(report, "ones", "opt", BoundKind::Lower, [&] {
      return BoundValue{"opt", optimal_inclass_bound(info, ones, BoundSense::Lower), BoundKind::Lower, ones, {}};
    });
    add_entry(report, "ones", "opt_upper", BoundKind::Upper, [&] {
      return BoundValue{"opt_upper", optimal_inclass_bound(info, ones, BoundSense::Upper), BoundKind::Upper, ones, {}};
    });
  }

  std::optional<std::vector<double>> gk_weights;
  auto gk = [&]() -> const std::vector<double>& {
    if (!gk_weights) gk_weights = gk_bound(info).weights;
    return *gk_weights;
  };
  const bool f3 = wants3(config.family);
  const bool f4 = wants4(config.family);
  auto both = [&](const std::string& strategy, auto weights) {
    if (f3) add_entry(report, strategy, "lnew3", BoundKind::Lower, [&] { return lnew3(info, weights(), config.mode); });
    if (f4) add_entry(report, strategy, "lnew4", BoundKind::Lower, [&] { return lnew4(info, weights(), config.mode); });
  };

  for (const Strategy& s : config.strategies) {
    if (std::holds_alternative<GkExact>(s)) {
      both("gk", [&] { return WeightVector(gk()); });
    } else if (const auto* clip = std::get_if<GkClipped>(&s)) {
      both("gk+", [&] { return clip_weights(gk(), clip->eps); });
    } else if (const auto* line = std::get_if<KappaLine>(&s)) {
      if (f3) {
        add_entry(report, "kappa", "lnew3", BoundKind::Lower, [&] {
          return from_search(kappa_line_search(info, gk(), line->grid, BoundFamily::Lnew3, config.mode), "lnew3");
        });
      }
      if (f4) {
        add_entry(report, "kappa", "lnew4", BoundKind::Lower, [&] {
          return from_search(kappa_line_search(info, gk(), line->grid, BoundFamily::Lnew4, config.mode), "lnew4");
        });
      }
    } else if (const auto* rnd = std::get_if<RandomPositive>(&s)) {
      const RandomSearchOptions opts{rnd->trials, rnd->seed, config.threads, false, config.mode};
      if (f3 && f4) {
        const RandomSearchOutcome out = random_search_both(info, opts);
        add_entry(report, "rand", "lnew3", BoundKind::Lower, [&] { return from_search(out.lnew3, "lnew3"); });
        add_entry(report, "rand", "lnew4", BoundKind::Lower, [&] { return from_search(out.lnew4, "lnew4"); });
        report.comparison = out.comparison;
      } else {
        const BoundFamily fam = f3 ? BoundFamily::Lnew3 : BoundFamily::Lnew4;
        const SearchResult r = random_search(info, opts, fam);
        add_entry(report, "rand", to_string(fam), BoundKind::Lower, [&] { return from_search(r, to_string(fam)); });
      }
    }
  }

  add_entry(report, "ones", "unew4", BoundKind::Upper, [&] { return unew4(info, ones); });
  add_entry(report, "ones", "unew5", BoundKind::Upper, [&] { return unew5(info, ones); });

  if (oracle) annotate_validity(report, exact_union(*oracle));
  return report;
}

}  // namespace unionbound
