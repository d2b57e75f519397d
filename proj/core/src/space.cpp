#include "unionbound/space.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>

#include "unionbound/errors.hpp"
#include "unionbound/random.hpp"

namespace unionbound {

namespace {

std::string pair_name(std::size_t i, std::size_t j) {
  std::ostringstream os;
  os << "pairwise(" << i + 1 << "," << j + 1 << ")";
  return os.str();
}

std::vector<double> subset_table(std::span<const double> c) {
  std::vector<double> table(std::size_t{1} << c.size(), 0.0);
  for (Mask m = 1; m < table.size(); ++m) {
    table[m] = table[m & (m - 1)] + c[std::countr_zero(m)];
  }
  return table;
}

}  // namespace

EventSpace::EventSpace(std::size_t n, std::vector<double> atoms, std::size_t max_events)
    : n_(n), atoms_(std::move(atoms)) {
  if (n == 0) throw ArgumentError("event space needs at least one event");
  if (n > max_events || n >= 63) {
    std::ostringstream os;
    os << "event count " << n << " exceeds the atom-level cap of " << max_events;
    throw ArgumentError(os.str());
  }
  if (atoms_.size() != (std::size_t{1} << n)) {
    std::ostringstream os;
    os << "expected " << (std::size_t{1} << n) << " atom entries, got " << atoms_.size();
    throw ValidationError(os.str());
  }
  atoms_[0] = 0.0;
  double total = 0.0;
  for (Mask m = 1; m < atoms_.size(); ++m) {
    const double p = atoms_[m];
    if (!std::isfinite(p) || p < 0.0) {
      std::ostringstream os;
      os << "atom " << m << " has invalid probability " << p;
      throw ValidationError(os.str());
    }
    total += p;
  }
  if (total > 1.0 + kProbTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "atom probabilities sum to " << total << " > 1";
    throw ValidationError(os.str());
  }
}

std::size_t EventSpace::nonzero_atoms() const {
  return static_cast<std::size_t>(std::count_if(atoms_.begin() + 1, atoms_.end(), [](double p) { return p > 0.0; }));
}

PartialInfo::PartialInfo(std::vector<double> alpha, std::vector<double> pairwise)
    : alpha_(std::move(alpha)), pairwise_(std::move(pairwise)) {
  const std::size_t n = alpha_.size();
  if (n == 0) throw ValidationError("partial information needs at least one event");
  if (pairwise_.size() != n * n) {
    std::ostringstream os;
    os << "pairwise matrix must be " << n << "x" << n;
    throw ValidationError(os.str());
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double a = alpha_[i];
    if (!std::isfinite(a) || a < -kProbTolerance || a > 1.0 + kProbTolerance) {
      std::ostringstream os;
      os << "alpha(" << i + 1 << ")=" << a << " is not a probability";
      throw ValidationError(os.str());
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double p = pairwise_[i * n + j];
      if (!std::isfinite(p)) throw ValidationError(pair_name(i, j) + " is not finite");
      if (i == j) {
        if (std::abs(p - alpha_[i]) > kProbTolerance) {
          std::ostringstream os;
          os.precision(17);
          os << pair_name(i, i) << "=" << p << " differs from alpha(" << i + 1 << ")=" << alpha_[i];
          throw ValidationError(os.str());
        }
        continue;
      }
      const double q = pairwise_[j * n + i];
      if (std::abs(p - q) > kProbTolerance) {
        std::ostringstream os;
        os.precision(17);
        os << "matrix is not symmetric: " << pair_name(i, j) << "=" << p << " but " << pair_name(j, i)
           << "=" << q;
        throw ValidationError(os.str());
      }
      if (p < -kProbTolerance || p > std::min(alpha_[i], alpha_[j]) + kProbTolerance) {
        std::ostringstream os;
        os.precision(17);
        os << pair_name(i, j) << "=" << p << " is outside [0, min(alpha(" << i + 1 << "), alpha(" << j + 1
           << "))]";
        throw ValidationError(os.str());
      }
    }
  }
}

const char* to_string(WeightClass c) {
  switch (c) {
    case WeightClass::AllPositive: return "all-positive";
    case WeightClass::MixedSignValid: return "mixed-sign-valid";
    case WeightClass::Invalid: return "invalid";
  }
  return "?";
}

WeightVector::WeightVector(std::vector<double> c) : c_(std::move(c)), class_(WeightClass::Invalid) {
  if (c_.empty()) throw ArgumentError("weight vector is empty");
  for (double v : c_) {
    if (!std::isfinite(v)) throw ArgumentError("weight vector has a non-finite entry");
  }
  if (std::all_of(c_.begin(), c_.end(), [](double v) { return v > 0.0; })) {
    class_ = WeightClass::AllPositive;
    return;
  }
  if (c_.size() > 48) throw ArgumentError("cannot certify mixed-sign weights with more than 48 entries");
  class_ = min_abs_subset_sum(c_) <= kWeightZeroTolerance ? WeightClass::Invalid : WeightClass::MixedSignValid;
}

double WeightVector::sum() const {
  double s = 0.0;
  for (double v : c_) s += v;
  return s;
}

double WeightVector::min() const { return *std::min_element(c_.begin(), c_.end()); }

double min_abs_subset_sum(std::span<const double> c) {
  if (c.empty()) throw ArgumentError("empty weight vector");
  if (c.size() > 48) throw ArgumentError("subset-sum certification limited to 48 weights");
  const std::size_t split = c.size() / 2;
  const std::vector<double> low = subset_table(c.first(split));
  std::vector<double> high = subset_table(c.subspan(split));

  double best = std::numeric_limits<double>::infinity();
  // Low part empty: only nonempty high subsets count.
  for (std::size_t m = 1; m < high.size(); ++m) best = std::min(best, std::abs(high[m]));
  std::sort(high.begin(), high.end());
  for (std::size_t m = 1; m < low.size(); ++m) {
    const double target = -low[m];
    auto it = std::lower_bound(high.begin(), high.end(), target);
    if (it != high.end()) best = std::min(best, std::abs(low[m] + *it));
    if (it != high.begin()) best = std::min(best, std::abs(low[m] + *std::prev(it)));
  }
  return best;
}

SubsetSums::SubsetSums(std::span<const double> c)
    : split_(c.size() / 2),
      low_mask_(full_mask(c.size() / 2)),
      low_(subset_table(c.first(c.size() / 2))),
      high_(subset_table(c.subspan(c.size() / 2))) {}

double exact_union(const EventSpace& space) {
  double total = 0.0;
  for (double p : space.atoms()) total += p;
  return total;
}

PartialInfo derive_partial_info(const EventSpace& space) {
  const std::size_t n = space.event_count();
  std::vector<double> alpha(n, 0.0);
  std::vector<double> pairwise(n * n, 0.0);
  const auto atoms = space.atoms();
  std::vector<std::size_t> members;
  members.reserve(n);
  for (Mask m = 1; m < atoms.size(); ++m) {
    const double p = atoms[m];
    if (p == 0.0) continue;
    members.clear();
    for (Mask rest = m; rest != 0; rest &= rest - 1) members.push_back(std::countr_zero(rest));
    for (std::size_t a = 0; a < members.size(); ++a) {
      const std::size_t i = members[a];
      alpha[i] += p;
      for (std::size_t b = a + 1; b < members.size(); ++b) pairwise[i * n + members[b]] += p;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    pairwise[i * n + i] = alpha[i];
    for (std::size_t j = i + 1; j < n; ++j) pairwise[j * n + i] = pairwise[i * n + j];
  }
  return PartialInfo(std::move(alpha), std::move(pairwise));
}

double weighted_identity(const EventSpace& space, const WeightVector& w) {
  const std::size_t n = space.event_count();
  if (w.size() != n) throw DimensionMismatch("weight vector length differs from event count");
  if (!w.valid()) throw InvalidWeights("weights violate the nonzero subset-sum condition");
  const SubsetSums sums(w.values());
  const auto atoms = space.atoms();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (Mask m = 1; m < atoms.size(); ++m) {
      if (!contains(m, i) || atoms[m] == 0.0) continue;
      acc += w[i] * atoms[m] / sums(m);
    }
    total += acc;
  }
  return total;
}

double gamma(const PartialInfo& info, const WeightVector& w, std::size_t i) {
  if (w.size() != info.event_count()) throw DimensionMismatch("weight vector length differs from event count");
  if (i >= info.event_count()) throw ArgumentError("event index out of range");
  double acc = 0.0;
  const auto row = info.pairwise_row(i);
  for (std::size_t k = 0; k < row.size(); ++k) acc += w[k] * row[k];
  return acc;
}

std::vector<double> gammas(const PartialInfo& info, const WeightVector& w) {
  std::vector<double> out(info.event_count());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = gamma(info, w, i);
  return out;
}

EventSpace generate_random_space(std::size_t n, std::uint64_t seed, SpaceModel model, std::size_t max_events) {
  if (n == 0 || n > max_events || n >= 63) {
    std::ostringstream os;
    os << "event count must be in [1, " << max_events << "], got " << n;
    throw ArgumentError(os.str());
  }
  const std::size_t size = std::size_t{1} << n;
  std::vector<double> atoms(size, 0.0);
  Rng rng(seed, n);

  if (model.kind == SpaceModel::Kind::Dirichlet) {
    // Index 0 stands in for the complement atom during the draw.
    double total = 0.0;
    for (auto& a : atoms) {
      a = rng.exponential();
      total += a;
    }
    for (auto& a : atoms) a /= total;
    atoms[0] = 0.0;
    return EventSpace(n, std::move(atoms), max_events);
  }

  const std::size_t k = model.atoms;
  if (k == 0 || k > size - 1) {
    std::ostringstream os;
    os << "sparse model needs 1 <= k <= " << size - 1 << ", got " << k;
    throw ArgumentError(os.str());
  }
  std::vector<Mask> chosen;
  chosen.reserve(k);
  if (2 * k > size) {
    std::vector<Mask> pool(size - 1);
    for (std::size_t m = 1; m < size; ++m) pool[m - 1] = m;
    for (std::size_t j = 0; j < k; ++j) {
      const std::size_t pick = j + rng.below(pool.size() - j);
      std::swap(pool[j], pool[pick]);
      chosen.push_back(pool[j]);
    }
  } else {
    std::vector<bool> seen(size, false);
    while (chosen.size() < k) {
      const Mask m = 1 + rng.below(size - 1);
      if (seen[m]) continue;
      seen[m] = true;
      chosen.push_back(m);
    }
  }
  std::vector<double> mass(k + 1);
  double total = 0.0;
  for (auto& v : mass) {
    v = rng.exponential();
    total += v;
  }
  for (std::size_t j = 0; j < k; ++j) atoms[chosen[j]] = mass[j] / total;
  return EventSpace(n, std::move(atoms), max_events);
}

}  // namespace unionbound
