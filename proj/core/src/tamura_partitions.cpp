#include "tamura/tamura_partitions.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <optional>
#include <queue>
#include <tuple>

namespace tamura {

namespace {

constexpr std::int64_t kNone = std::numeric_limits<std::int64_t>::max();

std::int64_t to_int64(const mpz_class& z) {
  if (!z.fits_slong_p()) throw std::overflow_error("sequence element does not fit in 64 bits");
  return z.get_si();
}

void check_bound(std::int64_t bound) {
  if (bound < 1) throw std::invalid_argument("partition bound must be >= 1");
}

// Smallest iterate n with g(n) == value, if any.
std::optional<std::int64_t> iterate_of(const SetGenerator& g, std::int64_t value) {
  for (std::int64_t n = 1;; ++n) {
    const std::int64_t v = g(n);
    if (v == value) return n;
    if (v > value) return std::nullopt;
  }
}

Collision collision_at(std::span<const SetGenerator> families, std::int64_t value) {
  Collision c;
  c.value = value;
  bool first = true;
  for (std::size_t f = 0; f < families.size(); ++f) {
    const auto n = iterate_of(families[f], value);
    if (!n) continue;
    if (first) {
      c.family = f + 1;
      c.iterate = *n;
      first = false;
    } else {
      c.other_family = f + 1;
      c.other_iterate = *n;
      break;
    }
  }
  return c;
}

class BitSet {
 public:
  explicit BitSet(std::int64_t size) : words_(static_cast<std::size_t>(size / 64 + 1), 0) {}
  bool test(std::int64_t i) const { return (words_[static_cast<std::size_t>(i >> 6)] >> (i & 63)) & 1u; }
  void set(std::int64_t i) { words_[static_cast<std::size_t>(i >> 6)] |= std::uint64_t{1} << (i & 63); }

  // First clear bit in [from, to], or kNone.
  std::int64_t first_clear(std::int64_t from, std::int64_t to) const {
    for (std::int64_t w = from >> 6; w <= (to >> 6); ++w) {
      std::uint64_t inverted = ~words_[static_cast<std::size_t>(w)];
      if (w == (from >> 6)) inverted &= ~std::uint64_t{0} << (from & 63);
      if (inverted == 0) continue;
      const std::int64_t i = w * 64 + std::countr_zero(inverted);
      return i <= to ? i : kNone;
    }
    return kNone;
  }

 private:
  std::vector<std::uint64_t> words_;
};

PartitionReport scan_bitset(std::span<const SetGenerator> families, std::int64_t bound, bool record_owners) {
  PartitionReport report;
  report.bound = bound;
  if (record_owners) report.owners.assign(static_cast<std::size_t>(bound), 0);
  BitSet seen(bound + 1);
  std::int64_t first_collision = kNone;

  for (std::size_t f = 0; f < families.size(); ++f) {
    std::int64_t previous = std::numeric_limits<std::int64_t>::min();
    for (std::int64_t n = 1;; ++n) {
      const std::int64_t v = families[f](n);
      if (v > bound) break;
      if (v < 1 || v == previous) continue;
      previous = v;
      if (seen.test(v)) {
        first_collision = std::min(first_collision, v);
        continue;
      }
      seen.set(v);
      if (record_owners) report.owners[static_cast<std::size_t>(v - 1)] = static_cast<std::uint16_t>(f + 1);
    }
  }

  const std::int64_t first_gap = seen.first_clear(1, bound);
  if (first_collision == kNone && first_gap == kNone) {
    report.verdict = Partition{};
  } else if (first_collision < first_gap) {
    report.verdict = collision_at(families, first_collision);
  } else {
    report.verdict = Gap{first_gap};
  }
  return report;
}

PartitionReport scan_merge(std::span<const SetGenerator> families, std::int64_t bound, bool record_owners) {
  PartitionReport report;
  report.bound = bound;
  if (record_owners) report.owners.assign(static_cast<std::size_t>(bound), 0);

  using Entry = std::tuple<std::int64_t, std::size_t, std::int64_t>;  // value, family, iterate
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  for (std::size_t f = 0; f < families.size(); ++f) heap.emplace(families[f](1), f, 1);

  std::int64_t expected = 1;
  std::optional<Entry> last;
  while (!heap.empty()) {
    const auto [v, f, n] = heap.top();
    heap.pop();
    if (v > bound) continue;  // family exhausted
    heap.emplace(families[f](n + 1), f, n + 1);
    if (v < 1) continue;

    if (last && std::get<0>(*last) == v) {
      if (std::get<1>(*last) == f) continue;  // repeat inside one family
      report.verdict = Collision{v, std::get<1>(*last) + 1, std::get<2>(*last), f + 1, n};
      return report;
    }
    if (v > expected) {
      report.verdict = Gap{expected};
      return report;
    }
    if (record_owners) report.owners[static_cast<std::size_t>(v - 1)] = static_cast<std::uint16_t>(f + 1);
    last = Entry{v, f, n};
    expected = v + 1;
  }
  if (expected <= bound) {
    report.verdict = Gap{expected};
  } else {
    report.verdict = Partition{};
  }
  return report;
}

std::vector<SetGenerator> beatty_generators(std::span<const QuadIrrational> weights) {
  std::vector<SetGenerator> out;
  out.reserve(weights.size());
  for (const QuadIrrational& a : weights) {
    out.emplace_back([a](std::int64_t n) { return to_int64(floor_product(n, a)); });
  }
  return out;
}

void check_beatty_parameter(const QuadIrrational& alpha) {
  if (alpha.is_rational()) throw BeattyParameterError("alpha = " + alpha.to_string() + " is rational");
  if (alpha <= FieldContext(alpha.radicand()).one()) {
    throw BeattyParameterError("alpha = " + alpha.to_string() + " must exceed 1");
  }
}

}  // namespace

std::int64_t PartitionReport::witness_value() const noexcept {
  if (const auto* c = std::get_if<Collision>(&verdict)) return c->value;
  if (const auto* g = std::get_if<Gap>(&verdict)) return g->value;
  return 0;
}

std::string PartitionReport::describe() const {
  const std::string range = "[1.." + std::to_string(bound) + "]";
  if (const auto* c = std::get_if<Collision>(&verdict)) {
    return "collision at " + std::to_string(c->value) + ": family " + std::to_string(c->family) + " (n=" +
           std::to_string(c->iterate) + ") and family " + std::to_string(c->other_family) + " (n=" +
           std::to_string(c->other_iterate) + ")";
  }
  if (const auto* g = std::get_if<Gap>(&verdict)) {
    return "gap at " + std::to_string(g->value) + ": no family contains it";
  }
  return "partition of " + range;
}

PartitionReport check_partition(std::span<const SetGenerator> families, std::int64_t bound,
                                const ScanOptions& options) {
  check_bound(bound);
  if (families.empty()) throw std::invalid_argument("need at least one family");
  if (families.size() > std::numeric_limits<std::uint16_t>::max()) {
    throw std::invalid_argument("too many families");
  }
  ScanMethod method = options.method;
  if (method == ScanMethod::automatic) method = bound <= kBitsetLimit ? ScanMethod::bitset : ScanMethod::merge;
  return method == ScanMethod::bitset ? scan_bitset(families, bound, options.record_owners)
                                      : scan_merge(families, bound, options.record_owners);
}

TamuraFamily::TamuraFamily(WeightTuple weights) : weights_(std::move(weights)) { weights_.require_hypothesis(); }

std::int64_t TamuraFamily::element(std::size_t j, std::int64_t n) const {
  if (n < 1) throw std::out_of_range("iterate must be >= 1");
  return to_int64(weights_.ratio_floor_sum(j, n));
}

std::vector<std::int64_t> TamuraFamily::elements_up_to(std::size_t j, std::int64_t bound) const {
  std::vector<std::int64_t> out;
  for (std::int64_t n = 1;; ++n) {
    const std::int64_t v = element(j, n);
    if (v > bound) break;
    out.push_back(v);
  }
  return out;
}

std::vector<SetGenerator> TamuraFamily::generators() const {
  std::vector<SetGenerator> out;
  out.reserve(size());
  for (std::size_t j = 1; j <= size(); ++j) {
    out.emplace_back([weights = weights_, j](std::int64_t n) { return to_int64(weights.ratio_floor_sum(j, n)); });
  }
  return out;
}

std::int64_t tamura_element(const WeightTuple& weights, std::size_t j, std::int64_t n) {
  weights.require_hypothesis();
  if (n < 1) throw std::out_of_range("iterate must be >= 1");
  return to_int64(weights.ratio_floor_sum(j, n));
}

PartitionReport verify_partition(const WeightTuple& weights, std::int64_t bound, const ScanOptions& options) {
  const TamuraFamily family(weights);
  check_bound(bound);
  const std::vector<SetGenerator> generators = family.generators();
  return check_partition(generators, bound, options);
}

std::vector<std::int64_t> beatty_set(const QuadIrrational& alpha, std::int64_t bound) {
  check_beatty_parameter(alpha);
  std::vector<std::int64_t> out;
  for (std::int64_t n = 1;; ++n) {
    const std::int64_t v = to_int64(floor_product(n, alpha));
    if (v > bound) break;
    out.push_back(v);
  }
  return out;
}

QuadIrrational rayleigh_conjugate(const QuadIrrational& alpha) {
  check_beatty_parameter(alpha);
  return alpha / (alpha - FieldContext(alpha.radicand()).one());
}

RayleighReport rayleigh_pair(const QuadIrrational& alpha, std::int64_t bound, const ScanOptions& options) {
  QuadIrrational beta = rayleigh_conjugate(alpha);
  const std::vector<QuadIrrational> pair{alpha, beta};
  const std::vector<SetGenerator> generators = beatty_generators(pair);
  return RayleighReport{alpha, std::move(beta), check_partition(generators, bound, options)};
}

PartitionReport uspensky_scan(std::span<const QuadIrrational> weights, std::int64_t bound,
                              const ScanOptions& options) {
  if (weights.size() < 3) throw std::invalid_argument("uspensky scan needs m >= 3 weights");
  // Validates positivity and a common field; ratios may be anything here.
  const WeightTuple tuple(std::vector<QuadIrrational>(weights.begin(), weights.end()));
  const std::vector<SetGenerator> generators = beatty_generators(tuple.weights());
  return check_partition(generators, bound, options);
}

}  // namespace tamura
