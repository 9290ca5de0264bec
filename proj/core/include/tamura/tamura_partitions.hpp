#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "tamura/exact_field.hpp"
#include "tamura/weights.hpp"

namespace tamura {

struct Partition {
  friend bool operator==(const Partition&, const Partition&) = default;
};

/// `value` is produced by two families; (family, iterate) is the lower family index.
struct Collision {
  std::int64_t value = 0;
  std::size_t family = 0;
  std::int64_t iterate = 0;
  std::size_t other_family = 0;
  std::int64_t other_iterate = 0;
  friend bool operator==(const Collision&, const Collision&) = default;
};

/// `value` belongs to no family.
struct Gap {
  std::int64_t value = 0;
  friend bool operator==(const Gap&, const Gap&) = default;
};

using PartitionVerdict = std::variant<Partition, Collision, Gap>;

struct PartitionReport {
  std::int64_t bound = 0;
  PartitionVerdict verdict;
  /// owners[v - 1] is the 1-based family owning v, 0 if none. Filled only on request.
  std::vector<std::uint16_t> owners;

  bool is_partition() const noexcept { return std::holds_alternative<Partition>(verdict); }
  /// Smallest violating value, or 0 for a partition.
  std::int64_t witness_value() const noexcept;
  std::string describe() const;
};

enum class ScanMethod {
  automatic,  // bitset up to kBitsetLimit, k-way merge beyond
  bitset,
  merge,
};

inline constexpr std::int64_t kBitsetLimit = 100'000'000;

struct ScanOptions {
  bool record_owners = false;
  ScanMethod method = ScanMethod::automatic;
};

/// n -> element, n >= 1. Must be non-decreasing and unbounded.
using SetGenerator = std::function<std::int64_t(std::int64_t)>;

/*
 * Checks whether the sets {g_j(n) : n >= 1}, restricted to [1, N], partition
 * [1, N]. Each family is walked until it first exceeds N. Values below 1 are
 * ignored and repeats inside one family count once. The report names the
 * smallest violating value.
 */
PartitionReport check_partition(std::span<const SetGenerator> families, std::int64_t bound,
                                const ScanOptions& options = {});

/// Weights failed a Beatty/Rayleigh precondition (alpha rational or alpha <= 1).
class BeattyParameterError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/*
 * The sets A_j = { sum_k floor(n a_j / a_k) : n >= 1 }. Requires pairwise
 * irrational ratios; construction throws HypothesisViolation otherwise.
 */
class TamuraFamily {
 public:
  explicit TamuraFamily(WeightTuple weights);

  std::size_t size() const noexcept { return weights_.size(); }
  const WeightTuple& weights() const noexcept { return weights_; }

  std::int64_t element(std::size_t j, std::int64_t n) const;
  /// Elements of A_j not exceeding bound, increasing.
  std::vector<std::int64_t> elements_up_to(std::size_t j, std::int64_t bound) const;
  std::vector<SetGenerator> generators() const;

 private:
  WeightTuple weights_;
};

std::int64_t tamura_element(const WeightTuple& weights, std::size_t j, std::int64_t n);

/// Throws HypothesisViolation before scanning when some ratio is rational.
PartitionReport verify_partition(const WeightTuple& weights, std::int64_t bound, const ScanOptions& options = {});

/// { floor(n alpha) <= bound } for irrational alpha > 1.
std::vector<std::int64_t> beatty_set(const QuadIrrational& alpha, std::int64_t bound);

/// beta = alpha / (alpha - 1), the exponent with 1/alpha + 1/beta = 1.
QuadIrrational rayleigh_conjugate(const QuadIrrational& alpha);

struct RayleighReport {
  QuadIrrational alpha;
  QuadIrrational beta;
  PartitionReport partition;
};

RayleighReport rayleigh_pair(const QuadIrrational& alpha, std::int64_t bound, const ScanOptions& options = {});

/*
 * Scans the naive Beatty family { floor(n a_i) } for m >= 3 positive weights
 * and reports the first collision or gap. A partition verdict here only means
 * no witness was found up to the bound.
 */
PartitionReport uspensky_scan(std::span<const QuadIrrational> weights, std::int64_t bound,
                              const ScanOptions& options = {});

}  // namespace tamura
