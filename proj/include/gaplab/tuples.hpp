#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gaplab/arith.hpp"

namespace gaplab {

// A k-tuple of strictly increasing nonnegative offsets, optionally carrying
// equal-size partition labels (one label per offset, contiguous blocks).
class KTuple {
 public:
  explicit KTuple(std::vector<uint64_t> offsets);
  static KTuple parse(std::string_view csv);

  uint32_t k() const { return static_cast<uint32_t>(offsets_.size()); }
  const std::vector<uint64_t>& offsets() const { return offsets_; }
  uint64_t max_offset() const { return offsets_.back(); }

  bool has_partition() const { return !labels_.empty(); }
  uint32_t parts() const { return parts_; }
  uint32_t label(uint32_t i) const;
  const std::vector<uint32_t>& labels() const { return labels_; }

  bool contains(uint64_t h) const;
  std::string to_string() const;

 private:
  friend KTuple partition_equal(const KTuple& t, uint32_t parts);
  std::vector<uint64_t> offsets_;
  std::vector<uint32_t> labels_;
  uint32_t parts_ = 0;
};

// Admissibility: for every prime p <= k the offsets miss a residue class
// mod p. Primes beyond k cannot be covered by k residues, so only p <= k
// are tested.
bool is_admissible(const KTuple& t);

// Translated tuple {n + h_i}.
std::vector<uint64_t> translate(const KTuple& t, uint64_t n);

// Label offsets with `parts` contiguous equal-size blocks; parts must divide k.
KTuple partition_equal(const KTuple& t, uint32_t parts);

// For each part j, |{i : label(i)=j, n + h_i prime}|. Requires labels and
// max(n + h_i) <= store.limit.
std::vector<uint64_t> prime_pattern(const PrimeStore& store, const KTuple& t, uint64_t n);

}  // namespace gaplab
