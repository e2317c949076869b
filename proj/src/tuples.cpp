#include "gaplab/tuples.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "gaplab/errors.hpp"

namespace gaplab {

KTuple::KTuple(std::vector<uint64_t> offsets) : offsets_(std::move(offsets)) {
  if (offsets_.empty()) throw argument_error("a tuple needs at least one offset");
  std::sort(offsets_.begin(), offsets_.end());
  for (size_t i = 1; i < offsets_.size(); ++i)
    if (offsets_[i] == offsets_[i - 1])
      throw argument_error("tuple offsets must be distinct (duplicate " +
                           std::to_string(offsets_[i]) + ")");
}

KTuple KTuple::parse(std::string_view csv) {
  std::vector<uint64_t> offs;
  std::string token;
  std::istringstream in{std::string(csv)};
  while (std::getline(in, token, ',')) {
    size_t pos = 0;
    uint64_t v = 0;
    try {
      v = std::stoull(token, &pos);
    } catch (const std::exception&) {
      throw parse_error("bad tuple literal near '" + token + "'");
    }
    while (pos < token.size() && std::isspace(static_cast<unsigned char>(token[pos]))) ++pos;
    if (pos != token.size()) throw parse_error("bad tuple literal near '" + token + "'");
    offs.push_back(v);
  }
  if (offs.empty()) throw parse_error("empty tuple literal");
  return KTuple(std::move(offs));
}

uint32_t KTuple::label(uint32_t i) const {
  if (labels_.empty()) throw argument_error("tuple carries no partition labels");
  return labels_.at(i);
}

bool KTuple::contains(uint64_t h) const {
  return std::binary_search(offsets_.begin(), offsets_.end(), h);
}

std::string KTuple::to_string() const {
  std::string out;
  for (size_t i = 0; i < offsets_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(offsets_[i]);
  }
  return out;
}

bool is_admissible(const KTuple& t) {
  const auto& h = t.offsets();
  const uint64_t k = h.size();
  // Only p <= k can have all residues covered by k offsets.
  std::vector<uint8_t> seen;
  for (uint64_t p = 2; p <= k; ++p) {
    bool prime = true;
    for (uint64_t d = 2; d * d <= p; ++d)
      if (p % d == 0) { prime = false; break; }
    if (!prime) continue;
    seen.assign(p, 0);
    uint64_t distinct = 0;
    for (uint64_t v : h) {
      const uint64_t r = v % p;
      if (!seen[r]) { seen[r] = 1; ++distinct; }
    }
    if (distinct == p) return false;
  }
  return true;
}

std::vector<uint64_t> translate(const KTuple& t, uint64_t n) {
  std::vector<uint64_t> out;
  out.reserve(t.k());
  for (uint64_t v : t.offsets()) out.push_back(n + v);
  return out;
}

KTuple partition_equal(const KTuple& t, uint32_t parts) {
  const uint32_t k = t.k();
  if (parts == 0 || k % parts != 0)
    throw argument_error("parts = " + std::to_string(parts) + " does not divide k = " +
                         std::to_string(k));
  KTuple out = t;
  const uint32_t block = k / parts;
  out.labels_.resize(k);
  for (uint32_t i = 0; i < k; ++i) out.labels_[i] = i / block;
  out.parts_ = parts;
  return out;
}

std::vector<uint64_t> prime_pattern(const PrimeStore& store, const KTuple& t, uint64_t n) {
  if (!t.has_partition()) throw argument_error("prime_pattern needs a partitioned tuple");
  if (n + t.max_offset() > store.limit())
    throw range_error("translated tuple exceeds store limit");
  std::vector<uint64_t> counts(t.parts(), 0);
  const auto& h = t.offsets();
  for (uint32_t i = 0; i < t.k(); ++i)
    if (store.is_prime(n + h[i])) ++counts[t.label(i)];
  return counts;
}

}  // namespace gaplab
