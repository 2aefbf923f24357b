#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace ncp {

/// A partition of the ground set {1..n} into disjoint nonempty blocks.
///
/// Stored as the restricted-growth string a_1..a_n, where a_i is the index of
/// the block containing i and blocks are numbered by first appearance. This
/// fixes the canonical block order (blocks sorted by smallest element) and a
/// canonical total order on partitions (lexicographic on the string).
/// Instances are immutable values.
class Partition {
 public:
  static constexpr int kMaxGroundSet = 16;

  /// Builds a partition from explicit blocks; the blocks must be disjoint,
  /// nonempty, and cover {1..n} exactly.
  static Partition from_blocks(int n, const std::vector<std::vector<int>>& blocks);

  /// Builds a partition from a restricted-growth string (a_1 = 0,
  /// a_{i+1} <= 1 + max(a_1..a_i)).
  static Partition from_rgs(const std::vector<int>& labels);

  int size() const { return n_; }
  int block_count() const { return block_count_; }

  /// Block index (0-based, by first appearance) of a 1-based element.
  int label(int element) const;

  /// Blocks in canonical order: sorted internally, ordered by smallest element.
  std::vector<std::vector<int>> blocks() const;
  std::vector<int> block_sizes() const;

  /// Debug dump, e.g. "0,1,0,1" for {{1,3},{2,4}}.
  std::string rgs_string() const;

  bool operator==(const Partition& other) const;
  bool operator<(const Partition& other) const;

 private:
  Partition() = default;

  std::uint8_t n_ = 0;
  std::uint8_t block_count_ = 0;
  std::array<std::uint8_t, kMaxGroundSet> rgs_{};
};

inline constexpr int kSetPartitionCap = 12;
inline constexpr int kNoncrossingPartitionCap = 14;
inline constexpr int kIntervalPartitionCap = 16;

/// All partitions of {1..n}, n <= 12, in lexicographic restricted-growth order.
std::vector<Partition> enumerate_set_partitions(int n);

/// All non-crossing partitions of {1..n}, n <= 14, same canonical order.
/// A partition is crossing iff there are a<b<c<d with a,c in one block and
/// b,d in another.
std::vector<Partition> enumerate_noncrossing_partitions(int n);

/// All partitions of {1..n}, n <= 16, whose blocks are intervals of
/// consecutive integers.
std::vector<Partition> enumerate_interval_partitions(int n);

bool is_noncrossing(const Partition& p);
bool is_interval(const Partition& p);

}  // namespace ncp
