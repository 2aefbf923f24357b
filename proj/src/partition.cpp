#include "ncp/partition.hpp"

#include <algorithm>
#include <set>

#include "ncp/errors.hpp"

namespace ncp {

namespace {

void check_ground_set_size(int n, int cap, const char* what) {
  if (n < 1 || n > cap) {
    throw SizeLimitError(std::string(what) + ": ground-set size " + std::to_string(n) +
                         " outside supported range [1, " + std::to_string(cap) + "]");
  }
}

}  // namespace

Partition Partition::from_rgs(const std::vector<int>& labels) {
  const int n = static_cast<int>(labels.size());
  check_ground_set_size(n, kMaxGroundSet, "Partition::from_rgs");
  Partition p;
  p.n_ = static_cast<std::uint8_t>(n);
  int max_label = -1;
  for (int i = 0; i < n; ++i) {
    const int a = labels[i];
    if (a < 0 || a > max_label + 1) {
      throw ShapeError("Partition::from_rgs: label at position " + std::to_string(i + 1) +
                       " is not a restricted-growth value");
    }
    max_label = std::max(max_label, a);
    p.rgs_[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(a);
  }
  p.block_count_ = static_cast<std::uint8_t>(max_label + 1);
  return p;
}

Partition Partition::from_blocks(int n, const std::vector<std::vector<int>>& blocks) {
  check_ground_set_size(n, kMaxGroundSet, "Partition::from_blocks");
  std::vector<int> label_of(static_cast<std::size_t>(n) + 1, -1);
  std::size_t covered = 0;
  // Blocks are renumbered by smallest element, independent of input order.
  std::vector<std::pair<int, std::size_t>> order;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].empty()) throw ShapeError("Partition::from_blocks: empty block");
    order.emplace_back(*std::min_element(blocks[b].begin(), blocks[b].end()), b);
  }
  std::sort(order.begin(), order.end());
  int next_label = 0;
  for (const auto& [min_elem, b] : order) {
    (void)min_elem;
    for (int e : blocks[b]) {
      if (e < 1 || e > n) {
        throw ShapeError("Partition::from_blocks: element " + std::to_string(e) +
                         " outside {1.." + std::to_string(n) + "}");
      }
      if (label_of[static_cast<std::size_t>(e)] != -1) {
        throw ShapeError("Partition::from_blocks: element " + std::to_string(e) + " repeated");
      }
      label_of[static_cast<std::size_t>(e)] = next_label;
      ++covered;
    }
    ++next_label;
  }
  if (covered != static_cast<std::size_t>(n)) {
    throw ShapeError("Partition::from_blocks: blocks do not cover {1.." + std::to_string(n) + "}");
  }
  std::vector<int> rgs(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) rgs[static_cast<std::size_t>(i - 1)] = label_of[static_cast<std::size_t>(i)];
  return from_rgs(rgs);
}

int Partition::label(int element) const {
  if (element < 1 || element > n_) {
    throw ShapeError("Partition::label: element out of range");
  }
  return rgs_[static_cast<std::size_t>(element - 1)];
}

std::vector<std::vector<int>> Partition::blocks() const {
  std::vector<std::vector<int>> out(block_count_);
  for (int i = 1; i <= n_; ++i) {
    out[rgs_[static_cast<std::size_t>(i - 1)]].push_back(i);
  }
  return out;
}

std::vector<int> Partition::block_sizes() const {
  std::vector<int> sizes(block_count_, 0);
  for (int i = 0; i < n_; ++i) ++sizes[rgs_[static_cast<std::size_t>(i)]];
  return sizes;
}

std::string Partition::rgs_string() const {
  std::string s;
  for (int i = 0; i < n_; ++i) {
    if (i > 0) s += ',';
    s += std::to_string(static_cast<int>(rgs_[static_cast<std::size_t>(i)]));
  }
  return s;
}

bool Partition::operator==(const Partition& other) const {
  if (n_ != other.n_) return false;
  return std::equal(rgs_.begin(), rgs_.begin() + n_, other.rgs_.begin());
}

bool Partition::operator<(const Partition& other) const {
  return std::lexicographical_compare(rgs_.begin(), rgs_.begin() + n_, other.rgs_.begin(),
                                      other.rgs_.begin() + other.n_);
}

namespace {

void enumerate_set_rec(int pos, int n, int max_label, std::vector<int>& rgs,
                       std::vector<Partition>& out) {
  if (pos == n) {
    out.push_back(Partition::from_rgs(rgs));
    return;
  }
  for (int a = 0; a <= max_label + 1; ++a) {
    rgs[static_cast<std::size_t>(pos)] = a;
    enumerate_set_rec(pos + 1, n, std::max(max_label, a), rgs, out);
  }
}

// A partition is non-crossing iff it can be built left to right with a stack
// of open blocks: each element either opens a new block (push) or joins an
// open block, closing every block above it. Candidate labels grow bottom to
// top, so visiting them in stack order emits lexicographic restricted-growth
// strings.
void enumerate_noncrossing_rec(int pos, int n, int next_label, std::vector<int>& rgs,
                               std::vector<int>& open, std::vector<Partition>& out) {
  if (pos == n) {
    out.push_back(Partition::from_rgs(rgs));
    return;
  }
  for (std::size_t k = 0; k < open.size(); ++k) {
    rgs[static_cast<std::size_t>(pos)] = open[k];
    std::vector<int> popped(open.begin() + static_cast<std::ptrdiff_t>(k) + 1, open.end());
    open.resize(k + 1);
    enumerate_noncrossing_rec(pos + 1, n, next_label, rgs, open, out);
    open.insert(open.end(), popped.begin(), popped.end());
  }
  rgs[static_cast<std::size_t>(pos)] = next_label;
  open.push_back(next_label);
  enumerate_noncrossing_rec(pos + 1, n, next_label + 1, rgs, open, out);
  open.pop_back();
}

}  // namespace

std::vector<Partition> enumerate_set_partitions(int n) {
  check_ground_set_size(n, kSetPartitionCap, "enumerate_set_partitions");
  std::vector<Partition> out;
  std::vector<int> rgs(static_cast<std::size_t>(n), 0);
  enumerate_set_rec(1, n, 0, rgs, out);
  return out;
}

std::vector<Partition> enumerate_noncrossing_partitions(int n) {
  check_ground_set_size(n, kNoncrossingPartitionCap, "enumerate_noncrossing_partitions");
  std::vector<Partition> out;
  std::vector<int> rgs(static_cast<std::size_t>(n), 0);
  std::vector<int> open{0};
  enumerate_noncrossing_rec(1, n, 1, rgs, open, out);
  return out;
}

std::vector<Partition> enumerate_interval_partitions(int n) {
  check_ground_set_size(n, kIntervalPartitionCap, "enumerate_interval_partitions");
  std::vector<Partition> out;
  std::vector<int> rgs(static_cast<std::size_t>(n), 0);
  // Element i either continues the current block or starts the next one;
  // continuing keeps the smaller label, so recursion order is lexicographic.
  const auto rec = [&](auto&& self, int pos, int label) -> void {
    if (pos == n) {
      out.push_back(Partition::from_rgs(rgs));
      return;
    }
    rgs[static_cast<std::size_t>(pos)] = label;
    self(self, pos + 1, label);
    rgs[static_cast<std::size_t>(pos)] = label + 1;
    self(self, pos + 1, label + 1);
  };
  rec(rec, 1, 0);
  return out;
}

bool is_noncrossing(const Partition& p) {
  const int n = p.size();
  for (int a = 1; a <= n; ++a) {
    for (int b = a + 1; b <= n; ++b) {
      if (p.label(a) == p.label(b)) continue;
      for (int c = b + 1; c <= n; ++c) {
        if (p.label(c) != p.label(a)) continue;
        for (int d = c + 1; d <= n; ++d) {
          if (p.label(d) == p.label(b)) return false;
        }
      }
    }
  }
  return true;
}

bool is_interval(const Partition& p) {
  for (int i = 2; i <= p.size(); ++i) {
    const int prev = p.label(i - 1);
    const int cur = p.label(i);
    if (cur != prev && cur != prev + 1) return false;
  }
  return true;
}

}  // namespace ncp
