#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace vdm {

// Set partition of {1..n} in canonical form: every block sorted ascending,
// blocks ordered by least element. Canonical form makes equality structural
// and the text form usable as a map key.
class SetPartition {
public:
    SetPartition() = default;
    // Canonicalizes and validates (disjoint nonempty blocks covering {1..n}).
    SetPartition(int n, std::vector<std::vector<int>> blocks);

    int n() const { return n_; }
    int block_count() const { return static_cast<int>(blocks_.size()); }
    const std::vector<std::vector<int>>& blocks() const { return blocks_; }
    // Index of the block containing element k (1-based k).
    int block_of(int k) const { return block_of_[static_cast<std::size_t>(k - 1)]; }
    std::vector<int> block_sizes_sorted_desc() const;

    bool operator==(const SetPartition& o) const { return n_ == o.n_ && blocks_ == o.blocks_; }
    bool operator!=(const SetPartition& o) const { return !(*this == o); }
    bool operator<(const SetPartition& o) const;  // lexicographic on (n, blocks)

    // Text form used by the CLI, tests and the coefficient cache: blocks as
    // slash-separated groups of comma-separated 1-based indices, "1,3/2,4".
    std::string to_text() const;
    static SetPartition from_text(const std::string& text);

    static SetPartition singletons(int n);  // 0_n
    static SetPartition one_block(int n);   // 1_n

private:
    int n_ = 0;
    std::vector<std::vector<int>> blocks_;
    std::vector<int> block_of_;
};

// Block-size multiplicities r_1..r_n with sum i*r_i = n.
struct BlockSignature {
    int n = 0;
    std::vector<int> multiplicities;  // multiplicities[i-1] = number of blocks of size i

    static BlockSignature of(const SetPartition& p);
    void validate() const;  // throws domain_error unless sum i*r_i == n
};

// All partitions of {1..n} in restricted-growth-string order. 1 <= n <= 12.
std::vector<SetPartition> enumerate_partitions(int n);
// Streaming variant; stops early if the visitor returns false.
void for_each_partition(int n, const std::function<bool(const SetPartition&)>& visit);

bool is_noncrossing(const SetPartition& p);

// Kreweras complement via the circular representation: barred points i-bar sit
// between i and i+1; two barred points join iff no block of p has elements on
// both arcs between them. Requires p noncrossing.
SetPartition kreweras_complement(const SetPartition& p);

// Refinement order: every block of a contained in some block of b.
bool refinement_leq(const SetPartition& a, const SetPartition& b);

// Number of noncrossing partitions with the given block-size multiplicities:
// n! / (r_1! r_2! ... r_n! (n+1-sum r_i)!).
std::int64_t count_noncrossing_by_signature(const BlockSignature& sig);

// Partition induced by equal values in an index tuple: k ~ k' iff j_k == j_k'.
SetPartition partition_of_index_tuple(const std::vector<long long>& tuple);

std::int64_t bell_number(int n);     // 0 <= n <= 25
std::int64_t catalan_number(int n);  // 0 <= n <= 25

} // namespace vdm
