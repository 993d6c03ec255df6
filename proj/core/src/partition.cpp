#include "vdm/partition.hpp"

#include "vdm/errors.hpp"
#include "vdm/rational.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace vdm {

SetPartition::SetPartition(int n, std::vector<std::vector<int>> blocks) : n_(n), blocks_(std::move(blocks)) {
    if (n_ < 1) throw domain_error("partition ground set must be nonempty");
    for (auto& b : blocks_) {
        if (b.empty()) throw domain_error("partition contains an empty block");
        std::sort(b.begin(), b.end());
    }
    std::sort(blocks_.begin(), blocks_.end(),
              [](const std::vector<int>& a, const std::vector<int>& b) { return a.front() < b.front(); });

    block_of_.assign(static_cast<std::size_t>(n_), -1);
    for (int bi = 0; bi < static_cast<int>(blocks_.size()); ++bi) {
        for (int k : blocks_[static_cast<std::size_t>(bi)]) {
            if (k < 1 || k > n_) throw domain_error("partition element out of range");
            auto& slot = block_of_[static_cast<std::size_t>(k - 1)];
            if (slot != -1) throw domain_error("partition blocks are not disjoint");
            slot = bi;
        }
    }
    for (int slot : block_of_) {
        if (slot == -1) throw domain_error("partition blocks do not cover {1..n}");
    }
}

std::vector<int> SetPartition::block_sizes_sorted_desc() const {
    std::vector<int> sizes;
    sizes.reserve(blocks_.size());
    for (const auto& b : blocks_) sizes.push_back(static_cast<int>(b.size()));
    std::sort(sizes.begin(), sizes.end(), std::greater<>());
    return sizes;
}

bool SetPartition::operator<(const SetPartition& o) const {
    if (n_ != o.n_) return n_ < o.n_;
    return blocks_ < o.blocks_;
}

std::string SetPartition::to_text() const {
    std::ostringstream os;
    for (std::size_t bi = 0; bi < blocks_.size(); ++bi) {
        if (bi) os << '/';
        for (std::size_t i = 0; i < blocks_[bi].size(); ++i) {
            if (i) os << ',';
            os << blocks_[bi][i];
        }
    }
    return os.str();
}

SetPartition SetPartition::from_text(const std::string& text) {
    std::vector<std::vector<int>> blocks;
    int max_elem = 0;
    std::istringstream blocks_in(text);
    std::string block_text;
    while (std::getline(blocks_in, block_text, '/')) {
        std::vector<int> block;
        std::istringstream elems_in(block_text);
        std::string elem_text;
        while (std::getline(elems_in, elem_text, ',')) {
            try {
                block.push_back(std::stoi(elem_text));
            } catch (const std::logic_error&) {
                throw domain_error("cannot parse partition text: " + text);
            }
            max_elem = std::max(max_elem, block.back());
        }
        blocks.push_back(std::move(block));
    }
    if (blocks.empty()) throw domain_error("cannot parse partition text: " + text);
    return SetPartition(max_elem, std::move(blocks));
}

SetPartition SetPartition::singletons(int n) {
    std::vector<std::vector<int>> blocks;
    blocks.reserve(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k) blocks.push_back({k});
    return SetPartition(n, std::move(blocks));
}

SetPartition SetPartition::one_block(int n) {
    std::vector<int> all(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k) all[static_cast<std::size_t>(k - 1)] = k;
    return SetPartition(n, {all});
}

BlockSignature BlockSignature::of(const SetPartition& p) {
    BlockSignature sig;
    sig.n = p.n();
    sig.multiplicities.assign(static_cast<std::size_t>(p.n()), 0);
    for (const auto& b : p.blocks()) ++sig.multiplicities[b.size() - 1];
    return sig;
}

void BlockSignature::validate() const {
    if (n < 1 || static_cast<int>(multiplicities.size()) != n) {
        throw domain_error("block signature has wrong length");
    }
    long long total = 0;
    for (int i = 1; i <= n; ++i) {
        int r = multiplicities[static_cast<std::size_t>(i - 1)];
        if (r < 0) throw domain_error("negative block multiplicity");
        total += static_cast<long long>(i) * r;
    }
    if (total != n) throw domain_error("block signature does not sum to n");
}

namespace {

constexpr int kMaxEnumerateN = 12;  // Bell(12) ~ 4.2M

SetPartition partition_from_rgs(const std::vector<int>& rgs) {
    int n = static_cast<int>(rgs.size());
    int nblocks = *std::max_element(rgs.begin(), rgs.end()) + 1;
    std::vector<std::vector<int>> blocks(static_cast<std::size_t>(nblocks));
    for (int k = 1; k <= n; ++k) blocks[static_cast<std::size_t>(rgs[static_cast<std::size_t>(k - 1)])].push_back(k);
    return SetPartition(n, std::move(blocks));
}

} // namespace

void for_each_partition(int n, const std::function<bool(const SetPartition&)>& visit) {
    if (n < 1 || n > kMaxEnumerateN) {
        throw size_error("partition enumeration supports 1 <= n <= " + std::to_string(kMaxEnumerateN));
    }
    // Restricted growth strings: a_1 = 0, a_{k+1} <= 1 + max(a_1..a_k),
    // enumerated in lexicographic order.
    std::vector<int> a(static_cast<std::size_t>(n), 0);
    std::vector<int> prefix_max(static_cast<std::size_t>(n), 0);
    while (true) {
        if (!visit(partition_from_rgs(a))) return;
        int k = n - 1;
        for (; k > 0; --k) {
            if (a[static_cast<std::size_t>(k)] <= prefix_max[static_cast<std::size_t>(k - 1)]) break;
        }
        if (k == 0) return;
        ++a[static_cast<std::size_t>(k)];
        prefix_max[static_cast<std::size_t>(k)] =
            std::max(prefix_max[static_cast<std::size_t>(k - 1)], a[static_cast<std::size_t>(k)]);
        for (int j = k + 1; j < n; ++j) {
            a[static_cast<std::size_t>(j)] = 0;
            prefix_max[static_cast<std::size_t>(j)] = prefix_max[static_cast<std::size_t>(j - 1)];
        }
    }
}

std::vector<SetPartition> enumerate_partitions(int n) {
    std::vector<SetPartition> out;
    for_each_partition(n, [&](const SetPartition& p) {
        out.push_back(p);
        return true;
    });
    return out;
}

bool is_noncrossing(const SetPartition& p) {
    // Crossing iff i < j < k < l with i~k in one block and j~l in another.
    // Scan with a stack over positions; classic linear test.
    const int n = p.n();
    std::vector<int> stack;
    std::vector<int> remaining(static_cast<std::size_t>(p.block_count()), 0);
    for (const auto& b : p.blocks()) remaining[static_cast<std::size_t>(p.block_of(b.front()))] = static_cast<int>(b.size());

    for (int k = 1; k <= n; ++k) {
        int blk = p.block_of(k);
        if (!stack.empty() && stack.back() == blk) {
            // continuing the open block
        } else {
            // Block must not already be open deeper in the stack.
            for (int open : stack) {
                if (open == blk) return false;
            }
            stack.push_back(blk);
        }
        if (--remaining[static_cast<std::size_t>(blk)] == 0) {
            if (stack.back() != blk) return false;
            stack.pop_back();
        }
    }
    return true;
}

SetPartition kreweras_complement(const SetPartition& p) {
    if (!is_noncrossing(p)) throw domain_error("Kreweras complement requires a noncrossing partition");
    const int n = p.n();

    // Barred point i-bar lies between i and i+1 (n-bar between n and 1).
    // i-bar ~ j-bar iff no block has elements strictly on both arcs of the
    // circle cut at i-bar and j-bar.
    auto compatible = [&](int i, int j) {
        // Arc A: elements i+1..j ; arc B: j+1..n,1..i.
        for (const auto& b : p.blocks()) {
            bool in_a = false;
            bool in_b = false;
            for (int e : b) {
                if (e > i && e <= j) {
                    in_a = true;
                } else {
                    in_b = true;
                }
            }
            if (in_a && in_b) return false;
        }
        return true;
    };

    std::vector<int> parent(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) parent[static_cast<std::size_t>(i)] = i;
    std::function<int(int)> find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    for (int i = 1; i <= n; ++i) {
        for (int j = i + 1; j <= n; ++j) {
            if (compatible(i, j)) parent[static_cast<std::size_t>(find(i - 1))] = find(j - 1);
        }
    }

    std::map<int, std::vector<int>> groups;
    for (int i = 1; i <= n; ++i) groups[find(i - 1)].push_back(i);
    std::vector<std::vector<int>> blocks;
    blocks.reserve(groups.size());
    for (auto& [root, members] : groups) blocks.push_back(std::move(members));
    return SetPartition(n, std::move(blocks));
}

bool refinement_leq(const SetPartition& a, const SetPartition& b) {
    if (a.n() != b.n()) throw domain_error("refinement order requires equal ground sets");
    for (const auto& blk : a.blocks()) {
        int target = b.block_of(blk.front());
        for (int e : blk) {
            if (b.block_of(e) != target) return false;
        }
    }
    return true;
}

std::int64_t count_noncrossing_by_signature(const BlockSignature& sig) {
    sig.validate();
    int blocks = 0;
    for (int r : sig.multiplicities) blocks += r;
    Rational count = factorial_rational(sig.n);
    for (int r : sig.multiplicities) count /= factorial_rational(r);
    count /= factorial_rational(sig.n + 1 - blocks);
    if (count.den() != 1) throw domain_error("noncrossing count did not reduce to an integer");
    return count.num();
}

SetPartition partition_of_index_tuple(const std::vector<long long>& tuple) {
    if (tuple.empty()) throw domain_error("index tuple must be nonempty");
    std::map<long long, std::vector<int>> by_value;
    for (int k = 1; k <= static_cast<int>(tuple.size()); ++k) {
        by_value[tuple[static_cast<std::size_t>(k - 1)]].push_back(k);
    }
    std::vector<std::vector<int>> blocks;
    blocks.reserve(by_value.size());
    for (auto& [value, members] : by_value) blocks.push_back(std::move(members));
    return SetPartition(static_cast<int>(tuple.size()), std::move(blocks));
}

namespace {
constexpr int kMaxBellN = 25;  // Bell(25) is the largest Bell number below 2^63
}

std::int64_t bell_number(int n) {
    if (n < 0 || n > kMaxBellN) throw size_error("bell_number supports 0 <= n <= 25");
    // B_{n+1} = sum_k C(n,k) B_k.
    std::vector<Rational> bell(static_cast<std::size_t>(n) + 1);
    bell[0] = Rational(1);
    for (int m = 0; m < n; ++m) {
        Rational next(0);
        for (int k = 0; k <= m; ++k) next += binomial_rational(m, k) * bell[static_cast<std::size_t>(k)];
        bell[static_cast<std::size_t>(m + 1)] = next;
    }
    return bell[static_cast<std::size_t>(n)].num();
}

std::int64_t catalan_number(int n) {
    if (n < 0 || n > kMaxBellN) throw size_error("catalan_number supports 0 <= n <= 25");
    Rational c = binomial_rational(2 * n, n) / Rational(n + 1);
    return c.num();
}

} // namespace vdm
