#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace adjset {

using NodeId = std::uint32_t;

// Set of node ids over a fixed universe 0..n-1, stored as a bitmask.
// Iteration is always in ascending id order.
class NodeSet {
public:
    NodeSet() = default;
    explicit NodeSet(std::size_t universe);
    NodeSet(std::size_t universe, std::initializer_list<NodeId> ids);
    NodeSet(std::size_t universe, const std::vector<NodeId>& ids);

    static NodeSet full(std::size_t universe);

    std::size_t universe() const noexcept { return universe_; }
    std::size_t size() const noexcept;
    bool empty() const noexcept;

    bool contains(NodeId v) const noexcept {
        return v < universe_ && ((words_[v >> 6] >> (v & 63)) & 1u);
    }
    void insert(NodeId v);
    void erase(NodeId v);

    NodeSet operator|(const NodeSet& o) const;
    NodeSet operator&(const NodeSet& o) const;
    NodeSet operator-(const NodeSet& o) const;
    NodeSet& operator|=(const NodeSet& o);
    NodeSet& operator&=(const NodeSet& o);
    NodeSet& operator-=(const NodeSet& o);

    bool intersects(const NodeSet& o) const;
    bool is_subset_of(const NodeSet& o) const;
    bool operator==(const NodeSet& o) const;
    bool operator!=(const NodeSet& o) const { return !(*this == o); }
    // Colex order: compares the highest differing member.
    bool operator<(const NodeSet& o) const;

    std::vector<NodeId> to_vector() const;
    // Smallest member, or universe() when empty.
    NodeId first() const;

    class const_iterator {
    public:
        using value_type = NodeId;
        using difference_type = std::ptrdiff_t;
        const_iterator() = default;
        const_iterator(const NodeSet* s, std::size_t pos) : set_(s), pos_(pos) { advance(); }
        NodeId operator*() const { return static_cast<NodeId>(pos_); }
        const_iterator& operator++() {
            ++pos_;
            advance();
            return *this;
        }
        const_iterator operator++(int) {
            auto t = *this;
            ++*this;
            return t;
        }
        bool operator==(const const_iterator& o) const { return pos_ == o.pos_; }
        bool operator!=(const const_iterator& o) const { return pos_ != o.pos_; }

    private:
        void advance();
        const NodeSet* set_ = nullptr;
        std::size_t pos_ = 0;
    };

    const_iterator begin() const { return const_iterator(this, 0); }
    const_iterator end() const { return const_iterator(this, universe_); }

private:
    void check_universe(const NodeSet& o) const;

    std::size_t universe_ = 0;
    std::vector<std::uint64_t> words_;
};

} // namespace adjset
