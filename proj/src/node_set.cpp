#include "adjset/node_set.hpp"

#include <bit>

#include "adjset/error.hpp"

namespace adjset {

namespace {
std::size_t word_count(std::size_t n) { return (n + 63) / 64; }
} // namespace

NodeSet::NodeSet(std::size_t universe) : universe_(universe), words_(word_count(universe), 0) {}

NodeSet::NodeSet(std::size_t universe, std::initializer_list<NodeId> ids) : NodeSet(universe) {
    for (NodeId v : ids) insert(v);
}

NodeSet::NodeSet(std::size_t universe, const std::vector<NodeId>& ids) : NodeSet(universe) {
    for (NodeId v : ids) insert(v);
}

NodeSet NodeSet::full(std::size_t universe) {
    NodeSet s(universe);
    for (auto& w : s.words_) w = ~std::uint64_t{0};
    if (universe % 64 != 0 && !s.words_.empty())
        s.words_.back() = (std::uint64_t{1} << (universe % 64)) - 1;
    return s;
}

std::size_t NodeSet::size() const noexcept {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
}

bool NodeSet::empty() const noexcept {
    for (auto w : words_)
        if (w) return false;
    return true;
}

void NodeSet::insert(NodeId v) {
    if (v >= universe_)
        throw Error(ErrorKind::InvalidArgument, "node id " + std::to_string(v) + " out of range");
    words_[v >> 6] |= std::uint64_t{1} << (v & 63);
}

void NodeSet::erase(NodeId v) {
    if (v < universe_) words_[v >> 6] &= ~(std::uint64_t{1} << (v & 63));
}

void NodeSet::check_universe(const NodeSet& o) const {
    if (o.universe_ != universe_)
        throw Error(ErrorKind::InvalidArgument, "node sets over different universes");
}

NodeSet& NodeSet::operator|=(const NodeSet& o) {
    check_universe(o);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
}

NodeSet& NodeSet::operator&=(const NodeSet& o) {
    check_universe(o);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
}

NodeSet& NodeSet::operator-=(const NodeSet& o) {
    check_universe(o);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
    return *this;
}

NodeSet NodeSet::operator|(const NodeSet& o) const {
    NodeSet r = *this;
    return r |= o;
}
NodeSet NodeSet::operator&(const NodeSet& o) const {
    NodeSet r = *this;
    return r &= o;
}
NodeSet NodeSet::operator-(const NodeSet& o) const {
    NodeSet r = *this;
    return r -= o;
}

bool NodeSet::intersects(const NodeSet& o) const {
    check_universe(o);
    for (std::size_t i = 0; i < words_.size(); ++i)
        if (words_[i] & o.words_[i]) return true;
    return false;
}

bool NodeSet::is_subset_of(const NodeSet& o) const {
    check_universe(o);
    for (std::size_t i = 0; i < words_.size(); ++i)
        if (words_[i] & ~o.words_[i]) return false;
    return true;
}

bool NodeSet::operator==(const NodeSet& o) const {
    return universe_ == o.universe_ && words_ == o.words_;
}

bool NodeSet::operator<(const NodeSet& o) const {
    check_universe(o);
    for (std::size_t i = words_.size(); i-- > 0;)
        if (words_[i] != o.words_[i]) return words_[i] < o.words_[i];
    return false;
}

std::vector<NodeId> NodeSet::to_vector() const {
    std::vector<NodeId> out;
    for (NodeId v : *this) out.push_back(v);
    return out;
}

NodeId NodeSet::first() const { return *begin(); }

void NodeSet::const_iterator::advance() {
    const std::size_t n = set_->universe_;
    while (pos_ < n) {
        std::uint64_t w = set_->words_[pos_ >> 6] >> (pos_ & 63);
        if (w) {
            pos_ += static_cast<std::size_t>(std::countr_zero(w));
            if (pos_ > n) pos_ = n;
            return;
        }
        pos_ = (pos_ | 63) + 1;
    }
    pos_ = n;
}

} // namespace adjset
