#pragma once

// Full-duplex 1-2-1 relay network model.
//
// Node 0 is the source, nodes 1..N are relays and node N+1 is the destination.
// Every relay owns one transmit beam and one receive beam; the source and the
// destination own M beams each. A directed link (tx -> rx) carries capacity
// ell_{rx,tx} whenever both endpoints point their beams at each other.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mmpass/errors.hpp"

namespace mmpass {

using NodeId = int;
using LinkId = std::size_t;

struct Link {
    NodeId tx = 0;
    NodeId rx = 0;
    double capacity = 0.0;

    friend bool operator==(const Link&, const Link&) = default;
};

/// Immutable network description. Construction never rejects input; call
/// validate() to obtain the list of invariant violations.
class Network {
public:
    Network() = default;

    Network(int n_relays, int m_beams, std::vector<Link> links)
        : n_relays_(n_relays), m_beams_(m_beams), links_(std::move(links)) {
        build_index();
    }

    int n_relays() const noexcept { return n_relays_; }
    int m_beams() const noexcept { return m_beams_; }
    int node_count() const noexcept { return n_relays_ + 2; }
    NodeId source() const noexcept { return 0; }
    NodeId destination() const noexcept { return n_relays_ + 1; }

    std::span<const Link> links() const noexcept { return links_; }
    const Link& link(LinkId id) const { return links_.at(id); }
    std::size_t link_count() const noexcept { return links_.size(); }

    /// Index of the link tx -> rx, if present (first occurrence for duplicates).
    std::optional<LinkId> find_link(NodeId tx, NodeId rx) const {
        if (!in_range(tx) || !in_range(rx)) return std::nullopt;
        const auto v = index_[static_cast<std::size_t>(tx * node_count() + rx)];
        if (v < 0) return std::nullopt;
        return static_cast<LinkId>(v);
    }

    /// Outgoing link ids of a node, ordered by receiving node id.
    std::span<const LinkId> out_links(NodeId n) const { return out_.at(static_cast<std::size_t>(n)); }
    /// Incoming link ids of a node, ordered by transmitting node id.
    std::span<const LinkId> in_links(NodeId n) const { return in_.at(static_cast<std::size_t>(n)); }

    /// Same topology and beam count, new capacities (aligned with links()).
    Network with_capacities(std::span<const double> caps) const {
        if (caps.size() != links_.size()) throw InvalidArgument("capacity vector size mismatch");
        auto copy = links_;
        for (std::size_t i = 0; i < copy.size(); ++i) copy[i].capacity = caps[i];
        return Network(n_relays_, m_beams_, std::move(copy));
    }

    Network with_beams(int m_beams) const { return Network(n_relays_, m_beams, links_); }

    /// Keeps only the links for which keep(id) is true.
    template <class Pred>
    Network filter_links(Pred keep) const {
        std::vector<Link> kept;
        for (LinkId i = 0; i < links_.size(); ++i)
            if (keep(i)) kept.push_back(links_[i]);
        return Network(n_relays_, m_beams_, std::move(kept));
    }

    bool has_unit_capacities(double tol = 1e-12) const {
        return std::all_of(links_.begin(), links_.end(),
                           [tol](const Link& l) { return std::abs(l.capacity - 1.0) <= tol; });
    }

    friend bool operator==(const Network& a, const Network& b) {
        return a.n_relays_ == b.n_relays_ && a.m_beams_ == b.m_beams_ && a.links_ == b.links_;
    }

private:
    bool in_range(NodeId n) const noexcept { return n >= 0 && n < node_count(); }

    void build_index() {
        if (n_relays_ < 0) return;
        const auto n = static_cast<std::size_t>(node_count());
        index_.assign(n * n, -1);
        out_.assign(n, {});
        in_.assign(n, {});
        for (LinkId i = 0; i < links_.size(); ++i) {
            const auto& l = links_[i];
            if (!in_range(l.tx) || !in_range(l.rx)) continue;
            auto& slot = index_[static_cast<std::size_t>(l.tx) * n + static_cast<std::size_t>(l.rx)];
            if (slot >= 0) continue;
            slot = static_cast<long>(i);
            out_[static_cast<std::size_t>(l.tx)].push_back(i);
            in_[static_cast<std::size_t>(l.rx)].push_back(i);
        }
        for (auto& v : out_)
            std::sort(v.begin(), v.end(), [&](LinkId a, LinkId b) { return links_[a].rx < links_[b].rx; });
        for (auto& v : in_)
            std::sort(v.begin(), v.end(), [&](LinkId a, LinkId b) { return links_[a].tx < links_[b].tx; });
    }

    int n_relays_ = 0;
    int m_beams_ = 1;
    std::vector<Link> links_;
    std::vector<long> index_;
    std::vector<std::vector<LinkId>> out_;
    std::vector<std::vector<LinkId>> in_;
};

/// Returns every invariant violation of the network. Empty means valid.
inline std::vector<std::string> validate(const Network& net) {
    std::vector<std::string> errs;
    const int n = net.n_relays();
    if (n < 0) errs.push_back("n_relays must be >= 0, got " + std::to_string(n));
    if (net.m_beams() < 1) errs.push_back("m_beams must be >= 1, got " + std::to_string(net.m_beams()));
    if (n < 0) return errs;

    const NodeId dst = net.destination();
    std::vector<char> seen(static_cast<std::size_t>(net.node_count() * net.node_count()), 0);
    for (LinkId i = 0; i < net.link_count(); ++i) {
        const auto& l = net.link(i);
        const std::string tag = "link " + std::to_string(i) + " (" + std::to_string(l.tx) + "->" +
                                std::to_string(l.rx) + "): ";
        bool endpoints_ok = true;
        if (l.tx < 0 || l.tx > dst || l.rx < 0 || l.rx > dst) {
            errs.push_back(tag + "node id out of range [0, " + std::to_string(dst) + "]");
            endpoints_ok = false;
        } else {
            if (l.rx == 0) errs.push_back(tag + "link into source");
            if (l.tx == dst) errs.push_back(tag + "link out of destination");
            if (l.tx == l.rx) errs.push_back(tag + "self-loop");
        }
        if (!std::isfinite(l.capacity))
            errs.push_back(tag + "non-finite capacity");
        else if (l.capacity < 0.0)
            errs.push_back(tag + "negative capacity");
        if (endpoints_ok) {
            auto& s = seen[static_cast<std::size_t>(l.tx * net.node_count() + l.rx)];
            if (s) errs.push_back(tag + "duplicate link");
            s = 1;
        }
    }
    return errs;
}

inline void require_valid(const Network& net) {
    if (auto errs = validate(net); !errs.empty()) throw ValidationError(std::move(errs));
}

/// Per-link activation-time caps theta_{rx,tx}, aligned with Network::links().
class ThresholdMap {
public:
    ThresholdMap() = default;
    explicit ThresholdMap(std::vector<double> values) : values_(std::move(values)) {}

    static ThresholdMap uniform(const Network& net, double theta) {
        return ThresholdMap(std::vector<double>(net.link_count(), theta));
    }

    std::span<const double> values() const noexcept { return values_; }
    double operator[](LinkId id) const { return values_.at(id); }
    std::size_t size() const noexcept { return values_.size(); }

    /// Smallest threshold over all links; 1 for a network without links.
    double min() const {
        if (values_.empty()) return 1.0;
        return *std::min_element(values_.begin(), values_.end());
    }

    friend bool operator==(const ThresholdMap&, const ThresholdMap&) = default;

private:
    std::vector<double> values_;
};

inline std::vector<std::string> validate(const ThresholdMap& th, const Network& net) {
    std::vector<std::string> errs;
    if (th.size() != net.link_count())
        errs.push_back("threshold map has " + std::to_string(th.size()) + " entries, network has " +
                       std::to_string(net.link_count()) + " links");
    for (std::size_t i = 0; i < th.size(); ++i) {
        const double t = th[i];
        if (!(t >= 0.0 && t <= 1.0))
            errs.push_back("threshold of link " + std::to_string(i) + " outside [0,1]: " + std::to_string(t));
    }
    return errs;
}

inline void require_valid(const ThresholdMap& th, const Network& net) {
    if (auto errs = validate(th, net); !errs.empty()) throw ValidationError(std::move(errs));
}

/// A simple source-to-destination path.
///
/// The path capacity is the smallest link capacity along it. Operating a lone
/// path for the whole time forces every link activation C_p / ell <= 1, so C_p
/// cannot exceed any link on the path, and the minimum is attained by running
/// the bottleneck link continuously.
struct Path {
    std::vector<NodeId> nodes;
    std::vector<LinkId> links;
    double capacity = 0.0;

    friend bool operator==(const Path& a, const Path& b) { return a.nodes == b.nodes; }
    friend auto operator<=>(const Path& a, const Path& b) { return a.nodes <=> b.nodes; }
};

/// Builds a path from its node sequence; throws InvalidArgument when the
/// sequence is not a simple source-to-destination walk over existing links.
inline Path make_path(const Network& net, std::vector<NodeId> nodes) {
    if (nodes.size() < 2 || nodes.front() != net.source() || nodes.back() != net.destination())
        throw InvalidArgument("path must start at the source and end at the destination");
    std::vector<char> used(static_cast<std::size_t>(net.node_count()), 0);
    Path p;
    p.capacity = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        const NodeId v = nodes[k];
        if (v < 0 || v >= net.node_count()) throw InvalidArgument("path node out of range");
        if (used[static_cast<std::size_t>(v)]) throw InvalidArgument("path repeats node " + std::to_string(v));
        used[static_cast<std::size_t>(v)] = 1;
        if (k + 1 < nodes.size()) {
            const auto id = net.find_link(v, nodes[k + 1]);
            if (!id)
                throw InvalidArgument("no link " + std::to_string(v) + "->" + std::to_string(nodes[k + 1]));
            p.links.push_back(*id);
            p.capacity = std::min(p.capacity, net.link(*id).capacity);
        }
    }
    p.nodes = std::move(nodes);
    return p;
}

}  // namespace mmpass
