#pragma once

// JSON network documents:
//   { "n_relays": int, "m_beams": int,
//     "links": [ {"tx": int, "rx": int, "cap": float, "theta": float|null}, ... ] }
// A missing or null "theta" means "use the default supplied at load time".

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "mmpass/errors.hpp"
#include "mmpass/network.hpp"

namespace mmpass {

struct NetworkDocument {
    Network network;
    std::vector<std::optional<double>> theta;  // aligned with network.links()

    /// Resolves per-link thresholds, substituting default_theta where absent.
    ThresholdMap thresholds(double default_theta) const {
        std::vector<double> v(theta.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = theta[i].value_or(default_theta);
        return ThresholdMap(std::move(v));
    }

    friend bool operator==(const NetworkDocument&, const NetworkDocument&) = default;
};

namespace detail {

using nlohmann::json;

inline const json& require_field(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(where + ": missing required field \"" + key + "\"");
    return *it;
}

inline long long require_int(const json& obj, const char* key, const std::string& where) {
    const auto& v = require_field(obj, key, where);
    if (!v.is_number_integer()) throw ParseError(where + "." + key + ": expected integer");
    return v.get<long long>();
}

inline double require_number(const json& obj, const char* key, const std::string& where) {
    const auto& v = require_field(obj, key, where);
    if (!v.is_number()) throw ParseError(where + "." + key + ": expected number");
    return v.get<double>();
}

}  // namespace detail

/// Parses and validates a network document. Throws ParseError for malformed
/// JSON or missing/mistyped fields and ValidationError for model violations.
inline NetworkDocument load_network(std::string_view text) {
    using detail::json;
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ParseError(e.what());
    }
    if (!doc.is_object()) throw ParseError("document root: expected object");

    const auto n = detail::require_int(doc, "n_relays", "document");
    const auto m = detail::require_int(doc, "m_beams", "document");
    const auto& links_json = detail::require_field(doc, "links", "document");
    if (!links_json.is_array()) throw ParseError("document.links: expected array");

    std::vector<Link> links;
    std::vector<std::optional<double>> theta;
    for (std::size_t i = 0; i < links_json.size(); ++i) {
        const auto& l = links_json[i];
        const std::string where = "links[" + std::to_string(i) + "]";
        if (!l.is_object()) throw ParseError(where + ": expected object");
        Link link;
        link.tx = static_cast<NodeId>(detail::require_int(l, "tx", where));
        link.rx = static_cast<NodeId>(detail::require_int(l, "rx", where));
        link.capacity = detail::require_number(l, "cap", where);
        links.push_back(link);
        auto t = l.find("theta");
        if (t == l.end() || t->is_null()) {
            theta.emplace_back();
        } else {
            if (!t->is_number()) throw ParseError(where + ".theta: expected number or null");
            theta.emplace_back(t->get<double>());
        }
    }

    NetworkDocument out{Network(static_cast<int>(n), static_cast<int>(m), std::move(links)), std::move(theta)};
    auto errs = validate(out.network);
    for (std::size_t i = 0; i < out.theta.size(); ++i)
        if (out.theta[i] && !(*out.theta[i] >= 0.0 && *out.theta[i] <= 1.0))
            errs.push_back("links[" + std::to_string(i) + "].theta outside [0,1]");
    if (!errs.empty()) throw ValidationError(std::move(errs));
    return out;
}

inline std::string save_network(const NetworkDocument& doc, int indent = 2) {
    using detail::json;
    json links = json::array();
    const auto& net = doc.network;
    for (std::size_t i = 0; i < net.link_count(); ++i) {
        const auto& l = net.link(i);
        json entry = {{"tx", l.tx}, {"rx", l.rx}, {"cap", l.capacity}};
        if (i < doc.theta.size() && doc.theta[i]) entry["theta"] = *doc.theta[i];
        links.push_back(std::move(entry));
    }
    json out = {{"n_relays", net.n_relays()}, {"m_beams", net.m_beams()}, {"links", std::move(links)}};
    return out.dump(indent) + "\n";
}

inline std::string save_network(const Network& net, int indent = 2) {
    return save_network(NetworkDocument{net, std::vector<std::optional<double>>(net.link_count())}, indent);
}

inline std::string save_network(const Network& net, const ThresholdMap& th, int indent = 2) {
    std::vector<std::optional<double>> theta(th.values().begin(), th.values().end());
    return save_network(NetworkDocument{net, std::move(theta)}, indent);
}

}  // namespace mmpass
