#pragma once

#include "semantics.hpp"

#include <yaml-cpp/yaml.h>

#include <istream>
#include <sstream>
#include <string>

namespace ipuc {

namespace detail {

inline int world_ref(const finite_model& m, const YAML::Node& n) {
    if (!n.IsScalar()) throw format_error("expected a world name");
    int i = m.world_index(n.Scalar());
    if (i < 0) throw format_error("unknown world " + n.Scalar());
    return i;
}

inline world_set world_list(const finite_model& m, const YAML::Node& n) {
    if (!n.IsSequence()) throw format_error("expected a list of worlds");
    world_set s = 0;
    for (const auto& e : n) s |= singleton(world_ref(m, e));
    return s;
}

inline std::string list_text(const finite_model& m, world_set s) {
    std::string out = "[";
    bool first = true;
    for (int w = 0; w < m.size(); ++w) {
        if (!member(s, w)) continue;
        if (!first) out += ',';
        out += m.worlds[static_cast<std::size_t>(w)];
        first = false;
    }
    return out + "]";
}

} // namespace detail

/// Reads the model file format. Structural problems throw format_error; semantic
/// admissibility is left to validate_model.
inline finite_model read_model(const std::string& text) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw format_error(std::string("model file: ") + e.what());
    }
    if (!root.IsMap()) throw format_error("model file: expected a mapping");
    for (const char* key : {"worlds", "actual", "access", "spheres"})
        if (!root[key]) throw format_error(std::string("model file: missing field ") + key);

    finite_model m;
    try {
        if (!root["worlds"].IsSequence()) throw format_error("worlds: expected a list");
        for (const auto& w : root["worlds"]) {
            std::string name = w.as<std::string>();
            if (m.world_index(name) >= 0) throw format_error("duplicate world " + name);
            m.worlds.push_back(name);
        }
        if (m.worlds.empty() || m.worlds.size() > 64) throw format_error("worlds: between 1 and 64 worlds required");
        const auto n = m.worlds.size();
        m.actual = detail::world_ref(m, root["actual"]);
        m.access.assign(n, 0);
        m.spheres.assign(n, {});
        if (!root["access"].IsSequence()) throw format_error("access: expected a list of pairs");
        for (const auto& pair : root["access"]) {
            if (!pair.IsSequence() || pair.size() != 2) throw format_error("access: expected pairs");
            m.access[static_cast<std::size_t>(detail::world_ref(m, pair[0]))] |=
                singleton(detail::world_ref(m, pair[1]));
        }
        const auto& sph = root["spheres"];
        if (!sph.IsMap()) throw format_error("spheres: expected a mapping");
        for (const auto& kv : sph) {
            int w = detail::world_ref(m, kv.first);
            if (!kv.second.IsSequence()) throw format_error("spheres: expected a list of neighbourhoods");
            for (const auto& nb : kv.second) m.spheres[static_cast<std::size_t>(w)].push_back(detail::world_list(m, nb));
        }
        if (root["val"]) {
            if (!root["val"].IsMap()) throw format_error("val: expected a mapping");
            for (const auto& kv : root["val"]) m.val[kv.first.as<std::string>()] = detail::world_list(m, kv.second);
        }
    } catch (const YAML::Exception& e) {
        throw format_error(std::string("model file: ") + e.what());
    }
    return m;
}

inline finite_model read_model(std::istream& in) {
    std::ostringstream ss;
    ss << in.rdbuf();
    return read_model(ss.str());
}

inline std::string write_model(const finite_model& m) {
    std::ostringstream out;
    out << "worlds: [";
    for (std::size_t i = 0; i < m.worlds.size(); ++i) out << (i ? "," : "") << m.worlds[i];
    out << "]\nactual: " << m.worlds[static_cast<std::size_t>(m.actual)] << "\naccess: [";
    bool first = true;
    for (int u = 0; u < m.size(); ++u)
        for (int v = 0; v < m.size(); ++v)
            if (member(m.access[static_cast<std::size_t>(u)], v)) {
                out << (first ? "" : ",") << '[' << m.worlds[static_cast<std::size_t>(u)] << ','
                    << m.worlds[static_cast<std::size_t>(v)] << ']';
                first = false;
            }
    out << "]\nspheres: {";
    for (int u = 0; u < m.size(); ++u) {
        out << (u ? ", " : "") << m.worlds[static_cast<std::size_t>(u)] << ": [";
        const auto& sph = m.spheres[static_cast<std::size_t>(u)];
        for (std::size_t i = 0; i < sph.size(); ++i) out << (i ? "," : "") << detail::list_text(m, sph[i]);
        out << ']';
    }
    out << "}\nval: {";
    first = true;
    for (const auto& [p, s] : m.val) {
        out << (first ? "" : ", ") << p << ": " << detail::list_text(m, s);
        first = false;
    }
    out << "}\n";
    return out.str();
}

} // namespace ipuc
