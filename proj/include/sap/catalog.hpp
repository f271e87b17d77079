#pragma once

// Built-in code catalog. Entries are embedded as alist text generated by
// tools/gen_catalog.py and parsed once on first use.

#include <map>
#include <string>
#include <vector>

#include "alist.hpp"
#include "catalog_data.hpp"
#include "gf2.hpp"

namespace sap {

inline int catalog_version() { return catalog_data::kVersion; }

inline std::vector<std::string> catalog_names() {
    std::vector<std::string> names;
    names.reserve(catalog_data::kEntries.size());
    for (const auto& e : catalog_data::kEntries) names.emplace_back(e.name);
    return names;
}

inline const LinearCode& catalog_get(const std::string& name) {
    static const std::map<std::string, LinearCode> table = [] {
        std::map<std::string, LinearCode> t;
        for (const auto& e : catalog_data::kEntries) {
            t.emplace(std::string(e.name),
                      LinearCode(std::string(e.name), family_from_name(std::string(e.family)),
                                 parse_alist(std::string(e.alist))));
        }
        return t;
    }();
    auto it = table.find(name);
    if (it == table.end()) {
        std::string msg = "unknown catalog code '" + name + "'; available:";
        for (const auto& [key, _] : table) msg += " " + key;
        throw std::invalid_argument(msg);
    }
    return it->second;
}

}  // namespace sap
