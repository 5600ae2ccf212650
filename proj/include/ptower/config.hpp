#pragma once

#include <cstdint>
#include <cstdlib>
#include <string>

#include "ptower/errors.hpp"

namespace ptower {

// Hard brute-force bounds. Exceeding one raises a capacity error, never a
// silent truncation. Each bound can be overridden through the environment
// (PTOWER_SUBGROUP_BOUND, PTOWER_ISO_BOUND, PTOWER_MAX_DEGREE,
// PTOWER_MAX_TABLE, PTOWER_MAX_ELIM).
struct Limits {
    int subgroup_order_bound = 64;        // enumerate_subgroups / sylow_subgroups
    int isomorphism_order_bound = 24;     // find_isomorphism backtracking
    int max_cohomology_degree = 5;        // highest cochain degree handled
    std::int64_t max_table_entries = 1u << 26;   // dense cochain table scalars
    std::int64_t max_elim_entries = 3u << 27;    // sparse elimination residue scalars
};

namespace detail {
inline std::int64_t env_override(const char* name, std::int64_t fallback) {
    if (const char* v = std::getenv(name)) {
        char* end = nullptr;
        long long parsed = std::strtoll(v, &end, 10);
        if (end == v || *end != '\0' || parsed <= 0)
            throw UserInputError(name, "expected a positive integer, got '" + std::string(v) + "'",
                                 "unset the variable or pass a decimal count");
        return parsed;
    }
    return fallback;
}
}  // namespace detail

inline const Limits& limits() {
    static const Limits instance = [] {
        Limits l;
        l.subgroup_order_bound = static_cast<int>(detail::env_override("PTOWER_SUBGROUP_BOUND", l.subgroup_order_bound));
        l.isomorphism_order_bound = static_cast<int>(detail::env_override("PTOWER_ISO_BOUND", l.isomorphism_order_bound));
        l.max_cohomology_degree = static_cast<int>(detail::env_override("PTOWER_MAX_DEGREE", l.max_cohomology_degree));
        l.max_table_entries = detail::env_override("PTOWER_MAX_TABLE", l.max_table_entries);
        l.max_elim_entries = detail::env_override("PTOWER_MAX_ELIM", l.max_elim_entries);
        return l;
    }();
    return instance;
}

}  // namespace ptower
