#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <type_traits>

#include "nematic/errors.hpp"

namespace nematic::csv {

/// Fixed, locale-independent formatting so repeated runs are byte-identical.
inline std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

template <typename... Ts>
void row(std::ostream& os, const Ts&... fields) {
    bool first = true;
    auto put = [&](const auto& f) {
        if (!first) os << ',';
        first = false;
        if constexpr (std::is_arithmetic_v<std::decay_t<decltype(f)>>) {
            if constexpr (std::is_same_v<std::decay_t<decltype(f)>, bool>) {
                os << (f ? "true" : "false");
            } else if constexpr (std::is_integral_v<std::decay_t<decltype(f)>>) {
                os << f;
            } else {
                os << num(static_cast<double>(f));
            }
        } else {
            os << f;
        }
    };
    (put(fields), ...);
    os << '\n';
}

inline std::ofstream open(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing");
    return out;
}

} // namespace nematic::csv
