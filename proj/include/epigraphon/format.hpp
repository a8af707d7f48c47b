#pragma once

#include <string>

#include <fmt/format.h>

namespace epigraphon {

/// Locale-independent round-trip representation (17 significant digits).
inline std::string format_real(double v) { return fmt::format("{:.17g}", v); }

}  // namespace epigraphon
