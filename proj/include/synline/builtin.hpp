#pragma once

#include <cstdlib>
#include <filesystem>
#include <string>

#include "synline/error.hpp"
#include "synline/incidence.hpp"
#include "synline/io.hpp"

namespace synline {

/// Directory holding bundled incidence files: $SYNLINE_DATA, else the
/// compiled-in default.
inline std::string data_dir() {
  if (const char* env = std::getenv("SYNLINE_DATA")) return env;
#ifdef SYNLINE_DATA_DIR
  return SYNLINE_DATA_DIR;
#else
  return "data";
#endif
}

/// Named structures: fano, pg<q>, ag<q>, desargues, triangle, hall9 (the
/// nearfield plane of order 9) and rigid25 (a rigid confined configuration).
/// Anything else is read as an incidence file path.
inline IncidenceStructure load_source(const std::string& name, const Limits& limits = {}) {
  auto number = [&](std::size_t prefix) -> std::uint64_t {
    const std::string digits = name.substr(prefix);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
      throw Error(ErrorCode::ParseError, "bad source '" + name + "'");
    return std::stoull(digits);
  };
  if (name == "fano") return build_pg(2, limits);
  if (name == "desargues") return desargues_configuration();
  if (name == "triangle") return triangle();
  if (name == "hall9") return load_incidence(data_dir() + "/hall9.inc");
  if (name == "rigid25") return load_incidence(data_dir() + "/rigid25.inc");
  if (name.rfind("pg", 0) == 0 && !std::filesystem::exists(name)) return build_pg(number(2), limits);
  if (name.rfind("ag", 0) == 0 && !std::filesystem::exists(name)) return build_ag(number(2), limits).structure;
  return load_incidence(name);
}

}  // namespace synline
