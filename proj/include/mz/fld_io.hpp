#pragma once

#include <string>
#include <string_view>

#include "mz/grid.hpp"

namespace mz {

/// FLD1: "FLD1\n", one JSON header line, then little-endian f64 payload of
/// nodes * components values.
std::string encode_fld(const GridField& field);
GridField decode_fld(std::string_view bytes);

void write_fld(const std::string& path, const GridField& field);
GridField read_fld(const std::string& path);

}  // namespace mz
