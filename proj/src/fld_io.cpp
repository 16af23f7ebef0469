#include "mz/fld_io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mz/errors.hpp"

namespace mz {

namespace {

constexpr std::string_view kMagic = "FLD1\n";
constexpr const char* kLayout = "row-major-node,component-fastest";

std::uint64_t to_le(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  std::uint64_t r = 0;
  for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
  return r;
}

}  // namespace

std::string encode_fld(const GridField& field) {
  field.grid.validate();
  if (field.data.size() != field.grid.nodes() * static_cast<std::size_t>(field.components))
    throw InvalidArgument("field data length does not match grid and components");
  nlohmann::ordered_json h;
  h["dim"] = field.grid.dim;
  h["shape"] = field.grid.shape;
  h["components"] = field.components;
  h["spacing"] = field.grid.spacing;
  h["origin"] = field.grid.origin;
  h["boundary"] = boundary_name(field.grid.boundary);
  h["dtype"] = "f64le";
  h["layout"] = kLayout;
  std::string out(kMagic);
  out += h.dump();
  out += '\n';
  const std::size_t header = out.size();
  out.resize(header + field.data.size() * 8);
  char* dst = out.data() + header;
  for (double v : field.data) {
    if (!std::isfinite(v)) throw InvalidArgument("field contains non-finite values");
    const std::uint64_t bits = to_le(std::bit_cast<std::uint64_t>(v));
    std::memcpy(dst, &bits, 8);
    dst += 8;
  }
  return out;
}

GridField decode_fld(std::string_view bytes) {
  if (bytes.substr(0, kMagic.size()) != kMagic) throw FormatError("FLD1 magic mismatch");
  const auto eol = bytes.find('\n', kMagic.size());
  if (eol == std::string_view::npos) throw FormatError("FLD1 header line is not terminated");
  nlohmann::json h;
  try {
    h = nlohmann::json::parse(bytes.substr(kMagic.size(), eol - kMagic.size()));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("FLD1 header is not valid JSON: ") + e.what());
  }
  Grid g;
  int m = 0;
  try {
    if (h.at("dtype").get<std::string>() != "f64le") throw FormatError("FLD1 dtype must be f64le");
    if (h.at("layout").get<std::string>() != kLayout) throw FormatError("FLD1 layout not supported");
    g.dim = h.at("dim").get<int>();
    g.shape = h.at("shape").get<std::vector<int>>();
    g.spacing = h.at("spacing").get<double>();
    g.origin = h.at("origin").get<std::vector<double>>();
    g.boundary = boundary_from_name(h.at("boundary").get<std::string>());
    m = h.at("components").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("FLD1 header field missing or mistyped: ") + e.what());
  }
  try {
    g.validate();
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("FLD1 grid invalid: ") + e.what());
  }
  if (m < 1) throw FormatError("FLD1 components must be positive");
  GridField f;
  f.grid = g;
  f.components = m;
  const std::size_t count = g.nodes() * static_cast<std::size_t>(m);
  const std::string_view payload = bytes.substr(eol + 1);
  if (payload.size() != count * 8)
    throw FormatError("FLD1 payload length " + std::to_string(payload.size()) + " bytes, expected " +
                      std::to_string(count * 8));
  f.data.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t bits;
    std::memcpy(&bits, payload.data() + 8 * i, 8);
    const double v = std::bit_cast<double>(to_le(bits));
    if (!std::isfinite(v)) throw FormatError("FLD1 payload contains a non-finite value");
    f.data[i] = v;
  }
  return f;
}

void write_fld(const std::string& path, const GridField& field) {
  const std::string bytes = encode_fld(field);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write to '" + path + "' failed");
}

GridField read_fld(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open field file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return decode_fld(ss.str());
}

}  // namespace mz
