#include "sarsim/field_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string>

#include "sarsim/errors.hpp"

namespace sarsim {

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <typename T>
void put(std::vector<std::uint8_t>& out, T value) {
  std::uint8_t raw[sizeof(T)];
  std::memcpy(raw, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(std::begin(raw), std::end(raw));
  out.insert(out.end(), std::begin(raw), std::end(raw));
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t offset() const { return pos_; }

  void require(std::size_t n, const char* what) const {
    if (bytes_.size() - pos_ < n)
      throw ParseError(std::string("truncated ") + what + ": expected " + std::to_string(pos_ + n) +
                           " bytes, file has " + std::to_string(bytes_.size()),
                       pos_);
  }

  template <typename T>
  T get(const char* what) {
    require(sizeof(T), what);
    std::uint8_t raw[sizeof(T)];
    std::memcpy(raw, bytes_.data() + pos_, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(std::begin(raw), std::end(raw));
    T v;
    std::memcpy(&v, raw, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }

  double finite(const char* what) {
    const std::size_t at = pos_;
    const double v = get<double>(what);
    if (!std::isfinite(v)) throw ParseError(std::string("non-finite value in ") + what, at);
    return v;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

void encode_one(std::vector<std::uint8_t>& out, const VectorField& f) {
  put(out, f.origin().x);
  put(out, f.origin().y);
  put(out, f.dx());
  put(out, f.dy());
  put(out, f.frame_dt());
  put(out, static_cast<std::uint32_t>(f.nt()));
  put(out, static_cast<std::uint32_t>(f.nx()));
  put(out, static_cast<std::uint32_t>(f.ny()));
  put(out, std::uint32_t{0});
  for (const auto& v : f.frames()) {
    put(out, v.x);
    put(out, v.y);
  }
}

VectorField decode_one(Reader& r, const char* name) {
  const std::size_t header_at = r.offset();
  const double ox = r.finite("field header");
  const double oy = r.finite("field header");
  const double dx = r.finite("field header");
  const double dy = r.finite("field header");
  const double fdt = r.finite("field header");
  const auto nt = r.get<std::uint32_t>("field header");
  const auto nx = r.get<std::uint32_t>("field header");
  const auto ny = r.get<std::uint32_t>("field header");
  const auto reserved = r.get<std::uint32_t>("field header");
  if (reserved != 0) throw ParseError(std::string(name) + ": reserved header word must be 0", r.offset() - 4);
  if (!(dx > 0.0) || !(dy > 0.0) || !(fdt > 0.0))
    throw ParseError(std::string(name) + ": spacings must be > 0", header_at);
  if (nt == 0 || nx == 0 || ny == 0) throw ParseError(std::string(name) + ": zero dimension", header_at + 40);
  if (nt > (1u << 20) || nx > (1u << 16) || ny > (1u << 16))
    throw ParseError(std::string(name) + ": dimensions out of range", header_at + 40);

  const std::size_t count = static_cast<std::size_t>(nt) * nx * ny;
  r.require(count * 16, name);
  std::vector<Vec2> frames(count);
  for (auto& v : frames) {
    v.x = r.finite(name);
    v.y = r.finite(name);
  }
  return VectorField({ox, oy}, dx, dy, fdt, static_cast<int>(nt), static_cast<int>(nx), static_cast<int>(ny),
                     std::move(frames));
}

}  // namespace

std::vector<std::uint8_t> encode_fields(const FieldPair& fields) {
  std::vector<std::uint8_t> out;
  out.reserve(16 + 2 * 56 + 16 * (fields.current.frames().size() + fields.wind.frames().size()));
  out.resize(sizeof(kFieldMagic));
  std::memcpy(out.data(), kFieldMagic, sizeof(kFieldMagic));
  put(out, kFieldFormatVersion);
  put(out, std::uint32_t{2});
  encode_one(out, fields.current);
  encode_one(out, fields.wind);
  return out;
}

FieldPair decode_fields(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  r.require(sizeof(kFieldMagic), "header");
  if (std::memcmp(bytes.data(), kFieldMagic, sizeof(kFieldMagic)) != 0) throw ParseError("bad magic, not a field file", 0);
  for (std::size_t i = 0; i < sizeof(kFieldMagic); ++i) r.get<std::uint8_t>("header");
  const auto version = r.get<std::uint32_t>("header");
  if (version != kFieldFormatVersion)
    throw ParseError("unsupported format version " + std::to_string(version), 8);
  const auto count = r.get<std::uint32_t>("header");
  if (count != 2) throw ParseError("expected 2 fields, header says " + std::to_string(count), 12);

  FieldPair out;
  out.current = decode_one(r, "current field");
  out.wind = decode_one(r, "wind field");
  if (r.offset() != bytes.size())
    throw ParseError("dimension mismatch: " + std::to_string(bytes.size() - r.offset()) + " trailing bytes",
                     r.offset());
  return out;
}

void save_fields(const FieldPair& fields, const std::filesystem::path& path) {
  const auto bytes = encode_fields(fields);
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw IoError("write failed: " + path.string());
}

FieldPair load_fields(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  try {
    return decode_fields(bytes);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.detail(), e.offset());
  }
}

}  // namespace sarsim
