#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>

#include "sarsim/errors.hpp"
#include "sarsim/field_io.hpp"

using namespace sarsim;

namespace {

FieldPair small_pair() {
  std::vector<Vec2> cur, wind;
  for (int k = 0; k < 2 * 3 * 2; ++k) {
    cur.push_back({0.01 * k, -0.02 * k});
    wind.push_back({3.0 + k, 1.5 - k});
  }
  return {VectorField({-100.0, 50.0}, 100.0, 200.0, 1800.0, 2, 3, 2, cur),
          VectorField({-100.0, 50.0}, 100.0, 200.0, 1800.0, 2, 3, 2, wind)};
}

// Hand-rolled little-endian writer, independent of the library encoder.
struct Bytes {
  std::vector<std::uint8_t> b;
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) b.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double d) {
    std::uint64_t v;
    std::memcpy(&v, &d, 8);
    for (int i = 0; i < 8; ++i) b.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
};

std::vector<std::uint8_t> hand_encode(const FieldPair& p) {
  Bytes out;
  for (char c : std::string("SARFIELD")) out.b.push_back(static_cast<std::uint8_t>(c));
  out.u32(1);
  out.u32(2);
  for (const VectorField* f : {&p.current, &p.wind}) {
    out.f64(f->origin().x);
    out.f64(f->origin().y);
    out.f64(f->dx());
    out.f64(f->dy());
    out.f64(f->frame_dt());
    out.u32(static_cast<std::uint32_t>(f->nt()));
    out.u32(static_cast<std::uint32_t>(f->nx()));
    out.u32(static_cast<std::uint32_t>(f->ny()));
    out.u32(0);
    for (const Vec2& v : f->frames()) {
      out.f64(v.x);
      out.f64(v.y);
    }
  }
  return out.b;
}

std::size_t parse_offset(std::span<const std::uint8_t> bytes) {
  try {
    decode_fields(bytes);
  } catch (const ParseError& e) {
    return e.offset();
  }
  FAIL("expected ParseError");
  return 0;
}

}  // namespace

TEST_SUITE("field_io") {
  TEST_CASE("encoding matches the documented byte layout") {
    const FieldPair p = small_pair();
    const auto bytes = encode_fields(p);
    CHECK(bytes == hand_encode(p));
    CHECK(bytes.size() == 16 + 2 * (56 + 16 * 12));
  }

  TEST_CASE("round trip is bit exact") {
    const FieldPair p = generate_synthetic_fields(4, {-20000, -20000}, {20000, 20000}, 7200.0);
    const FieldPair q = decode_fields(encode_fields(p));
    CHECK(q.current == p.current);
    CHECK(q.wind == p.wind);
  }

  TEST_CASE("file round trip") {
    const auto dir = std::filesystem::path(SARSIM_TEST_TMP);
    std::filesystem::create_directories(dir);
    const auto path = dir / "pair.bin";
    const FieldPair p = small_pair();
    save_fields(p, path);
    const FieldPair q = load_fields(path);
    CHECK(q.current == p.current);
    CHECK(q.wind == p.wind);
  }

  TEST_CASE("truncation reports where the data ran out") {
    const auto bytes = encode_fields(small_pair());
    for (std::size_t cut : {std::size_t{0}, std::size_t{5}, std::size_t{12}, std::size_t{40}, bytes.size() - 1}) {
      std::span<const std::uint8_t> s(bytes.data(), cut);
      CHECK_THROWS_AS(decode_fields(s), ParseError);
    }
    // Cut inside the first field's data block: offset points at the block start.
    const std::size_t data_start = 16 + 56;
    CHECK(parse_offset(std::span<const std::uint8_t>(bytes.data(), data_start + 20)) == data_start);
    try {
      decode_fields(std::span<const std::uint8_t>(bytes.data(), data_start + 20));
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("expected") != std::string::npos);
    }
  }

  TEST_CASE("bad magic, version and trailing bytes") {
    auto bytes = encode_fields(small_pair());
    auto bad = bytes;
    bad[0] = 'X';
    CHECK(parse_offset(bad) == 0);
    bad = bytes;
    bad[8] = 7;
    CHECK(parse_offset(bad) == 8);
    bad = bytes;
    bad.push_back(0);
    CHECK(parse_offset(bad) == bytes.size());
  }

  TEST_CASE("non-finite values are rejected with their offset") {
    auto bytes = encode_fields(small_pair());
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const std::size_t at = 16 + 56 + 16 * 3 + 8;  // v of the fourth node
    std::memcpy(bytes.data() + at, &nan, 8);
    CHECK(parse_offset(bytes) == at);
  }

  TEST_CASE("missing file names the path") {
    try {
      load_fields("/nonexistent/dir/fields.bin");
      FAIL("expected IoError");
    } catch (const IoError& e) {
      CHECK(std::string(e.what()).find("/nonexistent/dir/fields.bin") != std::string::npos);
    }
  }
}
