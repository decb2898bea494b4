#include "growcut/io.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cstring>
#include <fstream>
#include <sstream>

namespace growcut::io {

namespace fs = std::filesystem;

std::vector<std::uint8_t> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("unreadable file: " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return bytes;
}

void write_file(const fs::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write file: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("short write: " + path.string());
}

void write_text(const fs::path& path, std::string_view text) {
  write_file(path, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

// ---------------------------------------------------------------- PGM

namespace {

class PgmReader {
public:
  explicit PgmReader(std::span<const std::uint8_t> b) : bytes_(b) {}

  int header_int() {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) throw IoError("unreadable file: bad PGM header");
    long v = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      v = v * 10 + (bytes_[pos_++] - '0');
      if (v > 1'000'000'000L) throw IoError("unreadable file: PGM header value too large");
    }
    return static_cast<int>(v);
  }

  std::size_t pos() const { return pos_; }
  void advance() { ++pos_; }

private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 2;
};

GrayImage decode_pgm(std::span<const std::uint8_t> bytes) {
  PgmReader r(bytes);
  const int w = r.header_int();
  const int h = r.header_int();
  const int maxval = r.header_int();
  if (w < 1 || h < 1) throw IoError("zero-dimension image");
  if (maxval != 255 && maxval != 65535)
    throw IoError("unsupported format: PGM maxval " + std::to_string(maxval));
  r.advance();  // single whitespace before raster
  const std::size_t n = static_cast<std::size_t>(w) * h;
  const std::size_t bpp = maxval == 255 ? 1 : 2;
  if (bytes.size() < r.pos() + n * bpp) throw IoError("unreadable file: truncated PGM raster");
  std::vector<std::uint8_t> px(n);
  const auto* raster = bytes.data() + r.pos();
  if (bpp == 1) {
    std::copy_n(raster, n, px.begin());
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const unsigned v = (unsigned{raster[2 * i]} << 8) | raster[2 * i + 1];
      px[i] = static_cast<std::uint8_t>(v / 257);
    }
  }
  return GrayImage(w, h, std::move(px));
}

// ---------------------------------------------------------------- PNG

struct ReadCursor {
  std::span<const std::uint8_t> bytes;
  std::size_t pos = 0;
};

void png_read_from_span(png_structp png, png_bytep out, png_size_t len) {
  auto* cur = static_cast<ReadCursor*>(png_get_io_ptr(png));
  if (cur->pos + len > cur->bytes.size()) png_error(png, "truncated");
  std::memcpy(out, cur->bytes.data() + cur->pos, len);
  cur->pos += len;
}

void png_write_to_vector(png_structp png, png_bytep data, png_size_t len) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + len);
}

void png_flush_noop(png_structp) {}

[[noreturn]] void png_error_throw(png_structp png, png_const_charp msg) {
  auto* err = static_cast<std::string*>(png_get_error_ptr(png));
  if (err) *err = msg;
  png_longjmp(png, 1);
}

void png_warning_ignore(png_structp, png_const_charp) {}

GrayImage decode_png(std::span<const std::uint8_t> bytes) {
  std::string err;
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, &err, png_error_throw, png_warning_ignore);
  if (!png) throw IoError("libpng init failed");
  png_infop info = png_create_info_struct(png);
  ReadCursor cur{bytes, 0};
  std::vector<std::uint8_t> px;
  png_uint_32 w = 0, h = 0;
  int depth = 0, color = 0;
  volatile bool unsupported = false;
  std::vector<std::uint8_t> raw;
  std::vector<png_bytep> rows;

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("unreadable file: " + err);
  }
  png_set_read_fn(png, &cur, png_read_from_span);
  png_read_info(png, info);
  png_get_IHDR(png, info, &w, &h, &depth, &color, nullptr, nullptr, nullptr);
  if (color != PNG_COLOR_TYPE_GRAY) {
    unsupported = true;
  } else {
    if (depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (depth == 16) png_set_swap(png);  // little-endian u16 rows
    png_read_update_info(png, info);
    const std::size_t rowbytes = png_get_rowbytes(png, info);
    raw.resize(rowbytes * h);
    rows.resize(h);
    for (png_uint_32 y = 0; y < h; ++y) rows[y] = raw.data() + y * rowbytes;
    png_read_image(png, rows.data());
    px.resize(static_cast<std::size_t>(w) * h);
    for (png_uint_32 y = 0; y < h; ++y) {
      for (png_uint_32 x = 0; x < w; ++x) {
        if (depth == 16) {
          std::uint16_t v;
          std::memcpy(&v, rows[y] + 2 * x, 2);
          px[y * w + x] = static_cast<std::uint8_t>(v / 257);
        } else {
          px[y * w + x] = rows[y][x];
        }
      }
    }
  }
  png_destroy_read_struct(&png, &info, nullptr);
  if (unsupported) throw IoError("unsupported format: PNG must be single-channel grayscale");
  if (w == 0 || h == 0) throw IoError("zero-dimension image");
  return GrayImage(static_cast<int>(w), static_cast<int>(h), std::move(px));
}

std::vector<std::uint8_t> encode_png_impl(int width, int height, int color_type, int channels,
                                          std::span<const std::uint8_t> data) {
  std::string err;
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, &err, png_error_throw, png_warning_ignore);
  if (!png) throw IoError("libpng init failed");
  png_infop info = png_create_info_struct(png);
  std::vector<std::uint8_t> out;
  std::vector<png_bytep> rows(static_cast<std::size_t>(height));
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("PNG encode failed: " + err);
  }
  png_set_write_fn(png, &out, png_write_to_vector, png_flush_noop);
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8,
               color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const std::size_t stride = static_cast<std::size_t>(width) * channels;
  for (int y = 0; y < height; ++y)
    rows[static_cast<std::size_t>(y)] = const_cast<png_bytep>(data.data() + y * stride);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

constexpr std::array<std::uint8_t, 8> kPngSig{0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};

bool has_ext(const fs::path& p, std::string_view ext) {
  auto e = p.extension().string();
  std::transform(e.begin(), e.end(), e.begin(), [](unsigned char c) { return std::tolower(c); });
  return e == ext;
}

}  // namespace

GrayImage decode_image(std::span<const std::uint8_t> bytes) {
  if (bytes.size() >= kPngSig.size() && std::equal(kPngSig.begin(), kPngSig.end(), bytes.begin()))
    return decode_png(bytes);
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5') return decode_pgm(bytes);
  if (bytes.empty()) throw IoError("unreadable file: empty");
  throw IoError("unsupported format");
}

std::vector<std::uint8_t> encode_png(const GrayImage& img) {
  return encode_png_impl(img.width(), img.height(), PNG_COLOR_TYPE_GRAY, 1, img.pixels());
}

std::vector<std::uint8_t> encode_png_rgb(int width, int height, std::span<const std::uint8_t> rgb) {
  if (rgb.size() != static_cast<std::size_t>(width) * height * 3)
    throw InvalidArgument("RGB buffer size mismatch");
  return encode_png_impl(width, height, PNG_COLOR_TYPE_RGB, 3, rgb);
}

std::vector<std::uint8_t> encode_pgm(const GrayImage& img) {
  const std::string header =
      "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), img.pixels().begin(), img.pixels().end());
  return out;
}

GrayImage load_gray_image(const fs::path& path) { return decode_image(read_file(path)); }

void save_gray_image(const GrayImage& img, const fs::path& path) {
  write_file(path, has_ext(path, ".pgm") ? encode_pgm(img) : encode_png(img));
}

GrayImage mask_to_image(const BinaryMask& mask) {
  std::vector<std::uint8_t> px(mask.bits().size());
  std::transform(mask.bits().begin(), mask.bits().end(), px.begin(),
                 [](std::uint8_t b) { return static_cast<std::uint8_t>(b ? 255 : 0); });
  return GrayImage(mask.width(), mask.height(), std::move(px));
}

BinaryMask image_to_mask(const GrayImage& img) {
  std::vector<std::uint8_t> bits(img.pixels().size());
  std::transform(img.pixels().begin(), img.pixels().end(), bits.begin(),
                 [](std::uint8_t v) { return static_cast<std::uint8_t>(v >= 128); });
  return BinaryMask(img.extent(), std::move(bits));
}

BinaryMask load_mask(const fs::path& path) { return image_to_mask(load_gray_image(path)); }

void save_mask(const BinaryMask& mask, const fs::path& path) {
  save_gray_image(mask_to_image(mask), path);
}

// ---------------------------------------------------------------- seeds

namespace {

Label parse_label(std::string_view s) {
  if (s == "fg" || s == "foreground") return Label::Foreground;
  if (s == "bg" || s == "background") return Label::Background;
  throw SeedError("unknown seed label '" + std::string(s) + "'");
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

int parse_int(std::string_view s) {
  s = trim(s);
  if (s.empty()) throw SeedError("empty coordinate");
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(std::string(s), &used);
  } catch (const std::exception&) {
    throw SeedError("bad coordinate '" + std::string(s) + "'");
  }
  if (used != s.size()) throw SeedError("bad coordinate '" + std::string(s) + "'");
  return v;
}

}  // namespace

SeedSet seeds_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw SeedError("seed JSON must be an array");
  std::vector<Seed> seeds;
  seeds.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_object() || !e.contains("x") || !e.contains("y") || !e.contains("label"))
      throw SeedError("seed entries need x, y and label");
    if (!e["x"].is_number_integer() || !e["y"].is_number_integer() || !e["label"].is_string())
      throw SeedError("seed x/y must be integers and label a string");
    seeds.push_back({{e["x"].get<int>(), e["y"].get<int>()},
                     parse_label(e["label"].get<std::string>())});
  }
  return SeedSet(std::move(seeds));
}

nlohmann::json seeds_to_json(const SeedSet& seeds) {
  auto arr = nlohmann::json::array();
  for (const auto& s : seeds)
    arr.push_back({{"x", s.at.x}, {"y", s.at.y}, {"label", std::string(to_string(s.label))}});
  return arr;
}

SeedSet seeds_from_csv(std::string_view text) {
  std::vector<Seed> seeds;
  std::size_t start = 0;
  bool first = true;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = trim(text.substr(start, end - start));
    start = end + 1;
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string_view::npos) throw SeedError("CSV seed rows need x,y,label");
    auto fx = trim(line.substr(0, c1));
    if (first && fx == "x") {
      first = false;
      continue;
    }
    first = false;
    seeds.push_back({{parse_int(fx), parse_int(line.substr(c1 + 1, c2 - c1 - 1))},
                     parse_label(trim(line.substr(c2 + 1)))});
    if (end == text.size()) break;
  }
  return SeedSet(std::move(seeds));
}

std::string seeds_to_csv(const SeedSet& seeds) {
  std::ostringstream os;
  os << "x,y,label\n";
  for (const auto& s : seeds) os << s.at.x << ',' << s.at.y << ',' << to_string(s.label) << '\n';
  return os.str();
}

SeedSet load_seeds(const fs::path& path) {
  const auto bytes = read_file(path);
  std::string_view text(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  if (has_ext(path, ".csv")) return seeds_from_csv(text);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError("unreadable seed file " + path.string() + ": " + e.what());
  }
  return seeds_from_json(j);
}

void save_seeds(const SeedSet& seeds, const fs::path& path) {
  if (has_ext(path, ".csv"))
    write_text(path, seeds_to_csv(seeds));
  else
    write_text(path, seeds_to_json(seeds).dump() + "\n");
}

// ---------------------------------------------------------------- base64

namespace {
constexpr std::string_view kB64 =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
}

std::string base64_encode(std::span<const std::uint8_t> bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 2 < bytes.size(); i += 3) {
    const unsigned v = (unsigned{bytes[i]} << 16) | (unsigned{bytes[i + 1]} << 8) | bytes[i + 2];
    out += kB64[(v >> 18) & 63];
    out += kB64[(v >> 12) & 63];
    out += kB64[(v >> 6) & 63];
    out += kB64[v & 63];
  }
  if (i < bytes.size()) {
    unsigned v = unsigned{bytes[i]} << 16;
    if (i + 1 < bytes.size()) v |= unsigned{bytes[i + 1]} << 8;
    out += kB64[(v >> 18) & 63];
    out += kB64[(v >> 12) & 63];
    out += i + 1 < bytes.size() ? kB64[(v >> 6) & 63] : '=';
    out += '=';
  }
  return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
  // Accept data URLs as sent by browsers.
  if (text.starts_with("data:")) {
    const auto comma = text.find(',');
    if (comma == std::string_view::npos) throw InvalidArgument("malformed data URL");
    text.remove_prefix(comma + 1);
  }
  std::array<int, 256> rev{};
  rev.fill(-1);
  for (std::size_t i = 0; i < kB64.size(); ++i) rev[static_cast<unsigned char>(kB64[i])] = static_cast<int>(i);
  std::vector<std::uint8_t> out;
  out.reserve(text.size() * 3 / 4);
  unsigned acc = 0;
  int bits = 0;
  for (char c : text) {
    if (c == '=') break;
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    const int v = rev[static_cast<unsigned char>(c)];
    if (v < 0) throw InvalidArgument("invalid base64 character");
    acc = (acc << 6) | static_cast<unsigned>(v);
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out.push_back(static_cast<std::uint8_t>((acc >> bits) & 0xFF));
    }
  }
  return out;
}

}  // namespace growcut::io
