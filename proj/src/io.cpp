#include "spi/io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "spi/errors.hpp"

namespace spi {

namespace {

// ---- PGM ----

class PgmCursor {
 public:
  explicit PgmCursor(std::string_view bytes) : bytes_(bytes) {}

  void skip_separators() {
    while (pos_ < bytes_.size()) {
      const char c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  unsigned long integer(const char* what) {
    skip_separators();
    const std::size_t start = pos_;
    unsigned long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      value = value * 10 + static_cast<unsigned long>(bytes_[pos_] - '0');
      if (value > 0xffffffUL) throw FormatError(std::string("PGM ") + what + " too large", start);
      ++pos_;
    }
    if (pos_ == start) {
      throw FormatError(pos_ >= bytes_.size() ? std::string("PGM truncated, missing ") + what
                                              : std::string("PGM expected ") + what,
                        start);
    }
    return value;
  }

  std::size_t pos() const { return pos_; }
  void advance(std::size_t k) { pos_ += k; }
  std::size_t remaining() const { return bytes_.size() - pos_; }
  unsigned char byte_at(std::size_t i) const { return static_cast<unsigned char>(bytes_[i]); }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

std::uint8_t quantize(double v) {
  const double clamped = std::isnan(v) ? 0.0 : std::min(1.0, std::max(0.0, v));
  return static_cast<std::uint8_t>(std::lround(clamped * 255.0));
}

// ---- little-endian helpers ----

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t get_le(std::string_view bytes, std::size_t offset, int width) {
  std::uint64_t v = 0;
  for (int i = width - 1; i >= 0; --i) {
    v = (v << 8) | static_cast<unsigned char>(bytes[offset + static_cast<std::size_t>(i)]);
  }
  return v;
}

std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  if (quoted) throw FormatError("unterminated quote on CSV line " + std::to_string(line_no), 0);
  fields.push_back(std::move(field));
  return fields;
}

}  // namespace

Image decode_pgm(std::string_view bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5')) {
    const std::string magic(bytes.substr(0, std::min<std::size_t>(2, bytes.size())));
    throw FormatError("unsupported PGM magic '" + magic + "' (expected P2 or P5)", 0);
  }
  const bool binary = bytes[1] == '5';
  PgmCursor cur(bytes);
  cur.advance(2);
  const std::size_t width = cur.integer("width");
  const std::size_t height = cur.integer("height");
  const std::size_t maxval_pos = cur.pos();
  const unsigned long maxval = cur.integer("maxval");
  if (maxval != 255) {
    throw FormatError("PGM maxval " + std::to_string(maxval) + " unsupported (expected 255)",
                      maxval_pos);
  }
  if (width == 0 || height == 0) throw FormatError("PGM has zero dimension", maxval_pos);

  const std::size_t count = width * height;
  std::vector<double> data(count);
  if (binary) {
    if (cur.remaining() == 0 || !std::isspace(cur.byte_at(cur.pos()))) {
      throw FormatError("PGM header must end with one whitespace byte", cur.pos());
    }
    cur.advance(1);
    if (cur.remaining() < count) {
      throw FormatError("PGM payload truncated: expected " + std::to_string(count) +
                            " bytes, found " + std::to_string(cur.remaining()),
                        cur.pos() + cur.remaining());
    }
    for (std::size_t i = 0; i < count; ++i) {
      data[i] = static_cast<double>(cur.byte_at(cur.pos() + i)) / 255.0;
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t at = cur.pos();
      const unsigned long v = cur.integer("pixel value");
      if (v > 255) throw FormatError("PGM pixel value exceeds maxval", at);
      data[i] = static_cast<double>(v) / 255.0;
    }
  }
  return Image(width, height, std::move(data));
}

std::string encode_pgm(const Image& img, PgmEncoding encoding) {
  std::string out = encoding == PgmEncoding::binary ? "P5\n" : "P2\n";
  out += std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
  if (encoding == PgmEncoding::binary) {
    for (double v : img.data()) out.push_back(static_cast<char>(quantize(v)));
  } else {
    for (std::size_t y = 0; y < img.height(); ++y) {
      for (std::size_t x = 0; x < img.width(); ++x) {
        if (x) out.push_back(' ');
        out += std::to_string(quantize(img.at(x, y)));
      }
      out.push_back('\n');
    }
  }
  return out;
}

Image read_image(const std::filesystem::path& path) { return decode_pgm(read_file(path)); }

void write_image(const Image& img, const std::filesystem::path& path, PgmEncoding encoding) {
  write_file(path, encode_pgm(img, encoding));
}

// ---- bundles ----

std::size_t BundleHeader::payload_count() const {
  return kind == BundleKind::patterns ? static_cast<std::size_t>(m) * n : m;
}

std::size_t BundleHeader::header_bytes() const {
  return kind == BundleKind::patterns ? 28 : 36;
}

std::string encode_bundle(const BundleHeader& header, std::span<const double> payload) {
  if (payload.size() != header.payload_count()) {
    throw InvalidArgument("bundle payload has " + std::to_string(payload.size()) +
                          " values, header declares " + std::to_string(header.payload_count()));
  }
  std::string out(kBundleMagic);
  put_u32(out, static_cast<std::uint32_t>(header.kind));
  put_u32(out, header.m);
  put_u32(out, header.n);
  put_u64(out, header.seed);
  if (header.kind == BundleKind::measurements) put_u64(out, std::bit_cast<std::uint64_t>(header.sigma));
  out.reserve(out.size() + 8 * payload.size());
  for (double v : payload) put_u64(out, std::bit_cast<std::uint64_t>(v));
  return out;
}

Bundle decode_bundle(std::string_view bytes) {
  if (bytes.size() < kBundleMagic.size() || bytes.substr(0, kBundleMagic.size()) != kBundleMagic) {
    throw FormatError("bundle magic mismatch (expected SPIBNDL1)", 0);
  }
  if (bytes.size() < 28) {
    throw FormatError("bundle header truncated: expected at least 28 bytes, found " +
                          std::to_string(bytes.size()),
                      bytes.size());
  }
  Bundle bundle;
  auto& h = bundle.header;
  const auto kind = static_cast<std::uint32_t>(get_le(bytes, 8, 4));
  if (kind > 1) throw FormatError("unknown bundle kind " + std::to_string(kind), 8);
  h.kind = static_cast<BundleKind>(kind);
  h.m = static_cast<std::uint32_t>(get_le(bytes, 12, 4));
  h.n = static_cast<std::uint32_t>(get_le(bytes, 16, 4));
  h.seed = get_le(bytes, 20, 8);
  const std::size_t header_bytes = h.header_bytes();
  if (bytes.size() < header_bytes) {
    throw FormatError("bundle header truncated: expected " + std::to_string(header_bytes) +
                          " bytes, found " + std::to_string(bytes.size()),
                      bytes.size());
  }
  if (h.kind == BundleKind::measurements) h.sigma = std::bit_cast<double>(get_le(bytes, 28, 8));

  const std::size_t expected = header_bytes + 8 * h.payload_count();
  if (bytes.size() != expected) {
    throw FormatError("bundle length mismatch: expected " + std::to_string(expected) +
                          " bytes, found " + std::to_string(bytes.size()),
                      std::min(bytes.size(), expected));
  }
  bundle.payload.resize(h.payload_count());
  for (std::size_t i = 0; i < bundle.payload.size(); ++i) {
    bundle.payload[i] = std::bit_cast<double>(get_le(bytes, header_bytes + 8 * i, 8));
  }
  return bundle;
}

Bundle read_bundle(const std::filesystem::path& path) { return decode_bundle(read_file(path)); }

void write_bundle(const BundleHeader& header, std::span<const double> payload,
                  const std::filesystem::path& path) {
  write_file(path, encode_bundle(header, payload));
}

void save_patterns(const PatternSet& patterns, const std::filesystem::path& path) {
  BundleHeader h;
  h.kind = BundleKind::patterns;
  h.m = static_cast<std::uint32_t>(patterns.m());
  h.n = static_cast<std::uint32_t>(patterns.n());
  h.seed = patterns.seed;
  write_bundle(h, std::span<const double>(patterns.rows.data(), h.payload_count()), path);
}

PatternSet load_patterns(const std::filesystem::path& path) {
  Bundle bundle = read_bundle(path);
  if (bundle.header.kind != BundleKind::patterns) {
    throw FormatError(path.string() + " holds measurements, not patterns", 8);
  }
  RowMatrix rows = Eigen::Map<const RowMatrix>(bundle.payload.data(), bundle.header.m,
                                               bundle.header.n);
  return PatternSet::from_rows(std::move(rows), bundle.header.seed);
}

void save_measurements(const MeasurementSet& meas, std::size_t pixel_count,
                       const std::filesystem::path& path) {
  BundleHeader h;
  h.kind = BundleKind::measurements;
  h.m = static_cast<std::uint32_t>(meas.m());
  h.n = static_cast<std::uint32_t>(pixel_count);
  h.seed = meas.noise_seed;
  h.sigma = meas.noise_sigma;
  write_bundle(h, std::span<const double>(meas.values.data(), meas.m()), path);
}

MeasurementSet load_measurements(const std::filesystem::path& path, std::size_t* pixel_count) {
  Bundle bundle = read_bundle(path);
  if (bundle.header.kind != BundleKind::measurements) {
    throw FormatError(path.string() + " holds patterns, not measurements", 8);
  }
  MeasurementSet meas;
  meas.values = Eigen::Map<const Eigen::VectorXd>(bundle.payload.data(),
                                                  static_cast<Eigen::Index>(bundle.payload.size()));
  meas.noise_sigma = bundle.header.sigma;
  meas.noise_seed = bundle.header.seed;
  if (pixel_count) *pixel_count = bundle.header.n;
  return meas;
}

// ---- CSV ----

std::string format_float(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string format_result_row(const SweepRow& row) {
  std::string out;
  out += csv_escape(row.scene) + ",";
  out += csv_escape(row.solver) + ",";
  out += format_float(row.ratio) + ",";
  out += std::to_string(row.size.width) + "x" + std::to_string(row.size.height) + ",";
  out += format_float(row.noise_level) + ",";
  out += std::to_string(row.repeat) + ",";
  out += (row.rmse ? format_float(*row.rmse) : std::string()) + ",";
  out += std::to_string(row.iterations) + ",";
  out += format_float(row.wall_time_s) + ",";
  out += std::to_string(row.seed) + ",";
  out += csv_escape(row.status);
  return out;
}

std::string format_results_csv(const SweepResults& results) {
  std::string out(kResultsHeader);
  out += "\r\n";
  for (const auto& row : results.rows) {
    out += format_result_row(row);
    out += "\r\n";
  }
  return out;
}

SweepResults parse_results_csv(std::string_view text) {
  SweepResults results;
  std::size_t line_no = 0;
  std::size_t start = 0;
  // Records never contain embedded newlines in this schema except inside
  // quoted status strings, which are handled by joining physical lines.
  std::string pending;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    if (!pending.empty()) {
      pending += '\n';
      pending += line;
    } else {
      pending = std::string(line);
    }
    if (std::count(pending.begin(), pending.end(), '"') % 2 != 0) continue;
    if (!pending.empty() && pending.back() == '\r') pending.pop_back();
    ++line_no;
    std::string record = std::move(pending);
    pending.clear();
    if (line_no == 1) {
      if (record != kResultsHeader) throw FormatError("unexpected results CSV header", 0);
      continue;
    }
    if (record.empty()) continue;
    const auto f = split_csv_line(record, line_no);
    if (f.size() != 11) {
      throw FormatError("results CSV line " + std::to_string(line_no) + " has " +
                            std::to_string(f.size()) + " fields",
                        0);
    }
    SweepRow row;
    row.scene = f[0];
    row.solver = f[1];
    row.ratio = std::stod(f[2]);
    const auto x = f[3].find('x');
    if (x == std::string::npos) throw FormatError("bad size field '" + f[3] + "'", 0);
    row.size = {std::stoul(f[3].substr(0, x)), std::stoul(f[3].substr(x + 1))};
    row.noise_level = std::stod(f[4]);
    row.repeat = std::stoul(f[5]);
    if (!f[6].empty()) row.rmse = std::stod(f[6]);
    row.iterations = std::stoul(f[7]);
    row.wall_time_s = std::stod(f[8]);
    row.seed = std::stoull(f[9]);
    row.status = f[10];
    results.rows.push_back(std::move(row));
  }
  return results;
}

void write_results_csv(const SweepResults& results, const std::filesystem::path& path) {
  if (results.rows.empty()) throw InvalidArgument("write_results_csv: no rows");
  write_file(path, format_results_csv(results));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace spi
