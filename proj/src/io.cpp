#include "frost/io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace frost {

namespace {

constexpr std::uint16_t kRunVersion = 1;
constexpr std::uint16_t kBasisVersion = 1;
constexpr int kLayoutVersion = 1;

void put_bytes(std::string& out, const void* data, std::size_t size) {
  out.append(static_cast<const char*>(data), size);
}

void put_u16(std::string& out, std::uint16_t v) {
  char b[2] = {static_cast<char>(v & 0xff), static_cast<char>(v >> 8)};
  out.append(b, 2);
}

void put_u64(std::string& out, std::uint64_t v) {
  char b[8];
  for (int k = 0; k < 8; ++k) b[k] = static_cast<char>((v >> (8 * k)) & 0xff);
  out.append(b, 8);
}

void put_f64(std::string& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  put_u64(out, bits);
}

// Sequential reader over a fully buffered file. Every take checks the
// remaining length so truncated files fail with a message instead of UB.
class Cursor {
public:
  Cursor(const std::string& data, std::string path)
      : data_(data), path_(std::move(path)) {}

  void take(void* dst, std::size_t size) {
    if (size > data_.size() - pos_)
      throw std::runtime_error(path_ + ": file is truncated");
    std::memcpy(dst, data_.data() + pos_, size);
    pos_ += size;
  }

  std::uint16_t take_u16() {
    std::uint8_t b[2];
    take(b, 2);
    return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
  }

  std::uint64_t take_u64() {
    std::uint8_t b[8];
    take(b, 8);
    std::uint64_t v = 0;
    for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(b[k]) << (8 * k);
    return v;
  }

  double take_f64() {
    std::uint64_t bits = take_u64();
    double v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
  }

  std::uint8_t take_u8() {
    std::uint8_t b;
    take(&b, 1);
    return b;
  }

  void expect_magic(const char* magic) {
    char got[8] = {};
    const std::size_t len = std::strlen(magic);
    take(got, len);
    if (std::memcmp(got, magic, len) != 0)
      throw std::runtime_error(path_ + ": bad magic, expected " + magic);
  }

  std::size_t remaining() const { return data_.size() - pos_; }
  const std::string& path() const { return path_; }

private:
  const std::string& data_;
  std::string path_;
  std::size_t pos_ = 0;
};

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error(path + ": write failed");
}

nlohmann::ordered_json sensor_to_json(const PixelSensor& s) {
  nlohmann::ordered_json j;
  j["tile"] = {s.ti, s.tj};
  j["rect"] = {s.x0, s.y0, s.x1, s.y1};
  j["cells"] = s.cells;
  j["weights"] = s.weights;
  return j;
}

PixelSensor sensor_from_json(const nlohmann::json& j) {
  PixelSensor s;
  s.ti = j.at("tile").at(0).get<int>();
  s.tj = j.at("tile").at(1).get<int>();
  s.x0 = j.at("rect").at(0).get<double>();
  s.y0 = j.at("rect").at(1).get<double>();
  s.x1 = j.at("rect").at(2).get<double>();
  s.y1 = j.at("rect").at(3).get<double>();
  s.cells = j.at("cells").get<std::vector<int>>();
  s.weights = j.at("weights").get<std::vector<double>>();
  return s;
}

}  // namespace

std::string to_hex(const Hash256& h) {
  static const char* digits = "0123456789abcdef";
  std::string out(64, '0');
  for (int i = 0; i < 32; ++i) {
    out[2 * i] = digits[h[i] >> 4];
    out[2 * i + 1] = digits[h[i] & 0xf];
  }
  return out;
}

Hash256 from_hex(const std::string& s) {
  if (s.size() != 64) throw std::runtime_error("hash string must be 64 hex digits");
  auto nibble = [&](char c) -> std::uint8_t {
    if (c >= '0' && c <= '9') return static_cast<std::uint8_t>(c - '0');
    if (c >= 'a' && c <= 'f') return static_cast<std::uint8_t>(c - 'a' + 10);
    if (c >= 'A' && c <= 'F') return static_cast<std::uint8_t>(c - 'A' + 10);
    throw std::runtime_error("hash string has a non-hex character");
  };
  Hash256 h{};
  for (int i = 0; i < 32; ++i)
    h[i] = static_cast<std::uint8_t>((nibble(s[2 * i]) << 4) | nibble(s[2 * i + 1]));
  return h;
}

void write_run(const std::string& path, const StoredRun& run) {
  const std::size_t n = run.snapshots.empty() ? 0 : run.snapshots[0].temperature.size();
  for (const auto& snap : run.snapshots)
    if (snap.temperature.size() != n)
      throw std::runtime_error("snapshots disagree on state length");

  std::string out;
  out.reserve(55 + run.snapshots.size() * (5 + n) * 8);
  put_bytes(out, "FRST1", 5);
  put_u16(out, kRunVersion);
  put_u64(out, n);
  put_u64(out, run.snapshots.size());
  put_bytes(out, run.grid_digest.data(), run.grid_digest.size());
  for (const auto& snap : run.snapshots) {
    put_f64(out, snap.time);
    put_f64(out, run.params.u_in);
    put_f64(out, run.params.t_cold);
    put_f64(out, run.params.t_ext);
    put_f64(out, run.params.h_ext);
    for (double v : snap.temperature) put_f64(out, v);
  }
  write_file(path, out);
}

StoredRun read_run(const std::string& path) {
  const std::string data = read_text_file(path);
  Cursor in(data, path);
  in.expect_magic("FRST1");
  if (in.take_u16() != kRunVersion)
    throw std::runtime_error(path + ": unsupported snapshot format version");
  const std::uint64_t n = in.take_u64();
  const std::uint64_t count = in.take_u64();

  StoredRun run;
  in.take(run.grid_digest.data(), run.grid_digest.size());
  if (in.remaining() != count * (5 + n) * 8)
    throw std::runtime_error(path + ": payload size does not match the header");

  run.snapshots.resize(count);
  for (std::uint64_t k = 0; k < count; ++k) {
    Snapshot& snap = run.snapshots[k];
    snap.time = in.take_f64();
    ParameterSample p;
    p.u_in = in.take_f64();
    p.t_cold = in.take_f64();
    p.t_ext = in.take_f64();
    p.h_ext = in.take_f64();
    if (k == 0)
      run.params = p;
    else if (p.u_in != run.params.u_in || p.t_cold != run.params.t_cold ||
             p.t_ext != run.params.t_ext || p.h_ext != run.params.h_ext)
      throw std::runtime_error(path + ": snapshot records disagree on parameters");
    snap.temperature.resize(n);
    for (std::uint64_t i = 0; i < n; ++i) snap.temperature[i] = in.take_f64();
  }
  return run;
}

void write_basis(const std::string& path, const PodBasis& basis) {
  if (basis.mean_subtracted && basis.mean.size() != static_cast<std::size_t>(basis.rows))
    throw std::runtime_error("basis mean length does not match the state length");
  if (basis.phi.size() != static_cast<std::size_t>(basis.rows) * basis.n_max)
    throw std::runtime_error("basis matrix size does not match rows * n_max");

  std::string out;
  out.reserve(70 + (basis.mean.size() + basis.sigma.size() + basis.phi.size()) * 8);
  put_bytes(out, "FROM1", 5);
  put_u16(out, kBasisVersion);
  put_u64(out, static_cast<std::uint64_t>(basis.rows));
  put_u64(out, static_cast<std::uint64_t>(basis.n_max));
  put_u64(out, basis.sigma.size());
  put_bytes(out, basis.grid_digest.data(), basis.grid_digest.size());
  out.push_back(basis.mean_subtracted ? '\x01' : '\x00');
  put_f64(out, basis.total_energy_sq);
  if (basis.mean_subtracted)
    for (double v : basis.mean) put_f64(out, v);
  for (double v : basis.sigma) put_f64(out, v);
  for (double v : basis.phi) put_f64(out, v);
  write_file(path, out);
}

PodBasis read_basis(const std::string& path) {
  const std::string data = read_text_file(path);
  Cursor in(data, path);
  in.expect_magic("FROM1");
  if (in.take_u16() != kBasisVersion)
    throw std::runtime_error(path + ": unsupported basis format version");

  PodBasis basis;
  basis.rows = static_cast<int>(in.take_u64());
  basis.n_max = static_cast<int>(in.take_u64());
  const std::uint64_t sigma_count = in.take_u64();
  in.take(basis.grid_digest.data(), basis.grid_digest.size());
  const std::uint8_t mean_flag = in.take_u8();
  if (mean_flag > 1)
    throw std::runtime_error(path + ": bad mean flag");
  basis.mean_subtracted = mean_flag == 1;
  basis.total_energy_sq = in.take_f64();

  const std::uint64_t rows = static_cast<std::uint64_t>(basis.rows);
  const std::uint64_t expect =
      ((basis.mean_subtracted ? rows : 0) + sigma_count + rows * basis.n_max) * 8;
  if (in.remaining() != expect)
    throw std::runtime_error(path + ": payload size does not match the header");

  if (basis.mean_subtracted) {
    basis.mean.resize(rows);
    for (auto& v : basis.mean) v = in.take_f64();
  }
  basis.sigma.resize(sigma_count);
  for (auto& v : basis.sigma) v = in.take_f64();
  basis.phi.resize(rows * basis.n_max);
  for (auto& v : basis.phi) v = in.take_f64();
  return basis;
}

void write_sensor_layout(const std::string& path, const SensorLayout& layout) {
  nlohmann::ordered_json j;
  j["format"] = "frost-sensor-layout";
  j["version"] = kLayoutVersion;
  j["grid_hash"] = to_hex(layout.grid_digest);
  j["config_hash"] = to_hex(layout.config_digest);
  j["mode"] = layout.mode == SensorMode::UnitNorm ? "unit_norm" : "average";
  j["pixel_size"] = layout.pixel_size;
  j["sensors"] = nlohmann::ordered_json::array();
  for (const auto& s : layout.sensors) j["sensors"].push_back(sensor_to_json(s));
  if (!layout.objectives.empty()) j["objectives"] = layout.objectives;
  write_text_file(path, j.dump(2) + "\n");
}

SensorLayout read_sensor_layout(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(path + ": not valid JSON: " + e.what());
  }
  if (j.value("format", "") != "frost-sensor-layout")
    throw std::runtime_error(path + ": not a sensor layout file");
  if (j.value("version", 0) != kLayoutVersion)
    throw std::runtime_error(path + ": unsupported sensor layout version");

  SensorLayout layout;
  layout.grid_digest = from_hex(j.at("grid_hash").get<std::string>());
  layout.config_digest = from_hex(j.at("config_hash").get<std::string>());
  const std::string mode = j.at("mode").get<std::string>();
  if (mode == "unit_norm")
    layout.mode = SensorMode::UnitNorm;
  else if (mode == "average")
    layout.mode = SensorMode::Average;
  else
    throw std::runtime_error(path + ": unknown sensor mode " + mode);
  layout.pixel_size = j.at("pixel_size").get<double>();
  for (const auto& js : j.at("sensors")) layout.sensors.push_back(sensor_from_json(js));
  if (j.contains("objectives"))
    layout.objectives = j.at("objectives").get<std::vector<double>>();
  return layout;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ostringstream out;
  out.precision(17);
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out << ',';
    out << header[i];
  }
  out << '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw std::runtime_error("csv row length does not match the header");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << row[i];
    }
    out << '\n';
  }
  write_text_file(path, out.str());
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (!in) throw std::runtime_error(path + ": read failed");
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& contents) {
  write_file(path, contents);
}

}  // namespace frost
