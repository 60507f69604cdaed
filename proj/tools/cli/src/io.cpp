#include "gv/cli/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include <boost/crc.hpp>

#include "gv/errors.hpp"

#ifndef GV_VERSION
#define GV_VERSION "unknown"
#endif

namespace gv::cli {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::pair<double, double> node_coordinates(const SurfaceGrid& grid, std::size_t i) {
  const QuadratureGrid& q = grid.nodes();
  if (grid.genus() == 0) return {q.first[i], q.second[i]};
  const double s = std::sqrt(grid.volume() / grid.modulus().imag());
  return {s * q.z[i].real(), s * q.z[i].imag()};
}

}  // namespace

void write_field_csv(const std::filesystem::path& path, const ScalarField& field) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  const SurfaceGrid& grid = field.grid();
  out << (grid.genus() == 0 ? "theta,phi,value\n" : "x,y,value\n");
  for (Eigen::Index i = 0; i < field.size(); ++i) {
    const auto [a, b] = node_coordinates(grid, std::size_t(i));
    out << format_double(a) << ',' << format_double(b) << ','
        << format_double(field[i]) << '\n';
  }
}

ScalarField read_field_csv(const std::filesystem::path& path, const SurfaceGrid& grid) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  std::string line;
  std::getline(in, line);
  Eigen::ArrayXd values(grid.size());
  Eigen::Index i = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (i >= values.size()) throw GridMismatch(path.string() + ": too many rows");
    const auto comma = line.rfind(',');
    values[i++] = std::stod(line.substr(comma + 1));
  }
  if (i != values.size()) throw GridMismatch(path.string() + ": too few rows");
  return ScalarField(grid, values);
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

json to_json(const GridDescriptor& d) {
  json j{{"genus", d.genus}, {"resolution", d.resolution}, {"volume", d.volume}};
  if (d.genus == 1) {
    j["modulus_re"] = d.modulus_re;
    j["modulus_im"] = d.modulus_im;
  }
  return j;
}

GridDescriptor descriptor_from_json(const json& j) {
  GridDescriptor d;
  d.genus = j.at("genus").get<int>();
  d.resolution = j.at("resolution").get<int>();
  d.volume = j.at("volume").get<double>();
  if (d.genus == 1) {
    d.modulus_re = j.at("modulus_re").get<double>();
    d.modulus_im = j.at("modulus_im").get<double>();
  } else {
    d.modulus_im = 0.0;
  }
  return d;
}

json to_json(const Divisor& d) {
  json pts = json::array(), mult = json::array();
  for (const DivisorPoint& p : d.points()) {
    if (p.at_infinity) pts.push_back("inf");
    else pts.push_back({p.z.real(), p.z.imag()});
    mult.push_back(p.multiplicity);
  }
  return {{"points", pts}, {"multiplicities", mult}, {"degree", d.degree()}};
}

json to_json(const Stability& s) {
  json j{{"class", to_string(s.cls)}};
  if (s.witness_point >= 0) {
    j["witness_point"] = s.witness_point;
    j["witness_multiplicity"] = s.witness_multiplicity;
  }
  return j;
}

json number_or_string(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

std::uint32_t file_crc32(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  boost::crc_32_type crc;
  crc.process_bytes(bytes.data(), bytes.size());
  return crc.checksum();
}

Manifest::Manifest(std::string command, json config, std::uint64_t seed)
    : command_(std::move(command)), config_(std::move(config)), seed_(seed) {}

void Manifest::add_file(const std::filesystem::path& root,
                        const std::filesystem::path& relative) {
  char hex[9];
  std::snprintf(hex, sizeof hex, "%08x", file_crc32(root / relative));
  files_.push_back({{"path", relative.generic_string()}, {"crc32", hex}});
}

void Manifest::set_status(int exit_code, const std::string& status,
                          const std::string& message) {
  exit_code_ = exit_code;
  status_ = status;
  message_ = message;
}

json Manifest::to_json() const {
  json j{{"command", command_},
         {"version", GV_VERSION},
         {"seed", seed_},
         {"config", config_},
         {"status", status_},
         {"exit_code", exit_code_},
         {"summary", summary_},
         {"files", files_},
         {"wall_seconds", seconds_}};
  if (!message_.empty()) j["message"] = message_;
  return j;
}

void Manifest::write(const std::filesystem::path& root) const {
  write_json(root / "manifest.json", to_json());
}

}  // namespace gv::cli
