#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "gv/divisor.hpp"
#include "gv/geometry.hpp"
#include "gv/git.hpp"

namespace gv::cli {

/// Doubles are written with %.17g so values round-trip exactly.
std::string format_double(double v);

/// Columns theta,phi,value on the sphere and x,y,value (physical
/// coordinates) on the torus, one row per base node.
void write_field_csv(const std::filesystem::path& path, const ScalarField& field);

/// Reads a field written by write_field_csv back onto `grid`.
ScalarField read_field_csv(const std::filesystem::path& path, const SurfaceGrid& grid);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);

nlohmann::json to_json(const GridDescriptor& d);
GridDescriptor descriptor_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Divisor& d);
nlohmann::json to_json(const Stability& s);

/// Finite doubles as numbers, non-finite as strings.
nlohmann::json number_or_string(double v);

std::uint32_t file_crc32(const std::filesystem::path& path);

/// Tracks written files and produces the run manifest.
class Manifest {
 public:
  Manifest(std::string command, nlohmann::json config, std::uint64_t seed);

  void add_file(const std::filesystem::path& root, const std::filesystem::path& relative);
  void set_status(int exit_code, const std::string& status, const std::string& message);
  void set_timing(double seconds) { seconds_ = seconds; }
  nlohmann::json& summary() { return summary_; }

  nlohmann::json to_json() const;
  void write(const std::filesystem::path& root) const;

 private:
  std::string command_;
  nlohmann::json config_;
  std::uint64_t seed_;
  nlohmann::json files_ = nlohmann::json::array();
  nlohmann::json summary_ = nlohmann::json::object();
  int exit_code_ = 0;
  std::string status_ = "ok";
  std::string message_;
  double seconds_ = 0.0;
};

}  // namespace gv::cli
