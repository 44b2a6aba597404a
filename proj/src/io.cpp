#include "bolab/io.hpp"

#include <bit>
#include <chrono>
#include <cstring>
#include <ctime>
#include <fstream>
#include <stdexcept>
#include <system_error>

#include <unistd.h>

#include <json.hpp>

#include "bolab/config.hpp"

namespace bolab {

namespace fs = std::filesystem;

namespace {

fs::path sibling(const fs::path& dir, const std::string& tag) {
  const fs::path parent = dir.parent_path().empty() ? fs::path(".") : dir.parent_path();
  return parent / ("." + dir.filename().string() + "." + tag + "." + std::to_string(::getpid()));
}

void write_file(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

void put_le64(std::string& out, double v) {
  std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
  char buf[8];
  std::memcpy(buf, &bits, 8);
  out.append(buf, 8);
}

}  // namespace

void write_directory_atomic(const fs::path& dir, const FileSet& files) {
  if (dir.empty() || dir.filename().empty()) {
    throw std::runtime_error("output directory must name a directory");
  }
  const fs::path tmp = sibling(dir, "tmp");
  const fs::path old = sibling(dir, "old");
  std::error_code ec;
  fs::remove_all(tmp, ec);
  if (!dir.parent_path().empty()) fs::create_directories(dir.parent_path());
  fs::create_directory(tmp);
  try {
    for (const auto& [name, bytes] : files) {
      if (name.find('/') != std::string::npos) throw std::runtime_error("nested file name " + name);
      write_file(tmp / name, bytes);
    }
  } catch (...) {
    fs::remove_all(tmp, ec);
    throw;
  }
  const bool had_old = fs::exists(dir);
  if (had_old) {
    fs::remove_all(old, ec);
    fs::rename(dir, old);
  }
  try {
    fs::rename(tmp, dir);
  } catch (...) {
    if (had_old) fs::rename(old, dir, ec);
    fs::remove_all(tmp, ec);
    throw;
  }
  if (had_old) fs::remove_all(old, ec);
}

void write_file_atomic(const fs::path& path, const std::string& bytes) {
  if (path.filename().empty()) throw std::runtime_error("output path must name a file");
  if (!path.parent_path().empty()) fs::create_directories(path.parent_path());
  const fs::path tmp = sibling(path, "tmp");
  try {
    write_file(tmp, bytes);
    fs::rename(tmp, path);
  } catch (...) {
    std::error_code ec;
    fs::remove(tmp, ec);
    throw;
  }
}

std::string samples_binary(const SolutionTrajectory& trajectory) {
  std::string out;
  for (const auto& f : trajectory.fields) {
    const auto samples = f.samples();
    out.reserve(out.size() + 8 * samples.size());
    for (double v : samples) put_le64(out, v);
  }
  return out;
}

std::string diagnostics_csv(const SolutionTrajectory& trajectory) {
  std::string out = "t,mass,momentum,hamiltonian";
  for (double s : trajectory.diagnostic_s) out += ",H^" + format_double(s);
  out += "\n";
  for (std::size_t i = 0; i < trajectory.times.size(); ++i) {
    const Diagnostics& d = trajectory.diagnostics[i];
    out += format_double(trajectory.times[i]) + "," + format_double(d.mass) + "," +
           format_double(d.momentum) + "," + format_double(d.hamiltonian);
    for (double v : d.sobolev) out += "," + format_double(v);
    out += "\n";
  }
  return out;
}

std::string trajectory_meta_json(const SolutionTrajectory& trajectory, const Grid& grid,
                                 const std::string& config_text, std::uint64_t seed) {
  nlohmann::ordered_json j;
  j["format"] = "bo_lab trajectory";
  j["num_points"] = grid.size();
  j["length"] = grid.length();
  j["snapshots"] = trajectory.times.size();
  j["samples_file"] = "samples.bin";
  j["samples_layout"] = "row-major, one row of num_points little-endian float64 per snapshot";
  j["times"] = trajectory.times;
  auto& sched = j["dt_schedule"] = nlohmann::ordered_json::array();
  for (const auto& c : trajectory.dt_schedule) sched.push_back({{"time", c.time}, {"dt", c.dt}});
  j["diagnostic_s"] = trajectory.diagnostic_s;
  j["seed"] = std::to_string(seed);
  j["config"] = config_text;
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm);
  j["created_utc"] = stamp;
  return j.dump(2) + "\n";
}

FileSet trajectory_files(const SolutionTrajectory& trajectory, const Grid& grid,
                         const std::string& config_text, std::uint64_t seed) {
  return {{"meta.json", trajectory_meta_json(trajectory, grid, config_text, seed)},
          {"samples.bin", samples_binary(trajectory)},
          {"diagnostics.csv", diagnostics_csv(trajectory)}};
}

FileSet report_files(const ExperimentReport& report) {
  return {{"report.json", report.to_json()}, {"series.csv", report.series_csv()}};
}

std::string strip_timestamp(const std::string& meta_json) {
  auto j = nlohmann::ordered_json::parse(meta_json);
  j.erase("created_utc");
  return j.dump(2);
}

}  // namespace bolab
