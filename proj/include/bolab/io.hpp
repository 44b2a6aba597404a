#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "bolab/experiments.hpp"
#include "bolab/solver.hpp"

namespace bolab {

using FileSet = std::vector<std::pair<std::string, std::string>>;

/// Writes `files` (name, bytes) as the complete contents of `dir`. Files go
/// to a sibling temp directory which is renamed into place; a previous `dir`
/// is moved aside first and removed afterwards, so readers see either the
/// old or the new directory, never a mix. Throws std::runtime_error on I/O failure.
void write_directory_atomic(const std::filesystem::path& dir, const FileSet& files);

/// Single-file variant: writes a sibling temp file, then renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& bytes);

/// One row per snapshot, M little-endian float64 grid samples each.
std::string samples_binary(const SolutionTrajectory& trajectory);
/// Header t,mass,momentum,hamiltonian,H^<s>... ; one row per snapshot.
std::string diagnostics_csv(const SolutionTrajectory& trajectory);
/// Grid, snapshot times, dt schedule, seed, the canonical config text and a
/// `created_utc` timestamp (the only non-reproducible field).
std::string trajectory_meta_json(const SolutionTrajectory& trajectory, const Grid& grid,
                                 const std::string& config_text, std::uint64_t seed);

/// meta.json, samples.bin, diagnostics.csv.
FileSet trajectory_files(const SolutionTrajectory& trajectory, const Grid& grid,
                         const std::string& config_text, std::uint64_t seed);
/// report.json and series.csv.
FileSet report_files(const ExperimentReport& report);

/// Drops the `created_utc` member so meta files can be compared across reruns.
std::string strip_timestamp(const std::string& meta_json);

}  // namespace bolab
