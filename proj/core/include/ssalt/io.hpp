#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "ssalt/bayes.hpp"
#include "ssalt/fisher.hpp"
#include "ssalt/likelihood.hpp"
#include "ssalt/planner.hpp"
#include "ssalt/simulate.hpp"
#include "ssalt/types.hpp"

namespace ssalt::io {

/// Provenance stamped into every artifact.
struct RunMetadata {
  std::uint64_t seed = 0;
  std::string config;  // fully resolved configuration, one line
  std::string version = SSALT_VERSION;

  /// FNV-1a 64-bit hash of `config`, as 16 hex digits.
  std::string config_hash() const;
};

/// CSV with optional '#'-prefixed metadata lines, a `delta,t,y` header and
/// one row per item (censored rows carry t = C). Values use %.17g, so a
/// write/parse round trip is lossless.
void write_dataset(std::ostream& os, const Dataset& data,
                   const RunMetadata* meta = nullptr);
void write_dataset(const std::string& path, const Dataset& data,
                   const RunMetadata* meta = nullptr);

/// Parses rows against the given plan and validates them. An empty input
/// (no header) yields an empty dataset. Throws DomainError with the line
/// number on malformed input.
Dataset parse_dataset(std::istream& is, const StressPlan& plan);
Dataset parse_dataset(const std::string& path, const StressPlan& plan);

/// Reads the '#key=value' metadata lines of a dataset file.
std::map<std::string, std::string> read_metadata(std::istream& is);

std::string to_json(const FitResult& fit, const RunMetadata& meta);
std::string to_json(const PosteriorSummary& summary, const RunMetadata& meta);
std::string to_json(const InfoMatrix& info, const RunMetadata& meta);
std::string to_json(const McStudyReport& report, const RunMetadata& meta);
std::string to_json(const std::vector<PlanResult>& rows,
                    const RunMetadata& meta);

/// Table-2 style CSV: parameter, truth, mean, rbias, rrmse.
void write_mc_csv(std::ostream& os, const McStudyReport& report,
                  const RunMetadata* meta = nullptr);

/// Writes '#seed=..', '#config_hash=..', '#version=..' lines.
void write_metadata_lines(std::ostream& os, const RunMetadata& meta);

}  // namespace ssalt::io
