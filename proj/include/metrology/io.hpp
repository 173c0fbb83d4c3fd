#ifndef METROLOGY_IO_HPP
#define METROLOGY_IO_HPP

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "metrology/analysis.hpp"
#include "metrology/trace.hpp"

namespace metrology {

/// Shortest decimal that round-trips the double ("%.17g" fallback); NaN prints
/// as "nan".
std::string format_double(double value);

/// Write-temp-then-rename so interrupted runs leave no partial files.
void atomic_write_text(const std::filesystem::path& path, const std::string& content);

/// Trace CSV: one row per shot pair,
/// `strategy,seed,k,detuning_mhz,n_a,n_b,estimate,error`.
std::string traces_to_csv(std::span<const RunTrace> traces);
void write_traces_csv(const std::filesystem::path& path, std::span<const RunTrace> traces);

/// Shot log CSV: `shot_index,detuning_mhz,atoms_present,raw_count[,dark_rate]`.
std::string shot_log_to_csv(std::span<const ShotRecord> shots);
void write_shot_log_csv(const std::filesystem::path& path, std::span<const ShotRecord> shots);

/// Parses a shot log. A missing dark_rate column falls back to default_dark.
/// Throws CsvError carrying the offending 1-based row number.
std::vector<ShotRecord> read_shot_log_csv(const std::filesystem::path& path, double default_dark);
std::vector<ShotRecord> parse_shot_log_csv(const std::string& text, double default_dark);

std::string summaries_to_csv(std::span<const StrategySummary> rows);
/// Aligned-column text table for terminal output.
std::string summaries_to_table(std::span<const StrategySummary> rows);

std::string nsr_series_to_csv(std::span<const NsrPoint> series);

/// Gain curve CSV: `detuning_mhz,gain`.
std::string gain_curve_to_csv(std::span<const double> detunings, std::span<const double> gains);

}  // namespace metrology

#endif
