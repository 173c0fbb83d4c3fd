#include "metrology/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "metrology/errors.hpp"

namespace metrology {

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    char buffer[40];
    for (int precision : {15, 16, 17}) {
        std::snprintf(buffer, sizeof(buffer), "%.*g", precision, value);
        if (std::strtod(buffer, nullptr) == value) break;
    }
    return buffer;
}

void atomic_write_text(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out.flush()) throw Error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::string traces_to_csv(std::span<const RunTrace> traces) {
    std::ostringstream out;
    out << "strategy,seed,k,detuning_mhz,n_a,n_b,estimate,error\n";
    for (const RunTrace& trace : traces) {
        for (int k = 1; k <= trace.k_max(); ++k) {
            const ShotRecord& a = trace.shots[2 * (k - 1)];
            const ShotRecord& b = trace.shots[2 * (k - 1) + 1];
            out << trace.strategy.name() << ',' << trace.seed << ',' << k << ','
                << format_double(trace.detunings_used[k - 1]) << ',' << a.raw_count << ','
                << b.raw_count << ',' << format_double(trace.estimates[k - 1]) << ','
                << format_double(trace.errors[k - 1]) << '\n';
        }
    }
    return out.str();
}

void write_traces_csv(const std::filesystem::path& path, std::span<const RunTrace> traces) {
    atomic_write_text(path, traces_to_csv(traces));
}

std::string shot_log_to_csv(std::span<const ShotRecord> shots) {
    std::ostringstream out;
    out << "shot_index,detuning_mhz,atoms_present,raw_count,dark_rate\n";
    long index = 0;
    for (const ShotRecord& s : shots) {
        const double dark = static_cast<double>(s.raw_count) - s.corrected_count;
        out << index++ << ',' << format_double(s.detuning) << ',' << (s.atoms_present ? 1 : 0)
            << ',' << s.raw_count << ',' << format_double(dark) << '\n';
    }
    return out.str();
}

void write_shot_log_csv(const std::filesystem::path& path, std::span<const ShotRecord> shots) {
    atomic_write_text(path, shot_log_to_csv(shots));
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

double parse_number(const std::string& raw, long row, const char* what) {
    const std::string s = trim(raw);
    if (s.empty()) throw CsvError(row, std::string(what) + " is empty");
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || !std::isfinite(v)) {
        throw CsvError(row, std::string(what) + " '" + s + "' is not a number");
    }
    return v;
}

bool parse_bool(const std::string& raw, long row, const char* what) {
    const std::string s = trim(raw);
    if (s == "1" || s == "true") return true;
    if (s == "0" || s == "false") return false;
    throw CsvError(row, std::string(what) + " '" + s + "' is not a boolean");
}

}  // namespace

std::vector<ShotRecord> parse_shot_log_csv(const std::string& text, double default_dark) {
    std::istringstream in(text);
    std::string line;
    long row = 0;
    if (!std::getline(in, line)) throw CsvError(1, "empty shot log");
    ++row;
    const std::vector<std::string> header = split_fields(trim(line));
    const bool has_dark = header.size() == 5 && trim(header[4]) == "dark_rate";
    if (!(header.size() == 4 || has_dark) || trim(header[0]) != "shot_index" ||
        trim(header[1]) != "detuning_mhz" || trim(header[2]) != "atoms_present" ||
        trim(header[3]) != "raw_count") {
        throw CsvError(row, "expected header shot_index,detuning_mhz,atoms_present,raw_count[,dark_rate]");
    }
    std::vector<ShotRecord> shots;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        const std::vector<std::string> fields = split_fields(line);
        if (fields.size() != header.size()) {
            throw CsvError(row, "expected " + std::to_string(header.size()) + " fields, got " +
                                    std::to_string(fields.size()));
        }
        parse_number(fields[0], row, "shot_index");
        const double detuning = parse_number(fields[1], row, "detuning_mhz");
        const bool atoms = parse_bool(fields[2], row, "atoms_present");
        const double raw = parse_number(fields[3], row, "raw_count");
        if (raw < 0.0 || raw != std::floor(raw)) {
            throw CsvError(row, "raw_count must be a nonnegative integer");
        }
        const double dark = has_dark ? parse_number(fields[4], row, "dark_rate") : default_dark;
        if (dark < 0.0) throw CsvError(row, "dark_rate must be >= 0");
        shots.push_back(make_shot(detuning, atoms, static_cast<int>(raw), dark));
    }
    if (shots.empty()) throw CsvError(row, "shot log has no data rows");
    return shots;
}

std::vector<ShotRecord> read_shot_log_csv(const std::filesystem::path& path, double default_dark) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CsvError(1, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_shot_log_csv(buf.str(), default_dark);
}

std::string summaries_to_csv(std::span<const StrategySummary> rows) {
    std::ostringstream out;
    out << "strategy,m,mean_estimate,std_estimate,nsr_percent,mean_error_bar,k_min_mean,excluded\n";
    for (const StrategySummary& r : rows) {
        out << r.strategy.name() << ',' << r.m << ',' << format_double(r.mean_estimate) << ','
            << format_double(r.std_estimate) << ',' << format_double(r.nsr_percent) << ','
            << format_double(r.mean_error_bar) << ',' << format_double(r.k_min_mean) << ','
            << r.excluded << '\n';
    }
    return out.str();
}

std::string summaries_to_table(std::span<const StrategySummary> rows) {
    std::ostringstream out;
    char line[160];
    std::snprintf(line, sizeof(line), "%-20s %4s %10s %8s %8s %10s %8s %5s\n", "strategy", "m",
                  "mean", "std", "nsr%", "err_bar", "k_min", "excl");
    out << line;
    for (const StrategySummary& r : rows) {
        std::snprintf(line, sizeof(line), "%-20s %4d %10.2f %8.2f %8.3f %10.2f %8.2f %5d\n",
                      r.strategy.name().c_str(), r.m, r.mean_estimate, r.std_estimate,
                      r.nsr_percent, r.mean_error_bar, r.k_min_mean, r.excluded);
        out << line;
    }
    return out.str();
}

std::string nsr_series_to_csv(std::span<const NsrPoint> series) {
    std::ostringstream out;
    out << "strategy,k,nsr\n";
    for (const NsrPoint& p : series) {
        out << p.strategy.name() << ',' << p.k << ',' << format_double(p.nsr) << '\n';
    }
    return out.str();
}

std::string gain_curve_to_csv(std::span<const double> detunings, std::span<const double> gains) {
    std::ostringstream out;
    out << "detuning_mhz,gain\n";
    for (std::size_t i = 0; i < detunings.size(); ++i) {
        out << format_double(detunings[i]) << ',' << format_double(gains[i]) << '\n';
    }
    return out.str();
}

}  // namespace metrology
