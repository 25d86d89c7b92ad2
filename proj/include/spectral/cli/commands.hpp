#pragma once

#include <string>

namespace spectral::cli {

// Builds the poisoned training set and the poisoned evaluation set from the
// scenario config and writes them (plus a hash manifest) under out_dir.
void cmd_attack(const std::string& config_path, const std::string& out_dir);

// Runs the full train / score / remove / retrain pass against the attack
// artifacts under out_dir; writes report.json, report.txt and the six
// per-statistic score CSVs.
void cmd_defend(const std::string& config_path, const std::string& out_dir);

// Finite-sample sweep plus the Monte-Carlo verification suites; writes
// sweep.csv, covariance_residuals.csv and summary.txt. Returns false when a
// verification line failed its threshold.
bool cmd_verify_lemmas(const std::string& sweep_config_path, const std::string& out_dir);

// Pretty-prints an existing report.json as the table form.
void cmd_report(const std::string& report_json_path);

// FNV-1a 64-bit content hash, hex-encoded (manifest entries).
std::string fnv1a64_file(const std::string& path);

}  // namespace spectral::cli
