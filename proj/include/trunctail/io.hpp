// Copyright 2026 The trunctail Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef TRUNCTAIL_IO_HPP
#define TRUNCTAIL_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include <Eigen/Core>
#include <json.hpp>

#include "trunctail/limit_process.hpp"
#include "trunctail/montecarlo.hpp"
#include "trunctail/product_limit.hpp"
#include "trunctail/tail_index.hpp"
#include "trunctail/truncation_model.hpp"

namespace trunctail {

/// Shortest decimal text that parses back to the same double ("inf" for
/// +infinity).
std::string format_shortest(double value);

/// Parses a full field as a double; accepts "inf" and "Inf".  Throws
/// InputError.
double parse_double(std::string_view field);

//---------------------------------------------------------------------------//
// CSV
//---------------------------------------------------------------------------//

/// Reads a sample with header `x,y`.  Diagnostics name the 1-based line.
TruncatedSample read_sample_csv(std::istream& in);
TruncatedSample read_sample_csv(const std::filesystem::path& path);

void write_sample_csv(std::ostream& out, const TruncatedSample& sample);

/// `x,c_n,df` at each atom of the fit.
void write_fit_csv(std::ostream& out, const ProductLimitFit& fit);

/// `k,gamma1_hat` for k in [k_from, k_to]; `path` holds k = 1.. in entry k-1.
void write_trace_csv(std::ostream& out, const Eigen::ArrayXd& path, Eigen::Index k_from,
                     Eigen::Index k_to);

/// `p,gamma1,N,mean_n,mean_k_star,abs_bias,rmse,completed`.
void write_report_csv(std::ostream& out, const StudyReport& report);

//---------------------------------------------------------------------------//
// JSON
//---------------------------------------------------------------------------//

nlohmann::json to_json(const TailIndexEstimate& estimate);
nlohmann::json to_json(const VarianceCheck& check);
nlohmann::json to_json(const StudyReport& report);
nlohmann::json to_json(const StudyConfig& config);

/// Throws InputError whose message starts with the JSON pointer of the
/// offending field, e.g. "/cells/1/p: expected a number".
StudyConfig study_config_from_json(const nlohmann::json& doc);

nlohmann::json read_json_file(const std::filesystem::path& path);

//---------------------------------------------------------------------------//
// Files
//---------------------------------------------------------------------------//

/// 64-bit FNV-1a of the file contents as 16 hex digits.
std::string file_digest(const std::filesystem::path& path);

/// Writes `text` to `path`, creating parent directories.
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace trunctail

#endif  // TRUNCTAIL_IO_HPP
