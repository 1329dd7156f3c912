// Copyright 2026 The trunctail Authors.
// SPDX-License-Identifier: Apache-2.0

#include "trunctail/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "trunctail/error.hpp"

namespace trunctail {

std::string format_shortest(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return {buf.data(), res.ptr};
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

double parse_double(std::string_view field) {
  field = trim(field);
  if (field == "inf" || field == "Inf" || field == "+inf" || field == "infinity")
    return std::numeric_limits<double>::infinity();
  double value = 0.0;
  const auto* end = field.data() + field.size();
  const auto res = std::from_chars(field.data(), end, value);
  if (field.empty() || res.ec != std::errc() || res.ptr != end)
    throw InputError("not a number: '" + std::string(field) + "'");
  return value;
}

//---------------------------------------------------------------------------//
// CSV
//---------------------------------------------------------------------------//

TruncatedSample read_sample_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::vector<double> xs, ys;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty()) continue;
    if (!header_seen) {
      if (text != "x,y") throw InputError("line 1: expected header 'x,y'");
      header_seen = true;
      continue;
    }
    const auto comma = text.find(',');
    if (comma == std::string_view::npos || text.find(',', comma + 1) != std::string_view::npos)
      throw InputError("line " + std::to_string(line_no) + ": expected two fields");
    try {
      xs.push_back(parse_double(text.substr(0, comma)));
      ys.push_back(parse_double(text.substr(comma + 1)));
    } catch (const InputError& e) {
      throw InputError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!header_seen) throw InputError("empty input: expected header 'x,y'");
  const auto n = static_cast<Eigen::Index>(xs.size());
  // Rows are validated by the sample; its "row i" is the data row, which is
  // line i + 1 of the file.
  return {Eigen::Map<const Eigen::ArrayXd>(xs.data(), n), Eigen::Map<const Eigen::ArrayXd>(ys.data(), n)};
}

TruncatedSample read_sample_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return read_sample_csv(in);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  } catch (const DegenerateData& e) {
    throw DegenerateData(path.string() + ": " + e.what());
  }
}

void write_sample_csv(std::ostream& out, const TruncatedSample& sample) {
  out << "x,y\n";
  for (Eigen::Index i = 0; i < sample.size(); ++i)
    out << format_shortest(sample.x()[i]) << ',' << format_shortest(sample.y()[i]) << '\n';
}

void write_fit_csv(std::ostream& out, const ProductLimitFit& fit) {
  out << "x,c_n,df\n";
  for (Eigen::Index j = 0; j < fit.n(); ++j)
    out << format_shortest(fit.atoms()[j]) << ',' << format_shortest(fit.c_n()[j]) << ','
        << format_shortest(fit.df_at_atoms()[j]) << '\n';
}

void write_trace_csv(std::ostream& out, const Eigen::ArrayXd& path, Eigen::Index k_from,
                     Eigen::Index k_to) {
  if (k_from < 1 || k_to > path.size() || k_from > k_to)
    throw DomainError("trace range outside the estimator path");
  out << "k,gamma1_hat\n";
  for (Eigen::Index k = k_from; k <= k_to; ++k)
    out << k << ',' << format_shortest(path[k - 1]) << '\n';
}

void write_report_csv(std::ostream& out, const StudyReport& report) {
  out << "p,gamma1,N,mean_n,mean_k_star,abs_bias,rmse,completed\n";
  for (const auto& r : report)
    out << format_shortest(r.p) << ',' << format_shortest(r.gamma1) << ',' << r.big_n << ','
        << format_shortest(r.mean_n) << ',' << format_shortest(r.mean_k_star) << ','
        << format_shortest(r.abs_bias) << ',' << format_shortest(r.rmse) << ',' << r.completed
        << '\n';
}

//---------------------------------------------------------------------------//
// JSON
//---------------------------------------------------------------------------//

nlohmann::json to_json(const TailIndexEstimate& e) {
  nlohmann::json j;
  j["gamma1_hat"] = e.gamma1_hat;
  j["k"] = e.k;
  j["variant"] = to_string(e.variant);
  j["n"] = e.n;
  j["gamma2_hat"] = e.gamma2_hat ? nlohmann::json(*e.gamma2_hat) : nlohmann::json(nullptr);
  j["k2"] = e.k2 ? nlohmann::json(*e.k2) : nlohmann::json(nullptr);
  j["sigma2_hat"] = e.sigma2_hat ? nlohmann::json(*e.sigma2_hat) : nlohmann::json(nullptr);
  if (e.ci)
    j["ci"] = {{"level", e.ci->level}, {"lower", e.ci->lower}, {"upper", e.ci->upper}};
  else
    j["ci"] = nullptr;
  j["warnings"] = e.warnings;
  return j;
}

nlohmann::json to_json(const VarianceCheck& c) {
  return {{"gamma1", c.gamma1},
          {"gamma2", c.gamma2},
          {"n_paths", c.n_paths},
          {"m", c.m},
          {"mean", c.mean},
          {"mc_variance", c.variance},
          {"sigma2_closed_form", c.sigma2_closed_form},
          {"relative_error", c.variance / c.sigma2_closed_form - 1.0},
          {"std_error", c.variance_std_error},
          {"mean_std_error", c.std_error}};
}

nlohmann::json to_json(const StudyReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report)
    rows.push_back({{"p", r.p},
                    {"gamma1", r.gamma1},
                    {"delta", r.delta},
                    {"N", r.big_n},
                    {"mean_n", r.mean_n},
                    {"mean_k_star", r.mean_k_star},
                    {"mean_estimate", r.mean_estimate},
                    {"abs_bias", r.abs_bias},
                    {"rmse", r.rmse},
                    {"completed", r.completed},
                    {"dropped", r.dropped}});
  return {{"rows", rows}};
}

nlohmann::json to_json(const StudyConfig& config) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : config.cells)
    cells.push_back({{"p", c.p}, {"gamma1", c.gamma1}, {"delta", c.delta}, {"N", c.sizes}});
  return {{"cells", cells},
          {"replicates", config.replicates},
          {"variant", to_string(config.variant)},
          {"theta", config.theta},
          {"k_min", config.k_min},
          {"master_seed", config.master_seed}};
}

namespace {

[[noreturn]] void schema_error(const nlohmann::json::json_pointer& at, const std::string& what) {
  const std::string where = at.empty() ? "/" : at.to_string();
  throw InputError(where + ": " + what);
}

double number_at(const nlohmann::json& doc, const nlohmann::json::json_pointer& at) {
  if (!doc.contains(at)) schema_error(at, "missing");
  const auto& v = doc.at(at);
  if (!v.is_number()) schema_error(at, "expected a number");
  return v.get<double>();
}

std::int64_t integer_at(const nlohmann::json& doc, const nlohmann::json::json_pointer& at) {
  if (!doc.contains(at)) schema_error(at, "missing");
  const auto& v = doc.at(at);
  if (!v.is_number_integer()) schema_error(at, "expected an integer");
  return v.get<std::int64_t>();
}

}  // namespace

StudyConfig study_config_from_json(const nlohmann::json& doc) {
  using ptr = nlohmann::json::json_pointer;
  if (!doc.is_object()) schema_error(ptr(), "expected an object");
  static const std::array<std::string_view, 6> known = {"cells", "replicates", "variant",
                                                        "theta", "k_min",      "master_seed"};
  for (const auto& item : doc.items())
    if (std::find(known.begin(), known.end(), item.key()) == known.end())
      schema_error(ptr("/" + item.key()), "unknown field");

  StudyConfig config;
  const ptr cells_at("/cells");
  if (!doc.contains(cells_at)) schema_error(cells_at, "missing");
  if (!doc.at(cells_at).is_array()) schema_error(cells_at, "expected an array");
  const auto& cells = doc.at(cells_at);
  if (cells.empty()) schema_error(cells_at, "empty cell list");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const ptr at = cells_at / i;
    if (!cells[i].is_object()) schema_error(at, "expected an object");
    for (const auto& item : cells[i].items())
      if (item.key() != "p" && item.key() != "gamma1" && item.key() != "delta" &&
          item.key() != "N")
        schema_error(at / item.key(), "unknown field");
    StudyCell cell;
    cell.p = number_at(doc, at / "p");
    if (!(cell.p > 0.0 && cell.p < 1.0)) schema_error(at / "p", "must lie in (0, 1)");
    cell.gamma1 = number_at(doc, at / "gamma1");
    if (!(cell.gamma1 > 0.0)) schema_error(at / "gamma1", "must be positive");
    if (doc.contains(at / "delta")) {
      cell.delta = number_at(doc, at / "delta");
      if (!(cell.delta > 0.0)) schema_error(at / "delta", "must be positive");
    }
    const ptr sizes_at = at / "N";
    if (!doc.contains(sizes_at)) schema_error(sizes_at, "missing");
    const auto& sizes = doc.at(sizes_at);
    if (sizes.is_number_integer()) {
      cell.sizes.push_back(sizes.get<std::int64_t>());
    } else if (sizes.is_array() && !sizes.empty()) {
      for (std::size_t j = 0; j < sizes.size(); ++j) cell.sizes.push_back(integer_at(doc, sizes_at / j));
    } else {
      schema_error(sizes_at, "expected an integer or a non-empty array of integers");
    }
    for (std::size_t j = 0; j < cell.sizes.size(); ++j)
      if (cell.sizes[j] < 1) schema_error(sizes.is_array() ? sizes_at / j : sizes_at, "must be positive");
    config.cells.push_back(std::move(cell));
  }

  config.replicates = integer_at(doc, ptr("/replicates"));
  if (config.replicates < 1) schema_error(ptr("/replicates"), "must be >= 1");
  const ptr seed_at("/master_seed");
  if (!doc.contains(seed_at)) schema_error(seed_at, "missing");
  if (!doc.at(seed_at).is_number_unsigned()) schema_error(seed_at, "expected a non-negative integer");
  config.master_seed = doc.at(seed_at).get<std::uint64_t>();
  if (doc.contains("variant")) {
    if (!doc["variant"].is_string()) schema_error(ptr("/variant"), "expected a string");
    try {
      config.variant = parse_variant(doc["variant"].get<std::string>());
    } catch (const std::exception& e) {
      schema_error(ptr("/variant"), e.what());
    }
  }
  if (doc.contains("theta")) {
    config.theta = number_at(doc, ptr("/theta"));
    if (!(config.theta >= 0.0 && config.theta <= 0.5)) schema_error(ptr("/theta"), "must lie in [0, 0.5]");
  }
  if (doc.contains("k_min")) {
    config.k_min = integer_at(doc, ptr("/k_min"));
    if (config.k_min < 2) schema_error(ptr("/k_min"), "must be >= 2");
  }
  return config;
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

//---------------------------------------------------------------------------//
// Files
//---------------------------------------------------------------------------//

std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[static_cast<std::size_t>(i)]);
      h *= 0x100000001b3ULL;
    }
  }
  std::array<char, 17> hex{};
  std::snprintf(hex.data(), hex.size(), "%016llx", static_cast<unsigned long long>(h));
  return hex.data();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
  if (!out) throw InputError("write failed: " + path.string());
}

}  // namespace trunctail
