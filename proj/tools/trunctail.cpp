// Copyright 2026 The trunctail Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end.  Every command turns its flags into a JSON
// parameter object and runs from that object alone, so `rerun` can replay a
// manifest through the same code path.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "trunctail/error.hpp"
#include "trunctail/io.hpp"
#include "trunctail/manifest.hpp"
#include "trunctail/montecarlo.hpp"
#include "trunctail/tail_index.hpp"
#include "trunctail/truncation_model.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace trunctail;

namespace {

enum ExitCode : int {
  kOk = 0,
  kInput = 2,
  kModelViolation = 3,
  kDegenerate = 4,
  kNumeric = 5,
};

int default_threads() {
  if (const char* env = std::getenv("TRUNCTAIL_THREADS")) {
    try {
      return std::stoi(env);
    } catch (const std::exception&) {
      throw InputError("TRUNCTAIL_THREADS must be an integer");
    }
  }
  return 0;
}

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> optional_param(const json& params, const char* key) {
  if (!params.contains(key) || params[key].is_null()) return std::nullopt;
  return params[key].get<T>();
}

std::string absolute_string(const std::string& path) { return fs::absolute(path).lexically_normal().string(); }

// Writes the manifest next to `primary` once every output is on disk.
void finish_run(const std::string& command, const json& params,
                const std::vector<std::uint64_t>& seeds, const std::vector<std::string>& inputs,
                const std::vector<std::string>& outputs, const std::string& primary) {
  RunManifest m;
  m.command = command;
  m.parameters = params;
  m.seeds = seeds;
  m.version = library_version();
  for (const auto& in : inputs) m.inputs.push_back({in, file_digest(in)});
  m.outputs = outputs;
  m.created_utc = utc_timestamp();
  write_manifest(manifest_path_for(primary), m);
}

//---------------------------------------------------------------------------//
// Commands, each driven by a parameter object
//---------------------------------------------------------------------------//

int run_sample(const json& params) {
  const auto model = TruncationModel(parse_model(params.at("truncated").get<std::string>()),
                                     parse_model(params.at("truncator").get<std::string>()));
  for (const auto& w : model.warnings()) std::cerr << "warning: " << w << '\n';
  const auto seed = params.at("seed").get<std::uint64_t>();
  const auto sample = sample_truncated(model, params.at("N").get<std::int64_t>(), seed);
  std::ostringstream csv;
  write_sample_csv(csv, sample);
  const auto output = optional_param<std::string>(params, "output");
  if (!output) {
    std::cout << csv.str();
    return kOk;
  }
  write_text_file(*output, csv.str());
  finish_run("sample", params, {seed}, {}, {*output}, *output);
  std::cerr << sample.size() << " of " << params.at("N").get<std::int64_t>()
            << " pairs observed\n";
  return kOk;
}

int run_fit(const json& params) {
  const auto input = params.at("input").get<std::string>();
  const auto sample = read_sample_csv(fs::path(input));
  const ProductLimitFit fit(sample, parse_variant(params.at("variant").get<std::string>()));
  std::ostringstream csv;
  write_fit_csv(csv, fit);
  const auto output = optional_param<std::string>(params, "output");
  if (!output) {
    std::cout << csv.str();
    return kOk;
  }
  write_text_file(*output, csv.str());
  finish_run("fit", params, {}, {input}, {*output}, *output);
  return kOk;
}

int run_estimate(const json& params) {
  const auto input = params.at("input").get<std::string>();
  const auto sample = read_sample_csv(fs::path(input));
  if (sample.size() < 3) throw InputError(input + ": need at least 3 rows");

  EstimationOptions options;
  options.variant = parse_variant(params.at("variant").get<std::string>());
  options.k = optional_param<Eigen::Index>(params, "k");
  options.k2 = optional_param<Eigen::Index>(params, "k2");
  options.theta = params.at("theta").get<double>();
  options.k_min = params.at("k_min").get<Eigen::Index>();
  options.k_max = optional_param<Eigen::Index>(params, "k_max").value_or(-1);
  options.level = params.at("level").get<double>();
  const auto est = estimate_tail_index(sample, options);

  const std::string text = to_json(est).dump(2) + "\n";
  std::cout << text;
  std::vector<std::string> outputs;
  const auto output = optional_param<std::string>(params, "output");
  if (output) {
    write_text_file(*output, text);
    outputs.push_back(*output);
  }
  if (const auto trace = optional_param<std::string>(params, "trace")) {
    const Eigen::Index k_max = options.k_max < 0 ? default_k_max(sample.size()) : options.k_max;
    const ProductLimitFit fit(sample, options.variant);
    const Eigen::Index k_from = std::min(options.k_min, k_max);
    std::ostringstream csv;
    write_trace_csv(csv, gamma1_path(fit, k_max), k_from, k_max);
    write_text_file(*trace, csv.str());
    outputs.push_back(*trace);
  }
  if (!outputs.empty()) finish_run("estimate", params, {}, {input}, outputs, outputs.front());
  for (const auto& w : est.warnings) std::cerr << "warning: " << w << '\n';
  if (est.gamma2_hat && !est.ci) return kModelViolation;
  return kOk;
}

StudyConfig study_config_from_params(const json& params) {
  return study_config_from_json(params.at("study"));
}

int run_simulate(const json& params) {
  const auto config = study_config_from_params(params);
  const int threads = params.value("threads", 0);
  const auto report = run_study(config, threads);
  std::ostringstream csv;
  write_report_csv(csv, report);
  const auto prefix = optional_param<std::string>(params, "output");
  if (!prefix) {
    std::cout << csv.str();
    return kOk;
  }
  const std::string csv_path = *prefix + ".csv";
  const std::string json_path = *prefix + ".json";
  write_text_file(csv_path, csv.str());
  json doc = to_json(report);
  doc["config"] = to_json(config);
  write_text_file(json_path, doc.dump(2) + "\n");
  finish_run("simulate", params, {config.master_seed}, {}, {csv_path, json_path}, *prefix);
  std::cout << csv.str();
  return kOk;
}

int run_limit_check(const json& params) {
  const double gamma1 = params.at("gamma1").get<double>();
  const double gamma2 = params.at("gamma2").get<double>();
  if (!(gamma1 > 0.0 && gamma2 > 0.0)) throw InputError("gamma1 and gamma2 must be positive");
  if (!(gamma1 < gamma2))
    throw ModelViolation("limit-check requires gamma1 < gamma2 (got " + format_shortest(gamma1) +
                         " >= " + format_shortest(gamma2) + ")");
  const auto seed = params.at("seed").get<std::uint64_t>();
  const auto check =
      mc_variance(gamma1, gamma2, params.at("paths").get<Eigen::Index>(),
                  params.at("m").get<Eigen::Index>(), seed, params.value("threads", 0),
                  params.at("grading").get<double>());
  const std::string text = to_json(check).dump(2) + "\n";
  std::cout << text;
  if (const auto output = optional_param<std::string>(params, "output")) {
    write_text_file(*output, text);
    finish_run("limit-check", params, {seed}, {}, {*output}, *output);
  }
  return kOk;
}

int dispatch(const std::string& command, const json& params) {
  if (command == "sample") return run_sample(params);
  if (command == "fit") return run_fit(params);
  if (command == "estimate") return run_estimate(params);
  if (command == "simulate") return run_simulate(params);
  if (command == "limit-check") return run_limit_check(params);
  throw InputError("unknown command '" + command + "'");
}

// Parameters naming files written by each command.
std::vector<std::string> output_keys(const std::string& command) {
  if (command == "estimate") return {"output", "trace"};
  return {"output"};
}

int run_rerun(const std::string& manifest_path, const std::optional<std::string>& into) {
  const auto m = read_manifest(manifest_path);
  verify_inputs(m);
  json params = m.parameters;
  if (into) {
    for (const auto& key : output_keys(m.command)) {
      if (!params.contains(key) || params[key].is_null()) continue;
      params[key] = (fs::path(*into) / fs::path(params[key].get<std::string>()).filename()).string();
    }
  }
  return dispatch(m.command, params);
}

int report_error(const std::exception& e, int code) {
  std::cerr << "error: " << e.what() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tail index estimation for randomly right-truncated heavy-tailed data"};
  app.set_version_flag("--version", library_version());
  app.require_subcommand(1);

  // sample
  json sample_params;
  std::string truncated, truncator;
  std::int64_t sample_n = 0;
  std::uint64_t sample_seed = 0;
  std::string sample_output;
  auto* sample_cmd = app.add_subcommand("sample", "Draw a truncated sample and write it as CSV");
  sample_cmd->add_option("--truncated", truncated, "Law of X, e.g. burr:delta=0.25,gamma=0.6")->required();
  sample_cmd->add_option("--truncator", truncator, "Law of Y, e.g. burr:delta=0.25,gamma=1.4")->required();
  sample_cmd->add_option("--N", sample_n, "Number of pairs drawn before truncation")->required()->check(CLI::PositiveNumber);
  sample_cmd->add_option("--seed", sample_seed, "Random seed")->required();
  sample_cmd->add_option("-o,--output", sample_output, "Output CSV (default: stdout)");

  // fit
  std::string fit_input, fit_variant = "woodroofe", fit_output;
  auto* fit_cmd = app.add_subcommand("fit", "Product-limit fit of the truncated variable");
  fit_cmd->add_option("input", fit_input, "CSV with header x,y")->required();
  fit_cmd->add_option("--variant", fit_variant, "woodroofe or lynden-bell");
  fit_cmd->add_option("-o,--output", fit_output, "Output CSV x,c_n,df (default: stdout)");

  // estimate
  std::string est_input, est_variant = "woodroofe", est_output, est_trace;
  std::optional<Eigen::Index> est_k, est_k2, est_k_max;
  double est_theta = kDefaultTheta, est_level = 0.95;
  Eigen::Index est_k_min = kDefaultKMin;
  auto* est_cmd = app.add_subcommand("estimate", "Estimate the tail index of the truncated variable");
  est_cmd->add_option("input", est_input, "CSV with header x,y")->required();
  est_cmd->add_option("--k", est_k, "Fixed number of upper order statistics");
  est_cmd->add_option("--k2", est_k2, "Fixed k for the Hill estimate on y");
  est_cmd->add_option("--variant", est_variant, "woodroofe or lynden-bell");
  est_cmd->add_option("--theta", est_theta, "Reiss-Thomas weight exponent")->check(CLI::Range(0.0, 0.5));
  est_cmd->add_option("--k-min", est_k_min, "Smallest k considered by the selection");
  est_cmd->add_option("--k-max", est_k_max, "Largest k considered by the selection");
  est_cmd->add_option("--level", est_level, "Confidence level")->check(CLI::Range(0.0, 1.0));
  est_cmd->add_option("-o,--output", est_output, "Also write the JSON estimate here");
  est_cmd->add_option("--trace", est_trace, "Write k,gamma1_hat over [k_min, k_max] here");

  // simulate
  std::string sim_config, sim_variant = "woodroofe", sim_output;
  std::vector<double> sim_p, sim_gamma1;
  std::vector<std::int64_t> sim_sizes;
  double sim_delta = 0.25, sim_theta = kDefaultTheta;
  std::int64_t sim_reps = 1000;
  Eigen::Index sim_k_min = kDefaultKMin;
  std::optional<std::uint64_t> sim_seed;
  int sim_threads = 0;
  auto* sim_cmd = app.add_subcommand("simulate", "Run the truncated Burr Monte Carlo study");
  sim_cmd->add_option("config", sim_config, "JSON study configuration");
  sim_cmd->add_option("--p", sim_p, "Observed fractions P(X <= Y)");
  sim_cmd->add_option("--gamma1", sim_gamma1, "Tail indices of X");
  sim_cmd->add_option("--N", sim_sizes, "Sample sizes before truncation");
  sim_cmd->add_option("--delta", sim_delta, "Burr shape delta");
  sim_cmd->add_option("--reps", sim_reps, "Replicates per cell");
  sim_cmd->add_option("--variant", sim_variant, "woodroofe or lynden-bell");
  sim_cmd->add_option("--theta", sim_theta, "Reiss-Thomas weight exponent");
  sim_cmd->add_option("--k-min", sim_k_min, "Smallest k considered by the selection");
  sim_cmd->add_option("--seed", sim_seed, "Master seed (required without a config file)");
  sim_cmd->add_option("--threads", sim_threads, "Worker threads (default: $TRUNCTAIL_THREADS or all cores)");
  sim_cmd->add_option("-o,--output", sim_output, "Write <prefix>.csv and <prefix>.json");

  // limit-check
  double lc_gamma1 = 0.0, lc_gamma2 = 0.0, lc_grading = kDefaultGrading;
  Eigen::Index lc_paths = 100000, lc_m = 16384;
  std::uint64_t lc_seed = 0;
  int lc_threads = 0;
  std::string lc_output;
  auto* lc_cmd = app.add_subcommand("limit-check", "Monte Carlo variance of the limit law against its closed form");
  lc_cmd->add_option("--gamma1", lc_gamma1, "Tail index of X")->required();
  lc_cmd->add_option("--gamma2", lc_gamma2, "Tail index of Y")->required();
  lc_cmd->add_option("--paths", lc_paths, "Number of Wiener paths")->check(CLI::Range(2, 1 << 30));
  lc_cmd->add_option("--m", lc_m, "Grid steps per path")->check(CLI::Range(2, 1 << 26));
  lc_cmd->add_option("--grading", lc_grading, "Grid grading exponent (1 = uniform)")->check(CLI::Range(1.0, 20.0));
  lc_cmd->add_option("--seed", lc_seed, "Random seed")->required();
  lc_cmd->add_option("--threads", lc_threads, "Worker threads (default: $TRUNCTAIL_THREADS or all cores)");
  lc_cmd->add_option("-o,--output", lc_output, "Also write the JSON result here");

  // rerun
  std::string rerun_manifest;
  std::optional<std::string> rerun_into;
  auto* rerun_cmd = app.add_subcommand("rerun", "Repeat a run recorded in a manifest");
  rerun_cmd->add_option("manifest", rerun_manifest, "Manifest JSON")->required();
  rerun_cmd->add_option("--into", rerun_into, "Write outputs into this directory instead");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  auto maybe = [](const std::string& s) { return s.empty() ? json(nullptr) : json(s); };
  try {
    if (*sample_cmd) {
      sample_params = {{"truncated", truncated}, {"truncator", truncator}, {"N", sample_n},
                       {"seed", sample_seed}, {"output", maybe(sample_output)}};
      return run_sample(sample_params);
    }
    if (*fit_cmd)
      return run_fit({{"input", absolute_string(fit_input)}, {"variant", fit_variant},
                      {"output", maybe(fit_output)}});
    if (*est_cmd)
      return run_estimate({{"input", absolute_string(est_input)},
                           {"variant", est_variant},
                           {"k", optional_json(est_k)},
                           {"k2", optional_json(est_k2)},
                           {"theta", est_theta},
                           {"k_min", est_k_min},
                           {"k_max", optional_json(est_k_max)},
                           {"level", est_level},
                           {"output", maybe(est_output)},
                           {"trace", maybe(est_trace)}});
    if (*sim_cmd) {
      json study;
      if (!sim_config.empty()) {
        study = read_json_file(sim_config);
        if (sim_seed) study["master_seed"] = *sim_seed;
      } else {
        if (sim_p.empty() || sim_gamma1.empty() || sim_sizes.empty())
          throw InputError("simulate: no cells (give a config file or --p, --gamma1 and --N)");
        if (!sim_seed) throw InputError("simulate: --seed is required");
        json cells = json::array();
        for (double p : sim_p)
          for (double g : sim_gamma1)
            cells.push_back({{"p", p}, {"gamma1", g}, {"delta", sim_delta}, {"N", sim_sizes}});
        study = {{"cells", cells},         {"replicates", sim_reps}, {"variant", sim_variant},
                 {"theta", sim_theta},     {"k_min", sim_k_min},     {"master_seed", *sim_seed}};
      }
      const int threads = sim_cmd->count("--threads") ? sim_threads : default_threads();
      return run_simulate({{"study", study}, {"threads", threads}, {"output", maybe(sim_output)}});
    }
    if (*lc_cmd) {
      const int threads = lc_cmd->count("--threads") ? lc_threads : default_threads();
      return run_limit_check({{"gamma1", lc_gamma1},
                              {"gamma2", lc_gamma2},
                              {"paths", lc_paths},
                              {"m", lc_m},
                              {"grading", lc_grading},
                              {"seed", lc_seed},
                              {"threads", threads},
                              {"output", maybe(lc_output)}});
    }
    if (*rerun_cmd) return run_rerun(rerun_manifest, rerun_into);
  } catch (const InputError& e) {
    return report_error(e, kInput);
  } catch (const DomainError& e) {
    return report_error(e, kInput);
  } catch (const ModelViolation& e) {
    return report_error(e, kModelViolation);
  } catch (const DegenerateData& e) {
    return report_error(e, kDegenerate);
  } catch (const NumericError& e) {
    return report_error(e, kNumeric);
  } catch (const json::exception& e) {
    return report_error(e, kInput);
  } catch (const fs::filesystem_error& e) {
    return report_error(e, kInput);
  }
  return kOk;
}
