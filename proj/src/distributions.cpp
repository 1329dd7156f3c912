// Copyright 2026 The trunctail Authors.
// SPDX-License-Identifier: Apache-2.0

#include "trunctail/distributions.hpp"

#include <charconv>
#include <map>
#include <sstream>

#include "trunctail/io.hpp"
#include "trunctail/random.hpp"

namespace trunctail {

HeavyTailModel HeavyTailModel::burr(double delta, double gamma) {
  HeavyTailModel m{Family::Burr, gamma, delta};
  m.validate();
  return m;
}

HeavyTailModel HeavyTailModel::pareto(double gamma) {
  HeavyTailModel m{Family::Pareto, gamma, 1.0};
  m.validate();
  return m;
}

HeavyTailModel HeavyTailModel::frechet(double gamma) {
  HeavyTailModel m{Family::Frechet, gamma, 1.0};
  m.validate();
  return m;
}

void HeavyTailModel::validate() const {
  if (!(tail_index > 0.0) || !std::isfinite(tail_index))
    throw DomainError("tail index must be positive and finite");
  if (family == Family::Burr && (!(delta > 0.0) || !std::isfinite(delta)))
    throw DomainError("Burr delta must be positive and finite");
}

Eigen::ArrayXd sample(const HeavyTailModel& m, Eigen::Index count, std::uint64_t seed) {
  m.validate();
  if (count < 1) throw DomainError("sample: count must be at least 1");
  Engine engine(derive_seed(seed, StreamTag::kSample));
  Eigen::ArrayXd out(count);
  for (Eigen::Index i = 0; i < count; ++i) out[i] = quantile(m, uniform_open01(engine));
  return out;
}

double second_order_tau(const HeavyTailModel& m) {
  m.validate();
  switch (m.family) {
    case Family::Burr:
      return -m.tail_index / m.delta;
    case Family::Pareto:
      return -std::numeric_limits<double>::infinity();
    case Family::Frechet:
      return -1.0;
  }
  return -1.0;
}

namespace {

double parse_number(std::string_view s, std::string_view key) {
  double value = 0.0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last)
    throw InputError("model spec: bad number for '" + std::string(key) + "': '" +
                     std::string(s) + "'");
  return value;
}

}  // namespace

HeavyTailModel parse_model(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos)
    throw InputError("model spec '" + std::string(text) + "' lacks 'family:'");
  const auto family = text.substr(0, colon);
  std::map<std::string, double, std::less<>> params;
  std::string_view rest = text.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const auto item = rest.substr(0, comma);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos)
      throw InputError("model spec: expected key=value, got '" + std::string(item) + "'");
    const auto key = item.substr(0, eq);
    params[std::string(key)] = parse_number(item.substr(eq + 1), key);
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  auto get = [&](std::string_view key) {
    auto it = params.find(key);
    if (it == params.end())
      throw InputError("model spec '" + std::string(text) + "' is missing '" +
                       std::string(key) + "'");
    return it->second;
  };
  const std::size_t expected = family == "burr" ? 2 : 1;
  if (params.size() != expected)
    throw InputError("model spec '" + std::string(text) + "' has unexpected parameters");
  try {
    if (family == "burr") return HeavyTailModel::burr(get("delta"), get("gamma"));
    if (family == "pareto") return HeavyTailModel::pareto(get("gamma"));
    if (family == "frechet") return HeavyTailModel::frechet(get("gamma"));
  } catch (const DomainError& e) {
    throw InputError(std::string("model spec: ") + e.what());
  }
  throw InputError("unknown model family '" + std::string(family) + "'");
}

std::string to_string(const HeavyTailModel& m) {
  switch (m.family) {
    case Family::Burr:
      return "burr:delta=" + format_shortest(m.delta) + ",gamma=" + format_shortest(m.tail_index);
    case Family::Pareto:
      return "pareto:gamma=" + format_shortest(m.tail_index);
    case Family::Frechet:
      return "frechet:gamma=" + format_shortest(m.tail_index);
  }
  return {};
}

}  // namespace trunctail
