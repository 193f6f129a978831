// Copyright 2026 The depthsep Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "depthsep/depth3.hpp"
#include "depthsep/errors.hpp"
#include "depthsep/instance.hpp"
#include "depthsep/network.hpp"
#include "depthsep/reduction.hpp"
#include "depthsep/threshold.hpp"
#include "depthsep/training.hpp"

namespace depthsep {

using Json = nlohmann::json;

class ParseError : public Error {
 public:
  using Error::Error;
};

// Shortest round-trip decimal form; independent of the C locale.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return {buf, res.ptr};
}

inline double parse_double(std::string_view s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ParseError("not a number: '" + std::string(s) + "'");
  return v;
}

inline std::uint64_t parse_uint(std::string_view s) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ParseError("not an unsigned integer: '" + std::string(s) + "'");
  return v;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw Error("write to '" + path + "' failed");
}

inline Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

namespace detail {

// JSON has no NaN or infinity; they are written as null.
inline Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline double number(const Json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

template <typename T>
T field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ParseError(std::string("bad field '") + key + "': " + e.what());
  }
}

inline Json vector_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

inline Eigen::VectorXd vector_from(const Json& a) {
  if (!a.is_array()) throw ParseError("expected an array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) v(static_cast<Eigen::Index>(i)) = a[i].get<double>();
  return v;
}

inline void require_finite(const DenseNetwork& net) {
  bool ok = std::isfinite(net.output().bias) && net.output().weights.allFinite();
  for (const auto& l : net.layers()) ok = ok && l.weights.allFinite() && l.bias.allFinite();
  require(ok, "network_to_json: network has non-finite parameters");
}

}  // namespace detail

// {input_dim, activation, layers: [{W, b}], output: {w, b}}
inline Json network_to_json(const DenseNetwork& net) {
  detail::require(net.activation().serializable(),
                  "network_to_json: custom activations cannot be serialized");
  detail::require_finite(net);
  Json layers = Json::array();
  for (const auto& l : net.layers()) {
    Json w = Json::array();
    for (Eigen::Index r = 0; r < l.weights.rows(); ++r) w.push_back(detail::vector_json(l.weights.row(r)));
    layers.push_back({{"W", std::move(w)}, {"b", detail::vector_json(l.bias)}});
  }
  return {{"input_dim", net.input_dim()},
          {"activation", net.activation().name()},
          {"layers", std::move(layers)},
          {"output", {{"w", detail::vector_json(net.output().weights)}, {"b", net.output().bias}}}};
}

inline DenseNetwork network_from_json(const Json& j) {
  const auto input_dim = detail::field<std::size_t>(j, "input_dim");
  const auto act = Activation::from_name(detail::field<std::string>(j, "activation"));
  const Json& layers = j.at("layers");
  if (!layers.is_array()) throw ParseError("'layers' must be an array");
  std::vector<HiddenLayer> hidden;
  std::size_t fan_in = input_dim;
  for (const auto& lj : layers) {
    const Json& w = lj.at("W");
    if (!w.is_array()) throw ParseError("'W' must be a matrix");
    HiddenLayer l{Eigen::MatrixXd(static_cast<Eigen::Index>(w.size()), static_cast<Eigen::Index>(fan_in)),
                  detail::vector_from(lj.at("b"))};
    for (std::size_t r = 0; r < w.size(); ++r) {
      const auto row = detail::vector_from(w[r]);
      detail::require_dim(static_cast<std::size_t>(row.size()) == fan_in,
                          "network_from_json: weight row has wrong length");
      l.weights.row(static_cast<Eigen::Index>(r)) = row.transpose();
    }
    fan_in = w.size();
    hidden.push_back(std::move(l));
  }
  const Json& o = j.at("output");
  OutputNeuron out{detail::vector_from(o.at("w")), detail::field<double>(o, "b")};
  return DenseNetwork(input_dim, std::move(hidden), act, std::move(out));
}

// {d, seed, packing: [[...]], matching: [...]}
inline Json instance_to_json(const InstanceSpec& spec) {
  Json pts = Json::array();
  for (const auto& p : spec.packing.points) pts.push_back(p);
  return {{"d", spec.d}, {"seed", spec.seed}, {"packing", std::move(pts)}, {"matching", spec.matching}};
}

inline InstanceSpec instance_from_json(const Json& j) {
  InstanceSpec spec;
  spec.d = detail::field<int>(j, "d");
  spec.seed = detail::field<std::uint64_t>(j, "seed");
  spec.packing.dim = 2 * spec.d;
  spec.packing.points = detail::field<std::vector<std::vector<double>>>(j, "packing");
  spec.matching = detail::field<std::vector<std::uint64_t>>(j, "matching");
  for (const auto& p : spec.packing.points)
    detail::require_dim(p.size() == static_cast<std::size_t>(spec.packing.dim), "instance_from_json: packing point has wrong length");
  validate(spec);
  return spec;
}

// Header point_0..point_{4d-1},component_index,label; one row per sample.
inline std::string samples_to_csv(int d, const std::vector<Sample>& samples) {
  std::string out;
  const int dim = 4 * d;
  for (int k = 0; k < dim; ++k) out += "point_" + std::to_string(k) + ",";
  out += "component_index,label\n";
  for (const auto& s : samples) {
    detail::require_dim(s.point.size() == static_cast<std::size_t>(dim), "samples_to_csv: point length");
    for (double v : s.point) out += format_double(v) + ",";
    out += std::to_string(s.component_index) + "," + std::to_string(s.label) + "\n";
  }
  return out;
}

namespace detail {

inline std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::vector<std::string_view> lines(std::string_view text) {
  std::vector<std::string_view> out;
  for (auto l : split(text, '\n')) {
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
    if (!l.empty()) out.push_back(l);
  }
  return out;
}

}  // namespace detail

inline std::vector<Sample> samples_from_csv(std::string_view text) {
  const auto rows = detail::lines(text);
  if (rows.empty()) throw ParseError("samples CSV: missing header");
  const auto header = detail::split(rows[0], ',');
  if (header.size() < 3 || (header.size() - 2) % 4 != 0) throw ParseError("samples CSV: bad header");
  const std::size_t dim = header.size() - 2;
  std::vector<Sample> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto cells = detail::split(rows[r], ',');
    if (cells.size() != header.size()) throw ParseError("samples CSV: row " + std::to_string(r) + " has wrong width");
    Sample s;
    for (std::size_t k = 0; k < dim; ++k) s.point.push_back(parse_double(cells[k]));
    s.component_index = static_cast<std::size_t>(parse_uint(cells[dim]));
    s.label = static_cast<int>(parse_uint(cells[dim + 1]));
    out.push_back(std::move(s));
  }
  return out;
}

inline Json lemma_to_json(const LemmaReport& r) {
  return {{"lemma", r.lemma},
          {"parameters", r.parameters},
          {"cases", r.cases},
          {"max_ratio", detail::number(r.max_ratio)},
          {"pass", r.pass}};
}

inline Json l2_to_json(const L2Result& r, int d, int D, const BitVec& x, const BitVec& y) {
  return {{"lemma", "l2"},
          {"parameters", "d=" + std::to_string(d) + ",D=" + std::to_string(D) + ",x=" + x.to_string() +
                             ",y=" + y.to_string()},
          {"norm_squared", r.norm_squared.str()},
          {"bound_squared", r.bound_squared.str()},
          {"max_ratio", detail::number(r.ratio_to_bound)},
          {"ratio_to_uniform", detail::number(r.ratio_to_uniform)},
          {"bound_armed", r.bound_armed},
          {"pass", r.within_bound}};
}

// {d, epsilon, measured_sup_error, widths, max_weights}
inline Json certificate_to_json(const Depth3Accounting& a, double measured_sup_error) {
  return {{"d", a.d},
          {"epsilon", a.epsilon},
          {"measured_sup_error", detail::number(measured_sup_error)},
          {"widths", a.widths},
          {"max_weights", a.max_weights},
          {"constant", a.constant},
          {"width_constant", a.width_constant()},
          {"weight_constant", a.weight_constant()}};
}

inline Json compilation_to_json(const NetworkCompilation& c, double delta, double certified_error) {
  return {{"delta", delta},
          {"scalar_delta", c.scalar_delta},
          {"preactivation_range", c.preactivation_range},
          {"segments", c.plan.size()},
          {"source_width", c.source_width},
          {"source_max_weight", c.source_max_weight},
          {"compiled_width", c.net.width()},
          {"compiled_max_weight", c.net.max_weight()},
          {"certified_error", detail::number(certified_error)},
          {"pass", certified_error <= delta}};
}

inline Json train_config_to_json(const TrainConfig& c) {
  Json j = {{"width", c.width},
            {"activation", c.activation},
            {"epochs", c.epochs},
            {"batch_size", c.batch_size},
            {"steps_per_epoch", c.steps_per_epoch},
            {"learning_rate", c.learning_rate},
            {"optimizer", optimizer_name(c.optimizer)},
            {"seed", c.seed}};
  j["weight_clip"] = c.weight_clip ? Json(*c.weight_clip) : Json(nullptr);
  return j;
}

// Missing keys keep the values of `base`.
inline TrainConfig train_config_from_json(const Json& j, TrainConfig base = {}) {
  if (!j.is_object()) throw ParseError("train config must be a JSON object");
  auto get = [&](const char* key, auto& slot) {
    if (j.contains(key)) slot = detail::field<std::decay_t<decltype(slot)>>(j, key);
  };
  get("width", base.width);
  get("activation", base.activation);
  get("epochs", base.epochs);
  get("batch_size", base.batch_size);
  get("steps_per_epoch", base.steps_per_epoch);
  get("learning_rate", base.learning_rate);
  get("seed", base.seed);
  if (j.contains("optimizer")) base.optimizer = optimizer_from_name(j.at("optimizer").get<std::string>());
  if (j.contains("weight_clip"))
    base.weight_clip = j.at("weight_clip").is_null() ? std::nullopt
                                                     : std::optional<double>(j.at("weight_clip").get<double>());
  return base;
}

inline Json report_row_to_json(const ReportRow& r) {
  return {{"kind", r.kind},
          {"width", r.width},
          {"final_loss", detail::number(r.final_loss)},
          {"std_error", detail::number(r.std_error)},
          {"ci_low", detail::number(r.ci_low)},
          {"ci_high", detail::number(r.ci_high)},
          {"best_train_loss", detail::number(r.best_train_loss)},
          {"diverged", r.diverged}};
}

inline ReportRow report_row_from_json(const Json& j) {
  return {detail::field<std::string>(j, "kind"),     detail::field<std::size_t>(j, "width"),
          detail::number(j.at("final_loss")),        detail::number(j.at("std_error")),
          detail::number(j.at("ci_low")),            detail::number(j.at("ci_high")),
          detail::number(j.at("best_train_loss")),   detail::field<bool>(j, "diverged")};
}

inline Json report_to_json(const ExperimentReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) rows.push_back(report_row_to_json(row));
  return {{"d", r.d},
          {"instance_seed", r.instance_seed},
          {"eval_samples", r.eval_samples},
          {"config", train_config_to_json(r.config)},
          {"rows", std::move(rows)},
          {"loss_curves", r.loss_curves}};
}

inline ExperimentReport report_from_json(const Json& j) {
  ExperimentReport r;
  r.d = detail::field<int>(j, "d");
  r.instance_seed = detail::field<std::uint64_t>(j, "instance_seed");
  r.eval_samples = detail::field<std::size_t>(j, "eval_samples");
  r.config = train_config_from_json(j.at("config"));
  for (const auto& row : j.at("rows")) r.rows.push_back(report_row_from_json(row));
  r.loss_curves = detail::field<std::vector<std::vector<double>>>(j, "loss_curves");
  return r;
}

inline constexpr const char* kReportCsvHeader =
    "kind,width,final_loss,std_error,ci_low,ci_high,best_train_loss,diverged";

inline std::string report_to_csv(const std::vector<ReportRow>& rows) {
  std::string out = std::string(kReportCsvHeader) + "\n";
  for (const auto& r : rows) {
    out += r.kind + "," + std::to_string(r.width) + "," + format_double(r.final_loss) + "," +
           format_double(r.std_error) + "," + format_double(r.ci_low) + "," + format_double(r.ci_high) +
           "," + format_double(r.best_train_loss) + "," + (r.diverged ? "1" : "0") + "\n";
  }
  return out;
}

inline std::vector<ReportRow> report_from_csv(std::string_view text) {
  const auto rows = detail::lines(text);
  if (rows.empty() || rows[0] != kReportCsvHeader) throw ParseError("report CSV: unexpected header");
  std::vector<ReportRow> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto c = detail::split(rows[i], ',');
    if (c.size() != 8) throw ParseError("report CSV: row " + std::to_string(i) + " has wrong width");
    out.push_back({std::string(c[0]), static_cast<std::size_t>(parse_uint(c[1])), parse_double(c[2]),
                   parse_double(c[3]), parse_double(c[4]), parse_double(c[5]), parse_double(c[6]),
                   parse_uint(c[7]) != 0});
  }
  return out;
}

}  // namespace depthsep
