/* Copyright 2026 The impedans Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "json_io.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "files.hpp"

namespace impedans::io {

std::string dump(const json& j) { return j.dump(1) + "\n"; }

json parse_json(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(fmt::format("{}: malformed JSON: {}", source, e.what()));
  }
}

json load_json(const std::filesystem::path& path) { return parse_json(read_file(path), path.string()); }

json encode(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

json encode(Complex z) { return json::array({encode(z.real()), encode(z.imag())}); }

json encode(Vec3 v) { return json::array({v.x, v.y, v.z}); }

void decode(const json& j, const std::string& path, double& out) {
  if (j.is_number()) {
    out = j.get<double>();
  } else if (j.is_null()) {
    out = std::numeric_limits<double>::quiet_NaN();
  } else if (j.is_string() && (j == "inf" || j == "+inf")) {
    out = std::numeric_limits<double>::infinity();
  } else if (j.is_string() && j == "-inf") {
    out = -std::numeric_limits<double>::infinity();
  } else {
    throw ValidationError(fmt::format("{}: expected a number, got {}", path, j.dump()));
  }
}

void decode(const json& j, const std::string& path, int& out) {
  if (!j.is_number_integer()) throw ValidationError(fmt::format("{}: expected an integer, got {}", path, j.dump()));
  const auto v = j.get<std::int64_t>();
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw ValidationError(fmt::format("{}: integer {} out of range", path, v));
  }
  out = static_cast<int>(v);
}

void decode(const json& j, const std::string& path, std::uint64_t& out) {
  if (!j.is_number_unsigned()) {
    throw ValidationError(fmt::format("{}: expected a non-negative integer, got {}", path, j.dump()));
  }
  out = j.get<std::uint64_t>();
}

void decode(const json& j, const std::string& path, bool& out) {
  if (!j.is_boolean()) throw ValidationError(fmt::format("{}: expected true or false, got {}", path, j.dump()));
  out = j.get<bool>();
}

void decode(const json& j, const std::string& path, std::string& out) {
  if (!j.is_string()) throw ValidationError(fmt::format("{}: expected a string, got {}", path, j.dump()));
  out = j.get<std::string>();
}

void decode(const json& j, const std::string& path, Complex& out) {
  if (!j.is_array() || j.size() != 2) throw ValidationError(fmt::format("{}: expected [re, im]", path));
  double re = 0.0, im = 0.0;
  decode(j[0], path + "/0", re);
  decode(j[1], path + "/1", im);
  out = {re, im};
}

void decode(const json& j, const std::string& path, Vec3& out) {
  if (!j.is_array() || j.size() != 3) throw ValidationError(fmt::format("{}: expected [x, y, z]", path));
  for (int a = 0; a < 3; ++a) {
    if (!j[a].is_number()) throw ValidationError(fmt::format("{}/{}: expected a number", path, a));
    out[a] = j[a].get<double>();
  }
}

Reader::Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
  if (!j_.is_object()) throw ValidationError(fmt::format("{}: expected an object", path_.empty() ? "/" : path_));
}

const json& Reader::raw(const char* key) {
  if (!j_.contains(key)) throw ValidationError(fmt_missing(key));
  seen_.insert(key);
  return j_.at(key);
}

void Reader::finish() const {
  for (const auto& item : j_.items()) {
    if (!seen_.count(item.key())) {
      throw ValidationError(fmt::format("{}/{}: unknown key", path_, item.key()));
    }
  }
}

std::string Reader::fmt_missing(const char* key) const { return fmt::format("{}/{}: required key missing", path_, key); }

// -- dataset ---------------------------------------------------------------

namespace {

json geometry_to_json(const field::ArrayGeometry& g) {
  return {{"nx", g.nx},          {"ny", g.ny},          {"spacing", g.spacing},
          {"d1", g.d1},          {"d2", g.d2},          {"center", encode(g.center)},
          {"normal", encode(g.surface_normal)}};
}

field::ArrayGeometry geometry_from_json(const json& j, const std::string& path) {
  Reader r(j, path);
  field::ArrayGeometry g;
  r.required("nx", g.nx);
  r.required("ny", g.ny);
  r.required("spacing", g.spacing);
  r.required("d1", g.d1);
  r.required("d2", g.d2);
  r.required("center", g.center);
  r.required("normal", g.surface_normal);
  r.finish();
  try {
    g.validate();
  } catch (const DomainError& e) {
    throw ValidationError(fmt::format("{}: {}", path, e.what()));
  }
  return g;
}

json pressure_to_json(const field::PressureMatrix& p) {
  json rows = json::array();
  for (const auto& row : p) {
    json r = json::array();
    for (const Complex& z : row) r.push_back(encode(z));
    rows.push_back(std::move(r));
  }
  return rows;
}

void check_version(Reader& r) {
  int version = 0;
  r.required("schema_version", version);
  if (version != kSchemaVersion) {
    throw ValidationError(fmt::format("{}/schema_version: unsupported version {} (expected {})", r.path(), version,
                                      kSchemaVersion));
  }
}

template <class F>
auto rethrow_as_validation(const std::string& what, F&& f) {
  try {
    return f();
  } catch (const ValidationError&) {
    throw;
  } catch (const Error& e) {
    throw ValidationError(fmt::format("{}: {}", what, e.what()));
  }
}

}  // namespace

json dataset_to_json(const field::PressureDataset& d) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["medium"] = {{"rho0", d.medium.rho0}, {"c0", d.medium.c0}};
  j["frequencies_hz"] = d.frequencies;
  json sensors = json::array();
  for (const Vec3& s : d.sensors) sensors.push_back(encode(s));
  j["sensors"] = std::move(sensors);
  j["pressure"] = pressure_to_json(d.pressure);
  j["geometry"] = geometry_to_json(d.geometry);
  j["noise"] = d.noise ? json{{"snr_db", encode(d.noise->snr_db)}, {"seed", d.noise->seed}} : json(nullptr);
  j["provenance"] = d.provenance;
  return j;
}

field::PressureDataset dataset_from_json(const json& j) {
  Reader r(j, "");
  check_version(r);
  field::PressureDataset d;
  {
    Reader m(r.raw("medium"), "/medium");
    m.required("rho0", d.medium.rho0);
    m.required("c0", d.medium.c0);
    m.finish();
  }
  r.required("frequencies_hz", d.frequencies);
  r.required("sensors", d.sensors);
  r.required("pressure", d.pressure);
  d.geometry = geometry_from_json(r.raw("geometry"), "/geometry");
  const json& noise = r.raw("noise");
  if (!noise.is_null()) {
    Reader n(noise, "/noise");
    field::NoiseMeta meta;
    n.required("snr_db", meta.snr_db);
    n.required("seed", meta.seed);
    n.finish();
    d.noise = meta;
  }
  if (r.has("provenance")) {
    d.provenance = r.raw("provenance");
    if (!d.provenance.is_object()) throw ValidationError("/provenance: expected an object");
  }
  r.finish();
  if (d.sensors.size() != static_cast<std::size_t>(2 * d.geometry.sensors_per_layer())) {
    throw ValidationError(fmt::format("/sensors: {} sensors do not match the {}x{} two-layer geometry",
                                      d.sensors.size(), d.geometry.nx, d.geometry.ny));
  }
  rethrow_as_validation("dataset", [&] { d.validate(); });
  return d;
}

void save_dataset(const std::filesystem::path& path, const field::PressureDataset& dataset) {
  dataset.validate();
  write_file_atomic(path, dump(dataset_to_json(dataset)));
}

field::PressureDataset load_dataset(const std::filesystem::path& path) {
  try {
    return dataset_from_json(load_json(path));
  } catch (const ValidationError& e) {
    throw ValidationError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

// -- evaluation set --------------------------------------------------------

json evaluation_set_to_json(const metrics::EvaluationSet& set) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["frequencies_hz"] = set.frequencies;
  json pts = json::array();
  for (const Vec3& p : set.points) pts.push_back(encode(p));
  j["points"] = std::move(pts);
  j["pressure"] = pressure_to_json(set.reference);
  return j;
}

metrics::EvaluationSet evaluation_set_from_json(const json& j) {
  Reader r(j, "");
  check_version(r);
  metrics::EvaluationSet s;
  r.required("frequencies_hz", s.frequencies);
  r.required("points", s.points);
  r.required("pressure", s.reference);
  r.finish();
  s.validate();
  return s;
}

void save_evaluation_set(const std::filesystem::path& path, const metrics::EvaluationSet& set) {
  set.validate();
  write_file_atomic(path, dump(evaluation_set_to_json(set)));
}

metrics::EvaluationSet load_evaluation_set(const std::filesystem::path& path) {
  try {
    return evaluation_set_from_json(load_json(path));
  } catch (const ValidationError& e) {
    throw ValidationError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

// -- networks --------------------------------------------------------------

json network_bank_to_json(const train::NetworkBank& bank) {
  json j;
  j["arch"] = {{"hidden_width", bank.arch.hidden_width},
               {"hidden_layers", bank.arch.hidden_layers},
               {"omega0", bank.arch.omega0},
               {"omega_hidden", bank.arch.omega_hidden},
               {"box_lo", encode(bank.arch.box.lo)},
               {"box_hi", encode(bank.arch.box.hi)}};
  json nets = json::array();
  for (const nf::NetworkParams& p : bank.networks) {
    json tensors = json::object();
    p.visit([&](const std::string& name, auto m) {
      json data = json::array();
      for (Eigen::Index i = 0; i < m.size(); ++i) data.push_back(m.data()[i]);
      tensors[name] = {{"shape", {m.rows(), m.cols()}}, {"data", std::move(data)}};
    });
    nets.push_back(std::move(tensors));
  }
  j["networks"] = std::move(nets);
  return j;
}

train::NetworkBank network_bank_from_json(const json& j, const std::string& path) {
  Reader r(j, path);
  train::NetworkBank bank;
  {
    Reader a(r.raw("arch"), path + "/arch");
    a.required("hidden_width", bank.arch.hidden_width);
    a.required("hidden_layers", bank.arch.hidden_layers);
    a.required("omega0", bank.arch.omega0);
    a.required("omega_hidden", bank.arch.omega_hidden);
    a.required("box_lo", bank.arch.box.lo);
    a.required("box_hi", bank.arch.box.hi);
    a.finish();
  }
  rethrow_as_validation(path + "/arch", [&] { bank.arch.validate(); });
  const json& nets = r.raw("networks");
  if (!nets.is_array()) throw ValidationError(path + "/networks: expected an array");
  for (std::size_t i = 0; i < nets.size(); ++i) {
    const std::string np = fmt::format("{}/networks/{}", path, i);
    if (!nets[i].is_object()) throw ValidationError(np + ": expected an object");
    nf::NetworkParams p = nf::init_network(bank.arch, 0);
    std::size_t consumed = 0;
    p.visit([&](const std::string& name, auto m) {
      const std::string tp = np + "/" + name;
      if (!nets[i].contains(name)) throw ValidationError(tp + ": required key missing");
      Reader t(nets[i].at(name), tp);
      std::array<int, 2> shape{};
      std::vector<double> data;
      t.required("shape", shape);
      t.required("data", data);
      t.finish();
      if (shape[0] != m.rows() || shape[1] != m.cols() || data.size() != static_cast<std::size_t>(m.size())) {
        throw ValidationError(fmt::format("{}: shape {}x{} does not match the architecture ({}x{})", tp, shape[0],
                                          shape[1], m.rows(), m.cols()));
      }
      for (std::size_t k = 0; k < data.size(); ++k) m.data()[k] = data[k];
      ++consumed;
    });
    if (consumed != nets[i].size()) throw ValidationError(np + ": unknown tensor names");
    bank.networks.push_back(std::move(p));
  }
  r.finish();
  return bank;
}

}  // namespace impedans::io
