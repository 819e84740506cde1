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

#pragma once

// JSON encoding of datasets, evaluation sets and result bundles, and the
// key-tracking reader used for all schemas. Complex numbers are [re, im]
// pairs; non-finite doubles are written as "inf", "-inf" or null.

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "error.hpp"
#include "field_oracle.hpp"
#include "metrics.hpp"
#include "trainer.hpp"
#include "types.hpp"

namespace impedans::io {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Serialized form used for every file the library writes.
std::string dump(const json& j);
json parse_json(const std::string& text, const std::string& source);
json load_json(const std::filesystem::path& path);

// -- element codecs --------------------------------------------------------

json encode(double v);
json encode(Complex z);
json encode(Vec3 v);

void decode(const json& j, const std::string& path, double& out);
void decode(const json& j, const std::string& path, int& out);
void decode(const json& j, const std::string& path, std::uint64_t& out);
void decode(const json& j, const std::string& path, bool& out);
void decode(const json& j, const std::string& path, std::string& out);
void decode(const json& j, const std::string& path, Complex& out);
void decode(const json& j, const std::string& path, Vec3& out);

template <class T>
void decode(const json& j, const std::string& path, std::optional<T>& out) {
  if (j.is_null()) {
    out.reset();
    return;
  }
  T v{};
  decode(j, path, v);
  out = v;
}

template <class T>
void decode(const json& j, const std::string& path, std::vector<T>& out);
template <class T, std::size_t N>
void decode(const json& j, const std::string& path, std::array<T, N>& out);

/// Walks one JSON object, remembers the keys it consumed and rejects the rest.
class Reader {
 public:
  Reader(const json& j, std::string path);

  bool has(const char* key) const { return j_.contains(key); }
  const std::string& path() const { return path_; }
  std::string child(const char* key) const { return path_ + "/" + key; }

  /// Optional field: leaves value untouched when absent.
  template <class T>
  void operator()(const char* key, T& value) {
    if (!j_.contains(key)) return;
    seen_.insert(key);
    decode_value(j_.at(key), child(key), value);
  }

  template <class T>
  void required(const char* key, T& value) {
    if (!j_.contains(key)) throw ValidationError(fmt_missing(key));
    (*this)(key, value);
  }

  const json& raw(const char* key);  // required, marks the key as consumed
  void finish() const;

 private:
  template <class T>
  static void decode_value(const json& j, const std::string& path, T& value);
  std::string fmt_missing(const char* key) const;

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

/// Counterpart of Reader for the same describe_fields() functions.
class Writer {
 public:
  explicit Writer(json& j) : j_(j) { j_ = json::object(); }

  template <class T>
  void operator()(const char* key, const T& value) {
    j_[key] = encode_value(value);
  }
  template <class T>
  void required(const char* key, const T& value) {
    (*this)(key, value);
  }

  template <class T>
  static json encode_value(const T& value);

 private:
  json& j_;
};

template <class T>
concept Bindable = requires(Reader& r, Writer& w, T& t, const T& c) {
  describe_fields(r, t);
  describe_fields(w, c);
};

template <class T>
void Reader::decode_value(const json& j, const std::string& path, T& value) {
  if constexpr (Bindable<T>) {
    if (!j.is_object()) throw ValidationError(path + ": expected an object");
    Reader sub(j, path);
    describe_fields(sub, value);
    sub.finish();
  } else {
    decode(j, path, value);
  }
}

template <class T>
json Writer::encode_value(const T& value) {
  if constexpr (Bindable<T>) {
    json out;
    Writer w(out);
    describe_fields(w, value);
    return out;
  } else if constexpr (requires { value.has_value(); }) {
    return value ? encode_value(*value) : json(nullptr);
  } else if constexpr (requires { value.begin(); value.size(); } && !std::is_same_v<T, std::string>) {
    json arr = json::array();
    for (const auto& v : value) arr.push_back(encode_value(v));
    return arr;
  } else if constexpr (std::is_same_v<T, double> || std::is_same_v<T, Complex> || std::is_same_v<T, Vec3>) {
    return encode(value);
  } else {
    return json(value);
  }
}

template <class T>
void decode(const json& j, const std::string& path, std::vector<T>& out) {
  if (!j.is_array()) throw ValidationError(path + ": expected an array");
  std::vector<T> v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "/" + std::to_string(i);
    if constexpr (Bindable<T>) {
      if (!j[i].is_object()) throw ValidationError(p + ": expected an object");
      Reader sub(j[i], p);
      describe_fields(sub, v[i]);
      sub.finish();
    } else {
      decode(j[i], p, v[i]);
    }
  }
  out = std::move(v);
}

template <class T, std::size_t N>
void decode(const json& j, const std::string& path, std::array<T, N>& out) {
  if (!j.is_array() || j.size() != N) throw ValidationError(path + ": expected an array of " + std::to_string(N));
  for (std::size_t i = 0; i < N; ++i) decode(j[i], path + "/" + std::to_string(i), out[i]);
}

// -- schemas ---------------------------------------------------------------

json dataset_to_json(const field::PressureDataset& dataset);
field::PressureDataset dataset_from_json(const json& j);
void save_dataset(const std::filesystem::path& path, const field::PressureDataset& dataset);
field::PressureDataset load_dataset(const std::filesystem::path& path);

json evaluation_set_to_json(const metrics::EvaluationSet& set);
metrics::EvaluationSet evaluation_set_from_json(const json& j);
void save_evaluation_set(const std::filesystem::path& path, const metrics::EvaluationSet& set);
metrics::EvaluationSet load_evaluation_set(const std::filesystem::path& path);

json network_bank_to_json(const train::NetworkBank& bank);
train::NetworkBank network_bank_from_json(const json& j, const std::string& path);

}  // namespace impedans::io
