#include "inceprop/json_reader.hpp"

#include <cmath>

#include "inceprop/errors.hpp"

namespace inceprop {

void config_error(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::ConfigInvalid, (path.empty() ? "<root>" : path) +
                                            ": " + what);
}

JsonObjectReader::JsonObjectReader(const nlohmann::json& object,
                                   std::string path)
    : object_(&object), path_(std::move(path)) {
  if (!object.is_object()) config_error(path_, "expected an object");
}

std::string JsonObjectReader::path_of(const std::string& key) const {
  return path_.empty() ? key : path_ + "." + key;
}

bool JsonObjectReader::has(const std::string& key) const {
  return object_->contains(key);
}

const nlohmann::json& JsonObjectReader::raw(const std::string& key) {
  if (!has(key)) config_error(path_of(key), "missing required field");
  used_.insert(key);
  return object_->at(key);
}

double JsonObjectReader::number(const std::string& key) {
  const auto& v = raw(key);
  if (!v.is_number()) config_error(path_of(key), "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) config_error(path_of(key), "expected a finite number");
  return x;
}

double JsonObjectReader::number_or(const std::string& key, double fallback) {
  return has(key) ? number(key) : fallback;
}

long JsonObjectReader::integer(const std::string& key) {
  const auto& v = raw(key);
  if (!v.is_number_integer()) config_error(path_of(key), "expected an integer");
  return v.get<long>();
}

long JsonObjectReader::integer_or(const std::string& key, long fallback) {
  return has(key) ? integer(key) : fallback;
}

std::string JsonObjectReader::string(const std::string& key) {
  const auto& v = raw(key);
  if (!v.is_string()) config_error(path_of(key), "expected a string");
  return v.get<std::string>();
}

std::string JsonObjectReader::string_or(const std::string& key,
                                        std::string fallback) {
  return has(key) ? string(key) : std::move(fallback);
}

bool JsonObjectReader::boolean_or(const std::string& key, bool fallback) {
  if (!has(key)) return fallback;
  const auto& v = raw(key);
  if (!v.is_boolean()) config_error(path_of(key), "expected a boolean");
  return v.get<bool>();
}

std::vector<double> JsonObjectReader::numbers(const std::string& key) {
  const auto& v = raw(key);
  if (!v.is_array()) config_error(path_of(key), "expected an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) {
      config_error(path_of(key) + "[" + std::to_string(i) + "]",
                   "expected a number");
    }
    out.push_back(v[i].get<double>());
  }
  return out;
}

std::optional<JsonObjectReader> JsonObjectReader::object(
    const std::string& key) {
  if (!has(key)) return std::nullopt;
  return JsonObjectReader(raw(key), path_of(key));
}

JsonObjectReader JsonObjectReader::required_object(const std::string& key) {
  return JsonObjectReader(raw(key), path_of(key));
}

void JsonObjectReader::finish() const {
  for (auto it = object_->begin(); it != object_->end(); ++it) {
    if (!used_.count(it.key())) config_error(path_of(it.key()), "unknown key");
  }
}

}  // namespace inceprop
