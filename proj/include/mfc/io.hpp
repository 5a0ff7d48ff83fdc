#pragma once

#include <string>

#include "json.hpp"
#include "mfc/dag.hpp"

namespace mfc {

struct Ecosystem;

void to_json(nlohmann::json& j, const ApplicationDag& dag);
void from_json(const nlohmann::json& j, ApplicationDag& dag);

void to_json(nlohmann::json& j, const Ecosystem& eco);
void from_json(const nlohmann::json& j, Ecosystem& eco);

nlohmann::json read_json_file(const std::string& path);
// Pretty-printed, newline-terminated; throws ConfigError when unwritable.
void write_json_file(const nlohmann::json& doc, const std::string& path);
void write_text_file(const std::string& text, const std::string& path);

}  // namespace mfc
