#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"

#include "cogent/problem.hpp"

namespace cogent {

nlohmann::ordered_json instance_to_json(const Instance& instance);
/// Throws FormatError on schema errors and InstanceInvalid on invariant violations.
Instance instance_from_json(const nlohmann::ordered_json& doc);

/// Compact single-line JSON with a fixed key order.
std::string serialize_instance(const Instance& instance);
Instance parse_instance(std::string_view text);

Instance load_instance(const std::filesystem::path& path);
void save_instance(const std::filesystem::path& path, const Instance& instance);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace cogent
