#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "selinf/experiment.hpp"

namespace selinf {

/// Reads the JSON dataset format:
///
///   {"inputs":  [{"label": "alpha1", "values": ["1", "2"]}, ...],
///    "outputs": [{"label": "A1", "values": ["1", "2"]}, ...],
///    "treatments": [
///      {"treatment": [1, 2], "probabilities": {"1,1": "1/2", "2,2": "0.5"}},
///      {"treatment": [2, 2], "counts": {"1,2": 13, "2,1": 13}}]}
///
/// Probabilities are strings ("p/q", integers, or exact decimals). Counts
/// are nonnegative integers and are divided by their total. Structural
/// problems throw ParseError with a line and column; semantic problems
/// (mass ≠ 1, indices out of range) are left for validate_dataset.
Dataset parse_dataset(std::string_view text);

Dataset load_dataset(const std::filesystem::path& path);

nlohmann::json dataset_to_json(const Dataset& dataset);

/// Pretty-printed JSON with exact "p/q" probability strings.
std::string dump_dataset(const Dataset& dataset);

void save_dataset(const Dataset& dataset, const std::filesystem::path& path);

/// "1,2,1" for an outcome tuple or treatment.
std::string tuple_key(const std::vector<int>& tuple);

}  // namespace selinf
