#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "fuzzybso/inference.hpp"

namespace fuzzybso {

/// Format tag written into every model file.
inline constexpr const char* kModelFormat = "fuzzybso-model/1";

/// Model as an ordered JSON document:
///
///   format          "fuzzybso-model/1"
///   attributes[]    name, min, max, mfs: [[a, b, c], ...] (one triple per label)
///   classes[]       original label of class id j+1
///   positive_class  original label used for sensitivity / specificity
///   majority_class  original label of the zero-activation fallback
///   decision        "winner" | "class-sum"
///   rules[]         antecedents (0 = don't care), class (id), connective
///                   ("AND" | "OR"), weight (4 decimals)
///   training        optimizer, seed, params_digest, train_records,
///                   fitness {g1, g2, g3, G}
nlohmann::ordered_json model_to_json(const Model& model);

/// Throws DataError naming the offending field when the document is not a
/// valid model.
Model model_from_json(const nlohmann::json& doc);

void save_model(const Model& model, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);

}  // namespace fuzzybso
