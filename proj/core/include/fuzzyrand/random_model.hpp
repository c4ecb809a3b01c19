#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzyrand/dirichlet.hpp"

namespace fuzzyrand {

enum class ModelFamily { kPerm, kCat, kNum, kAll, kFit, kSym, kFlat };
enum class Sidedness { kOne, kTwo };

/// A random model for chance adjustment.
///
/// CAT, NUM and ALL are hard-only closed forms and exist only two-sided.
/// `exact_hint` prefers closed forms (and exact Stirling ratios for NUM) when
/// the inputs allow them; otherwise the Monte-Carlo engine is used.
struct RandomModel {
  ModelFamily family = ModelFamily::kPerm;
  Sidedness sided = Sidedness::kTwo;
  bool exact_hint = true;

  std::string label() const;  // e.g. "fit" or "fit/one"
  friend bool operator==(const RandomModel&, const RandomModel&) = default;
};

std::string_view to_string(ModelFamily family);
std::string_view to_string(Sidedness sided);

/// Parses perm | cat | num | all | fit | sym | flat (case-insensitive).
ModelFamily parse_model_family(std::string_view text);
/// Parses a comma-separated list of families.
std::vector<ModelFamily> parse_model_families(std::string_view list);

bool is_dirichlet_family(ModelFamily family) noexcept;
std::optional<DirichletModel> as_dirichlet_model(ModelFamily family) noexcept;

}  // namespace fuzzyrand
