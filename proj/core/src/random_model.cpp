#include "fuzzyrand/random_model.hpp"

#include <algorithm>
#include <cctype>

#include "fuzzyrand/errors.hpp"

namespace fuzzyrand {

std::string_view to_string(ModelFamily family) {
  switch (family) {
    case ModelFamily::kPerm:
      return "perm";
    case ModelFamily::kCat:
      return "cat";
    case ModelFamily::kNum:
      return "num";
    case ModelFamily::kAll:
      return "all";
    case ModelFamily::kFit:
      return "fit";
    case ModelFamily::kSym:
      return "sym";
    case ModelFamily::kFlat:
      return "flat";
  }
  return "unknown";
}

std::string_view to_string(Sidedness sided) { return sided == Sidedness::kOne ? "one" : "two"; }

std::string RandomModel::label() const {
  std::string out(to_string(family));
  if (sided == Sidedness::kOne) out += "/one";
  return out;
}

ModelFamily parse_model_family(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (auto family : {ModelFamily::kPerm, ModelFamily::kCat, ModelFamily::kNum, ModelFamily::kAll,
                      ModelFamily::kFit, ModelFamily::kSym, ModelFamily::kFlat}) {
    if (lower == to_string(family)) return family;
  }
  throw UsageError("unknown random model '" + std::string(text) +
                   "' (expected perm, cat, num, all, fit, sym or flat)");
}

std::vector<ModelFamily> parse_model_families(std::string_view list) {
  std::vector<ModelFamily> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    const auto comma = list.find(',', start);
    auto item = list.substr(start, comma == std::string_view::npos ? comma : comma - start);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front()))) item.remove_prefix(1);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back()))) item.remove_suffix(1);
    if (!item.empty()) out.push_back(parse_model_family(item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw UsageError("model list is empty");
  return out;
}

bool is_dirichlet_family(ModelFamily family) noexcept {
  return family == ModelFamily::kFit || family == ModelFamily::kSym || family == ModelFamily::kFlat;
}

std::optional<DirichletModel> as_dirichlet_model(ModelFamily family) noexcept {
  switch (family) {
    case ModelFamily::kFit:
      return DirichletModel::kFit;
    case ModelFamily::kSym:
      return DirichletModel::kSym;
    case ModelFamily::kFlat:
      return DirichletModel::kFlat;
    default:
      return std::nullopt;
  }
}

}  // namespace fuzzyrand
