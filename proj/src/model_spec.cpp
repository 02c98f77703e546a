#include "lciclv/model_spec.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lciclv/errors.hpp"

namespace lciclv {

using nlohmann::json;

int ModelSpec::indicator_count() const {
  int h = 0;
  for (const auto& lv : latent_variables) h += static_cast<int>(lv.indicators.size());
  return h;
}

std::vector<ModelSpec::IndicatorRef> ModelSpec::indicators() const {
  std::vector<IndicatorRef> out;
  for (int g = 0; g < latent_count(); ++g) {
    const auto& lv = latent_variables[g];
    std::string ref = lv.reference_indicator.empty() && !lv.indicators.empty()
                          ? lv.indicators.front().name
                          : lv.reference_indicator;
    for (const auto& ind : lv.indicators)
      out.push_back({ind.name, ind.categories, g, ind.name == ref});
  }
  return out;
}

const ClassChoiceSpec& ModelSpec::choice_for_class(int q) const {
  if (choice_classes.empty()) throw ConfigError("model spec declares no choice block");
  if (choice_classes.size() == 1) return choice_classes.front();
  return choice_classes.at(static_cast<std::size_t>(q));
}

ModelSpec ModelSpec::with_class_count(int q) const {
  ModelSpec copy = *this;
  copy.classes = q;
  if (choice_classes.size() != 1 && static_cast<int>(choice_classes.size()) != q)
    throw ConfigError(
        "class-count change requires a shared choice block (declare one choice "
        "class to broadcast)");
  copy.check();
  return copy;
}

void ModelSpec::check() const {
  if (classes < 1) throw ConfigError("classes must be >= 1");
  if (alternatives != 2)
    throw ConfigError("only binary choice (alternatives = 2) is supported");
  if (draws < 1) throw ConfigError("draws must be >= 1");
  if (halton_skip < 0) throw ConfigError("halton_skip must be >= 0");
  if (choice_classes.size() != 1 && static_cast<int>(choice_classes.size()) != classes)
    throw ConfigError("choice_classes must have 1 entry or one entry per class");

  std::set<std::string> names;
  for (const auto& lv : latent_variables) {
    if (lv.name.empty()) throw ConfigError("latent variable with empty name");
    if (!names.insert(lv.name).second)
      throw ConfigError("duplicate latent variable name: " + lv.name);
    if (lv.indicators.empty())
      throw ConfigError("latent variable '" + lv.name + "' needs at least one indicator");
    std::string ref = lv.reference_indicator.empty() ? lv.indicators.front().name
                                                     : lv.reference_indicator;
    bool found = false;
    for (const auto& ind : lv.indicators) {
      if (ind.categories < 2)
        throw ConfigError("indicator '" + ind.name + "' needs >= 2 categories");
      if (ind.name == ref) found = true;
    }
    if (!found)
      throw ConfigError("reference indicator '" + ref + "' is not an indicator of '" +
                        lv.name + "'");
    if (options.shared_thresholds) {
      for (const auto& ind : lv.indicators)
        if (ind.categories != lv.indicators.front().categories)
          throw ConfigError("shared thresholds require equal category counts within '" +
                            lv.name + "'");
    }
  }
  std::set<std::string> ind_names;
  for (const auto& ref : indicators())
    if (!ind_names.insert(ref.name).second)
      throw ConfigError("indicator '" + ref.name + "' assigned to more than one construct");

  if (options.free_error_sd && !options.shared_thresholds)
    throw ConfigError(
        "free_error_sd requires shared_thresholds (per-indicator thresholds absorb "
        "the indicator scale)");

  for (std::size_t ci = 0; ci < choice_classes.size(); ++ci) {
    const auto& cc = choice_classes[ci];
    std::set<std::string> util(cc.utility_covariates.begin(), cc.utility_covariates.end());
    if (util.size() != cc.utility_covariates.size())
      throw ConfigError("duplicate utility covariate in choice class " + std::to_string(ci + 1));
    for (const auto& rc : cc.random_coefficients)
      if (!util.count(rc))
        throw ConfigError("random coefficient '" + rc + "' is not a utility covariate");
    for (const auto& lu : cc.latent_in_utility)
      if (!names.count(lu))
        throw ConfigError("latent_in_utility references unknown latent variable '" + lu + "'");
  }

  for (const auto& cat : categoricals) {
    if (cat.levels.size() < 2)
      throw ConfigError("categorical '" + cat.column + "' needs >= 2 levels");
    if (std::find(cat.levels.begin(), cat.levels.end(), cat.reference) == cat.levels.end())
      throw ConfigError("categorical '" + cat.column + "': reference level '" +
                        cat.reference + "' is not among its levels");
  }
}

namespace {

const json* find(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

std::vector<std::string> string_list(const json& arr, const std::string& where) {
  if (!arr.is_array()) throw ConfigError(where + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& v : arr) {
    if (!v.is_string()) throw ConfigError(where + " must contain only strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace

ModelSpec model_spec_from_json_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("model spec is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("model spec must be a JSON object");

  ModelSpec spec;
  if (auto* v = find(root, "classes")) spec.classes = v->get<int>();
  if (auto* v = find(root, "alternatives")) spec.alternatives = v->get<int>();
  if (auto* v = find(root, "draws")) spec.draws = v->get<int>();
  if (auto* v = find(root, "halton_skip")) spec.halton_skip = v->get<int>();
  if (auto* v = find(root, "scramble_seed")) spec.scramble_seed = v->get<std::uint64_t>();

  if (auto* m = find(root, "membership")) {
    if (auto* v = find(*m, "intercept")) spec.membership.intercept = v->get<bool>();
    if (auto* v = find(*m, "covariates"))
      spec.membership.covariates = string_list(*v, "membership.covariates");
  }

  if (auto* cats = find(root, "categoricals")) {
    for (const auto& c : *cats) {
      CategoricalSpec cat;
      cat.column = c.at("column").get<std::string>();
      cat.levels = string_list(c.at("levels"), "categorical levels");
      cat.reference = c.at("reference").get<std::string>();
      spec.categoricals.push_back(std::move(cat));
    }
  }

  if (auto* lvs = find(root, "latent_variables")) {
    for (const auto& l : *lvs) {
      LatentVarSpec lv;
      lv.name = l.at("name").get<std::string>();
      if (auto* v = find(l, "structural_covariates"))
        lv.structural_covariates = string_list(*v, lv.name + ".structural_covariates");
      for (const auto& i : l.at("indicators")) {
        IndicatorSpec ind;
        ind.name = i.at("name").get<std::string>();
        if (auto* v = find(i, "categories")) ind.categories = v->get<int>();
        lv.indicators.push_back(std::move(ind));
      }
      if (auto* v = find(l, "reference_indicator"))
        lv.reference_indicator = v->get<std::string>();
      spec.latent_variables.push_back(std::move(lv));
    }
  }

  if (auto* v = find(root, "scenario_attributes"))
    spec.scenario_attributes = string_list(*v, "scenario_attributes");

  if (auto* ccs = find(root, "choice_classes")) {
    for (const auto& c : *ccs) {
      ClassChoiceSpec cc;
      if (auto* v = find(c, "utility_covariates"))
        cc.utility_covariates = string_list(*v, "utility_covariates");
      if (auto* v = find(c, "random_coefficients"))
        cc.random_coefficients = string_list(*v, "random_coefficients");
      if (auto* v = find(c, "latent_in_utility"))
        cc.latent_in_utility = string_list(*v, "latent_in_utility");
      spec.choice_classes.push_back(std::move(cc));
    }
  }
  if (spec.choice_classes.empty()) spec.choice_classes.emplace_back();

  if (auto* opts = find(root, "options")) {
    if (auto* v = find(*opts, "latent_scale")) {
      std::string s = v->get<std::string>();
      if (s == "reference_loading")
        spec.options.latent_scale = LatentScale::kReferenceLoading;
      else if (s == "unit_variance")
        spec.options.latent_scale = LatentScale::kUnitVariance;
      else
        throw ConfigError("options.latent_scale must be reference_loading or unit_variance");
    }
    if (auto* v = find(*opts, "shared_thresholds"))
      spec.options.shared_thresholds = v->get<bool>();
    if (auto* v = find(*opts, "free_error_sd")) spec.options.free_error_sd = v->get<bool>();
    if (auto* v = find(*opts, "allow_missing_indicators"))
      spec.options.allow_missing_indicators = v->get<bool>();
    if (auto* v = find(*opts, "bic_units")) {
      std::string s = v->get<std::string>();
      if (s == "respondents")
        spec.options.bic_units_respondents = true;
      else if (s == "observations")
        spec.options.bic_units_respondents = false;
      else
        throw ConfigError("options.bic_units must be respondents or observations");
    }
    if (auto* v = find(*opts, "full_psi")) spec.options.full_psi = v->get<bool>();
  }

  spec.check();
  return spec;
}

ModelSpec load_model_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open model spec: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return model_spec_from_json_text(ss.str());
}

std::string model_spec_to_json_text(const ModelSpec& spec) {
  json root;
  root["classes"] = spec.classes;
  root["alternatives"] = spec.alternatives;
  root["draws"] = spec.draws;
  root["halton_skip"] = spec.halton_skip;
  if (spec.scramble_seed) root["scramble_seed"] = *spec.scramble_seed;
  root["membership"]["intercept"] = spec.membership.intercept;
  root["membership"]["covariates"] = spec.membership.covariates;
  for (const auto& cat : spec.categoricals)
    root["categoricals"].push_back(
        {{"column", cat.column}, {"levels", cat.levels}, {"reference", cat.reference}});
  for (const auto& lv : spec.latent_variables) {
    json l;
    l["name"] = lv.name;
    l["structural_covariates"] = lv.structural_covariates;
    for (const auto& ind : lv.indicators)
      l["indicators"].push_back({{"name", ind.name}, {"categories", ind.categories}});
    if (!lv.reference_indicator.empty()) l["reference_indicator"] = lv.reference_indicator;
    root["latent_variables"].push_back(std::move(l));
  }
  root["scenario_attributes"] = spec.scenario_attributes;
  for (const auto& cc : spec.choice_classes)
    root["choice_classes"].push_back({{"utility_covariates", cc.utility_covariates},
                                      {"random_coefficients", cc.random_coefficients},
                                      {"latent_in_utility", cc.latent_in_utility}});
  root["options"]["latent_scale"] = spec.options.latent_scale == LatentScale::kReferenceLoading
                                        ? "reference_loading"
                                        : "unit_variance";
  root["options"]["shared_thresholds"] = spec.options.shared_thresholds;
  root["options"]["free_error_sd"] = spec.options.free_error_sd;
  root["options"]["allow_missing_indicators"] = spec.options.allow_missing_indicators;
  root["options"]["bic_units"] = spec.options.bic_units_respondents ? "respondents" : "observations";
  root["options"]["full_psi"] = spec.options.full_psi;
  return root.dump(2) + "\n";
}

}  // namespace lciclv
