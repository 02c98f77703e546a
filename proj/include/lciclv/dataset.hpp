#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "lciclv/model_spec.hpp"

namespace lciclv {

struct ChoiceScenario {
  Eigen::VectorXd attributes;  // aligned with DatasetMeta::scenario_attribute_names
  int chosen = 0;              // alternative index; 1 = willing/use in the binary case
};

// Indicator value 0 marks a missing response (valid categories are 1..C_h).
constexpr int kMissingIndicator = 0;

struct Respondent {
  std::string id;
  Eigen::VectorXd covariates;  // aligned with DatasetMeta::covariate_names
  std::vector<int> indicators;
  std::vector<ChoiceScenario> scenarios;
};

struct DatasetMeta {
  std::vector<std::string> covariate_names;
  std::vector<std::string> indicator_names;
  std::vector<int> categories;  // C_h per indicator
  std::vector<std::string> scenario_attribute_names;
  int alternatives = 2;

  int covariate_index(const std::string& name) const;  // -1 when absent
};

struct Dataset {
  DatasetMeta meta;
  std::vector<Respondent> respondents;

  std::size_t observation_count() const;
};

// The stated-preference design: level values for the two scenario attributes
// and the (wt, tt) level-index pairs that form the scenario set.
struct ScenarioGrid {
  std::vector<double> wt_levels;
  std::vector<double> tt_levels;
  std::vector<std::pair<int, int>> combos;

  // Ten pairs {(i, i), (i, (i+1) mod 5)} over five level codes 1..5. The
  // combination set is a configuration choice; downstream code only sees the
  // expanded scenarios.
  static ScenarioGrid default_grid();

  void check() const;  // throws ConfigError on duplicate/out-of-range combos
};

// One scenario per grid combo; chosen = 1 exactly when the combo's levels are
// within both stated thresholds (level indices), else 0.
std::vector<ChoiceScenario> expand_scenarios(int stated_wt_threshold,
                                             int stated_tt_threshold,
                                             const ScenarioGrid& grid);

// Reads the respondent and scenario tables, dummy-codes declared categoricals,
// and returns a validated dataset. Throws SchemaError / ValidationError /
// ReferentialError as appropriate.
Dataset load_dataset(const std::string& respondent_csv, const std::string& scenario_csv,
                     const ModelSpec& spec);

// Writes <dir>/respondents.csv and <dir>/scenarios.csv; numeric fields
// round-trip exactly through load_dataset.
void save_dataset(const Dataset& dataset, const std::string& dir);

struct Violation {
  std::string respondent_id;
  std::string field;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool clean() const { return violations.empty(); }
  std::string to_string() const;
};

ValidationReport validate(const Dataset& dataset, const ModelSpec& spec);

// Resolved name->index views of a dataset for one model spec.
struct ClassChoiceBindings {
  struct Term {
    int index;             // covariate or scenario-attribute index
    bool scenario_level;   // true: index into scenario attributes
    std::string name;
  };
  std::vector<Term> fixed_terms;
  std::vector<Term> random_terms;
  std::vector<int> latent_indices;
};

struct Bindings {
  std::vector<int> membership_indices;             // M entries (intercept excluded)
  bool membership_intercept = true;
  std::vector<std::vector<int>> structural_indices;  // per latent variable
  std::vector<ClassChoiceBindings> choice;           // one per class
  std::vector<int> indicator_construct;              // H -> latent index
  std::vector<bool> indicator_is_reference;          // H
  std::vector<int> categories;                       // H
  int latent_dims = 0;       // G
  int max_random_coefs = 0;  // P
  int draw_dims() const { return latent_dims + max_random_coefs; }
  int membership_design_dim() const {
    return static_cast<int>(membership_indices.size()) + (membership_intercept ? 1 : 0);
  }
  // Membership design vector for one respondent (intercept first when enabled).
  Eigen::VectorXd membership_design(const Respondent& r) const;
};

Bindings bind(const ModelSpec& spec, const DatasetMeta& meta);

}  // namespace lciclv
