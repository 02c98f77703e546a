#include "lciclv/dataset.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "lciclv/csv.hpp"
#include "lciclv/errors.hpp"

namespace lciclv {

int DatasetMeta::covariate_index(const std::string& name) const {
  for (std::size_t i = 0; i < covariate_names.size(); ++i)
    if (covariate_names[i] == name) return static_cast<int>(i);
  return -1;
}

std::size_t Dataset::observation_count() const {
  std::size_t total = 0;
  for (const auto& r : respondents) total += r.scenarios.size();
  return total;
}

ScenarioGrid ScenarioGrid::default_grid() {
  ScenarioGrid grid;
  grid.wt_levels = {1, 2, 3, 4, 5};
  grid.tt_levels = {1, 2, 3, 4, 5};
  for (int i = 0; i < 5; ++i) {
    grid.combos.emplace_back(i, i);
    grid.combos.emplace_back(i, (i + 1) % 5);
  }
  return grid;
}

void ScenarioGrid::check() const {
  std::set<std::pair<int, int>> seen;
  for (const auto& [wi, ti] : combos) {
    if (wi < 0 || wi >= static_cast<int>(wt_levels.size()) || ti < 0 ||
        ti >= static_cast<int>(tt_levels.size()))
      throw ConfigError("scenario grid combo references an undeclared level");
    if (!seen.insert({wi, ti}).second)
      throw ConfigError("scenario grid combos must be distinct");
  }
}

std::vector<ChoiceScenario> expand_scenarios(int stated_wt_threshold,
                                             int stated_tt_threshold,
                                             const ScenarioGrid& grid) {
  grid.check();
  if (stated_wt_threshold < 0 || stated_wt_threshold >= static_cast<int>(grid.wt_levels.size()))
    throw ConfigError("stated waiting-time threshold index out of range");
  if (stated_tt_threshold < 0 || stated_tt_threshold >= static_cast<int>(grid.tt_levels.size()))
    throw ConfigError("stated travel-time threshold index out of range");
  std::vector<ChoiceScenario> out;
  out.reserve(grid.combos.size());
  for (const auto& [wi, ti] : grid.combos) {
    ChoiceScenario s;
    s.attributes.resize(2);
    s.attributes << grid.wt_levels[wi], grid.tt_levels[ti];
    s.chosen = (wi <= stated_wt_threshold && ti <= stated_tt_threshold) ? 1 : 0;
    out.push_back(std::move(s));
  }
  return out;
}

namespace {

// Covariate columns the spec needs from the respondent table, in first-use order.
std::vector<std::string> respondent_covariate_names(const ModelSpec& spec) {
  std::vector<std::string> names;
  std::set<std::string> seen;
  std::set<std::string> scen(spec.scenario_attributes.begin(), spec.scenario_attributes.end());
  auto add = [&](const std::string& n) {
    if (!scen.count(n) && seen.insert(n).second) names.push_back(n);
  };
  for (const auto& n : spec.membership.covariates) add(n);
  for (const auto& lv : spec.latent_variables)
    for (const auto& n : lv.structural_covariates) add(n);
  for (const auto& cc : spec.choice_classes) {
    for (const auto& n : cc.utility_covariates)
      if (!scen.count(n)) add(n);
  }
  return names;
}

struct ColumnSource {
  int raw_index = -1;          // direct numeric column
  int categorical = -1;        // index into spec.categoricals
  std::string level;           // level that codes 1
};

}  // namespace

Dataset load_dataset(const std::string& respondent_csv, const std::string& scenario_csv,
                     const ModelSpec& spec) {
  spec.check();
  CsvTable rtab = read_csv(respondent_csv);
  CsvTable stab = read_csv(scenario_csv);

  Dataset ds;
  ds.meta.alternatives = spec.alternatives;
  ds.meta.covariate_names = respondent_covariate_names(spec);
  for (const auto& ind : spec.indicators()) {
    ds.meta.indicator_names.push_back(ind.name);
    ds.meta.categories.push_back(ind.categories);
  }
  ds.meta.scenario_attribute_names = spec.scenario_attributes;

  int id_col = rtab.require_column("respondent_id", respondent_csv);

  // Resolve every needed covariate either to a raw column or to a declared
  // categorical level dummy.
  std::vector<ColumnSource> sources(ds.meta.covariate_names.size());
  std::vector<int> cat_cols(spec.categoricals.size(), -1);
  for (std::size_t i = 0; i < ds.meta.covariate_names.size(); ++i) {
    const std::string& name = ds.meta.covariate_names[i];
    int col = rtab.column(name);
    if (col >= 0) {
      sources[i].raw_index = col;
      continue;
    }
    bool resolved = false;
    for (std::size_t c = 0; c < spec.categoricals.size(); ++c) {
      const auto& cat = spec.categoricals[c];
      for (const auto& level : cat.levels) {
        if (cat.dummy_name(level) != name) continue;
        if (level == cat.reference)
          throw ConfigError("covariate '" + name + "' is the reference level of '" +
                            cat.column + "' and carries no dummy column");
        if (cat_cols[c] < 0) cat_cols[c] = rtab.require_column(cat.column, respondent_csv);
        sources[i].categorical = static_cast<int>(c);
        sources[i].level = level;
        resolved = true;
        break;
      }
      if (resolved) break;
    }
    if (!resolved) throw SchemaError("missing column '" + name + "' in " + respondent_csv);
  }

  std::vector<int> ind_cols;
  for (const auto& name : ds.meta.indicator_names)
    ind_cols.push_back(rtab.require_column(name, respondent_csv));

  std::map<std::string, std::size_t> index_of;
  for (std::size_t row = 0; row < rtab.rows.size(); ++row) {
    const auto& fields = rtab.rows[row];
    if (fields.size() != rtab.header.size())
      throw ValidationError("row " + std::to_string(row + 2) + " of " + respondent_csv +
                            " has " + std::to_string(fields.size()) + " fields, expected " +
                            std::to_string(rtab.header.size()));
    Respondent r;
    r.id = fields[static_cast<std::size_t>(id_col)];
    if (r.id.empty())
      throw ValidationError("empty respondent_id at row " + std::to_string(row + 2));
    if (!index_of.emplace(r.id, ds.respondents.size()).second)
      throw ValidationError("duplicate respondent_id '" + r.id + "'");

    r.covariates.resize(static_cast<Eigen::Index>(ds.meta.covariate_names.size()));
    for (std::size_t i = 0; i < sources.size(); ++i) {
      if (sources[i].raw_index >= 0) {
        r.covariates[static_cast<Eigen::Index>(i)] = parse_double(
            fields[static_cast<std::size_t>(sources[i].raw_index)],
            "respondent " + r.id + ", column " + ds.meta.covariate_names[i]);
      } else {
        const auto& cat = spec.categoricals[static_cast<std::size_t>(sources[i].categorical)];
        const std::string& raw =
            fields[static_cast<std::size_t>(cat_cols[static_cast<std::size_t>(sources[i].categorical)])];
        if (std::find(cat.levels.begin(), cat.levels.end(), raw) == cat.levels.end())
          throw ValidationError("respondent " + r.id + ": unknown level '" + raw +
                                "' for categorical '" + cat.column + "'");
        r.covariates[static_cast<Eigen::Index>(i)] = (raw == sources[i].level) ? 1.0 : 0.0;
      }
    }

    for (std::size_t h = 0; h < ind_cols.size(); ++h) {
      const std::string& cell = fields[static_cast<std::size_t>(ind_cols[h])];
      int value;
      if (cell.empty() || cell == "NA") {
        if (!spec.options.allow_missing_indicators)
          throw ValidationError("respondent " + r.id + ": missing response for indicator '" +
                                ds.meta.indicator_names[h] +
                                "' (enable allow_missing_indicators to drop such terms)");
        value = kMissingIndicator;
      } else {
        value = static_cast<int>(
            parse_long(cell, "respondent " + r.id + ", indicator " + ds.meta.indicator_names[h]));
        if (value < 1 || value > ds.meta.categories[h])
          throw ValidationError("respondent " + r.id + ": indicator '" +
                                ds.meta.indicator_names[h] + "' value " + cell +
                                " outside 1.." + std::to_string(ds.meta.categories[h]));
      }
      r.indicators.push_back(value);
    }
    ds.respondents.push_back(std::move(r));
  }

  int sid_col = stab.require_column("respondent_id", scenario_csv);
  int sidx_col = stab.require_column("scenario_index", scenario_csv);
  int chosen_col = stab.require_column("chosen", scenario_csv);
  std::vector<int> attr_cols;
  for (const auto& name : ds.meta.scenario_attribute_names)
    attr_cols.push_back(stab.require_column(name, scenario_csv));

  std::vector<std::vector<std::pair<long, ChoiceScenario>>> pending(ds.respondents.size());
  for (std::size_t row = 0; row < stab.rows.size(); ++row) {
    const auto& fields = stab.rows[row];
    if (fields.size() != stab.header.size())
      throw ValidationError("row " + std::to_string(row + 2) + " of " + scenario_csv +
                            " has the wrong field count");
    const std::string& rid = fields[static_cast<std::size_t>(sid_col)];
    auto it = index_of.find(rid);
    if (it == index_of.end())
      throw ReferentialError("scenario table references unknown respondent '" + rid + "'");
    ChoiceScenario s;
    s.attributes.resize(static_cast<Eigen::Index>(attr_cols.size()));
    for (std::size_t a = 0; a < attr_cols.size(); ++a)
      s.attributes[static_cast<Eigen::Index>(a)] =
          parse_double(fields[static_cast<std::size_t>(attr_cols[a])],
                       "respondent " + rid + ", attribute " +
                           ds.meta.scenario_attribute_names[a]);
    long chosen = parse_long(fields[static_cast<std::size_t>(chosen_col)],
                             "respondent " + rid + ", chosen");
    if (chosen < 0 || chosen >= spec.alternatives)
      throw ValidationError("respondent " + rid + ": chosen alternative " +
                            std::to_string(chosen) + " outside 0.." +
                            std::to_string(spec.alternatives - 1));
    s.chosen = static_cast<int>(chosen);
    long order = parse_long(fields[static_cast<std::size_t>(sidx_col)],
                            "respondent " + rid + ", scenario_index");
    pending[it->second].emplace_back(order, std::move(s));
  }

  for (std::size_t i = 0; i < ds.respondents.size(); ++i) {
    auto& list = pending[i];
    if (list.empty())
      throw ReferentialError("respondent '" + ds.respondents[i].id +
                             "' has no scenario rows (at least one is required)");
    std::stable_sort(list.begin(), list.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [order, s] : list) ds.respondents[i].scenarios.push_back(std::move(s));
  }
  return ds;
}

void save_dataset(const Dataset& dataset, const std::string& dir) {
  std::string rpath = dir + "/respondents.csv";
  std::string spath = dir + "/scenarios.csv";

  std::ostringstream r;
  std::vector<std::string> header = {"respondent_id"};
  header.insert(header.end(), dataset.meta.covariate_names.begin(),
                dataset.meta.covariate_names.end());
  header.insert(header.end(), dataset.meta.indicator_names.begin(),
                dataset.meta.indicator_names.end());
  r << csv_line(header) << "\n";
  for (const auto& resp : dataset.respondents) {
    std::vector<std::string> fields = {resp.id};
    for (Eigen::Index i = 0; i < resp.covariates.size(); ++i)
      fields.push_back(format_double(resp.covariates[i]));
    for (int v : resp.indicators)
      fields.push_back(v == kMissingIndicator ? std::string() : std::to_string(v));
    r << csv_line(fields) << "\n";
  }
  write_file_atomic(rpath, r.str());

  std::ostringstream s;
  header = {"respondent_id", "scenario_index"};
  header.insert(header.end(), dataset.meta.scenario_attribute_names.begin(),
                dataset.meta.scenario_attribute_names.end());
  header.push_back("chosen");
  s << csv_line(header) << "\n";
  for (const auto& resp : dataset.respondents) {
    for (std::size_t t = 0; t < resp.scenarios.size(); ++t) {
      std::vector<std::string> fields = {resp.id, std::to_string(t)};
      const auto& sc = resp.scenarios[t];
      for (Eigen::Index a = 0; a < sc.attributes.size(); ++a)
        fields.push_back(format_double(sc.attributes[a]));
      fields.push_back(std::to_string(sc.chosen));
      s << csv_line(fields) << "\n";
    }
  }
  write_file_atomic(spath, s.str());
}

std::string ValidationReport::to_string() const {
  std::ostringstream out;
  out << violations.size() << " violation" << (violations.size() == 1 ? "" : "s") << "\n";
  for (const auto& v : violations)
    out << "  respondent " << v.respondent_id << " [" << v.field << "]: " << v.message << "\n";
  return out.str();
}

ValidationReport validate(const Dataset& dataset, const ModelSpec& spec) {
  ValidationReport report;
  auto add = [&](const std::string& id, const std::string& field, const std::string& msg) {
    report.violations.push_back({id, field, msg});
  };

  auto spec_inds = spec.indicators();
  if (dataset.meta.indicator_names.size() != spec_inds.size()) {
    add("-", "meta.indicators", "dataset declares " +
                                    std::to_string(dataset.meta.indicator_names.size()) +
                                    " indicators, model spec declares " +
                                    std::to_string(spec_inds.size()));
  } else {
    for (std::size_t h = 0; h < spec_inds.size(); ++h) {
      if (dataset.meta.indicator_names[h] != spec_inds[h].name)
        add("-", "meta.indicators",
            "indicator " + std::to_string(h) + " is '" + dataset.meta.indicator_names[h] +
                "', spec expects '" + spec_inds[h].name + "'");
      else if (dataset.meta.categories[h] != spec_inds[h].categories)
        add("-", "meta.categories",
            "indicator '" + spec_inds[h].name + "' category count mismatch");
    }
  }

  std::set<std::string> ids;
  const auto n_cov = dataset.meta.covariate_names.size();
  const auto n_attr = dataset.meta.scenario_attribute_names.size();
  for (const auto& r : dataset.respondents) {
    if (!ids.insert(r.id).second) add(r.id, "id", "duplicate respondent id");
    if (static_cast<std::size_t>(r.covariates.size()) != n_cov)
      add(r.id, "covariates", "length " + std::to_string(r.covariates.size()) +
                                  ", expected " + std::to_string(n_cov));
    if (r.indicators.size() != dataset.meta.indicator_names.size()) {
      add(r.id, "indicators", "length " + std::to_string(r.indicators.size()) +
                                  ", expected " +
                                  std::to_string(dataset.meta.indicator_names.size()));
    } else {
      for (std::size_t h = 0; h < r.indicators.size(); ++h) {
        int v = r.indicators[h];
        if (v == kMissingIndicator) {
          if (!spec.options.allow_missing_indicators)
            add(r.id, dataset.meta.indicator_names[h], "missing response");
        } else if (v < 1 || v > dataset.meta.categories[h]) {
          add(r.id, dataset.meta.indicator_names[h],
              "value " + std::to_string(v) + " outside 1.." +
                  std::to_string(dataset.meta.categories[h]));
        }
      }
    }
    if (r.scenarios.empty()) add(r.id, "scenarios", "no choice scenarios");
    for (std::size_t t = 0; t < r.scenarios.size(); ++t) {
      const auto& s = r.scenarios[t];
      if (static_cast<std::size_t>(s.attributes.size()) != n_attr)
        add(r.id, "scenario " + std::to_string(t),
            "attribute length " + std::to_string(s.attributes.size()) + ", expected " +
                std::to_string(n_attr));
      if (s.chosen < 0 || s.chosen >= dataset.meta.alternatives)
        add(r.id, "scenario " + std::to_string(t),
            "chosen alternative " + std::to_string(s.chosen) + " outside 0.." +
                std::to_string(dataset.meta.alternatives - 1));
    }
  }
  return report;
}

Eigen::VectorXd Bindings::membership_design(const Respondent& r) const {
  Eigen::VectorXd z(membership_design_dim());
  int at = 0;
  if (membership_intercept) z[at++] = 1.0;
  for (int idx : membership_indices) z[at++] = r.covariates[idx];
  return z;
}

Bindings bind(const ModelSpec& spec, const DatasetMeta& meta) {
  spec.check();
  Bindings b;
  b.membership_intercept = spec.membership.intercept;
  auto covariate_index = [&](const std::string& name, const std::string& where) {
    int idx = meta.covariate_index(name);
    if (idx < 0)
      throw SchemaError("covariate '" + name + "' (" + where + ") is not in the dataset");
    return idx;
  };
  for (const auto& name : spec.membership.covariates)
    b.membership_indices.push_back(covariate_index(name, "membership"));

  b.latent_dims = spec.latent_count();
  for (const auto& lv : spec.latent_variables) {
    std::vector<int> idx;
    for (const auto& name : lv.structural_covariates)
      idx.push_back(covariate_index(name, "structural model of " + lv.name));
    b.structural_indices.push_back(std::move(idx));
  }

  auto scen_index = [&](const std::string& name) {
    for (std::size_t i = 0; i < meta.scenario_attribute_names.size(); ++i)
      if (meta.scenario_attribute_names[i] == name) return static_cast<int>(i);
    return -1;
  };
  std::map<std::string, int> latent_index;
  for (int g = 0; g < spec.latent_count(); ++g)
    latent_index[spec.latent_variables[static_cast<std::size_t>(g)].name] = g;

  for (int q = 0; q < spec.classes; ++q) {
    const auto& cc = spec.choice_for_class(q);
    ClassChoiceBindings cb;
    std::set<std::string> random(cc.random_coefficients.begin(), cc.random_coefficients.end());
    auto resolve = [&](const std::string& name) {
      ClassChoiceBindings::Term term;
      term.name = name;
      int si = scen_index(name);
      if (si >= 0) {
        term.index = si;
        term.scenario_level = true;
      } else {
        term.index = covariate_index(name, "utility of class " + std::to_string(q + 1));
        term.scenario_level = false;
      }
      return term;
    };
    for (const auto& name : cc.utility_covariates) {
      if (!random.count(name)) cb.fixed_terms.push_back(resolve(name));
    }
    for (const auto& name : cc.random_coefficients) cb.random_terms.push_back(resolve(name));
    for (const auto& name : cc.latent_in_utility)
      cb.latent_indices.push_back(latent_index.at(name));
    b.max_random_coefs =
        std::max(b.max_random_coefs, static_cast<int>(cb.random_terms.size()));
    b.choice.push_back(std::move(cb));
  }

  for (const auto& ind : spec.indicators()) {
    b.indicator_construct.push_back(ind.construct);
    b.indicator_is_reference.push_back(ind.reference);
    b.categories.push_back(ind.categories);
  }
  return b;
}

}  // namespace lciclv
