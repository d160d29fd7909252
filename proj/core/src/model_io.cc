#include <nlohmann/json.hpp>

#include "gscp/error.h"
#include "gscp/instance_io.h"
#include "gscp/neural.h"

namespace gscp {

namespace {

using json = nlohmann::json;

[[noreturn]] void malformed(const std::string& why) {
  throw Error(ErrorCode::kMalformedFile, "malformed model file: " + why);
}

json matrix_json(const Matrix<float>& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    rows.push_back(json(std::vector<float>(row.begin(), row.end())));
  }
  return rows;
}

Matrix<float> matrix_from(const json& j, int rows, int cols, const char* what) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows) {
    malformed(std::string(what) + " should have " + std::to_string(rows) + " rows");
  }
  Matrix<float> m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const json& row = j[r];
    if (!row.is_array() || static_cast<int>(row.size()) != cols) {
      malformed(std::string(what) + " row " + std::to_string(r) + " should have " +
                std::to_string(cols) + " entries");
    }
    for (int c = 0; c < cols; ++c) {
      if (!row[c].is_number()) malformed(std::string(what) + " holds a non-number");
      m(r, c) = row[c].get<float>();
    }
  }
  return m;
}

std::vector<float> vector_from(const json& j, int size, const char* what) {
  if (!j.is_array() || static_cast<int>(j.size()) != size) {
    malformed(std::string(what) + " should have " + std::to_string(size) + " entries");
  }
  std::vector<float> v(size);
  for (int k = 0; k < size; ++k) {
    if (!j[k].is_number()) malformed(std::string(what) + " holds a non-number");
    v[k] = j[k].get<float>();
  }
  return v;
}

const json& field(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) malformed(std::string("missing field '") + key + "'");
  return obj[key];
}

json loss_json(const LossConfig& c) {
  return {{"alpha", c.alpha}, {"beta", c.beta}, {"gamma", c.gamma}, {"omega", c.omega},
          {"penalty_form", std::string(penalty_form_name(c.penalty))}, {"bce_reduction", "mean"}};
}

}  // namespace

std::string model_to_string(const GnnModel& model) {
  const ModelConfig& c = model.config;
  json doc;
  doc["format_version"] = kModelFormatVersion;
  doc["config"] = {{"in_dim", c.in_dim},
                   {"hidden_dim", c.hidden_dim},
                   {"sage_layers", c.sage_layers},
                   {"dropout_rate", c.dropout_rate},
                   {"seed", c.seed},
                   {"aggregate", "mean"}};
  doc["feature_schema"] = {{"version", model.feature_schema}, {"names", model.feature_names}};
  json sage = json::array();
  json stats = json::array();
  for (std::size_t l = 0; l < model.params.sage.size(); ++l) {
    const SageParams<float>& p = model.params.sage[l];
    sage.push_back({{"weight", matrix_json(p.weight)},
                    {"bias", p.bias},
                    {"bn_scale", p.bn_scale},
                    {"bn_shift", p.bn_shift}});
    stats.push_back({{"mean", model.running_mean[l]}, {"var", model.running_var[l]}});
  }
  doc["parameters"] = {{"sage", sage},
                       {"fc_weight", matrix_json(model.params.fc_weight)},
                       {"fc_bias", model.params.fc_bias},
                       {"out_weight", matrix_json(model.params.out_weight)},
                       {"out_bias", model.params.out_bias}};
  doc["batchnorm_running_stats"] = stats;
  doc["training_fingerprint"] = {{"seed", model.fingerprint.seed},
                                 {"epochs", model.fingerprint.epochs},
                                 {"loss_config", loss_json(model.fingerprint.loss)}};
  return doc.dump(1) + "\n";
}

GnnModel model_from_string(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    malformed(std::string("not valid JSON: ") + e.what());
  }
  const json& version = field(doc, "format_version");
  if (!version.is_string()) malformed("format_version must be a string");
  if (version.get<std::string>() != kModelFormatVersion) {
    throw Error(ErrorCode::kVersionMismatch,
                "unsupported model format_version '" + version.get<std::string>() + "'");
  }
  GnnModel model;
  try {
    const json& cfg = field(doc, "config");
    ModelConfig& c = model.config;
    c.in_dim = field(cfg, "in_dim").get<int>();
    c.hidden_dim = field(cfg, "hidden_dim").get<int>();
    c.sage_layers = field(cfg, "sage_layers").get<int>();
    c.dropout_rate = field(cfg, "dropout_rate").get<double>();
    c.seed = field(cfg, "seed").get<std::uint64_t>();
    if (field(cfg, "aggregate").get<std::string>() != "mean") malformed("unknown aggregate");
    try {
      c.validate();
    } catch (const Error& e) {
      malformed(e.what());
    }

    const json& schema = field(doc, "feature_schema");
    model.feature_schema = field(schema, "version").get<std::string>();
    model.feature_names = field(schema, "names").get<std::vector<std::string>>();
    if (static_cast<int>(model.feature_names.size()) != c.in_dim) {
      malformed("feature_schema.names must list in_dim names");
    }

    const json& params = field(doc, "parameters");
    const json& sage = field(params, "sage");
    const json& stats = field(doc, "batchnorm_running_stats");
    if (!sage.is_array() || static_cast<int>(sage.size()) != c.sage_layers ||
        !stats.is_array() || static_cast<int>(stats.size()) != c.sage_layers) {
      malformed("expected one parameter and statistics record per SAGE layer");
    }
    const int h = c.hidden_dim;
    int in = c.in_dim;
    for (int l = 0; l < c.sage_layers; ++l) {
      SageParams<float> p;
      p.weight = matrix_from(field(sage[l], "weight"), 2 * in, h, "sage weight");
      p.bias = vector_from(field(sage[l], "bias"), h, "sage bias");
      p.bn_scale = vector_from(field(sage[l], "bn_scale"), h, "bn_scale");
      p.bn_shift = vector_from(field(sage[l], "bn_shift"), h, "bn_shift");
      model.params.sage.push_back(std::move(p));
      model.running_mean.push_back(vector_from(field(stats[l], "mean"), h, "running mean"));
      model.running_var.push_back(vector_from(field(stats[l], "var"), h, "running var"));
      for (float v : model.running_var.back()) {
        if (!(v > 0.0f)) malformed("running variances must be positive");
      }
      in = h;
    }
    model.params.fc_weight = matrix_from(field(params, "fc_weight"), h, h, "fc_weight");
    model.params.fc_bias = vector_from(field(params, "fc_bias"), h, "fc_bias");
    model.params.out_weight = matrix_from(field(params, "out_weight"), h, 1, "out_weight");
    model.params.out_bias = vector_from(field(params, "out_bias"), 1, "out_bias");

    const json& fp = field(doc, "training_fingerprint");
    model.fingerprint.seed = field(fp, "seed").get<std::uint64_t>();
    model.fingerprint.epochs = field(fp, "epochs").get<int>();
    const json& lc = field(fp, "loss_config");
    LossConfig& loss = model.fingerprint.loss;
    loss.alpha = field(lc, "alpha").get<double>();
    loss.beta = field(lc, "beta").get<double>();
    loss.gamma = field(lc, "gamma").get<double>();
    loss.omega = field(lc, "omega").get<double>();
    loss.penalty = parse_penalty_form(field(lc, "penalty_form").get<std::string>());
  } catch (const json::exception& e) {
    malformed(std::string("field has the wrong type: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kMalformedFile) throw;
    malformed(e.what());
  }
  return model;
}

void save_model(const GnnModel& model, const std::filesystem::path& path) {
  write_text_file(path, model_to_string(model));
}

GnnModel load_model(const std::filesystem::path& path) {
  return model_from_string(read_text_file(path));
}

}  // namespace gscp
