#include "eprlab/model_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace epr {

namespace {

using nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& origin, const std::string& what) {
  throw ParseError(origin + ": " + what);
}

/// Converts a byte offset from nlohmann's parse_error into line/column.
std::pair<std::size_t, std::size_t> line_column(const std::string& text,
                                                std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

Rational scalar_from_json(const ordered_json& v, const std::string& origin,
                          const std::string& path, bool exact_mode) {
  if (v.is_string()) {
    try {
      return parse_rational(v.get<std::string>());
    } catch (const ParseError& e) {
      fail(origin, path + ": " + e.what());
    }
  }
  if (v.is_number_integer()) {
    return Rational(static_cast<long>(v.get<long long>()));
  }
  if (v.is_number_float()) {
    if (exact_mode) {
      fail(origin, path + ": exact-mode files must write non-integer probabilities as "
                          "\"p/q\" or decimal strings, not JSON floats");
    }
    Rational r;
    mpq_set_d(r.get_mpq_t(), v.get<double>());
    return r;
  }
  fail(origin, path + ": expected a number or a \"p/q\" string");
}

Axis axis_from_json(const ordered_json& v, const std::string& origin,
                    const std::string& path) {
  if (!v.is_array() || v.size() != 3) {
    fail(origin, path + ": an axis is a 3-vector");
  }
  for (const auto& c : v) {
    if (!c.is_number()) fail(origin, path + ": axis components must be numbers");
  }
  try {
    return Axis(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
  } catch (const PreconditionError& e) {
    fail(origin, path + ": " + e.what());
  }
}

ordered_json scalar_to_json(const Rational& v, bool exact_mode) {
  if (exact_mode) {
    return ordered_json(format_rational(v));
  }
  return ordered_json(v.get_d());
}

}  // namespace

ModelFile parse_model_text(const std::string& text, const std::string& origin) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    fail(origin, "line " + std::to_string(line) + ", column " + std::to_string(column) +
                     ": " + e.what());
  }
  if (!doc.is_object()) fail(origin, "top level must be an object");

  static const std::set<std::string> known = {
      "name",          "mode",          "lambda_weights", "lambda_labels",
      "station1_axes", "station2_axes", "kernels"};
  for (const auto& item : doc.items()) {
    if (!known.count(item.key())) fail(origin, "unknown field '" + item.key() + "'");
  }
  for (const char* required : {"mode", "lambda_weights", "station1_axes",
                               "station2_axes", "kernels"}) {
    if (!doc.contains(required)) {
      fail(origin, std::string("missing field '") + required + "'");
    }
  }

  ModelFile file;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) fail(origin, "name: expected a string");
    file.name = doc["name"].get<std::string>();
  }
  if (!doc["mode"].is_string()) fail(origin, "mode: expected a string");
  file.mode = doc["mode"].get<std::string>();
  if (file.mode != "exact" && file.mode != "float") {
    fail(origin, "mode: must be \"exact\" or \"float\"");
  }
  const bool exact_mode = file.mode == "exact";

  const auto& weights = doc["lambda_weights"];
  if (!weights.is_array() || weights.empty()) {
    fail(origin, "lambda_weights: expected a nonempty array");
  }
  for (std::size_t i = 0; i < weights.size(); ++i) {
    file.lambda_weights.push_back(scalar_from_json(
        weights[i], origin, "lambda_weights[" + std::to_string(i) + "]", exact_mode));
  }

  if (doc.contains("lambda_labels")) {
    const auto& labels = doc["lambda_labels"];
    if (!labels.is_array() || labels.size() != file.lambda_weights.size()) {
      fail(origin, "lambda_labels: expected one label per lambda");
    }
    for (const auto& l : labels) {
      if (!l.is_string()) fail(origin, "lambda_labels: expected strings");
      file.lambda_labels.push_back(l.get<std::string>());
    }
  }

  for (const char* key : {"station1_axes", "station2_axes"}) {
    const auto& axes = doc[key];
    if (!axes.is_array() || axes.empty()) {
      fail(origin, std::string(key) + ": expected a nonempty array of axes");
    }
    auto& target = key == std::string("station1_axes") ? file.station1_axes
                                                       : file.station2_axes;
    for (std::size_t i = 0; i < axes.size(); ++i) {
      target.push_back(axis_from_json(axes[i], origin,
                                      std::string(key) + "[" + std::to_string(i) + "]"));
    }
  }

  const auto& kernels = doc["kernels"];
  const std::size_t n1 = file.station1_axes.size();
  const std::size_t n2 = file.station2_axes.size();
  const std::size_t nl = file.lambda_weights.size();
  if (!kernels.is_array() || kernels.size() != n1) {
    fail(origin, "kernels: expected one entry per station-1 axis");
  }
  for (std::size_t i = 0; i < n1; ++i) {
    const auto& row = kernels[i];
    if (!row.is_array() || row.size() != n2) {
      fail(origin, "kernels[" + std::to_string(i) + "]: expected one entry per station-2 axis");
    }
    for (std::size_t j = 0; j < n2; ++j) {
      const auto& per_lambda = row[j];
      if (!per_lambda.is_array() || per_lambda.size() != nl) {
        fail(origin, "kernels[" + std::to_string(i) + "][" + std::to_string(j) +
                         "]: expected one entry per lambda");
      }
      for (std::size_t l = 0; l < nl; ++l) {
        const auto& cell = per_lambda[l];
        const std::string path = "kernels[" + std::to_string(i) + "][" +
                                 std::to_string(j) + "][" + std::to_string(l) + "]";
        if (!cell.is_array() || cell.size() != 4) {
          fail(origin, path + ": expected four probabilities (uu, ud, du, dd)");
        }
        for (std::size_t c = 0; c < 4; ++c) {
          file.kernel_entries.push_back(scalar_from_json(
              cell[c], origin, path + "[" + std::to_string(c) + "]", exact_mode));
        }
      }
    }
  }
  return file;
}

ModelFile parse_model_path(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_model_text(buffer.str(), path);
}

std::string serialize_model(const ModelFile& file) {
  const bool exact_mode = file.mode == "exact";
  ordered_json doc;
  doc["name"] = file.name;
  doc["mode"] = file.mode;
  doc["lambda_weights"] = ordered_json::array();
  for (const Rational& w : file.lambda_weights) {
    doc["lambda_weights"].push_back(scalar_to_json(w, exact_mode));
  }
  if (!file.lambda_labels.empty()) {
    doc["lambda_labels"] = file.lambda_labels;
  }
  auto axes_to_json = [](const std::vector<Axis>& axes) {
    ordered_json out = ordered_json::array();
    for (const Axis& a : axes) {
      out.push_back({a.direction[0], a.direction[1], a.direction[2]});
    }
    return out;
  };
  doc["station1_axes"] = axes_to_json(file.station1_axes);
  doc["station2_axes"] = axes_to_json(file.station2_axes);

  const std::size_t n1 = file.station1_axes.size();
  const std::size_t n2 = file.station2_axes.size();
  const std::size_t nl = file.lambda_weights.size();
  ordered_json kernels = ordered_json::array();
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < n1; ++i) {
    ordered_json row = ordered_json::array();
    for (std::size_t j = 0; j < n2; ++j) {
      ordered_json per_lambda = ordered_json::array();
      for (std::size_t l = 0; l < nl; ++l) {
        ordered_json cell = ordered_json::array();
        for (std::size_t c = 0; c < 4; ++c) {
          cell.push_back(scalar_to_json(file.kernel_entries[cursor++], exact_mode));
        }
        per_lambda.push_back(std::move(cell));
      }
      row.push_back(std::move(per_lambda));
    }
    kernels.push_back(std::move(row));
  }
  doc["kernels"] = std::move(kernels);
  return doc.dump(2) + "\n";
}

namespace {

template <class S>
S commit(const Rational& v);

template <>
Rational commit<Rational>(const Rational& v) {
  return v;
}
template <>
double commit<double>(const Rational& v) {
  return v.get_d();
}

template <class S>
HiddenVariableModel<S> materialize_impl(const ModelFile& file) {
  std::vector<S> weights;
  weights.reserve(file.lambda_weights.size());
  for (const Rational& w : file.lambda_weights) weights.push_back(commit<S>(w));

  const std::size_t nl = file.lambda_weights.size();
  std::vector<JointDistribution<S>> kernels;
  kernels.reserve(file.kernel_entries.size() / 4);
  std::size_t base = 0;
  for (std::size_t i = 0; i < file.station1_axes.size(); ++i) {
    for (std::size_t j = 0; j < file.station2_axes.size(); ++j) {
      for (std::size_t l = 0; l < nl; ++l, base += 4) {
        try {
          kernels.emplace_back(commit<S>(file.kernel_entries[base]),
                               commit<S>(file.kernel_entries[base + 1]),
                               commit<S>(file.kernel_entries[base + 2]),
                               commit<S>(file.kernel_entries[base + 3]));
        } catch (const PreconditionError& e) {
          throw ParseError("kernels[" + std::to_string(i) + "][" + std::to_string(j) +
                           "][" + std::to_string(l) + "]: " + e.what());
        }
      }
    }
  }
  try {
    // The file nests kernels as [axis1][axis2][lambda]; the model's flat
    // layout matches that order.
    return HiddenVariableModel<S>(
        SampleSpace(nl, file.lambda_labels), Measure<S>(std::move(weights)),
        file.station1_axes, file.station2_axes, std::move(kernels));
  } catch (const PreconditionError& e) {
    throw ParseError(std::string("lambda_weights: ") + e.what());
  }
}

}  // namespace

template <>
HiddenVariableModel<Rational> materialize<Rational>(const ModelFile& file) {
  return materialize_impl<Rational>(file);
}

template <>
HiddenVariableModel<double> materialize<double>(const ModelFile& file) {
  return materialize_impl<double>(file);
}

HiddenVariableModel<double> to_float_model(const HiddenVariableModel<Rational>& model) {
  std::vector<double> weights;
  for (std::size_t l = 0; l < model.n_lambda(); ++l) {
    weights.push_back(model.prior().weight(l).get_d());
  }
  std::vector<JointDistribution<double>> kernels;
  for (std::size_t i = 0; i < model.station1_axes().size(); ++i) {
    for (std::size_t j = 0; j < model.station2_axes().size(); ++j) {
      for (std::size_t l = 0; l < model.n_lambda(); ++l) {
        const auto& k = model.kernel(i, j, l);
        JointDistribution<double> out;
        for (int a = 0; a < 2; ++a) {
          for (int b = 0; b < 2; ++b) out.p[a][b] = k.p[a][b].get_d();
        }
        kernels.push_back(out);
      }
    }
  }
  // Float weights of an exact measure can miss exact normalization only
  // by representation error, well inside the float-mode slack.
  return HiddenVariableModel<double>(SampleSpace(model.n_lambda()), Measure<double>(weights),
                                     model.station1_axes(), model.station2_axes(),
                                     std::move(kernels));
}

}  // namespace epr
