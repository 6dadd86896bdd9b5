#pragma once

#include <string>
#include <vector>

#include "eprlab/model.hpp"
#include "eprlab/numeric.hpp"

namespace epr {

/// A model file, parsed but not yet committed to an arithmetic mode.
/// Probabilities are held exactly: ratio/decimal strings and integers
/// parse to the rational they denote, JSON floats (float-mode files only)
/// to their exact binary value.
struct ModelFile {
  std::string name;
  std::string mode = "float";  // "exact" or "float": the file's declared mode
  std::vector<Rational> lambda_weights;
  std::vector<std::string> lambda_labels;  // empty or one per lambda
  std::vector<Axis> station1_axes;
  std::vector<Axis> station2_axes;
  // Flattened kernel table, four entries (uu, ud, du, dd) per
  // (axis1, axis2, lambda) in that index order.
  std::vector<Rational> kernel_entries;

  std::size_t n_lambda() const { return lambda_weights.size(); }
};

/// Parses a model document.  Diagnostics carry line/column positions for
/// syntax errors and field paths for schema violations; unknown fields
/// are rejected.
ModelFile parse_model_text(const std::string& text, const std::string& origin = "<text>");
ModelFile parse_model_path(const std::string& path);

/// Canonical serialized form: fixed field order, probabilities as "p/q"
/// strings in exact mode and shortest-round-trip numbers in float mode.
/// serialize(parse(x)) is idempotent.
std::string serialize_model(const ModelFile& file);

/// Commits the parsed file to an arithmetic mode.  Model invariants
/// (normalization, kernel rows) are enforced here by the constructors.
template <class S>
HiddenVariableModel<S> materialize(const ModelFile& file);

template <>
HiddenVariableModel<Rational> materialize<Rational>(const ModelFile& file);
template <>
HiddenVariableModel<double> materialize<double>(const ModelFile& file);

/// Float-mode copy of any model (used by the sampler, which works in
/// double precision).
HiddenVariableModel<double> to_float_model(const HiddenVariableModel<Rational>& model);

}  // namespace epr
