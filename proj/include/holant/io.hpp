#pragma once

// JSON formats for signatures, signature sets, grids, gadgets, transforms,
// matrix lists and graphs. Complex numbers are [re, im] pairs.

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "holant/grid.hpp"
#include "holant/holo.hpp"
#include "holant/hom.hpp"
#include "holant/span.hpp"
#include "json.hpp"

namespace holant::io {

using Json = nlohmann::ordered_json;

/// Malformed input. The message names the source and either a line/column
/// (syntax) or a JSON pointer (structure).
class FormatError : public HolantError {
 public:
  using HolantError::HolantError;
};

Json parse_json(std::string_view text, std::string_view source = "<input>");
Json read_json_file(const std::string& path);
/// Two-space indented with a trailing newline.
std::string dump(const Json& j);
void write_json_file(const std::string& path, const Json& j);

Json complex_to_json(Complex z);
Complex complex_from_json(const Json& j, const std::string& where = "");

/// A signature as read, remembering the symbool form when one was used.
struct SignatureDoc {
  MixedTensor tensor = MixedTensor::scalar(0);
  std::optional<SymBoolSignature> symbool;
};

Json signature_to_json(const MixedTensor& t);
Json signature_to_json(const SignatureDoc& d);
/// Symbool signatures are Boolean (q = 2).
SignatureDoc signature_from_json(const Json& j, const std::string& where = "");

/// {"q": int, "signatures": [{"name": str, <signature fields>}, ...]}
struct SignatureSetDoc {
  SignatureSet set;
  std::map<std::string, SymBoolSignature> symbool;
};

Json signature_set_to_json(const SignatureSet& s);
Json signature_set_to_json(const SignatureSetDoc& d);
SignatureSetDoc signature_set_from_json(const Json& j, const std::string& where = "");

/// Vertices carry "left"/"right" when written; on reading they may be
/// omitted if `sigs` supplies the shapes. A wire end is written [-1, w].
Json grid_to_json(const SignatureGrid& g);
SignatureGrid grid_from_json(const Json& j, const SignatureSet* sigs = nullptr, const std::string& where = "");

/// {"profile": [l, r], "terms": [{"coefficient": c, "grid": grid}, ...]}
Json gadget_to_json(const QuantumGadget& k);
QuantumGadget gadget_from_json(const Json& j, const SignatureSet* sigs = nullptr, const std::string& where = "");

/// {"q": int, "matrix": [[c, ...], ...]}
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, const std::string& where = "");

/// {"q": int, "matrices": [[[c, ...], ...], ...]}
Json matrix_list_to_json(int q, const std::vector<Matrix>& ms);
std::vector<Matrix> matrix_list_from_json(const Json& j, const std::string& where = "");

/// {"n": int, "edges": [[u, v], ...]}, plus "loops": true when allowed.
Json graph_to_json(const SimpleGraph& g);
SimpleGraph graph_from_json(const Json& j, const std::string& where = "");

/// A flat object mapping names of the first set to names of the second.
Json bijection_to_json(const Bijection& b);
Bijection bijection_from_json(const Json& j, const std::string& where = "");

}  // namespace holant::io
