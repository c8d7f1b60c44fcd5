#pragma once

#include "nq1/imfoliation.hpp"
#include "nq1/lie2.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <variant>
#include <vector>

namespace nq1 {

class ParseError : public Error {
public:
  ParseError(int line, int col, const std::string& msg)
      : Error(std::to_string(line) + ":" + std::to_string(col) + ": " + msg), line(line), col(col) {}
  int line;
  int col;
};

/// Result of evaluating an expression: a function or a vector field.
using Value = std::variant<Function, VectorField>;

struct DistributionBlock {
  std::string name;
  std::string q;  // referenced q_field, empty if none
  std::vector<VectorField> gens;
};

struct IMFoliationBlock {
  std::string name;
  std::string algebroid;  // algebroid block, or q_field to extract from
  std::vector<VectorField> b;
  std::vector<VectorField> f;
  std::vector<int> complement;  // 0-based; empty means greedy
  std::map<std::tuple<int, int, int>, Poly> nabla;  // (F index, row, col), 0-based
  std::optional<std::vector<std::vector<Poly>>> flat_frame;  // rows
};

struct Lie2Block {
  std::string name;
  StrictLie2Algebra algebra;
};

struct ActionBlock {
  std::string name;
  std::string algebra;
  std::string q;
  Lie2Action action;
};

struct Settings {
  std::optional<int> samples;
  std::optional<std::uint64_t> seed;
  std::optional<int> max_xi_degree;
  std::optional<int> max_base_degree;
  std::optional<std::vector<int>> fiber_coords;  // 0-based
};

template <class T>
struct Named {
  std::string name;
  T value;
};

/// Parsed input file. Names may be empty for unnamed blocks; lookups by
/// empty name return the first block of the kind.
struct Document {
  std::optional<Signature> manifold;
  std::vector<Named<LieAlgebroidData>> algebroids;
  std::vector<Named<VectorField>> q_fields;
  std::vector<Named<VectorField>> fields;
  std::vector<DistributionBlock> distributions;
  std::vector<IMFoliationBlock> imfoliations;
  std::vector<Lie2Block> lie2algebras;
  std::vector<ActionBlock> actions;
  Settings settings;

  bool empty() const;
  Signature signature() const;

  const LieAlgebroidData* find_algebroid(const std::string& name) const;
  const VectorField* find_q(const std::string& name) const;
  const StrictLie2Algebra* find_lie2(const std::string& name) const;
  /// Q of a block reference: a q_field, or build_q of an algebroid. Throws
  /// Error when nothing matches.
  VectorField resolve_q(const std::string& name) const;
  /// Algebroid of an imfoliation reference.
  LieAlgebroidData resolve_algebroid(const std::string& name) const;
};

Document parse_document(std::string_view text);

/// Parses one expression over the given signature; `env` supplies named
/// fields.
Value parse_expression(std::string_view text, Signature sig, const std::map<std::string, VectorField>& env = {});
VectorField parse_vector_field(std::string_view text, Signature sig,
                               const std::map<std::string, VectorField>& env = {});

/// Canonical text. parse_document(render(d)) renders to the same text.
std::string render(const Document& d);
std::string render_algebroid_block(const LieAlgebroidData& a, const std::string& name = {});
std::string render_q_block(const VectorField& q, const std::string& name = {});

/// Classical triple of an imfoliation block (complement filled in).
IMFoliation to_imfoliation(const Document& d, const IMFoliationBlock& b);

}  // namespace nq1
