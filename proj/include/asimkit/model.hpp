#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "asimkit/bits.hpp"

namespace asimkit {

/// Finite structure interpreting binary relations R<k> and unary
/// predicates P<k>. Elements are addressed by their position in the domain.
/// Symbols the model does not mention are read as empty.
class Model {
 public:
  Model() = default;
  explicit Model(std::vector<std::string> domain);

  std::size_t size() const { return domain_.size(); }
  const std::vector<std::string>& domain() const { return domain_; }
  const std::string& name(std::size_t i) const { return domain_.at(i); }
  std::optional<std::size_t> index_of(std::string_view name) const;

  void add_edge(const std::string& rel, std::size_t from, std::size_t to);
  void set_pred(const std::string& pred, std::size_t element, bool value = true);
  /// Registers a symbol with an empty interpretation, so it is listed on save.
  void declare_relation(const std::string& rel);
  void declare_predicate(const std::string& pred);

  /// Successor row of `from`; an all-zero row for unknown symbols.
  const Bits& successors(const std::string& rel, std::size_t from) const;
  bool related(const std::string& rel, std::size_t from, std::size_t to) const;
  bool holds(const std::string& pred, std::size_t element) const;
  /// Extension of a predicate; all-zero for unknown symbols.
  const Bits& extension(const std::string& pred) const;

  std::vector<std::string> relation_symbols() const;
  std::vector<std::string> predicate_symbols() const;

  friend bool operator==(const Model&, const Model&) = default;

 private:
  std::vector<std::string> domain_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::map<std::string, std::vector<Bits>> relations_;
  std::map<std::string, Bits> predicates_;
  Bits empty_;
};

struct PointedModel {
  Model model;
  std::size_t point = 0;
};

using Guards = std::vector<std::string>;

/// Endpoints of guard paths from . S_1 . S_2 ... S_m . starting at `from`.
Bits guard_endpoints(const Model& m, const Guards& guards, std::size_t from);
/// Union of guard_endpoints over a set of start elements.
Bits guard_image(const Model& m, const Guards& guards, const Bits& from);
/// Elements from which some guard path ends inside `target`.
Bits guard_preimage(const Model& m, const Guards& guards, const Bits& target);
/// One guard path from `from` to `to` (both included), or empty if none.
std::vector<std::size_t> guard_path(const Model& m, const Guards& guards, std::size_t from, std::size_t to);

/// Parses the model JSON document; errors name the offending JSON path.
Model parse_model(std::string_view json_text);
/// Canonical JSON: domain as given, pairs and predicate lists sorted.
std::string model_to_json(const Model& m, int indent = -1);
Model read_model_file(const std::string& path);

/// Seeded generator: every potential edge and membership is drawn
/// independently. Elements are named w0, w1, ...
Model random_model(std::size_t n, const std::vector<std::string>& rels, const std::vector<std::string>& preds,
                   double edge_prob, double pred_prob, std::uint64_t seed);

/// Like random_model but the single relation `rel` is made reflexive and
/// transitive and every predicate upward closed along it.
Model random_preorder_model(std::size_t n, const std::string& rel, const std::vector<std::string>& preds,
                            double edge_prob, double pred_prob, std::uint64_t seed);

}  // namespace asimkit
