#include "asimkit/model.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <utility>

#include "json.hpp"

#include "asimkit/error.hpp"
#include "asimkit/rng.hpp"

namespace asimkit {

using nlohmann::json;

Model::Model(std::vector<std::string> domain) : domain_(std::move(domain)), empty_(domain_.size()) {
  for (std::size_t i = 0; i < domain_.size(); ++i) {
    if (!index_.emplace(domain_[i], i).second) throw InputError("duplicate element '" + domain_[i] + "'");
  }
}

std::optional<std::size_t> Model::index_of(std::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void Model::declare_relation(const std::string& rel) {
  relations_.try_emplace(rel, std::vector<Bits>(size(), Bits(size())));
}

void Model::declare_predicate(const std::string& pred) { predicates_.try_emplace(pred, Bits(size())); }

void Model::add_edge(const std::string& rel, std::size_t from, std::size_t to) {
  if (from >= size() || to >= size()) throw PreconditionError("edge endpoint out of range");
  declare_relation(rel);
  relations_[rel][from].set(to);
}

void Model::set_pred(const std::string& pred, std::size_t element, bool value) {
  if (element >= size()) throw PreconditionError("element out of range");
  declare_predicate(pred);
  predicates_[pred][element] = value;
}

const Bits& Model::successors(const std::string& rel, std::size_t from) const {
  auto it = relations_.find(rel);
  if (it == relations_.end()) return empty_;
  return it->second.at(from);
}

bool Model::related(const std::string& rel, std::size_t from, std::size_t to) const {
  return successors(rel, from).test(to);
}

bool Model::holds(const std::string& pred, std::size_t element) const { return extension(pred).test(element); }

const Bits& Model::extension(const std::string& pred) const {
  auto it = predicates_.find(pred);
  if (it == predicates_.end()) return empty_;
  return it->second;
}

std::vector<std::string> Model::relation_symbols() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : relations_) out.push_back(k);
  return out;
}

std::vector<std::string> Model::predicate_symbols() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : predicates_) out.push_back(k);
  return out;
}

// ---------------------------------------------------------------------------
// Guard paths

Bits guard_image(const Model& m, const Guards& guards, const Bits& from) {
  Bits cur = from;
  for (const auto& rel : guards) {
    Bits next(m.size());
    for (auto i = cur.find_first(); i != Bits::npos; i = cur.find_next(i)) next |= m.successors(rel, i);
    cur = std::move(next);
  }
  return cur;
}

Bits guard_endpoints(const Model& m, const Guards& guards, std::size_t from) {
  if (from >= m.size()) throw PreconditionError("start element out of range");
  Bits start(m.size());
  start.set(from);
  return guard_image(m, guards, start);
}

Bits guard_preimage(const Model& m, const Guards& guards, const Bits& target) {
  Bits cur = target;
  for (auto it = guards.rbegin(); it != guards.rend(); ++it) {
    Bits prev(m.size());
    for (std::size_t w = 0; w < m.size(); ++w)
      if (m.successors(*it, w).intersects(cur)) prev.set(w);
    cur = std::move(prev);
  }
  return cur;
}

std::vector<std::size_t> guard_path(const Model& m, const Guards& guards, std::size_t from, std::size_t to) {
  // Layered reachability forward, then walk back choosing any predecessor
  // that lies on a layer reaching `to`.
  std::vector<Bits> layers;
  Bits cur(m.size());
  cur.set(from);
  layers.push_back(cur);
  for (const auto& rel : guards) {
    Bits next(m.size());
    for (auto i = cur.find_first(); i != Bits::npos; i = cur.find_next(i)) next |= m.successors(rel, i);
    cur = next;
    layers.push_back(cur);
  }
  if (!layers.back().test(to)) return {};
  std::vector<std::size_t> path(guards.size() + 1);
  path.back() = to;
  for (std::size_t k = guards.size(); k-- > 0;) {
    const Bits& layer = layers[k];
    for (auto i = layer.find_first(); i != Bits::npos; i = layer.find_next(i)) {
      if (m.related(guards[k], i, path[k + 1])) {
        path[k] = i;
        break;
      }
    }
  }
  return path;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

bool symbol_ok(const std::string& s, char prefix) {
  if (s.size() < 2 || s[0] != prefix) return false;
  return std::all_of(s.begin() + 1, s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::size_t element_at(const Model& m, const json& j, const std::string& path) {
  if (!j.is_string()) throw InputError(path + ": expected an element name");
  auto idx = m.index_of(j.get<std::string>());
  if (!idx) throw InputError(path + ": unknown element '" + j.get<std::string>() + "'");
  return *idx;
}

}  // namespace

Model parse_model(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("model: malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("model: document must be an object");
  if (!doc.contains("domain") || !doc["domain"].is_array()) throw InputError("model.domain: expected an array");
  std::vector<std::string> domain;
  for (std::size_t i = 0; i < doc["domain"].size(); ++i) {
    const auto& e = doc["domain"][i];
    if (!e.is_string()) throw InputError("model.domain[" + std::to_string(i) + "]: expected a string");
    domain.push_back(e.get<std::string>());
  }
  if (domain.empty()) throw InputError("model.domain: must not be empty");
  Model m(std::move(domain));
  for (const auto& key : {"relations", "predicates"}) {
    if (doc.contains(key) && !doc[key].is_object()) throw InputError(std::string("model.") + key + ": expected an object");
  }
  for (const auto& [key, _] : doc.items()) {
    if (key != "domain" && key != "relations" && key != "predicates")
      throw InputError("model." + key + ": unknown field");
  }
  if (doc.contains("relations")) {
    for (const auto& [rel, pairs] : doc["relations"].items()) {
      const std::string base = "model.relations." + rel;
      if (!symbol_ok(rel, 'R')) throw InputError(base + ": relation symbols must look like R<k>");
      if (!pairs.is_array()) throw InputError(base + ": expected an array of pairs");
      m.declare_relation(rel);
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        const std::string p = base + "[" + std::to_string(i) + "]";
        if (!pairs[i].is_array() || pairs[i].size() != 2) throw InputError(p + ": expected a pair");
        m.add_edge(rel, element_at(m, pairs[i][0], p + "[0]"), element_at(m, pairs[i][1], p + "[1]"));
      }
    }
  }
  if (doc.contains("predicates")) {
    for (const auto& [pred, elems] : doc["predicates"].items()) {
      const std::string base = "model.predicates." + pred;
      if (!symbol_ok(pred, 'P')) throw InputError(base + ": predicate symbols must look like P<k>");
      if (!elems.is_array()) throw InputError(base + ": expected an array of elements");
      m.declare_predicate(pred);
      for (std::size_t i = 0; i < elems.size(); ++i)
        m.set_pred(pred, element_at(m, elems[i], base + "[" + std::to_string(i) + "]"));
    }
  }
  return m;
}

std::string model_to_json(const Model& m, int indent) {
  json doc;
  doc["domain"] = m.domain();
  json rels = json::object();
  for (const auto& rel : m.relation_symbols()) {
    std::vector<std::pair<std::string, std::string>> pairs;
    for (std::size_t a = 0; a < m.size(); ++a) {
      const Bits& row = m.successors(rel, a);
      for (auto b = row.find_first(); b != Bits::npos; b = row.find_next(b)) pairs.emplace_back(m.name(a), m.name(b));
    }
    std::sort(pairs.begin(), pairs.end());
    json arr = json::array();
    for (auto& [a, b] : pairs) arr.push_back({a, b});
    rels[rel] = std::move(arr);
  }
  json preds = json::object();
  for (const auto& pred : m.predicate_symbols()) {
    std::vector<std::string> elems;
    const Bits& ext = m.extension(pred);
    for (auto a = ext.find_first(); a != Bits::npos; a = ext.find_next(a)) elems.push_back(m.name(a));
    std::sort(elems.begin(), elems.end());
    preds[pred] = elems;
  }
  doc["relations"] = std::move(rels);
  doc["predicates"] = std::move(preds);
  return doc.dump(indent);
}

Model read_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open model file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_model(ss.str());
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Random generation

static std::vector<std::string> element_names(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("w" + std::to_string(i));
  return names;
}

Model random_model(std::size_t n, const std::vector<std::string>& rels, const std::vector<std::string>& preds,
                   double edge_prob, double pred_prob, std::uint64_t seed) {
  if (n == 0) throw PreconditionError("random_model needs at least one element");
  if (edge_prob < 0 || edge_prob > 1 || pred_prob < 0 || pred_prob > 1)
    throw PreconditionError("probabilities must lie in [0,1]");
  Rng rng(seed);
  Model m(element_names(n));
  for (const auto& r : rels) {
    m.declare_relation(r);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (rng.bernoulli(edge_prob)) m.add_edge(r, a, b);
  }
  for (const auto& p : preds) {
    m.declare_predicate(p);
    for (std::size_t a = 0; a < n; ++a)
      if (rng.bernoulli(pred_prob)) m.set_pred(p, a);
  }
  return m;
}

Model random_preorder_model(std::size_t n, const std::string& rel, const std::vector<std::string>& preds,
                            double edge_prob, double pred_prob, std::uint64_t seed) {
  Model base = random_model(n, {rel}, preds, edge_prob, pred_prob, seed);
  // Reflexive-transitive closure by Warshall over bit rows.
  std::vector<Bits> reach(n, Bits(n));
  for (std::size_t a = 0; a < n; ++a) {
    reach[a] = base.successors(rel, a);
    reach[a].set(a);
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t a = 0; a < n; ++a)
      if (reach[a].test(k)) reach[a] |= reach[k];
  Model m(base.domain());
  m.declare_relation(rel);
  for (std::size_t a = 0; a < n; ++a)
    for (auto b = reach[a].find_first(); b != Bits::npos; b = reach[a].find_next(b)) m.add_edge(rel, a, b);
  for (const auto& p : preds) {
    m.declare_predicate(p);
    for (std::size_t a = 0; a < n; ++a) {
      if (!base.holds(p, a)) continue;
      for (auto b = reach[a].find_first(); b != Bits::npos; b = reach[a].find_next(b)) m.set_pred(p, b);
    }
  }
  return m;
}

}  // namespace asimkit
